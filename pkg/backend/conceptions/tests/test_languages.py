"""Testes de linguagens e traduções"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conceptions.exceptions import (
    EvaluationError,
    LanguageMismatchError,
    NoRuleAppliesError,
    TargetConformanceError,
    TranslationError,
)
from conceptions.languages import check_direction, compose, conforms, translate
from conceptions.relations import resolve_translation
from conceptions.terms import Compound, Symbol, format_term, make_number, parse_term


def test_conformance(addition, fractions_pack):
    count = addition.language("L_count")
    assert conforms(count, parse_term("(join (count 5) (count 4))"))
    assert not conforms(count, parse_term("(num 39)"))
    assert not conforms(count, parse_term("(count 5 4)"))
    egyptian = fractions_pack.language("L_eg")
    assert conforms(egyptian, parse_term("(parts 999999)"))
    assert not conforms(egyptian, parse_term("(parts 1000000)"))
    assert not conforms(egyptian, parse_term("(times 10 1/5)"))


def test_translation_recurses_into_bound_subterms(addition, fractions_pack):
    f_count2dec = addition.translation("f_count2dec")
    image = translate(f_count2dec, parse_term("(join (count 5) (count 4))"))
    assert format_term(image) == "(add 5 4)"
    f_eg2rat = fractions_pack.translation("f_eg2rat")
    assert format_term(translate(f_eg2rat, parse_term("(times 10 (parts 5))"))) == "(times 10 1/5)"


def test_no_rule_applies_reports_path(triangle):
    f_n2e = triangle.translation("f_N2E")
    with pytest.raises(NoRuleAppliesError) as error:
        translate(f_n2e, parse_term("(readings t0 178 183)"))
    assert error.value.path == ()
    assert error.value.translation_id == "f_N2E"


def test_target_conformance_is_checked(fractions_pack):
    f_rat2eg = fractions_pack.translation("f_rat2eg")
    assert format_term(translate(f_rat2eg, parse_term("1/30650"))) == "(parts 30650)"
    with pytest.raises(TargetConformanceError):
        translate(f_rat2eg, parse_term("1/10098761225"))


def test_identity_is_implicit(addition):
    identity = addition.translation("id_L_dec")
    term = parse_term("(add 16 23)")
    assert translate(identity, term) == term
    assert (identity.source, identity.target) == ("L_dec", "L_dec")


def test_declared_composition(addition):
    f_keys2mu = addition.translation("f_keys2mu")
    assert f_keys2mu.parts == ("f_keys2dec", "f_dec2mu")
    assert format_term(translate(f_keys2mu, parse_term("(keys 16 23)"))) == "(sum nat nat)"


def test_compose_checks_languages(addition):
    f_count2dec = addition.translation("f_count2dec")
    with pytest.raises(LanguageMismatchError):
        compose(f_count2dec, addition.translation("f_count2mu"))
    composed = resolve_translation(addition, "f_count2dec>f_dec2mu")
    assert (composed.source, composed.target) == ("L_count", "L_mu")
    with pytest.raises(LanguageMismatchError):
        check_direction(f_count2dec, "L_dec", "L_count")


def test_leaves_without_rule_pass_through(addition, fractions_pack):
    f_count2dec = addition.translation("f_count2dec")
    assert format_term(translate(f_count2dec, parse_term("(join 5 (count 4))"))) == "(add 5 4)"
    f_rat2eg = fractions_pack.translation("f_rat2eg")
    assert format_term(translate(f_rat2eg, parse_term("(times 10 1/5)"))) == "(times 10 (parts 5))"
    # 2/5 não é fração unitária: atravessa e L_eg a recusa
    with pytest.raises(TargetConformanceError):
        translate(f_rat2eg, parse_term("(times 10 2/5)"))


SYMBOLS = ("nat", "t0", "t1", "once", "same")


def _statements(registry, language_id: str) -> list:
    """Protótipos e problemas nomeados enunciados na linguagem dada."""
    terms = [
        prototype.term
        for conception in registry.conceptions.values()
        if conception.language == language_id
        for prototype in conception.problems.prototypes
    ]
    terms += [p.term for p in registry.problems.values() if p.language == language_id]
    return terms


def _terms(language):
    """Termos aleatórios sobre a assinatura e os tipos de folha da linguagem."""
    leaves = []
    if "int" in language.atom_sorts:
        leaves.append(st.integers(min_value=0, max_value=99999).map(make_number))
    if "rat" in language.atom_sorts:
        leaves.append(st.fractions(min_value=0, max_value=3, max_denominator=60).map(make_number))
    if "symbol" in language.atom_sorts:
        leaves.append(st.sampled_from(SYMBOLS).map(Symbol))
    heads = sorted(language.signature)

    def extend(children):
        return st.sampled_from(heads).flatmap(
            lambda item: st.tuples(*[children] * item[1]).map(
                lambda args, head=item[0]: Compound(head, args)
            )
        )

    return st.recursive(st.one_of(leaves), extend, max_leaves=6)


def _outcome(translation, term):
    try:
        return translate(translation, term)
    except (TranslationError, EvaluationError) as e:
        return type(e)


@given(data=st.data())
def test_composition_is_associative(addition, data):
    keys2dec, dec2count, count2mu = (
        addition.translation(t) for t in ("f_keys2dec", "f_dec2count", "f_count2mu")
    )
    left = compose(compose(keys2dec, dec2count), count2mu)
    right = compose(keys2dec, compose(dec2count, count2mu))
    assert (left.source, left.target) == (right.source, right.target) == ("L_keys", "L_mu")
    assert left.parts == right.parts
    statements = _statements(addition, "L_keys")
    term = data.draw(st.one_of(st.sampled_from(statements), _terms(addition.language("L_keys"))))
    assert _outcome(left, term) == _outcome(right, term)


def test_composition_translates_prototypes(addition):
    keys2mu = compose(
        addition.translation("f_keys2dec"),
        compose(addition.translation("f_dec2count"), addition.translation("f_count2mu")),
    )
    assert format_term(translate(keys2mu, parse_term("(keys 16 23)"))) == "(sum nat nat)"


@pytest.mark.parametrize(
    "translation_id",
    [
        "f_count2dec",
        "f_dec2count",
        "f_keys2dec",
        "f_count2mu",
        "f_dec2mu",
        "f_keys2mu",
        "f_keys2dec>f_dec2count>f_count2mu",
        "f_eg2rat",
        "f_rat2eg",
        "f_eg2rat>f_rat2eg",
        "f_N2E",
        "id_L_eg",
    ],
)
@given(data=st.data())
def test_translations_land_in_the_target_language(all_packs, translation_id, data):
    translation = resolve_translation(all_packs, translation_id)
    source = all_packs.language(translation.source)
    target = all_packs.language(translation.target)
    strategy = _terms(source)
    statements = _statements(all_packs, source.id)
    if statements:
        strategy = st.one_of(st.sampled_from(statements), strategy)
    term = data.draw(strategy)
    try:
        image = translate(translation, term)
    except (TranslationError, EvaluationError):
        return
    assert conforms(target, image)
