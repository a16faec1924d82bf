"""
Módulo do registro: linguagens, traduções, concepções e problemas nomeados de um
ou mais pacotes, já validados. O registro é imutável depois de carregado.
"""

# cSpell: words ckc

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .conception import (
    Conception,
    Control,
    MembershipPattern,
    Operator,
    ProblemSet,
    Prototype,
    apply_operator,
    assess,
    matches_membership,
)
from .exceptions import (
    EvaluationError,
    LanguageMismatchError,
    NoRuleAppliesError,
    PackValidationError,
    TranslationError,
    UnknownIdError,
)
from .languages import (
    ComposedTranslation,
    Language,
    Translation,
    TranslationRule,
    compose,
    conforms,
    identity_translation,
)
from .serializers import PackSerializer, flatten_errors
from .terms import Compound, Term, subterms
from .utils import Scope, Verdict

logger = logging.getLogger(__name__)

PACKS_DIR = Path(__file__).resolve().parent / "packs"
BUILTIN_PREFIX = "builtin:"


@dataclass(frozen=True)
class Problem:
    """Problema nomeado, enunciado em uma linguagem do registro"""

    id: str
    term: Term
    language: str
    description: str = ""


@dataclass(frozen=True)
class Registry:
    """
    Registro em memória. Os dicionários são ordenados por id e somente leitura;
    c_mu guarda as concepções de referência (uma por pacote).
    """

    languages: Mapping[str, Language]
    translations: Mapping[str, Translation | ComposedTranslation]
    conceptions: Mapping[str, Conception]
    problems: Mapping[str, Problem]
    c_mu: tuple[str, ...] = ()
    packs: tuple[str, ...] = ()
    fixtures: Mapping[str, dict] = field(default_factory=dict)
    descriptions: Mapping[str, str] = field(default_factory=dict)

    def language(self, language_id: str) -> Language:
        return self._lookup(self.languages, "language", language_id)

    def translation(self, translation_id: str):
        if translation_id not in self.translations and translation_id.startswith("id_"):
            # Identidade implícita id_<L>
            language_id = translation_id[3:]
            if language_id in self.languages:
                return identity_translation(self.languages[language_id])
        return self._lookup(self.translations, "translation", translation_id)

    def conception(self, conception_id: str) -> Conception:
        return self._lookup(self.conceptions, "conception", conception_id)

    def problem(self, problem_id: str) -> Problem:
        return self._lookup(self.problems, "problem", problem_id)

    def conception_language(self, conception: Conception) -> Language:
        return self.language(conception.language)

    def is_reference(self, conception_id: str) -> bool:
        return conception_id in self.c_mu

    def translations_between(self, source: str, target: str) -> list:
        """Traduções declaradas de source para target, em ordem de id."""
        return [
            translation
            for translation in self.translations.values()
            if translation.source == source and translation.target == target
        ]

    def translation_between(self, source: str, target: str):
        """Identidade quando as linguagens coincidem; senão a primeira declarada (ou None)."""
        declared = self.translations_between(source, target)
        if declared:
            return declared[0]
        if source == target:
            return identity_translation(self.language(source))
        return None

    @staticmethod
    def _lookup(table: Mapping, kind: str, key: str):
        try:
            return table[key]
        except KeyError as e:
            raise UnknownIdError(f"unknown {kind} id {key}") from e


def _frozen(items: Iterable) -> Mapping:
    return MappingProxyType(dict(sorted(((item.id, item) for item in items), key=lambda kv: kv[0])))


# ================================================================================================ #
#                                        CONSTRUÇÃO DO PACOTE                                      #
# ================================================================================================ #
class _Problems(list):
    """Acumula erros (local, motivo) sem interromper a validação"""

    def add(self, where: str, reason: str) -> None:
        self.append((where, reason))


def _duplicates(section: str, items: list, problems: _Problems) -> None:
    seen: set[str] = set()
    for item in items:
        if item["id"] in seen:
            problems.add(f"{section}.{item['id']}", "duplicate id")
        seen.add(item["id"])


def _foreign_heads(language: Language, pattern) -> list[str]:
    """Cabeças de compostos fora da assinatura (ou com aridade errada)."""
    found = []
    heads = language.heads
    for _, sub in subterms(pattern):
        if not isinstance(sub, Compound):
            continue
        arity = heads.get(sub.head)
        if arity is None:
            found.append(f"head {sub.head} is not in language {language.id}")
        elif arity != len(sub.args):
            found.append(
                f"head {sub.head} has arity {arity} in {language.id}, got {len(sub.args)}"
            )
    return found


def _build_languages(attrs, problems: _Problems) -> dict[str, Language]:
    languages = {}
    for data in attrs["languages"]:
        languages[data["id"]] = Language(
            id=data["id"],
            signature=tuple(sorted(data["signature"].items())),
            atom_sorts=frozenset(data["atom_sorts"]),
            max_digits=data["max_digits"],
            description=data["description"],
        )
    _duplicates("languages", attrs["languages"], problems)
    return languages


def _build_translations(attrs, languages, problems: _Problems) -> dict:
    translations: dict = {}
    for data in attrs["translations"]:
        where = f"translations.{data['id']}"
        source, target = languages.get(data["source"]), languages.get(data["target"])
        for key, language in (("source", source), ("target", target)):
            if language is None:
                problems.add(f"{where}.{key}", f"unknown language {data[key]}")
        if source is None or target is None:
            continue
        if "compose" in data:
            composed = _compose_declared(data, translations, problems)
            if composed is not None:
                translations[data["id"]] = composed
            continue
        rules = []
        for index, rule in enumerate(data["rules"]):
            for reason in _foreign_heads(source, rule["lhs"]):
                problems.add(f"{where}.rules[{index}].lhs", reason)
            for reason in _foreign_heads(target, rule["rhs"]):
                problems.add(f"{where}.rules[{index}].rhs", reason)
            rules.append(TranslationRule(lhs=rule["lhs"], rhs=rule["rhs"], guard=rule["guard"]))
        translations[data["id"]] = Translation(
            id=data["id"],
            source=source.id,
            target=target.id,
            rules=tuple(rules),
            source_language=source,
            target_language=target,
        )
    _duplicates("translations", attrs["translations"], problems)
    return translations


def _compose_declared(data, translations, problems: _Problems):
    """Composição declarada; só referencia traduções declaradas antes dela."""
    where = f"translations.{data['id']}.compose"
    steps = []
    for step_id in data["compose"]:
        if step_id not in translations:
            problems.add(where, f"unknown translation {step_id} (declare it before use)")
            return None
        steps.append(translations[step_id])
    composed = steps[0]
    try:
        for step in steps[1:]:
            composed = compose(composed, step)
    except LanguageMismatchError as e:
        problems.add(where, str(e))
        return None
    if (composed.source, composed.target) != (data["source"], data["target"]):
        problems.add(
            where,
            f"chain maps {composed.source}->{composed.target}, "
            f"declared {data['source']}->{data['target']}",
        )
        return None
    if isinstance(composed, Translation):
        composed = ComposedTranslation(composed.id, composed.source, composed.target, (composed,))
    return replace(composed, id=data["id"])


def _build_conception(data, language: Language, problems: _Problems) -> Conception:
    where = f"conceptions.{data['id']}"
    prototypes = tuple(
        Prototype(name=p["name"], term=p["term"]) for p in data["problems"]["prototypes"]
    )
    members = tuple(
        MembershipPattern(pattern=m["pattern"], guard=m["guard"])
        for m in data["problems"]["membership"]
    )
    operators = tuple(
        Operator(id=o["id"], lhs=o["lhs"], rhs=o["rhs"], guard=o["guard"])
        for o in data["operators"]
    )
    controls = tuple(
        Control(
            id=c["id"],
            scope=Scope(c["scope"]),
            pattern=c["pattern"],
            verdict=Verdict(c["verdict"]),
            guard=c["guard"],
        )
        for c in data["controls"]
    )
    for operator in operators:
        for side in ("lhs", "rhs"):
            for reason in _foreign_heads(language, getattr(operator, side)):
                problems.add(f"{where}.operators.{operator.id}.{side}", reason)
    for control in controls:
        for reason in _foreign_heads(language, control.pattern):
            problems.add(f"{where}.controls.{control.id}.pattern", reason)
    for index, member in enumerate(members):
        for reason in _foreign_heads(language, member.pattern):
            problems.add(f"{where}.problems.membership[{index}].pattern", reason)
    return Conception(
        id=data["id"],
        problems=ProblemSet(prototypes=prototypes, membership=members),
        operators=operators,
        language=language.id,
        controls=controls,
        description=data["description"],
    )


def _check_prototypes(conception: Conception, language: Language, problems: _Problems) -> None:
    """Protótipos em L, dentro de P, e operadores/controles avaliáveis sobre eles."""
    where = f"conceptions.{conception.id}"
    for prototype in conception.problems.prototypes:
        at = f"{where}.problems.prototypes.{prototype.name}"
        if not conforms(language, prototype.term):
            problems.add(at, f"{prototype.term} does not conform to language {language.id}")
            continue
        try:
            inside = matches_membership(conception.problems, prototype.term)
            if conception.problems.membership and not inside:
                problems.add(at, "prototype matches no membership pattern")
            for operator in conception.operators:
                for _, result in apply_operator(operator, prototype.term):
                    if not conforms(language, result):
                        problems.add(
                            f"{where}.operators.{operator.id}",
                            f"result {result} on prototype {prototype.name} "
                            f"does not conform to language {language.id}",
                        )
            for scope in Scope:
                assess(conception.controls, prototype.term, scope)
        except EvaluationError as e:
            problems.add(at, str(e))


def _check_translation(translation, terms: list[tuple[str, Term]], problems: _Problems) -> None:
    """A tradução parcial pode não se aplicar, mas nunca pode sair da linguagem alvo."""
    for name, term in terms:
        try:
            translation.apply(term)
        except NoRuleAppliesError:
            continue
        except (TranslationError, EvaluationError) as e:
            problems.add(f"translations.{translation.id}", f"on {name}: {e}")


def build_registry(attrs) -> tuple[Registry | None, list[tuple[str, str]]]:
    """
    Constrói o registro a partir dos dados já validados pelo PackSerializer e
    confere referências cruzadas e conformidade. Devolve (registro, erros).
    """
    problems = _Problems()
    languages = _build_languages(attrs, problems)
    translations = _build_translations(attrs, languages, problems)

    conceptions = {}
    for data in attrs["conceptions"]:
        language = languages.get(data["language"])
        if language is None:
            problems.add(
                f"conceptions.{data['id']}.language", f"unknown language {data['language']}"
            )
            continue
        conception = _build_conception(data, language, problems)
        _check_prototypes(conception, language, problems)
        conceptions[conception.id] = conception
    _duplicates("conceptions", attrs["conceptions"], problems)

    named = {}
    for data in attrs["problems"]:
        where = f"problems.{data['id']}"
        language = languages.get(data["language"])
        if language is None:
            problems.add(f"{where}.language", f"unknown language {data['language']}")
            continue
        if not conforms(language, data["term"]):
            problems.add(where, f"{data['term']} does not conform to language {language.id}")
        named[data["id"]] = Problem(data["id"], data["term"], language.id, data["description"])
    _duplicates("problems", attrs["problems"], problems)

    samples: dict[str, list[tuple[str, Term]]] = {}
    for conception in conceptions.values():
        for prototype in conception.problems.prototypes:
            samples.setdefault(conception.language, []).append(
                (f"{conception.id}/{prototype.name}", prototype.term)
            )
    for problem in named.values():
        samples.setdefault(problem.language, []).append((problem.id, problem.term))
    for translation in translations.values():
        _check_translation(translation, samples.get(translation.source, []), problems)

    c_mu = attrs.get("c_mu")
    if c_mu is not None and c_mu not in conceptions:
        problems.add("c_mu", f"unknown conception {c_mu}")

    if problems:
        return None, list(problems)
    registry = Registry(
        languages=_frozen(languages.values()),
        translations=_frozen(translations.values()),
        conceptions=_frozen(conceptions.values()),
        problems=_frozen(named.values()),
        c_mu=(c_mu,) if c_mu else (),
        packs=(attrs["id"],),
        fixtures=MappingProxyType({attrs["id"]: attrs["fixtures"]}),
        descriptions=MappingProxyType({attrs["id"]: attrs["description"]}),
    )
    return registry, []


# ================================================================================================ #
#                                            CARREGAMENTO                                          #
# ================================================================================================ #
def resolve_pack(source: str | Path) -> Path:
    """Converte `builtin:nome` no arquivo empacotado; demais fontes são caminhos."""
    text = str(source)
    if text.startswith(BUILTIN_PREFIX):
        name = text[len(BUILTIN_PREFIX):]
        path = PACKS_DIR / f"{name}.ckc"
        if not path.is_file():
            raise UnknownIdError(f"unknown builtin pack {name}")
        return path
    return Path(text)


def load_pack_data(data, origin: str = "pack") -> Registry:
    """Valida um pacote já decodificado; tudo ou nada."""
    serializer = PackSerializer(data=data)
    if not serializer.is_valid():
        errors = flatten_errors(serializer.errors)
        logger.debug("Pacote %s rejeitado com %d erro(s)", origin, len(errors))
        raise PackValidationError(errors)
    registry = serializer.save()
    logger.info(
        "Pacote %s carregado: %d linguagens, %d traduções, %d concepções, %d problemas",
        origin,
        len(registry.languages),
        len(registry.translations),
        len(registry.conceptions),
        len(registry.problems),
    )
    return registry


def load_pack(source: str | Path) -> Registry:
    """Lê e valida um arquivo .ckc (ou `builtin:nome`)."""
    path = resolve_pack(source)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise PackValidationError([(str(source), "file not found")]) from e
    except json.JSONDecodeError as e:
        raise PackValidationError([(f"{source}:{e.lineno}:{e.colno}", e.msg)]) from e
    return load_pack_data(data, origin=str(source))


def merge_registries(registries: list[Registry]) -> Registry:
    """Junta vários pacotes em um registro; ids repetidos entre pacotes são rejeitados."""
    if len(registries) == 1:
        return registries[0]
    errors = []
    merged: dict[str, dict] = {
        kind: {} for kind in ("languages", "translations", "conceptions", "problems")
    }
    for registry in registries:
        for kind, table in merged.items():
            for key, value in getattr(registry, kind).items():
                if key in table:
                    errors.append((f"{kind}.{key}", "duplicate id across packs"))
                table[key] = value
    if errors:
        raise PackValidationError(errors)
    fixtures, descriptions = {}, {}
    for registry in registries:
        fixtures.update(registry.fixtures)
        descriptions.update(registry.descriptions)
    return Registry(
        languages=_frozen(merged["languages"].values()),
        translations=_frozen(merged["translations"].values()),
        conceptions=_frozen(merged["conceptions"].values()),
        problems=_frozen(merged["problems"].values()),
        c_mu=tuple(ref for registry in registries for ref in registry.c_mu),
        packs=tuple(pack for registry in registries for pack in registry.packs),
        fixtures=MappingProxyType(fixtures),
        descriptions=MappingProxyType(descriptions),
    )


def load_packs(sources: list[str]) -> Registry:
    return merge_registries([load_pack(source) for source in sources])
