"""
Módulo de linguagens de representação (L) e de funções de representação f: L' -> L.

Toda relação entre concepções é verificada relativamente a traduções declaradas:
o motor nunca procura "uma" função de representação.
"""

# cSpell: words subterm subterms

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import (
    LanguageMismatchError,
    NoRuleAppliesError,
    TargetConformanceError,
    TranslationError,
)
from .matching import TRUE, eval_pred, instantiate, match_pattern
from .terms import Compound, IntAtom, Pattern, RatAtom, Symbol, Term, Var, variables

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Language:
    """
    Sistema de representação: assinatura (cabeça -> aridade) e tipos de folha.

    max_digits limita os dígitos decimais das folhas numéricas (inteiros,
    numeradores e denominadores); None significa sem limite.
    """

    id: str
    signature: tuple[tuple[str, int], ...]
    atom_sorts: frozenset[str]
    max_digits: int | None = None
    description: str = ""

    @property
    def heads(self) -> dict[str, int]:
        return dict(self.signature)


@dataclass(frozen=True)
class TranslationRule:
    """Regra lhs [guarda] -> rhs; a primeira que casa dispara"""

    lhs: Pattern
    rhs: Pattern
    guard: Pattern = TRUE


@dataclass(frozen=True)
class Translation:
    """Função de representação parcial f: source -> target por regras ordenadas"""

    id: str
    source: str
    target: str
    rules: tuple[TranslationRule, ...]
    source_language: Language | None = field(default=None, compare=False, repr=False)
    target_language: Language | None = field(default=None, compare=False, repr=False)

    @property
    def parts(self) -> tuple[str, ...]:
        return (self.id,)

    def apply(self, term: Term) -> Term:
        if self.source_language is not None and not conforms(self.source_language, term):
            raise TranslationError(
                f"translation {self.id}: {term} does not conform to {self.source}"
            )
        result = self._rewrite(term, ())
        if self.target_language is not None and not conforms(self.target_language, result):
            raise TargetConformanceError(
                f"translation {self.id}: {result} does not conform to {self.target}"
            )
        return result

    def _rewrite(self, term: Term, path: tuple[int, ...]) -> Term:
        for rule in self.rules:
            binding = match_pattern(rule.lhs, term)
            if binding is None or not eval_pred(rule.guard, binding):
                continue
            return instantiate(rule.rhs, self._translate_binding(rule, binding, path))
        if isinstance(term, Compound):
            raise NoRuleAppliesError(self.id, path)
        # Folhas sem regra atravessam a tradução inalteradas
        return term

    def _translate_binding(self, rule, binding, path) -> dict[str, Term]:
        if isinstance(rule.lhs, Var):
            # ?x -> ... recebe o nó inteiro sem recursão
            return binding
        positions = _variable_positions(rule.lhs)
        used = set(variables(rule.rhs))
        return {
            name: self._rewrite(value, path + positions[name])
            for name, value in binding.items()
            if name in used
        }


@dataclass(frozen=True)
class ComposedTranslation:
    """Composição g ∘ f aplicada ponto a ponto"""

    id: str
    source: str
    target: str
    steps: tuple

    @property
    def parts(self) -> tuple[str, ...]:
        return tuple(part for step in self.steps for part in step.parts)

    def apply(self, term: Term) -> Term:
        for step in self.steps:
            term = step.apply(term)
        return term


def _variable_positions(pattern, position=()) -> dict[str, tuple[int, ...]]:
    if isinstance(pattern, Var):
        return {pattern.name: position}
    found: dict[str, tuple[int, ...]] = {}
    if isinstance(pattern, Compound):
        for index, arg in enumerate(pattern.args):
            for name, where in _variable_positions(arg, position + (index,)).items():
                found.setdefault(name, where)
    return found


def _digits_ok(language: Language, value: int) -> bool:
    return language.max_digits is None or len(str(abs(value))) <= language.max_digits


def conforms(language: Language, term) -> bool:
    """True se o termo é representável na linguagem (assinatura e tipos de folha)."""
    if isinstance(term, Compound):
        if language.heads.get(term.head) != len(term.args):
            return False
        return all(conforms(language, arg) for arg in term.args)
    if isinstance(term, Symbol):
        return "symbol" in language.atom_sorts
    if isinstance(term, IntAtom):
        return "int" in language.atom_sorts and _digits_ok(language, term.value)
    if isinstance(term, RatAtom):
        value: Fraction = term.value
        return (
            "rat" in language.atom_sorts
            and _digits_ok(language, value.numerator)
            and _digits_ok(language, value.denominator)
        )
    # Variáveis e chamadas de avaliação não são termos
    return False


def translate(translation, term: Term) -> Term:
    """
    Aplica a tradução de cima para baixo; a primeira regra que casa dispara.

    Subtermos ligados a variáveis do lado esquerdo são traduzidos antes da
    instanciação do lado direito. Levanta NoRuleAppliesError (com o caminho)
    ou TargetConformanceError.
    """
    result = translation.apply(term)
    logger.debug("Tradução %s: %s -> %s", translation.id, term, result)
    return result


def compose(first, second) -> ComposedTranslation:
    """compose(f: L''->L', g: L'->L) devolve g ∘ f: L''->L."""
    if first.target != second.source:
        raise LanguageMismatchError(
            f"cannot compose {first.id} ({first.source}->{first.target}) "
            f"with {second.id} ({second.source}->{second.target})"
        )
    steps = []
    for part in (first, second):
        steps.extend(part.steps if isinstance(part, ComposedTranslation) else (part,))
    return ComposedTranslation(
        id=f"{first.id}>{second.id}",
        source=first.source,
        target=second.target,
        steps=tuple(steps),
    )


def identity_translation(language: Language) -> Translation:
    """Identidade ?x -> ?x restrita à linguagem."""
    return Translation(
        id=f"id_{language.id}",
        source=language.id,
        target=language.id,
        rules=(TranslationRule(lhs=Var("x"), rhs=Var("x")),),
        source_language=language,
        target_language=language,
    )


def check_direction(translation, source: str, target: str) -> None:
    """Garante que a tradução vai de source para target."""
    if translation.source != source or translation.target != target:
        raise LanguageMismatchError(
            f"translation {translation.id} maps {translation.source}->{translation.target}, "
            f"expected {source}->{target}"
        )
