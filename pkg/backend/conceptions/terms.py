"""
Módulo de termos: átomos, compostos, variáveis de padrão e chamadas de avaliação.

Gramática (representação de fio de todos os arquivos):

    term     := SYMBOL | INT | INT '/' POSINT | '(' SYMBOL term* ')'
    pattern  := term | '?' SYMBOL               (apenas em padrões e modelos)
    template := pattern | '@' SYMBOL '(' template* ')'

Racionais são sempre canônicos; um racional inteiro vira IntAtom.
"""

# cSpell: words subterm subterms

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .exceptions import TermSyntaxError
from .utils import IDENTIFIER_RE

Position = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class Symbol:
    """Átomo simbólico"""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class IntAtom:
    """Inteiro sem limite de tamanho"""

    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class RatAtom:
    """Racional exato, nunca inteiro (ver make_number)"""

    value: Fraction

    def __post_init__(self) -> None:
        if self.value.denominator == 1:
            raise ValueError("integral rational must be an IntAtom")

    def __str__(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"


@dataclass(frozen=True, slots=True)
class Compound:
    """Termo composto: cabeça + argumentos ordenados"""

    head: str
    args: tuple = ()

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        if not self.args:
            return f"({self.head})"
        return f"({self.head} {' '.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True, slots=True)
class Var:
    """Variável de padrão (?nome)"""

    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True, slots=True)
class EvalCall:
    """Chamada aritmética embutida em modelos (@op(...))"""

    op: str
    args: tuple = ()

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        return f"@{self.op}({' '.join(str(arg) for arg in self.args)})"


Atom = Union[Symbol, IntAtom, RatAtom]
Term = Union[Symbol, IntAtom, RatAtom, Compound]
Pattern = Union[Symbol, IntAtom, RatAtom, Compound, Var, EvalCall]


def make_number(value: int | Fraction) -> IntAtom | RatAtom:
    """Constrói o átomo numérico canônico para um inteiro ou racional."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers")
    if isinstance(value, int):
        return IntAtom(value)
    value = Fraction(value)
    if value.denominator == 1:
        return IntAtom(value.numerator)
    return RatAtom(value)


def is_number(term) -> bool:
    return isinstance(term, (IntAtom, RatAtom))


def number_value(term) -> Fraction:
    return Fraction(term.value)


# ================================================================================================ #
#                                              PARSER                                              #
# ================================================================================================ #
_IDENT = re.compile(IDENTIFIER_RE)
_NUMBER = re.compile(r"[+-]?[0-9]+(?:/[0-9]+)?")
_DELIMITERS = " \t\r\n()"


class _Parser:
    """Parser descendente recursivo com posição em bytes para os erros"""

    def __init__(self, text: str, allow_vars: bool, allow_eval: bool) -> None:
        self.text = text
        self.pos = 0
        self.allow_vars = allow_vars
        self.allow_eval = allow_eval

    def fail(self, message: str, at: int | None = None):
        at = self.pos if at is None else at
        raise TermSyntaxError(message, len(self.text[:at].encode("utf-8")))

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect_delimiter(self) -> None:
        if self.pos < len(self.text) and self.text[self.pos] not in _DELIMITERS:
            self.fail("invalid token")

    def identifier(self, what: str) -> str:
        found = _IDENT.match(self.text, self.pos)
        if not found:
            self.fail(f"expected {what}")
        self.pos = found.end()
        return found.group()

    def parse(self):
        self.skip_ws()
        if self.pos >= len(self.text):
            self.fail("empty input")
        term = self.term()
        self.skip_ws()
        if self.pos != len(self.text):
            self.fail("trailing input")
        return term

    def term(self):
        self.skip_ws()
        if self.pos >= len(self.text):
            self.fail("unexpected end of input")
        char = self.text[self.pos]
        if char == "(":
            return self.compound()
        if char == ")":
            self.fail("unbalanced parenthesis")
        if char == "?":
            return self.variable()
        if char == "@":
            return self.eval_call()
        return self.atom()

    def compound(self) -> Compound:
        start = self.pos
        self.pos += 1
        self.skip_ws()
        head = self.identifier("head symbol")
        self.expect_delimiter()
        args = self.sequence(")", start)
        return Compound(head, tuple(args))

    def sequence(self, closer: str, start: int) -> list:
        items = []
        while True:
            self.skip_ws()
            if self.pos >= len(self.text):
                self.fail("unbalanced parenthesis", start)
            if self.text[self.pos] == closer:
                self.pos += 1
                return items
            items.append(self.term())

    def variable(self) -> Var:
        if not self.allow_vars:
            self.fail("variables are only legal in patterns and templates")
        self.pos += 1
        name = self.identifier("variable name")
        self.expect_delimiter()
        return Var(name)

    def eval_call(self) -> EvalCall:
        if not self.allow_eval:
            self.fail("eval calls are only legal in templates")
        start = self.pos
        self.pos += 1
        op = self.identifier("eval operator")
        if self.pos >= len(self.text) or self.text[self.pos] != "(":
            self.fail("expected '(' after eval operator")
        self.pos += 1
        args = self.sequence(")", start)
        return EvalCall(op, tuple(args))

    def atom(self):
        start = self.pos
        number = _NUMBER.match(self.text, self.pos)
        if number:
            self.pos = number.end()
            self.expect_delimiter()
            literal = number.group()
            if "/" in literal:
                numerator, denominator = literal.split("/")
                if int(denominator) == 0:
                    self.fail("zero denominator", start)
                return make_number(Fraction(int(numerator), int(denominator)))
            return IntAtom(int(literal))
        name = self.identifier("atom")
        self.expect_delimiter()
        return Symbol(name)


def parse_term(text: str) -> Term:
    """Lê um termo fechado (sem variáveis nem chamadas de avaliação)."""
    return _Parser(text, allow_vars=False, allow_eval=False).parse()


def parse_pattern(text: str) -> Pattern:
    """Lê um padrão: termo com variáveis ?nome."""
    return _Parser(text, allow_vars=True, allow_eval=False).parse()


def parse_template(text: str) -> Pattern:
    """Lê um modelo: padrão que também aceita chamadas @op(...)."""
    return _Parser(text, allow_vars=True, allow_eval=True).parse()


def format_term(term) -> str:
    """Imprime um termo na gramática; parse_term(format_term(t)) == t."""
    return str(term)


# ================================================================================================ #
#                                       POSIÇÕES E SUBTERMOS                                       #
# ================================================================================================ #
def format_position(position: Position) -> str:
    return ".".join(str(index) for index in position) or "root"


def parse_position(text: str) -> Position:
    if text == "root":
        return ()
    return tuple(int(part) for part in text.split("."))


def subterms(term, position: Position = ()) -> Iterator[tuple[Position, object]]:
    """Percorre os subtermos em ordem pré-fixada (mais à esquerda, mais externo)."""
    yield position, term
    if isinstance(term, (Compound, EvalCall)):
        for index, arg in enumerate(term.args):
            yield from subterms(arg, position + (index,))


def subterm_at(term, position: Position):
    for index in position:
        term = term.args[index]
    return term


def replace_at(term, position: Position, replacement):
    """Devolve uma cópia de term com o subtermo em position substituído."""
    if not position:
        return replacement
    index, rest = position[0], position[1:]
    args = list(term.args)
    args[index] = replace_at(args[index], rest, replacement)
    return Compound(term.head, tuple(args))


def variables(term) -> list[str]:
    """Nomes das variáveis na ordem da primeira ocorrência."""
    seen: dict[str, None] = {}
    for _, sub in subterms(term):
        if isinstance(sub, Var):
            seen.setdefault(sub.name, None)
    return list(seen)


def is_ground(term) -> bool:
    return not any(isinstance(sub, (Var, EvalCall)) for _, sub in subterms(term))
