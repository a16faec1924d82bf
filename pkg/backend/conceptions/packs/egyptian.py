"""Decomposição gulosa em frações unitárias (maior fração unitária primeiro)"""

from __future__ import annotations

from fractions import Fraction

from ..terms import Compound, Term, number_value


def greedy_steps(q) -> list[tuple[Fraction, Fraction]]:
    """
    Expansão passo a passo: [(fração unitária emitida, resto exato)].

    Para q = n/d emite 1/ceil(d/n) e continua sobre o resto até zerar.
    """
    q = Fraction(q)
    if not 0 < q <= 1:
        raise ValueError(f"{q} is outside (0, 1]")
    steps = []
    remainder = q
    while remainder:
        unit = Fraction(1, -(-remainder.denominator // remainder.numerator))
        remainder -= unit
        steps.append((unit, remainder))
    return steps


def egypt_decompose(q) -> list[Fraction]:
    """4055/4093 -> [1/2, 1/3, 1/7, 1/69, 1/30650, 1/10098761225]"""
    return [unit for unit, _ in greedy_steps(q)]


def units_from_term(term: Term) -> list[Fraction]:
    """Lê as frações acumuladas em (greedy (unit (unit (units) u1) u2) resto)."""
    if not isinstance(term, Compound) or term.head != "greedy":
        raise ValueError(f"{term} is not a greedy decomposition state")
    units = []
    acc = term.args[0]
    while isinstance(acc, Compound) and acc.head == "unit":
        acc, unit = acc.args
        units.append(number_value(unit))
    return list(reversed(units))
