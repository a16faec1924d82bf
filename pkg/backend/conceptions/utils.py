"""Módulo com variáveis globais, constantes e enums do motor"""

from enum import Enum

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

# Valores padrão quando settings.CKC não define a chave
CKC_DEFAULTS = {
    "BUDGET_DEPTH": 12,
    "BUDGET_STATES": 100000,
    "STRICT_LAST_ACTOR": False,
    "FALSITY_DEPTH": 1,
    "GRAPH_WORKERS": 4,
}

# Identificadores de termos e de objetos do registro
IDENTIFIER_RE = r"[A-Za-z_][A-Za-z0-9_-]*"
REGISTRY_ID_RE = r"^[A-Za-z_][A-Za-z0-9_+\-.]*$"

# Tamanho da tela da calculadora do pacote de adição
SCREEN_DIGITS = 8

ATOM_SORTS = ("symbol", "int", "rat")


class Verdict(str, Enum):
    """
    Enum para os veredictos de uma estrutura de controle.
    """

    VALID = "valid"
    INVALID = "invalid"
    SOLVED = "solved"
    UNDECIDED = "undecided"


class Scope(str, Enum):
    """
    Enum para o escopo de um controle: passo intermediário ou solução.
    """

    STEP = "step"
    SOLUTION = "solution"


class SolveStatus(str, Enum):
    """
    Enum para o estado final de uma busca.
    """

    SOLVED = "solved"
    EXHAUSTED = "exhausted"
    PRUNED_ALL = "pruned-all"


class RelationKind(str, Enum):
    """
    Enum para as relações entre concepções.
    """

    GENERALITY = "generality"
    FALSITY = "falsity"
    SAME_OBJECT = "same-object"


class EdgeKind(str, Enum):
    """
    Enum para as arestas do grafo de aprendizagem.
    """

    SOLVES = "solves"
    DESTABILIZES = "destabilizes"


# Códigos de saída da CLI
EXIT_OK = 0
EXIT_NOT_HOLDS = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3


def ckc_setting(name: str):
    """Lê um parâmetro de settings.CKC, caindo para o padrão do motor."""
    configured = getattr(settings, "CKC", {}) or {}
    value = configured.get(name, CKC_DEFAULTS[name])
    if name == "GRAPH_WORKERS" and value < 1:
        raise ImproperlyConfigured(f"CKC GRAPH_WORKERS must be at least 1, got {value}")
    return value
