"""Exceções do motor cKç"""


class CkcError(Exception):
    """Erro base de todo o motor"""


class TermSyntaxError(CkcError):
    """Texto fora da gramática de termos"""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (offset {offset})")
        self.reason = message
        self.offset = offset


class EvaluationError(CkcError):
    """Falha ao avaliar um guarda ou uma chamada aritmética"""


class UnboundVariableError(EvaluationError):
    """Variável sem valor no binding"""

    def __init__(self, name: str) -> None:
        super().__init__(f"unbound variable {name}")
        self.name = name


class SortMismatchError(EvaluationError):
    """Operando do tipo errado (ex.: lt entre símbolos)"""


class ZeroDivisionEvalError(EvaluationError):
    """Divisão por zero nunca vira um falso silencioso"""


class TranslationError(CkcError):
    """Tradução parcial que não se aplica ao termo"""


class NoRuleAppliesError(TranslationError):
    """Nenhuma regra da tradução casa com o nó indicado"""

    def __init__(self, translation_id: str, path: tuple[int, ...]) -> None:
        where = ".".join(str(i) for i in path) or "root"
        super().__init__(f"translation {translation_id}: no rule applies at {where}")
        self.translation_id = translation_id
        self.path = path


class TargetConformanceError(TranslationError):
    """O resultado da tradução não pertence à linguagem alvo"""


class LanguageMismatchError(CkcError):
    """Tradução usada entre linguagens que não são as suas"""


class UnknownIdError(CkcError):
    """Identificador inexistente no registro"""


class BudgetError(CkcError):
    """Orçamento de busca inválido"""


class KnowingError(CkcError):
    """Subconjunto de concepções que não cabe em um único conceito"""


class PackValidationError(CkcError):
    """Pacote inválido; carrega a lista de erros (local, motivo)"""

    def __init__(self, errors: list[tuple[str, str]]) -> None:
        lines = "; ".join(f"{where}: {reason}" for where, reason in errors)
        super().__init__(f"{len(errors)} validation error(s): {lines}")
        self.errors = errors


class TraceValidationError(PackValidationError):
    """Arquivo de traço inválido"""


class ReplayError(CkcError):
    """Passo de uma testemunha que não se reproduz sobre o termo corrente"""


class PathError(CkcError):
    """Caminho de aprendizagem que viola a alternância desestabiliza/resolve"""
