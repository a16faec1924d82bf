"""Módulo que valida os arquivos de pacote (.ckc) e de traço com o Django Rest Framework"""

# cSpell: words serializável

from __future__ import annotations

from rest_framework import serializers

from .exceptions import TermSyntaxError
from .matching import TRUE, guard_problems, parse_guard, template_problems, unbound_variables
from .terms import format_position, format_term, parse_pattern, parse_template, parse_term
from .utils import ATOM_SORTS, IDENTIFIER_RE, REGISTRY_ID_RE, Scope, Verdict


# ================================================================================================ #
#                                         CAMPOS DE TERMOS                                         #
# ================================================================================================ #
class TermField(serializers.CharField):
    """Campo texto lido pela gramática de termos"""

    parser = staticmethod(parse_term)

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            return self.parser(text)
        except TermSyntaxError as e:
            raise serializers.ValidationError(
                f"syntax error at byte {e.offset}: {e.reason}"
            ) from e

    def to_representation(self, value):
        return format_term(value)


class PatternField(TermField):
    """Padrão: aceita variáveis ?nome"""

    parser = staticmethod(parse_pattern)


class TemplateField(TermField):
    """Modelo: aceita variáveis e chamadas @op(...)"""

    parser = staticmethod(parse_template)

    def to_internal_value(self, data):
        template = super().to_internal_value(data)
        problems = template_problems(template)
        if problems:
            raise serializers.ValidationError(problems)
        return template


class GuardField(TermField):
    """Guarda booleana; ausente equivale a `true`"""

    parser = staticmethod(parse_guard)

    def __init__(self, **kwargs):
        kwargs.setdefault("required", False)
        kwargs.setdefault("default", TRUE)
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        guard = super().to_internal_value(data)
        problems = guard_problems(guard)
        if problems:
            raise serializers.ValidationError(problems)
        return guard


def _registry_id(**kwargs):
    return serializers.RegexField(REGISTRY_ID_RE, max_length=128, **kwargs)


def _check_scoping(lhs, *others):
    missing = unbound_variables(lhs, *others)
    if missing:
        raise serializers.ValidationError(
            {"rhs": [f"unbound variable {name}" for name in missing]}
        )


# ================================================================================================ #
#                                            LINGUAGENS                                            #
# ================================================================================================ #
class LanguageSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Serializador de uma linguagem de representação"""

    id = _registry_id()
    description = serializers.CharField(required=False, allow_blank=True, default="")
    signature = serializers.DictField(child=serializers.IntegerField(min_value=0), default=dict)
    atom_sorts = serializers.ListField(
        child=serializers.ChoiceField(choices=ATOM_SORTS), default=list
    )
    max_digits = serializers.IntegerField(
        required=False, allow_null=True, min_value=1, default=None
    )

    def validate_signature(self, value):
        """As cabeças seguem a gramática de identificadores"""
        heads = serializers.RegexField(f"^{IDENTIFIER_RE}$")
        for head in value:
            heads.run_validation(head)
        return value

    def validate(self, attrs):
        if not attrs["signature"] and not attrs["atom_sorts"]:
            raise serializers.ValidationError("language needs at least one head or atom sort")
        return attrs


# ================================================================================================ #
#                                             TRADUÇÕES                                            #
# ================================================================================================ #
class RuleSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Regra de tradução lhs [guarda] -> rhs"""

    lhs = PatternField()
    guard = GuardField()
    rhs = TemplateField()

    def validate(self, attrs):
        _check_scoping(attrs["lhs"], attrs["rhs"], attrs["guard"])
        return attrs


class TranslationSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Tradução por regras ordenadas ou composição declarada de traduções"""

    id = _registry_id()
    description = serializers.CharField(required=False, allow_blank=True, default="")
    source = _registry_id()
    target = _registry_id()
    rules = RuleSerializer(many=True, required=False)
    compose = serializers.ListField(child=_registry_id(), required=False, min_length=2)

    def validate(self, attrs):
        if ("rules" in attrs) == ("compose" in attrs):
            raise serializers.ValidationError("give exactly one of `rules` or `compose`")
        return attrs


# ================================================================================================ #
#                                            CONCEPÇÕES                                            #
# ================================================================================================ #
class PrototypeSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    name = _registry_id()
    term = TermField()


class MembershipSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    pattern = PatternField()
    guard = GuardField()

    def validate(self, attrs):
        missing = unbound_variables(attrs["pattern"], attrs["guard"])
        if missing:
            raise serializers.ValidationError(
                {"guard": [f"unbound variable {name}" for name in missing]}
            )
        return attrs


class ProblemSetSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    prototypes = PrototypeSerializer(many=True)
    membership = MembershipSerializer(many=True, required=False, default=list)


class OperatorSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Operador de R"""

    id = _registry_id()
    lhs = PatternField()
    guard = GuardField()
    rhs = TemplateField()

    def validate(self, attrs):
        _check_scoping(attrs["lhs"], attrs["rhs"], attrs["guard"])
        return attrs


class ControlSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Controle de Σ"""

    id = _registry_id()
    scope = serializers.ChoiceField(choices=[scope.value for scope in Scope])
    pattern = PatternField()
    guard = GuardField()
    verdict = serializers.ChoiceField(
        choices=[Verdict.VALID.value, Verdict.INVALID.value, Verdict.SOLVED.value]
    )

    def validate(self, attrs):
        if attrs["scope"] == Scope.STEP.value and attrs["verdict"] == Verdict.SOLVED.value:
            raise serializers.ValidationError(
                {"verdict": ["step controls emit valid/invalid only"]}
            )
        missing = unbound_variables(attrs["pattern"], attrs["guard"])
        if missing:
            raise serializers.ValidationError(
                {"guard": [f"unbound variable {name}" for name in missing]}
            )
        return attrs


class ConceptionSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Serializador do quádruplo (P, R, L, Σ)"""

    id = _registry_id()
    description = serializers.CharField(required=False, allow_blank=True, default="")
    language = _registry_id()
    problems = ProblemSetSerializer()
    operators = OperatorSerializer(many=True)
    controls = ControlSerializer(many=True)

    def validate(self, attrs):
        errors = {}
        for key in ("operators", "controls"):
            ids = [item["id"] for item in attrs[key]]
            duplicated = sorted({item for item in ids if ids.count(item) > 1})
            if duplicated:
                errors[key] = [f"duplicate id {item}" for item in duplicated]
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class ProblemSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Problema nomeado do registro"""

    id = _registry_id()
    description = serializers.CharField(required=False, allow_blank=True, default="")
    term = TermField()
    language = _registry_id()


class PackSerializer(serializers.Serializer):
    """
    Serializador de um pacote completo.

    Valida a forma de cada seção e, em seguida, as referências cruzadas e a
    conformidade dos termos (ver registry.build_registry). O objeto criado
    pelo save() é o Registry.
    """

    id = _registry_id()
    description = serializers.CharField(required=False, allow_blank=True, default="")
    languages = LanguageSerializer(many=True)
    translations = TranslationSerializer(many=True, required=False, default=list)
    conceptions = ConceptionSerializer(many=True)
    problems = ProblemSerializer(many=True, required=False, default=list)
    c_mu = _registry_id(required=False, allow_null=True, default=None)
    fixtures = serializers.DictField(required=False, default=dict)

    def validate(self, attrs):
        # pylint: disable=import-outside-toplevel
        from .registry import build_registry

        registry, problems = build_registry(attrs)
        if problems:
            errors = {}
            for where, reason in problems:
                errors.setdefault(where, []).append(reason)
            raise serializers.ValidationError(errors)
        attrs["registry"] = registry
        return attrs

    def create(self, validated_data):
        """Método create"""
        return validated_data["registry"]

    def update(self, instance, validated_data):
        """Método update"""
        raise NotImplementedError("packs are immutable after load")


# ================================================================================================ #
#                                               TRAÇOS                                             #
# ================================================================================================ #
class TraceEventSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Evento observado: antes, depois e avaliação opcional"""

    before = TermField()
    after = TermField()
    assessment = serializers.ChoiceField(
        choices=[Verdict.VALID.value, Verdict.INVALID.value, Verdict.SOLVED.value],
        required=False,
        allow_null=True,
        default=None,
    )


class TraceSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Traço de comportamento; aceita também uma lista pura de eventos"""

    events = TraceEventSerializer(many=True, allow_empty=False)

    def to_internal_value(self, data):
        if isinstance(data, list):
            data = {"events": data}
        return super().to_internal_value(data)


def flatten_errors(errors, prefix: str = "") -> list[tuple[str, str]]:
    """Achata o dicionário aninhado de erros do DRF em [(local, motivo)]."""
    flat: list[tuple[str, str]] = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            where = key if key != "non_field_errors" else ""
            flat.extend(flatten_errors(value, _join(prefix, where)))
    elif isinstance(errors, list):
        for index, value in enumerate(errors):
            if isinstance(value, (dict, list)):
                flat.extend(flatten_errors(value, _join(prefix, f"[{index}]")))
            else:
                flat.append((prefix or "pack", str(value)))
    elif errors:
        flat.append((prefix or "pack", str(errors)))
    return flat


def _join(prefix: str, part: str) -> str:
    if not part:
        return prefix
    if not prefix or part.startswith("["):
        return f"{prefix}{part}"
    return f"{prefix}.{part}"


# ================================================================================================ #
#                                      RELATÓRIOS (SAÍDA JSON)                                     #
# ================================================================================================ #
def step_tag(tag) -> dict:
    conception_id, operator_id, position = tag
    return {
        "conception": conception_id,
        "operator": operator_id,
        "position": format_position(position),
    }


class StepRecordSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Passo (antes, depois, rótulo, veredictos de passo)"""

    before = TermField()
    after = TermField()
    tag = serializers.SerializerMethodField()
    step_verdicts = serializers.SerializerMethodField()

    def get_tag(self, obj):
        return step_tag(obj.tag)

    def get_step_verdicts(self, obj):
        return [
            {"control": control, "verdict": verdict.value}
            for control, verdict in obj.step_verdicts
        ]


class SolveResultSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Representação de um SolveResult com a testemunha completa"""

    status = serializers.CharField(source="status.value")
    problem = TermField()
    conceptions = serializers.ListField(child=serializers.CharField())
    witness = serializers.SerializerMethodField()
    final_term = TermField(allow_null=True)
    final_control = serializers.CharField(allow_null=True)
    solved_by = serializers.CharField(allow_null=True)
    states_explored = serializers.IntegerField()
    pruned = serializers.IntegerField()
    invalid_witnessed = serializers.BooleanField()
    steps = StepRecordSerializer(many=True)

    def get_witness(self, obj):
        return [step_tag(tag) for tag in obj.witness]


class RelationReportSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    relation = serializers.CharField(source="relation.value")
    holds = serializers.BooleanField()
    conceptions = serializers.ListField(child=serializers.CharField())
    translations = serializers.ListField(child=serializers.CharField())
    evidence = serializers.DictField()


class ConceptClassSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    id = serializers.CharField()
    members = serializers.ListField(child=serializers.CharField())
    reference = serializers.CharField(allow_null=True)
    translations = serializers.DictField(child=serializers.CharField())
    unrelated = serializers.BooleanField()


class DestabilizationSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    """Evidência de desestabilização: ativação + busca que falhou"""

    holds = serializers.BooleanField()
    representable = serializers.BooleanField()
    activation = serializers.SerializerMethodField()
    invalid_witnessed = serializers.BooleanField()
    result = SolveResultSerializer(allow_null=True)

    def get_activation(self, obj):
        if obj.activation is None:
            return None
        operator_id, position = obj.activation
        return {"operator": operator_id, "position": format_position(position)}


class LearningPathSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    nodes = serializers.ListField(child=serializers.CharField())
    conceptions = serializers.ListField(child=serializers.CharField())
    problems = serializers.ListField(child=serializers.CharField())
    length = serializers.IntegerField()


class PackManifestSerializer(serializers.Serializer):  # pylint: disable=abstract-method
    id = serializers.CharField()
    source = serializers.CharField()
    description = serializers.CharField()
    languages = serializers.ListField(child=serializers.CharField())
    translations = serializers.ListField(child=serializers.CharField())
    conceptions = serializers.ListField(child=serializers.CharField())
    problems = serializers.ListField(child=serializers.CharField())
    c_mu = serializers.CharField(allow_null=True)
    fixtures = serializers.ListField(child=serializers.CharField())
