"""
Módulo do grafo de aprendizagem: grafo bipartido concepções x problemas com
arestas "resolve" (C -> p) e "desestabiliza" (p -> C), problemas de conflito e
planejamento de caminhos de aprendizagem.
"""

# cSpell: words desestabiliza

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import networkx as nx

from .conception import Conception, apply_operator, membership
from .exceptions import PathError, TranslationError, UnknownIdError
from .languages import Language, conforms, translate
from .serializers import DestabilizationSerializer, SolveResultSerializer
from .solver import Budget, SolveResult, solves
from .terms import Position, Term, format_term
from .utils import EdgeKind, ckc_setting

logger = logging.getLogger(__name__)

CONCEPTION = "conception"
PROBLEM = "problem"


@dataclass(frozen=True)
class Representation:
    """Problema como a concepção o enxerga; translation é None quando direto"""

    term: Term
    translation: str | None = None


@dataclass(frozen=True)
class Destabilization:
    holds: bool
    representable: bool
    activation: tuple[str, Position] | None = None
    result: SolveResult | None = None

    @property
    def invalid_witnessed(self) -> bool:
        return self.result is not None and self.result.invalid_witnessed


@dataclass(frozen=True)
class ConflictProblem:
    problem: str
    destabilization: Destabilization
    solution: SolveResult


@dataclass(frozen=True)
class LearningPath:
    """Sequência alternada C_0, p_1, C_1, ..., p_k, C_k"""

    nodes: tuple[str, ...]

    @property
    def conceptions(self) -> tuple[str, ...]:
        return self.nodes[::2]

    @property
    def problems(self) -> tuple[str, ...]:
        return self.nodes[1::2]

    @property
    def length(self) -> int:
        return len(self.problems)

    def validate(self, graph: LearningGraph) -> None:
        """Levanta PathError se a alternância desestabiliza/resolve não vale."""
        if len(self.nodes) % 2 == 0:
            raise PathError(f"path {self.nodes} does not alternate conception/problem")
        for conception_id in self.conceptions:
            if not graph.graph.has_node((CONCEPTION, conception_id)):
                raise PathError(f"{conception_id} is not a conception node")
        for index, problem_id in enumerate(self.problems):
            before, after = self.conceptions[index], self.conceptions[index + 1]
            destabilized = graph.edge_kind(PROBLEM, problem_id, CONCEPTION, before)
            if destabilized is not EdgeKind.DESTABILIZES:
                raise PathError(f"{problem_id} does not destabilize {before}")
            if graph.edge_kind(CONCEPTION, after, PROBLEM, problem_id) is not EdgeKind.SOLVES:
                raise PathError(f"{after} does not solve {problem_id}")


@dataclass
class LearningGraph:
    """Grafo dirigido do networkx; nós são pares (tipo, id)"""

    graph: nx.DiGraph
    budget: Budget

    def conceptions(self) -> list[str]:
        return sorted(key for kind, key in self.graph.nodes if kind == CONCEPTION)

    def problems(self) -> list[str]:
        return sorted(key for kind, key in self.graph.nodes if kind == PROBLEM)

    def edge_kind(self, source_kind, source, target_kind, target) -> EdgeKind | None:
        data = self.graph.get_edge_data((source_kind, source), (target_kind, target))
        return data["kind"] if data else None

    def edges(self) -> list[tuple[EdgeKind, str, str, dict]]:
        """Arestas (tipo, origem, destino, dados) em ordem determinística."""
        found = [
            (data["kind"], source[1], target[1], data)
            for source, target, data in self.graph.edges(data=True)
        ]
        return sorted(found, key=lambda edge: (edge[0].value, edge[1], edge[2]))

    def solves_edge(self, conception_id: str, problem_id: str) -> dict | None:
        return self.graph.get_edge_data((CONCEPTION, conception_id), (PROBLEM, problem_id))

    def destabilizes_edge(self, problem_id: str, conception_id: str) -> dict | None:
        return self.graph.get_edge_data((PROBLEM, problem_id), (CONCEPTION, conception_id))


# ================================================================================================ #
#                                        DESESTABILIZAÇÃO                                          #
# ================================================================================================ #
def representation_for(conception: Conception, problem, registry) -> Representation | None:
    """
    Conformidade direta ou pertinência a P; senão a primeira tradução declarada
    (por id) da linguagem do problema para a da concepção. None se irrepresentável.
    """
    language = registry.conception_language(conception)
    if conforms(language, problem.term) or membership(conception.problems, problem.term):
        return Representation(problem.term)
    for translation in registry.translations_between(problem.language, conception.language):
        try:
            return Representation(translate(translation, problem.term), translation.id)
        except TranslationError:
            continue
    return None


def _activation(conception: Conception, term: Term):
    for operator in conception.operators:
        for position, _ in apply_operator(operator, term):
            return operator.id, position
    return None


def destabilizes(
    term: Term,
    conception: Conception,
    language: Language,
    budget: Budget | None = None,
    result: SolveResult | None = None,
) -> tuple[bool, Destabilization]:
    """
    p desestabiliza C quando é representável para C, algum operador de C se
    aplica (a solução é concebível) e a busca de {C} não resolve p.
    """
    representable = conforms(language, term) or membership(conception.problems, term)
    if not representable:
        return False, Destabilization(False, False)
    activation = _activation(conception, term)
    if activation is None:
        return False, Destabilization(False, True)
    result = result or solves([conception], term, budget)
    holds = not result.solved
    return holds, Destabilization(holds, True, activation, result)


# ================================================================================================ #
#                                        CONSTRUÇÃO DO GRAFO                                       #
# ================================================================================================ #
def _edge(registry, conception: Conception, problem, budget: Budget):
    representation = representation_for(conception, problem, registry)
    if representation is None:
        return None
    result = solves([conception], representation.term, budget)
    if result.solved:
        return EdgeKind.SOLVES, {
            "kind": EdgeKind.SOLVES,
            "result": result,
            "representation": representation,
            "reinforcing": membership(conception.problems, representation.term),
        }
    # O termo traduzido já conforma a L
    language = registry.conception_language(conception)
    holds, evidence = destabilizes(representation.term, conception, language, budget, result)
    if not holds:
        return None
    return EdgeKind.DESTABILIZES, {
        "kind": EdgeKind.DESTABILIZES,
        "evidence": evidence,
        "representation": representation,
    }


def build_graph(
    registry, budget: Budget | None = None, workers: int | None = None
) -> LearningGraph:
    """
    Calcula as arestas de todos os pares (concepção, problema nomeado)
    representáveis. As concepções de referência não entram no grafo.
    """
    budget = budget or Budget.from_settings()
    graph = nx.DiGraph(budget=budget)
    conceptions = [
        conception
        for conception_id, conception in registry.conceptions.items()
        if not registry.is_reference(conception_id)
    ]
    problems = list(registry.problems.values())
    for conception in conceptions:
        graph.add_node((CONCEPTION, conception.id), kind=CONCEPTION)
    for problem in problems:
        graph.add_node((PROBLEM, problem.id), kind=PROBLEM)

    pairs = [(conception, problem) for conception in conceptions for problem in problems]
    with ThreadPoolExecutor(max_workers=workers or ckc_setting("GRAPH_WORKERS")) as executor:
        edges = list(executor.map(lambda pair: _edge(registry, pair[0], pair[1], budget), pairs))

    for (conception, problem), edge in zip(pairs, edges):
        if edge is None:
            continue
        kind, data = edge
        if kind is EdgeKind.SOLVES:
            graph.add_edge((CONCEPTION, conception.id), (PROBLEM, problem.id), **data)
        else:
            graph.add_edge((PROBLEM, problem.id), (CONCEPTION, conception.id), **data)
    logger.debug(
        "Grafo: %d concepções, %d problemas, %d arestas",
        len(conceptions),
        len(problems),
        graph.number_of_edges(),
    )
    return LearningGraph(graph=graph, budget=budget)


def conflict_problems(
    conception: Conception,
    target: Conception,
    registry,
    budget: Budget | None = None,
) -> list[ConflictProblem]:
    """
    Problemas representáveis para C e para C_t que desestabilizam C e que C_t
    resolve; ordenados pela testemunha de C_t e depois pelo id.
    """
    found = []
    language = registry.conception_language(conception)
    for problem in registry.problems.values():
        mine = representation_for(conception, problem, registry)
        theirs = representation_for(target, problem, registry)
        if mine is None or theirs is None:
            continue
        holds, evidence = destabilizes(mine.term, conception, language, budget)
        if not holds:
            continue
        solution = solves([target], theirs.term, budget)
        if solution.solved:
            found.append(ConflictProblem(problem.id, evidence, solution))
    return sorted(found, key=lambda item: (len(item.solution.witness), item.problem))


def plan_path(source, target, graph: LearningGraph) -> LearningPath | None:
    """
    Caminho alternado mais curto (menos problemas) por busca em largura sobre
    passos desestabiliza-então-resolve; empates pela ordem dos ids.
    """
    start, goal = getattr(source, "id", source), getattr(target, "id", target)
    for node in (start, goal):
        if not graph.graph.has_node((CONCEPTION, node)):
            raise UnknownIdError(f"unknown conception node {node}")
    if start == goal:
        return LearningPath((start,))

    parents: dict[str, tuple[str, str] | None] = {start: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        problems = sorted(
            problem_id
            for (kind, problem_id), _, data in graph.graph.in_edges(
                (CONCEPTION, current), data=True
            )
            if kind == PROBLEM and data["kind"] is EdgeKind.DESTABILIZES
        )
        for problem_id in problems:
            solvers = sorted(
                conception_id
                for (kind, conception_id), _, data in graph.graph.in_edges(
                    (PROBLEM, problem_id), data=True
                )
                if kind == CONCEPTION and data["kind"] is EdgeKind.SOLVES
            )
            for conception_id in solvers:
                if conception_id in parents:
                    continue
                parents[conception_id] = (current, problem_id)
                if conception_id == goal:
                    path = _unwind(parents, goal)
                    path.validate(graph)
                    return path
                queue.append(conception_id)
    return None


def _unwind(parents: dict, goal: str) -> LearningPath:
    nodes = [goal]
    while parents[nodes[-1]] is not None:
        previous, problem_id = parents[nodes[-1]]
        nodes.extend((problem_id, previous))
    return LearningPath(tuple(reversed(nodes)))


# ================================================================================================ #
#                                             EXPORTAÇÃO                                           #
# ================================================================================================ #
def to_json(graph: LearningGraph) -> dict:
    """Nós, arestas e evidências em estrutura serializável (ordem determinística)."""
    nodes = [{"id": key, "kind": CONCEPTION} for key in graph.conceptions()]
    nodes += [{"id": key, "kind": PROBLEM} for key in graph.problems()]
    edges = []
    for kind, source, target, data in graph.edges():
        representation = data["representation"]
        edge = {
            "kind": kind.value,
            "source": source,
            "target": target,
            "representation": format_term(representation.term),
            "translation": representation.translation,
        }
        if kind is EdgeKind.SOLVES:
            edge["reinforcing"] = data["reinforcing"]
            edge["evidence"] = SolveResultSerializer(data["result"]).data
        else:
            edge["evidence"] = DestabilizationSerializer(data["evidence"]).data
        edges.append(edge)
    budget = {"max_depth": graph.budget.max_depth, "max_states": graph.budget.max_states}
    return {"budget": budget, "nodes": nodes, "edges": edges}


def to_dot(graph: LearningGraph) -> str:
    """Concepções em caixas, problemas em elipses; resolve contínua, desestabiliza tracejada."""
    lines = ["digraph learning {", "  rankdir=LR;"]
    for key in graph.conceptions():
        lines.append(f'  "{key}" [shape=box];')
    for key in graph.problems():
        lines.append(f'  "{key}" [shape=ellipse];')
    for kind, source, target, data in graph.edges():
        if kind is EdgeKind.SOLVES:
            label = "solves (reinforcing)" if data["reinforcing"] else "solves"
            lines.append(f'  "{source}" -> "{target}" [label="{label}", style=solid];')
        else:
            lines.append(f'  "{source}" -> "{target}" [label="destabilizes", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
