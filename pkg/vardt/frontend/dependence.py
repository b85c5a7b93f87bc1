#!/usr/bin/env python3
"""
Per-method static dependence graphs and variable equivalence classes.

Nodes are variable occurrences (name x line).  An edge ``x@L2 -> y@L1``
means the value at x@L2 depends on y@L1, either through data (y@L1 is a
reaching definition of something x@L2 reads) or through control (y@L1 is
the value of a branch condition that decides whether line L2 runs).

Everything here is intra-procedural: a call's result is opaque and only
depends on the arguments handed to it.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .cfg import ENTRY, ControlFlowGraph
from .syntax import (
    Assign, Binary, Bind, Expr, If, IndexAssign, Method, OccurrenceKind, Stmt, Var,
    VarOccurrence, While, feature_base, stmt_expressions, sub_expressions,
)

logger = logging.getLogger(__name__)

DATA = "data"
CONTROL = "control"


@dataclass(frozen=True, order=True)
class Edge:
    source: VarOccurrence
    target: VarOccurrence
    kind: str

    def __str__(self) -> str:
        return f"EDGE {self.source} -> {self.target} {self.kind}"


# --------------------------------------------------------------------------
# Statement facts
# --------------------------------------------------------------------------

def _direct_reads(expr: Expr) -> Tuple[Set[str], List[Bind]]:
    """Variables and bindings read by ``expr`` without entering nested bindings."""
    names: Set[str] = set()
    binds: List[Bind] = []
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        elif isinstance(node, Bind):
            binds.append(node)
        else:
            stack.extend(sub_expressions(node))
    return names, binds


def _all_reads(expr: Expr) -> Set[str]:
    names: Set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        stack.extend(sub_expressions(node))
    return names


def _all_binds(expr: Expr) -> List[Bind]:
    found: List[Bind] = []
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Bind):
            found.append(node)
        stack.extend(sub_expressions(node))
    return found


def condition_value_variable(stmt: Stmt) -> Optional[Tuple[str, OccurrenceKind]]:
    """Name of the variable holding a branch condition's value, if any."""
    if not isinstance(stmt, (If, While)):
        return None
    if isinstance(stmt.cond, Bind):
        return stmt.cond.temp, stmt.cond.kind
    if isinstance(stmt.cond, Var):
        return stmt.cond.name, OccurrenceKind.PROGRAM_VARIABLE
    return None


@dataclass
class MethodFacts:
    """Definitions, uses and reaching definitions of one method."""
    method: Method
    cfg: ControlFlowGraph
    reaching: Dict[int, FrozenSet[VarOccurrence]] = field(default_factory=dict)
    defs: Dict[int, VarOccurrence] = field(default_factory=dict)
    occurrences: Dict[VarOccurrence, VarOccurrence] = field(default_factory=dict)
    def_sites: Set[VarOccurrence] = field(default_factory=set)
    uses_by_line: Dict[int, Set[VarOccurrence]] = field(default_factory=dict)
    use_reaching: Dict[VarOccurrence, Set[VarOccurrence]] = field(default_factory=dict)

    def intern(self, name: str, line: int, kind: OccurrenceKind) -> VarOccurrence:
        occ = VarOccurrence(name, line, kind)
        return self.occurrences.setdefault(occ, occ)

    def occurrences_at(self, line: int) -> List[VarOccurrence]:
        return sorted(o for o in self.occurrences if o.line == line)

    def reaching_defs(self, node: int, name: str) -> List[VarOccurrence]:
        return sorted(d for d in self.reaching.get(node, frozenset()) if d.variable == name)


def analyze_method(method: Method) -> MethodFacts:
    cfg = method.cfg
    if cfg is None:
        from .cfg import build_cfg
        cfg = method.cfg = build_cfg(method)
    facts = MethodFacts(method=method, cfg=cfg)

    gen: Dict[int, Set[VarOccurrence]] = {n: set() for n in cfg.nodes}
    for param in method.params:
        occ = facts.intern(param.name, method.line, OccurrenceKind.PROGRAM_VARIABLE)
        gen[ENTRY].add(occ)
        facts.def_sites.add(occ)
    for node in cfg.statement_nodes():
        stmt = node.stmt
        if isinstance(stmt, (Assign, IndexAssign)):
            occ = facts.intern(stmt.target, node.line, OccurrenceKind.PROGRAM_VARIABLE)
            facts.defs[node.id] = occ
            gen[node.id].add(occ)
            facts.def_sites.add(occ)

    facts.reaching = _solve_reaching_definitions(cfg, gen)

    for node in cfg.statement_nodes():
        stmt = node.stmt
        reads: Set[str] = set()
        for expr in stmt_expressions(stmt):
            reads |= _all_reads(expr)
            for bind in _all_binds(expr):
                temp = facts.intern(bind.temp, node.line, bind.kind)
                facts.def_sites.add(temp)
                facts.uses_by_line.setdefault(node.line, set()).add(temp)
        if isinstance(stmt, IndexAssign):
            reads.add(stmt.target)
        for name in reads:
            occ = facts.intern(name, node.line, OccurrenceKind.PROGRAM_VARIABLE)
            facts.uses_by_line.setdefault(node.line, set()).add(occ)
            reaching = {d for d in facts.reaching_defs(node.id, name) if d != occ or occ not in facts.def_sites}
            facts.use_reaching.setdefault(occ, set()).update(reaching)
    return facts


def _solve_reaching_definitions(cfg: ControlFlowGraph,
                                gen: Dict[int, Set[VarOccurrence]]) -> Dict[int, FrozenSet[VarOccurrence]]:
    """Worklist solver; returns the definitions reaching the *entry* of each node."""
    out: Dict[int, Set[VarOccurrence]] = {n: set() for n in cfg.nodes}
    incoming: Dict[int, Set[VarOccurrence]] = {n: set() for n in cfg.nodes}
    work = deque(sorted(cfg.nodes))
    while work:
        node = work.popleft()
        incoming[node] = set()
        for pred in cfg.pred[node]:
            incoming[node] |= out[pred]
        killed_names = {d.variable for d in gen[node]}
        new_out = set(gen[node]) | {d for d in incoming[node] if d.variable not in killed_names}
        if new_out != out[node]:
            out[node] = new_out
            work.extend(cfg.succ[node])
    return {n: frozenset(s) for n, s in incoming.items()}


# --------------------------------------------------------------------------
# Dependence graph
# --------------------------------------------------------------------------

class DependencyGraph:
    """Occurrence-level data/control dependence graph of a single method."""

    def __init__(self, method: str, facts: Optional[MethodFacts] = None):
        self.method = method
        self.facts = facts
        self.nodes: Dict[VarOccurrence, VarOccurrence] = {}
        self.edges: Set[Edge] = set()
        self.succ: Dict[VarOccurrence, Set[VarOccurrence]] = {}
        self.data_succ: Dict[VarOccurrence, Set[VarOccurrence]] = {}
        self._closure: Dict[VarOccurrence, FrozenSet[VarOccurrence]] = {}

    def add_node(self, occ: VarOccurrence) -> VarOccurrence:
        if occ not in self.nodes:
            self.nodes[occ] = occ
            self.succ[occ] = set()
        return self.nodes[occ]

    def add_edge(self, source: VarOccurrence, target: VarOccurrence, kind: str) -> None:
        if source == target:
            return
        self.add_node(source)
        self.add_node(target)
        self.edges.add(Edge(source, target, kind))
        self.succ[source].add(target)
        if kind == DATA:
            self.data_succ.setdefault(source, set()).add(target)
        self._closure.clear()

    def with_features(self, features: Iterable[Tuple[VarOccurrence, VarOccurrence]]) -> "DependencyGraph":
        """Copy of the graph with predicate-feature nodes hung off their base occurrences."""
        copy = DependencyGraph(self.method, self.facts)
        for occ in self.nodes:
            copy.add_node(occ)
        for edge in self.edges:
            copy.add_edge(edge.source, edge.target, edge.kind)
        for feature, base in features:
            copy.add_edge(feature, base, DATA)
        return copy

    def reachable_from(self, occ: VarOccurrence) -> FrozenSet[VarOccurrence]:
        """Occurrences reachable through one or more edges."""
        if occ not in self._closure:
            seen: Set[VarOccurrence] = set()
            stack = list(self.succ.get(occ, ()))
            while stack:
                node = stack.pop()
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(self.succ.get(node, ()))
            self._closure[occ] = frozenset(seen)
        return self._closure[occ]

    def depends_on(self, x: VarOccurrence, v: VarOccurrence) -> bool:
        """g |- x ~> v"""
        return v in self.reachable_from(x)

    def reaches_any(self, sources: Iterable[VarOccurrence], targets: Iterable[VarOccurrence]) -> bool:
        wanted = set(targets)
        return any(wanted & self.reachable_from(s) for s in sources)

    def dependencies_of(self, occ: VarOccurrence) -> Set[VarOccurrence]:
        """Nodes ``occ`` directly depends on (its backward-slice frontier)."""
        return set(self.succ.get(occ, ()))

    def data_dependencies_of(self, occ: VarOccurrence) -> Set[VarOccurrence]:
        return set(self.data_succ.get(occ, ()))

    def to_lines(self) -> List[str]:
        return [str(edge) for edge in sorted(self.edges, key=lambda e: (e.source.line, e.source.variable, e.target.line, e.target.variable, e.kind))]

    def __len__(self) -> int:
        return len(self.nodes)


def build_dependence_graph(method: Method, facts: Optional[MethodFacts] = None) -> DependencyGraph:
    facts = facts or analyze_method(method)
    cfg = facts.cfg
    graph = DependencyGraph(method.name, facts)
    control = cfg.control_dependences()

    for occ in facts.occurrences:
        graph.add_node(occ)

    for node in cfg.statement_nodes():
        stmt, line = node.stmt, node.line
        at_line: Set[VarOccurrence] = set()

        def data_to_reads(source: VarOccurrence, names: Iterable[str], binds: Iterable[Bind]) -> None:
            for name in names:
                for definition in facts.reaching_defs(node.id, name):
                    graph.add_edge(source, definition, DATA)
            for bind in binds:
                graph.add_edge(source, facts.intern(bind.temp, line, bind.kind), DATA)

        # uses -> reaching definitions
        for occ in facts.uses_by_line.get(line, set()):
            if occ.kind is OccurrenceKind.PROGRAM_VARIABLE:
                for definition in facts.use_reaching.get(occ, ()):
                    graph.add_edge(occ, definition, DATA)
            at_line.add(occ)

        # definition -> what its right-hand side reads
        if node.id in facts.defs:
            target = facts.defs[node.id]
            at_line.add(target)
            for expr in stmt_expressions(stmt):
                names, binds = _direct_reads(expr)
                if isinstance(stmt, IndexAssign):
                    names = names | {stmt.target}
                data_to_reads(target, names, binds)

        # temporaries -> their operands
        for expr in stmt_expressions(stmt):
            for bind in _all_binds(expr):
                temp = facts.intern(bind.temp, line, bind.kind)
                at_line.add(temp)
                names, binds = _direct_reads(bind.expr)
                data_to_reads(temp, names, binds)
            _short_circuit_guards(expr, line, facts, graph)

        # every occurrence on the line -> governing condition values
        for branch_id in control.get(node.id, []):
            branch = cfg.nodes[branch_id]
            value = condition_value_variable(branch.stmt)
            if value is None:
                continue
            guard = facts.intern(value[0], branch.line, value[1])
            for occ in at_line:
                graph.add_edge(occ, guard, CONTROL)

    logger.debug(f"Dependence graph for {method.name}: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
    return graph


def _short_circuit_guards(expr: Expr, line: int, facts: MethodFacts, graph: DependencyGraph) -> None:
    """Temporaries in the right operand of && / || only exist when the left operand lets them."""
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Binary) and node.op in ("&&", "||"):
            left = node.left.expr if isinstance(node.left, Bind) else node.left
            guard: Optional[VarOccurrence] = None
            if isinstance(node.left, Bind):
                guard = facts.intern(node.left.temp, line, node.left.kind)
            elif isinstance(left, Var):
                guard = facts.intern(left.name, line, OccurrenceKind.PROGRAM_VARIABLE)
            if guard is not None:
                for bind in _all_binds(node.right):
                    graph.add_edge(facts.intern(bind.temp, line, bind.kind), guard, CONTROL)
        stack.extend(sub_expressions(node))


# --------------------------------------------------------------------------
# Equivalence classes
# --------------------------------------------------------------------------

ClassKey = Tuple


class EquivalenceClasses:
    """Partition of a method's occurrences into same-value groups.

    Two occurrences share a class when they name the same variable and no
    reassignment can happen on any path between them: a definition starts a
    class and every use reached by that definition alone joins it.  Uses
    reached by the same set of several definitions form a class of their
    own.  Predicate features mirror the class of the variable they project.
    """

    def __init__(self, method: str, keys: Dict[VarOccurrence, ClassKey]):
        self.method = method
        self._keys = dict(keys)
        grouped: Dict[ClassKey, Set[VarOccurrence]] = {}
        for occ, key in self._keys.items():
            grouped.setdefault(key, set()).add(occ)
        self.classes: List[FrozenSet[VarOccurrence]] = sorted(
            (frozenset(members) for members in grouped.values()),
            key=lambda members: _representative(members),
        )

    def class_key(self, occ: VarOccurrence) -> ClassKey:
        if occ in self._keys:
            return self._keys[occ]
        if occ.kind is OccurrenceKind.PREDICATE_FEATURE:
            base = VarOccurrence(feature_base(occ.variable), occ.line)
            name = occ.variable
            projection = name[name.index("["):] if name.endswith("]") else name[: name.index("(")]
            return ("feature", projection, self.class_key(base))
        return ("def", occ)

    def same_class(self, a: VarOccurrence, b: VarOccurrence) -> bool:
        return self.class_key(a) == self.class_key(b)

    def class_of(self, occ: VarOccurrence) -> FrozenSet[VarOccurrence]:
        key = self.class_key(occ)
        members = frozenset(o for o, k in self._keys.items() if k == key)
        return members or frozenset({occ})

    def representative(self, members: Iterable[VarOccurrence]) -> VarOccurrence:
        return _representative(members)

    def __len__(self) -> int:
        return len(self.classes)


def _representative(members: Iterable[VarOccurrence]) -> VarOccurrence:
    return min(members, key=lambda o: (o.line, o.variable))


def equivalence_classes(graph: DependencyGraph, method: Method) -> EquivalenceClasses:
    facts = graph.facts if graph.facts is not None and graph.facts.method is method else analyze_method(method)
    keys: Dict[VarOccurrence, ClassKey] = {}
    for occ in facts.occurrences:
        if occ in facts.def_sites:
            keys[occ] = ("def", occ)
        else:
            reaching = frozenset(facts.use_reaching.get(occ, ()))
            if len(reaching) == 1:
                keys[occ] = ("def", next(iter(reaching)))
            else:
                keys[occ] = ("uses", occ.variable, reaching)
    classes = EquivalenceClasses(method.name, keys)
    logger.debug(f"{method.name}: {len(facts.occurrences)} occurrences in {len(classes)} classes")
    return classes
