#!/usr/bin/env python3
"""
Statement-level control-flow graphs, post-dominators and control dependence.

Each method gets one ENTRY node (at the header line, where parameters are
defined), one EXIT node and one node per reachable statement.  Statements
after a ``return``/``throw`` in the same block are unreachable and get no
node.  Control dependence is read off the post-dominator tree: for every
edge A -> B where B does not post-dominate A, the nodes from B up to (but
excluding) ipdom(A) depend on A.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from .syntax import If, Method, Return, Stmt, Throw, While

logger = logging.getLogger(__name__)

ENTRY = 0
EXIT = 1


@dataclass(frozen=True)
class CFGNode:
    id: int
    kind: str  # "entry" | "exit" | "stmt"
    line: int
    stmt: Optional[Stmt] = None

    @property
    def is_branch(self) -> bool:
        return isinstance(self.stmt, (If, While))


class ControlFlowGraph:
    """Directed graph over ``CFGNode`` ids with cached dominance results."""

    def __init__(self, method_name: str, header_line: int, end_line: int):
        self.method_name = method_name
        self.nodes: Dict[int, CFGNode] = {
            ENTRY: CFGNode(ENTRY, "entry", header_line),
            EXIT: CFGNode(EXIT, "exit", end_line),
        }
        self.succ: Dict[int, List[int]] = {ENTRY: [], EXIT: []}
        self.pred: Dict[int, List[int]] = {ENTRY: [], EXIT: []}
        self._by_stmt: Dict[int, int] = {}
        self._post_dominators: Optional[Dict[int, FrozenSet[int]]] = None
        self._control_deps: Optional[Dict[int, List[int]]] = None

    # -- construction -----------------------------------------------------

    def add_stmt_node(self, stmt: Stmt) -> int:
        node_id = len(self.nodes)
        self.nodes[node_id] = CFGNode(node_id, "stmt", stmt.line, stmt)
        self.succ[node_id] = []
        self.pred[node_id] = []
        self._by_stmt[id(stmt)] = node_id
        return node_id

    def add_edge(self, source: int, target: int) -> None:
        if target not in self.succ[source]:
            self.succ[source].append(target)
            self.pred[target].append(source)

    # -- queries ----------------------------------------------------------

    @property
    def entry(self) -> int:
        return ENTRY

    @property
    def exit(self) -> int:
        return EXIT

    def node_of(self, stmt: Stmt) -> Optional[int]:
        return self._by_stmt.get(id(stmt))

    def statement_nodes(self) -> List[CFGNode]:
        return [n for n in self.nodes.values() if n.kind == "stmt"]

    def reachable_from_entry(self) -> Set[int]:
        seen = {ENTRY}
        stack = [ENTRY]
        while stack:
            node = stack.pop()
            for succ in self.succ[node]:
                if succ not in seen:
                    seen.add(succ)
                    stack.append(succ)
        return seen

    def post_dominators(self) -> Dict[int, FrozenSet[int]]:
        if self._post_dominators is None:
            self._post_dominators = iterative_dominators(self.nodes, self.succ, self.pred, EXIT)
        return self._post_dominators

    def dominators(self) -> Dict[int, FrozenSet[int]]:
        return iterative_dominators(self.nodes, self.pred, self.succ, ENTRY)

    def immediate_post_dominator(self, node: int) -> Optional[int]:
        return immediate_dominator(self.post_dominators(), node)

    def control_dependences(self) -> Dict[int, List[int]]:
        """Map every node to the branch nodes it is directly control dependent on."""
        if self._control_deps is not None:
            return self._control_deps

        pdom = self.post_dominators()
        deps: Dict[int, List[int]] = {node: [] for node in self.nodes}
        for source in sorted(self.nodes):
            if len(self.succ[source]) < 2:
                continue
            stop = self.immediate_post_dominator(source)
            for target in self.succ[source]:
                if target in pdom[source]:
                    continue
                runner: Optional[int] = target
                while runner is not None and runner != stop:
                    if source not in deps[runner]:
                        deps[runner].append(source)
                    runner = self.immediate_post_dominator(runner)
        self._control_deps = deps
        return deps

    def to_lines(self) -> List[str]:
        rows = []
        for node_id in sorted(self.nodes):
            node = self.nodes[node_id]
            targets = ", ".join(str(t) for t in self.succ[node_id])
            rows.append(f"{node_id} {node.kind}@{node.line} -> [{targets}]")
        return rows


def iterative_dominators(nodes: Iterable[int], preds: Dict[int, List[int]],
                         succs: Dict[int, List[int]], root: int) -> Dict[int, FrozenSet[int]]:
    """Classic iterative data-flow dominator computation.

    Passing the successor map as ``preds`` (and vice versa) with EXIT as the
    root yields post-dominators.  Nodes that cannot reach ``root`` keep the
    full set and are dominated by everything, which never happens for
    MiniLang graphs since every loop has a fall-through edge.
    """
    universe = frozenset(nodes)
    dom: Dict[int, FrozenSet[int]] = {n: universe for n in universe}
    dom[root] = frozenset({root})

    order = _reverse_postorder(root, succs)
    changed = True
    while changed:
        changed = False
        for node in order:
            if node == root:
                continue
            incoming = [dom[p] for p in preds[node] if p in dom]
            meet = frozenset.intersection(*incoming) if incoming else frozenset()
            updated = meet | {node}
            if updated != dom[node]:
                dom[node] = updated
                changed = True
    return dom


def immediate_dominator(dom: Dict[int, FrozenSet[int]], node: int) -> Optional[int]:
    strict = dom[node] - {node}
    for candidate in strict:
        if dom[candidate] == strict:
            return candidate
    return None


def _reverse_postorder(root: int, succs: Dict[int, List[int]]) -> List[int]:
    seen: Set[int] = set()
    postorder: List[int] = []

    def visit(node: int) -> None:
        seen.add(node)
        for nxt in succs.get(node, []):
            if nxt not in seen:
                visit(nxt)
        postorder.append(node)

    visit(root)
    return list(reversed(postorder))


def build_cfg(method: Method) -> ControlFlowGraph:
    cfg = ControlFlowGraph(method.name, method.line, method.end_line)
    dangling = _build_block(cfg, method.body, [ENTRY])
    for node in dangling:
        cfg.add_edge(node, EXIT)
    logger.debug(f"CFG for {method.name}: {len(cfg.nodes)} nodes")
    return cfg


def _build_block(cfg: ControlFlowGraph, body, preds: List[int]) -> List[int]:
    for stmt in body:
        if not preds:
            # dead code after return/throw
            break
        preds = _build_stmt(cfg, stmt, preds)
    return preds


def _build_stmt(cfg: ControlFlowGraph, stmt: Stmt, preds: List[int]) -> List[int]:
    node = cfg.add_stmt_node(stmt)
    for pred in preds:
        cfg.add_edge(pred, node)

    if isinstance(stmt, (Return, Throw)):
        cfg.add_edge(node, EXIT)
        return []
    if isinstance(stmt, If):
        then_exits = _build_block(cfg, stmt.then_body, [node])
        else_exits = _build_block(cfg, stmt.else_body, [node]) if stmt.else_body else [node]
        return then_exits + [n for n in else_exits if n not in then_exits]
    if isinstance(stmt, While):
        for tail in _build_block(cfg, stmt.body, [node]):
            cfg.add_edge(tail, node)
        return [node]
    return [node]
