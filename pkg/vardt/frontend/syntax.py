#!/usr/bin/env python3
"""
MiniLang syntax tree.

Expressions are immutable value objects.  Statements compare by identity
so that control-flow graphs can key on them even when two statements are
textually identical.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple, Union


class OccurrenceKind(str, Enum):
    PROGRAM_VARIABLE = "program-variable"
    TEMP_CONDITION = "temporary-for-condition"
    TEMP_RETURN_ARG = "temporary-for-return-arg"
    PREDICATE_FEATURE = "predicate-feature"

    @property
    def is_temporary(self) -> bool:
        return self in (OccurrenceKind.TEMP_CONDITION, OccurrenceKind.TEMP_RETURN_ARG)


@dataclass(frozen=True, order=True)
class VarOccurrence:
    """A variable at a source line; the unit every analysis stage works on."""
    variable: str
    line: int
    kind: OccurrenceKind = field(default=OccurrenceKind.PROGRAM_VARIABLE, compare=False)

    def __str__(self) -> str:
        return f"{self.variable}@{self.line}"

    @property
    def base_variable(self) -> str:
        """Program variable a predicate feature projects, else the name itself."""
        if self.kind is OccurrenceKind.PREDICATE_FEATURE:
            return feature_base(self.variable)
        return self.variable


FEATURE_PREFIXES = ("isnull", "typeof", "length")


def feature_name(projection: str, variable: str, index: Optional[int] = None) -> str:
    if projection == "element":
        return f"{variable}[{index}]"
    return f"{projection}({variable})"


def feature_base(name: str) -> str:
    if name.endswith("]") and "[" in name:
        return name[: name.index("[")]
    if name.endswith(")") and "(" in name:
        return name[name.index("(") + 1 : -1]
    return name


# --------------------------------------------------------------------------
# Expressions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int
    line: int


@dataclass(frozen=True)
class StrLit:
    value: str
    line: int


@dataclass(frozen=True)
class CharLit:
    value: str
    line: int


@dataclass(frozen=True)
class BoolLit:
    value: bool
    line: int


@dataclass(frozen=True)
class NullLit:
    line: int


@dataclass(frozen=True)
class Var:
    name: str
    line: int


@dataclass(frozen=True)
class ArrayLit:
    elements: Tuple["Expr", ...]
    line: int


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    line: int


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    line: int


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expr", ...]
    line: int


@dataclass(frozen=True)
class Index:
    target: "Expr"
    index: "Expr"
    line: int


@dataclass(frozen=True)
class Bind:
    """``(temp = expr)``: evaluates ``expr``, stores it in ``temp`` and yields it."""
    temp: str
    expr: "Expr"
    kind: OccurrenceKind
    line: int


Expr = Union[IntLit, StrLit, CharLit, BoolLit, NullLit, Var, ArrayLit, Unary, Binary, Call, Index, Bind]

LITERALS = (IntLit, StrLit, CharLit, BoolLit, NullLit)


def is_atomic(expr: Expr) -> bool:
    """Single variables and literals are never wrapped in temporaries."""
    return isinstance(expr, LITERALS + (Var,))


def sub_expressions(expr: Expr) -> Tuple[Expr, ...]:
    if isinstance(expr, ArrayLit):
        return expr.elements
    if isinstance(expr, Unary):
        return (expr.operand,)
    if isinstance(expr, Binary):
        return (expr.left, expr.right)
    if isinstance(expr, Call):
        return expr.args
    if isinstance(expr, Index):
        return (expr.target, expr.index)
    if isinstance(expr, Bind):
        return (expr.expr,)
    return ()


def walk_expr(expr: Expr) -> Iterator[Expr]:
    """Pre-order traversal."""
    yield expr
    for child in sub_expressions(expr):
        yield from walk_expr(child)


def render_expr(expr: Expr) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, StrLit):
        escaped = expr.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
        return f'"{escaped}"'
    if isinstance(expr, CharLit):
        return f"'{expr.value}'"
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, NullLit):
        return "null"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, ArrayLit):
        return "[" + ", ".join(render_expr(e) for e in expr.elements) + "]"
    if isinstance(expr, Unary):
        return f"{expr.op}{render_expr(expr.operand)}"
    if isinstance(expr, Binary):
        return f"({render_expr(expr.left)} {expr.op} {render_expr(expr.right)})"
    if isinstance(expr, Call):
        return f"{expr.name}(" + ", ".join(render_expr(a) for a in expr.args) + ")"
    if isinstance(expr, Index):
        return f"{render_expr(expr.target)}[{render_expr(expr.index)}]"
    if isinstance(expr, Bind):
        return f"({expr.temp} = {render_expr(expr.expr)})"
    raise TypeError(f"unknown expression node {expr!r}")


# --------------------------------------------------------------------------
# Statements
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Assign:
    target: str
    value: Expr
    line: int


@dataclass(frozen=True, eq=False)
class IndexAssign:
    target: str
    index: Expr
    value: Expr
    line: int


@dataclass(frozen=True, eq=False)
class If:
    cond: Expr
    then_body: Tuple["Stmt", ...]
    else_body: Tuple["Stmt", ...]
    line: int


@dataclass(frozen=True, eq=False)
class While:
    cond: Expr
    body: Tuple["Stmt", ...]
    line: int


@dataclass(frozen=True, eq=False)
class Return:
    value: Optional[Expr]
    line: int


@dataclass(frozen=True, eq=False)
class Throw:
    value: Expr
    line: int


@dataclass(frozen=True, eq=False)
class Assert:
    cond: Expr
    line: int


@dataclass(frozen=True, eq=False)
class AssertThrows:
    kind: str
    body: Tuple["Stmt", ...]
    line: int


@dataclass(frozen=True, eq=False)
class ExprStmt:
    expr: Expr
    line: int


Stmt = Union[Assign, IndexAssign, If, While, Return, Throw, Assert, AssertThrows, ExprStmt]


def stmt_expressions(stmt: Stmt) -> Tuple[Expr, ...]:
    """Expressions evaluated by the statement itself (not by nested blocks)."""
    if isinstance(stmt, Assign):
        return (stmt.value,)
    if isinstance(stmt, IndexAssign):
        return (stmt.index, stmt.value)
    if isinstance(stmt, (If, While, Assert)):
        return (stmt.cond,)
    if isinstance(stmt, Return):
        return (stmt.value,) if stmt.value is not None else ()
    if isinstance(stmt, Throw):
        return (stmt.value,)
    if isinstance(stmt, ExprStmt):
        return (stmt.expr,)
    return ()


def nested_blocks(stmt: Stmt) -> Tuple[Tuple[Stmt, ...], ...]:
    if isinstance(stmt, If):
        return (stmt.then_body, stmt.else_body)
    if isinstance(stmt, (While, AssertThrows)):
        return (stmt.body,)
    return ()


def walk_stmts(body: Tuple[Stmt, ...]) -> Iterator[Stmt]:
    """Pre-order over a block and every nested block."""
    for stmt in body:
        yield stmt
        for block in nested_blocks(stmt):
            yield from walk_stmts(block)


# --------------------------------------------------------------------------
# Program units
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VariableDecl:
    name: str
    line: int


@dataclass(eq=False)
class Method:
    name: str
    params: List[VariableDecl]
    body: Tuple[Stmt, ...]
    line: int
    end_line: int
    cfg: Optional["object"] = None

    @property
    def lines(self) -> List[int]:
        """Header line plus every statement line, ascending."""
        found = {self.line}
        found.update(stmt.line for stmt in walk_stmts(self.body))
        return sorted(found)


@dataclass(frozen=True)
class SourceOrigin:
    """Where a transformed node came from."""
    method: str
    line: int
    expression: str


@dataclass(eq=False)
class Program:
    methods: List[Method]
    source_map: Dict[str, SourceOrigin] = field(default_factory=dict)
    transformed: bool = False
    source: str = ""

    def method(self, name: str) -> Method:
        for method in self.methods:
            if method.name == name:
                return method
        raise KeyError(name)

    def method_names(self) -> List[str]:
        return [m.name for m in self.methods]

    def has_method(self, name: str) -> bool:
        return any(m.name == name for m in self.methods)


@dataclass(eq=False)
class TestCase:
    __test__ = False  # keep pytest from collecting this class

    id: str
    body: Tuple[Stmt, ...]
    line: int
