#!/usr/bin/env python3
"""
GSA/TAC-style expression decomposition.

Compound sub-expressions of branch conditions, return values and call
arguments are bound to fresh temporaries so that their intermediate
values become observable.  ``if (a>b && c>d)`` turns into
``if ((v = ((v1 = (a > b)) && (v2 = (c > d)))))``.  Single variables and
literals are left alone.  A binding is an expression node, so
short-circuit evaluation is untouched: a temporary in the right operand of
``&&``/``||`` is only assigned when that operand actually runs.
"""

import logging
from typing import Dict, List

from .cfg import build_cfg
from .syntax import (
    ArrayLit, Assign, Binary, Bind, Call, Expr, ExprStmt, If, Index, IndexAssign,
    Method, OccurrenceKind, Program, Return, SourceOrigin, Stmt, Throw, Unary, While,
    is_atomic, render_expr,
)

logger = logging.getLogger(__name__)


def temp_name(method: str, counter: int) -> str:
    return f"__t{method}_{counter}"


class _MethodTransformer:
    def __init__(self, method: Method, source_map: Dict[str, SourceOrigin]):
        self.method = method
        self.source_map = source_map
        self.counter = 0

    def fresh(self, original: Expr, line: int) -> str:
        self.counter += 1
        name = temp_name(self.method.name, self.counter)
        self.source_map[name] = SourceOrigin(self.method.name, line, render_expr(original))
        return name

    # -- statements -------------------------------------------------------

    def block(self, body) -> tuple:
        return tuple(self.stmt(s) for s in body)

    def stmt(self, stmt: Stmt) -> Stmt:
        line = stmt.line
        if isinstance(stmt, If):
            cond = self.wrap_all(stmt.cond, OccurrenceKind.TEMP_CONDITION, line)
            return If(cond, self.block(stmt.then_body), self.block(stmt.else_body), line)
        if isinstance(stmt, While):
            cond = self.wrap_all(stmt.cond, OccurrenceKind.TEMP_CONDITION, line)
            return While(cond, self.block(stmt.body), line)
        if isinstance(stmt, Return):
            if stmt.value is None:
                return stmt
            return Return(self.wrap_all(stmt.value, OccurrenceKind.TEMP_RETURN_ARG, line), line)
        if isinstance(stmt, Assign):
            return Assign(stmt.target, self.wrap_args(stmt.value, line), line)
        if isinstance(stmt, IndexAssign):
            index = self.wrap_args(stmt.index, line)
            return IndexAssign(stmt.target, index, self.wrap_args(stmt.value, line), line)
        if isinstance(stmt, Throw):
            return Throw(self.wrap_args(stmt.value, line), line)
        if isinstance(stmt, ExprStmt):
            return ExprStmt(self.wrap_args(stmt.expr, line), line)
        return stmt

    # -- expressions ------------------------------------------------------

    def wrap_all(self, expr: Expr, kind: OccurrenceKind, line: int) -> Expr:
        """Bind ``expr`` and every compound sub-expression, outermost first."""
        if is_atomic(expr):
            return expr
        name = self.fresh(expr, line)
        inner = self.rebuild(expr, lambda child: self.wrap_all(child, kind, line))
        return Bind(name, inner, kind, line)

    def wrap_args(self, expr: Expr, line: int) -> Expr:
        """Only bind compound call arguments (and their compound parts)."""
        if is_atomic(expr):
            return expr
        if isinstance(expr, Call):
            args = tuple(self.wrap_all(a, OccurrenceKind.TEMP_RETURN_ARG, line) for a in expr.args)
            return Call(expr.name, args, expr.line)
        return self.rebuild(expr, lambda child: self.wrap_args(child, line))

    @staticmethod
    def rebuild(expr: Expr, transform) -> Expr:
        if isinstance(expr, Binary):
            return Binary(expr.op, transform(expr.left), transform(expr.right), expr.line)
        if isinstance(expr, Unary):
            return Unary(expr.op, transform(expr.operand), expr.line)
        if isinstance(expr, Call):
            return Call(expr.name, tuple(transform(a) for a in expr.args), expr.line)
        if isinstance(expr, Index):
            return Index(transform(expr.target), transform(expr.index), expr.line)
        if isinstance(expr, ArrayLit):
            return ArrayLit(tuple(transform(e) for e in expr.elements), expr.line)
        if isinstance(expr, Bind):
            return Bind(expr.temp, transform(expr.expr), expr.kind, expr.line)
        return expr


def transform_gsa(program: Program) -> Program:
    """Return a transformed copy of ``program``; already-transformed input is returned as is."""
    if program.transformed:
        return program

    source_map: Dict[str, SourceOrigin] = {}
    methods: List[Method] = []
    for method in program.methods:
        transformer = _MethodTransformer(method, source_map)
        body = transformer.block(method.body)
        rewritten = Method(
            name=method.name,
            params=list(method.params),
            body=body,
            line=method.line,
            end_line=method.end_line,
        )
        rewritten.cfg = build_cfg(rewritten)
        methods.append(rewritten)
        logger.debug(f"Transformed {method.name}: {transformer.counter} temporaries")

    logger.info(f"GSA transform introduced {len(source_map)} temporaries")
    return Program(methods=methods, source_map=source_map, transformed=True, source=program.source)
