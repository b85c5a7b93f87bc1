#!/usr/bin/env python3
"""
Recursive-descent parser for MiniLang programs and test suites.

``parse`` handles program files (``func`` declarations only) and
``parse_suite`` handles suite files (``test`` declarations only).  Both
report syntax errors with the offending line and column.
"""

import logging
from typing import Deque, List, Optional, Tuple

from ..errors import DuplicateMethodError, MiniLangSyntaxError, SuiteError
from .cfg import build_cfg
from .lexer import Token, tokenize
from .syntax import (
    ArrayLit, Assert, AssertThrows, Assign, Binary, BoolLit, Call, CharLit, Expr,
    ExprStmt, If, Index, IndexAssign, IntLit, Method, NullLit, Program, Return,
    Stmt, StrLit, TestCase, Throw, Unary, Var, VariableDecl, While,
)

logger = logging.getLogger(__name__)

# binary operators by precedence level, loosest first
PRECEDENCE: Tuple[Tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)


class Parser:
    def __init__(self, tokens: Deque[Token]):
        self.tokens = tokens

    # -- token helpers ----------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[0]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(offset, len(self.tokens) - 1)]

    def at(self, text: str, kind: Optional[str] = None) -> bool:
        token = self.current
        return token.text == text and token.kind != "STRING" and token.kind != "CHAR" and (kind is None or token.kind == kind)

    def advance(self) -> Token:
        token = self.tokens.popleft()
        if not self.tokens:
            self.tokens.append(token)
        return token

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r} but found {self.current.text or 'end of input'!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if self.current.kind != "IDENT":
            self.fail(f"expected identifier but found {self.current.text or 'end of input'!r}")
        return self.advance()

    def fail(self, message: str, token: Optional[Token] = None):
        token = token or self.current
        raise MiniLangSyntaxError(message, token.line, token.column)

    # -- declarations -----------------------------------------------------

    def parse_units(self) -> Tuple[List[Method], List[TestCase]]:
        methods: List[Method] = []
        tests: List[TestCase] = []
        while self.current.kind != "EOF":
            if self.at("func", "KEYWORD"):
                methods.append(self.parse_method())
            elif self.at("test", "KEYWORD"):
                tests.append(self.parse_test())
            else:
                self.fail(f"expected 'func' or 'test' but found {self.current.text!r}")
        return methods, tests

    def parse_method(self) -> Method:
        header = self.expect("func")
        name = self.expect_ident().text
        self.expect("(")
        params: List[VariableDecl] = []
        if not self.at(")"):
            while True:
                token = self.expect_ident()
                if any(p.name == token.text for p in params):
                    self.fail(f"duplicate parameter {token.text!r}", token)
                params.append(VariableDecl(token.text, header.line))
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        body, closing = self.parse_block()
        return Method(name=name, params=params, body=body, line=header.line, end_line=closing.line)

    def parse_test(self) -> TestCase:
        header = self.expect("test")
        name = self.expect_ident().text
        body, _ = self.parse_block()
        return TestCase(id=name, body=body, line=header.line)

    # -- statements -------------------------------------------------------

    def parse_block(self) -> Tuple[Tuple[Stmt, ...], Token]:
        self.expect("{")
        statements: List[Stmt] = []
        while not self.at("}"):
            if self.current.kind == "EOF":
                self.fail("unexpected end of input, missing '}'")
            statements.append(self.parse_statement())
        closing = self.advance()
        return tuple(statements), closing

    def parse_statement(self) -> Stmt:
        token = self.current
        if self.at("if", "KEYWORD"):
            return self.parse_if()
        if self.at("while", "KEYWORD"):
            self.advance()
            cond = self.parse_condition()
            body, _ = self.parse_block()
            return While(cond, body, token.line)
        if self.at("return", "KEYWORD"):
            self.advance()
            value = None if self.at(";") else self.parse_expression()
            self.expect(";")
            return Return(value, token.line)
        if self.at("throw", "KEYWORD"):
            self.advance()
            value = self.parse_expression()
            self.expect(";")
            return Throw(value, token.line)
        if self.at("assert", "KEYWORD"):
            self.advance()
            if self.current.kind == "IDENT" and self.current.text == "throws" and self.peek().kind == "STRING":
                self.advance()
                kind = self.advance().text
                body, _ = self.parse_block()
                return AssertThrows(kind, body, token.line)
            cond = self.parse_expression()
            self.expect(";")
            return Assert(cond, token.line)

        expr = self.parse_expression()
        if self.at("="):
            self.advance()
            value = self.parse_expression()
            self.expect(";")
            if isinstance(expr, Var):
                return Assign(expr.name, value, token.line)
            if isinstance(expr, Index) and isinstance(expr.target, Var):
                return IndexAssign(expr.target.name, expr.index, value, token.line)
            self.fail("invalid assignment target", token)
        self.expect(";")
        return ExprStmt(expr, token.line)

    def parse_if(self) -> If:
        token = self.expect("if")
        cond = self.parse_condition()
        then_body, _ = self.parse_block()
        else_body: Tuple[Stmt, ...] = ()
        if self.at("else", "KEYWORD"):
            self.advance()
            if self.at("if", "KEYWORD"):
                else_body = (self.parse_if(),)
            else:
                else_body, _ = self.parse_block()
        return If(cond, then_body, else_body, token.line)

    def parse_condition(self) -> Expr:
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        return cond

    # -- expressions ------------------------------------------------------

    def parse_expression(self, level: int = 0) -> Expr:
        if level == len(PRECEDENCE):
            return self.parse_unary()
        left = self.parse_expression(level + 1)
        while self.current.kind == "OP" and self.current.text in PRECEDENCE[level]:
            op = self.advance()
            right = self.parse_expression(level + 1)
            left = Binary(op.text, left, right, op.line)
        return left

    def parse_unary(self) -> Expr:
        if self.current.kind == "OP" and self.current.text in ("!", "-"):
            op = self.advance()
            operand = self.parse_unary()
            if op.text == "-" and isinstance(operand, IntLit):
                return IntLit(-operand.value, op.line)
            return Unary(op.text, operand, op.line)
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        expr = self.parse_primary()
        while self.at("["):
            self.advance()
            index = self.parse_expression()
            self.expect("]")
            expr = Index(expr, index, expr.line)
        return expr

    def parse_primary(self) -> Expr:
        token = self.current
        if token.kind == "INT":
            self.advance()
            return IntLit(int(token.text), token.line)
        if token.kind == "STRING":
            self.advance()
            return StrLit(token.text, token.line)
        if token.kind == "CHAR":
            self.advance()
            return CharLit(token.text, token.line)
        if token.kind == "KEYWORD" and token.text in ("true", "false"):
            self.advance()
            return BoolLit(token.text == "true", token.line)
        if token.kind == "KEYWORD" and token.text == "null":
            self.advance()
            return NullLit(token.line)
        if token.kind == "IDENT":
            self.advance()
            if self.at("("):
                self.advance()
                args: List[Expr] = []
                if not self.at(")"):
                    args.append(self.parse_expression())
                    while self.at(","):
                        self.advance()
                        args.append(self.parse_expression())
                self.expect(")")
                return Call(token.text, tuple(args), token.line)
            return Var(token.text, token.line)
        if self.at("("):
            self.advance()
            expr = self.parse_expression()
            self.expect(")")
            return expr
        if self.at("["):
            self.advance()
            elements: List[Expr] = []
            if not self.at("]"):
                elements.append(self.parse_expression())
                while self.at(","):
                    self.advance()
                    elements.append(self.parse_expression())
            self.expect("]")
            return ArrayLit(tuple(elements), token.line)
        self.fail(f"unexpected {token.text or 'end of input'!r}")


def parse(source: str) -> Program:
    """Parse a program file into a ``Program`` with a CFG per method."""
    if not source.strip():
        raise MiniLangSyntaxError("empty program", 1, 1)
    methods, tests = Parser(tokenize(source)).parse_units()
    if tests:
        raise MiniLangSyntaxError("test declarations belong in a suite file", tests[0].line, 1)
    if not methods:
        raise MiniLangSyntaxError("empty program", 1, 1)

    seen = set()
    for method in methods:
        if method.name in seen:
            raise DuplicateMethodError(f"duplicate method name {method.name!r}", method.line, 1)
        seen.add(method.name)
        method.cfg = build_cfg(method)

    logger.info(f"Parsed program with {len(methods)} method(s): {', '.join(sorted(seen))}")
    return Program(methods=methods, source=source)


def parse_suite(source: str) -> List[TestCase]:
    """Parse a suite file; test ids must be unique."""
    methods, tests = Parser(tokenize(source)).parse_units() if source.strip() else ([], [])
    if methods:
        raise MiniLangSyntaxError("method declarations belong in a program file", methods[0].line, 1)
    if not tests:
        raise SuiteError("test suite is empty")
    ids = [t.id for t in tests]
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        raise SuiteError(f"duplicate test ids: {', '.join(duplicates)}")
    logger.debug(f"Parsed suite with {len(tests)} test(s)")
    return tests


def parse_file(path) -> Program:
    with open(path, "r", encoding="utf-8") as handle:
        return parse(handle.read())


def parse_suite_file(path) -> List[TestCase]:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_suite(handle.read())


__all__ = ["Parser", "parse", "parse_suite", "parse_file", "parse_suite_file"]
