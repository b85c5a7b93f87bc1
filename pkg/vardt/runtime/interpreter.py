#!/usr/bin/env python3
"""
Tree-walking MiniLang interpreter with instrumentation hooks.

The interpreter reports every executed statement line and every variable
read/write inside program methods to a ``Recorder``.  Test bodies run in
a frame of their own that is never recorded.  MiniLang errors travel as
``MiniThrow``; they are part of program semantics and never escape
``run_test``.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..frontend.syntax import (
    ArrayLit, Assert, AssertThrows, Assign, Binary, Bind, BoolLit, Call, CharLit, Expr,
    ExprStmt, If, Index, IndexAssign, IntLit, Method, NullLit, OccurrenceKind, Program,
    Return, Stmt, StrLit, TestCase, Throw, Unary, Var, While,
)
from .values import MiniArray, MiniChar, RuntimeValue, render

logger = logging.getLogger(__name__)

MAX_CALL_DEPTH = 48

NULL_POINTER = "NullPointerException"
INDEX_OUT_OF_BOUNDS = "IndexOutOfBoundsException"
ARITHMETIC = "ArithmeticException"
TYPE_ERROR = "TypeError"
UNDEFINED_VARIABLE = "UndefinedVariable"
UNDEFINED_METHOD = "UndefinedMethod"
ARITY_ERROR = "ArityError"
STACK_OVERFLOW = "StackOverflowError"


class MiniThrow(Exception):
    """An error thrown inside MiniLang code."""

    def __init__(self, kind: str, message: str = "", line: int = 0):
        self.kind = kind
        self.message = message or kind
        self.line = line
        super().__init__(f"{kind}: {self.message}" if message and message != kind else kind)


class AssertionFailure(Exception):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"assertion failed at line {line}: {message}")


class BudgetExhausted(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value: RuntimeValue):
        self.value = value


class Recorder:
    """No-op instrumentation sink; the profiler overrides these hooks."""

    def enter_method(self, method: Method, args: List[RuntimeValue]) -> None:
        pass

    def execute_line(self, method: Method, line: int) -> None:
        pass

    def observe(self, method: Method, name: str, line: int, kind: OccurrenceKind, value: RuntimeValue) -> None:
        pass


@dataclass
class Frame:
    method: Optional[Method]
    variables: Dict[str, RuntimeValue] = field(default_factory=dict)
    line: int = 0


@dataclass
class Outcome:
    passed: bool
    error_kind: Optional[str] = None
    error_message: Optional[str] = None
    error_line: Optional[int] = None
    budget_exhausted: bool = False
    steps: int = 0


class Interpreter:
    def __init__(self, program: Program, recorder: Optional[Recorder] = None, step_budget: int = 1_000_000):
        self.program = program
        self.methods: Dict[str, Method] = {m.name: m for m in program.methods}
        self.recorder = recorder or Recorder()
        self.step_budget = step_budget
        self.steps = 0
        self.depth = 0
        self.builtins: Dict[str, Callable[..., RuntimeValue]] = {
            "length": self._length,
            "charAt": self._char_at,
            "indexOf": self._index_of,
            "substring": self._substring,
            "array": self._new_array,
            "str": lambda value: render(value),
            "abs": self._abs,
        }

    # -- entry points -----------------------------------------------------

    def run_test(self, test: TestCase) -> Outcome:
        frame = Frame(method=None)
        try:
            self.exec_block(test.body, frame)
        except _ReturnSignal:
            pass
        except AssertionFailure as failure:
            return Outcome(False, "AssertionError", str(failure), failure.line, steps=self.steps)
        except MiniThrow as thrown:
            return Outcome(False, thrown.kind, thrown.message, thrown.line, steps=self.steps)
        except BudgetExhausted:
            return Outcome(False, "BudgetExhausted", f"step budget of {self.step_budget} exhausted",
                           frame.line, budget_exhausted=True, steps=self.steps)
        except RecursionError:
            return Outcome(False, STACK_OVERFLOW, "host recursion limit reached", frame.line, steps=self.steps)
        return Outcome(True, steps=self.steps)

    def call(self, name: str, args: List[RuntimeValue], line: int = 0) -> RuntimeValue:
        if name in self.builtins:
            try:
                return self.builtins[name](*args)
            except MiniThrow as thrown:
                thrown.line = thrown.line or line
                raise
            except TypeError as error:
                raise MiniThrow(ARITY_ERROR, f"{name}: {error}", line) from None
        method = self.methods.get(name)
        if method is None:
            raise MiniThrow(UNDEFINED_METHOD, name, line)
        if len(args) != len(method.params):
            raise MiniThrow(ARITY_ERROR, f"{name} expects {len(method.params)} argument(s)", line)
        if self.depth >= MAX_CALL_DEPTH:
            raise MiniThrow(STACK_OVERFLOW, name, line)

        frame = Frame(method=method, line=method.line)
        self._tick()
        self.recorder.enter_method(method, args)
        self.recorder.execute_line(method, method.line)
        for param, value in zip(method.params, args):
            frame.variables[param.name] = value
            self.recorder.observe(method, param.name, method.line, OccurrenceKind.PROGRAM_VARIABLE, value)

        self.depth += 1
        try:
            self.exec_block(method.body, frame)
        except _ReturnSignal as signal:
            return signal.value
        finally:
            self.depth -= 1
        return None

    # -- statements -------------------------------------------------------

    def _tick(self) -> None:
        self.steps += 1
        if self.steps > self.step_budget:
            raise BudgetExhausted()

    def exec_block(self, body, frame: Frame) -> None:
        for stmt in body:
            self.exec_stmt(stmt, frame)

    def _enter_line(self, stmt: Stmt, frame: Frame) -> None:
        self._tick()
        frame.line = stmt.line
        if frame.method is not None:
            self.recorder.execute_line(frame.method, stmt.line)

    def exec_stmt(self, stmt: Stmt, frame: Frame) -> None:
        if isinstance(stmt, While):
            while True:
                self._enter_line(stmt, frame)
                if not self._truth(self.eval(stmt.cond, frame), stmt.line):
                    return
                self.exec_block(stmt.body, frame)

        self._enter_line(stmt, frame)

        if isinstance(stmt, Assign):
            value = self.eval(stmt.value, frame)
            self._store(frame, stmt.target, stmt.line, value)
        elif isinstance(stmt, IndexAssign):
            array = self._read(frame, stmt.target, stmt.line)
            index = self.eval(stmt.index, frame)
            value = self.eval(stmt.value, frame)
            if array is None:
                raise MiniThrow(NULL_POINTER, stmt.target, stmt.line)
            if not isinstance(array, MiniArray):
                raise MiniThrow(TYPE_ERROR, f"{stmt.target} is not an array", stmt.line)
            position = self._int(index, stmt.line)
            if not 0 <= position < len(array):
                raise MiniThrow(INDEX_OUT_OF_BOUNDS, f"index {position} out of bounds for length {len(array)}", stmt.line)
            array.items[position] = value
            self._store(frame, stmt.target, stmt.line, array)
        elif isinstance(stmt, If):
            if self._truth(self.eval(stmt.cond, frame), stmt.line):
                self.exec_block(stmt.then_body, frame)
            else:
                self.exec_block(stmt.else_body, frame)
        elif isinstance(stmt, Return):
            value = self.eval(stmt.value, frame) if stmt.value is not None else None
            raise _ReturnSignal(value)
        elif isinstance(stmt, Throw):
            value = self.eval(stmt.value, frame)
            raise MiniThrow(render(value), render(value), stmt.line)
        elif isinstance(stmt, Assert):
            if not self._truth(self.eval(stmt.cond, frame), stmt.line):
                raise AssertionFailure("condition is false", stmt.line)
        elif isinstance(stmt, AssertThrows):
            self._expect_throw(stmt, frame)
        elif isinstance(stmt, ExprStmt):
            self.eval(stmt.expr, frame)
        else:
            raise TypeError(f"unknown statement {stmt!r}")

    def _expect_throw(self, stmt: AssertThrows, frame: Frame) -> None:
        try:
            self.exec_block(stmt.body, frame)
        except MiniThrow as thrown:
            if stmt.kind in (thrown.kind, thrown.message):
                return
            raise
        raise AssertionFailure(f"expected {stmt.kind} to be thrown", stmt.line)

    # -- variables --------------------------------------------------------

    def _read(self, frame: Frame, name: str, line: int) -> RuntimeValue:
        if name not in frame.variables:
            raise MiniThrow(UNDEFINED_VARIABLE, name, line)
        value = frame.variables[name]
        if frame.method is not None:
            self.recorder.observe(frame.method, name, line, OccurrenceKind.PROGRAM_VARIABLE, value)
        return value

    def _store(self, frame: Frame, name: str, line: int, value: RuntimeValue,
               kind: OccurrenceKind = OccurrenceKind.PROGRAM_VARIABLE) -> None:
        frame.variables[name] = value
        if frame.method is not None:
            self.recorder.observe(frame.method, name, line, kind, value)

    # -- expressions ------------------------------------------------------

    def eval(self, expr: Expr, frame: Frame) -> RuntimeValue:
        line = frame.line
        if isinstance(expr, IntLit):
            return expr.value
        if isinstance(expr, BoolLit):
            return expr.value
        if isinstance(expr, StrLit):
            return expr.value
        if isinstance(expr, CharLit):
            return MiniChar(expr.value)
        if isinstance(expr, NullLit):
            return None
        if isinstance(expr, Var):
            return self._read(frame, expr.name, line)
        if isinstance(expr, Bind):
            value = self.eval(expr.expr, frame)
            self._store(frame, expr.temp, line, value, expr.kind)
            return value
        if isinstance(expr, ArrayLit):
            return MiniArray([self.eval(e, frame) for e in expr.elements])
        if isinstance(expr, Unary):
            operand = self.eval(expr.operand, frame)
            if expr.op == "!":
                return not self._truth(operand, line)
            return -self._number(operand, line)
        if isinstance(expr, Binary):
            return self._binary(expr, frame)
        if isinstance(expr, Call):
            args = [self.eval(a, frame) for a in expr.args]
            return self.call(expr.name, args, line)
        if isinstance(expr, Index):
            target = self.eval(expr.target, frame)
            index = self._int(self.eval(expr.index, frame), line)
            if target is None:
                raise MiniThrow(NULL_POINTER, "index of null", line)
            if isinstance(target, MiniArray):
                if not 0 <= index < len(target):
                    raise MiniThrow(INDEX_OUT_OF_BOUNDS, f"index {index} out of bounds for length {len(target)}", line)
                return target.items[index]
            if isinstance(target, str):
                return self._char_at(target, index)
            raise MiniThrow(TYPE_ERROR, "only arrays and strings can be indexed", line)
        raise TypeError(f"unknown expression {expr!r}")

    def _binary(self, expr: Binary, frame: Frame) -> RuntimeValue:
        line = frame.line
        op = expr.op
        if op == "&&":
            return self._truth(self.eval(expr.left, frame), line) and self._truth(self.eval(expr.right, frame), line)
        if op == "||":
            return self._truth(self.eval(expr.left, frame), line) or self._truth(self.eval(expr.right, frame), line)

        left = self.eval(expr.left, frame)
        right = self.eval(expr.right, frame)
        if op == "==":
            return values_equal(left, right)
        if op == "!=":
            return not values_equal(left, right)
        if op == "+" and (isinstance(left, str) or isinstance(right, str)):
            return render(left) + render(right)
        a, b = self._number(left, line), self._number(right, line)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op in ("/", "%"):
            if b == 0:
                raise MiniThrow(ARITHMETIC, "/ by zero", line)
            quotient = abs(a) // abs(b)
            if (a < 0) != (b < 0):
                quotient = -quotient
            return quotient if op == "/" else a - b * quotient
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise MiniThrow(TYPE_ERROR, f"unknown operator {op}", line)

    # -- coercions --------------------------------------------------------

    @staticmethod
    def _truth(value: RuntimeValue, line: int) -> bool:
        if not isinstance(value, bool):
            raise MiniThrow(TYPE_ERROR, f"expected boolean, got {render(value)}", line)
        return value

    @staticmethod
    def _number(value: RuntimeValue, line: int) -> int:
        if isinstance(value, MiniChar):
            return value.code
        if value is None:
            raise MiniThrow(NULL_POINTER, "arithmetic on null", line)
        if isinstance(value, bool) or not isinstance(value, int):
            raise MiniThrow(TYPE_ERROR, f"expected number, got {render(value)}", line)
        return value

    @staticmethod
    def _int(value: RuntimeValue, line: int) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise MiniThrow(TYPE_ERROR, f"expected int, got {render(value)}", line)
        return value

    # -- built-ins --------------------------------------------------------

    @staticmethod
    def _sequence(value: RuntimeValue, name: str):
        if value is None:
            raise MiniThrow(NULL_POINTER, f"{name} of null")
        if not isinstance(value, (str, MiniArray)):
            raise MiniThrow(TYPE_ERROR, f"{name} expects a string or array")
        return value

    def _length(self, value: RuntimeValue) -> int:
        return len(self._sequence(value, "length"))

    def _char_at(self, text: RuntimeValue, index: RuntimeValue) -> MiniChar:
        text = self._string(text, "charAt")
        index = self._int(index, 0)
        if not 0 <= index < len(text):
            raise MiniThrow(INDEX_OUT_OF_BOUNDS, f"index {index} out of bounds for length {len(text)}")
        return MiniChar(text[index])

    def _index_of(self, text: RuntimeValue, needle: RuntimeValue) -> int:
        text = self._string(text, "indexOf")
        if isinstance(needle, MiniChar):
            needle = needle.value
        if not isinstance(needle, str):
            raise MiniThrow(TYPE_ERROR, "indexOf expects a string or character to search for")
        return text.find(needle)

    def _substring(self, text: RuntimeValue, begin: RuntimeValue, end: RuntimeValue = None) -> str:
        text = self._string(text, "substring")
        begin = self._int(begin, 0)
        end = len(text) if end is None else self._int(end, 0)
        if begin < 0 or end > len(text) or begin > end:
            raise MiniThrow(INDEX_OUT_OF_BOUNDS, f"begin {begin}, end {end}, length {len(text)}")
        return text[begin:end]

    def _new_array(self, size: RuntimeValue) -> MiniArray:
        size = self._int(size, 0)
        if size < 0:
            raise MiniThrow(INDEX_OUT_OF_BOUNDS, f"negative array size {size}")
        return MiniArray([0] * size)

    def _abs(self, value: RuntimeValue) -> int:
        return abs(self._number(value, 0))

    @staticmethod
    def _string(value: RuntimeValue, name: str) -> str:
        if value is None:
            raise MiniThrow(NULL_POINTER, f"{name} on null")
        if not isinstance(value, str):
            raise MiniThrow(TYPE_ERROR, f"{name} expects a string")
        return value


def values_equal(left: RuntimeValue, right: RuntimeValue) -> bool:
    if left is None or right is None:
        return left is None and right is None
    if isinstance(left, MiniArray) or isinstance(right, MiniArray):
        return left is right
    if isinstance(left, bool) != isinstance(right, bool):
        return False
    if type(left) is not type(right):
        return False
    return left == right


def run_program_function(program: Program, name: str, args: List[Any],
                         step_budget: int = 1_000_000) -> Tuple[str, Any]:
    """Call one method directly; returns ("ok", value) or ("throw", kind)."""
    interpreter = Interpreter(program, step_budget=step_budget)
    try:
        return "ok", render(interpreter.call(name, list(args)))
    except MiniThrow as thrown:
        return "throw", thrown.kind
    except BudgetExhausted:
        return "budget", None
    except RecursionError:
        return "throw", STACK_OVERFLOW
