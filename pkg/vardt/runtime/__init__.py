"""
Instrumented MiniLang runtime: interpreter, value profiler and trace storage.
"""

from .interpreter import Interpreter, MiniThrow, Outcome, Recorder, run_program_function
from .profiler import TraceRecorder, last_value_table, run_suite, run_test
from .traces import Label, TestRunTrace, VariableObservation, read_traces, write_traces
from .values import MiniArray, MiniChar, ObservedValue, project, render

__all__ = [
    "Interpreter",
    "Label",
    "MiniArray",
    "MiniChar",
    "MiniThrow",
    "ObservedValue",
    "Outcome",
    "Recorder",
    "TestRunTrace",
    "TraceRecorder",
    "VariableObservation",
    "last_value_table",
    "project",
    "read_traces",
    "render",
    "run_program_function",
    "run_suite",
    "run_test",
    "write_traces",
]
