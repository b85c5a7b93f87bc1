#!/usr/bin/env python3
"""
Tests for the MiniLang frontend: parsing, GSA transformation and
dependence analysis.
"""

import random

import pytest

from vardt.errors import DuplicateMethodError, MiniLangSyntaxError, SuiteError
from vardt.evalkit.corpus import seed_corpus
from vardt.frontend import (
    CONTROL, DATA, OccurrenceKind, VarOccurrence, analyze_method, build_dependence_graph,
    equivalence_classes, parse, parse_suite, transform_gsa,
)
from vardt.frontend.lexer import tokenize
from vardt.frontend.syntax import Binary, Bind, Call, If, IntLit, Return, Var, walk_stmts
from vardt.runtime import MiniArray, MiniChar, render, run_program_function, run_suite

STEPS = 20_000

BRANCHY = """// branchy
func f(x) {
  y = x + 1;
  if (y > 3) {
    z = y;
  } else {
    z = 0;
  }
  return z;
}
"""


class TestParser:
    """Parsing of program and suite files."""

    def test_parse_lang27(self, lang27):
        program = lang27.buggy
        assert program.method_names() == ["createNumber"]
        method = program.method("createNumber")
        assert [p.name for p in method.params] == ["str"]
        assert method.line == 2
        assert 27 in method.lines

    def test_negative_literal_folds(self):
        program = parse("func f(x) {\n  return x > -1;\n}\n")
        ret = program.methods[0].body[0]
        assert isinstance(ret, Return)
        assert isinstance(ret.value, Binary)
        assert ret.value.right == IntLit(-1, 2)

    def test_syntax_error_reports_position(self):
        with pytest.raises(MiniLangSyntaxError) as info:
            parse("func f(x) {\n  y = ;\n}\n")
        assert info.value.line == 2
        assert info.value.exit_code == 1

    def test_duplicate_method(self):
        with pytest.raises(DuplicateMethodError):
            parse("func f() { return 1; }\nfunc f() { return 2; }\n")

    def test_tests_rejected_in_program_file(self):
        with pytest.raises(MiniLangSyntaxError):
            parse("func f() { return 1; }\ntest t { assert f() == 1; }\n")

    def test_empty_program(self):
        with pytest.raises(MiniLangSyntaxError):
            parse("   \n")

    def test_suite_errors(self):
        with pytest.raises(SuiteError):
            parse_suite("")
        with pytest.raises(SuiteError):
            parse_suite("test a { assert 1 == 1; }\ntest a { assert 2 == 2; }\n")

    def test_lang27_suite(self, lang27):
        assert [t.id for t in lang27.suite] == ["t1", "t2", "t3", "t4"]

    def test_tokenize_tracks_lines(self):
        tokens = list(tokenize("a = 1;\nb = a;\n"))
        assert [t.line for t in tokens if t.text == "b"] == [2]


class TestGsaTransform:
    """Temporaries for conditions, return values and call arguments."""

    def test_lang27_temporaries(self, lang27):
        program = transform_gsa(lang27.buggy)
        names = sorted(program.source_map, key=lambda n: int(n.rsplit("_", 1)[1]))
        assert names == [f"__tcreateNumber_{i}" for i in range(1, 10)]
        lines = [program.source_map[n].line for n in names]
        assert lines == [3, 10, 11, 12, 15, 17, 17, 21, 27]
        assert program.source_map["__tcreateNumber_1"].expression == "(str == null)"

    def test_compound_condition_is_split(self):
        program = transform_gsa(parse("func f(a, b, c, d) {\n  if (a > b && c > d) {\n    return 1;\n  }\n  return 0;\n}\n"))
        cond = program.methods[0].body[0].cond
        assert isinstance(cond, Bind) and cond.temp == "__tf_1"
        assert cond.kind is OccurrenceKind.TEMP_CONDITION
        assert isinstance(cond.expr.left, Bind) and cond.expr.left.temp == "__tf_2"
        assert isinstance(cond.expr.right, Bind) and cond.expr.right.temp == "__tf_3"

    def test_atomic_expressions_untouched(self):
        program = transform_gsa(parse("func f(flag) {\n  if (flag) {\n    return flag;\n  }\n  return 0;\n}\n"))
        assert program.source_map == {}
        assert isinstance(program.methods[0].body[0].cond, Var)

    def test_call_arguments_are_bound(self):
        program = transform_gsa(parse("func f(a, b) {\n  y = g(a + 1, b);\n  return y;\n}\nfunc g(p, q) {\n  return p;\n}\n"))
        call = program.method("f").body[0].value
        assert isinstance(call, Call)
        assert isinstance(call.args[0], Bind)
        assert call.args[0].kind is OccurrenceKind.TEMP_RETURN_ARG
        assert isinstance(call.args[1], Var)

    def test_transform_is_idempotent(self, lang27):
        once = transform_gsa(lang27.buggy)
        assert transform_gsa(once) is once
        assert not lang27.buggy.transformed

    def test_every_condition_is_atomic_after_transform(self, lang27):
        program = transform_gsa(lang27.buggy)
        for stmt in walk_stmts(program.methods[0].body):
            if isinstance(stmt, If):
                assert isinstance(stmt.cond, (Bind, Var))

    @pytest.mark.parametrize("bug", seed_corpus(), ids=lambda b: b.bug_id)
    def test_transform_preserves_outcomes(self, bug):
        """The transformed program passes and fails exactly the same tests."""
        for program in (bug.buggy, bug.fixed):
            before = [(t.test_id, t.label) for t in run_suite(program, bug.suite, tracked={})]
            after = [(t.test_id, t.label) for t in run_suite(transform_gsa(program), bug.suite, tracked={})]
            assert before == after


class TestDependence:
    """Reaching definitions, dependence edges and equivalence classes."""

    def setup_method(self):
        self.program = transform_gsa(parse(BRANCHY))
        self.method = self.program.methods[0]
        self.facts = analyze_method(self.method)
        self.graph = build_dependence_graph(self.method, self.facts)

    def test_data_edges(self):
        edge_set = {(str(e.source), str(e.target), e.kind) for e in self.graph.edges}
        assert ("y@3", "x@2", DATA) in edge_set
        assert ("z@9", "z@5", DATA) in edge_set
        assert ("z@9", "z@7", DATA) in edge_set
        assert ("__tf_1@4", "y@3", DATA) in edge_set

    def test_control_edges(self):
        edge_set = {(str(e.source), str(e.target), e.kind) for e in self.graph.edges}
        assert ("z@5", "__tf_1@4", CONTROL) in edge_set
        assert ("z@7", "__tf_1@4", CONTROL) in edge_set

    def test_reachability(self):
        assert self.graph.depends_on(VarOccurrence("z", 9), VarOccurrence("x", 2))
        assert not self.graph.depends_on(VarOccurrence("y", 3), VarOccurrence("__tf_1", 4))

    def test_equivalence_classes(self):
        classes = equivalence_classes(self.graph, self.method)
        assert classes.same_class(VarOccurrence("y", 3), VarOccurrence("y", 5))
        assert classes.same_class(VarOccurrence("y", 4), VarOccurrence("y", 5))
        assert not classes.same_class(VarOccurrence("z", 9), VarOccurrence("z", 5))

    def test_feature_nodes_hang_off_their_base(self):
        feature = VarOccurrence("length(x)", 3, OccurrenceKind.PREDICATE_FEATURE)
        extended = self.graph.with_features([(feature, VarOccurrence("x", 3))])
        assert extended.depends_on(feature, VarOccurrence("x", 2))
        assert feature not in self.graph.nodes


def random_argument(rng):
    choice = rng.randrange(6)
    if choice == 0:
        return rng.randint(-10, 12)
    if choice == 1:
        return "".join(rng.choice("1eE.-lx ") for _ in range(rng.randint(0, 6)))
    if choice == 2:
        return None
    if choice == 3:
        return MiniChar(rng.choice("ae1.- "))
    if choice == 4:
        return rng.random() < 0.5
    return MiniArray([rng.randint(-5, 9) for _ in range(rng.randint(0, 4))])


def fresh_copy(value):
    return MiniArray([fresh_copy(v) for v in value.items]) if isinstance(value, MiniArray) else value


class TestTransformDifferential:
    """The transformed program returns and throws exactly what the original does."""

    @pytest.mark.parametrize("bug", seed_corpus(), ids=lambda b: b.bug_id)
    def test_random_calls_agree(self, bug):
        rng = random.Random(bug.bug_id)
        compared = 0
        for program in (bug.buggy, bug.fixed):
            transformed = transform_gsa(program)
            for method in program.methods:
                for _ in range(100):
                    args = [random_argument(rng) for _ in method.params]
                    before = run_program_function(program, method.name, [fresh_copy(a) for a in args], STEPS)
                    after = run_program_function(transformed, method.name, [fresh_copy(a) for a in args], STEPS)
                    if "budget" in (before[0], after[0]):
                        continue
                    assert before == after, f"{method.name}{tuple(render(a) for a in args)}"
                    compared += 1
        assert compared > 0
