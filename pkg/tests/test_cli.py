import json
import random
import subprocess
import sys

import pytest

from prelie_pbw.cli import main
from prelie_pbw.expr import (
    ExpressionSyntaxError,
    UnknownLabel,
    format_expression,
    parse_expression,
)
from prelie_pbw.freemod import LinComb
from prelie_pbw.prelie import chain, leaf, random_tree, tree
from prelie_pbw.scalars import RingSpec


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_tree_sum(Q):
    got = parse_expression("x[x] + 2*x", Q)
    assert got == LinComb.from_pairs(Q, [((chain(2),), Q.one), ((leaf(),), Q.from_int(2))])


def test_parse_forest(Q):
    got = parse_expression("x · x[y]", Q)
    assert got == LinComb.basis(Q, tuple(sorted((leaf("x"), tree("x[y]")))))
    assert parse_expression("x[y] . x", Q) == got


def test_unclosed_bracket_reports_column(Q):
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse_expression("x[", Q)
    assert (exc.value.line, exc.value.column) == (1, 2)


def test_unknown_label(Q):
    with pytest.raises(UnknownLabel) as exc:
        parse_expression("x + 3*y[x]", Q, labels={"x"})
    assert exc.value.label == "y"


def test_truncated_coefficients(F2abc):
    got = parse_expression("(alpha + beta)*x + beta*gamma*x[x]", F2abc)
    assert got.coeff((leaf(),)) == F2abc.parse_scalar("alpha + beta")
    assert got.coeff((chain(2),)) == F2abc.parse_scalar("beta*gamma")


def random_element(ring, rng):
    terms = []
    for _ in range(rng.randint(0, 4)):
        forest = tuple(sorted(random_tree(rng, rng.randint(1, 4), ("x", "y")) for _ in range(rng.randint(0, 3))))
        terms.append((forest, ring.random(rng)))
    return LinComb.from_pairs(ring, terms)


@pytest.mark.parametrize("ring", [RingSpec.rational(), RingSpec.prime_field(5), RingSpec.truncated(2, ("a", "b"))], ids=str)
def test_print_parse_round_trip(ring):
    rng = random.Random(0)
    for _ in range(1000):
        e = random_element(ring, rng)
        assert parse_expression(format_expression(e), ring) == e


def test_graft_command(capsys):
    code, out, _ = run(capsys, "graft", "x[x] + 2*x", "x")
    assert code == 0
    assert out.strip() == "x[x,x] + x[x[x]] + 2*x[x]"


def test_star_command(capsys):
    code, out, _ = run(capsys, "star", "x", "x · x")
    assert code == 0
    assert out.strip() == "x · x · x + 2*x · x[x] + x[x,x]"


def test_forest_product_command_agrees_with_star(capsys):
    _, star_out, _ = run(capsys, "star", "x[x]", "x · x")
    _, ck_out, _ = run(capsys, "ck-star", "x[x]", "x · x")
    assert star_out == ck_out


def test_coproduct_command(capsys):
    code, out, _ = run(capsys, "coproduct", "x · x[x]")
    assert code == 0
    assert out.strip() == "1 ⊗ x · x[x] + x ⊗ x[x] + x · x[x] ⊗ 1 + x[x] ⊗ x"


def test_structure_algebra_star(capsys):
    code, out, _ = run(capsys, "star", "e1", "e1", "--algebra", "nilpotent_square")
    assert (code, out.strip()) == (0, "e1 · e1 + e2")


def test_ghat_command(capsys):
    code, out, _ = run(capsys, "ghat-star", "x · t", "x")
    assert (code, out.strip()) == (0, "x · t · x + x[x] · t · t")


def test_pbw_check_passes_on_prelie(capsys):
    code, out, _ = run(capsys, "pbw-check", "--algebra", "upper_triangular", "--cap", "3")
    assert code == 0
    assert "result: PASS" in out


def test_pbw_check_fails_on_control(capsys):
    code, out, _ = run(capsys, "pbw-check", "--algebra", "control", "--ring", "F2")
    assert code == 1


@pytest.mark.parametrize("argv", [["lambda-p", "--p", "3"], ["zassenhaus", "--p", "5"], ["touid", "--p", "2"], ["cohn"]])
def test_identity_commands_pass(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["graft", "x[", "x"],
        ["star", "x", "x", "--ring", "F4"],
        ["star", "e1", "e1", "--algebra", "no_such_algebra"],
        ["lambda-p", "--p", "11"],
        ["cohn", "--p", "3"],
        ["star", "x · x · x", "x · x", "--cap", "4"],
        ["no-such-command"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 2


def test_json_report_shape(capsys):
    code, out, _ = run(capsys, "verify-all", "--only", "1", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["schema"] == "report_v1"
    assert doc["passed"] is True and doc["seed"] == 0
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names)
    assert all(set(c) == {"name", "status", "detail", "counterexample"} for c in doc["checks"])


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "verify-all", "--only", "6", "7", "--format", "json")
    second = run(capsys, "verify-all", "--only", "6", "7", "--format", "json")
    assert first == second


def test_injected_control_fails_targeted_checks(capsys):
    code, out, _ = run(capsys, "verify-all", "--inject-control", "--only", "2", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 1
    failed = [c for c in doc["checks"] if c["status"] == "fail"]
    assert failed
    assert all(c["name"].endswith("[control]") and c["counterexample"] is not None for c in failed)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "prelie_pbw", "graft", "x", "x"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "x[x]"
