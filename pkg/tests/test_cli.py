import io
import json

import jsonschema
import pytest

from kvtrace.cli import (
    REPORT_SCHEMA,
    SyntaxError as ParseError,
    UnknownGenerator,
    evaluate,
    format_element,
    main,
    parse_element,
    pretty,
)
from kvtrace.freetensor import Alphabet, Polynomial, bracket
from kvtrace.traces import TracePolynomial


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def test_parse_two_terms():
    tree = parse_element("3/2*x1*y2 - [x1,y1]", 2)
    assert tree[0] == "add" and len(tree[1]) == 2
    p = evaluate(tree)
    expected = Polynomial({(0, 3): "3/2"}) - bracket(Polynomial.letter(0), Polynomial.letter(2))
    assert p == expected


def test_parse_trace():
    t = evaluate(parse_element("tr(x2*y2)", 2))
    assert t == TracePolynomial({(1, 3): 1})
    t2 = evaluate(parse_element("2*tr(y2*x2) - tr(x2*y2)", 2))
    assert t2 == t


def test_errors():
    with pytest.raises(UnknownGenerator):
        parse_element("x3", 2)
    with pytest.raises(UnknownGenerator):
        parse_element("w1", 2)
    with pytest.raises(ParseError) as exc:
        parse_element("x1 +\n (y1", 1)
    assert (exc.value.line, exc.value.col) == (2, 5)
    assert "')'" in exc.value.expected
    with pytest.raises(ParseError):
        parse_element("x1 ^ 1/2", 1)


CORPUS = [
    "x1",
    "3/2*x1*y2 - [x1,y1]",
    "-x1 + (y1 + x2)^2",
    "tr(x1*y1) + 2*tr(x2)",
    "[x1,[y1,x2]]*z1",
    "(x1 - 1/3)^3",
]


@pytest.mark.parametrize("src", CORPUS)
def test_pretty_roundtrip(src):
    alph = Alphabet(2, 1)
    tree = parse_element(src, 2, 1)
    again = parse_element(pretty(tree, alph), 2, 1)
    assert pretty(again, alph) == pretty(tree, alph)
    assert evaluate(again) == evaluate(tree)


@pytest.mark.parametrize("src", CORPUS)
def test_format_element_roundtrip(src):
    value = evaluate(parse_element(src, 2, 1))
    text = format_element(value, Alphabet(2, 1))
    assert evaluate(parse_element(text, 2, 1)) == value


def test_irr_command():
    code, out = run("irr", "--genus", "2", "tr(y2*x2*x1)")
    assert code == 0 and out.strip() == "irr: 1"
    code, out = run("irr", "-g", "2", "--format", "json", "tr(y2*x2*x2)")
    assert json.loads(out) == {"irr": "inf"}


def test_kernel_json():
    code, out = run("kernel", "--genus", "2", "--degree", "3", "--model", "omega", "--format", "json")
    assert code == 0 and json.loads(out)["dim"] == 0


def test_usage_errors():
    assert run("irr", "-g", "2", "x3")[0] == 2
    assert run("irr", "-g", "2", "(x1")[0] == 2
    assert run("bogus")[0] == 2
    assert run("kernel", "-g", "0")[0] == 2


def test_internal_error_exit():
    # f(omega) is not in the ideal: lifting fails, reported as an internal invariant violation
    assert run("krv-check", "-g", "2", "--image", "x1=[x1,y1]")[0] == 3


def test_krv_check_member():
    # a degree-1 derivation preserving the ideal of omega
    images = ["--image", "x1=[x1,x2]", "--image", "y1=[y1,x2]", "--image", "y2=[y2,x2]"]
    code, out = run("krv-check", "-g", "2", *images, "--format", "json")
    assert code == 0 and json.loads(out)["member"] is True


def test_holonomy_command():
    code, out = run("holonomy", "-g", "2", "2", "2", "--format", "json")
    assert code == 0 and json.loads(out)["matches_t_r_prime_omega_prime"] is True


def test_verify_basis_schema_and_determinism():
    code, out = run("verify", "basis", "--genus", "2", "--max-degree", "6", "--format", "json")
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert all(c["pass"] for c in report["checks"])
    assert run("verify", "basis", "--genus", "2", "--max-degree", "6", "--format", "json")[1] == out


def test_verify_csv_and_text():
    code, out = run("verify", "kernels", "-g", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "name,pass,expected,computed,provenance"
    code, out = run("verify", "rewrite", "-g", "2", "--max-degree", "6")
    assert code == 0 and "FAIL" not in out


def test_probe_suites_never_fail():
    code, out = run("verify", "surjectivity-conjecture", "-g", "2", "--max-degree", "4", "--format", "json")
    assert code == 0
    jsonschema.validate(json.loads(out), REPORT_SCHEMA)
