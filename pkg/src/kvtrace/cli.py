"""Command-line front end: element parser, single computations and verify suites."""

import argparse
import csv
import io
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import __version__
from .freetensor import Alphabet, LetterOutOfRange, Polynomial, bracket, power
from .traces import TracePolynomial, necklace_basis, trace_project


# ------------------------------------------------------------------ parser


class SyntaxError(ValueError):  # noqa: A001 - the error name is part of the interface
    def __init__(self, line, col, expected, found=""):
        self.line, self.col = line, col
        self.expected = tuple(sorted(expected))
        msg = f"line {line}, col {col}: expected one of {', '.join(self.expected)}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnknownGenerator(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src):
    out = []
    line, col, i = 1, 1, 0
    while i < len(src):
        ch = src[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        start = i
        if ch.isdigit():
            while i < len(src) and src[i].isdigit():
                i += 1
            if i < len(src) and src[i] == "/" and i + 1 < len(src) and src[i + 1].isdigit():
                i += 1
                while i < len(src) and src[i].isdigit():
                    i += 1
            out.append(Token("num", src[start:i], line, col))
        elif ch.isalpha():
            while i < len(src) and src[i].isalnum():
                i += 1
            out.append(Token("name", src[start:i], line, col))
        elif ch in "+-*^[],()":
            i += 1
            out.append(Token(ch, ch, line, col))
        else:
            raise SyntaxError(line, col, {"generator", "number", "operator"}, ch)
        col += i - start
    out.append(Token("end", "", line, col))
    return out


# parse tree nodes are tuples: ("num", Fraction) ("gen", code) ("add", [(sign, node)])
# ("mul", [node]) ("pow", node, k) ("br", a, b) ("tr", node) ("neg", node)


class _Parser:
    def __init__(self, src, alphabet):
        self.toks = tokenize(src)
        self.pos = 0
        self.alphabet = alphabet

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind, expected=None):
        tok = self.peek()
        if tok.kind != kind:
            raise SyntaxError(tok.line, tok.col, expected or {f"'{kind}'"}, tok.text or "end of input")
        self.pos += 1
        return tok

    def parse(self):
        node = self.expr()
        self.take("end", {"'+'", "'-'", "'*'", "end of input"})
        return node

    def expr(self):
        terms = []
        sign = 1
        if self.peek().kind in "+-":
            sign = -1 if self.take(self.peek().kind).kind == "-" else 1
        terms.append((sign, self.term()))
        while self.peek().kind in ("+", "-"):
            sign = -1 if self.take(self.peek().kind).kind == "-" else 1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 and terms[0][0] == 1 else ("add", terms)

    def term(self):
        factors = [self.factor()]
        while self.peek().kind == "*":
            self.take("*")
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else ("mul", factors)

    def factor(self):
        node = self.atom()
        if self.peek().kind == "^":
            self.take("^")
            tok = self.take("num", {"unsigned integer"})
            if "/" in tok.text:
                raise SyntaxError(tok.line, tok.col, {"unsigned integer"}, tok.text)
            node = ("pow", node, int(tok.text))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.pos += 1
            return ("num", Fraction(tok.text))
        if tok.kind == "name":
            self.pos += 1
            if tok.text == "tr":
                self.take("(")
                inner = self.expr()
                self.take(")")
                return ("tr", inner)
            return ("gen", self.generator(tok))
        if tok.kind == "[":
            self.take("[")
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take("]")
            return ("br", a, b)
        if tok.kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        raise SyntaxError(tok.line, tok.col, {"number", "generator", "'['", "'('", "'tr'"}, tok.text or "end of input")

    def generator(self, tok):
        kind, digits = tok.text[0], tok.text[1:]
        if kind not in "xyz" or not digits.isdigit():
            raise UnknownGenerator(f"unknown generator {tok.text!r} at line {tok.line}, col {tok.col}")
        try:
            return self.alphabet.code(kind, int(digits))
        except LetterOutOfRange:
            raise UnknownGenerator(f"generator {tok.text!r} does not exist for this surface") from None


def parse_element(src, g, n=0):
    return _Parser(src, Alphabet(g, n)).parse()


def _contains_trace(node):
    if node[0] == "tr":
        return True
    if node[0] in ("add",):
        return any(_contains_trace(t) for _, t in node[1])
    if node[0] == "mul":
        return any(_contains_trace(f) for f in node[1])
    if node[0] == "pow":
        return _contains_trace(node[1])
    if node[0] == "br":
        return _contains_trace(node[1]) or _contains_trace(node[2])
    return False


def _eval_poly(node):
    kind = node[0]
    if kind == "num":
        return Polynomial({(): node[1]})
    if kind == "gen":
        return Polynomial.letter(node[1])
    if kind == "add":
        out = Polynomial()
        for sign, t in node[1]:
            out = out + _eval_poly(t).scale(sign)
        return out
    if kind == "mul":
        out = Polynomial.one()
        for f in node[1]:
            out = out * _eval_poly(f)
        return out
    if kind == "pow":
        return power(_eval_poly(node[1]), node[2])
    if kind == "br":
        return bracket(_eval_poly(node[1]), _eval_poly(node[2]))
    raise ValueError("tr(...) may only appear at the top level of a sum")


def evaluate(node):
    """Polynomial if no trace marker occurs, else a TracePolynomial.

    Traces are allowed as summands (optionally scaled by constants).
    """
    if not _contains_trace(node):
        return _eval_poly(node)
    summands = node[1] if node[0] == "add" else [(1, node)]
    out = TracePolynomial()
    for sign, t in summands:
        coef = Fraction(sign)
        if t[0] == "mul" and all(f[0] == "num" for f in t[1][:-1]) and t[1][-1][0] == "tr":
            for f in t[1][:-1]:
                coef *= f[1]
            t = t[1][-1]
        if t[0] != "tr" or _contains_trace(t[1]):
            raise ValueError("tr(...) may only appear at the top level of a sum")
        out = out + trace_project(_eval_poly(t[1])).scale(coef)
    return out


def _fmt_num(c):
    return str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def pretty(node, alphabet):
    """Print a parse tree back in the surface syntax."""
    kind = node[0]
    if kind == "num":
        return _fmt_num(node[1])
    if kind == "gen":
        return alphabet.name(node[1])
    if kind == "add":
        parts = []
        for k, (sign, t) in enumerate(node[1]):
            body = pretty(t, alphabet)
            if k == 0:
                parts.append(body if sign > 0 else "-" + body)
            else:
                parts.append(("+ " if sign > 0 else "- ") + body)
        return " ".join(parts)
    if kind == "mul":
        return "*".join(_wrap(f, alphabet) for f in node[1])
    if kind == "pow":
        return f"{_wrap(node[1], alphabet)}^{node[2]}"
    if kind == "br":
        return f"[{pretty(node[1], alphabet)},{pretty(node[2], alphabet)}]"
    if kind == "tr":
        return f"tr({pretty(node[1], alphabet)})"
    raise ValueError(kind)


def _wrap(node, alphabet):
    s = pretty(node, alphabet)
    return f"({s})" if node[0] in ("add", "mul") else s


def format_element(p, alphabet):
    """Surface-syntax rendering of a Polynomial or TracePolynomial."""
    if not p:
        return "0"
    parts = []
    for w, c in p.sorted_terms():
        body = "*".join(alphabet.name(a) for a in w) or "1"
        if isinstance(p, TracePolynomial):
            body = f"tr({body})"
        if c == 1:
            parts.append(("+ ", body))
        elif c == -1:
            parts.append(("- ", body))
        else:
            sign = "- " if c < 0 else "+ "
            parts.append((sign, f"{_fmt_num(abs(c))}*{body}"))
    head = parts[0][1] if parts[0][0] == "+ " else "-" + parts[0][1]
    return " ".join([head] + [s + b for s, b in parts[1:]])


# ------------------------------------------------------------------ reports


REPORT_SCHEMA = {
    "type": "object",
    "required": ["suite", "context", "checks"],
    "properties": {
        "suite": {"type": "string"},
        "context": {
            "type": "object",
            "required": ["g", "n", "N"],
            "properties": {"g": {"type": "integer"}, "n": {"type": "integer"}, "N": {"type": "integer"}},
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "pass", "expected", "computed", "provenance"],
                "properties": {
                    "name": {"type": "string"},
                    "pass": {"type": "boolean"},
                    "expected": {"type": "string"},
                    "computed": {"type": "string"},
                    "provenance": {"enum": ["PAPER", "TRIVIAL", "DERIVED"]},
                },
            },
        },
    },
}


class Report:
    def __init__(self, suite, g, n, N, probe=False):
        self.suite = suite
        self.context = {"g": g, "n": n, "N": N}
        self.checks = []
        self.probe = probe
        self.started = time.perf_counter()

    def check(self, name, expected, computed, provenance, ok=None, **params):
        if ok is None:
            ok = expected == computed
        rec = {"name": name, "pass": bool(ok), "expected": str(expected), "computed": str(computed), "provenance": provenance}
        if params:
            rec["parameters"] = {k: params[k] for k in sorted(params)}
        self.checks.append(rec)
        return ok

    @property
    def passed(self):
        return self.probe or all(c["pass"] for c in self.checks)

    def as_dict(self):
        # wall time is kept out of the JSON so identical inputs give identical bytes
        return {"suite": self.suite, "version": __version__, "context": self.context, "checks": self.checks}

    def render(self, fmt):
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2, sort_keys=True)
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["name", "pass", "expected", "computed", "provenance"])
            for c in self.checks:
                w.writerow([c["name"], c["pass"], c["expected"], c["computed"], c["provenance"]])
            return buf.getvalue().rstrip("\n")
        lines = [f"suite {self.suite} (g={self.context['g']}, n={self.context['n']}, N={self.context['N']})"]
        for c in self.checks:
            mark = "PASS" if c["pass"] else ("NOTE" if self.probe else "FAIL")
            lines.append(f"{mark} {c['name']}: expected {c['expected']}, computed {c['computed']} [{c['provenance']}]")
        return "\n".join(lines)


# ------------------------------------------------------------------ suites


def _parallel(fn, items, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def suite_rewrite(args):
    from .rewrite import INFINITE, irregularity, is_infinite, rho_normalize, rho_rewrite_with, trace_irregularity

    g = max(args.genus, 2)
    rep = Report("rewrite", g, 0, args.truncate)
    xg, yg, x1, y1 = g - 1, 2 * g - 1, 0, g
    examples = [((), 0), ((yg, xg, x1), 1), ((yg, xg, xg, yg, xg, y1), 4), ((yg, xg, xg), INFINITE), ((yg,), 0)]
    alph = Alphabet(g)
    for w, expected in examples:
        rep.check(f"irr |{alph.format_word(w) or '1'}|", expected, irregularity(w, g), "PAPER")
    maxlen = min(args.max_degree or 8, 8)
    bad = 0
    total = 0
    for d in range(maxlen + 1):
        for w in necklace_basis(g, 0, d):
            total += 1
            letters = set(w)
            predicate = bool(w) and letters <= {xg, yg} and letters == {xg, yg}
            if (irregularity(w, g) == INFINITE) != predicate or is_infinite(w, g) != predicate:
                bad += 1
    rep.check(f"finiteness predicate, length <= {maxlen}", 0, bad, "DERIVED", words=total)
    rng = random.Random(0)
    mismatches = 0
    for _ in range(100):
        t = _random_finite_trace(g, 6, rng)
        a = rho_normalize(t, g)
        b = rho_rewrite_with(t, g, lambda occ: occ[-1])
        if a != b or trace_irregularity(a, g) != 0:
            mismatches += 1
    rep.check("confluence of two strategies (100 samples)", 0, mismatches, "DERIVED")
    return rep


def _random_finite_trace(g, maxw, rng):
    from .rewrite import is_infinite

    terms = {}
    for _ in range(rng.randint(1, 4)):
        d = rng.randint(1, maxw)
        while True:
            w = tuple(rng.randrange(2 * g) for _ in range(d))
            if not is_infinite(w, g):
                break
        terms[w] = Fraction(rng.randint(-3, 3) or 1)
    return TracePolynomial.from_words(terms)


def suite_basis(args):
    from .omega import quotient_dim
    from .rewrite import basis_XY

    g = max(args.genus, 2)
    D = args.max_degree or 6
    rep = Report("basis", g, 0, args.truncate)

    def one(d):
        return d, len(basis_XY(g, d)), quotient_dim(g, d)

    for d, nb, qd in _parallel(one, range(D + 1), args.jobs):
        rep.check(f"#X u Y = dim |T(H)_omega| in weight {d}", qd, nb, "DERIVED")
    return rep


CKTH = {1: "H", 2: "0", 3: "wedge3", 4: "HL"}


def suite_kernels(args):
    from .hopfkernel import canonical_subspaces, kernel_reduced_coproduct

    g = args.genus
    rep = Report("kernels", g, 0, args.truncate)
    for model in ("free", "omega"):
        for d in range(1, 5):
            ker = kernel_reduced_coproduct(g, d, model).kernel
            if d == 1:
                ref = ker.full(ker.ambient_dim)
            elif d == 2:
                ref = ker.zero(ker.ambient_dim)
            elif d == 3 and model == "free":
                ref = canonical_subspaces(g, 3, "wedge", model)
            else:
                ref = canonical_subspaces(g, d, "H_times_L", model)
            if model == "omega" and (g, d) == (2, 4):
                ok = ref.contains(ker) is False and ker.contains(ref)
                rep.check(f"{model} d={d}: strict inclusion", "strict", "strict" if ok else "equal", "PAPER", ok=ok)
            else:
                rep.check(f"{model} d={d}: kernel = expected subspace", ref.dim, ker.dim, "PAPER", ok=ker == ref)
    if g == 2:
        rep.check("dim free kernel g=2 d=3", comb(4, 3), kernel_reduced_coproduct(2, 3).dim, "PAPER")
    return rep


def suite_deg5(args):
    from .hopfkernel import canonical_subspaces, kernel_reduced_coproduct

    g = args.genus
    rep = Report("deg5-conjecture", g, 0, args.truncate, probe=True)
    ker = kernel_reduced_coproduct(g, 5).kernel
    ref = canonical_subspaces(g, 5, "H_times_L").sum(canonical_subspaces(g, 5, "wedge"))
    rep.check("Ker^(5) = HL^(4) + wedge5", ref.dim, ker.dim, "PAPER", ok=ker == ref)
    return rep


def suite_surj(args):
    from .hopfkernel import free_to_omega_image, kernel_reduced_coproduct

    g = args.genus
    rep = Report("surjectivity-conjecture", g, 0, args.truncate, probe=True)
    for d in range(1, (args.max_degree or 5) + 1):
        img = free_to_omega_image(g, d)
        ker = kernel_reduced_coproduct(g, d, "omega").kernel
        surj = img == ker
        expected = "not surjective" if (g, d) == (2, 4) else "surjective"
        got = "surjective" if surj else f"not surjective ({img.dim} < {ker.dim})"
        rep.check(f"d={d}", expected, got, "PAPER", ok=got.startswith(expected) and (surj or expected != "surjective"))
    return rep


def suite_kv(args):
    from .kvdiv import FramingData, TangentialDerivation, kv_fr_membership, krv_fr_membership, special_elements
    from .omega import omega

    g, n, N = args.genus, max(args.boundary, 1), max(args.truncate, 3)
    rep = Report("kv", g, n, N)
    fr = FramingData.zero(g, n)
    zero = TangentialDerivation(g, n)
    rep.check("0 in krv", True, bool(krv_fr_membership(zero, fr, N)), "TRIVIAL")
    rep.check("0 in kv", True, bool(kv_fr_membership(zero, fr, N)), "TRIVIAL")
    se = special_elements(g, n, fr, N)
    alph = Alphabet(g, n)
    low = se.xi.degree_part(2, alph)
    rep.check("xi = omega + higher terms", True, low == omega(g, n), "DERIVED")
    return rep


def suite_closed(args):
    from .kvdiv import cobracket_subspace, membership_subspace

    g = args.genus
    N = min(args.truncate, 5) if args.truncate else 5
    rep = Report("closed", g, 0, N)
    for k in (1, 2):
        m = membership_subspace(g, k)
        c = cobracket_subspace(g, k, N)
        rep.check(f"degree {k}: members = cobracket-preserving", c.dim, m.dim, "DERIVED", ok=m == c)
    return rep


SUITES = {
    "rewrite": suite_rewrite,
    "basis": suite_basis,
    "kernels": suite_kernels,
    "deg5-conjecture": suite_deg5,
    "surjectivity-conjecture": suite_surj,
    "kv": suite_kv,
    "closed": suite_closed,
}


# ------------------------------------------------------------------ commands


class UsageError(Exception):
    pass


def _element(args, text):
    try:
        node = parse_element(text, args.genus, args.boundary)
        return evaluate(node)
    except (SyntaxError, UnknownGenerator, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _as_trace(p):
    return p if isinstance(p, TracePolynomial) else trace_project(p)


def cmd_irr(args):
    from .rewrite import INFINITE, trace_irregularity

    t = _as_trace(_element(args, args.expr))
    v = trace_irregularity(t, args.genus)
    return {"irr": "inf" if v == INFINITE else int(v)}, True


def cmd_normal_form(args):
    from .rewrite import normal_form

    t = _as_trace(_element(args, args.expr))
    nf = normal_form(t, args.genus)
    return {"normal_form": format_element(nf, Alphabet(args.genus))}, True


def cmd_basis(args):
    from .omega import quotient_dim
    from .rewrite import basis_XY

    words = basis_XY(args.genus, args.degree)
    alph = Alphabet(args.genus)
    return {
        "degree": args.degree,
        "size": len(words),
        "quotient_dim": quotient_dim(args.genus, args.degree),
        "basis": [alph.format_word(w) or "1" for w in words],
    }, True


def cmd_kernel(args):
    from .hopfkernel import kernel_reduced_coproduct

    rep = kernel_reduced_coproduct(args.genus, args.degree, args.model)
    return {"g": args.genus, "degree": args.degree, "model": args.model, "dim": rep.dim}, True


def cmd_holonomy(args):
    from .freetensor import multiply
    from .omega import omega_family
    from .rewrite import BeadConfig, bead_loop_holonomy, holonomy_data, rho_normalize, standard_loop

    g, s, t = max(args.genus, 2), args.s, args.t
    alph = Alphabet(g)
    hd = holonomy_data(s, t, g)
    hol = bead_loop_holonomy(BeadConfig.base_point(s, t), standard_loop(s, t), g)
    expected = rho_normalize(trace_project(multiply(hd.r_prime, omega_family(g).omega_prime)), g).scale(t)
    return {
        "s": s,
        "t": t,
        "r": format_element(hd.r, alph),
        "r_prime": format_element(hd.r_prime, alph),
        "loop_holonomy": format_element(hol, alph),
        "matches_t_r_prime_omega_prime": hol == expected,
    }, hol == expected


def _parse_images(args, items):
    images = {}
    alph = Alphabet(args.genus, args.boundary)
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"expected GEN=EXPR, got {item!r}")
        name, expr = item.split("=", 1)
        node = parse_element(name.strip(), args.genus, args.boundary)
        if node[0] != "gen":
            raise UsageError(f"{name!r} is not a generator")
        p = _element(args, expr)
        if isinstance(p, TracePolynomial):
            raise UsageError("derivation images must be tensor polynomials")
        images[node[1]] = p
    return images, alph


def cmd_krv_check(args):
    from .freetensor import Derivation
    from .kvdiv import FramingData, TangentialDerivation, krv_closed_membership, krv_fr_membership
    from .omega import NoSolution

    images, alph = _parse_images(args, args.image)
    if args.boundary == 0:
        try:
            res = krv_closed_membership(Derivation(images), args.genus, args.truncate)
        except NoSolution as exc:
            raise InternalError(str(exc)) from None
    else:
        tang = [Polynomial() for _ in range(args.boundary)]
        for item in args.tangential or ():
            j, expr = item.split("=", 1)
            tang[int(j) - 1] = _element(args, expr)
        xy = {k: v for k, v in images.items() if k < 2 * args.genus}
        ut = TangentialDerivation(args.genus, args.boundary, xy, tang)
        res = krv_fr_membership(ut, FramingData.zero(args.genus, args.boundary), args.truncate)
    return {"member": res.member, "witness_degree": res.witness_degree, "reason": res.reason}, True


class InternalError(Exception):
    pass


def _emit_plain(data, fmt):
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k in sorted(data):
            v = data[k]
            w.writerow([k, ";".join(v) if isinstance(v, list) else v])
        return buf.getvalue().rstrip("\n")
    lines = []
    for k in data:
        v = data[k]
        lines.append(f"{k}: {', '.join(v) if isinstance(v, list) else v}")
    return "\n".join(lines)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-g", "--genus", type=int, default=2)
    common.add_argument("-n", "--boundary", type=int, default=0)
    common.add_argument("-d", "--degree", type=int, default=3)
    common.add_argument("-N", "--truncate", type=int, default=6)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--model", choices=("free", "omega"), default="free")

    p = argparse.ArgumentParser(prog="kvtrace", description="Exact computations in surface trace algebras.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in (("irr", "irregularity of a trace polynomial"), ("normal-form", "normal form over the X u Y basis")):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.add_argument("expr")
    sub.add_parser("basis", parents=[common], help="the X u Y basis in one weight")
    sub.add_parser("kernel", parents=[common], help="kernel of the reduced coproduct")
    s = sub.add_parser("holonomy", parents=[common], help="holonomy data of the standard loop")
    s.add_argument("s", type=int)
    s.add_argument("t", type=int)
    s = sub.add_parser("krv-check", parents=[common], help="KRV membership of a derivation")
    s.add_argument("--image", action="append", metavar="GEN=EXPR")
    s.add_argument("--tangential", action="append", metavar="J=EXPR")
    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    return p


COMMANDS = {
    "irr": cmd_irr,
    "normal-form": cmd_normal_form,
    "basis": cmd_basis,
    "kernel": cmd_kernel,
    "holonomy": cmd_holonomy,
    "krv-check": cmd_krv_check,
}


def _validate(args):
    if args.genus < 1 or args.boundary < 0 or args.degree < 0 or args.truncate < 1:
        raise UsageError("genus must be >= 1; boundary, degree >= 0; truncation >= 1")
    if args.command in ("normal-form", "holonomy") and args.genus < 2:
        raise UsageError("this command needs genus >= 2")


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        _validate(args)
        if args.command == "verify":
            rep = SUITES[args.suite](args)
            print(rep.render(args.format), file=stdout)
            return 0 if rep.passed else 1
        data, ok = COMMANDS[args.command](args)
        print(_emit_plain(data, args.format), file=stdout)
        return 0 if ok else 1
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except (SyntaxError, UnknownGenerator) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
