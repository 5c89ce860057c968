"""Command-line front end (``weylkit`` / ``python -m weylkit``)."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import numbers as nb
from .coeffs import Poly, format_coeff
from .diagrams import (
    MAX_DIAGRAM_SIZE, GateBasis, Gate, diagram_totals, iter_diagrams, rook_totals,
    transfer_coefficients, crossing_weighted_count,
)
from .errors import BoundExceeded, DeformationError, DomainError, SeriesError, WeylkitError
from .parser import ParseError, parse_expression, symbols_of, to_coefficient, to_operator
from .paths import JFractionSpec, fermat_mu, jfraction_expand, q_jfraction_expand, weyl_path_ct
from .series import closed_gf
from .weyl import (
    WICK_MAX_LEN, NormalForm, OperatorPolynomial, constant_term, exp_normal_order, normal_order,
    power_normal_order, wick_normal_order,
)

EXIT_USAGE, EXIT_REFUSED, EXIT_DISAGREE = 1, 2, 3
REWRITE_MAX_LEN = 32


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# serialization

def q_label(q) -> str:
    if isinstance(q, Poly) and not q.is_constant():
        return str(q)
    return format_coeff(q.constant_value() if isinstance(q, Poly) else q)


def nf_to_dict(nf: NormalForm) -> dict:
    return {
        "modes": nf.modes,
        "q": q_label(nf.q),
        "terms": [
            {"x": [a for a, _ in m], "d": [b for _, b in m], "coeff": format_coeff(c)}
            for m, c in nf.items()
        ],
    }


def dumps(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "))


def nf_from_dict(data: dict) -> NormalForm:
    """Rebuild a normal form from its JSON form (coefficients re-parsed)."""
    params = set()
    nodes = []
    for t in data["terms"]:
        node = parse_expression(t["coeff"])
        params |= symbols_of(node)
        nodes.append(node)
    qtxt = data["q"]
    if qtxt not in ("1",) and not _is_rational_text(qtxt):
        params.add(qtxt)
    params = tuple(sorted(params))
    gens = dict(zip(params, Poly.symbols(params))) if params else {}
    q = gens[qtxt] if qtxt in gens else Fraction(qtxt)
    q = q.numerator if isinstance(q, Fraction) and q.denominator == 1 else q
    terms = {}
    for t, node in zip(data["terms"], nodes):
        terms[tuple(zip(t["x"], t["d"]))] = to_coefficient(node, params)
    return NormalForm(terms, data["modes"], q)


def _is_rational_text(s: str) -> bool:
    try:
        Fraction(s)
        return True
    except ValueError:
        return False


def render_nf(nf: NormalForm, fmt: str) -> str:
    if fmt == "json":
        return dumps(nf_to_dict(nf))
    header = [f"x{j}" for j in range(nf.modes)] + [f"d{j}" for j in range(nf.modes)] + ["coeff"]
    rows = [[str(a) for a, _ in m] + [str(b) for _, b in m] + [format_coeff(c)] for m, c in nf.items()]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    return _table([header] + rows)


def _table(rows: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def render_rows(header: List[str], rows: List[List[str]], fmt: str, extra: dict = None) -> str:
    if fmt == "json":
        obj = dict(extra or {})
        obj["rows"] = [dict(zip(header, r)) for r in rows]
        return dumps(obj)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    return _table([header] + rows)


# ---------------------------------------------------------------------------
# expression handling

def build_operator(text: str, args) -> OperatorPolynomial:
    node = parse_expression(text)
    names = set(symbols_of(node))
    if args.q_symbolic:
        names.add("q")
    params = tuple(sorted(names))
    q = 1
    if args.q_symbolic:
        q = Poly.symbols(params)[params.index("q")]
    elif args.q is not None:
        q = Fraction(args.q)
        q = q.numerator if q.denominator == 1 else q
        if params:
            q = Poly.const(q, params)
    return to_operator(node, q, params)


def basis_of(nf: NormalForm) -> GateBasis:
    if nf.modes != 1:
        raise UsageError("combinatorial oracles handle a single mode")
    gates = []
    for m, c in nf.items():
        (r, s), = m
        if (r, s) == (0, 0):
            raise UsageError("combinatorial oracles need an operator without constant term")
        gates.append(Gate(r, s, c))
    return GateBasis(gates)


# ---------------------------------------------------------------------------
# oracles

ORACLES = ("rewrite", "compose", "transfer", "enumerate", "rook", "paths", "wick")


def _pairs_nf(pairs: Dict[Tuple[int, int], object], q=1) -> NormalForm:
    return NormalForm.from_pairs(pairs, q)


def run_oracle(name: str, op: OperatorPolynomial, n: int, args) -> NormalForm:
    q = op.q
    deformed = q != 1
    if name == "rewrite":
        p = op ** n
        bound = args.max_word_len if args.max_word_len is not None else REWRITE_MAX_LEN
        if p.degree() > bound:
            raise BoundExceeded("rewrite oracle word length", p.degree(), bound)
        return normal_order(p)
    if name == "compose":
        return power_normal_order(normal_order(op), n)
    h = normal_order(op)
    if name == "transfer":
        if deformed:
            raise UsageError("the transfer oracle is undeformed only")
        return _pairs_nf(transfer_coefficients(basis_of(h), n))
    if name == "enumerate":
        basis = basis_of(h)
        if deformed:
            shapes = set(power_normal_order(h, n).pairs())
            out = {}
            for sh in shapes:
                out[sh] = crossing_weighted_count(basis, n, sh, q, max_size=args.max_size)
            return _pairs_nf(out, q)
        return _pairs_nf(diagram_totals(basis, n, max_size=args.max_size))
    if name == "rook":
        if deformed:
            raise UsageError("the rook oracle is undeformed only")
        return _pairs_nf(rook_totals(basis_of(h), n))
    if name in ("paths", "wick"):
        if deformed:
            raise UsageError(f"the {name} oracle is undeformed only")
        if op.modes != 1:
            raise UsageError(f"the {name} oracle handles a single mode")
        p = op ** n
        bound = args.max_word_len if args.max_word_len is not None else WICK_MAX_LEN
        if p.degree() > bound:
            raise BoundExceeded(f"{name} oracle word length", p.degree(), bound)
        if name == "paths":
            ct = 0
            for w, c in p.terms.items():
                ct = ct + c * weyl_path_ct(w)
            return _pairs_nf({(0, 0): ct})
        out = NormalForm()
        for w, c in p.terms.items():
            out = out + wick_normal_order(w, max_len=bound).scale(c)
        return out
    raise UsageError(f"unknown oracle {name!r}; choose from {', '.join(ORACLES)}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_normal_order(args) -> int:
    op = build_operator(args.expr, args)
    nf = power_normal_order(normal_order(op), args.power) if args.power is not None else normal_order(op)
    print(render_nf(nf, args.format))
    return 0


def cmd_ct(args) -> int:
    op = build_operator(args.expr, args)
    nf = power_normal_order(normal_order(op), args.power)
    ct = format_coeff(constant_term(nf))
    if args.format == "json":
        print(dumps({"power": args.power, "q": q_label(nf.q), "ct": ct}))
    elif args.format == "csv":
        print(f"power,ct\n{args.power},{_csv_cell(ct)}")
    else:
        print(ct)
    return 0


def _csv_cell(s: str) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow([s])
    return buf.getvalue()


def cmd_exp_normal(args) -> int:
    op = build_operator(args.expr, args)
    seq = exp_normal_order(normal_order(op), args.order)
    if args.format == "json":
        print(dumps({"modes": op.modes, "q": q_label(op.q),
                     "orders": [dict(nf_to_dict(nf), n=n) for n, nf in enumerate(seq)]}))
        return 0
    modes = op.modes
    header = ["n"] + [f"x{j}" for j in range(modes)] + [f"d{j}" for j in range(modes)] + ["coeff"]
    rows = []
    for n, nf in enumerate(seq):
        for m, c in nf.items():
            rows.append([str(n)] + [str(a) for a, _ in m] + [str(b) for _, b in m] + [format_coeff(c)])
    print(render_rows(header, rows, args.format))
    return 0


def _parse_params(items: Sequence[str]) -> Dict[str, object]:
    raw = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"parameter {item!r} must look like name=value")
        k, v = item.split("=", 1)
        raw[k.strip()] = v.strip()
    # symbolic values share one context built from all symbols mentioned
    nodes = {k: parse_expression(v) for k, v in raw.items() if not _list_text(v)}
    names = set()
    for node in nodes.values():
        names |= symbols_of(node)
    params = tuple(sorted(names))
    out: Dict[str, object] = {}
    for k, v in raw.items():
        if _list_text(v):
            out[k] = tuple(Fraction(x) for x in v.split(","))
        else:
            c = to_coefficient(nodes[k], params)
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            out[k] = c
    return out


def _list_text(v: str) -> bool:
    return "," in v


def cmd_series(args) -> int:
    params = _parse_params(args.param)
    if "r" in params:
        params["r"] = int(params["r"])
    s = closed_gf(args.family, args.order, **params)
    egf = s.egf()
    rows = [[str(n), format_coeff(c), format_coeff(e)] for n, (c, e) in enumerate(zip(s.coeffs, egf))]
    print(render_rows(["n", "coeff", "egf"], rows, args.format, {"family": args.family, "order": args.order}))
    return 0


def _cf_spec(text: str, order: int):
    depth = order // 2 + 1
    if text == "hermite":
        return jfraction_expand(JFractionSpec(mu=lambda k: k, depth=depth), order)
    if text.startswith("fermat:"):
        r = int(text.split(":", 1)[1])
        return jfraction_expand(JFractionSpec(mu=fermat_mu(r), depth=depth), order)
    if text == "q-hermite":
        return q_jfraction_expand(lambda k: [k], order)
    if text == "q-fermat2":
        return q_jfraction_expand(lambda k: [2 * k - 1, 2 * k], order)
    if text.startswith("mu:"):
        mus = [Fraction(x) for x in text[3:].split(",") if x.strip()]
        return jfraction_expand(JFractionSpec(mu=lambda k: mus[k - 1] if k - 1 < len(mus) else 0,
                                              depth=len(mus) + 1), order)
    raise UsageError(f"unknown continued-fraction spec {text!r}")


def cmd_cf(args) -> int:
    s = _cf_spec(args.spec, args.order)
    rows = [[str(n), format_coeff(c)] for n, c in enumerate(s.coeffs)]
    print(render_rows(["n", "coeff"], rows, args.format, {"spec": args.spec, "order": args.order}))
    return 0


NUMBER_FAMILIES = {
    "stirling2": (nb.stirling2, 2),
    "stirling1": (nb.stirling1, 2),
    "bell": (nb.bell, 1),
    "gen-bell-22": (nb.gen_bell_22, 1),
    "gen-stirling-rs": (nb.gen_stirling_rs, 4),
    "lah": (nb.lah_gamma, 3),
    "scherk": (nb.scherk_c, 3),
    "involution": (nb.involution_coeff, 3),
    "touchard": (lambda n: nb.touchard_riordan(n), 1),
    "duchon": (nb.duchon, 1),
    "matrix": (nb.matrix_counts, 1),
    "ehrenfest": (nb.ehrenfest_prob, 4),
    "coupon": (nb.coupon_collector, 3),
    "coupon-expected": (nb.coupon_expected, 2),
}


def cmd_numbers(args) -> int:
    if args.family not in NUMBER_FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(NUMBER_FAMILIES)}")
    fn, arity = NUMBER_FAMILIES[args.family]
    if len(args.args) != arity:
        raise UsageError(f"{args.family} takes {arity} integer arguments")
    try:
        ints = [int(a) for a in args.args]
    except ValueError:
        raise UsageError("number arguments must be integers")
    val = fn(*ints)
    text = ", ".join(format_coeff(v) for v in val) if isinstance(val, tuple) else format_coeff(val)
    if args.format == "json":
        print(dumps({"family": args.family, "args": ints, "value": text}))
    elif args.format == "csv":
        print("family,value\n" + args.family + "," + _csv_cell(text))
    else:
        print(text)
    return 0


def cmd_oracle_compare(args) -> int:
    op = build_operator(args.expr, args)
    names = [s.strip() for s in args.oracles.split(",") if s.strip()]
    if not names:
        raise UsageError("no oracles selected")
    results = [(name, run_oracle(name, op, args.power, args)) for name in names]
    ref_name, ref = results[0]
    ct_only = {"paths"}
    for name, nf in results[1:]:
        if name in ct_only or ref_name in ct_only:
            keys = [((0, 0),) * op.modes]
        else:
            keys = sorted(set(ref.terms) | set(nf.terms))
        for k in keys:
            a, b = ref.terms.get(k, 0), nf.terms.get(k, 0)
            if a != b:
                mono = ", ".join(f"({x},{d})" for x, d in k)
                print(f"disagreement at {mono}: {ref_name}={format_coeff(a)} {name}={format_coeff(b)}")
                return EXIT_DISAGREE
    summary = {"power": args.power, "oracles": names, "agree": True, "terms": len(ref.terms)}
    if args.format == "json":
        print(dumps(summary))
    else:
        print(f"all {len(names)} oracles agree on {len(ref.terms)} coefficient(s)")
    return 0


def cmd_dump_diagrams(args) -> int:
    op = build_operator(args.expr, args)
    if op.q != 1:
        raise UsageError("dump-diagrams is undeformed only")
    basis = basis_of(normal_order(op))
    shape = tuple(int(x) for x in args.shape.split(",")) if args.shape else None
    first = True
    for d in iter_diagrams(basis, args.size, max_size=args.max_size):
        if shape is not None and d.shape() != shape:
            continue
        if not first:
            print()
        first = False
        a, b = d.shape()
        print(f"# shape ({a},{b}) weight {format_coeff(d.weight(basis))} contour {d.contour() or '(empty)'}")
        if d.size:
            print(d.dump())
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weylkit", description="Exact normal ordering in the Weyl algebra.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, q=True):
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        if q:
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--q", metavar="V", help="numeric deformation (rational)")
            g.add_argument("--q-symbolic", action="store_true", help="symbolic deformation q")
        sp.add_argument("--max-size", type=int, default=MAX_DIAGRAM_SIZE, help="diagram enumeration bound")
        sp.add_argument("--max-word-len", type=int, default=None,
                        help=f"word-length bound for word oracles (default {REWRITE_MAX_LEN} for rewrite, "
                             f"{WICK_MAX_LEN} for paths and wick)")

    sp = sub.add_parser("normal-order", help="normal form of EXPR (or EXPR^N)")
    sp.add_argument("expr")
    sp.add_argument("--power", type=int)
    common(sp)
    sp.set_defaults(func=cmd_normal_order)

    sp = sub.add_parser("ct", help="constant term of EXPR^N")
    sp.add_argument("expr")
    sp.add_argument("--power", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_ct)

    sp = sub.add_parser("exp-normal", help="normal forms of EXPR^n for n = 0..order")
    sp.add_argument("expr")
    sp.add_argument("--order", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_exp_normal)

    sp = sub.add_parser("series", help="closed generating function")
    sp.add_argument("family")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--param", action="append", metavar="NAME=VALUE")
    common(sp, q=False)
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("cf", help="continued fraction expansion")
    sp.add_argument("spec", help="hermite | fermat:R | q-hermite | q-fermat2 | mu:m1,m2,...")
    sp.add_argument("--order", type=int, required=True)
    common(sp, q=False)
    sp.set_defaults(func=cmd_cf)

    sp = sub.add_parser("numbers", help="closed-form number families")
    sp.add_argument("family")
    sp.add_argument("args", nargs="*")
    common(sp, q=False)
    sp.set_defaults(func=cmd_numbers)

    sp = sub.add_parser("oracle-compare", help="cross-check EXPR^N across independent oracles")
    sp.add_argument("expr")
    sp.add_argument("--power", type=int, required=True)
    sp.add_argument("--oracles", default="rewrite,compose,transfer")
    common(sp)
    sp.set_defaults(func=cmd_oracle_compare)

    sp = sub.add_parser("dump-diagrams", help="list labelled diagrams of EXPR with N gates")
    sp.add_argument("expr")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--shape", help="only diagrams with shape A,B")
    common(sp)
    sp.set_defaults(func=cmd_dump_diagrams)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("power", "order", "size"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            parser.error(f"--{name} must be nonnegative")
    try:
        return args.func(args)
    except BoundExceeded as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except ParseError as e:
        print(f"weylkit: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DeformationError, DomainError, SeriesError, ValueError, KeyError) as e:
        print(f"weylkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
