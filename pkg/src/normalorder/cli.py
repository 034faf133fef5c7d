"""Command-line front end.

Defaults come from, in increasing precedence: built-ins, a ``key = value``
config file (``--config``), the ``NORMAL_ORDER_DEFAULT_ORDER`` environment
variable, and finally explicit flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import boson, combinat, expr, flow, fps, sheffer, verify
from .boson import NormalForm, Side
from .errors import NormalOrderError

DEFAULTS = {
    "order": fps.DEFAULT_ORDER,
    "lambda_order": flow.DEFAULT_LAMBDA_ORDER,
    "numeric_order": flow.NUMERIC_LAMBDA_ORDER,
    "fock_dim": boson.DEFAULT_FOCK_DIM,
    "tolerance": flow.NUMERIC_TOLERANCE,
}
ENV_ORDER = "NORMAL_ORDER_DEFAULT_ORDER"


class UsageError(NormalOrderError):
    pass


def load_config(path: str | None) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    cfg = dict(DEFAULTS)
    if path:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key = value")
                key, val = (p.strip() for p in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in DEFAULTS:
                    raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
                cfg[key] = type(DEFAULTS[key])(float(val) if key == "tolerance" else int(val))
    env = os.environ.get(ENV_ORDER)
    if env:
        try:
            cfg["order"] = int(env)
        except ValueError:
            raise UsageError(f"{ENV_ORDER} must be an integer, got {env!r}") from None
    return cfg


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected RE,IM but got {text!r}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _lower_pair(q_text: str, v_text: str, center: Fraction, order: int, lambda_order: int | None):
    """Lower q and v; polynomial inputs get an x-order large enough for exact expansion."""
    q_node, v_node = expr.parse_expr(q_text), expr.parse_expr(v_text)
    poly = expr.is_polynomial(q_node) and expr.is_polynomial(v_node)
    if poly:
        deg = max(expr.poly_degree(q_node), expr.poly_degree(v_node), 0)
        q = expr.lower(q_node, center, deg)
        v = expr.lower(v_node, center, deg)
        if lambda_order is not None:
            n = flow.exact_x_order(q, v, lambda_order)
            q, v = q.with_order(n), v.with_order(n)
        return q, v, True
    return expr.lower(q_node, center, order), expr.lower(v_node, center, order), False


def _polynomial_operator(q_text: str, v_text: str, side: Side) -> NormalForm:
    q_node, v_node = expr.parse_expr(q_text), expr.parse_expr(v_text)
    if not (expr.is_polynomial(q_node) and expr.is_polynomial(v_node)):
        raise UsageError("this command needs polynomial q and v")
    q = expr.lower(q_node, 0, max(expr.poly_degree(q_node), 0))
    v = expr.lower(v_node, 0, max(expr.poly_degree(v_node), 0))
    return boson.linear_operator(q, v, side)


def _center_var(center: Fraction) -> str:
    if center == 0:
        return "x"
    sign = "-" if center > 0 else "+"
    return f"(x{sign}{abs(center)})"


# ---------------------------------------------------------------------------
# subcommands


def cmd_normal_order(args, cfg) -> int:
    side = Side.parse(args.side)
    lam_order = args.lambda_order if args.lambda_order is not None else cfg["lambda_order"]
    center = _rational(args.center)
    q, v, _ = _lower_pair(args.q, args.v, center, cfg["order"], lam_order)
    ne = flow.normal_exponential(q, v, side, lam_order)
    if args.json:
        data = ne.to_json()
        data["center"] = fps.format_rational(center)
        print(_dump(data))
        return 0
    var = _center_var(center)
    print(f"side: {side.value}")
    if center:
        print(f"center: {center}")
    print(f"T = {ne.T.format(var)}")
    print(f"G = {ne.G.format(var)}")
    if center:
        print("# expansion uses the shifted variable; coefficients below are in x - center")
    for n, nf in enumerate(ne.expand()):
        print(f"lambda^{n}: {nf}")
    return 0


def cmd_power(args, cfg) -> int:
    side = Side.parse(args.side)
    X = _polynomial_operator(args.q, args.v, side)
    result = boson.power(X, args.n)
    print(_dump(result.to_json()) if args.json else str(result))
    return 0


def _sheffer_pair(args, order: int) -> sheffer.ShefferPair:
    if args.family:
        if args.A or args.B:
            raise UsageError("give either --family or --A/--B, not both")
        return sheffer.catalog(args.family, order)
    if not (args.A and args.B):
        raise UsageError("sheffer needs --family NAME or both --A and --B")
    A = expr.lower_text(args.A, 0, order)
    B = expr.lower_text(args.B, 0, order)
    return sheffer.ShefferPair.from_AB(A, B, name="custom")


def cmd_sheffer(args, cfg) -> int:
    order = max(args.n_max + 3, cfg["order"])
    pair = _sheffer_pair(args, order)
    polys = sheffer.sequence_from_pair(pair, args.n_max)
    report = sheffer.monomiality_check(pair, args.n_max)
    if args.json:
        data = {
            "family": pair.name,
            "polynomials": [p.to_json(pair.name, n) for n, p in enumerate(polys)],
            "monomiality": {
                "passed": report.passed,
                "checked": report.checked,
                "failures": report.failures,
            },
        }
        print(_dump(data))
    else:
        print(sheffer.format_table(polys, pair.name))
        status = "PASS" if report.passed else "FAIL"
        print(f"monomiality: {status} ({report.checked} identities, n <= {args.n_max})")
        for f in report.failures:
            print(f"  {f}")
    return 0 if report.passed else 1


def cmd_sequence(args, cfg) -> int:
    if args.name:
        rec = combinat.named_sequence(args.name, args.n_max, r=args.r)
    else:
        if not (args.A and args.B):
            raise UsageError("sequence needs --name NAME or --A, --B and --z")
        order = max(args.n_max, 0)
        A = expr.lower_text(args.A, 0, order)
        B = expr.lower_text(args.B, 0, order)
        z = _rational(args.z)
        terms = combinat.egf_terms(A, B, z, args.n_max)
        integer = all(t.denominator == 1 for t in terms)
        rec = combinat.sequence_from_egf(
            A, B, z, args.n_max, name="custom", integer=integer,
            provenance=f"A={args.A}, B={args.B}, z={z}",
        )
    print(_dump(rec.to_json()) if args.json else rec.to_text())
    return 0


def cmd_reverse(args, cfg) -> int:
    order = args.order if args.order is not None else cfg["order"]
    zp = _rational(args.zprime)
    A = expr.lower_text(args.A, 0, order + 1)
    B = expr.lower_text(args.B, 0, order + 1)
    pair = flow.qv_from_sheffer(A, B, zp)
    if args.json:
        print(_dump(pair.to_json()))
    else:
        var = _center_var(zp)
        print(f"center: {zp}")
        print(f"q = {pair.q.format(var)}")
        print(f"v = {pair.v.format(var)}")
    return 0


def cmd_verify(args, cfg) -> int:
    checks = verify.run_suite(args.suite, args.order, args.seed)
    for c in checks:
        print(c.line())
    passed = sum(c.passed for c in checks)
    print(f"{args.suite}: {passed}/{len(checks)} passed")
    return 0 if passed == len(checks) else 1


def cmd_matrix_element(args, cfg) -> int:
    side = Side.parse(args.side)
    lam = _rational(args.lam)
    z, zp = _complex(args.z), _complex(args.zprime)
    dim = args.fock_dim if args.fock_dim is not None else cfg["fock_dim"]
    X = _polynomial_operator(args.q, args.v, side)
    n = cfg["numeric_order"]
    q = expr.lower_text(args.q, 0, n)
    v = expr.lower_text(args.v, 0, n)
    exact = flow.coherent_element(
        q, v, float(lam), zp, z, side, order=n, tolerance=cfg["tolerance"]
    ) * boson.overlap(zp, z)
    numeric = boson.coherent_expectation(boson.fock_exp(X, float(lam), dim), zp, z)
    diff = abs(exact - numeric)
    if args.json:
        print(_dump({
            "series": [float(f"{exact.real:.12g}"), float(f"{exact.imag:.12g}")],
            "fock": [float(f"{numeric.real:.12g}"), float(f"{numeric.imag:.12g}")],
            "difference": float(f"{diff:.12g}"),
            "fock_dim": dim,
        }))
    else:
        print(f"series: {exact.real:.12g} {exact.imag:+.12g}i")
        print(f"fock:   {numeric.real:.12g} {numeric.imag:+.12g}i  (dim {dim})")
        print(f"diff:   {diff:.12g}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="normalorder",
        description="Exact normal ordering of operators linear in one boson.",
    )
    p.add_argument("--config", help="key = value file with default orders and tolerances")
    sub = p.add_subparsers(dest="command", required=True)

    def add_qv(sp):
        sp.add_argument("--q", required=True, help="q(x), e.g. 'x^2'")
        sp.add_argument("--v", default="0", help="v(x), e.g. '1/(2-x)'")
        sp.add_argument("--side", default="creation",
                        help="creation: q(a†)a+v(a†); annihilation: a†q(a)+v(a)")
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("normal-order", help="T, G and the lambda-expansion of exp(lambda X)")
    add_qv(sp)
    sp.add_argument("--lambda-order", type=int)
    sp.add_argument("--center", default="0", help="expansion center for q and v")
    sp.set_defaults(func=cmd_normal_order)

    sp = sub.add_parser("power", help="exact normal form of X^n by direct reordering")
    add_qv(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_power)

    sp = sub.add_parser("sheffer", help="polynomial table and monomiality check")
    sp.add_argument("--family", choices=list(sheffer.CATALOG))
    sp.add_argument("--A")
    sp.add_argument("--B")
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_sheffer)

    sp = sub.add_parser("sequence", help="integer sequence from a Sheffer EGF")
    sp.add_argument("--name", choices=list(combinat.SEQUENCES))
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--A")
    sp.add_argument("--B")
    sp.add_argument("--z", default="1")
    sp.add_argument("--n-max", type=int, default=6)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_sequence)

    sp = sub.add_parser("reverse", help="q and v reproducing a given Sheffer pair")
    sp.add_argument("--A", required=True)
    sp.add_argument("--B", required=True)
    sp.add_argument("--zprime", default="0")
    sp.add_argument("--order", type=int)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_reverse)

    sp = sub.add_parser("verify", help="run an invariant suite; exit 1 on any failure")
    sp.add_argument("--suite", required=True, choices=list(verify.SUITES))
    sp.add_argument("--order", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("matrix-element", help="<z'|exp(lambda X)|z> by series and by Fock matrix")
    add_qv(sp)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--z", required=True, help="RE,IM")
    sp.add_argument("--zprime", required=True, help="RE,IM")
    sp.add_argument("--fock-dim", type=int)
    sp.set_defaults(func=cmd_matrix_element)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (NormalOrderError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
