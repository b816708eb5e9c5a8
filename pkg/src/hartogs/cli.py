"""Command-line front end: ``hartogs <command> [options]``.

Every command writes one report (JSON by default) to stdout or ``--output``.
Exit status: 0 success, 2 invalid input, 3 numerical non-convergence,
4 an asserted invariant failed, 5 the report could not be written.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from fractions import Fraction

import numpy as np

from . import __version__
from .classify import SCAN_HEADER, classify, format_number, parse_number, phase_scan, projection_self_bounded, scan_rows_as_text, upper_edge
from .domain import DomainError, Point2C, check_k, sample_points
from .kernel import coefficient_polys, diagonal_bound_constants, diagonal_bounds, kernel, kernel_series
from .quadrature import QuadSpec

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_INVARIANT, EXIT_IO = 0, 2, 3, 4, 5
SIG_DIGITS = 15
THREADS_ENV = "HARTOGS_THREADS"


class InvariantViolation(RuntimeError):
    pass


# --------------------------------------------------------------------------
# serialisation


def _clean(x):
    """Plain JSON data with floats cut to 15 significant digits."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _clean(float(x.real)), "im": _clean(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.{SIG_DIGITS}g}")
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def render_json(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, ensure_ascii=False) + "\n"


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def make_report(command: str, params: dict, results, seed, quad=None, derived=None) -> dict:
    return {
        "command": command,
        "params": params,
        "results": results,
        "quadrature": quad or {"nodes": 0, "error_estimate": 0.0, "refinements": []},
        "seed": seed,
        "derived_constants": derived or {},
    }


def _quad_summary(results) -> dict:
    """Largest node count and error estimate over IntegralResults."""
    nodes, err, refs = 0, 0.0, []
    for r in results:
        nodes = max(nodes, int(r.nodes))
        err = max(err, float(r.error_estimate))
        refs.append(r.levels)
    return {"nodes": nodes, "error_estimate": err, "refinements": refs}


def kernel_constants(k: int) -> dict:
    c = diagonal_bound_constants(k)
    return {
        "c_lo": {"value": c.c_lo, "derivation": "c_lo=1/(k*pi^2)"},
        "c_hi": {"value": c.c_hi, "derivation": "c_hi=(2p_k(1)+q_k(1))/(k*pi^2)"},
    }


# --------------------------------------------------------------------------
# argument helpers


def _rational(s: str):
    try:
        return parse_number(s)
    except (ValueError, TypeError) as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _complex(s: str) -> complex:
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}") from None


def _point(s: str) -> Point2C:
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("a point is 'z1,z2'")
    return Point2C(_complex(parts[0]), _complex(parts[1]))


def _exponent(s: str) -> tuple:
    try:
        b1, b2 = (int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("an exponent is 'b1,b2'") from None
    return (b1, b2)


def _spec(args, base: QuadSpec) -> QuadSpec:
    over = {
        "radial_nodes": args.radial_nodes,
        "angular_nodes": args.angular_nodes,
        "grading": args.grading,
        "depth": args.depth,
        "refine_levels": args.refine_levels,
        "rel_tol": args.rel_tol,
    }
    kw = {f: getattr(base, f) for f in over}
    kw.update({f: v for f, v in over.items() if v is not None})
    return QuadSpec(**kw)


def _as_float(x) -> float:
    return float(x)


def _spec_dict(s: QuadSpec) -> dict:
    return {f: getattr(s, f) for f in ("radial_nodes", "angular_nodes", "grading", "depth", "refine_levels", "rel_tol")}


# --------------------------------------------------------------------------
# commands


def cmd_kernel(args):
    k = check_k(args.k)
    if args.z is not None:
        w = args.w if args.w is not None else args.z
        pairs = [(args.z, w)]
    else:
        zs = sample_points(k, args.points, args.seed, args.margin)
        ws = sample_points(k, args.points, args.seed + 1, args.margin)
        pairs = list(zip(zs, ws))
    rows = []
    for z, w in pairs:
        closed = complex(kernel(k, z, w))
        series = kernel_series(k, z, w, args.caps, args.caps)
        row = {"z": list(z), "w": list(w), "K": closed, "series": series, "rel_diff": abs(closed - series) / abs(closed)}
        if z == w:
            lo, hi = diagonal_bounds(k, z)
            row["envelope_lo"], row["envelope_hi"] = float(lo), float(hi)
        rows.append(row)
    p1, q1 = coefficient_polys(k, 1.0)
    derived = kernel_constants(k)
    derived["p_k(1)"] = {"value": float(p1), "derivation": "p_k(1)=sum_j j(k-j)"}
    derived["q_k(1)"] = {"value": float(q1), "derivation": "q_k(1)=sum_j j^2+(k-j)^2"}
    params = {"k": k, "points": len(pairs), "caps": args.caps, "margin": args.margin}
    return make_report("kernel", params, rows, args.seed, derived=derived), EXIT_OK


def cmd_classify(args):
    k = check_k(args.k)
    v = classify(k, args.p, args.q)
    res = v.as_dict()
    if args.alpha is not None:
        res["alpha"] = format_number(args.alpha)
        res["bounded_at_alpha"] = v.admits(args.alpha)
    if args.p == args.q:
        res["projection_self_bounded"] = projection_self_bounded(k, args.p)
    params = {"k": k, "p": format_number(args.p), "q": format_number(args.q)}
    derived = {
        "case_I_edge": {"value": Fraction(k, 2 * k + 2), "derivation": "case I iff 1/q<=k/(2k+2)"},
        "case_III_edge": {"value": upper_edge(k, 1 / args.p), "derivation": "case III iff 1/q>=(k+2)/(2k)-1/(kp)"},
    }
    return make_report("classify", params, res, args.seed, derived=derived), EXIT_OK


def cmd_phase_scan(args):
    k = check_k(args.k)
    rows = phase_scan(k, args.grid)
    if args.format == "csv":
        return render_csv(SCAN_HEADER, scan_rows_as_text(rows)), EXIT_OK
    res = [dict(zip(SCAN_HEADER, r)) for r in scan_rows_as_text(rows)]
    return make_report("phase-scan", {"k": k, "grid": args.grid}, res, args.seed), EXIT_OK


def cmd_toeplitz(args):
    from .toeplitz import DEFAULT_SPEC, LaurentPoly, Monomial, apply_toeplitz, monomial, project_basis_oracle

    k = check_k(args.k)
    alpha = _as_float(args.alpha)
    spec = _spec(args, DEFAULT_SPEC)
    inputs = [("z^%d,%d" % b, monomial(b)) for b in (args.monomial or [])]
    if args.conj_z2 or not inputs:
        inputs.append(("conj(z2)", LaurentPoly((Monomial(1.0, (0, 0), (0, 1)),))))
    pts = [args.z] if args.z is not None else sample_points(k, args.points, args.seed, args.margin)
    rows, quads = [], []
    for z in pts:
        res = apply_toeplitz(k, alpha, [f for _, f in inputs], z, spec)
        quads.append(res)
        for i, (name, f) in enumerate(inputs):
            oracle = project_basis_oracle(k, alpha, f, z, (args.caps, args.caps), spec)
            quads.append(oracle)
            val = complex(res.value[i])
            rows.append({
                "z": list(z),
                "input": name,
                "quadrature": val,
                "basis_oracle": oracle.value,
                "rel_diff": abs(val - oracle.value) / max(abs(oracle.value), 1e-300),
                "converged": res.converged,
            })
    params = {"k": k, "alpha": format_number(args.alpha), "points": len(pts), "caps": args.caps, "spec": _spec_dict(spec)}
    status = EXIT_OK if all(q.converged for q in quads) else EXIT_NUMERIC
    return make_report("toeplitz", params, rows, args.seed, _quad_summary(quads), kernel_constants(k)), status


def cmd_schur(args):
    from .schur import SCHUR_SPEC, SchurParams, empirical_ratio, schur_certify
    from .toeplitz import random_polynomial

    k = check_k(args.k)
    p, q, alpha = _as_float(args.p), _as_float(args.q), _as_float(args.alpha)
    sp = SchurParams.default(k, p, q, alpha)
    if args.beta is not None:
        sp = SchurParams(sp.p, sp.q, sp.eta, _as_float(args.beta), sp.gamma)
    if args.gamma is not None:
        sp = SchurParams(sp.p, sp.q, sp.eta, sp.beta, _as_float(args.gamma))
    sp.validate(k)
    spec = _spec(args, SCHUR_SPEC)
    cert = schur_certify(k, alpha, sp, spec, args.samples, args.seed)
    ratios = [empirical_ratio(k, alpha, p, q, random_polynomial(args.seed + i)) for i in range(args.polys)]
    res = cert.as_dict()
    res["empirical_ratios"] = ratios
    res["empirical_within_bound"] = all(r <= cert.normBound * 1.05 for r in ratios)
    params = {"k": k, "p": format_number(args.p), "q": format_number(args.q), "alpha": format_number(args.alpha),
              "samples": args.samples, "polys": args.polys, "spec": _spec_dict(spec)}
    derived = {"normBound": {"value": cert.normBound, "derivation": "normBound=C1^((p-1)/p)*C2^(1/q)*supA"}}
    quad = {"nodes": 0, "error_estimate": max(abs(cert.details["C1_levels"][-1] - cert.details["C1_levels"][-2]),
                                             abs(cert.details["C2_levels"][-1] - cert.details["C2_levels"][-2])),
            "refinements": [cert.details["C1_levels"], cert.details["C2_levels"]]}
    if cert.divergent or not cert.refinementStable:
        status = EXIT_NUMERIC
    elif not res["empirical_within_bound"]:
        status = EXIT_INVARIANT
    else:
        status = EXIT_OK
    return make_report("schur", params, res, args.seed, quad, derived), status


def cmd_counterexample(args):
    from .toeplitz import counterexample_growth

    k = check_k(args.k)
    p, q, alpha = _as_float(args.p), _as_float(args.q), _as_float(args.alpha)
    rep = counterexample_growth(k, p, q, alpha, args.j_max)
    params = {"k": k, "p": format_number(args.p), "q": format_number(args.q), "alpha": format_number(args.alpha), "j_max": args.j_max}
    status = EXIT_OK if all(r["c_j_converged"] for r in rep["rows"]) else EXIT_NUMERIC
    if args.format == "csv":
        header = ["j", "norm_f_p_pow", "c_j", "norm_Tf_q", "ratio"]
        rows = [[r["j"]] + [format(float(r[h]), ".15g") for h in header[1:]] for r in rep["rows"]]
        return render_csv(header, rows), status
    quad = {"nodes": 0, "error_estimate": max(r["c_j_error"] for r in rep["rows"]), "refinements": []}
    derived = {
        "c0": {"value": rep["c0"], "derivation": "c0=zeta(p)"},
        "inv_z2_norm_q": {"value": rep["inv_z2_norm_q"], "derivation": "||1/z2||_q=(2pi^2k/(2k+2-kq))^(1/q)"},
    }
    return make_report("counterexample", params, rep, args.seed, quad, derived), status


def cmd_green_check(args):
    from .green import herbort_blocki_battery, mobius_comparability_check, sublevel_comparability_check, sublevel_comparability_constant

    mob = mobius_comparability_check(args.samples, args.seed)
    comp = []
    for k in (1, 2):
        for pole in ((0.0, 0.5), (0.3, 0.5), (0.1 + 0.2j, 0.9)):
            comp.append(sublevel_comparability_check(k, pole, 1.0, args.sublevel_samples, args.seed))
    her = herbort_blocki_battery()
    res = {
        "mobius": mob,
        "sublevel_comparability": comp,
        "herbort_blocki": [{x: r[x] for x in ("polynomial", "w", "t", "lhs", "rhs", "holds")} for r in her],
    }
    bad = mob["violations"] + sum(r["violations"] for r in comp) + sum(not r["holds"] for r in her)
    res["violations"] = bad
    derived = {
        "mobius_hi": {"value": (math.e + 1) / (math.e - 1), "derivation": "(e+1)/(e-1)"},
        "cmax_k1": {"value": sublevel_comparability_constant(1), "derivation": "Cmax=(c_hi/c_lo)*((1+e^-1)/(1-e^-1))^4"},
        "cmax_k2": {"value": sublevel_comparability_constant(2), "derivation": "Cmax=(c_hi/c_lo)*((1+e^-1)/(1-e^-1))^4"},
    }
    quad = {"nodes": max(r["quadrature"]["nodes"] for r in her),
            "error_estimate": max(r["quadrature"]["error_estimate"] for r in her), "refinements": []}
    status = EXIT_INVARIANT if bad else EXIT_OK
    return make_report("green-check", {"samples": args.samples, "sublevel_samples": args.sublevel_samples}, res, args.seed, quad, derived), status


def cmd_necessity(args):
    from .necessity import necessity_witness, trend_flip

    k = check_k(args.k)
    p, q = _as_float(args.p), _as_float(args.q)
    if args.alpha is None:
        res = trend_flip(k, p, q, args.delta)
        rows = res["below"]["rows"] + res["above"]["rows"]
    else:
        res = necessity_witness(k, p, q, _as_float(args.alpha), m_max=args.m_max)
        rows = res["rows"]
    quad = {"nodes": max(r["nodes"] for r in rows), "error_estimate": max(r["error_estimate"] for r in rows), "refinements": []}
    params = {"k": k, "p": format_number(args.p), "q": format_number(args.q),
              "alpha": None if args.alpha is None else format_number(args.alpha)}
    ok = all(r["converged"] for r in rows)
    return make_report("necessity", params, res, args.seed, quad, kernel_constants(k)), EXIT_OK if ok else EXIT_NUMERIC


def cmd_selftest(args):
    from .selftest import run_battery

    res = run_battery(args.seed)
    status = EXIT_OK if res["failures"] == 0 else EXIT_INVARIANT
    return make_report("selftest", {}, res, args.seed), status


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hartogs", description="Bergman-Toeplitz experiments on fat Hartogs triangles")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    quad = argparse.ArgumentParser(add_help=False)
    quad.add_argument("--radial-nodes", type=int)
    quad.add_argument("--angular-nodes", type=int)
    quad.add_argument("--grading", type=float)
    quad.add_argument("--depth", type=int)
    quad.add_argument("--refine-levels", type=int)
    quad.add_argument("--rel-tol", type=float)

    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("kernel", parents=[common], help="closed-form kernel vs series, envelopes")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--z", type=_point)
    s.add_argument("--w", type=_point)
    s.add_argument("--points", type=int, default=5)
    s.add_argument("--margin", type=float, default=0.2)
    s.add_argument("--caps", type=int, default=60)
    s.set_defaults(run=cmd_kernel)

    s = sub.add_parser("classify", parents=[common], help="phase verdict for (k, p, q)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=_rational, required=True)
    s.add_argument("--q", type=_rational, required=True)
    s.add_argument("--alpha", type=_rational)
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("phase-scan", parents=[common], help="region map over (1/p, 1/q)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--grid", type=int, default=50)
    s.set_defaults(run=cmd_phase_scan)

    s = sub.add_parser("toeplitz", parents=[common, quad], help="apply T at points, quadrature and basis oracle")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha", type=_rational, default=Fraction(0))
    s.add_argument("--z", type=_point)
    s.add_argument("--points", type=int, default=2)
    s.add_argument("--margin", type=float, default=0.2)
    s.add_argument("--monomial", type=_exponent, action="append")
    s.add_argument("--conj-z2", action="store_true")
    s.add_argument("--caps", type=int, default=8)
    s.set_defaults(run=cmd_toeplitz)

    s = sub.add_parser("schur", parents=[common, quad], help="Schur-test certificate")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=_rational, required=True)
    s.add_argument("--q", type=_rational, required=True)
    s.add_argument("--alpha", type=_rational, default=Fraction(0))
    s.add_argument("--beta", type=_rational)
    s.add_argument("--gamma", type=_rational)
    s.add_argument("--samples", type=int, default=10)
    s.add_argument("--polys", type=int, default=10)
    s.set_defaults(run=cmd_schur)

    s = sub.add_parser("counterexample", parents=[common], help="growth table of the blow-up sequence")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=_rational, required=True)
    s.add_argument("--q", type=_rational, required=True)
    s.add_argument("--alpha", type=_rational, default=Fraction(0))
    s.add_argument("--j-max", type=int, default=5)
    s.set_defaults(run=cmd_counterexample)

    s = sub.add_parser("green-check", parents=[common], help="Moebius, sublevel comparability and Herbort-Blocki batteries")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--sublevel-samples", type=int, default=1000)
    s.set_defaults(run=cmd_green_check)

    s = sub.add_parser("necessity", parents=[common], help="boundary witness trends")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=_rational, required=True)
    s.add_argument("--q", type=_rational, required=True)
    s.add_argument("--alpha", type=_rational, help="omit to test the flip at the classifier threshold")
    s.add_argument("--delta", type=float, default=0.05)
    s.add_argument("--m-max", type=int, default=7)
    s.set_defaults(run=cmd_necessity)

    s = sub.add_parser("selftest", parents=[common], help="fast invariant battery")
    s.set_defaults(run=cmd_selftest)
    return ap


def apply_thread_env() -> None:
    """Cap numba's thread pool from ``HARTOGS_THREADS``.  The compiled
    kernels reduce serially, so results never depend on this value."""
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return
    n = int(raw)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer")
    import numba

    with warnings.catch_warnings():
        # threading-layer probing warns about optional backends
        warnings.simplefilter("ignore")
        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code not in (0, None) else EXIT_OK
    if args.format == "csv" and args.command not in ("phase-scan", "counterexample"):
        print(f"error: --format csv is not available for {args.command}", file=sys.stderr)
        return EXIT_INPUT
    try:
        apply_thread_env()
        out, status = args.run(args)
    except (DomainError, ValueError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    text = out if isinstance(out, str) else render_json(out)
    try:
        emit(text, args.output)
    except OSError as e:
        print(f"error: cannot write report: {e}", file=sys.stderr)
        return EXIT_IO
    return status


if __name__ == "__main__":
    sys.exit(main())
