"""Command line interface.

Every subcommand reads an instance (a JSON file, or ``fixture:NAME`` for
one of the bundled examples) and reports either human-readable text or
JSON.  With a fixed instance and fixed --seed the output bytes are
identical from run to run; wall-clock timings are only included when
--timings is passed.

Exit codes: 0 success, 1 mathematical failure (degenerate instance,
non-convergence, step cap), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .bipoly import SurfForm, parse_surfform
from .errors import PipelineError, StepCapExceeded
from .groebner import eliminate_params
from .ideal_pieces import (
    basis_a1,
    choose_generic_U,
    ideal_piece,
    m_generators,
    subspace_from_forms,
)
from .instances import (
    Instance,
    fixture,
    fixture_names,
    instance_to_json,
    load_instance,
    save_instance,
)
from .points import (
    GenericityError,
    PointSet,
    conjugate,
    hilbert_table,
    is_generic,
    partitions,
    random_generic_points,
    stabilization_indices,
    stabilized_hilbert_check,
)
from .syzygy import mu_basis, qp_decompose
from .zcomplex import (
    build_d1,
    build_d1_direct,
    compute_d2,
    det_complex,
    implicitize,
    membership_rank_test,
    verify_implicit,
)


def _load_instance_arg(text):
    if text.startswith("fixture:"):
        name = text[len("fixture:") :]
        try:
            return fixture(name)
        except KeyError as e:
            raise ValueError(e.args[0]) from None
    return load_instance(text)


def _resolve_subspace(inst, cert_mode="spot"):
    if inst.forms is not None:
        return subspace_from_forms(inst.points, inst.a, inst.forms,
                                   mode=cert_mode)
    return choose_generic_U(inst.points, inst.a, inst.seed, mode=cert_mode)


def _emit(args, payload, text_lines):
    if args.format == "json":
        print(json.dumps(payload, indent=1))
    else:
        for line in text_lines:
            print(line)


# ----------------------------------------------------------------------
# subcommands


def cmd_analyze_points(args):
    inst = _load_instance_arg(args.instance)
    X = inst.points
    r = len(X)
    payload = {"r": r}
    lines = [f"points: {r}"]
    if r == 0:
        payload["generic"] = True
        lines.append("empty point set: nothing to analyze")
        _emit(args, payload, lines)
        return 0
    alpha, beta = partitions(X)
    payload["partitions"] = {
        "first": list(alpha.parts),
        "second": list(beta.parts),
        "first_conjugate": list(conjugate(alpha).parts),
        "second_conjugate": list(conjugate(beta).parts),
    }
    generic = is_generic(X)
    payload["generic"] = generic
    imax = args.window[0] if args.window else max(4, len(alpha) + 1)
    jmax = args.window[1] if args.window else max(4, len(beta) + 1)
    table = hilbert_table(X, imax, jmax)
    payload["hilbert"] = table
    payload["stabilization"] = {
        "row_of_column_0": stabilization_indices(X, j=0),
        "column_of_row_0": stabilization_indices(X, i=0),
    }
    check = stabilized_hilbert_check(X)
    payload["stabilized_formulas_ok"] = check.ok
    lines.append(f"generic: {'yes' if generic else 'no'}")
    lines.append(f"fiber partition (first factor):  {list(alpha.parts)}")
    lines.append(f"fiber partition (second factor): {list(beta.parts)}")
    lines.append(f"hilbert function values, rows i = 0..{imax}, "
                 f"columns j = 0..{jmax}:")
    width = len(str(r)) + 1
    for row in table:
        lines.append("  " + " ".join(f"{v:{width}d}" for v in row))
    lines.append(
        "stabilized closed-form check: "
        + ("ok" if check.ok else f"FAILED {check.failures[:4]}")
    )
    _emit(args, payload, lines)
    return 0


def cmd_ideal_basis(args):
    inst = _load_instance_arg(args.instance)
    X, a = inst.points, inst.a
    gens = m_generators(X)
    sb = basis_a1(X, a, gens=gens)
    piece = ideal_piece(X, (a, 1))
    payload = {
        "r": len(X),
        "a": a,
        "g1": str(gens.g1),
        "g2": str(gens.g2),
        "generator_degrees": [list(d) for d in gens.degrees],
        "dimension": piece.dimension,
        "basis": [str(f) for f in sb.forms],
        "labels": [[which, list(mono)] for which, mono in sb.labels],
    }
    lines = [
        f"r = {len(X)}, a = {a}",
        f"g1 (degree {gens.g1.bidegree}): {gens.g1}",
        f"g2 (degree {gens.g2.bidegree}): {gens.g2}",
        f"(a, 1) piece dimension: {piece.dimension}",
        "structured basis (monomial shifts of g1, g2):",
    ]
    for (which, mono), f in zip(sb.labels, sb.forms):
        es, et = mono[0], mono[1]
        lines.append(f"  s^{es} t^{et} * g{which + 1}: {f}")
    _emit(args, payload, lines)
    return 0


def cmd_mu_basis(args):
    inst = _load_instance_arg(args.instance)
    U = _resolve_subspace(inst)
    qp = qp_decompose(U)
    mb = mu_basis(qp)
    payload = {
        "mu_degrees": [mb.mu1, mb.mu2],
        "K1": [str(k) for k in mb.K1],
        "K2": [str(k) for k in mb.K2],
    }
    lines = [
        f"mu degrees: ({mb.mu1}, {mb.mu2})",
        "K1 = (" + ", ".join(str(k) for k in mb.K1) + ")",
        "K2 = (" + ", ".join(str(k) for k in mb.K2) + ")",
    ]
    _emit(args, payload, lines)
    return 0


def _result_payload(out, timings=False):
    res = out.result
    payload = {
        "H": str(res.H),
        "degree": res.H.degree,
        "mu_degrees": [out.mb.mu1, out.mb.mu2],
        "d1": out.cn.d1_strings(),
        "d2": out.cn.d2_strings(),
        "verification": res.verification,
        "power_screen": res.power_screen,
    }
    if timings:
        payload["timings_ms"] = {
            k: round(v, 3) for k, v in out.timings_ms.items()
        }
    return payload


def cmd_implicitize(args):
    inst = _load_instance_arg(args.instance)
    if args.method == "elimination":
        U = _resolve_subspace(inst)
        t0 = time.perf_counter()
        H = eliminate_params(U, step_cap=args.step_cap)
        ms = (time.perf_counter() - t0) * 1000.0
        verification = verify_implicit(H, U, samples=args.samples,
                                       seed=args.seed)
        payload = {
            "H": str(H),
            "degree": H.degree,
            "mu_degrees": None,
            "d1": [],
            "d2": [],
            "verification": verification,
        }
        if args.timings:
            payload["timings_ms"] = {"elimination": round(ms, 3)}
        lines = [
            f"H (degree {H.degree}, {len(H.terms)} terms) = {H}",
            f"verification: {verification}",
        ]
        if args.timings:
            lines.append(f"elimination time: {ms:.1f} ms")
    else:
        method = "direct" if args.method == "direct" else "bump"
        out = implicitize(
            inst.points,
            inst.a,
            forms=inst.forms,
            seed=inst.seed,
            method=method,
            samples=args.samples,
            threads=args.threads,
            det_seed=args.seed,
        )
        payload = _result_payload(out, timings=args.timings)
        res = out.result
        lines = [
            f"mu degrees: ({out.mb.mu1}, {out.mb.mu2})",
            f"d1: {out.cn.rows} x {out.cn.cols} matrix of linear forms",
            f"H (degree {res.H.degree}, {len(res.H.terms)} terms) = "
            + (str(res.H) if len(res.H.terms) <= args.print_cap
               else "[suppressed; use --format json or --out]"),
            f"verification: {res.verification}",
        ]
        if res.power_screen.get("suspect"):
            lines.append(
                "warning: H is consistent with a perfect power of "
                f"exponent {res.power_screen['exponent']}"
            )
        if args.timings:
            lines.append(
                "timings (ms): "
                + ", ".join(f"{k}={v:.0f}"
                            for k, v in out.timings_ms.items())
            )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        lines.append(f"result written to {args.out}")
    _emit(args, payload, lines)
    return 0


def cmd_verify(args):
    inst = _load_instance_arg(args.instance)
    with open(args.result) as fh:
        data = json.load(fh)
    H = parse_surfform(data["H"], int(data["degree"]))
    U = _resolve_subspace(inst)
    report = verify_implicit(H, U, samples=args.samples, seed=args.seed,
                             substitution=args.substitution)
    payload = {"verification": report}
    lines = [f"verification: {report}"]
    _emit(args, payload, lines)
    return 0 if report["ok"] else 1


def cmd_membership(args):
    inst = _load_instance_arg(args.instance)
    try:
        q = [Fraction(part) for part in args.point.split(",")]
    except (ValueError, ZeroDivisionError):
        print("error: --point coordinates must be rational numbers",
              file=sys.stderr)
        return 2
    if len(q) != 4:
        print("error: --point needs four comma-separated coordinates",
              file=sys.stderr)
        return 2
    U = _resolve_subspace(inst)
    mb = mu_basis(qp_decompose(U))
    cn = build_d1(U, mb)
    verdict = membership_rank_test(cn, q)
    payload = {"point": [str(x) for x in q], "verdict": verdict}
    lines = [f"{verdict}"]
    _emit(args, payload, lines)
    return 0


def cmd_random_instance(args):
    X = random_generic_points(args.r, args.seed)
    inst = Instance(points=X, a=args.a, seed=args.subspace_seed,
                    name=None)
    data = instance_to_json(inst)
    if args.out:
        save_instance(inst, args.out)
        print(f"instance written to {args.out}")
    else:
        print(json.dumps(data, indent=1))
    return 0


def cmd_bench(args):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in ("alg1", "alg2", "elimination")]
    if bad:
        print(f"error: unknown bench methods {bad}", file=sys.stderr)
        return 2
    if args.instance:
        inst = _load_instance_arg(args.instance)
    else:
        X = random_generic_points(args.r, args.seed)
        inst = Instance(points=X, a=args.a, seed=args.seed)
    U = _resolve_subspace(inst)
    qp = qp_decompose(U)
    mb = mu_basis(qp)
    report = {}
    results = {}
    if "alg1" in methods:
        t0 = time.perf_counter()
        qp1 = qp_decompose(U)
        mb1 = mu_basis(qp1)
        cn1 = build_d1(U, mb1)
        t_d1 = time.perf_counter() - t0
        compute_d2(cn1)
        res = det_complex(cn1, seed=args.seed, threads=args.threads)
        t_full = time.perf_counter() - t0
        report["alg1"] = {"d1_ms": t_d1 * 1000, "full_ms": t_full * 1000}
        results["alg1"] = res.H
    if "alg2" in methods:
        t0 = time.perf_counter()
        cn2 = build_d1_direct(U)
        t_d1 = time.perf_counter() - t0
        compute_d2(cn2)
        res = det_complex(cn2, seed=args.seed, threads=args.threads)
        t_full = time.perf_counter() - t0
        report["alg2"] = {"d1_ms": t_d1 * 1000, "full_ms": t_full * 1000}
        results["alg2"] = res.H
    if "elimination" in methods and not args.d1_only:
        t0 = time.perf_counter()
        try:
            H = eliminate_params(U, step_cap=args.step_cap)
            report["elimination"] = {
                "full_ms": (time.perf_counter() - t0) * 1000
            }
            results["elimination"] = H
        except StepCapExceeded:
            report["elimination"] = {
                "full_ms": (time.perf_counter() - t0) * 1000,
                "step_cap_exceeded": True,
            }
    # all completed methods must agree on the normalized equation
    forms = {m: h.normalized() for m, h in results.items()}
    names = sorted(forms)
    agree = all(
        forms[names[0]] == forms[m] for m in names[1:]
    )
    if names and not agree:
        raise PipelineError("bench", "methods disagree on H")
    payload = {
        "instance": {"r": len(inst.points), "a": inst.a},
        "methods": {
            m: {k: (round(v, 3) if isinstance(v, float) else v)
                for k, v in rep.items()}
            for m, rep in report.items()
        },
        "agree": agree if names else None,
    }
    lines = [f"bench on r={len(inst.points)}, a={inst.a}:"]
    for m in sorted(report):
        rep = report[m]
        parts = [f"{k}={v:.1f}" if isinstance(v, float) else f"{k}={v}"
                 for k, v in rep.items()]
        lines.append(f"  {m}: " + ", ".join(parts))
    if names:
        lines.append(f"methods agree on H: {'yes' if agree else 'NO'}")
    _emit(args, payload, lines)
    return 0


# ----------------------------------------------------------------------
# parser


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="tensurf",
        description="Exact implicit equations of bidegree-(a, 1) tensor "
        "product surfaces via syzygies",
    )
    shared = argparse.ArgumentParser(add_help=False)
    for target, dflt in ((ap, False), (shared, True)):
        sup = argparse.SUPPRESS
        target.add_argument("--format", choices=("text", "json"),
                            default=sup if dflt else "text")
        target.add_argument("--seed", type=int,
                            default=sup if dflt else 0,
                            help="seed for run randomness "
                            "(sampling, minors)")
        target.add_argument("--threads", type=int,
                            default=sup if dflt else 1)
        target.add_argument("--timings", action="store_true",
                            default=sup if dflt else False,
                            help="include wall-clock timings in the "
                            "output")
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze-points", parents=[shared],
                        help="genericity, partitions, Hilbert table")
    pa.add_argument("instance")
    pa.add_argument("--window", type=int, nargs=2, metavar=("I", "J"))
    pa.set_defaults(func=cmd_analyze_points)

    pb = sub.add_parser("ideal-basis", parents=[shared],
                        help="generators g1, g2 and the (a,1) piece")
    pb.add_argument("instance")
    pb.set_defaults(func=cmd_ideal_basis)

    pmu = sub.add_parser("mu-basis", parents=[shared], help="the two free syzygies K1, K2")
    pmu.add_argument("instance")
    pmu.set_defaults(func=cmd_mu_basis)

    pi = sub.add_parser("implicitize", parents=[shared], help="full implicitization")
    pi.add_argument("instance")
    pi.add_argument("--method",
                    choices=("syzygy", "direct", "elimination"),
                    default="syzygy")
    pi.add_argument("--step-cap", type=int, default=200000)
    pi.add_argument("--samples", type=int, default=25)
    pi.add_argument("--print-cap", type=int, default=2000,
                    help="suppress text H beyond this many terms")
    pi.add_argument("--out", help="write the result JSON to this file")
    pi.set_defaults(func=cmd_implicitize)

    pv = sub.add_parser("verify", parents=[shared], help="check a result file against its "
                        "instance")
    pv.add_argument("instance")
    pv.add_argument("result")
    pv.add_argument("--samples", type=int, default=25)
    pv.add_argument("--substitution", choices=("auto", "full", "never"),
                    default="auto")
    pv.set_defaults(func=cmd_verify)

    pm = sub.add_parser("membership", parents=[shared],
                        help="rank test: does a point lie on the surface")
    pm.add_argument("instance")
    pm.add_argument("--point", required=True,
                    help="four comma-separated rational coordinates")
    pm.set_defaults(func=cmd_membership)

    pr = sub.add_parser("random-instance", parents=[shared],
                        help="generate a random generic instance")
    pr.add_argument("--r", type=int, required=True)
    pr.add_argument("--a", type=int, required=True)
    pr.add_argument("--subspace-seed", type=int, default=0)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_random_instance)

    pn = sub.add_parser("bench", parents=[shared], help="compare construction methods")
    pn.add_argument("instance", nargs="?")
    pn.add_argument("--r", type=int, default=0)
    pn.add_argument("--a", type=int)
    pn.add_argument("--methods", default="alg1,alg2")
    pn.add_argument("--d1-only", action="store_true")
    pn.add_argument("--step-cap", type=int, default=200000)
    pn.set_defaults(func=cmd_bench)

    return ap


def main(argv=None):
    sys.set_int_max_str_digits(2_000_000)
    ap = _build_parser()
    args = ap.parse_args(argv)
    if args.command == "bench" and not args.instance and args.a is None:
        print("error: bench needs an instance file or --a", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (PipelineError, GenericityError, StepCapExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
