"""Command-line interface.

Commands:

    verify-coupling    exact coupling identities on an enumerable domain
    verify-identities  exhaustive counting identities on small diamonds
    holley             stochastic domination between two boundary weights
    sample             heat-bath run with edge marginals and cluster sizes
    drift              height-increment drift experiment

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error.  Reports
are byte-identical for identical invocations (seed included); wall time is
printed to stderr.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from fractions import Fraction

from fksix.height import drift_experiment
from fksix.lattice import make_diamond_domain
from fksix.random_cluster import (
    BondConfig,
    FKParams,
    HeatBathChain,
    cluster_stats,
    holley_check,
)
from fksix.reports import fmt_number, fmt_params, write_increment_csv, write_report
from fksix.rng import edge_stream
from fksix.unionfind import DisjointSets
from fksix.verify import (
    run_coupling_checks,
    run_identity_checks,
    verify_coupled_params,
)


def parse_domain(spec):
    """Domain specs: "diamond:R" or "diamond:R@i,j"."""
    kind, _, rest = spec.partition(":")
    if kind != "diamond" or not rest:
        raise argparse.ArgumentTypeError(f"unsupported domain spec {spec!r}")
    radius_part, _, center_part = rest.partition("@")
    radius = int(radius_part)
    if center_part:
        ci, cj = (int(t) for t in center_part.split(","))
    else:
        ci, cj = (0, 0) if radius % 2 == 0 else (1, 0)
    return make_diamond_domain((ci, cj), radius)


def _checks_payload(checks):
    return [
        {"name": c.name, "passed": bool(c.passed), "details": c.details} for c in checks
    ]


def cmd_verify_coupling(args):
    domain = parse_domain(args.domain)
    workers = int(os.environ.get("FKSIX_WORKERS", "1"))
    if args.backend == "symbolic":
        checks = run_coupling_checks(domain, backend="symbolic", workers=workers)
        params = {"q": None}
    else:
        q = float(args.q)
        checks = run_coupling_checks(domain, backend="float", q=q, workers=workers)
        params = {"q": q}
    report = {
        "command": "verify-coupling",
        "domain": domain.descriptor,
        "seed": None,
        "params": fmt_params(params),
        "checks": _checks_payload(checks),
        "results": {"backend": args.backend},
    }
    if args.out:
        write_report(args.out, report)
    _print_checks(checks)
    return 0 if all(c.passed for c in checks) else 1


def cmd_verify_identities(args):
    radii = tuple(range(args.radius_max + 1))
    checks = run_identity_checks(
        radii=radii, winding_samples=args.winding_samples, seed=args.seed
    )
    report = {
        "command": "verify-identities",
        "domain": None,
        "seed": str(args.seed),
        "params": fmt_params({"radius_max": args.radius_max}),
        "checks": _checks_payload(checks),
        "results": {},
    }
    if args.out:
        write_report(args.out, report)
    _print_checks(checks)
    return 0 if all(c.passed for c in checks) else 1


def cmd_holley(args):
    domain = parse_domain(args.domain)
    q = Fraction(args.q)
    p = Fraction(args.p)
    qb1 = Fraction(args.qb)
    qb2 = Fraction(args.qb2)
    lo_weight, hi_weight = max(qb1, qb2), min(qb1, qb2)
    dominated = FKParams(q=q, q_b=lo_weight, p=p)
    dominating = FKParams(q=q, q_b=hi_weight, p=p)
    holds = holley_check(dominated, dominating, domain)
    reverse_fails = (
        True
        if qb1 == qb2
        else not holley_check(dominating, dominated, domain)
    )
    checks = [
        {
            "name": f"q_b={lo_weight} dominated by q_b={hi_weight} (Holley condition)",
            "passed": bool(holds),
            "details": "larger boundary weight is the more free, hence dominated, side",
        },
        {
            "name": "reversed ordering fails",
            "passed": bool(reverse_fails),
            "details": "" if qb1 != qb2 else "orders coincide, reverse also holds",
        },
    ]
    report = {
        "command": "holley",
        "domain": domain.descriptor,
        "seed": None,
        "params": fmt_params({"q": q, "p": p, "qb": qb1, "qb2": qb2}),
        "checks": checks,
        "results": {},
    }
    if args.out:
        write_report(args.out, report)
    for c in checks:
        print(("PASS" if c["passed"] else "FAIL") + " " + c["name"])
    return 0 if all(c["passed"] for c in checks) else 1


def cmd_sample(args):
    domain = parse_domain(args.domain)
    if args.coupled:
        coupled = verify_coupled_params(float(args.q))
        params = FKParams.from_coupled(coupled)
    else:
        if args.qb is None:
            raise ValueError("--qb is required unless --coupled is given")
        p = float(args.p) if args.p is not None else None
        if p is None:
            q = float(args.q)
            p = math.sqrt(q) / (1 + math.sqrt(q))
        params = FKParams(q=float(args.q), q_b=float(args.qb), p=p)
    chain = HeatBathChain(
        domain, params, edge_stream(args.seed, 0), start="closed", fast=not args.slow
    )
    chain.sweep(args.burn_in)
    marginals = [0] * domain.n_edges
    histogram = {}
    for _ in range(args.samples):
        chain.sweep(args.thin)
        bits = chain.bits
        for i, b in enumerate(bits):
            marginals[i] += b
        uf = DisjointSets(domain.n_vertices)
        for i, b in enumerate(bits):
            if b:
                ua, ub = domain.edge_endpoints[i]
                uf.union(ua, ub)
        for members in uf.groups().values():
            histogram[len(members)] = histogram.get(len(members), 0) + 1
    report = {
        "command": "sample",
        "domain": domain.descriptor,
        "seed": str(args.seed),
        "params": fmt_params(
            {"q": float(params.q), "q_b": float(params.q_b), "p": float(params.p)}
        ),
        "checks": [],
        "results": {
            "sweeps_per_sample": args.thin,
            "burn_in": args.burn_in,
            "samples": args.samples,
            "edge_marginals": [
                fmt_number(m / args.samples) for m in marginals
            ],
            "cluster_size_histogram": {
                str(k): v for k, v in sorted(histogram.items())
            },
        },
    }
    if args.out:
        write_report(args.out, report)
    print(f"sampled {args.samples} configurations on {domain.descriptor}")
    return 0


def cmd_drift(args):
    q = float(args.q)
    coupled = verify_coupled_params(q)
    if args.negative_lambda:
        coupled = coupled.negated()
    radius = args.box // 2
    result = drift_experiment(
        coupled,
        radius=radius,
        n_samples=args.samples,
        seed=args.seed,
        burn_in=args.burn_in,
        thin=args.thin,
        fast=not args.slow,
    )
    if args.out_csv:
        write_increment_csv(args.out_csv, result.records)
    ok = result.count > 0
    within = (
        abs(result.mean - result.tanh_lam) <= 3 * result.stderr
        if result.count > 1
        else False
    )
    checks = [
        {
            "name": "pooled increment mean within 3 standard errors of tanh(lambda)",
            "passed": bool(ok and within),
            "details": f"{result.count} increments",
        }
    ]
    report = {
        "command": "drift",
        "domain": {"kind": "diamond", "center": [0, 0] if radius % 2 == 0 else [1, 0], "radius": radius},
        "seed": str(args.seed),
        "params": fmt_params({"q": q, "lambda": coupled.lam, "q_b": coupled.q_b}),
        "checks": checks,
        "results": {
            "increments": result.count,
            "mean": fmt_number(result.mean),
            "stderr": fmt_number(result.stderr),
            "tanh_lambda": fmt_number(result.tanh_lam),
        },
    }
    if args.out:
        write_report(args.out, report)
    print(
        f"drift: mean {result.mean:.5f} vs tanh(lambda) {result.tanh_lam:.5f} "
        f"({result.count} increments, stderr {result.stderr:.5f})"
    )
    return 0 if checks[0]["passed"] else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="fksix", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("verify-coupling", help="exact coupling identities")
    pc.add_argument("--domain", default="diamond:1")
    pc.add_argument("--q", default="symbolic")
    pc.add_argument("--backend", choices=("symbolic", "float"), default="symbolic")
    pc.add_argument("--out")
    pc.set_defaults(func=cmd_verify_coupling)

    pi = sub.add_parser("verify-identities", help="counting identities on diamonds")
    pi.add_argument("--radius-max", type=int, default=2)
    pi.add_argument("--winding-samples", type=int, default=0)
    pi.add_argument("--seed", type=int, default=0)
    pi.add_argument("--out")
    pi.set_defaults(func=cmd_verify_identities)

    ph = sub.add_parser("holley", help="boundary-weight stochastic domination")
    ph.add_argument("--q", required=True)
    ph.add_argument("--p", required=True)
    ph.add_argument("--qb", required=True)
    ph.add_argument("--qb2", required=True)
    ph.add_argument("--domain", default="diamond:1")
    ph.add_argument("--out")
    ph.set_defaults(func=cmd_holley)

    ps = sub.add_parser("sample", help="heat-bath sampling report")
    ps.add_argument("--domain", default="diamond:3")
    ps.add_argument("--q", required=True)
    ps.add_argument("--qb")
    ps.add_argument("--p")
    ps.add_argument("--coupled", action="store_true")
    ps.add_argument("--sweeps", "--thin", dest="thin", type=int, default=10)
    ps.add_argument("--burn-in", type=int, default=100)
    ps.add_argument("--samples", type=int, default=100)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--slow", action="store_true", help="pure-python sweeps")
    ps.add_argument("--out")
    ps.set_defaults(func=cmd_sample)

    pd = sub.add_parser("drift", help="height-increment drift experiment")
    pd.add_argument("--q", required=True)
    pd.add_argument("--box", type=int, default=64, help="box side; diamond radius is box//2")
    pd.add_argument("--samples", type=int, default=200)
    pd.add_argument("--burn-in", type=int, default=200)
    pd.add_argument("--thin", type=int, default=10)
    pd.add_argument("--seed", type=int, default=0)
    pd.add_argument("--negative-lambda", action="store_true")
    pd.add_argument("--slow", action="store_true")
    pd.add_argument("--out")
    pd.add_argument("--out-csv")
    pd.set_defaults(func=cmd_drift)
    return parser


def _print_checks(checks):
    for c in checks:
        print(("PASS" if c.passed else "FAIL") + " " + c.name + (f" ({c.details})" if c.details else ""))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        code = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wall time {time.monotonic() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
