"""Exact verification of the coupling between the two models.

All checks reduce to comparisons of finite distributions over canonical
configuration keys.  In the symbolic backend weights are Laurent polynomials
in x = exp(lambda/2) and distributions are compared by cross multiplication,

    w1(k) * Z2 == w2(k) * Z1   for every key k,

which decides equality of the normalized measures without any division.
The float backend runs the same pipelines with numeric weights and a
relative tolerance.

The two pushforwards implemented here:

* every bond configuration, with every orientation of its interior loops,
  carries the oriented weight exp(lambda (acw - cw)); forgetting the loop
  structure projects this onto six-vertex configurations,
* every six-vertex configuration, with weight c^(type 5/6 count) and every
  combination of split choices weighted exp(+-lambda/2) / c per choice,
  produces an oriented loop configuration.

Agreement of the first projection with the c-weighted six-vertex measure,
of the second with the oriented bond measure, and invariance of the first
under x -> 1/x are the finite-volume versions of the coupling statements.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from fksix.lattice import EvenDomain, make_diamond_domain
from fksix.laurent import SymbolicCoupling
from fksix.loops import extract_loops, loop_stats
from fksix.random_cluster import BondConfig, cluster_stats
from fksix.six_vertex import (
    CoupledParams,
    enumerate_6v,
    sixv_weight,
    split,
)

FK_EDGE_BUDGET = 14
SPLIT_BUDGET = 20
FLOAT_REL_TOL = 1e-10


def verify_coupled_params(q):
    """Solve the coupling equations for q >= 4 and sanity-check the bounds.

    lambda = arccosh(sqrt(q)/2) is the unique nonnegative solution of
    exp(lam) + exp(-lam) = sqrt(q); then c = 2 cosh(lam/2) = sqrt(2+sqrt(q)),
    p is the self-dual point and q_b = exp(lam) sqrt(q) lies in [1, q].
    """
    if q < 4:
        raise ValueError("coupled parameters require q >= 4")
    sqrt_q = math.sqrt(q)
    lam = math.acosh(sqrt_q / 2)
    c = 2 * math.cosh(lam / 2)
    p = sqrt_q / (1 + sqrt_q)
    q_b = math.exp(lam) * sqrt_q
    if abs(c - math.sqrt(2 + sqrt_q)) > 1e-9:
        raise AssertionError("c = sqrt(2 + sqrt(q)) failed")
    if not (1 - 1e-12 <= q_b <= q + 1e-9):
        raise AssertionError("boundary weight left [1, q]")
    if not (1 - 1e-12 <= math.exp(-lam) * sqrt_q <= q + 1e-9):
        raise AssertionError("mirror boundary weight left [1, q]")
    return CoupledParams(lam=lam, c=c, sqrt_q=sqrt_q, q=q, p=p, q_b=q_b)


def domain_from_descriptor(desc):
    if desc.get("kind") == "diamond":
        return make_diamond_domain(tuple(desc["center"]), desc["radius"])
    return EvenDomain([tuple(v) for v in desc["vertices"]], descriptor=desc)


def _orientation_weight(coupling, delta):
    if isinstance(coupling, SymbolicCoupling):
        return coupling.orientation_weight(delta)
    return math.exp(coupling.lam * delta)


def _split_weight(coupling, delta):
    if isinstance(coupling, SymbolicCoupling):
        return coupling.split_weight(delta)
    return math.exp(coupling.lam / 2 * delta)


@dataclass
class FiniteDistribution:
    """Unnormalized weights over canonical configuration keys."""

    weights: dict
    symbolic: bool

    @property
    def total(self):
        it = iter(self.weights.values())
        first = next(it)
        for w in it:
            first = first + w
        return first

    def substituted_inverse(self):
        if not self.symbolic:
            raise ValueError("x -> 1/x substitution needs the symbolic backend")
        return FiniteDistribution(
            weights={k: w.substitute_inverse() for k, w in self.weights.items()},
            symbolic=True,
        )

    def evaluated(self, x):
        return FiniteDistribution(
            weights={k: w.evaluate(x) for k, w in self.weights.items()},
            symbolic=False,
        )


@dataclass(frozen=True)
class ComparisonReport:
    equal: bool
    max_discrepancy: float
    witness: object = None


def compare_distributions(d1, d2, rel_tol=FLOAT_REL_TOL):
    """Cross-multiplied equality of two unnormalized distributions.

    Symbolic inputs are compared exactly; the reported discrepancy is then
    the number of differing keys.  Float inputs use a relative tolerance.
    On failure the witness is the first offending key (or a missing one).
    """
    keys1, keys2 = set(d1.weights), set(d2.weights)
    if keys1 != keys2:
        diff = keys1.symmetric_difference(keys2)
        return ComparisonReport(False, float(len(diff)), witness=next(iter(diff)))
    z1, z2 = d1.total, d2.total
    if d1.symbolic and d2.symbolic:
        bad = [k for k in d1.weights if d1.weights[k] * z2 != d2.weights[k] * z1]
        if bad:
            return ComparisonReport(False, float(len(bad)), witness=bad[0])
        return ComparisonReport(True, 0.0)
    worst = 0.0
    witness = None
    for k in d1.weights:
        a = d1.weights[k] * z2
        b = d2.weights[k] * z1
        scale = max(abs(a), abs(b), 1e-300)
        rel = abs(a - b) / scale
        if rel > worst:
            worst, witness = rel, k
    if worst <= rel_tol:
        return ComparisonReport(True, worst)
    return ComparisonReport(False, worst, witness=witness)


def _check_fk_budget(domain, budget):
    if domain.n_edges > budget:
        raise ValueError(
            f"enumeration budget exceeded: {domain.n_edges} edges > {budget}"
        )


def _oriented_items(domain, mask):
    """All oriented loop configurations of one bond configuration, with the
    net orientation count of each."""
    cfg = BondConfig.from_int(domain, mask)
    lc = extract_loops(cfg)
    interior = [k for k, lp in enumerate(lc.loops) if not lp.is_boundary]
    n_boundary = len(lc.loops) - len(interior)
    out = []
    for assign in range(1 << len(interior)):
        xi = [1] * len(lc.loops)
        for pos, k in enumerate(interior):
            if (assign >> pos) & 1:
                xi[k] = -1
        delta = n_boundary + sum(xi[k] for k in interior)
        out.append((lc, tuple(xi), delta))
    return out


def oriented_fk_distribution(domain, coupling, budget=FK_EDGE_BUDGET):
    """The oriented bond measure: weight exp(lambda (acw - cw)) per oriented
    loop configuration, keys (bond bits, loop orientations)."""
    _check_fk_budget(domain, budget)
    weights = {}
    for mask in range(1 << domain.n_edges):
        for lc, xi, delta in _oriented_items(domain, mask):
            weights[(lc.bits, xi)] = _orientation_weight(coupling, delta)
    return FiniteDistribution(weights=weights, symbolic=isinstance(coupling, SymbolicCoupling))


def _arrows_of(domain, lc, xi):
    from fksix.loops import OrientedLoopConfig

    return OrientedLoopConfig(base=lc, xi=xi).arrow_bits()


def pushforward_fk_to_6v(domain, coupling, budget=FK_EDGE_BUDGET, workers=None):
    """Project the oriented bond measure onto six-vertex configurations."""
    _check_fk_budget(domain, budget)
    if workers is None:
        workers = int(os.environ.get("FKSIX_WORKERS", "1"))
    size = 1 << domain.n_edges
    if workers <= 1 or size < 64:
        return FiniteDistribution(
            weights=_fk_to_6v_chunk(domain, coupling, 0, size),
            symbolic=isinstance(coupling, SymbolicCoupling),
        )
    bounds = [(size * w // workers, size * (w + 1) // workers) for w in range(workers)]
    merged = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_fk_to_6v_chunk, domain, coupling, lo, hi) for lo, hi in bounds
        ]
        for fut in futures:
            for key, w in fut.result().items():
                merged[key] = merged[key] + w if key in merged else w
    return FiniteDistribution(weights=merged, symbolic=isinstance(coupling, SymbolicCoupling))


def _fk_to_6v_chunk(domain, coupling, lo, hi):
    weights = {}
    for mask in range(lo, hi):
        for lc, xi, delta in _oriented_items(domain, mask):
            key = _arrows_of(domain, lc, xi)
            w = _orientation_weight(coupling, delta)
            weights[key] = weights[key] + w if key in weights else w
    return weights


def sixv_distribution(domain, coupling):
    """The six-vertex measure c^(type 5/6 count) over arrow keys."""
    weights = {}
    for cfg in enumerate_6v(domain):
        weights[cfg.key()] = sixv_weight(cfg, coupling)
    return FiniteDistribution(weights=weights, symbolic=isinstance(coupling, SymbolicCoupling))


def pushforward_6v_to_fk(domain, coupling, split_budget=SPLIT_BUDGET):
    """Push the six-vertex measure through the splitting map.

    Each split outcome of each configuration contributes the weight
    c^n56 * prod exp(+-lambda/2)/c = exp(lambda/2 (acw - cw splits)); every
    outcome lands on a distinct oriented loop configuration.
    """
    weights = {}
    for cfg in enumerate_6v(domain):
        n56 = cfg.n_type56()
        if n56 > split_budget:
            raise ValueError(f"split budget exceeded: {n56} type 5/6 vertices")
        for assign in range(1 << n56):
            choices = tuple(1 if not (assign >> i) & 1 else -1 for i in range(n56))
            olc, record = split(cfg, coupling, choices=choices)
            key = olc.key()
            if key in weights:
                raise AssertionError("two split outcomes produced one loop configuration")
            weights[key] = _split_weight(coupling, record.n_acw - record.n_cw)
    return FiniteDistribution(weights=weights, symbolic=isinstance(coupling, SymbolicCoupling))


def project_oriented_to_sixv(dist, domain):
    """Re-aggregate an oriented-loop distribution by its arrow projection."""
    from fksix.loops import OrientedLoopConfig

    merged = {}
    for (bits, xi), w in dist.weights.items():
        lc = extract_loops(BondConfig(domain, bits))
        key = OrientedLoopConfig(base=lc, xi=xi).arrow_bits()
        merged[key] = merged[key] + w if key in merged else w
    return FiniteDistribution(weights=merged, symbolic=dist.symbolic)


def euler_identities(cfg):
    """The three cluster/loop count identities for one configuration:

        dual + primal clusters = loops + 1
        boundary clusters = boundary loops
        vertices - open + dual clusters = primal clusters + 1
    """
    st = cluster_stats(cfg)
    total, _interior, boundary = loop_stats(extract_loops(cfg))
    first = st.dual_clusters + st.total_clusters == total + 1
    second = st.boundary_clusters == boundary
    third = (
        cfg.domain.n_vertices - st.n_open + st.dual_clusters == st.total_clusters + 1
    )
    return first, second, third


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: str = ""


def run_coupling_checks(domain, backend="symbolic", q=None, workers=None):
    """The coupling identity suite on one enumerable domain.

    Symbolic backend: exact polynomial identities.  Float backend: the same
    comparisons at the numeric parameters for the given q.
    """
    checks = []
    if backend == "symbolic":
        plus = SymbolicCoupling(sign=1)
        minus = SymbolicCoupling(sign=-1)
        c_sq_minus = plus.c * plus.c - 2 - plus.sqrt_q
        checks.append(
            CheckResult(
                "parameter relation c^2 = 2 + sqrt(q)",
                c_sq_minus.is_zero(),
                str(c_sq_minus),
            )
        )
    else:
        cp = verify_coupled_params(q)
        plus, minus = cp, cp.negated()
        checks.append(
            CheckResult(
                "parameter relation c^2 = 2 + sqrt(q)",
                abs(cp.c ** 2 - 2 - cp.sqrt_q) < 1e-9,
                f"c={cp.c!r}",
            )
        )

    def record(name, rep):
        details = f"max discrepancy {rep.max_discrepancy:g}"
        if not rep.equal:
            details += f"; witness {rep.witness!r}"
        checks.append(CheckResult(name, rep.equal, details))

    push_up = pushforward_6v_to_fk(domain, plus)
    oriented = oriented_fk_distribution(domain, plus)
    record("split pushforward equals the oriented bond measure",
           compare_distributions(push_up, oriented))

    down_plus = pushforward_fk_to_6v(domain, plus, workers=workers)
    sixv = sixv_distribution(domain, plus)
    record("arrow projection of the oriented bond measure is the six-vertex measure",
           compare_distributions(down_plus, sixv))

    down_minus = pushforward_fk_to_6v(domain, minus, workers=workers)
    record("six-vertex projections for +lambda and -lambda coincide",
           compare_distributions(down_plus, down_minus))

    reproj = project_oriented_to_sixv(push_up, domain)
    record("the two pushforward routes agree",
           compare_distributions(reproj, down_plus))
    return checks


def run_identity_checks(radii=(0, 1, 2), winding_samples=0, seed=0):
    """Exhaustive counting identities on small diamonds, plus optional
    sampled winding-identity checks on the largest one."""
    from fksix.rng import split_stream
    from fksix.six_vertex import check_winding_identity

    checks = []
    for radius in radii:
        center = (0, 0) if radius % 2 == 0 else (1, 0)
        domain = make_diamond_domain(center, radius)
        bad = 0
        for mask in range(1 << domain.n_edges):
            cfg = BondConfig.from_int(domain, mask)
            if not all(euler_identities(cfg)):
                bad += 1
        checks.append(
            CheckResult(
                f"cluster/loop count identities, diamond radius {radius}",
                bad == 0,
                f"{bad} failing configurations",
            )
        )
    if winding_samples:
        radius = max(radii)
        center = (0, 0) if radius % 2 == 0 else (1, 0)
        domain = make_diamond_domain(center, radius)
        configs = list(enumerate_6v(domain))
        rng = split_stream(seed, 0)
        bad = 0
        for _ in range(winding_samples):
            cfg = configs[int(rng.integers(len(configs)))]
            n56 = cfg.n_type56()
            choices = tuple(1 if rng.random() < 0.5 else -1 for _ in range(n56))
            olc, record = split(cfg, SymbolicCoupling(), choices=choices)
            if not check_winding_identity(olc, record):
                bad += 1
        checks.append(
            CheckResult(
                f"winding identity on {winding_samples} sampled splits, radius {radius}",
                bad == 0,
                f"{bad} failures",
            )
        )
    return checks
