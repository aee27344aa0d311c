"""The acceptance suite: one callable per criterion, shared by pytest and
the command line.

Every check records its expected value, the computed value, and a source
tag; all numeric comparisons are exact.  Randomized criteria fix their
seeds here so the suite is reproducible run to run.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field as dc_field

from .fields import QQ, GF
from .linalg import mat_eq
from . import schubert
from .chart import (chart_quadric, graph_matrix_of_tangent, plant_corank,
                    smith_valuations, _series_matrix, kernel_restriction_rank)
from .strata import census, sample_lg1
from .lagrangian import random_graph_lagrangian
from . import dualk3

SEED_CHART_IDENTITY = 20240601
SEED_TANGENT_CONE = 911
SEED_RESTRICTION = 424242
SEED_CENSUS_P2 = 5
SEED_CENSUS_P3 = 1
SEEDS_LG1_P5 = (11, 23, 31)
SEED_DUALK3 = 7
SEED_DUALK3_RNG = 1105


@dataclass
class CriterionResult:
    cid: int
    name: str
    checks: list = dc_field(default_factory=list)
    elapsed_ms: float = 0.0

    def check(self, name, expected, actual, source):
        ok = expected == actual
        self.checks.append({"name": name, "expected": expected, "actual": actual,
                            "source": source, "passed": ok})
        return ok

    def check_true(self, name, flag, source, detail=None):
        self.checks.append({"name": name, "expected": True, "actual": bool(flag),
                            "source": source, "passed": bool(flag),
                            "detail": detail})
        return bool(flag)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self):
        return {"criterion": self.cid, "name": self.name, "passed": self.passed,
                "elapsed_ms": round(self.elapsed_ms, 1), "checks": self.checks}


def _timed(fn):
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.elapsed_ms = (time.perf_counter() - t0) * 1000.0
        return res
    return wrapper


@_timed
def criterion_1_degrees() -> CriterionResult:
    r = CriterionResult(1, "degrees of the strata and of G(3,6)")
    degs = schubert.stratum_degrees()
    r.check("deg stratum-1", 168, degs[1], "paper")
    r.check("deg stratum-2", 480, degs[2], "paper")
    r.check("deg stratum-3", 720, degs[3], "paper")
    r.check("deg G(3,6)", 42, schubert.g36_degree(), "paper")
    return r


@_timed
def criterion_2_class_decomposition() -> CriterionResult:
    r = CriterionResult(2, "stratum-2 class in the (h^3, h s2, s3) basis")
    coords = schubert.class_in_h_s2_s3(schubert.pr_class(2))
    r.check("coordinates", (16, -12, 12), coords, "paper")
    return r


@_timed
def criterion_3_connectedness() -> CriterionResult:
    r = CriterionResult(3, "connectedness diophantine system")
    eqs, sols, info = schubert.connectedness_check()
    r.check("integer solutions", [(0, 0, 0), (16, 12, 12)], sols, "paper")
    r.check_true("printed first equation lies in the span of the system",
                 info["combo"] is not None, "paper",
                 detail={"combo": info["combo"], "denominator": info["combo_denominator"]})
    for s in ((0, 0, 0), (16, 12, 12)):
        vals = [schubert._eval_eq(eq, *s) for eq in eqs]
        r.check(f"substitution {s}", [0, 0, 0], vals, "trivial")
    return r


@_timed
def criterion_4_exceptional() -> CriterionResult:
    r = CriterionResult(4, "exceptional-divisor coefficient in LG(10,20)")
    res = schubert.exceptional_coefficient(10)
    r.check("b", -2, res["b"], "paper")
    r.check_true("deg sigma_(n-2,n) positive", res["deg_sigma_n2_n"] > 0, "paper",
                 detail={"deg": res["deg_sigma_n2_n"]})
    r.check("equation at b=-2", 0, res["equation"](-2), "paper")
    r.check_true("b = 2 is not a solution", res["equation"](2) != 0, "trivial")
    return r


@_timed
def criterion_5_chart_identity() -> CriterionResult:
    r = CriterionResult(5, "chart quadric equals the graph matrix")
    failures = {"rational": 0, "F101": 0}
    rng = random.Random(SEED_CHART_IDENTITY)
    for key, field in (("rational", QQ), ("F101", GF(101))):
        for _ in range(100):
            B = [[field.random(rng) for _ in range(3)] for _ in range(3)]
            if not mat_eq(chart_quadric(B, field), graph_matrix_of_tangent(field, B), field):
                failures[key] += 1
    r.check("failures over the rationals (100 trials)", 0, failures["rational"], "derived")
    r.check("failures over F_101 (100 trials)", 0, failures["F101"], "derived")
    return r


@_timed
def criterion_6_tangent_cone() -> CriterionResult:
    r = CriterionResult(6, "tangent-cone vanishing orders")
    field = QQ
    rng = random.Random(SEED_TANGENT_CONE)
    for k in (2, 3):
        A, _ = plant_corank(field, k, rng, decomposable_free=True)
        orders = {level: [] for level in range(1, k + 1)}
        for _ in range(10):
            direction = [[field.random(rng) for _ in range(3)] for _ in range(3)]
            mat, ring = _series_matrix(A, direction)
            vals = smith_valuations(mat, ring, k + 3)
            for level in range(1, k + 1):
                chosen = vals[: 11 - level]
                orders[level].append(None if any(v is None for v in chosen)
                                     else sum(chosen))
        for level in range(1, k + 1):
            r.check(f"orders k={k} level={level} (10 directions)",
                    [k - level + 1] * 10, orders[level], "paper")
    return r


@_timed
def criterion_7_restriction_rank() -> CriterionResult:
    r = CriterionResult(7, "surjectivity rank of the kernel restriction")
    field = QQ
    rng = random.Random(SEED_RESTRICTION)
    ranks = []
    for _ in range(50):
        A, _ = plant_corank(field, 3, rng, decomposable_free=True)
        ranks.append(kernel_restriction_rank(A, rng=rng, samples=40))
    r.check("rank over 50 rank-7 plantings", [6] * 50, ranks, "paper")
    return r


@_timed
def criterion_8_census(threads: int = 2) -> CriterionResult:
    r = CriterionResult(8, "finite-field censuses and codimension statistics")
    rep2 = census(random_graph_lagrangian(GF(2), random.Random(SEED_CENSUS_P2)),
                  threads=threads)
    r.check("total p=2", 1395, rep2.total, "derived")
    r.check("counts sum p=2", 1395, sum(rep2.counts.values()), "derived")
    rep3 = census(random_graph_lagrangian(GF(3), random.Random(SEED_CENSUS_P3)),
                  threads=threads)
    r.check("total p=3", 33880, rep3.total, "derived")
    r.check("counts sum p=3", 33880, sum(rep3.counts.values()), "derived")
    for seed in SEEDS_LG1_P5:
        smp = sample_lg1(5, seed=seed, want_census=True, threads=threads)
        rep = smp.census_report
        r.check(f"lg1 seed {seed}: counts at k>=4", 0, rep.count_at_least(4), "paper")
        r.check_true(f"lg1 seed {seed}: sigma certificate",
                     smp.sigma.exhaustive and not smp.sigma.found, "derived",
                     detail={"trials": smp.sigma.trials, "attempts": smp.attempts})
        for k in (1, 2):
            target = 9 - k * (k + 1) // 2
            cnt = rep.counts.get(k, 0)
            ok = cnt > 0 and abs(math.log(cnt, 5) - target) <= 1.5
            r.check_true(f"lg1 seed {seed}: log5 count({k}) within {target}+-1.5",
                         ok, "derived",
                         detail={"count": cnt,
                                 "log5": round(math.log(cnt, 5), 3) if cnt else None})
    return r


@_timed
def criterion_9_dual_k3() -> CriterionResult:
    r = CriterionResult(9, "dual-K3 suite over F_101")
    data = dualk3.build_special_a(p=101, seed=SEED_DUALK3)
    rng = random.Random(SEED_DUALK3_RNG)

    phi_dims = []
    for _ in range(50):
        while True:
            a = dualk3.sample_s_a_point(data, rng)
            b = dualk3.sample_s_a_point(data, rng)
            try:
                ph = dualk3.phi(data, a, b)
            except dualk3.DegenerateConfiguration:
                continue
            phi_dims.append(dualk3.phi_sextic_dim(data, ph))
            break
    r.check("pair-image sextic dims (50 trials)", [1] * 50, phi_dims, "paper")

    psi_strata = []
    for _ in range(50):
        while True:
            trio = [dualk3.sample_s_a_point(data, rng) for _ in range(3)]
            try:
                ps = dualk3.psi(data, *trio)
            except dualk3.DegenerateConfiguration:
                continue
            psi_strata.append(dualk3.psi_stratum(data, ps))
            break
    r.check("triple-image strata (50 trials)", [2] * 50, psi_strata, "paper")

    ns_ranks, ns_dims, ns_x0 = [], [], []
    done = 0
    while done < 50:
        trio = [dualk3.sample_s_a_point(data, rng) for _ in range(3)]
        try:
            res = dualk3.newsystem_dimension(data, *trio, rng)
        except dualk3.DegenerateConfiguration:
            continue
        ns_ranks.append(res["rank"])
        ns_dims.append((res["solution_dim"], res["stratum"]))
        ns_x0.append(res["x_zero_solutions"])
        done += 1
    r.check("adapted-system ranks (50 triples)", [4] * 50, ns_ranks, "paper")
    r.check("adapted-system solution dims vs stratum", [(2, 2)] * 50, ns_dims, "paper")
    r.check("solutions with x = 0", [0] * 50, ns_x0, "paper")

    residual_ok = 0
    attempts = 0
    six_distinct = True
    psi_equal = True
    gammas_verified = True
    while residual_ok < 20 and attempts < 400:
        attempts += 1
        trio = [dualk3.sample_s_a_point(data, rng) for _ in range(3)]
        try:
            out = dualk3.residual_triple(data, *trio, rng)
        except dualk3.DegenerateConfiguration:
            continue
        if out is None:
            continue
        gammas, _ = out
        if not all(dualk3.verify_surface_point(data, g) for g in gammas):
            gammas_verified = False
        if dualk3.psi(data, *trio) != dualk3.psi(data, *gammas):
            psi_equal = False
        pts = {tuple(p.beta) for p in trio} | {tuple(g.beta) for g in gammas}
        if len(pts) != 6:
            six_distinct = False
        residual_ok += 1
    r.check_true("at least 20 residual-triple successes", residual_ok >= 20,
                 "paper", detail={"successes": residual_ok, "attempts": attempts})
    r.check_true("residual pairs share their image", psi_equal, "paper")
    r.check_true("six distinct points per configuration", six_distinct, "paper")
    r.check_true("residual points verified on the surface", gammas_verified, "trivial")
    return r


@_timed
def criterion_10_hilb_ledger() -> CriterionResult:
    r = CriterionResult(10, "Hilbert-scheme arithmetic and dimension ledgers")
    hi = schubert.hilb3_invariants(6, 2, 3)
    r.check("q(2H - 3delta)", 4, hi["q"], "paper")
    r.check("Fujiki degree", 960, hi["fujiki_degree"], "paper")
    r.check("q(H) for the degree-10 polarization", 10,
            schubert.hilb3_invariants(6, 1, 0)["q"], "trivial")
    led = schubert.dimension_ledger()
    r.check("dim F at (1,0)", 47, led["rows"][0]["dim_f1"], "paper")
    r.check("total at (1,0)", 53, led["rows"][0]["total_f1"], "paper")
    r.check("dim F at (2,3)", 29, led["rows"][3]["dim_f2"], "paper")
    r.check("total at (2,3)", 50, led["rows"][3]["total_f2"], "paper")
    r.check_true("all incidence totals bounded by 53",
                 all(row["bounded_by_53"] for row in led["rows"]), "paper")
    r.check_true("closed formulas match their term sums",
                 all(row["dim_f1"] == row["dim_f1_terms"]
                     and row["dim_f2"] == row["dim_f2_terms"]
                     for row in led["rows"]), "paper")
    r.check("4-meeting incidence dimension", 54, led["xi"]["dim"], "paper")
    r.check_true("54 below dim LG(10,20) = 55", led["xi"]["is_divisor_bound"], "paper")
    return r


ALL_CRITERIA = (
    criterion_1_degrees,
    criterion_2_class_decomposition,
    criterion_3_connectedness,
    criterion_4_exceptional,
    criterion_5_chart_identity,
    criterion_6_tangent_cone,
    criterion_7_restriction_rank,
    criterion_8_census,
    criterion_9_dual_k3,
    criterion_10_hilb_ledger,
)


def run_all(skip=()):
    results = []
    for fn in ALL_CRITERIA:
        cid = int(fn.__name__.split("_")[1])
        if cid in skip:
            continue
        results.append(fn())
    return results
