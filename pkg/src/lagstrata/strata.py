"""Degeneracy strata of a Lagrangian against the tangent spaces of G(3,W).

Pointwise stratum evaluation, the exhaustive census of G(3, F_p^6), and the
probes for the three divisor conditions (a decomposable vector inside A, a
3-dimensional meeting with some F_[w], a 4-dimensional meeting with some
T_U).  Exhaustive probes certify their verdict; sampling probes are labeled
as inconclusive on the negative side.

The census is data-parallel over enumeration chunks: blocks are disjoint,
per-block counts merge associatively, and the result is independent of the
chunking and thread count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .fields import PrimeField
from .exterior import MultiVector
from .linalg import LinearSubspace, rank
from .lagrangian import (LagrangianSubspace, tangent_space, is_decomposable,
                         standard_frame, random_symmetric, lagrangian_from_graph)
from . import batched


class BudgetExceededError(RuntimeError):
    """An enumeration or retry budget was exhausted."""


CENSUS_MAX_PRIME = 13
GAMMA_MAX_PRIME = 7
SIGMA_EXHAUSTIVE_MAX_PRIME = 5
DELTA_MAX_PRIME = 13


def stratum(A: LinearSubspace, U: LinearSubspace) -> int:
    """k = dim(A ∩ T_U), by exact echelon on the stacked bases."""
    T = tangent_space(U)
    total = rank(list(A.rows) + list(T.rows), A.field)
    return A.dim + T.dim - total


def _require_prime_field(A: LinearSubspace) -> int:
    if not isinstance(A.field, PrimeField):
        raise ValueError("finite-field scans need a Lagrangian over F_p")
    return A.field.p


def _rows_array(A: LinearSubspace) -> np.ndarray:
    return np.array([[int(x) for x in r] for r in A.rows], dtype=np.int64)


@dataclass
class CensusReport:
    prime: int
    counts: dict
    total: int
    elapsed_ms: float
    chunk: int

    @property
    def cumulative(self) -> dict:
        return {k: sum(v for kk, v in self.counts.items() if kk >= k)
                for k in sorted(self.counts)}

    def count_at_least(self, k: int) -> int:
        return sum(v for kk, v in self.counts.items() if kk >= k)

    def to_json(self):
        return {
            "prime": self.prime,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "cumulative": {str(k): v for k, v in sorted(self.cumulative.items())},
            "total": self.total,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


@dataclass
class DivisorProbeResult:
    kind: str
    verdict: str                      # "found-witness" | "none-found"
    exhaustive: bool
    trials: int
    witnesses: list = dc_field(default_factory=list)
    detail: dict = dc_field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.verdict == "found-witness"

    def to_json(self):
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "exhaustive": self.exhaustive,
            "trials": self.trials,
            "witnesses": self.witnesses[:16],
            "detail": self.detail,
        }


def _census_scan(A: LagrangianSubspace, p: int, chunk: int, collect_ge: Optional[int],
                 threads: int = 2):
    """Shared enumeration core: stratum histogram plus optional witnesses."""
    AM = _rows_array(A) % p
    D = batched.tangent_gram_blocks(AM, p)
    descs = batched.grassmann_block_descriptors(p, chunk=chunk)

    def worker(desc):
        mats = batched.build_grassmann_block(desc, p)
        dims = batched.intersection_dims_for_batch(mats, D, p)
        counts = np.bincount(dims, minlength=11)
        hits = []
        if collect_ge is not None:
            for h in np.nonzero(dims >= collect_ge)[0]:
                hits.append((desc[0], int(desc[2] + h), mats[h].copy()))
        return counts, hits

    counts = np.zeros(11, dtype=np.int64)
    witnesses = []
    for c, h in batched.parallel_map(worker, descs, threads=threads):
        counts += c
        witnesses.extend(h)
    witnesses.sort(key=lambda t: (t[0], t[1]))
    return counts, witnesses


def census(A: LagrangianSubspace, p: Optional[int] = None, chunk: int = 32768,
           threads: int = 2) -> CensusReport:
    """Exact stratum histogram over all of G(3, F_p^6).

    Enumerates the reduced-echelon representative of every rank-3 subspace
    exactly once.
    """
    ap = _require_prime_field(A)
    if p is not None and p != ap:
        raise ValueError("prime argument disagrees with the field of A")
    p = ap
    if p > CENSUS_MAX_PRIME:
        raise BudgetExceededError(f"census enumeration is limited to p <= {CENSUS_MAX_PRIME}")
    t0 = time.perf_counter()
    counts, _ = _census_scan(A, p, chunk, None, threads=threads)
    elapsed = (time.perf_counter() - t0) * 1000.0
    total = batched.grassmann_size(6, 3, p)
    counts_dict = {k: int(v) for k, v in enumerate(counts) if v}
    if sum(counts_dict.values()) != total:
        raise AssertionError("census counts do not sum to the Gaussian binomial")
    return CensusReport(prime=p, counts=counts_dict, total=total,
                        elapsed_ms=elapsed, chunk=chunk)


def _witness_subspace(field, mat) -> LinearSubspace:
    rows = [[field.from_int(int(x)) for x in r] for r in mat]
    return LinearSubspace.from_vectors(field, 6, rows)


def gamma_witnesses(A: LagrangianSubspace, chunk: int = 32768, threads: int = 2) -> DivisorProbeResult:
    """Exhaustive scan for [U] with dim(A ∩ T_U) >= 4; certifies either way."""
    p = _require_prime_field(A)
    if p > GAMMA_MAX_PRIME:
        raise BudgetExceededError(f"gamma scan is limited to p <= {GAMMA_MAX_PRIME}")
    counts, raw = _census_scan(A, p, chunk, 4, threads=threads)
    total = batched.grassmann_size(6, 3, p)
    wits = [_witness_subspace(A.field, mat).to_json() for _, _, mat in raw[:64]]
    return DivisorProbeResult(kind="gamma",
                              verdict="found-witness" if raw else "none-found",
                              exhaustive=True, trials=total, witnesses=wits,
                              detail={"counts": {str(k): int(v) for k, v in enumerate(counts) if v}})


def delta_witnesses(A: LagrangianSubspace, chunk: int = 65536) -> DivisorProbeResult:
    """Exhaustive scan of P(W) for [w] with dim(A ∩ F_[w]) >= 3."""
    p = _require_prime_field(A)
    if p > DELTA_MAX_PRIME:
        raise BudgetExceededError(f"delta scan is limited to p <= {DELTA_MAX_PRIME}")
    AM = _rows_array(A) % p
    witnesses = []
    total = 0
    for desc in batched.projective_block_descriptors(6, p, chunk=chunk):
        vecs = batched.build_projective_block(desc, 6, p)
        dims = batched.f_space_dims(vecs, AM, p)
        total += vecs.shape[0]
        for h in np.nonzero(dims >= 3)[0]:
            witnesses.append(([int(x) for x in vecs[h]], int(dims[h])))
    return DivisorProbeResult(kind="delta",
                              verdict="found-witness" if witnesses else "none-found",
                              exhaustive=True, trials=total,
                              witnesses=[{"w": w, "dim": d} for w, d in witnesses])


def sigma_probe(A: LagrangianSubspace, trials: int = 2000, rng=None,
                chunk: int = 65536, threads: int = 2) -> DivisorProbeResult:
    """Search P(A) for a decomposable vector.

    Over F_p with p <= 5 the whole of P(A) = P^9(F_p) is enumerated and a
    negative verdict is a certificate; otherwise ``trials`` random points
    are tested and none-found stays inconclusive.
    """
    p = _require_prime_field(A)
    AM = _rows_array(A) % p
    if p <= SIGMA_EXHAUSTIVE_MAX_PRIME:
        descs = batched.projective_block_descriptors(10, p, chunk=chunk)

        def worker(desc):
            combos = batched.build_projective_block(desc, 10, p)
            omegas = batched.matmul_mod(combos, AM, p)
            mask = batched.decomposable_mask(omegas, p)
            hits = np.nonzero(mask)[0]
            if hits.size:
                return combos.shape[0], [int(x) for x in omegas[hits[0]]]
            return combos.shape[0], None

        total = 0
        first = None
        for n, hit in batched.parallel_map(worker, descs, threads=threads):
            total += n
            if hit is not None and first is None:
                first = hit
        if first is not None:
            wit = _certify_decomposable(A.field, first)
            return DivisorProbeResult(kind="sigma", verdict="found-witness",
                                      exhaustive=True, trials=total, witnesses=[wit])
        return DivisorProbeResult(kind="sigma", verdict="none-found",
                                  exhaustive=True, trials=total)
    if rng is None:
        raise ValueError("sampling sigma probe needs an rng")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        combos = np.zeros((n, 10), dtype=np.int64)
        for i in range(n):
            row = [rng.randrange(p) for _ in range(10)]
            while not any(row):
                row = [rng.randrange(p) for _ in range(10)]
            combos[i] = row
        omegas = batched.matmul_mod(combos, AM, p)
        mask = batched.decomposable_mask(omegas, p)
        hits = np.nonzero(mask)[0]
        if hits.size:
            wit = _certify_decomposable(A.field, [int(x) for x in omegas[hits[0]]])
            return DivisorProbeResult(kind="sigma", verdict="found-witness",
                                      exhaustive=False, trials=done + int(hits[0]) + 1,
                                      witnesses=[wit])
        done += n
    return DivisorProbeResult(kind="sigma", verdict="none-found",
                              exhaustive=False, trials=trials)


def _certify_decomposable(field, coords):
    omega = MultiVector.from_vector(field, 3, [field.from_int(c) for c in coords])
    ok, witness = is_decomposable(omega)
    if not ok:
        raise AssertionError("batched decomposability disagrees with the exact test")
    return {"omega": [field.to_str(x) for x in omega.to_vector()],
            "witness_u": witness.to_json()}


@dataclass
class Lg1Sample:
    A: LagrangianSubspace
    seed: int
    attempts: int
    sigma: DivisorProbeResult
    gamma: DivisorProbeResult
    census_report: Optional[CensusReport] = None


def sample_lg1(p: int, seed: int, max_attempts: int = 20, want_census: bool = False,
               chunk: int = 32768, threads: int = 2) -> Lg1Sample:
    """Rejection-sample a graph Lagrangian with no sigma/gamma witness.

    Each attempt draws a random symmetric matrix over the standard frame,
    runs the sigma probe (exhaustive for p <= 5) and the exhaustive gamma
    scan, and keeps the subspace only if both report none-found.  The gamma
    scan doubles as the census of an accepted subspace.
    """
    import random as _random
    if p > GAMMA_MAX_PRIME:
        raise BudgetExceededError(f"certified sampling is limited to p <= {GAMMA_MAX_PRIME}")
    field = PrimeField(p)
    frame = standard_frame(field)
    rng = _random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        M = random_symmetric(field, 10, rng)
        A = lagrangian_from_graph(frame, M)
        if p <= SIGMA_EXHAUSTIVE_MAX_PRIME:
            sig = sigma_probe(A, threads=threads)
        else:
            sig = sigma_probe(A, trials=4000, rng=rng)
        if sig.found:
            continue
        t0 = time.perf_counter()
        counts, raw = _census_scan(A, p, chunk, 4, threads=threads)
        elapsed = (time.perf_counter() - t0) * 1000.0
        if raw:
            continue
        total = batched.grassmann_size(6, 3, p)
        gam = DivisorProbeResult(kind="gamma", verdict="none-found", exhaustive=True,
                                 trials=total,
                                 detail={"counts": {str(k): int(v) for k, v in enumerate(counts) if v}})
        report = None
        if want_census:
            counts_dict = {k: int(v) for k, v in enumerate(counts) if v}
            if sum(counts_dict.values()) != total:
                raise AssertionError("census counts do not sum to the Gaussian binomial")
            report = CensusReport(prime=p, counts=counts_dict, total=total,
                                  elapsed_ms=elapsed, chunk=chunk)
        return Lg1Sample(A=A, seed=seed, attempts=attempt, sigma=sig, gamma=gam,
                         census_report=report)
    raise BudgetExceededError(f"no witness-free Lagrangian found in {max_attempts} attempts")


def census_brute(A: LagrangianSubspace) -> dict:
    """Reference census by pure-Python strata; only sensible for p = 2."""
    p = _require_prime_field(A)
    field = A.field
    counts: dict[int, int] = {}
    for desc in batched.grassmann_block_descriptors(p, chunk=4096):
        for m in batched.build_grassmann_block(desc, p):
            k = stratum(A, _witness_subspace(field, m))
            counts[k] = counts.get(k, 0) + 1
    return counts
