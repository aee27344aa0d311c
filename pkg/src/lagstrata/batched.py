"""Vectorized mod-p kernels for the finite-field scans.

All arrays hold small nonnegative integer residues; the elimination kernel
runs in float32, where every intermediate value is an exact integer below
2^24 (requires p <= 181).  Modular reduction uses q = floor((x + 1/2)/p),
whose argument keeps a margin of 1/(2p) from the nearest integer, far above
float32 rounding error at these magnitudes.  The pure-Python echelon code in
:mod:`lagstrata.linalg` is the reference these kernels are tested against.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np

from .exterior import SUBSETS, INDEX, merge_sign

MAX_PRIME = 181

_INV_TABLES: dict[int, np.ndarray] = {}


def inverse_table(p: int) -> np.ndarray:
    tab = _INV_TABLES.get(p)
    if tab is None:
        tab = np.zeros(p, dtype=np.float32)
        for a in range(1, p):
            tab[a] = float(pow(a, p - 2, p))
        _INV_TABLES[p] = tab
    return tab


def _reduce_mod(x: np.ndarray, p: int) -> None:
    """In-place x mod p for float32 integer values with |x| < 2^23.

    floor((x + 1/2)/p) stays at least 1/(2p) away from an integer, which
    dwarfs the float32 rounding error at these magnitudes, so the quotient
    is exact.
    """
    q = np.floor(x * np.float32(1.0 / p) + np.float32(0.5 / p))
    q *= np.float32(p)
    np.subtract(x, q, out=x)


def batch_rank(mats: np.ndarray, p: int, stop_rank: int | None = None,
               assume_reduced: bool = False, in_place: bool = False) -> np.ndarray:
    """Ranks of a batch of matrices over F_p; ``mats`` has shape (N, r, c).

    Elimination defers the modular reduction of the bulk array: only the
    active column and the (normalized) pivot rows are reduced, so entries
    grow by at most (p-1)^2 per column and stay exact in float32.  With
    ``stop_rank`` the loop exits once every matrix is known to have rank
    at least that value (ranks above it are then reported as the column
    count reached).  ``in_place`` destroys a float32 input instead of
    copying it.
    """
    if p > MAX_PRIME:
        raise ValueError(f"batched kernels require p <= {MAX_PRIME}")
    src = np.asarray(mats)
    if in_place and src.dtype == np.float32 and src.flags.c_contiguous:
        a = src
        if not assume_reduced:
            _reduce_mod(a, p)
    elif assume_reduced:
        a = src.astype(np.float32)
    else:
        a = np.mod(src, p).astype(np.float32)
    N, r, c = a.shape
    if N == 0:
        return np.zeros(0, dtype=np.int64)
    inv = inverse_table(p)
    ptr = np.zeros(N, dtype=np.int64)
    rows = np.arange(r)
    aN = np.arange(N)
    buf = np.empty_like(a)
    target = min(r, c) if stop_rank is None else min(r, c, stop_rank)
    for col in range(c):
        colv = np.ascontiguousarray(a[:, :, col])
        _reduce_mod(colv, p)
        a[:, :, col] = colv
        nz = (colv != 0) & (rows[None, :] >= ptr[:, None])
        piv = np.argmax(nz, axis=1)
        has = nz[aN, piv]
        if has.any():
            swap = has & (piv != ptr)
            sidx = np.nonzero(swap)[0]
            if sidx.size:
                spr, spv = ptr[sidx], piv[sidx]
                tmp = a[sidx, spr, :].copy()
                a[sidx, spr, :] = a[sidx, spv, :]
                a[sidx, spv, :] = tmp
            prow_idx = np.where(has, ptr, 0)
            prows = a[aN, prow_idx, :]
            _reduce_mod(prows, p)
            pivvals = prows[aN, np.where(has, col, 0)].astype(np.int64) % p
            scale = np.where(has, inv[pivvals], np.float32(1.0))
            prows *= scale[:, None]
            _reduce_mod(prows, p)
            a[aN, prow_idx, :] = prows
            factors = np.where((rows[None, :] > prow_idx[:, None]) & has[:, None],
                               a[:, :, col], np.float32(0.0))
            np.multiply(factors[:, :, None], prows[:, None, :], out=buf)
            np.subtract(a, buf, out=a)
            ptr += has
        if (ptr >= target).all():
            break
    return ptr


_PAIR_IDX = None


def _pair_indices():
    global _PAIR_IDX
    if _PAIR_IDX is None:
        ia, ib = zip(*combinations(range(6), 2))
        _PAIR_IDX = (np.array(ia), np.array(ib))
    return _PAIR_IDX


_S32 = None


def tri_biv_to_five() -> np.ndarray:
    """Wedge sign tensor (tri, biv) -> grade-5 coordinate; shape (20, 15, 6)."""
    global _S32
    if _S32 is None:
        S = np.zeros((20, 15, 6), dtype=np.int64)
        for i, I in enumerate(SUBSETS[3]):
            for j, J in enumerate(SUBSETS[2]):
                ms = merge_sign(I, J)
                if ms is not None:
                    sign, M = ms
                    S[i, j, INDEX[5][M]] = sign
        _S32 = S
    return _S32


_S13 = None


def vec_tri_to_four() -> np.ndarray:
    """Wedge sign tensor (vector, tri) -> grade-4 coordinate; shape (6, 20, 15)."""
    global _S13
    if _S13 is None:
        S = np.zeros((6, 20, 15), dtype=np.int64)
        for i in range(6):
            for t, T in enumerate(SUBSETS[3]):
                ms = merge_sign((i + 1,), T)
                if ms is not None:
                    sign, M = ms
                    S[i, t, INDEX[4][M]] = sign
        _S13 = S
    return _S13


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) mod p through float64; inputs must be reduced mod p."""
    prod = a.astype(np.float64) @ b.astype(np.float64)
    return np.mod(np.rint(prod).astype(np.int64), p)


def matmul_mod_f32(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p in float32; exact while the inner dimension keeps
    accumulated values below 2^24 (true for all uses here)."""
    prod = a.astype(np.float32, copy=False) @ b.astype(np.float32, copy=False)
    _reduce_mod(prod, p)
    return prod


def tangent_gram_blocks(a_rows: np.ndarray, p: int) -> np.ndarray:
    """Contraction of a Lagrangian basis with the wedge tensor.

    Returns D of shape (15, 60) with D[j, c*10+m] = sum_i a[m,i] S[i,j,c],
    so for bivectors B (N, 3, 15) the product (B.reshape(-1,15) @ D) lists
    the grade-5 coordinates of a_m ^ b_s.  Because the top-grade pairing of
    a grade-5 element against the six basis vectors is a signed permutation
    of its coordinates, 10 - rank of that (18, 10) matrix is dim(A ∩ T_U).
    """
    S = tri_biv_to_five()
    D = np.einsum("mi,ijc->jcm", np.mod(a_rows, p), S).reshape(15, 60) % p
    return D.astype(np.float32)


def bivectors_of_rows(mats: np.ndarray, p: int) -> np.ndarray:
    """Pairwise wedges of the three rows of each 3x6 matrix: (N, 3, 15)."""
    ia, ib = _pair_indices()
    m = mats.astype(np.float32, copy=False)
    out = np.empty((mats.shape[0], 3, 15), dtype=np.float32)
    for s, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        P = m[:, i, :, None] * m[:, j, None, :]
        out[:, s, :] = P[:, ia, ib]
        out[:, s, :] -= P[:, ib, ia]
    _reduce_mod(out, p)
    return out


def intersection_dims_for_batch(mats: np.ndarray, D: np.ndarray, p: int) -> np.ndarray:
    """dim(A ∩ T_U) for each 3x6 matrix in the batch, given D from above."""
    N = mats.shape[0]
    B = bivectors_of_rows(mats, p)
    M = matmul_mod_f32(B.reshape(-1, 15), D, p).reshape(N, 18, 10)
    return 10 - batch_rank(M, p, assume_reduced=True, in_place=True)


def pivot_patterns(n: int = 6, k: int = 3):
    return list(combinations(range(n), k))


def free_slots(pattern, n: int = 6):
    """Free (row, col) slots of the reduced-echelon representatives."""
    slots = []
    pset = set(pattern)
    for i, pc in enumerate(pattern):
        for c in range(pc + 1, n):
            if c not in pset:
                slots.append((i, c))
    return slots


def grassmann_size(n: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def grassmann_block_descriptors(p: int, chunk: int = 32768, n: int = 6, k: int = 3):
    """Disjoint block descriptors covering every echelon representative once."""
    out = []
    for pattern in pivot_patterns(n, k):
        slots = free_slots(pattern, n)
        total = p ** len(slots)
        start = 0
        while start < total:
            count = min(chunk, total - start)
            out.append((pattern, tuple(slots), start, count))
            start += count
    return out


def build_grassmann_block(desc, p: int) -> np.ndarray:
    pattern, slots, start, count = desc
    mats = np.zeros((count, 3, 6), dtype=np.int64)
    for i, pc in enumerate(pattern):
        mats[:, i, pc] = 1
    codes = np.arange(start, start + count, dtype=np.int64)
    for t, (i, c) in enumerate(slots):
        mats[:, i, c] = (codes // p**t) % p
    return mats


def projective_block_descriptors(dim: int, p: int, chunk: int = 65536):
    out = []
    for lead in range(dim):
        total = p ** (dim - lead - 1)
        start = 0
        while start < total:
            count = min(chunk, total - start)
            out.append((lead, start, count))
            start += count
    return out


def build_projective_block(desc, dim: int, p: int) -> np.ndarray:
    lead, start, count = desc
    vecs = np.zeros((count, dim), dtype=np.int64)
    vecs[:, lead] = 1
    codes = np.arange(start, start + count, dtype=np.int64)
    for t in range(dim - lead - 1):
        vecs[:, lead + 1 + t] = (codes // p**t) % p
    return vecs


def parallel_map(worker, items, threads: int = 2):
    """Map over items with a small thread pool; numpy releases the GIL."""
    if threads <= 1 or len(items) <= 1:
        return [worker(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, items))


def decomposable_mask(omegas: np.ndarray, p: int) -> np.ndarray:
    """Which nonzero trivectors (rows of (N, 20)) are decomposable.

    A nonzero trivector is decomposable iff the 6x15 matrix of v -> v ^ omega
    has rank 3 (only 3, 5, 6 occur).
    """
    S = vec_tri_to_four().transpose(1, 0, 2).reshape(20, 90) % p
    M = matmul_mod_f32(np.mod(omegas, p), S, p).reshape(-1, 6, 15)
    Mt = np.ascontiguousarray(M.transpose(0, 2, 1))
    return batch_rank(Mt, p, stop_rank=4, assume_reduced=True, in_place=True) == 3


def f_space_dims(ws: np.ndarray, a_rows: np.ndarray, p: int) -> np.ndarray:
    """dim(A ∩ F_[w]) for each nonzero w (rows of (N, 6))."""
    S = vec_tri_to_four()
    E = np.einsum("mt,itf->imf", np.mod(a_rows, p), S).reshape(6, 150) % p
    M = matmul_mod_f32(np.mod(ws, p), E, p).reshape(-1, 10, 15)
    Mt = np.ascontiguousarray(M.transpose(0, 2, 1))
    return 10 - batch_rank(Mt, p, assume_reduced=True, in_place=True)
