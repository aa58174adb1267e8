"""Independent oracles and instance generators shared by the test suite.

Everything here sticks to plain numpy so the quantities under test
(pseudoinverse factors, Douglas-style bounds, survival flags) are checked
against a second, structurally different computation.
"""

from __future__ import annotations

import numpy as np

from kgframes import (
    GSystem,
    KGSystem,
    random_kg_system,
)


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = complex_gaussian(rng, n)
    return v / np.linalg.norm(v)


def random_range_vector(rng: np.random.Generator, k: np.ndarray) -> np.ndarray:
    """A vector of range(K) with norm of order one."""
    v = k @ complex_gaussian(rng, k.shape[1])
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("K is zero; no nonzero range vector exists")
    return v / nrm


def _min_eig(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])


def bisect_kg_lower_bound(
    s: np.ndarray,
    k: np.ndarray,
    psd_tol: float = 1e-10,
    rel_precision: float = 1e-11,
) -> float:
    """sup{A >= 0 : S - A K K^* is positive semidefinite}, by bisection.

    Acceptance of a trial A uses the smallest eigenvalue of the pencil with
    an absolute slack of ``psd_tol`` times the scale of S. Independent of
    any pseudoinverse computation.
    """
    kk = k @ k.conj().T
    scale = max(1.0, float(np.linalg.norm(s, 2)))

    def feasible(a: float) -> bool:
        return _min_eig(s - a * kk) >= -psd_tol * scale

    if float(np.linalg.norm(kk)) == 0.0:
        raise ValueError("K is zero; the supremum is unbounded")
    if not feasible(0.0):
        return 0.0
    hi = 1.0
    while feasible(hi):
        hi *= 2.0
        if hi > 1e12:
            return float("inf")
    lo = 0.0
    while hi - lo > rel_precision * max(1.0, hi):
        mid = (lo + hi) / 2.0
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def range_inclusion_oracle(s: np.ndarray, k: np.ndarray, rtol: float = 1e-8) -> bool:
    """range(K) inside range(S), decided through a least-squares residual."""
    k_norm = float(np.linalg.norm(k))
    if k_norm == 0.0:
        return True
    x, *_ = np.linalg.lstsq(s, k, rcond=None)
    return float(np.linalg.norm(s @ x - k)) <= rtol * k_norm


def oracle_is_kg_frame(s: np.ndarray, k: np.ndarray, tol: float = 1e-10) -> bool:
    """Ground-truth survival: range inclusion plus a positive pencil bound."""
    if not range_inclusion_oracle(s, k):
        return False
    return bisect_kg_lower_bound(s, k) > tol


def frame_operator_of(sys: GSystem) -> np.ndarray:
    """Plain-numpy frame operator, independent of the library routine."""
    n = sys.ambient_dim
    out = np.zeros((n, n), dtype=np.complex128)
    for b in sys.blocks:
        out += b.conj().T @ b
    return out


def power_iteration_norm(m: np.ndarray, iters: int = 500, seed: int = 0) -> float:
    """Largest singular value via power iteration on M^* M."""
    rng = np.random.default_rng(seed)
    if m.size == 0:
        return 0.0
    gram = m.conj().T @ m
    v = complex_gaussian(rng, gram.shape[0])
    v /= np.linalg.norm(v)
    for _ in range(iters):
        w = gram @ v
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        v = w / nrm
    return float(np.sqrt(np.real(np.vdot(v, gram @ v))))


def random_instance(seed: int, n_max: int = 12) -> KGSystem:
    """Seeded random K-g-frame with spanning blocks and a low-rank K."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, n_max + 1))
    num_blocks = int(rng.integers(2, 6))
    dims = [int(rng.integers(1, 4)) for _ in range(num_blocks)]
    while sum(dims) < n + 1:
        dims[int(rng.integers(0, num_blocks))] += 1
    rank_k = int(rng.integers(1, n + 1))
    return random_kg_system(n, dims, rank_k, seed=int(rng.integers(0, 2**31)))


def full_rank_instance(seed: int, n_max: int = 8, m_max: int = 8):
    """Instance with invertible S and invertible K, for erasure equivalence.

    Block dimensions are drawn so that some single or pair removals drop the
    remaining rows below the ambient dimension (certain death) while others
    keep a spanning family (generic survival).
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, n_max + 1))
    num_blocks = int(rng.integers(3, m_max + 1))
    dims = [int(rng.integers(1, 4)) for _ in range(num_blocks)]
    total = sum(dims)
    if total < n + 1:
        dims[0] += n + 1 - total
    return random_kg_system(n, dims, n, seed=int(rng.integers(0, 2**31)))


def unit_norm_instance(seed: int):
    """K-g-frame whose blocks all have operator norm one and sigma_max(K) = 1.

    At least three blocks are unitary, which forces the optimal lower bound
    relative to K to be at least three; K keeps its smallest singular value
    well above 0.8, so removing one or two blocks stays inside the counting
    criterion's guarantee zone.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 9))
    blocks = []
    for _ in range(3):
        q, _ = np.linalg.qr(complex_gaussian(rng, (n, n)))
        blocks.append(q)
    for _ in range(int(rng.integers(1, 3))):
        d = int(rng.integers(1, n))
        g = complex_gaussian(rng, (d, n))
        blocks.append(g / np.linalg.svd(g, compute_uv=False)[0])
    order = rng.permutation(len(blocks))
    blocks = [blocks[i] for i in order]

    c_min = float(rng.uniform(0.85, 0.98))
    u, _ = np.linalg.qr(complex_gaussian(rng, (n, n)))
    v, _ = np.linalg.qr(complex_gaussian(rng, (n, n)))
    svals = np.linspace(1.0, c_min, n)
    k = u @ np.diag(svals.astype(np.complex128)) @ v.conj().T
    return KGSystem(GSystem(n, tuple(blocks)), k)
