"""Operator-valued frame systems and their frame bounds.

A g-system is a finite family of blocks ``L_j`` (``d_j x n`` complex
matrices) mapping an ambient n-dimensional space into per-block coefficient
spaces. Pairing the family with a square operator ``K`` on the ambient space
gives a K-g-system; the family is a K-g-frame when

    A * ||K^* f||^2  <=  sum_j ||L_j f||^2  <=  B * ||f||^2

holds for all f with constants 0 < A, B < infinity. This module computes the
optimal constants and classifies systems along the frame/tight-frame axes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linops
from .errors import DimMismatchError
from .linops import DEFAULT_RANK_TOL

# Relative residual below which range(K) counts as contained in range(S).
RANGE_INCLUSION_RTOL = 1e-8
# Relative Frobenius distance below which a system counts as tight.
TIGHT_RTOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GSystem:
    """A finite family of operator blocks over a common ambient space.

    ``blocks[j]`` has shape ``(d_j, ambient_dim)``; rows hold coordinates in
    the j-th coefficient space. Instances are immutable; the arrays are
    copied and marked read-only at construction.
    """

    ambient_dim: int
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if int(self.ambient_dim) < 1:
            raise DimMismatchError(f"ambient dimension must be >= 1, got {self.ambient_dim}")
        object.__setattr__(self, "ambient_dim", int(self.ambient_dim))
        frozen = []
        for j, raw in enumerate(self.blocks):
            block = linops.as_operator(raw)
            if block.shape[1] != self.ambient_dim:
                raise DimMismatchError(
                    f"block {j} has {block.shape[1]} columns, expected {self.ambient_dim}"
                )
            frozen.append(_frozen(block))
        object.__setattr__(self, "blocks", tuple(frozen))

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def block_dims(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)


@dataclass(frozen=True, eq=False)
class KGSystem:
    """A g-system together with the square ambient operator ``K``."""

    system: GSystem
    k: np.ndarray

    def __post_init__(self) -> None:
        k = linops.as_operator(self.k)
        n = self.system.ambient_dim
        if k.shape != (n, n):
            raise DimMismatchError(f"K has shape {k.shape}, expected ({n}, {n})")
        object.__setattr__(self, "k", _frozen(k))

    @property
    def ambient_dim(self) -> int:
        return self.system.ambient_dim


@dataclass(frozen=True, eq=False)
class BlockSequence:
    """A coefficient sequence with one part per block of a g-system."""

    parts: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "parts", tuple(_frozen(linops.as_vector(p)) for p in self.parts)
        )

    def norm(self) -> float:
        """Norm induced by the direct-sum inner product."""
        return float(np.sqrt(sum(float(np.vdot(p, p).real) for p in self.parts)))

    def inner(self, other: "BlockSequence") -> complex:
        """Direct-sum inner product, linear in ``self``."""
        if len(self.parts) != len(other.parts):
            raise DimMismatchError("sequences have different block counts")
        return complex(sum(np.vdot(q, p) for p, q in zip(self.parts, other.parts)))


@dataclass(frozen=True)
class BoundReport:
    """Optimal frame constants of a K-g-system.

    ``kg_lower_opt`` is None when range(K) is not contained in range(S) at
    the working tolerance (no positive lower bound relative to K exists).
    ``tight_kg`` records whether S equals ``kg_lower_opt * K K^*`` up to a
    relative Frobenius tolerance, with the constant in ``tightness_constant``.
    """

    bessel_upper_opt: float
    g_lower_opt: float
    kg_lower_opt: float | None
    tight_kg: bool
    tightness_constant: float | None


class Classification(enum.Enum):
    G_BESSEL_ONLY = "g_bessel_only"
    KG_FRAME = "kg_frame"
    G_FRAME = "g_frame"
    TIGHT_KG_FRAME = "tight_kg_frame"
    TIGHT_G_FRAME = "tight_g_frame"


@dataclass(frozen=True)
class ClassificationReport:
    """Frame class of a system plus the lower-bound data for ``K^*``.

    ``k_star_lower_bound`` is the largest C with ``||K^* f|| >= C ||f||``
    (the smallest singular value of K). ``g_frame_implied`` is True when
    that constant is positive and the system is a K-g-frame, in which case
    the system is guaranteed to be a g-frame as well.
    """

    label: Classification
    k_star_lower_bound: float
    g_frame_implied: bool
    bounds: BoundReport

    @property
    def is_kg_frame(self) -> bool:
        """True when the system satisfies the lower bound relative to K.

        Every g-frame qualifies, since the ordinary lower bound dominates
        the K-relative one after dividing by ``||K||^2``.
        """
        return self.label is not Classification.G_BESSEL_ONLY

    @property
    def is_g_frame(self) -> bool:
        """True when the ordinary (K-free) lower frame bound is positive."""
        return self.label in (Classification.G_FRAME, Classification.TIGHT_G_FRAME)

    @property
    def is_tight_kg_frame(self) -> bool:
        return self.bounds.tight_kg

    @property
    def is_tight_g_frame(self) -> bool:
        return self.label is Classification.TIGHT_G_FRAME


def _coerce_parts(sys: GSystem, seq) -> tuple[np.ndarray, ...]:
    parts = seq.parts if isinstance(seq, BlockSequence) else tuple(linops.as_vector(p) for p in seq)
    if len(parts) != sys.num_blocks:
        raise DimMismatchError(f"expected {sys.num_blocks} parts, got {len(parts)}")
    for j, (part, d) in enumerate(zip(parts, sys.block_dims)):
        if part.shape[0] != d:
            raise DimMismatchError(f"part {j} has length {part.shape[0]}, expected {d}")
    return parts


def synthesis(sys: GSystem, seq) -> np.ndarray:
    """Map a coefficient sequence back to the ambient space: sum_j L_j^* g_j."""
    parts = _coerce_parts(sys, seq)
    out = np.zeros(sys.ambient_dim, dtype=np.complex128)
    # fixed summation order keeps repeated runs bit-identical
    for block, part in zip(sys.blocks, parts):
        out += block.conj().T @ part
    return out


def analysis(sys: GSystem, f) -> BlockSequence:
    """Apply every block to ``f``, producing the coefficient sequence {L_j f}."""
    vec = linops.as_vector(f)
    if vec.shape[0] != sys.ambient_dim:
        raise DimMismatchError(f"vector has length {vec.shape[0]}, expected {sys.ambient_dim}")
    return BlockSequence(tuple(block @ vec for block in sys.blocks))


def frame_operator(sys: GSystem) -> np.ndarray:
    """The Hermitian PSD matrix S = sum_j L_j^* L_j (synthesis after analysis)."""
    n = sys.ambient_dim
    s = np.zeros((n, n), dtype=np.complex128)
    for block in sys.blocks:
        s += block.conj().T @ block
    return (s + s.conj().T) / 2.0


def range_condition_holds(
    ksys: KGSystem,
    rank_tol: float = DEFAULT_RANK_TOL,
    range_rtol: float = RANGE_INCLUSION_RTOL,
) -> bool:
    """Whether range(K) is contained in range(S) at the working tolerance."""
    s = frame_operator(ksys.system)
    p = linops.range_projector(s, rank_tol)
    k = ksys.k
    k_norm = linops.op_norm(k)
    if k_norm == 0.0:
        return True
    return linops.op_norm(k - p @ k) <= range_rtol * k_norm


def optimal_bounds(
    ksys: KGSystem,
    rank_tol: float = DEFAULT_RANK_TOL,
    range_rtol: float = RANGE_INCLUSION_RTOL,
    tight_rtol: float = TIGHT_RTOL,
) -> BoundReport:
    """Compute the optimal frame constants of a K-g-system.

    Parameters
    ----------
    ksys : KGSystem
        System under analysis.
    rank_tol : float
        Relative singular-value cutoff for every rank decision.
    range_rtol : float
        Relative residual for the range(K) in range(S) test.
    tight_rtol : float
        Relative Frobenius tolerance for the tightness test.

    Returns
    -------
    BoundReport
        The optimal upper bound is the largest eigenvalue of S and the
        optimal g-frame lower bound the smallest. The optimal lower bound
        relative to K is ``1 / ||S^{+/2} K||^2``, valid exactly when
        range(K) lies inside range(S); otherwise the field is None.
    """
    s = frame_operator(ksys.system)
    evals = linops.hermitian_eigvals(s)
    bessel = max(float(evals[-1]), 0.0)
    g_lower = max(float(evals[0]), 0.0)

    k = ksys.k
    k_norm = linops.op_norm(k)
    kg_lower: float | None = None
    if k_norm > 0.0 and range_condition_holds(ksys, rank_tol, range_rtol):
        half_inv = linops.psd_sqrt_pinv(s, rank_tol)
        denom = linops.op_norm(half_inv @ k)
        if denom > 0.0:
            kg_lower = 1.0 / (denom * denom)

    tight = False
    constant: float | None = None
    if kg_lower is not None:
        target = kg_lower * (k @ k.conj().T)
        scale = max(float(np.linalg.norm(s)), float(np.linalg.norm(target)))
        if scale > 0.0 and float(np.linalg.norm(s - target)) <= tight_rtol * scale:
            tight = True
            constant = kg_lower
    return BoundReport(bessel, g_lower, kg_lower, tight, constant)


def classify(ksys: KGSystem, tol: float = DEFAULT_RANK_TOL) -> ClassificationReport:
    """Classify a K-g-system along the frame and tightness axes.

    The label reports the strongest property that holds: a g-frame wins over
    a plain K-g-frame, and within each strength the tight variant wins.
    ``tol`` scales the positivity threshold for the lower bound (relative to
    the upper bound, so the decision is scale invariant).
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    report = optimal_bounds(ksys, rank_tol=tol)
    c = float(linops.svd_values(ksys.k)[-1]) if ksys.k.size else 0.0

    is_g = report.g_lower_opt > tol * max(report.bessel_upper_opt, 1e-300)
    is_kg = report.kg_lower_opt is not None
    tight_g = is_g and (report.bessel_upper_opt - report.g_lower_opt) <= TIGHT_RTOL * report.bessel_upper_opt

    if is_g and tight_g:
        label = Classification.TIGHT_G_FRAME
    elif is_g:
        label = Classification.G_FRAME
    elif is_kg and report.tight_kg:
        label = Classification.TIGHT_KG_FRAME
    elif is_kg:
        label = Classification.KG_FRAME
    else:
        label = Classification.G_BESSEL_ONLY

    implied = bool(c > 0.0 and is_kg)
    return ClassificationReport(label, c, implied, report)
