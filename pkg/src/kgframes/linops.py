"""Dense complex operator algebra: adjoints, pseudo-inverses, norms, projectors.

Every function accepts array-likes and works on ``complex128`` matrices.
Rank decisions use a relative cutoff ``tol * sigma_max`` against the largest
singular value; :data:`DEFAULT_RANK_TOL` is the package-wide default and
``tol = 0`` requests the machine-precision default instead. Inner products
are linear in the first argument.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPSDError

DEFAULT_RANK_TOL = 1e-10


def as_operator(m) -> np.ndarray:
    """Coerce ``m`` to a 2-D complex128 matrix, rejecting non-finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def as_vector(v) -> np.ndarray:
    """Coerce ``v`` to a 1-D complex128 vector, rejecting non-finite entries."""
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError(f"expected a vector, got ndim={a.ndim}")
    if a.size and not np.all(np.isfinite(a)):
        raise ValueError("vector contains NaN or Inf entries")
    return a


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_operator(m).conj().T.copy()


def inner(f, g) -> complex:
    """Inner product sum(f * conj(g)), linear in the first argument."""
    return complex(np.vdot(as_vector(g), as_vector(f)))


def op_norm(m) -> float:
    """Operator (spectral) norm, the largest singular value."""
    a = as_operator(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def svd_values(m) -> np.ndarray:
    """Singular values in descending order (empty for zero-size input)."""
    a = as_operator(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def hermitian_eigvals(m) -> np.ndarray:
    """Eigenvalues of a (numerically) Hermitian matrix, ascending."""
    a = as_operator(m)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.eigvalsh((a + a.conj().T) / 2.0)


def _sv_cutoff(s: np.ndarray, shape: tuple[int, int], tol: float) -> float:
    if s.size == 0:
        return 0.0
    if tol == 0.0:
        tol = max(shape) * np.finfo(np.float64).eps
    return tol * float(s[0])


def numerical_rank(m, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of singular values above the relative cutoff."""
    a = as_operator(m)
    s = svd_values(a)
    return int(np.count_nonzero(s > _sv_cutoff(s, a.shape, tol)))


def pinv(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse with a relative singular-value cutoff.

    Parameters
    ----------
    m : array_like
        Matrix to invert, any shape.
    tol : float
        Singular values below ``tol * sigma_max`` are treated as zero;
        ``tol = 0`` selects the machine-precision default.

    Returns
    -------
    numpy.ndarray
        The pseudo-inverse, with shape transposed relative to ``m``.
    """
    a = as_operator(m)
    if a.size == 0 or not np.any(a):
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    cutoff = _sv_cutoff(s, a.shape, tol)
    s_inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return (vh.conj().T * s_inv) @ u.conj().T


def range_projector(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthogonal projector onto the column space of ``m``.

    The result is Hermitian and idempotent; its trace equals the numerical
    rank of ``m`` at the given relative cutoff.
    """
    a = as_operator(m)
    rows = a.shape[0]
    if a.size == 0 or not np.any(a):
        return np.zeros((rows, rows), dtype=np.complex128)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    r = int(np.count_nonzero(s > _sv_cutoff(s, a.shape, tol)))
    basis = u[:, :r]
    p = basis @ basis.conj().T
    return (p + p.conj().T) / 2.0


def psd_sqrt_pinv(m, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Pseudo-inverse square root of a Hermitian positive semidefinite matrix.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian PSD within the tolerance.
    tol : float
        Relative cutoff used both to test definiteness and to drop the
        numerically zero part of the spectrum.

    Returns
    -------
    numpy.ndarray
        ``Q`` with ``Q @ Q @ m`` equal to the range projector of ``m``.

    Raises
    ------
    NotPSDError
        If ``m`` is not Hermitian or has an eigenvalue below ``-tol * |m|``.
    """
    a = as_operator(m)
    if a.shape[0] != a.shape[1]:
        raise NotPSDError(f"matrix is not square: {a.shape}")
    if a.size == 0:
        return a.copy()
    scale = max(float(np.abs(a).max()), 1.0)
    if tol == 0.0:
        tol = a.shape[0] * np.finfo(np.float64).eps
    if float(np.abs(a - a.conj().T).max()) > tol * scale:
        raise NotPSDError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    top = max(float(w[-1]), 0.0)
    if float(w[0]) < -tol * max(top, scale):
        raise NotPSDError(f"matrix has a negative eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    cutoff = tol * top
    inv_sqrt = np.where(w > cutoff, 1.0 / np.sqrt(np.where(w > cutoff, w, 1.0)), 0.0)
    q = (v * inv_sqrt) @ v.conj().T
    return (q + q.conj().T) / 2.0
