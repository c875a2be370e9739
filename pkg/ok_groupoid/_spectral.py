"""
Dense complex linear algebra on numpy arrays: Hermitian eigenvalues by
cyclic two-sided Jacobi rotations, singular values by one-sided
(Hestenes) Jacobi, and Gaussian-elimination inverses.
"""

import logging
import math

import numpy as np
import numpy.typing as npt

from ok_groupoid._exceptions import (
    NoConvergence,
    NotHermitian,
    NotSquare,
    SingularMatrix,
    SpectralException,
)

log = logging.getLogger("ok_groupoid.spectral")

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

_HERMITIAN_SLACK = 1e-10  # max |A - A†| entry accepted as Hermitian
_OFF_DIAGONAL_CUTOFF = 1e-13  # converged when off-diagonal mass < this·‖A‖_F
_SKIP_CUTOFF = 1e-17  # entries below this·‖A‖_F are not rotated away
_ORTHO_CUTOFF = 1e-14  # columns p, q count as orthogonal below this cosine
_MAX_SWEEPS = 100


def as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    """
    Returns `a` as a complex128 2-D array.

    Raises:
    - `SpectralException` - not 2-D, empty, or has NaN/Inf entries
    """

    out = np.array(a, dtype=np.complex128)
    if out.ndim != 2 or 0 in out.shape:
        raise SpectralException(f"Need a nonempty matrix, got {out.shape}")
    if not np.isfinite(out).all():
        raise SpectralException("Matrix has non-finite entries")
    return out


def dagger(a: npt.ArrayLike) -> ComplexMatrix:
    """Returns the conjugate transpose."""
    return as_matrix(a).conj().T


def block_diagonal(blocks: list[ComplexMatrix]) -> ComplexMatrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r, c = r + b.shape[0], c + b.shape[1]
    return out


def hermitian_eigensystem(
    a: npt.ArrayLike,
) -> tuple[RealVector, ComplexMatrix]:
    """
    Returns `(eigenvalues, eigenvectors)` of a Hermitian matrix, values
    ascending and vectors as the matching columns of a unitary matrix.

    Raises:
    - `NotSquare` - `a` is not square
    - `NotHermitian` - `a` differs from its adjoint by more than 1e-10
    - `NoConvergence` - no convergence within 100 sweeps
    """

    work = _check_hermitian(as_matrix(a))
    n = work.shape[0]
    vectors = np.eye(n, dtype=np.complex128)
    total = float(np.linalg.norm(work))
    if total == 0.0:
        return np.zeros(n), vectors

    for sweep in range(_MAX_SWEEPS):
        off = float(np.linalg.norm(work - np.diag(np.diag(work))))
        if off < _OFF_DIAGONAL_CUTOFF * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                if abs(apq) <= _SKIP_CUTOFF * total:
                    continue
                rot = _rotation(apq, work[p, p].real, work[q, q].real)
                pq = [p, q]
                work[:, pq] = work[:, pq] @ rot
                work[pq, :] = rot.conj().T @ work[pq, :]
                work[p, q] = work[q, p] = 0.0
                work[p, p], work[q, q] = work[p, p].real, work[q, q].real
                vectors[:, pq] = vectors[:, pq] @ rot
    else:
        raise NoConvergence(f"Hermitian {n}×{n}: no convergence")

    log.debug("Jacobi %d×%d: %d sweeps", n, n, sweep)
    values = np.diag(work).real.copy()
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def hermitian_eigenvalues(a: npt.ArrayLike) -> RealVector:
    """
    Returns the eigenvalues of a Hermitian matrix, ascending.

    Raises: as `hermitian_eigensystem`
    """

    return hermitian_eigensystem(a)[0]


def singular_values(a: npt.ArrayLike) -> RealVector:
    """
    Returns the singular values (one per column), descending. One-sided
    Jacobi orthogonalizes the columns, which diagonalizes `A†A` without
    forming it, so tiny singular values keep their absolute accuracy.

    Raises:
    - `NoConvergence` - no convergence within 100 sweeps
    """

    work = as_matrix(a).copy()
    n = work.shape[1]
    norms2 = np.array([np.vdot(c, c).real for c in work.T])

    for sweep in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha, beta = norms2[p], norms2[q]
                if alpha == 0.0 or beta == 0.0:
                    continue
                gamma = np.vdot(work[:, p], work[:, q])
                if abs(gamma) <= _ORTHO_CUTOFF * math.sqrt(alpha * beta):
                    continue
                rotated = True
                pq = [p, q]
                work[:, pq] = work[:, pq] @ _rotation(gamma, alpha, beta)
                norms2[p] = np.vdot(work[:, p], work[:, p]).real
                norms2[q] = np.vdot(work[:, q], work[:, q]).real
        if not rotated:
            break
    else:
        raise NoConvergence(f"Singular values {work.shape}: no convergence")

    log.debug("One-sided Jacobi %s: %d sweeps", work.shape, sweep)
    return np.sort(np.sqrt(norms2))[::-1]


def spectral_norm(a: npt.ArrayLike) -> float:
    """
    Returns `‖A‖`, the largest singular value (the square root of the
    largest eigenvalue of `A†A`).

    Raises: as `singular_values`
    """

    return float(singular_values(a)[0])


def min_singular_value(a: npt.ArrayLike) -> float:
    """
    Returns the smallest singular value of a square matrix, 0 exactly
    when the matrix is singular (up to rounding).

    Raises:
    - `NotSquare` - `a` is not square
    - `NoConvergence` - as `singular_values`
    """

    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"Need a square matrix, got {a.shape}")
    return float(singular_values(a)[-1])


def inverse(a: npt.ArrayLike) -> ComplexMatrix:
    """
    Returns `A⁻¹` by Gaussian elimination with partial pivoting.

    Raises:
    - `NotSquare` - `a` is not square
    - `SingularMatrix` - a pivot is exactly zero
    """

    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise NotSquare(f"Need a square matrix, got {a.shape}")

    aug = np.hstack([a, np.eye(n, dtype=np.complex128)])
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(aug[col:, col])))
        if aug[pivot, col] == 0:
            raise SingularMatrix(f"Zero pivot in column {col}")
        aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] /= aug[col, col]
        for row in range(n):
            if row != col and aug[row, col] != 0:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, n:]


def _check_hermitian(a: ComplexMatrix) -> ComplexMatrix:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"Need a square matrix, got {a.shape}")
    if (skew := float(np.max(np.abs(a - a.conj().T)))) > _HERMITIAN_SLACK:
        raise NotHermitian(f"|A - A†| entry {skew:.3g} > {_HERMITIAN_SLACK}")
    return (a + a.conj().T) / 2


def _rotation(off: complex, app: float, aqq: float) -> ComplexMatrix:
    """
    Unitary `U` with `(U† H U)[0, 1] == 0` for `H = [[app, off], [~, aqq]]`:
    a phase turning `off` real, then a real Jacobi rotation.
    """

    r = abs(off)
    phase = np.conj(off / r)
    c, s = _angle(r, app, aqq)
    return np.array([[c, s], [-s * phase, c * phase]], dtype=np.complex128)


def _angle(r: float, app: float, aqq: float) -> tuple[float, float]:
    theta = 0.5 * math.atan2(2.0 * r, aqq - app)
    return math.cos(theta), math.sin(theta)
