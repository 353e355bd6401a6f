"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` complex128 arrays. The functions here add the
shape and Hermiticity contracts the rest of the package relies on.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from .exceptions import ContractError, NotPSDError, ShapeError

ComplexMatrix = npt.NDArray[np.complex128]

HERMITIAN_ATOL = 1e-12
PSD_ATOL = 1e-10


def as_matrix(a: npt.ArrayLike) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def _require_square(m: ComplexMatrix, name: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {m.shape}")


def multiply(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    return np.kron(as_matrix(a), as_matrix(b))


def adjoint(a: npt.ArrayLike) -> ComplexMatrix:
    return as_matrix(a).conj().T


def trace(a: npt.ArrayLike) -> complex:
    m = as_matrix(a)
    _require_square(m)
    return complex(np.trace(m))


def hermiticity_residual(a: npt.ArrayLike) -> float:
    """Largest entrywise deviation ``max |a - a^dagger|``."""
    m = as_matrix(a)
    _require_square(m)
    return float(np.max(np.abs(m - m.conj().T)))


def require_hermitian(a: npt.ArrayLike, name: str = "matrix", atol: float = HERMITIAN_ATOL) -> ComplexMatrix:
    m = as_matrix(a)
    _require_square(m, name)
    residual = hermiticity_residual(m)
    if residual > atol:
        raise ContractError(f"{name} is not Hermitian (residual {residual:.3e} > {atol:g})")
    return m


def hermitian_eigen(h: npt.ArrayLike) -> tuple[npt.NDArray[np.float64], ComplexMatrix]:
    """Spectral decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Unitary matrix whose columns are the matching eigenvectors, so that
        ``h = V @ diag(eigenvalues) @ V^dagger``.
    """
    m = require_hermitian(h, "hermitian_eigen input")
    # LAPACK zheevd; only one triangle is read, so symmetrize first
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def is_projector(e: npt.ArrayLike, atol: float = HERMITIAN_ATOL) -> bool:
    m = as_matrix(e)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m @ m - m)) <= atol)


def psd_sqrt(e: npt.ArrayLike) -> ComplexMatrix:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in ``[-PSD_ATOL, 0)`` are treated as rounding noise and
    clamped to zero; anything more negative raises :class:`NotPSDError`.
    """
    lam, vecs = hermitian_eigen(e)
    if lam[0] < -PSD_ATOL:
        raise NotPSDError(f"matrix has eigenvalue {lam[0]:.3e} < -{PSD_ATOL:g}")
    root = (vecs * np.sqrt(np.clip(lam, 0.0, None))) @ vecs.conj().T
    return 0.5 * (root + root.conj().T)
