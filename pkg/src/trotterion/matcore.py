"""Dense complex-matrix kernel used by every other module.

All matrices handled here are small (64x64 at most), so every routine
favors accuracy over speed: exponentials go through scaling-and-squaring
with a Pade kernel, the spectral norm through a full SVD, and matrix
logarithms through inverse scaling-and-squaring with an explicit domain
check.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DomainError, InvalidInputError, SolverError

HERMITICITY_TOL = 1e-10

_LOG_SERIES_TOL = 1e-20
_LOG_SERIES_MAX_TERMS = 64
_SQRT_MAX_PULLS = 64


def as_square_matrix(m, name: str = "matrix") -> np.ndarray:
    """Validate and return a square complex matrix as a fresh ndarray."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidInputError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


def expm(m) -> np.ndarray:
    """Matrix exponential e^M."""
    return scipy.linalg.expm(as_square_matrix(m))


def spectral_norm(m) -> float:
    """Largest singular value of M."""
    return float(np.linalg.norm(as_square_matrix(m), 2))


def commutator(a, b) -> np.ndarray:
    """AB - BA for same-shaped square matrices."""
    ma = as_square_matrix(a, "A")
    mb = as_square_matrix(b, "B")
    if ma.shape != mb.shape:
        raise InvalidInputError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return ma @ mb - mb @ ma


def logm_near_identity(u) -> np.ndarray:
    """Principal logarithm of a matrix close to the identity.

    Requires ||U - I||_2 < 1 so the principal branch is unambiguous.
    Inverse scaling-and-squaring: pull principal square roots until
    ||U - I||_2 < 0.25, sum the log series for log(I + X), then scale
    back by 2^k.
    """
    mat = as_square_matrix(u, "U")
    eye = np.eye(mat.shape[0], dtype=complex)
    if spectral_norm(mat - eye) >= 1.0:
        raise DomainError("matrix is too far from the identity for a principal log")
    pulls = 0
    while spectral_norm(mat - eye) > 0.25:
        mat = np.asarray(scipy.linalg.sqrtm(mat), dtype=complex)
        pulls += 1
        if pulls > _SQRT_MAX_PULLS:
            raise SolverError("square-root reduction failed to contract toward I")
    x = mat - eye
    out = x.copy()
    power = x
    for j in range(2, _LOG_SERIES_MAX_TERMS + 1):
        power = power @ x
        term = power / j
        if j % 2 == 0:
            out -= term
        else:
            out += term
        if spectral_norm(term) < _LOG_SERIES_TOL:
            break
    return out * float(2**pulls)


def eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, column eigenvectors). The input is
    checked for Hermiticity to 1e-10 and symmetrized before the solve.
    """
    mat = as_square_matrix(h, "H")
    if spectral_norm(mat - mat.conj().T) > HERMITICITY_TOL:
        raise InvalidInputError("matrix is not Hermitian to within 1e-10")
    sym = (mat + mat.conj().T) / 2.0
    vals, vecs = np.linalg.eigh(sym)
    return np.asarray(vals, dtype=float), np.asarray(vecs, dtype=complex)
