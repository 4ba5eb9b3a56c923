"""Dense complex matrix kernel for few-qubit operators.

Every operator in this package is a plain numpy array with dtype complex128.
The helpers here pin down shape and finiteness checking once, so the physics
modules can stay terse. Dimensions are tiny (2 to 8 rows in practice), which
is why the positive-semidefinite test below can afford its own little
eigenvalue solver instead of pulling in a general decomposition routine.
"""

from __future__ import annotations

import numpy as np

#: Default absolute comparison tolerance for matrix identities.
DEFAULT_TOL = 1e-12

#: Tolerance for accepting a matrix as unitary.
UNITARY_TOL = 1e-10

#: Eigenvalue floor used when checking positive semidefiniteness.
PSD_TOL = 1e-10


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce input to a 2-D complex array, rejecting NaN and Inf entries."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not (np.isfinite(arr.real).all() and np.isfinite(arr.imag).all()):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = as_cmatrix(a, "left factor")
    b = as_cmatrix(b, "right factor")
    if a.shape[1] != b.shape[0]:
        raise ValueError(
            f"cannot multiply shapes {a.shape} and {b.shape}: "
            f"inner dimensions {a.shape[1]} != {b.shape[0]}"
        )
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the slow (left) factor."""
    return np.kron(as_cmatrix(a, "left factor"), as_cmatrix(b, "right factor"))


def adjoint(a: np.ndarray) -> np.ndarray:
    return as_cmatrix(a).conj().T


def trace(a: np.ndarray) -> complex:
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = _same_square(a, b)
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = _same_square(a, b)
    return a @ b + b @ a


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(as_cmatrix(a)))


def is_unitary(a: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    gram = a.conj().T @ a
    return bool(np.max(np.abs(gram - np.eye(a.shape[0]))) <= tol)


def is_hermitian(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def hermitian_eigenvalues(a: np.ndarray, sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix via cyclic Jacobi rotations.

    Complex off-diagonal entries are first rotated onto the real axis, then a
    standard 2x2 Jacobi rotation zeroes them. A fixed budget of ``sweeps``
    full passes is far more than the handful needed at these dimensions; the
    loop normally exits after 3 or 4 passes once the off-diagonal mass drops
    below 1e-30. Chosen over a general eigensolver dependency because the
    only consumer is the PSD check and the matrices are at most 8x8.
    """
    a = as_cmatrix(a)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"eigenvalues require a square matrix, got {a.shape}")
    work = 0.5 * (a + a.conj().T)
    if n == 1:
        return np.array([work[0, 0].real])
    for _ in range(sweeps):
        off = np.sum(np.abs(work - np.diag(np.diag(work))) ** 2)
        if off < 1e-30:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = work[p, q]
                if abs(beta) < 1e-18:
                    continue
                alpha = work[p, p].real
                delta = work[q, q].real
                phase = beta / abs(beta)
                theta = 0.5 * np.arctan2(2.0 * abs(beta), alpha - delta)
                c = np.cos(theta)
                s = np.sin(theta)
                rot = np.array([[c, -s], [np.conj(phase) * s, np.conj(phase) * c]])
                idx = [p, q]
                work[:, idx] = work[:, idx] @ rot
                work[idx, :] = rot.conj().T @ work[idx, :]
    return np.sort(np.real(np.diag(work)))


def is_psd(a: np.ndarray, tol: float = PSD_TOL) -> bool:
    """True when the matrix is Hermitian with eigenvalues above ``-tol``.

    Never raises on finite square input; clearly non-Hermitian matrices
    simply report False.
    """
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    if not is_hermitian(a, max(tol, 1e-10)):
        return False
    eigs = hermitian_eigenvalues(a)
    return bool(eigs[0] >= -tol)


def _same_square(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = as_cmatrix(a, "first argument")
    b = as_cmatrix(b, "second argument")
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need two square matrices of equal shape, got {a.shape} and {b.shape}")
    return a, b
