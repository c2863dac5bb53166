"""Small dense complex linear algebra.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Everything here is sized for Hilbert spaces of at most a few qubits, so
clarity wins over blocking or sparse tricks.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ConvergenceError",
    "NotHermitianError",
    "NullSolution",
    "allclose_abs",
    "as_matrix",
    "eig_general_small",
    "eig_hermitian",
    "kron",
    "max_row_sum_norm",
    "solve_constrained_null",
]

HERMITIAN_TOL = 1e-10
NULL_REL_TOL = 1e-10
_EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """An iterative eigenvalue routine ran out of iterations."""


class NotHermitianError(ValueError):
    """Input to a Hermitian routine was not Hermitian within tolerance."""

    def __init__(self, deviation, tol):
        self.deviation = deviation
        super().__init__(
            f"matrix is not Hermitian: max|h - h^H| = {deviation:.3e} > {tol:.1e}"
        )


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def allclose_abs(a, b, atol: float) -> bool:
    """Elementwise ``|a - b| <= atol`` with no relative slack."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.all(np.abs(a - b) <= atol))


def max_row_sum_norm(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.abs(a).sum(axis=1).max())


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def eig_hermitian(h, tol: float = HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    evals : ndarray, real, ascending
    evecs : ndarray, orthonormal eigenvectors as columns
    """
    h = as_matrix(h)
    dev = float(np.abs(h - h.conj().T).max()) if h.size else 0.0
    if dev > tol:
        raise NotHermitianError(dev, tol)
    evals, evecs = np.linalg.eigh(0.5 * (h + h.conj().T))
    return evals, evecs


# ---------------------------------------------------------------------------
# General eigenvalues: Hessenberg reduction + shifted QR


def _hessenberg(a: np.ndarray) -> np.ndarray:
    h = a.copy()
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _eig2(a, b, c, d):
    # eigenvalues of [[a, b], [c, d]], larger-modulus root first
    mean = 0.5 * (a + d)
    root = np.sqrt(0.25 * (a - d) ** 2 + b * c + 0j)
    l1 = mean + root if abs(mean + root) >= abs(mean - root) else mean - root
    det = a * d - b * c
    l2 = det / l1 if l1 != 0 else mean - root
    return l1, l2


def _givens(x, y):
    r = np.hypot(abs(x), abs(y))
    if r == 0.0:
        return np.eye(2, dtype=complex)
    c, s = x / r, y / r
    return np.array([[np.conj(c), np.conj(s)], [-s, c]])


def _qr_sweep(h: np.ndarray, mu: complex) -> None:
    """One explicitly shifted QR step on an upper-Hessenberg block, in place."""
    m = h.shape[0]
    h -= mu * np.eye(m)
    rots = []
    for k in range(m - 1):
        g = _givens(h[k, k], h[k + 1, k])
        h[k:k + 2, k:] = g @ h[k:k + 2, k:]
        h[k + 1, k] = 0.0
        rots.append(g)
    for k, g in enumerate(rots):
        h[: k + 2, k:k + 2] = h[: k + 2, k:k + 2] @ g.conj().T
    h += mu * np.eye(m)


def _sort_key_order(vals, tol):
    """Descending real part; near-equal real parts broken by descending imag."""
    order = sorted(range(len(vals)), key=lambda i: -vals[i].real)
    # stable pass to reorder groups whose real parts tie within tol
    out, i = [], 0
    while i < len(order):
        j = i + 1
        while j < len(order) and abs(vals[order[j]].real - vals[order[i]].real) <= tol:
            j += 1
        group = sorted(order[i:j], key=lambda k: -vals[k].imag)
        out.extend(group)
        i = j
    return out


def eig_general_small(a, max_iter_per_eig: int = 60) -> np.ndarray:
    """Eigenvalues of a small square complex matrix (n <= 16).

    Householder reduction to upper Hessenberg form followed by single-shift
    complex QR with Wilkinson shifts and deflation. 2x2 trailing blocks are
    finished with the quadratic formula.

    Returns the eigenvalues sorted by descending real part, ties (within
    ``1e-9`` relative) by descending imaginary part.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"square matrix required, got {a.shape}")
    if n > 16:
        raise ValueError(f"dimension {n} exceeds the small-matrix limit of 16")
    if n == 0:
        return np.zeros(0, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")

    h = _hessenberg(a)
    scale = max(float(np.abs(h).max()), np.finfo(float).tiny)
    eigs = []
    hi = n - 1
    its = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(h[0, 0])
            break
        # locate the start of the unreduced block ending at hi
        lo = hi
        while lo > 0:
            local = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if local == 0.0:
                local = scale
            if abs(h[lo, lo - 1]) <= _EPS * local:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(h[hi, hi])
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            eigs.extend(_eig2(h[lo, lo], h[lo, hi], h[hi, lo], h[hi, hi]))
            hi -= 2
            its = 0
            continue

        its += 1
        if its > max_iter_per_eig:
            raise ConvergenceError(
                f"QR iteration did not converge after {max_iter_per_eig} sweeps "
                f"(active block {lo}..{hi})"
            )
        if its % 11 == 0:
            # exceptional shift to break cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            l1, l2 = _eig2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
            mu = l1 if abs(l1 - h[hi, hi]) < abs(l2 - h[hi, hi]) else l2
        block = h[lo:hi + 1, lo:hi + 1].copy()
        _qr_sweep(block, mu)
        h[lo:hi + 1, lo:hi + 1] = block

    vals = np.array(eigs, dtype=complex)
    tol = 1e-9 * max(1.0, float(np.abs(vals).max()))
    return vals[_sort_key_order(vals, tol)]


# ---------------------------------------------------------------------------
# Constrained null-space solve


@dataclass(frozen=True)
class NullSolution:
    """Result of :func:`solve_constrained_null`.

    ``null_dim`` counts singular values of the operator at or below
    ``threshold``; a value other than 1 means the constrained null vector
    is not unique (or does not exist), and ``x`` is only a representative.
    """

    x: np.ndarray
    residual: float
    null_dim: int
    threshold: float

    @property
    def unique(self) -> bool:
        return self.null_dim == 1


def solve_constrained_null(l, constraint_row, constraint_value=1.0,
                           rel_tol: float = NULL_REL_TOL) -> NullSolution:
    """Minimise ``|l x|`` subject to ``constraint_row . x = constraint_value``.

    The constraint is appended to ``l`` as an extra row and the augmented
    system is solved in the least-squares sense. The row is rescaled to the
    size of ``l`` so that it is not outweighed when ``l`` has large entries.
    """
    l = as_matrix(l)
    row = np.asarray(constraint_row, dtype=complex).reshape(1, -1)
    if row.shape[1] != l.shape[1]:
        raise ValueError(
            f"constraint row has {row.shape[1]} entries, operator has {l.shape[1]} columns"
        )
    if not np.any(row):
        raise ValueError("constraint row is identically zero")

    norm = max_row_sum_norm(l)
    threshold = rel_tol * norm
    svals = np.linalg.svd(l, compute_uv=False)
    null_dim = int(np.count_nonzero(svals <= threshold))

    weight = max(norm, 1.0) / np.abs(row).sum()
    aug = np.vstack([l, weight * row])
    rhs = np.zeros(aug.shape[0], dtype=complex)
    rhs[-1] = weight * constraint_value
    x, *_ = np.linalg.lstsq(aug, rhs, rcond=None)
    residual = float(np.linalg.norm(l @ x))
    return NullSolution(x=x, residual=residual, null_dim=null_dim, threshold=threshold)
