"""Rotating-frame Hamiltonians, Liouvillians, time evolution and steady states.

Conventions
-----------
Rates are in units of a reference decay rate (``gamma = 1``) and times in
its inverse. Density matrices are vectorised by stacking columns, so

    vec(A X B) = (B^T kron A) vec(X)

and the generator pieces read

    -i[H, rho]              ->  -i (I kron H  -  H^T kron I)
    c rho c^+               ->  conj(c) kron c
    -(c^+ c rho + rho c^+ c)/2 ->  -(I kron c^+c + (c^+c)^T kron I)/2

Decay channels ``sqrt(gamma_j) sigma_j^-`` (separate reservoirs) or a single
``sqrt(gamma) (sigma_1^- + sigma_2^-)`` (common reservoir) give the
``gamma/2 (2 c rho c^+ - c^+ c rho - rho c^+ c)`` dissipators.
"""

from dataclasses import dataclass
import enum

import numpy as np

from .integrate import dopri5
from .numerics import as_matrix, max_row_sum_norm, solve_constrained_null
from .operators import SIGMA_MINUS, SIGMA_X, SIGMA_Y, SIGMA_Z, embed
from .states import DensityMatrix

__all__ = [
    "DriveComponent",
    "ReservoirModel",
    "Superoperator",
    "SystemParams",
    "Trajectory",
    "dissipator",
    "effective_rabi",
    "evolve",
    "hamiltonian_superoperator",
    "hermitian_basis",
    "liouvillian",
    "real_generator",
    "rotating_hamiltonian",
    "single_qubit_liouvillian",
    "steady_state",
]


class ReservoirModel(enum.Enum):
    SEPARATE = "separate"
    COMMON = "common"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown reservoir {value!r}; use 'separate' or 'common'") from None


@dataclass(frozen=True)
class SystemParams:
    """Rotating-frame parameters of two driven, exchange-coupled qubits."""

    omega1: float = 0.0
    omega2: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    coupling: float = 0.0
    gamma1: float = 1.0
    gamma2: float = 1.0

    def __post_init__(self):
        for name in ("omega1", "omega2", "delta1", "delta2", "coupling", "gamma1", "gamma2"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError(f"decay rates must be >= 0, got {self.gamma1}, {self.gamma2}")

    @classmethod
    def symmetric(cls, omega=0.0, coupling=0.0, delta=0.0, gamma=1.0):
        """Identical drive, detuning and decay on both qubits."""
        return cls(omega, omega, delta, delta, coupling, gamma, gamma)


@dataclass(frozen=True)
class DriveComponent:
    amplitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.amplitude):
            raise ValueError(f"amplitude must be finite, got {self.amplitude}")


def effective_rabi(components) -> float:
    """Modulus of ``sum_k amplitude_k * exp(i phase_k)``."""
    total = sum((c.amplitude * np.exp(1j * c.phase) for c in components), 0j)
    return float(abs(total))


@dataclass(frozen=True, eq=False)
class Superoperator:
    """``dim**2 x dim**2`` generator acting on column-stacked density matrices."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.dim ** 2, self.dim ** 2):
            raise ValueError(f"superoperator shape {m.shape} does not match dim {self.dim}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def trace_row(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex).reshape(-1, order="F")

    def apply(self, rho) -> np.ndarray:
        """Action on a matrix (``DensityMatrix`` or any square array)."""
        m = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)
        out = self.matrix @ m.reshape(-1, order="F")
        return out.reshape(self.dim, self.dim, order="F")

    def trace_defect(self) -> float:
        """``|trace_row . L|``; zero for a trace-preserving generator."""
        return float(np.abs(self.trace_row @ self.matrix).max())

    def __add__(self, other):
        if not isinstance(other, Superoperator) or other.dim != self.dim:
            return NotImplemented
        return Superoperator(self.dim, self.matrix + other.matrix)

    def norm(self) -> float:
        return max_row_sum_norm(self.matrix)


def _spre(a):
    return np.kron(np.eye(a.shape[0]), a)


def _spost(a):
    return np.kron(a.T, np.eye(a.shape[0]))


def hamiltonian_superoperator(h) -> Superoperator:
    h = as_matrix(h)
    return Superoperator(h.shape[0], -1j * (_spre(h) - _spost(h)))


def dissipator(c, rate: float = 1.0) -> Superoperator:
    """``rate/2 (2 c rho c^+ - c^+ c rho - rho c^+ c)``."""
    c = as_matrix(c)
    cdc = c.conj().T @ c
    m = np.kron(c.conj(), c) - 0.5 * _spre(cdc) - 0.5 * _spost(cdc)
    return Superoperator(c.shape[0], rate * m)


def rotating_hamiltonian(p: SystemParams, split: bool = False):
    """Two-qubit Hamiltonian in the frame co-rotating with the drives.

    ``sum_j (delta_j/2 sz_j + omega_j/2 sx_j) + coupling/2 (sx sx + sy sy)``.
    With ``split=True`` returns ``(H0, Hxx)`` instead of their sum.
    """
    h0 = np.zeros((4, 4), dtype=complex)
    for j, (omega, delta) in enumerate(((p.omega1, p.delta1), (p.omega2, p.delta2))):
        h0 += 0.5 * delta * embed(SIGMA_Z, j, 2) + 0.5 * omega * embed(SIGMA_X, j, 2)
    hxx = 0.5 * p.coupling * (np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y))
    if split:
        return h0, hxx
    return h0 + hxx


def liouvillian(p: SystemParams, model=ReservoirModel.SEPARATE) -> Superoperator:
    model = ReservoirModel.parse(model)
    gen = hamiltonian_superoperator(rotating_hamiltonian(p))
    s1, s2 = embed(SIGMA_MINUS, 0, 2), embed(SIGMA_MINUS, 1, 2)
    if model is ReservoirModel.SEPARATE:
        return gen + dissipator(s1, p.gamma1) + dissipator(s2, p.gamma2)
    if p.gamma1 != p.gamma2:
        raise ValueError(
            f"common reservoir needs equal decay rates, got {p.gamma1} and {p.gamma2}"
        )
    return gen + dissipator(s1 + s2, p.gamma1)


def single_qubit_liouvillian(omega: float, gamma: float) -> Superoperator:
    """Resonantly driven, damped qubit: ``H = omega/2 sx`` plus decay at ``gamma``."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return hamiltonian_superoperator(0.5 * omega * SIGMA_X) + dissipator(SIGMA_MINUS, gamma)


def _dims_for(dim):
    k = int(round(np.log2(dim)))
    return (2,) * k if 2 ** k == dim else (dim,)


def steady_state(l: Superoperator):
    """Trace-one null vector of ``l``.

    For Hermiticity-preserving generators the kernel is searched in the real
    coordinates of :func:`real_generator`, so the result is Hermitian by
    construction even when ``l`` is badly conditioned (large drives and
    couplings). Other generators are solved on the complex vectorisation.

    Returns
    -------
    rho : DensityMatrix
        The steady state, or one representative when it is not unique.
    null_dim : int
        Numerical dimension of the kernel of ``l``; 1 means unique.
    """
    g, basis = real_generator(l)
    if np.abs(g.imag).max() <= 1e-12 * max(1.0, l.norm()):
        trace_row = np.trace(basis, axis1=1, axis2=2).real
        sol = solve_constrained_null(g.real, trace_row, 1.0)
        rho = np.tensordot(sol.x.real, basis, axes=1)
    else:
        sol = solve_constrained_null(l.matrix, l.trace_row, 1.0)
        rho = sol.x.reshape(l.dim, l.dim, order="F")
    return DensityMatrix(rho, _dims_for(l.dim)), sol.null_dim


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: tuple
    stats: dict

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.times, self.states))

    def __getitem__(self, i):
        return self.times[i], self.states[i]

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]


def hermitian_basis(dim: int) -> np.ndarray:
    """Orthonormal Hermitian operator basis, shape ``(dim**2, dim, dim)``.

    ``|j><j|``, ``(|j><k| + |k><j|)/sqrt2`` and ``i(|j><k| - |k><j|)/sqrt2``
    for ``j < k``, orthonormal under ``Tr(A B)``.
    """
    basis = []
    r = 1 / np.sqrt(2)
    for j in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[j, j] = 1.0
        basis.append(e)
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[j, k] = sym[k, j] = r
            asym = np.zeros((dim, dim), dtype=complex)
            asym[j, k] = 1j * r
            asym[k, j] = -1j * r
            basis.extend((sym, asym))
    return np.array(basis)


def real_generator(l: Superoperator):
    """``l`` expressed on real coordinates ``c_k = Tr(B_k rho)``.

    Returns ``(generator, basis)``; ``rho = sum_k c_k B_k``. A Lindblad
    generator maps Hermitian matrices to Hermitian matrices, so the
    coordinate matrix is real up to rounding.
    """
    basis = hermitian_basis(l.dim)
    to_vec = np.stack([b.reshape(-1, order="F") for b in basis], axis=1)
    from_vec = to_vec.conj().T
    g = from_vec @ l.matrix @ to_vec
    return g, basis


def evolve(rho0: DensityMatrix, l: Superoperator, t_final: float,
           sample_count: int = 500, rel_tol: float = 1e-10) -> Trajectory:
    """Integrate ``d rho/dt = L rho`` from ``t = 0`` to ``t_final``.

    Samples are taken at ``sample_count`` uniformly spaced times including
    both end points. The state is propagated as real coordinates on an
    orthonormal Hermitian basis (see :func:`real_generator`), so samples are
    Hermitian by construction; trace and positivity are still validated on
    every sample.

    Raises
    ------
    StepSizeUnderflow
        If the step controller collapses.
    InvalidStateError
        If a sample violates the density-matrix invariants.
    """
    if not t_final > 0:
        raise ValueError(f"t_final must be > 0, got {t_final}")
    if sample_count < 2:
        raise ValueError(f"sample_count must be >= 2, got {sample_count}")
    if rho0.matrix.shape[0] != l.dim:
        raise ValueError(f"state dimension {rho0.matrix.shape[0]} != generator dimension {l.dim}")

    g, basis = real_generator(l)
    imag = float(np.abs(g.imag).max())
    if imag > 1e-12 * max(1.0, l.norm()):
        raise ValueError(f"generator does not preserve Hermiticity (imaginary part {imag:.3e})")
    g_real = np.ascontiguousarray(g.real)
    times = np.linspace(0.0, float(t_final), int(sample_count))
    c0 = np.einsum("kij,ji->k", basis, rho0.matrix).real
    cs, stats = dopri5(lambda t, y: g_real @ y, c0, times, rtol=rel_tol)
    stats = dict(stats, generator_imag_max=imag)
    states = tuple(
        DensityMatrix(np.tensordot(c, basis, axes=1), rho0.dims) for c in cs
    )
    return Trajectory(times, states, stats)
