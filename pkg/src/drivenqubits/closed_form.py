"""Analytic steady-state results for driven, exchange-coupled qubits.

These are pure formula evaluators. They use the same basis and sign
conventions as :mod:`drivenqubits.liouville` (excited state first, drive
``+omega/2 sigma_x``), so every result is directly comparable with the
numerical steady state.

Symbols: ``omega`` is the Rabi frequency, ``gamma`` the decay rate,
``coupling`` the exchange strength and ``delta`` the detuning. The common
denominator ``gamma**2 + 2 omega**2`` appears everywhere and is written
``d`` below.
"""

from dataclasses import dataclass
import enum

import numpy as np

from .operators import ket
from .states import DensityMatrix

__all__ = [
    "BlochDynamics",
    "DampingRegime",
    "SteadyStateSummary",
    "asymptotic_rho_max",
    "bloch_dynamics",
    "crossover_coupling",
    "detuned_summary",
    "max_concurrence",
    "optimal_coupling",
    "perturbative_correction",
    "resonant_concurrence_signed",
    "resonant_steady_state",
    "single_qubit_steady",
]

GOLDEN = (1 + np.sqrt(5)) / 2


def _require_gamma(gamma):
    if not gamma > 0:
        raise ValueError(f"gamma must be > 0 for a unique steady state, got {gamma}")


def single_qubit_steady(omega: float, gamma: float) -> DensityMatrix:
    """Steady state of one resonantly driven qubit decaying at ``gamma``.

    In the ``(|1>, |0>)`` basis::

        1/d [[omega^2,            -i omega gamma],
             [i omega gamma, gamma^2 + omega^2]]
    """
    _require_gamma(gamma)
    d = gamma ** 2 + 2 * omega ** 2
    m = np.array([[omega ** 2, -1j * omega * gamma],
                  [1j * omega * gamma, gamma ** 2 + omega ** 2]]) / d
    return DensityMatrix(m, (2,))


class DampingRegime(enum.Enum):
    UNDERDAMPED = "underdamped"
    CRITICAL = "critical"
    OVERDAMPED = "overdamped"


@dataclass(frozen=True, eq=False)
class BlochDynamics:
    matrix: np.ndarray
    eigenvalues: np.ndarray
    regime: DampingRegime


def bloch_dynamics(omega: float, gamma: float, critical_tol: float = 1e-12) -> BlochDynamics:
    """Linear part of the ``(r_z, r_y)`` Bloch equations and its spectrum.

    ``M = [[-gamma, omega], [-omega, -gamma/2]]`` with eigenvalues
    ``(-3 gamma -+ sqrt(gamma^2 - 16 omega^2)) / 4``. The regime follows
    the sign of the discriminant; it is critical when
    ``|gamma^2 - 16 omega^2| <= critical_tol * gamma^2``. Eigenvalues are
    ordered by descending real part, then descending imaginary part.
    """
    _require_gamma(gamma)
    m = np.array([[-gamma, omega], [-omega, -gamma / 2]], dtype=float)
    disc = gamma ** 2 - 16 * omega ** 2
    root = np.sqrt(complex(disc))
    pair = [(-3 * gamma - root) / 4, (-3 * gamma + root) / 4]
    pair.sort(key=lambda z: (-z.real, -z.imag))
    if abs(disc) <= critical_tol * gamma ** 2:
        regime = DampingRegime.CRITICAL
    elif disc > 0:
        regime = DampingRegime.OVERDAMPED
    else:
        regime = DampingRegime.UNDERDAMPED
    return BlochDynamics(m, np.array(pair, dtype=complex), regime)


def perturbative_correction(omega: float, gamma: float, coupling: float) -> np.ndarray:
    """First-order (in ``coupling``) traceless correction to ``rho_1 x rho_2``.

    Nonzero elements, with ``d = gamma^2 + 2 omega^2``::

        <11|.|00> = 2i omega^2 gamma coupling / d^2
        <10|.|00> = <01|.|00> = -2 omega gamma^2 coupling / d^2

    plus Hermitian partners. The second line's sign is tied to the sign of
    the single-qubit coherence of :func:`single_qubit_steady`.
    """
    d2 = (gamma ** 2 + 2 * omega ** 2) ** 2
    m = np.zeros((4, 4), dtype=complex)
    i11, i10, i01, i00 = (ket(*b).argmax() for b in ((1, 1), (1, 0), (0, 1), (0, 0)))
    m[i11, i00] = 2j * omega ** 2 * gamma * coupling / d2
    m[i10, i00] = m[i01, i00] = -2 * omega * gamma ** 2 * coupling / d2
    for i in (i11, i10, i01):
        m[i00, i] = np.conj(m[i, i00])
    return m


def _resonant_weight(omega, gamma, coupling):
    d2 = (gamma ** 2 + 2 * omega ** 2) ** 2
    return d2 / (d2 + 4 * coupling ** 2 * gamma ** 2)


def resonant_steady_state(omega: float, gamma: float, coupling: float) -> DensityMatrix:
    """Exact steady state at zero detuning, separate reservoirs.

    ``A (rho_1 x rho_2 + rho_xx) + (1 - A) |00><00|`` where ``rho_xx`` is
    :func:`perturbative_correction` and
    ``A = d^2 / (d^2 + 4 coupling^2 gamma^2)``.
    """
    _require_gamma(gamma)
    a = _resonant_weight(omega, gamma, coupling)
    r1 = single_qubit_steady(omega, gamma).matrix
    ground = np.outer(ket(0, 0), ket(0, 0))
    m = a * (np.kron(r1, r1) + perturbative_correction(omega, gamma, coupling)) + (1 - a) * ground
    return DensityMatrix(m, (2, 2))


def resonant_concurrence_signed(omega: float, gamma: float, coupling: float) -> float:
    """``2 omega^2 (2 coupling gamma - omega^2) / (d^2 + 4 coupling^2 gamma^2)``."""
    _require_gamma(gamma)
    d = gamma ** 2 + 2 * omega ** 2
    return 2 * omega ** 2 * (2 * coupling * gamma - omega ** 2) / (d ** 2 + 4 * coupling ** 2 * gamma ** 2)


def crossover_coupling(omega: float, gamma: float) -> float:
    """Coupling where the steady-state concurrence switches on: ``omega^2 / 2 gamma``."""
    _require_gamma(gamma)
    return omega ** 2 / (2 * gamma)


def optimal_coupling(omega: float, gamma: float) -> float:
    _require_gamma(gamma)
    d = 2 * omega ** 2 + gamma ** 2
    return omega ** 2 / (2 * gamma) + np.sqrt(d ** 2 + omega ** 4) / (2 * gamma)


def max_concurrence(omega: float, gamma: float) -> float:
    """Largest steady-state concurrence reachable at this drive, over all couplings."""
    _require_gamma(gamma)
    d = gamma ** 2 + 2 * omega ** 2
    return omega ** 2 / (omega ** 2 + np.sqrt(omega ** 4 + d ** 2))


def asymptotic_rho_max() -> DensityMatrix:
    """Strong-drive limit of the optimal steady state.

    Taking ``omega -> inf`` with the coupling held at :func:`optimal_coupling`
    makes ``coupling * gamma / omega^2`` tend to the golden ratio ``g``; the
    single-qubit states go to ``I/2`` and the weight ``A`` to ``1/(1+g^2)``.
    What survives is an X-state::

        A/4 I + A g/2 (i |11><00| - i |00><11|) + (1 - A) |00><00|

    whose concurrence is ``1/(1 + sqrt5)``.
    """
    a = 1 / (1 + GOLDEN ** 2)
    i11, i00 = ket(1, 1).argmax(), ket(0, 0).argmax()
    m = a / 4 * np.eye(4, dtype=complex)
    m[i11, i00] = 1j * a * GOLDEN / 2
    m[i00, i11] = -1j * a * GOLDEN / 2
    m[i00, i00] += 1 - a
    return DensityMatrix(m, (2, 2))


@dataclass(frozen=True)
class SteadyStateSummary:
    concurrence_signed: float
    concurrence: float
    fidelities: dict
    n4: float
    gamma_tilde_mag: float


def detuned_summary(omega: float, gamma: float, coupling: float, delta: float = 0.0) -> SteadyStateSummary:
    """Concurrence and Bell fidelities of the steady state at detuning ``delta``.

    With ``G = |gamma + 2i delta|`` and
    ``N^4 = (G^2 + 2 omega^2)^2 + 4 coupling G^2 (coupling + 2 delta)``:

    * ``C = 2 omega^2 (2 coupling G - omega^2) / N^4``
    * ``F(psi+) = omega sqrt(2 G^2 + omega^2) / N^2``
    * ``F(psi-) = omega^2 / N^2``
    * ``F(phi+)^2 = 1/2 - omega^2 (2 gamma^2 + omega^2 - 4 delta coupling) / N^4``
    * ``F(phi-)^2 = 1/2 - omega^2 (omega^2 + 4 delta coupling + 8 delta^2) / N^4``

    Fidelities are ``sqrt(<bell|rho|bell>)``.

    Raises
    ------
    ValueError
        If ``N^4 <= 0`` (outside the formulas' validity).
    """
    _require_gamma(gamma)
    g_mag = abs(complex(gamma, 2 * delta))
    g2 = g_mag ** 2
    n4 = (g2 + 2 * omega ** 2) ** 2 + 4 * coupling * g2 * (coupling + 2 * delta)
    if not n4 > 0:
        raise ValueError(f"N^4 = {n4} is not positive; closed form not valid here")
    n2 = np.sqrt(n4)
    c = 2 * omega ** 2 / n4 * (2 * coupling * g_mag - omega ** 2)
    w2 = omega ** 2
    fid = {
        "psi+": abs(omega) * np.sqrt(2 * g2 + w2) / n2,
        "psi-": w2 / n2,
        "phi+": np.sqrt(max(0.0, 0.5 - w2 / n4 * (2 * gamma ** 2 + w2 - 4 * delta * coupling))),
        "phi-": np.sqrt(max(0.0, 0.5 - w2 / n4 * (w2 + 4 * delta * coupling + 8 * delta ** 2))),
    }
    return SteadyStateSummary(
        concurrence_signed=float(c),
        concurrence=max(0.0, float(c)),
        fidelities={k: float(v) for k, v in fid.items()},
        n4=float(n4),
        gamma_tilde_mag=float(g_mag),
    )
