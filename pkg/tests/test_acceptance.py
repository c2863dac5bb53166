"""Acceptance checks, one per criterion, each printing a single PASS/FAIL line.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script.
"""

from fractions import Fraction
import math
import sys

import numpy as np
import pytest
from scipy.optimize import brentq, minimize_scalar

from drivenqubits.closed_form import (GOLDEN, DampingRegime, bloch_dynamics, detuned_summary,
                                      optimal_coupling, perturbative_correction,
                                      resonant_concurrence_signed, single_qubit_steady)
from drivenqubits.liouville import (ReservoirModel, SystemParams, evolve, liouvillian,
                                    single_qubit_liouvillian, steady_state)
from drivenqubits.numerics import eig_general_small
from drivenqubits.states import (BELL_LABELS, DensityMatrix, bell_state, bloch_vector, concurrence,
                                 concurrence_signed, egge_state, fidelity, werner_state, ye_state)
from drivenqubits.transfer import phase_correction, transfer, transmitted_elements

LONG_TIME = 1e3
BASELINE = SystemParams.symmetric(2.0, 5.0)
COLLECTIVE = SystemParams.symmetric(1.5, 10.0)


def signed_numeric(omega, coupling, delta=0.0):
    rho, n = steady_state(liouvillian(SystemParams.symmetric(omega, coupling, delta)))
    assert n == 1
    return concurrence_signed(rho)


def random_state(rng, rank=4):
    a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = a @ a.conj().T
    return DensityMatrix(m / np.trace(m))


def criterion_1():
    rho, n = steady_state(single_qubit_liouvillian(0.25, 1.0))
    target = np.array([[1 / 18, -2j / 9], [2j / 9, 17 / 18]])
    err = np.abs(rho.matrix - target).max()
    return n == 1 and err < 1e-10, f"max elementwise error {err:.2e} (tol 1e-10)"


def criterion_2():
    worst, negatives = 0.0, 0
    for omega in (0.5, 1, 2, 4, 6):
        for coupling in (0.25, 1, 5, 10, 20, 30):
            formula = resonant_concurrence_signed(omega, 1.0, coupling)
            worst = max(worst, abs(formula - signed_numeric(omega, coupling)))
            negatives += formula < 0
    ok = worst < 1e-6 and negatives > 0
    return ok, f"max |C_formula - C_numeric| {worst:.2e} over 30 points, {negatives} negative (tol 1e-6)"


def criterion_3():
    root = brentq(lambda x: signed_numeric(2.0, x), 1.0, 3.0, xtol=1e-13, rtol=1e-15)
    err = abs(root - 2.0)
    return err < 1e-6, f"numeric sign change at coupling {root:.12f}, |error| {err:.2e} (tol 1e-6)"


def criterion_4():
    omega = 200.0
    f = lambda x: -max(0.0, signed_numeric(omega, x))
    # coarse logarithmic scan, then a bounded refinement around the best point
    xs = np.geomspace(1.0, 1e7, 141)
    vals = [f(x) for x in xs]
    i = int(np.argmin(vals))
    res = minimize_scalar(f, bounds=(xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]),
                          method="bounded", options={"xatol": 1e-3})
    best = -res.fun
    target = 1 / (1 + math.sqrt(5))
    err = abs(best - target)
    return err < 0.005, (f"max numeric C {best:.6f} at coupling {res.x:.1f} vs 1/(1+sqrt5)={target:.5f}, "
                         f"|diff| {err:.2e} (tol 0.005)")


def criterion_5():
    exact = 2 * Fraction(2) ** 2 * (2 * 5 - Fraction(2) ** 2) / ((1 + 2 * Fraction(2) ** 2) ** 2 + 4 * 25)
    l = liouvillian(BASELINE)
    starts = [werner_state(0.3), werner_state(0.6), werner_state(1.0), ye_state(0.5), egge_state(0.2)]
    finals = [evolve(r, l, LONG_TIME, 2).final for r in starts]
    spread = max(np.abs(f.matrix - finals[0].matrix).max() for f in finals[1:])
    null_rho, _ = steady_state(l)
    to_null = max(np.abs(f.matrix - null_rho.matrix).max() for f in finals)
    c_err = max(abs(concurrence(f) - 48 / 181) for f in finals + [null_rho])
    ok = exact == Fraction(48, 181) and spread < 1e-6 and to_null < 1e-6 and c_err < 1e-5
    return ok, (f"substitution gives {exact}; trajectory spread {spread:.2e}, distance to null-space "
                f"state {to_null:.2e} (tol 1e-6); concurrence error {c_err:.2e} (tol 1e-5)")


def criterion_6():
    l = liouvillian(COLLECTIVE, ReservoirModel.COMMON)
    residual = np.abs(l.apply(bell_state("psi-").density())).max()
    families = {"ye(0.5)": ye_state(0.5), "werner(0.9)": werner_state(0.9), "egge(0.2)": egge_state(0.2)}
    cs = {k: concurrence(evolve(r, l, LONG_TIME, 2).final) for k, r in families.items()}
    spread = max(cs.values()) - min(cs.values())
    ok = residual < 1e-12 and spread > 0.05
    shown = ", ".join(f"{k} {v:.4f}" for k, v in cs.items())
    return ok, f"singlet residual {residual:.1e} (tol 1e-12); asymptotic C: {shown}; spread {spread:.3f} (> 0.05)"


def perturbative_remainder(omega, coupling):
    r1 = single_qubit_steady(omega, 1.0).matrix
    approx = np.kron(r1, r1) + perturbative_correction(omega, 1.0, coupling)
    rho, _ = steady_state(liouvillian(SystemParams.symmetric(omega, coupling)))
    return np.abs(rho.matrix - approx).max()


def criterion_7():
    ratios = {w: perturbative_remainder(w, 0.02) / perturbative_remainder(w, 0.01) for w in (0.5, 1.0, 2.0)}
    ok = all(3.5 <= r <= 4.5 for r in ratios.values())
    shown = ", ".join(f"Omega={w}: {r:.4f}" for w, r in ratios.items())
    return ok, f"remainder ratio (0.02 vs 0.01) {shown} (window [3.5, 4.5])"


def criterion_8():
    worst = {"C": 0.0, **{k: 0.0 for k in BELL_LABELS}}
    for delta in (0.5, 1.0, 2.0):
        rho, _ = steady_state(liouvillian(SystemParams.symmetric(2.0, 5.0, delta)))
        s = detuned_summary(2.0, 1.0, 5.0, delta)
        worst["C"] = max(worst["C"], abs(s.concurrence_signed - concurrence_signed(rho)))
        for k in BELL_LABELS:
            worst[k] = max(worst[k], abs(s.fidelities[k] - fidelity(bell_state(k), rho)))
    ok = all(v < 1e-6 for v in worst.values())
    shown = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return ok, f"max |formula - numeric| over delta in {{0.5,1,2}}: {shown} (tol 1e-6)"


def criterion_9():
    rng = np.random.default_rng(20240611)
    c_err = max(abs(concurrence(transfer(r, math.pi / 2)) - concurrence(r))
                for r in (random_state(rng, int(rng.integers(1, 5))) for _ in range(100)))
    elem_err = 0.0
    for _ in range(100):
        r, gt = random_state(rng), rng.uniform(0, math.pi)
        elem_err = max(elem_err, np.abs(transmitted_elements(r, gt).matrix - transfer(r, gt).matrix).max())
    bell = bell_state("psi+").density()
    sin_err = max(abs(concurrence(transfer(bell, gt)) - math.sin(gt) ** 2)
                  for gt in np.linspace(0, math.pi, 201))
    rho_inf, _ = steady_state(liouvillian(BASELINE))
    phase_err = np.abs(phase_correction(transfer(rho_inf, math.pi / 2)).matrix - rho_inf.matrix).max()
    ok = c_err < 1e-9 and elem_err < 1e-10 and sin_err < 1e-10 and phase_err < 1e-14
    return ok, (f"C preservation {c_err:.1e} (1e-9); elements vs transfer {elem_err:.1e} (1e-10); "
                f"sin^2 g tau {sin_err:.1e} (1e-10); phase-corrected recovery {phase_err:.1e}")


def criterion_10():
    sweep = np.linspace(0, 8, 1601)[1:]
    semicircle = 0.0
    rx_max = 0.0
    for w in sweep:
        rx, ry, rz = bloch_vector(single_qubit_steady(w, 1.0))
        semicircle = max(semicircle, abs((rz + 0.5) ** 2 + ry ** 2 / 2 - 0.25))
        rx_max = max(rx_max, abs(rx))
    coherence = lambda w: -abs(single_qubit_steady(w, 1.0).matrix[0, 1])
    res = minimize_scalar(coherence, bounds=(0.1, 8), method="bounded", options={"xatol": 1e-10})
    loc_err = abs(res.x - 1 / math.sqrt(2))
    peak_err = abs(-res.fun - 1 / (2 * math.sqrt(2)))
    eig_err = 0.0
    for w in sweep:
        b = bloch_dynamics(w, 1.0)
        root = np.sqrt(complex(1 - 16 * w ** 2))
        closed = np.array([(-3 + root) / 4, (-3 - root) / 4])
        closed = closed[np.lexsort((-closed.imag, -closed.real))]
        eig_err = max(eig_err, np.abs(eig_general_small(b.matrix) - closed).max(),
                      np.abs(b.eigenvalues - closed).max())
    regimes = [bloch_dynamics(w, 1.0).regime for w in (0.25 - 1e-6, 0.25, 0.25 + 1e-6)]
    flips = regimes == [DampingRegime.OVERDAMPED, DampingRegime.CRITICAL, DampingRegime.UNDERDAMPED]
    ok = semicircle < 1e-10 and rx_max == 0 and loc_err < 1e-6 and peak_err < 1e-6 and eig_err < 1e-10 and flips
    return ok, (f"semicircle residual {semicircle:.1e} (1e-10); coherence peak at {res.x:.8f} "
                f"(|err| {loc_err:.1e}), value error {peak_err:.1e} (1e-6); eigenvalue error "
                f"{eig_err:.1e} (1e-10); regime over/critical/under at 1/4: {flips}")


CRITERIA = {
    1: ("single-qubit critical point", criterion_1),
    2: ("analytic-numeric concurrence agreement", criterion_2),
    3: ("parabola crossover", criterion_3),
    4: ("universal maximum", criterion_4),
    5: ("initial-state independence, separate reservoirs", criterion_5),
    6: ("initial-state dependence, common reservoir", criterion_6),
    7: ("perturbative scaling", criterion_7),
    8: ("detuned formulas", criterion_8),
    9: ("transfer", criterion_9),
    10: ("single-qubit geometry", criterion_10),
}


def report(number):
    name, check = CRITERIA[number]
    ok, detail = check()
    return ok, f"CRITERION {number:2d} {'PASS' if ok else 'FAIL'}: {name}: {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = report(number)
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


if __name__ == "__main__":
    results = [report(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
