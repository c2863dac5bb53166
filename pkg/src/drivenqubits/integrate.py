"""Explicit adaptive Runge-Kutta integration for linear master equations.

Dormand-Prince 5(4) pair, local extrapolation (the 5th-order solution is
propagated), first-same-as-last stage reuse and a PI step-size controller.
Steps are shortened to land exactly on requested output times, so no
interpolation error enters the sampled trajectory.
"""

import numpy as np

__all__ = ["StepSizeUnderflow", "dopri5"]

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array(_A[6] + (0.0,))
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

# PI controller gains (Hairer-Wanner, order 5)
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA
_SAFETY = 0.9
_FAC_MIN, _FAC_MAX = 0.2, 10.0


class StepSizeUnderflow(RuntimeError):
    """The controller asked for a step below the representable minimum."""


def _initial_step(f, t0, y0, f0, rtol, atol):
    # Hairer-Norsett-Wanner starting step heuristic
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean(np.abs(y0 / scale) ** 2))
    d1 = np.sqrt(np.mean(np.abs(f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * f0
    d2 = np.sqrt(np.mean(np.abs((f(t0 + h0, y1) - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def dopri5(f, y0, t_out, rtol=1e-10, atol=None, h_init=None, max_steps=10_000_000):
    """Integrate ``y' = f(t, y)`` and return ``y`` at each time in ``t_out``.

    Parameters
    ----------
    f : callable(t, y) -> ndarray
    y0 : ndarray
        State at ``t_out[0]``.
    t_out : sequence of float
        Strictly increasing output times; the first is the initial time.
    rtol, atol : float
        Per-step tolerances; the error norm is the RMS of
        ``err / (atol + rtol * max(|y_old|, |y_new|))``. ``atol`` defaults
        to ``rtol``.

    Returns
    -------
    ys : ndarray, shape (len(t_out),) + y0.shape
    stats : dict with ``steps``, ``rejected`` and ``evaluations``
    """
    t_out = np.asarray(t_out, dtype=float)
    if t_out.ndim != 1 or t_out.size == 0:
        raise ValueError("t_out must be a non-empty 1-d sequence")
    if np.any(np.diff(t_out) <= 0):
        raise ValueError("t_out must be strictly increasing")
    atol = rtol if atol is None else atol

    y = np.array(y0)
    if not np.iscomplexobj(y):
        y = y.astype(float)
    ys = np.empty((t_out.size,) + y.shape, dtype=y.dtype)
    ys[0] = y
    t = float(t_out[0])
    k = np.empty((7,) + y.shape, dtype=y.dtype)
    k[0] = f(t, y)
    nfev = 1
    h = h_init if h_init is not None else _initial_step(f, t, y, k[0], rtol, atol)
    nfev += 1 if h_init is None else 0
    err_prev = 1e-4
    steps = rejected = 0

    for i_out in range(1, t_out.size):
        target = float(t_out[i_out])
        while t < target:
            if steps + rejected >= max_steps:
                raise RuntimeError(f"exceeded {max_steps} steps before t={target}")
            if h <= 16 * np.finfo(float).eps * max(1.0, abs(t)):
                raise StepSizeUnderflow(f"step size {h:.3e} underflow at t={t:.6g}")
            # clip to the next output time without touching the controller's h;
            # a remainder within 1e-8 of h is absorbed rather than left as a sliver
            remaining = target - t
            last = h >= remaining * (1 - 1e-8)
            step = remaining if last else h
            for s in range(1, 7):
                acc = y.copy()
                for j, a in enumerate(_A[s]):
                    if a:
                        acc += step * a * k[j]
                k[s] = f(t + _C[s] * step, acc)
            nfev += 6
            y_new = y + step * np.tensordot(_B5, k, axes=1)
            err_vec = step * np.tensordot(_E, k, axes=1)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))

            if err <= 1.0:
                t = target if last else t + step
                y = y_new
                k[0] = k[6]
                steps += 1
                if err == 0.0:
                    fac = _FAC_MAX
                else:
                    fac = _SAFETY * err ** (-_ALPHA) * err_prev ** _BETA
                fac = min(_FAC_MAX, max(_FAC_MIN, fac))
                if not last or step >= h:
                    h = step * fac
                err_prev = max(err, 1e-4)
            else:
                rejected += 1
                h = step * max(_FAC_MIN, _SAFETY * err ** (-_ALPHA))
        ys[i_out] = y

    return ys, {"steps": steps, "rejected": rejected, "evaluations": nfev}
