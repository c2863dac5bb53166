"""Experiment runners producing simulation and sweep results as tables.

Every runner takes an :class:`ExperimentConfig` and returns one or more
:class:`Table` objects; :func:`write_table` renders them as CSV with a
comment header that records the resolved configuration.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import csv
import io
import math
import re

import numpy as np

from . import __version__
from .closed_form import (crossover_coupling, detuned_summary, max_concurrence,
                          optimal_coupling, single_qubit_steady)
from .liouville import ReservoirModel, SystemParams, evolve, liouvillian, steady_state
from .operators import ket
from .states import (BELL_LABELS, DensityMatrix, bell_state, bloch_vector, concurrence,
                     concurrence_signed, egge_state, fidelity, werner_state, ye_state)
from .transfer import transfer

__all__ = [
    "Axis",
    "EXPERIMENTS",
    "ExperimentConfig",
    "Table",
    "default_config",
    "format_float",
    "parse_grid",
    "parse_initial",
    "run",
    "run_evolve",
    "run_fidelities",
    "run_phase_diagram",
    "run_single_qubit",
    "run_steady",
    "run_transfer_scan",
    "write_table",
]

EXPERIMENTS = ("evolve", "steady", "phase-diagram", "fidelities", "transfer-scan", "single-qubit")

LONG_TIME = 1e3


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError(f"axis range must be finite, got {self.start}:{self.stop}")
        if self.count < 2:
            raise ValueError(f"axis needs at least 2 points, got {self.count}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self):
        return f"{self.start!r}:{self.stop!r}:{self.count}"


_NUM = re.compile(r"^\s*(?:(?P<coef>[-+]?[0-9.eE+-]+)\s*\*?\s*)?(?P<pi>pi)?(?:\s*/\s*(?P<den>[0-9.eE+-]+))?\s*$")


def _parse_number(text: str) -> float:
    """Float, optionally written with ``pi`` (``pi``, ``2pi``, ``pi/2``, ``0.5*pi``)."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _NUM.match(text)
    if not m or not m.group("pi"):
        raise ValueError(f"cannot parse number {text!r}")
    value = math.pi * float(m.group("coef") or 1.0)
    if m.group("den"):
        value /= float(m.group("den"))
    return value


def parse_grid(spec: str) -> dict:
    """``"omega=0:6:61,coupling=0:30:61"`` -> ``{"omega": Axis(...), ...}``."""
    axes = {}
    if not spec or not spec.strip():
        return axes
    for part in spec.split(","):
        name, sep, rng = part.partition("=")
        bits = rng.split(":")
        if not sep or len(bits) != 3:
            raise ValueError(f"bad grid axis {part!r}; expected name=start:stop:count")
        axes[name.strip()] = Axis(_parse_number(bits[0]), _parse_number(bits[1]), int(bits[2]))
    return axes


def parse_initial(spec: str) -> list:
    """Parse ``;``-separated state specs into ``[(label, DensityMatrix), ...]``.

    Accepted forms: ``werner:f=X``, ``ye:alpha=X``, ``egge:a=X``,
    ``bell:psi+`` (or ``psi-``, ``phi+``, ``phi-``) and ``ground``.
    """
    states = []
    for item in (s.strip() for s in spec.split(";")):
        if not item:
            continue
        family, _, arg = item.partition(":")
        family = family.strip().lower()
        try:
            if family == "bell":
                rho = bell_state(arg.strip()).density()
            elif family == "ground":
                rho = DensityMatrix(np.outer(ket(0, 0), ket(0, 0)), (2, 2))
            else:
                key, _, value = arg.partition("=")
                key = key.strip()
                builders = {"werner": ("f", werner_state), "ye": ("alpha", ye_state),
                            "egge": ("a", egge_state)}
                if family not in builders:
                    raise ValueError(f"unknown family {family!r}")
                expected, build = builders[family]
                if key != expected:
                    raise ValueError(f"{family} takes {expected}=X, got {arg!r}")
                rho = build(float(value))
        except ValueError as exc:
            raise ValueError(f"invalid initial-state spec {item!r}: {exc}") from None
        states.append((item, rho))
    if not states:
        raise ValueError("no initial state given")
    return states


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: SystemParams = field(default_factory=SystemParams)
    reservoir: ReservoirModel = ReservoirModel.SEPARATE
    initial: str = ""
    grid: dict = field(default_factory=dict)
    t_final: float = 15.0
    samples: int = 500
    g_tau: float = math.pi / 2
    spot_checks: int = 3
    jobs: int = 1
    output: str = ""
    preset: str = ""

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.samples < 2:
            raise ValueError(f"samples must be >= 2, got {self.samples}")
        if not (math.isfinite(self.t_final) and self.t_final > 0):
            raise ValueError(f"t_final must be finite and > 0, got {self.t_final}")

    def describe(self) -> list:
        """``(key, value)`` pairs for the output header, in a fixed order."""
        p = self.params
        items = [("experiment", self.experiment)]
        if self.preset:
            items.append(("preset", self.preset))
        items += [
            ("omega1", p.omega1), ("omega2", p.omega2),
            ("delta1", p.delta1), ("delta2", p.delta2),
            ("coupling", p.coupling), ("gamma1", p.gamma1), ("gamma2", p.gamma2),
            ("reservoir", self.reservoir.value),
        ]
        if self.experiment == "evolve":
            items += [("initial", self.initial), ("t_final", self.t_final), ("samples", self.samples)]
        if self.experiment == "transfer-scan":
            items.append(("g_tau", self.g_tau))
        if self.grid:
            items.append(("grid", ",".join(f"{k}={v}" for k, v in self.grid.items())))
        if self.experiment == "phase-diagram":
            items.append(("spot_checks", self.spot_checks))
        return items


WERNER_FAMILY = "werner:f=0.3;werner:f=0.5;werner:f=0.7;werner:f=0.9;werner:f=1.0"
COLLECTIVE_FAMILIES = ("ye:alpha=0;ye:alpha=0.5;ye:alpha=1;"
                 "werner:f=0.3;werner:f=0.6;werner:f=1.0;"
                 "egge:a=0;egge:a=0.2;egge:a=0.5")

_PRESETS = {
    "evolve": dict(params=SystemParams.symmetric(2.0, 5.0), initial=WERNER_FAMILY),
    "evolve:collective": dict(params=SystemParams.symmetric(1.5, 10.0),
                        reservoir=ReservoirModel.COMMON, initial=COLLECTIVE_FAMILIES),
    "steady": dict(params=SystemParams.symmetric(2.0, 5.0)),
    "phase-diagram": dict(grid={"omega": Axis(0.0, 6.0, 61), "coupling": Axis(0.0, 30.0, 61)}),
    "fidelities": dict(params=SystemParams.symmetric(0.0, 7.0), grid={"omega": Axis(0.0, 6.0, 61)}),
    "transfer-scan": dict(params=SystemParams.symmetric(2.0, 20.0),
                          grid={"g_tau": Axis(0.0, math.pi, 101)}),
    "single-qubit": dict(grid={"omega": Axis(0.0, 8.0, 161)}),
}


def default_config(experiment: str, preset: str = "") -> ExperimentConfig:
    """Built-in configuration for an experiment, optionally a named variant."""
    key = f"{experiment}:{preset}" if preset else experiment
    if key not in _PRESETS:
        raise ValueError(f"no preset {preset!r} for experiment {experiment!r}")
    return ExperimentConfig(experiment=experiment, preset=preset, **_PRESETS[key])


# ---------------------------------------------------------------------------
# Tables and CSV output


@dataclass
class Table:
    name: str
    columns: list
    rows: list
    notes: list = field(default_factory=list)


def format_float(x) -> str:
    """12 significant digits, scientific notation; ``-0`` is printed as ``0``."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x) + 0.0:.11e}"


def write_table(table: Table, stream, cfg: ExperimentConfig) -> None:
    stream.write(f"# drivenqubits {__version__}\n")
    stream.write(f"# table = {table.name}\n")
    for key, value in cfg.describe():
        stream.write(f"# {key} = {format_float(value) if isinstance(value, float) else value}\n")
    for key, value in table.notes:
        stream.write(f"# {key} = {format_float(value) if isinstance(value, float) else value}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_float(v) for v in row])


def render(tables, cfg) -> str:
    buf = io.StringIO()
    for i, table in enumerate(tables):
        if i:
            buf.write("\n")
        write_table(table, buf, cfg)
    return buf.getvalue()


def _map(fn, items, jobs):
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(item) for item in items]


def _axis(cfg, name):
    try:
        return cfg.grid[name].values()
    except KeyError:
        raise ValueError(f"{cfg.experiment} needs a grid axis named {name!r}") from None


def _bell_fidelities(rho):
    return [fidelity(bell_state(label), rho) for label in BELL_LABELS]


def _require_symmetric(cfg):
    p = cfg.params
    if (p.omega1, p.delta1, p.gamma1) != (p.omega2, p.delta2, p.gamma2):
        raise ValueError(f"{cfg.experiment} closed forms assume identical qubits")


# ---------------------------------------------------------------------------
# Runners


def _evolve_one(args):
    label, rho0, l, t_final, samples = args
    traj = evolve(rho0, l, t_final, samples)
    rows = []
    for t, rho in traj:
        rows.append([label, t, concurrence(rho), *_bell_fidelities(rho), rho.purity()])
    return rows


def run_evolve(cfg: ExperimentConfig) -> list:
    """Concurrence, Bell fidelities and purity along trajectories."""
    l = liouvillian(cfg.params, cfg.reservoir)
    states = parse_initial(cfg.initial)
    jobs = [(label, rho, l, cfg.t_final, cfg.samples) for label, rho in states]
    rows = [r for block in _map(_evolve_one, jobs, cfg.jobs) for r in block]
    columns = ["initial", "t", "concurrence", "fidelity_psi_plus", "fidelity_psi_minus",
               "fidelity_phi_plus", "fidelity_phi_minus", "purity"]
    return [Table("trajectory", columns, rows)]


_BASIS_LABELS = ("11", "10", "01", "00")


def run_steady(cfg: ExperimentConfig) -> list:
    l = liouvillian(cfg.params, cfg.reservoir)
    rho, null_dim = steady_state(l)
    rows = []
    for i, a in enumerate(_BASIS_LABELS):
        for j, b in enumerate(_BASIS_LABELS):
            z = rho.matrix[i, j]
            rows.append([a, b, z.real, z.imag])
    notes = [("null_dim", null_dim), ("concurrence", concurrence(rho)),
             ("concurrence_signed", concurrence_signed(rho)), ("purity", rho.purity())]
    p = cfg.params
    symmetric = (p.omega1, p.delta1, p.gamma1) == (p.omega2, p.delta2, p.gamma2)
    if symmetric and cfg.reservoir is ReservoirModel.SEPARATE and p.gamma1 > 0:
        summary = detuned_summary(p.omega1, p.gamma1, p.coupling, p.delta1)
        notes.append(("concurrence_signed_formula", summary.concurrence_signed))
    return [Table("steady_state", ["row", "col", "re", "im"], rows, notes)]


def _steady_point(args):
    params, reservoir = args
    rho, _ = steady_state(liouvillian(params, reservoir))
    c = concurrence_signed(rho)
    return max(0.0, c), c


def _spot_indices(n_points, count):
    if count <= 0:
        return []
    count = min(count, n_points)
    return sorted(set(int(round(x)) for x in np.linspace(0, n_points - 1, count + 2)[1:-1]))


def run_phase_diagram(cfg: ExperimentConfig) -> list:
    """Steady-state concurrence over the (omega, coupling) grid, plus boundary curves.

    A few grid points (evenly spaced through the grid, end points excluded)
    are also integrated from the ground state to ``t = 1e3`` and the largest
    concurrence discrepancy is reported in the header.
    """
    omegas, couplings = _axis(cfg, "omega"), _axis(cfg, "coupling")
    base = cfg.params
    points = [(w, g) for w in omegas for g in couplings]
    args = [(replace(base, omega1=w, omega2=w, coupling=g), cfg.reservoir) for w, g in points]
    results = _map(_steady_point, args, cfg.jobs)
    rows = [[w, g, c, cs] for (w, g), (c, cs) in zip(points, results)]

    ground = parse_initial("ground")[0][1]
    worst = 0.0
    checked = []
    for idx in _spot_indices(len(points), cfg.spot_checks):
        params, reservoir = args[idx]
        final = evolve(ground, liouvillian(params, reservoir), LONG_TIME, 2).final
        worst = max(worst, abs(concurrence(final) - results[idx][0]))
        checked.append(f"({points[idx][0]:g},{points[idx][1]:g})")
    notes = [("spot_check_points", " ".join(checked) or "none"),
             ("spot_check_time", LONG_TIME),
             ("spot_check_max_abs_diff", worst)]
    main = Table("phase_diagram", ["omega", "coupling", "concurrence", "concurrence_signed"],
                 rows, notes)

    gamma = base.gamma1
    boundary_rows = [[w, crossover_coupling(w, gamma), optimal_coupling(w, gamma),
                      max_concurrence(w, gamma)] for w in omegas]
    boundary = Table("boundary", ["omega", "crossover_coupling", "optimal_coupling",
                                  "max_concurrence"], boundary_rows)
    return [main, boundary]


def _fidelity_point(args):
    params, reservoir = args
    rho, _ = steady_state(liouvillian(params, reservoir))
    return _bell_fidelities(rho)


def run_fidelities(cfg: ExperimentConfig) -> list:
    """Numerical and closed-form Bell fidelities of the steady state over a drive sweep."""
    _require_symmetric(cfg)
    if cfg.reservoir is not ReservoirModel.SEPARATE:
        raise ValueError("closed-form fidelities hold for separate reservoirs only")
    p = cfg.params
    omegas = _axis(cfg, "omega")
    args = [(replace(p, omega1=w, omega2=w), cfg.reservoir) for w in omegas]
    numeric = _map(_fidelity_point, args, cfg.jobs)
    rows = []
    for w, num in zip(omegas, numeric):
        formula = detuned_summary(w, p.gamma1, p.coupling, p.delta1).fidelities
        rows.append([w, *num, *(formula[k] for k in BELL_LABELS)])
    names = ["psi_plus", "psi_minus", "phi_plus", "phi_minus"]
    columns = ["omega"] + [f"F_{n}" for n in names] + [f"F_{n}_formula" for n in names]
    return [Table("fidelities", columns, rows)]


def run_transfer_scan(cfg: ExperimentConfig) -> list:
    """Photon-pair concurrence after outcoupling the steady state for each ``g tau``."""
    rho, _ = steady_state(liouvillian(cfg.params, cfg.reservoir))
    rows = [[gt, concurrence(transfer(rho, gt))] for gt in _axis(cfg, "g_tau")]
    notes = [("qubit_concurrence", concurrence(rho)),
             ("photon_concurrence_at_g_tau", concurrence(transfer(rho, cfg.g_tau)))]
    return [Table("transfer_scan", ["g_tau", "photon_concurrence"], rows, notes)]


def run_single_qubit(cfg: ExperimentConfig) -> list:
    """Single-qubit steady state and its Bloch vector over a drive sweep."""
    gamma = cfg.params.gamma1
    rows = []
    for w in _axis(cfg, "omega"):
        rho = single_qubit_steady(w * gamma, gamma)
        rx, ry, rz = bloch_vector(rho)
        excited = rho.element((1,), (1,)).real
        ground = rho.element((0,), (0,)).real
        coherence = rho.element((0,), (1,)).imag
        residual = (rz + 0.5) ** 2 + ry ** 2 / 2 - 0.25
        rows.append([w, ground, excited, coherence, rx, ry, rz, residual])
    columns = ["omega_over_gamma", "rho00", "rho11", "im_rho01", "r_x", "r_y", "r_z",
               "semicircle_residual"]
    notes = [("rho11", "excited-state population <1|rho|1>"),
             ("im_rho01", "Im <0|rho|1>")]
    return [Table("single_qubit", columns, rows, notes)]


RUNNERS = {
    "evolve": run_evolve,
    "steady": run_steady,
    "phase-diagram": run_phase_diagram,
    "fidelities": run_fidelities,
    "transfer-scan": run_transfer_scan,
    "single-qubit": run_single_qubit,
}


def run(cfg: ExperimentConfig) -> list:
    return RUNNERS[cfg.experiment](cfg)
