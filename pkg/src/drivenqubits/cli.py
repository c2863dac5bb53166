"""Command-line front end: ``drivenqubits <experiment> [options]``.

Parameters are resolved in three layers: the built-in preset for the
experiment, then the matching ``[section]`` of an optional ``--config``
file (flat ``key = value`` lines), then explicit command-line flags.
"""

import argparse
import configparser
import os
import sys
from dataclasses import replace

from . import __version__
from .experiments import (EXPERIMENTS, default_config, parse_grid, render, run,
                          write_table, _parse_number)
from .liouville import ReservoirModel

__all__ = ["build_parser", "main", "resolve_config"]

# config-file key -> value converter; keys match the long flag names
_KEYS = {
    "omega": float, "omega2": float,
    "delta": float, "delta2": float,
    "coupling": float,
    "gamma": float, "gamma2": float,
    "reservoir": str,
    "initial": str,
    "t_final": float,
    "samples": int,
    "grid": str,
    "g_tau": _parse_number,
    "spot_checks": int,
    "jobs": int,
    "output": str,
}

_DESCRIPTIONS = {
    "evolve": "Time evolution of concurrence, Bell fidelities and purity from one or more "
              "initial states. Default: omega=2, coupling=5, separate reservoirs, Werner "
              "f in {0.3,0.5,0.7,0.9,1.0}, t_final=15, 500 samples. "
              "--preset collective: omega=1.5, coupling=10, common reservoir, "
              "Yu-Eberly, Werner and eg-ge families.",
    "steady": "Steady-state density matrix. Default: omega=2, coupling=5, separate reservoirs.",
    "phase-diagram": "Steady-state concurrence over an (omega, coupling) grid, with spot "
                     "checks integrated to t=1e3 and a companion <stem>_boundary.csv holding "
                     "the crossover and optimal couplings. Default grid: "
                     "omega=0:6:61,coupling=0:30:61.",
    "fidelities": "Numerical and closed-form steady-state Bell fidelities over a drive sweep. "
                  "Default: coupling=7, delta=0, grid omega=0:6:61.",
    "transfer-scan": "Photon-pair concurrence after outcoupling the steady state into two "
                     "cavities. Default: omega=2, coupling=20, grid g_tau=0:pi:101.",
    "single-qubit": "Single-qubit steady state and Bloch vector over a drive sweep. "
                    "Default grid: omega=0:8:161 (in units of gamma).",
}


def _common_options(p):
    g = p.add_argument_group("system parameters (unset values come from --config or the preset)")
    g.add_argument("--omega", type=float, help="Rabi frequency of both qubits (qubit 1 if --omega2 is given)")
    g.add_argument("--omega2", type=float, help="Rabi frequency of qubit 2")
    g.add_argument("--delta", type=float, help="detuning of both qubits (qubit 1 if --delta2 is given); default 0")
    g.add_argument("--delta2", type=float, help="detuning of qubit 2")
    g.add_argument("--coupling", type=float, help="exchange coupling strength")
    g.add_argument("--gamma", type=float, help="decay rate of both qubits (qubit 1 if --gamma2 is given); default 1")
    g.add_argument("--gamma2", type=float, help="decay rate of qubit 2")
    g.add_argument("--reservoir", choices=[m.value for m in ReservoirModel],
                   help="separate or common reservoir; default separate")
    r = p.add_argument_group("run options")
    r.add_argument("--initial", help="';'-separated initial states: werner:f=X, ye:alpha=X, "
                                     "egge:a=X, bell:psi+|psi-|phi+|phi-, ground")
    r.add_argument("--t-final", dest="t_final", type=float, help="final time for evolve; default 15")
    r.add_argument("--samples", type=int, help="number of output times for evolve; default 500")
    r.add_argument("--grid", help="axis ranges, e.g. 'omega=0:6:61,coupling=0:30:61' ('pi' allowed); "
                                  "given axes replace the preset's")
    r.add_argument("--g-tau", dest="g_tau", type=_parse_number,
                   help="single transfer time reported in the transfer-scan header; default pi/2")
    r.add_argument("--spot-checks", dest="spot_checks", type=int,
                   help="phase-diagram points integrated to t=1e3 as a cross-check; default 3")
    r.add_argument("--jobs", type=int, help="worker processes for grid points; default 1")
    r.add_argument("--preset", default="", help="alternative built-in preset (evolve: collective)")
    r.add_argument("--config", help="config file with one [experiment] section of key = value lines")
    r.add_argument("--output", "-o", help="CSV path; default stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivenqubits",
        description="Driven, exchange-coupled qubit simulations and parameter sweeps as CSV.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="experiment", metavar="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=_DESCRIPTIONS[name].split(". ")[0],
                           description=_DESCRIPTIONS[name])
        _common_options(p)
    return parser


def _read_config(path, section):
    cp = configparser.ConfigParser(interpolation=None)
    with open(path) as fh:
        cp.read_file(fh)
    if not cp.has_section(section):
        return {}
    values = {}
    for key, raw in cp.items(section):
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise ValueError(f"{path}: unknown key {key!r} in [{section}]")
        try:
            values[key] = _KEYS[key](raw)
        except ValueError:
            raise ValueError(f"{path}: bad value {raw!r} for {key}") from None
    return values


def resolve_config(args):
    """Merge preset, config file and command-line flags into an ExperimentConfig."""
    cfg = default_config(args.experiment, args.preset)
    values = _read_config(args.config, args.experiment) if args.config else {}
    for key in _KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v

    p = cfg.params
    updates = {}
    for name, n1, n2 in (("omega", "omega1", "omega2"), ("delta", "delta1", "delta2"),
                         ("gamma", "gamma1", "gamma2")):
        if name in values:
            updates[n1] = updates[n2] = values[name]
        if f"{name}2" in values:
            updates[n2] = values[f"{name}2"]
    if "coupling" in values:
        updates["coupling"] = values["coupling"]
    params = replace(p, **updates)

    fields = {"params": params}
    if "reservoir" in values:
        fields["reservoir"] = ReservoirModel.parse(values["reservoir"])
    if "grid" in values:
        fields["grid"] = {**cfg.grid, **parse_grid(values["grid"])}
    for key in ("initial", "t_final", "samples", "g_tau", "spot_checks", "jobs", "output"):
        if key in values:
            fields[key] = values[key]
    return replace(cfg, **fields)


def _write(tables, cfg):
    out = cfg.output
    if not out or out == "-":
        sys.stdout.write(render(tables, cfg))
        return
    stem, ext = os.path.splitext(out)
    for i, table in enumerate(tables):
        path = out if i == 0 else f"{stem}_{table.name}{ext or '.csv'}"
        with open(path, "w", newline="") as fh:
            write_table(table, fh, cfg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        tables = run(cfg)
        _write(tables, cfg)
    except (ValueError, OSError) as exc:
        print(f"drivenqubits: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
