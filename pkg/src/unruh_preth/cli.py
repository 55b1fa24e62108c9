"""Scenario runner: spectra, trajectories, sweeps and grids from JSON specs.

A scenario is a JSON object:

    {
      "name": "fig2_panel",
      "mode": "evolve",            # spectrum | evolve | steady | dicke_scaling
                                   # | cascade | entropy_scan | fab_contour | lifetime
      "rates": {...},              # direct {gamma_plus, gamma_minus, f_ab, n_atoms}
                                   # or physical {omega0, alpha, L, lambda, n_atoms, unit_mode}
      "initial_state": [...],      # dipolar labels, "up_down", or "all_up"
      "f_values": [...],           # cross-dissipation factors to sweep
      "time_grid": {"t_min": ..., "t_max": ..., "points": ..., "spacing": "log"},
      "n_range": [...],            # atom numbers for dicke_scaling / entropy_scan
      "contour": {...},            # fab_contour grid specification
      "output_path": "subdir"      # optional; defaults to the scenario name
    }

Outputs are CSV/JSON files with a fixed 17-significant-digit float format,
so identical scenarios produce byte-identical files.  Diagnostics go to
stderr; the run summary is a single JSON line on stdout.  The default
output directory is ./out, overridden by --out or the UNRUH_PRETH_OUT
environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import bloch, dicke, qcore
from . import liouvillian as lv
from .rates import RateSet, PhysicalConfig, compute_f_ab, rates_from_json

__all__ = ["Scenario", "ContourSpec", "ScenarioError", "run_scenario", "contour_fab", "main"]

MODES = (
    "spectrum",
    "evolve",
    "steady",
    "dicke_scaling",
    "cascade",
    "entropy_scan",
    "fab_contour",
    "lifetime",
)

_STATE_LABELS = ("up_up", "down_down", "triplet0", "singlet", "up_down", "all_up")


class ScenarioError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _f_tag(f: float) -> str:
    return f"{f:g}"


@dataclass(frozen=True)
class ContourSpec:
    """Log-spaced (alpha, L) grid for the cross-dissipation factor in SI units."""

    omega0: float
    alpha_range: tuple[float, float]
    alpha_points: int
    l_range: tuple[float, float]
    l_points: int

    def __post_init__(self):
        if self.omega0 <= 0.0:
            raise ScenarioError("contour omega0 must be positive")
        for lo, hi, n, tag in (
            (*self.alpha_range, self.alpha_points, "alpha"),
            (*self.l_range, self.l_points, "L"),
        ):
            if not (0.0 < lo < hi):
                raise ScenarioError(f"contour {tag}_range must be positive and increasing")
            if n < 2:
                raise ScenarioError(f"contour {tag}_points must be >= 2")

    @classmethod
    def from_json(cls, obj: dict) -> "ContourSpec":
        try:
            return cls(
                omega0=float(obj["omega0"]),
                alpha_range=(float(obj["alpha_range"][0]), float(obj["alpha_range"][1])),
                alpha_points=int(obj["alpha_points"]),
                l_range=(float(obj["L_range"][0]), float(obj["L_range"][1])),
                l_points=int(obj["L_points"]),
            )
        except KeyError as exc:
            raise ScenarioError(f"contour spec missing key {exc}") from None


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str
    rate_spec: dict
    initial_states: tuple[str, ...] = ()
    f_values: tuple[float, ...] = ()
    time_grid: dict | None = None
    n_range: tuple[int, ...] = ()
    contour: ContourSpec | None = None
    output_path: str | None = None

    @classmethod
    def from_json(cls, obj: dict) -> "Scenario":
        if not isinstance(obj, dict):
            raise ScenarioError("scenario must be a JSON object")
        name = obj.get("name")
        mode = obj.get("mode")
        if not name or not isinstance(name, str):
            raise ScenarioError("scenario needs a non-empty string 'name'")
        if mode not in MODES:
            raise ScenarioError(f"unknown mode {mode!r}; expected one of {MODES}")
        states = obj.get("initial_state", [])
        if isinstance(states, str):
            states = [states]
        for s in states:
            if s not in _STATE_LABELS:
                raise ScenarioError(f"unknown initial state {s!r}; expected one of {_STATE_LABELS}")
        f_values = tuple(float(f) for f in obj.get("f_values", []))
        for f in f_values:
            if not 0.0 <= f <= 1.0:
                raise ScenarioError(f"f value {f} outside [0, 1]")
        grid = obj.get("time_grid")
        if grid is not None:
            for key in ("t_min", "t_max", "points"):
                if key not in grid:
                    raise ScenarioError(f"time_grid missing {key!r}")
            if not (0.0 <= float(grid["t_min"]) < float(grid["t_max"])):
                raise ScenarioError("time_grid must satisfy 0 <= t_min < t_max")
            if int(grid["points"]) < 2:
                raise ScenarioError("time_grid needs at least 2 points")
            if grid.get("spacing", "log") not in ("log", "linear"):
                raise ScenarioError("time_grid spacing must be 'log' or 'linear'")
        n_range = tuple(int(n) for n in obj.get("n_range", []))
        contour = ContourSpec.from_json(obj["contour"]) if "contour" in obj else None
        scenario = cls(
            name=name,
            mode=mode,
            rate_spec=obj.get("rates", {}),
            initial_states=tuple(states),
            f_values=f_values,
            time_grid=grid,
            n_range=n_range,
            contour=contour,
            output_path=obj.get("output_path"),
        )
        scenario._check_mode_fields()
        return scenario

    def _check_mode_fields(self):
        need_rates = self.mode in (
            "spectrum", "evolve", "steady", "dicke_scaling", "cascade",
            "entropy_scan", "lifetime",
        )
        if need_rates and not self.rate_spec:
            raise ScenarioError(f"mode {self.mode!r} needs a 'rates' object")
        if self.mode in ("spectrum", "evolve", "steady", "lifetime") and not self.f_values:
            raise ScenarioError(f"mode {self.mode!r} needs 'f_values'")
        if self.mode in ("evolve", "lifetime") and not self.initial_states:
            raise ScenarioError(f"mode {self.mode!r} needs 'initial_state'")
        if self.mode == "evolve" and self.time_grid is None:
            raise ScenarioError("mode 'evolve' needs 'time_grid'")
        if self.mode in ("dicke_scaling", "entropy_scan") and not self.n_range:
            raise ScenarioError(f"mode {self.mode!r} needs 'n_range'")
        if self.mode == "fab_contour" and self.contour is None:
            raise ScenarioError("mode 'fab_contour' needs 'contour'")

    def times(self) -> np.ndarray:
        grid = self.time_grid
        t_min, t_max, points = float(grid["t_min"]), float(grid["t_max"]), int(grid["points"])
        if grid.get("spacing", "log") == "log":
            if t_min <= 0.0:
                raise ScenarioError("log-spaced time_grid needs t_min > 0")
            return np.geomspace(t_min, t_max, points)
        return np.linspace(t_min, t_max, points)


def _base_rates(scenario: Scenario) -> tuple[RateSet, int]:
    try:
        return rates_from_json(scenario.rate_spec)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def _initial_density(label: str, n_atoms: int) -> np.ndarray:
    if label == "all_up":
        return qcore.zeeman_product_state("u" * n_atoms).matrix
    if label == "up_down":
        return qcore.zeeman_product_state("ud").matrix
    return qcore.dipolar_basis_state(label).matrix


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _write_csv(path: Path, header: str, rows: list[str]):
    _write_text(path, "\n".join([header, *rows]) + "\n")


def _run_spectrum(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rates, n_atoms = _base_rates(scenario)

    def one(f):
        sop = lv.build_lindbladian(rates.with_f_ab(f), n_atoms)
        return lv.spectrum(sop)

    reports = list(pool.map(one, scenario.f_values))
    outputs = []
    metrics = {}
    for f, report in zip(scenario.f_values, reports):
        path = out_dir / f"spectrum_f{_f_tag(f)}.json"
        _write_text(path, report.to_json() + "\n")
        outputs.append(str(path))
        metrics[f"zero_count_f{_f_tag(f)}"] = report.zero_count
        metrics[f"adr_f{_f_tag(f)}"] = report.adr
    return {"outputs": outputs, "rows": len(outputs), "metrics": metrics}


def _run_evolve(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rates, n_atoms = _base_rates(scenario)
    if n_atoms != 2:
        raise ScenarioError("mode 'evolve' emits the two-atom observable schema; n_atoms must be 2")
    times = scenario.times()
    combos = [(state, f) for state in scenario.initial_states for f in scenario.f_values]

    def one(combo):
        state_label, f = combo
        sop = lv.build_lindbladian(rates.with_f_ab(f), n_atoms)
        states = lv.evolve_dense(sop, _initial_density(state_label, n_atoms), times)
        return lv.trajectory_csv_rows(times, states)

    results = list(pool.map(one, combos))
    outputs = []
    total = 0
    for (state_label, f), rows in zip(combos, results):
        path = out_dir / f"dense_{state_label}_f{_f_tag(f)}.csv"
        _write_csv(path, lv.TRAJECTORY_CSV_HEADER, rows)
        outputs.append(str(path))
        total += len(rows)
    return {"outputs": outputs, "rows": total, "metrics": {"trajectories": len(outputs)}}


def _run_steady(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rates, n_atoms = _base_rates(scenario)
    outputs = []
    metrics = {}
    for f in scenario.f_values:
        rf = rates.with_f_ab(f)
        sop = lv.build_lindbladian(rf, n_atoms)
        basis = lv.steady_states(sop)
        record = {"f_ab": f, "n_zero_modes": len(basis)}
        if len(basis) == 1 and n_atoms == 2:
            obs = qcore.observables(basis[0])
            record["observables"] = {"Mz": obs.m_z, "Mzz": obs.m_zz, "Mc": obs.m_c}
            gibbs = bloch.gibbs_steady(rf)
            record["thermal_prediction"] = {
                "Mz": gibbs.state.m_z, "Mzz": gibbs.state.m_zz, "Mc": gibbs.state.m_c,
            }
        if f >= 1.0 and n_atoms == 2:
            record["gge"] = {}
            for label in scenario.initial_states or ("up_up",):
                obs0 = qcore.observables(_initial_density(label, 2))
                st = bloch.gge_from_initial(obs0, rf).state
                record["gge"][label] = {"Mz": st.m_z, "Mzz": st.m_zz, "Mc": st.m_c}
        path = out_dir / f"steady_f{_f_tag(f)}.json"
        _write_text(path, json.dumps(record, sort_keys=True) + "\n")
        outputs.append(str(path))
        metrics[f"zero_modes_f{_f_tag(f)}"] = len(basis)
    return {"outputs": outputs, "rows": len(outputs), "metrics": metrics}


def _run_dicke_scaling(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rates, _ = _base_rates(scenario)
    n_values = scenario.n_range

    rows_f1 = list(pool.map(
        lambda n: dicke.scaling_sweep([n], rates)[0], n_values
    ))
    csv_f1 = [
        ",".join([str(n), _fmt(imax), _fmt(tpeak), _fmt(tr)])
        for n, imax, tpeak, tr in rows_f1
    ]
    path_f1 = out_dir / "scaling_f1.csv"
    _write_csv(path_f1, "N,I_max,t_peak,T_R", csv_f1)

    csv_f0 = []
    for n in n_values:
        t_r = dicke.independent_decay_time(n, rates)
        i_max = n * max(1.0, (1.0 + rates.m0) / 2.0)  # monotone relaxation: peak at an endpoint
        csv_f0.append(",".join([str(n), _fmt(i_max), _fmt(0.0), _fmt(t_r)]))
    path_f0 = out_dir / "scaling_f0.csv"
    _write_csv(path_f0, "N,I_max,t_peak,T_R", csv_f0)

    fit_imax = dicke.fit_power_law([r[0] for r in rows_f1], [r[1] for r in rows_f1])
    fit_tr = dicke.fit_power_law([r[0] for r in rows_f1], [r[3] for r in rows_f1])
    path_fit_imax = out_dir / "fit_imax.json"
    path_fit_tr = out_dir / "fit_tr.json"
    _write_text(path_fit_imax, fit_imax.to_json() + "\n")
    _write_text(path_fit_tr, fit_tr.to_json() + "\n")

    return {
        "outputs": [str(path_f1), str(path_f0), str(path_fit_imax), str(path_fit_tr)],
        "rows": len(csv_f1) + len(csv_f0),
        "metrics": {"imax_slope": fit_imax.slope, "tr_slope": fit_tr.slope},
    }


def _run_cascade(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rates, n_atoms = _base_rates(scenario)
    if scenario.f_values:
        rates = rates.with_f_ab(scenario.f_values[0])
    times = scenario.times() if scenario.time_grid is not None else None
    result = dicke.cascade_trajectory(n_atoms, rates, times)
    rows = [
        ",".join([_fmt(t), _fmt(i)]) for t, i in zip(result.times, result.intensity)
    ]
    path_csv = out_dir / "cascade.csv"
    _write_csv(path_csv, "t,intensity", rows)
    path_sum = out_dir / "cascade_summary.json"
    _write_text(path_sum, result.summary_json() + "\n")
    return {
        "outputs": [str(path_csv), str(path_sum)],
        "rows": len(rows),
        "metrics": {
            "plateau_detected": result.plateau_detected,
            "plateau_value": result.plateau_value,
            "block_gge_prediction": result.block_gge_prediction,
        },
    }


def _run_entropy_scan(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rates, _ = _base_rates(scenario)
    rows = []
    for regime in ("f0", "f1_principal"):
        for n, s in dicke.entropy_vs_N(rates, scenario.n_range, regime):
            rows.append(f"{n},{_fmt(s)},{regime}")
    path = out_dir / "entropy.csv"
    _write_csv(path, "N,S,regime", rows)
    return {"outputs": [str(path)], "rows": len(rows), "metrics": {}}


def contour_fab(spec: ContourSpec, pool: ThreadPoolExecutor | None = None) -> list[tuple]:
    """(alpha, L, f_ab, T_pre_frac) over the SI-unit grid.

    The fractional quasi-steady lifetime column is computed from the two
    relaxation timescales (it algebraically reduces to f_ab, which the
    acceptance suite checks); f_ab = 1 maps to 1 as the limit value.
    """
    alphas = np.geomspace(*spec.alpha_range, spec.alpha_points)
    lengths = np.geomspace(*spec.l_range, spec.l_points)

    def one(alpha):
        out = []
        for length in lengths:
            cfg = PhysicalConfig(
                omega0=spec.omega0, alpha=float(alpha), separation_L=float(length),
                lambda_coupling=1.0, n_atoms=2, unit_mode="SI",
            )
            f = compute_f_ab(cfg)
            if f >= 1.0:
                frac = 1.0
            else:
                t_th = 1.0 / (1.0 - f)
                frac = (t_th - 1.0) / t_th
            out.append((float(alpha), float(length), f, frac))
        return out

    mapper = pool.map if pool is not None else map
    rows = []
    for chunk in mapper(one, alphas):
        rows.extend(chunk)
    return rows


def _run_fab_contour(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rows = contour_fab(scenario.contour, pool)
    csv_rows = [",".join(_fmt(v) for v in row) for row in rows]
    path = out_dir / "contour.csv"
    _write_csv(path, "alpha,L,f_ab,T_pre_frac", csv_rows)
    frac_close = max(abs(r[3] - r[2]) for r in rows if r[2] < 1.0)
    return {
        "outputs": [str(path)],
        "rows": len(csv_rows),
        "metrics": {"max_frac_deviation": frac_close},
    }


def _run_lifetime(scenario: Scenario, out_dir: Path, pool: ThreadPoolExecutor) -> dict:
    rates, n_atoms = _base_rates(scenario)
    if n_atoms != 2:
        raise ScenarioError("mode 'lifetime' uses the two-atom reduced model; n_atoms must be 2")
    record = {}
    for label in scenario.initial_states:
        obs = qcore.observables(_initial_density(label, 2))
        init = bloch.BlochState(m_z=obs.m_z, m_zz=obs.m_zz, m_c=obs.m_c)
        per_f = {}
        for f in scenario.f_values:
            if not 0.0 < f < 1.0:
                raise ScenarioError("lifetime mode needs 0 < f < 1")
            per_f[_f_tag(f)] = bloch.plateau_departure_time(rates.with_f_ab(f), init)
        record[label] = per_f
    path = out_dir / "lifetimes.json"
    _write_text(path, json.dumps(record, sort_keys=True) + "\n")
    return {"outputs": [str(path)], "rows": len(record), "metrics": {}}


_RUNNERS = {
    "spectrum": _run_spectrum,
    "evolve": _run_evolve,
    "steady": _run_steady,
    "dicke_scaling": _run_dicke_scaling,
    "cascade": _run_cascade,
    "entropy_scan": _run_entropy_scan,
    "fab_contour": _run_fab_contour,
    "lifetime": _run_lifetime,
}


def run_scenario(scenario: Scenario, out_root: Path, threads: int = 1) -> dict:
    """Dispatch a scenario and return its summary record."""
    out_dir = out_root / (scenario.output_path or scenario.name)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        summary = _RUNNERS[scenario.mode](scenario, out_dir, pool)
    summary.update({"scenario": scenario.name, "mode": scenario.mode, "ok": True})
    return summary


def bundled_scenarios() -> dict[str, Path]:
    """Name -> path of the scenario files shipped with the package."""
    root = resources.files("unruh_preth") / "scenarios"
    return {p.name.removesuffix(".json"): Path(str(p)) for p in sorted(root.iterdir(), key=lambda p: p.name)
            if p.name.endswith(".json")}


def _load_scenario(path_or_name: str) -> Scenario:
    path = Path(path_or_name)
    if not path.exists():
        bundled = bundled_scenarios()
        if path_or_name in bundled:
            path = bundled[path_or_name]
        else:
            raise ScenarioError(f"scenario file {path_or_name!r} not found "
                                f"(bundled: {', '.join(bundled)})")
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON in {path}: {exc}") from None
    return Scenario.from_json(obj)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="unruh-preth",
        description="Collective dissipation of accelerated atoms: scenario runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario JSON file (or a bundled name)")
    p_run.add_argument("scenario")
    p_run.add_argument("--out", default=None, help="output directory (default ./out)")
    p_run.add_argument("--threads", type=int, default=min(4, os.cpu_count() or 1))

    sub.add_parser("list-scenarios", help="list bundled scenarios")

    p_val = sub.add_parser("validate", help="validate a scenario JSON file")
    p_val.add_argument("scenario")

    args = parser.parse_args(argv)

    try:
        if args.command == "list-scenarios":
            for name, path in bundled_scenarios().items():
                print(f"{name}\t{path}")
            return 0
        if args.command == "validate":
            scenario = _load_scenario(args.scenario)
            print(json.dumps({"scenario": scenario.name, "mode": scenario.mode, "valid": True},
                             sort_keys=True))
            return 0
        scenario = _load_scenario(args.scenario)
        out_root = Path(args.out or os.environ.get("UNRUH_PRETH_OUT", "out"))
        print(f"running scenario {scenario.name!r} (mode {scenario.mode})", file=sys.stderr)
        summary = run_scenario(scenario, out_root, threads=args.threads)
        print(json.dumps(summary, sort_keys=True))
        return 0
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
