"""Figure builders: scenario output files in, deterministic SVG out.

Each figure id maps to the output directory of one bundled scenario
(``--data`` points at the directory that contains those per-scenario
subdirectories):

    fig1  <data>/fig1_spectrum/spectrum_f*.json      eigenvalue ladders
    fig2  <data>/fig2_panel/dense_*_f*.csv           4 x 3 observable grid
          (+ optional <data>/fig2_entanglement/      purity/concurrence strip)
    fig3  <data>/fig3_scaling/                       burst scaling + fits
    fig4  <data>/fig4_entropy/entropy.csv            entropy vs N
    fig5  <data>/fig5_cascade/                       cascade trajectory
    fig6  <data>/fig6_contour/contour.csv            cross-coupling contour

Rendering is a pure function of the input files: SVG metadata timestamps
are suppressed and the SVG id salt is fixed, so re-rendering the same
inputs produces identical bytes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")

F_LABELS = ("0", "0.99", "0.9999", "1")
STATES = ("up_up", "down_down", "triplet0", "singlet")
OBSERVABLES = (("Mz", "M_z"), ("Mzz", "M_zz"), ("Mc", "M_c"))

TRAJECTORY_COLUMNS = ["t", "Mz", "Mzz", "Mc", "purity", "entropy", "concurrence"]
SCALING_COLUMNS = ["N", "I_max", "t_peak", "T_R"]
ENTROPY_COLUMNS = ["N", "S", "regime"]
CASCADE_COLUMNS = ["t", "intensity"]
CONTOUR_COLUMNS = ["alpha", "L", "f_ab", "T_pre_frac"]


class SchemaError(ValueError):
    """An input file is missing or does not match its expected schema."""


def _read_csv(path: Path, required: list[str]) -> dict[str, np.ndarray]:
    if not path.exists():
        raise SchemaError(f"missing input file {path}")
    with path.open(newline="") as handle:
        reader = csv.DictReader(handle)
        fields = reader.fieldnames or []
        for column in required:
            if column not in fields:
                raise SchemaError(f"{path} is missing required column {column!r}")
        rows = list(reader)
    out = {}
    for column in fields:
        try:
            out[column] = np.array([float(r[column]) for r in rows])
        except ValueError:
            out[column] = np.array([r[column] for r in rows])
    return out


def _read_json(path: Path, required: list[str]) -> dict:
    if not path.exists():
        raise SchemaError(f"missing input file {path}")
    obj = json.loads(path.read_text())
    for key in required:
        if key not in obj:
            raise SchemaError(f"{path} is missing required key {key!r}")
    return obj


def _new_figure(figure_id: str, **kwargs):
    plt.rcParams["svg.hashsalt"] = figure_id
    plt.rcParams["svg.fonttype"] = "none"
    return plt.subplots(**kwargs)


def _save(fig, out_file: Path):
    out_file.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_file, format="svg", metadata={"Date": None})
    plt.close(fig)


def _render_fig1(data_dir: Path, out_file: Path) -> dict:
    reports = {}
    for tag in F_LABELS:
        reports[tag] = _read_json(
            data_dir / "fig1_spectrum" / f"spectrum_f{tag}.json",
            ["eigenvalues", "zero_count", "adr"],
        )
    fig, ax = _new_figure("fig1", figsize=(7.0, 4.5))
    markers = ("o", "s", "^", "d")
    for (tag, rep), marker in zip(reports.items(), markers):
        real_parts = sorted((ev[0] for ev in rep["eigenvalues"]), reverse=True)
        ax.plot(range(1, len(real_parts) + 1), real_parts, marker, ms=5,
                mfc="none", label=f"f = {tag} ({rep['zero_count']} zero)")
    ax.set_xlabel("eigenvalue index (descending real part)")
    ax.set_ylabel("Re eigenvalue")
    ax.legend(fontsize=8)
    ax.set_title("relaxation spectrum of the two-atom generator")
    _save(fig, out_file)
    return {"zero_counts": {tag: reports[tag]["zero_count"] for tag in F_LABELS}}


def _render_fig2(data_dir: Path, out_file: Path) -> dict:
    panel_dir = data_dir / "fig2_panel"
    grids = {}
    for state in STATES:
        for tag in F_LABELS:
            grids[(state, tag)] = _read_csv(
                panel_dir / f"dense_{state}_f{tag}.csv", TRAJECTORY_COLUMNS)

    ent_dir = data_dir / "fig2_entanglement"
    with_strip = ent_dir.is_dir()
    n_rows = len(STATES) + (1 if with_strip else 0)
    fig, axes = _new_figure("fig2", figsize=(10.0, 2.2 * n_rows),
                            nrows=n_rows, ncols=3, squeeze=False)
    for i, state in enumerate(STATES):
        for jcol, (column, label) in enumerate(OBSERVABLES):
            ax = axes[i][jcol]
            for tag in F_LABELS:
                data = grids[(state, tag)]
                ax.semilogx(data["t"], data[column], lw=1.0, label=f"f = {tag}")
            if i == 0:
                ax.set_title(label)
            if jcol == 0:
                ax.set_ylabel(state.replace("_", " "))
            if i == len(STATES) - 1 and not with_strip:
                ax.set_xlabel("t")
    strip = {}
    if with_strip:
        purity_src = _read_csv(ent_dir / "dense_up_up_f0.9999.csv", TRAJECTORY_COLUMNS)
        conc_src = _read_csv(ent_dir / "dense_up_down_f0.9999.csv", TRAJECTORY_COLUMNS)
        ax_p, ax_c, ax_unused = axes[-1]
        for tag in F_LABELS:
            pur = _read_csv(ent_dir / f"dense_up_up_f{tag}.csv", TRAJECTORY_COLUMNS)
            ax_p.semilogx(pur["t"], pur["purity"], lw=1.0, label=f"f = {tag}")
            con = _read_csv(ent_dir / f"dense_up_down_f{tag}.csv", TRAJECTORY_COLUMNS)
            ax_c.semilogx(con["t"], con["concurrence"], lw=1.0)
        ax_p.set_ylabel("purity (up up)")
        ax_c.set_ylabel("concurrence (up down)")
        ax_p.set_xlabel("t")
        ax_c.set_xlabel("t")
        ax_unused.axis("off")
        strip = {
            "purity_final": float(purity_src["purity"][-1]),
            "concurrence_peak": float(conc_src["concurrence"].max()),
        }
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    _save(fig, out_file)
    return {"panels": [len(STATES), 3], "entanglement_strip": with_strip, **strip}


def _render_fig3(data_dir: Path, out_file: Path) -> dict:
    base = data_dir / "fig3_scaling"
    scaling = _read_csv(base / "scaling_f1.csv", SCALING_COLUMNS)
    baseline = _read_csv(base / "scaling_f0.csv", SCALING_COLUMNS)
    fit_imax = _read_json(base / "fit_imax.json", ["slope", "intercept"])
    fit_tr = _read_json(base / "fit_tr.json", ["slope", "intercept"])

    fig, (ax_i, ax_t) = _new_figure("fig3", figsize=(9.0, 4.0), ncols=2)
    for ax, column, fit, ylabel in (
        (ax_i, "I_max", fit_imax, "peak intensity"),
        (ax_t, "T_R", fit_tr, "decay time"),
    ):
        n = scaling["N"]
        ax.loglog(n, scaling[column], "o", mfc="none", label="collective")
        line = 10.0 ** (fit["intercept"] + fit["slope"] * np.log10(n))
        ax.loglog(n, line, "-", lw=1.0,
                  label=f"slope = {fit['slope']:.4f}")
        ax.set_xlabel("N")
        ax.set_ylabel(ylabel)
        ax.legend(fontsize=8)
    ax_t.loglog(baseline["N"], baseline["T_R"], "s", mfc="none", label="independent")
    ax_t.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, out_file)
    return {"imax_slope": float(fit_imax["slope"]), "tr_slope": float(fit_tr["slope"]),
            "imax_annotation": f"slope = {fit_imax['slope']:.4f}",
            "tr_annotation": f"slope = {fit_tr['slope']:.4f}"}


def _render_fig4(data_dir: Path, out_file: Path) -> dict:
    data = _read_csv(data_dir / "fig4_entropy" / "entropy.csv", ENTROPY_COLUMNS)
    fig, ax = _new_figure("fig4", figsize=(6.0, 4.2))
    styles = {"f0": ("o-", "independent (extensive)"),
              "f1_principal": ("s-", "collective (saturating)")}
    for regime, (style, label) in styles.items():
        mask = data["regime"] == regime
        ax.plot(data["N"][mask], data["S"][mask], style, ms=4, lw=1.0, label=label)
    ax.set_xlabel("N")
    ax.set_ylabel("steady-state entropy (nats)")
    ax.legend()
    _save(fig, out_file)
    return {"rows": int(data["N"].size)}


def _render_fig5(data_dir: Path, out_file: Path) -> dict:
    base = data_dir / "fig5_cascade"
    traj = _read_csv(base / "cascade.csv", CASCADE_COLUMNS)
    summary = _read_json(base / "cascade_summary.json",
                         ["plateau_detected", "plateau_value",
                          "block_gge_prediction", "gibbs_intensity"])
    fig, ax = _new_figure("fig5", figsize=(7.0, 4.2))
    positive = traj["t"] > 0
    ax.semilogx(traj["t"][positive], traj["intensity"][positive], lw=1.2)
    if summary["plateau_detected"]:
        ax.axvspan(summary["plateau_start"], summary["plateau_end"],
                   alpha=0.15, label="plateau")
        ax.axhline(summary["block_gge_prediction"], ls="--", lw=0.8,
                   label="collective-block prediction")
    ax.axhline(summary["gibbs_intensity"], ls=":", lw=0.8, label="thermal value")
    ax.set_xlabel("t")
    ax.set_ylabel("intensity")
    ax.legend(fontsize=8)
    _save(fig, out_file)
    return {"plateau_detected": bool(summary["plateau_detected"])}


def _render_fig6(data_dir: Path, out_file: Path) -> dict:
    data = _read_csv(data_dir / "fig6_contour" / "contour.csv", CONTOUR_COLUMNS)
    alphas = np.unique(data["alpha"])
    lengths = np.unique(data["L"])
    grid = np.full((lengths.size, alphas.size), np.nan)
    a_idx = {a: i for i, a in enumerate(alphas)}
    l_idx = {ln: i for i, ln in enumerate(lengths)}
    for alpha, length, f in zip(data["alpha"], data["L"], data["f_ab"]):
        grid[l_idx[length], a_idx[alpha]] = f
    if np.isnan(grid).any():
        raise SchemaError("contour.csv does not fill a complete alpha x L grid")
    fig, ax = _new_figure("fig6", figsize=(6.5, 4.8))
    mesh = ax.pcolormesh(alphas, lengths, grid, shading="nearest",
                         vmin=-0.2, vmax=1.0, cmap="viridis")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("acceleration (m/s^2)")
    ax.set_ylabel("separation (m)")
    fig.colorbar(mesh, ax=ax, label="cross-coupling factor")
    _save(fig, out_file)
    return {"grid_shape": [int(lengths.size), int(alphas.size)],
            "f_max": float(np.nanmax(grid))}


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2": _render_fig2,
    "fig3": _render_fig3,
    "fig4": _render_fig4,
    "fig5": _render_fig5,
    "fig6": _render_fig6,
}


def render(figure_id: str, data_dir, out_file) -> dict:
    """Render one figure; returns a summary of what was drawn."""
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")
    summary = _RENDERERS[figure_id](Path(data_dir), Path(out_file))
    summary.update({"figure_id": figure_id, "output": str(out_file)})
    return summary
