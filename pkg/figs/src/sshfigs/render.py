"""Figure analogs of the chain-transfer result set.

Each figure id maps to a fixed set of input CSVs expected in the input
directory; headers are validated before any drawing happens, and the
manifest hashes from the inputs are embedded in the output (caption line
plus image metadata where the format allows it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import CsvTable, FigsInputError, read_table, require_columns

FIGURE_INPUTS = {
    "fig2": ("spectrum.csv", "localization.csv"),
    "fig3": ("sweep.csv", "trajectory.csv"),
    "fig4": ("spectrum.csv", "localization.csv"),
    "fig5": ("sweep.csv", "trajectory.csv"),
    "fig6": ("spectrum.csv", "localization.csv", "sweep.csv"),
}

GAP_COLOR = "crimson"
BAND_COLOR = "0.6"


@dataclass
class FigureJob:
    figure_id: str
    input_dir: Path
    output_path: Path
    dpi: int = 150


def render(job: FigureJob) -> Path:
    if job.figure_id not in FIGURE_INPUTS:
        raise ValueError(f"unknown figure id {job.figure_id!r}; "
                         f"expected one of {sorted(FIGURE_INPUTS)}")
    tables = {name: read_table(Path(job.input_dir) / name)
              for name in FIGURE_INPUTS[job.figure_id]}
    renderer = globals()[f"_render_{job.figure_id}"]
    fig = renderer(tables)
    hashes = {name: table.manifest_hash for name, table in tables.items()}
    caption = "manifests: " + ", ".join(f"{name} {digest[:12]}"
                                        for name, digest in hashes.items())
    fig.text(0.01, 0.002, caption, fontsize=5, color="0.4")
    out = Path(job.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=job.dpi, metadata=_metadata(hashes, out.suffix.lower()))
    plt.close(fig)
    return out


def _metadata(hashes: dict, suffix: str):
    joined = ";".join(f"{name}={digest}" for name, digest in hashes.items())
    if suffix == ".png":
        return {"manifest_hashes": joined}
    if suffix == ".svg":
        return {"Description": f"manifest_hashes: {joined}"}
    if suffix == ".pdf":
        return {"Subject": f"manifest_hashes: {joined}"}
    return None


# ----------------------------------------------------------------- pivots

def _spectrum_bands(table: CsvTable) -> tuple[np.ndarray, np.ndarray, int]:
    require_columns(table, ["theta", "E1"])
    n_bands = len(table.header) - 1
    expected = [f"E{k}" for k in range(1, n_bands + 1)]
    for name in expected:
        if name not in table.header:
            raise FigsInputError(f"{table.path}: missing required column '{name}'")
    thetas = table.column("theta")
    energies = table.data[:, 1:]
    return thetas, energies, (n_bands - 1) // 2


def _localization_grid(table: CsvTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    require_columns(table, ["theta", "site", "population"])
    thetas = np.unique(table.column("theta"))
    sites = np.unique(table.column("site")).astype(int)
    grid = np.full((sites.size, thetas.size), np.nan)
    t_index = {t: i for i, t in enumerate(thetas)}
    s_index = {s: i for i, s in enumerate(sites)}
    for theta, site, population in table.data[:, :3]:
        grid[s_index[int(site)], t_index[theta]] = population
    return thetas, sites, grid


def _sweep_grid(table: CsvTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    require_columns(table, ["omega", "T", "fidelity"])
    omegas = np.unique(table.column("omega"))
    ts = np.unique(table.column("T"))
    grid = np.full((omegas.size, ts.size), np.nan)
    o_index = {o: i for i, o in enumerate(omegas)}
    t_index = {t: i for i, t in enumerate(ts)}
    col = {name: table.header.index(name) for name in ("omega", "T", "fidelity")}
    for row in table.data:
        grid[o_index[row[col["omega"]]], t_index[row[col["T"]]]] = row[col["fidelity"]]
    return omegas, ts, grid


def _trajectory_populations(table: CsvTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    require_columns(table, ["t", "norm", "fidelity", "p1"])
    n_sites = len(table.header) - 3
    for name in (f"p{k}" for k in range(1, n_sites + 1)):
        if name not in table.header:
            raise FigsInputError(f"{table.path}: missing required column '{name}'")
    return table.column("t"), table.column("fidelity"), table.data[:, 3:]


# ------------------------------------------------------------------ panels

def _theta_axis(ax, thetas):
    ax.set_xlabel(r"$\theta$")
    if thetas.max() > 6.0:
        ax.set_xticks([0, math.pi, 2 * math.pi])
        ax.set_xticklabels(["0", r"$\pi$", r"$2\pi$"])


def _spectrum_panel(ax, thetas, energies, mid, ylim=None):
    for k in range(energies.shape[1]):
        if k != mid:
            ax.plot(thetas, energies[:, k], color=BAND_COLOR, lw=0.6)
    ax.plot(thetas, energies[:, mid], color=GAP_COLOR, lw=1.4, label="gap state")
    if ylim is not None:
        ax.set_ylim(*ylim)
    ax.set_ylabel("energy")
    _theta_axis(ax, thetas)
    ax.legend(loc="upper right", fontsize=7, frameon=False)


def _localization_panel(fig, ax, table):
    thetas, sites, grid = _localization_grid(table)
    mesh = ax.pcolormesh(thetas, sites, grid, shading="nearest", cmap="viridis",
                         vmin=0.0, vmax=1.0)
    fig.colorbar(mesh, ax=ax, label="population")
    ax.set_ylabel("site")
    _theta_axis(ax, thetas)


def _sweep_panel(fig, ax, table):
    omegas, ts, grid = _sweep_grid(table)
    mesh = ax.pcolormesh(ts, omegas, grid, shading="nearest", cmap="magma",
                         vmin=0.0, vmax=1.0)
    fig.colorbar(mesh, ax=ax, label="fidelity")
    if omegas.size > 1:
        ax.set_yscale("log")
    ax.set_xlabel(r"$T$")
    ax.set_ylabel(r"$\Omega$")


def _transfer_panel(ax, table, edge_sites):
    times, fidelities, populations = _trajectory_populations(table)
    first, last = edge_sites
    ax.plot(times, populations[:, first - 1], label=f"site {first}")
    ax.plot(times, populations[:, last - 1], label=f"site {last}")
    ax.plot(times, fidelities, "--", color="0.3", lw=0.9, label="fidelity")
    ax.set_xlabel(r"$t$")
    ax.set_ylabel("population")
    ax.set_ylim(-0.02, 1.05)
    ax.legend(fontsize=7, frameon=False)


# ----------------------------------------------------------------- figures

def _render_fig2(tables):
    thetas, energies, mid = _spectrum_bands(tables["spectrum.csv"])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.8), layout="constrained")
    _spectrum_panel(ax1, thetas, energies, mid)
    ax1.set_title("(a) spectrum")
    _localization_panel(fig, ax2, tables["localization.csv"])
    ax2.set_title("(b) gap-state distribution")
    return fig


def _render_fig3(tables):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.8), layout="constrained")
    _sweep_panel(fig, ax1, tables["sweep.csv"])
    ax1.set_title("(a) transfer fidelity")
    _, _, populations = _trajectory_populations(tables["trajectory.csv"])
    n_sites = populations.shape[1]
    _transfer_panel(ax2, tables["trajectory.csv"], (1, n_sites))
    ax2.set_title("(b) edge-to-edge transfer")
    return fig


def _render_fig4(tables):
    thetas, energies, mid = _spectrum_bands(tables["spectrum.csv"])
    fig, (ax1, ax2, ax3) = plt.subplots(1, 3, figsize=(12.5, 3.6), layout="constrained")
    _spectrum_panel(ax1, thetas, energies, mid)
    ax1.set_title("(a) spectrum")
    span = max(0.6, 1.3 * float(np.max(np.abs(energies[:, mid]))))
    _spectrum_panel(ax2, thetas, energies, mid, ylim=(-span, span))
    ax2.set_title("(b) in-gap detail")
    _localization_panel(fig, ax3, tables["localization.csv"])
    ax3.set_title("(c) gap-state distribution")
    return fig


def _render_fig5(tables):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.5, 3.8), layout="constrained")
    _sweep_panel(fig, ax1, tables["sweep.csv"])
    ax1.set_title("(a) transfer fidelity")
    _, _, populations = _trajectory_populations(tables["trajectory.csv"])
    n_sites = populations.shape[1]
    _transfer_panel(ax2, tables["trajectory.csv"], (2, n_sites - 1))
    ax2.set_title("(b) second-site transfer")
    return fig


def _render_fig6(tables):
    thetas, energies, mid = _spectrum_bands(tables["spectrum.csv"])
    fig, axes = plt.subplots(2, 2, figsize=(9.5, 7.2), layout="constrained")
    _spectrum_panel(axes[0, 0], thetas, energies, mid)
    axes[0, 0].set_title("(a) spectrum")
    span = 0.6
    _spectrum_panel(axes[0, 1], thetas, energies, mid, ylim=(-span, span))
    axes[0, 1].set_title("(b) in-gap detail")
    _localization_panel(fig, axes[1, 0], tables["localization.csv"])
    axes[1, 0].set_title("(c) gap-state distribution")
    _sweep_panel(fig, axes[1, 1], tables["sweep.csv"])
    axes[1, 1].set_title("(d) transfer fidelity")
    return fig
