"""Render the five standard views of dwcavity sweep CSVs.

Each figure is a pure function of its input CSV: fixed canvas size, fixed
style, no timestamps in the output, so re-rendering identical data yields
byte-identical PNG files.

Figure 1: photon spectra vs detuning at several time cuts, with optional
          per-curve vertical offsets, against the quasi-steady curve.
Figure 2: decay of the |0><1| atomic coherence vs time at fixed detuning.
Figure 3: steady photon spectra for each pump strength in the CSV.
Figure 4: steady atomic density-matrix elements vs detuning.
Figure 5: relaxation time vs detuning (log scale) with a linear inset
          over 0 <= delta/U0 <= 2.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 120,
    "savefig.dpi": 120,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
    "svg.hashsalt": "dwfigures",
}

# Fixed palette so curve identity is stable across reruns and inputs.
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
          "#e377c2", "#7f7f7f", "#bcbd22"]

REQUIRED_COLUMNS = {
    1: ["delta_over_U0", "kappa_tau", "photon_norm_full",
        "photon_norm_quasi"],
    2: ["kappa_tau", "coh01_abs", "coh01_abs_frozen", "coh01_env_analytic"],
    3: ["delta_over_U0", "eta_kappa", "photon_norm_steady"],
    4: ["delta_over_U0", "pop0", "coh01_abs"],
    5: ["delta_over_U0", "kappa_tau_max"],
}


class SchemaError(ValueError):
    """The CSV does not carry the columns the requested figure needs."""


@dataclass(frozen=True)
class FigureSpec:
    """What to render: which figure, from which CSV, to which image."""

    figure_id: int
    input_csv: str
    output_image: str
    offsets: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.figure_id not in REQUIRED_COLUMNS:
            raise ValueError(f"figure_id must be 1..5, got {self.figure_id}")
        if self.offsets and self.figure_id != 1:
            raise ValueError("per-curve offsets apply to figure 1 only")


def load_csv(path) -> dict:
    """Read a sweep CSV into {column: list}, numbers parsed as floats."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header row")
        columns = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in reader.fieldnames:
                val = row.get(name, "")
                try:
                    columns[name].append(float(val))
                except (TypeError, ValueError):
                    columns[name].append(val)
    return columns


def _require(data: dict, fig: int):
    missing = [c for c in REQUIRED_COLUMNS[fig] if c not in data]
    if missing:
        raise SchemaError(f"figure {fig} needs missing columns: {missing}")
    first = REQUIRED_COLUMNS[fig][0]
    if not data[first]:
        raise SchemaError(f"figure {fig}: CSV has a header but no data rows")


def _col(data, name):
    return np.asarray(data[name], dtype=float)


def _fig1(ax, data, offsets):
    x_all = _col(data, "delta_over_U0")
    taus = _col(data, "kappa_tau")
    cuts = sorted(set(taus.tolist()))
    if offsets and len(offsets) != len(cuts):
        raise SchemaError(
            f"{len(offsets)} offsets given for {len(cuts)} time cuts")
    for k, cut in enumerate(cuts):
        sel = taus == cut
        shift = offsets[k] if offsets else 0.0
        ax.plot(x_all[sel], _col(data, "photon_norm_full")[sel] + shift,
                color=COLORS[k % len(COLORS)], linestyle="--",
                label=f"$\\kappa\\tau$ = {cut:g}"
                      + (f" (+{shift:g})" if shift else ""))
    sel = taus == cuts[0]
    ax.plot(x_all[sel], _col(data, "photon_norm_quasi")[sel],
            color="black", label="quasi-steady")
    ax.set_xlabel(r"$\Delta / U_0$")
    ax.set_ylabel(r"$\langle a^\dagger a\rangle / (\eta/\kappa)^2$")
    ax.legend(loc="upper right", fontsize=8)


def _fig2(ax, data):
    tau = _col(data, "kappa_tau")
    ax.plot(tau, _col(data, "coh01_abs"), color=COLORS[0],
            label=r"$|\rho_a^{01}|$, full")
    ax.plot(tau, _col(data, "coh01_abs_frozen"), color=COLORS[1],
            linestyle="--", label=r"$|\rho_a^{01}|$, tunneling frozen")
    ax.plot(tau, _col(data, "coh01_env_analytic"), color="black",
            linestyle=":", label=r"analytic envelope $e^{-\tau/\tau_{01}}$")
    ax.set_xlabel(r"$\kappa\tau$")
    ax.set_ylabel(r"$|\rho_a^{01}|$")
    ax.legend(loc="upper right", fontsize=8)


def _fig3(ax, data):
    x_all = _col(data, "delta_over_U0")
    etas = _col(data, "eta_kappa")
    for k, eta in enumerate(sorted(set(etas.tolist()))):
        sel = etas == eta
        ax.plot(x_all[sel], _col(data, "photon_norm_steady")[sel],
                color=COLORS[k % len(COLORS)],
                label=rf"$\eta/\kappa$ = {eta:g}")
    ax.set_xlabel(r"$\Delta / U_0$")
    ax.set_ylabel(r"$\langle a^\dagger a\rangle_{st} / (\eta/\kappa)^2$")
    ax.legend(loc="upper right", fontsize=8)


def _fig4(ax, data):
    x = _col(data, "delta_over_U0")
    pops = sorted(c for c in data if c.startswith("pop"))
    cohs = sorted(c for c in data if c.startswith("coh") and
                  c.endswith("_abs"))
    for k, col in enumerate(pops):
        ax.plot(x, _col(data, col), color=COLORS[k % len(COLORS)],
                label=rf"$\rho_a^{{{col[3:]}{col[3:]}}}$")
    for k, col in enumerate(cohs):
        pair = col[3:5]
        ax.plot(x, _col(data, col), color=COLORS[(k + len(pops)) % len(COLORS)],
                linestyle="--", label=rf"$|\rho_a^{{{pair}}}|$")
    ax.set_xlabel(r"$\Delta / U_0$")
    ax.set_ylabel("steady atomic matrix elements")
    ax.legend(loc="center right", fontsize=8, ncol=2)


def _fig5(ax, fig, data):
    x = _col(data, "delta_over_U0")
    y = _col(data, "kappa_tau_max")
    ax.plot(x, y, color=COLORS[0])
    ax.set_yscale("log")
    ax.set_xlabel(r"$\Delta / U_0$")
    ax.set_ylabel(r"$\kappa\,\tau_{max}$")
    inset = fig.add_axes([0.58, 0.58, 0.28, 0.26])
    sel = (x >= 0.0) & (x <= 2.0)
    if np.any(sel):
        inset.plot(x[sel], y[sel], color=COLORS[0])
    inset.set_xlim(0.0, 2.0)
    inset.tick_params(labelsize=7)
    inset.set_title(r"$0 \leq \Delta/U_0 \leq 2$", fontsize=7)


def render(spec: FigureSpec) -> str:
    """Render the figure described by ``spec``; returns the output path."""
    data = load_csv(spec.input_csv)
    _require(data, spec.figure_id)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        try:
            if spec.figure_id == 1:
                _fig1(ax, data, spec.offsets)
            elif spec.figure_id == 2:
                _fig2(ax, data)
            elif spec.figure_id == 3:
                _fig3(ax, data)
            elif spec.figure_id == 4:
                _fig4(ax, data)
            else:
                _fig5(ax, fig, data)
            # Strip the writer's software tag so output bytes depend only
            # on the input CSV (and the pinned style above).
            fig.savefig(spec.output_image, format="png",
                        metadata={"Software": None})
        finally:
            plt.close(fig)
    return spec.output_image
