"""Render figure analogues from uscsim CSV/JSON outputs.

Each figure id maps to a renderer that validates the input schema, prepares
the series (pure functions, unit-testable), and draws a static PNG/SVG.
Phase-space panels use a diverging colormap with white pinned at zero and
blue for negative Wigner values.
"""

from __future__ import annotations

import argparse
import json
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LinearSegmentedColormap, Normalize, TwoSlopeNorm


class SchemaError(ValueError):
    """Input file does not carry the columns the figure needs."""


# -- input loading --------------------------------------------------------------

def load_csv(path: str):
    """Read a '#'-metadata CSV into (metadata dict, column dict of arrays)."""
    meta: dict = {}
    rows = []
    columns = None
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("config:"):
                    meta["config"] = json.loads(body[len("config:"):].strip())
                elif "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            if columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    if columns is None or not rows:
        raise SchemaError(f"{path}: no data rows")
    data = {}
    for j, name in enumerate(columns):
        col = [r[j] for r in rows]
        try:
            data[name] = np.array([float(v) for v in col])
        except ValueError:
            data[name] = np.array(col)
    return meta, data


def require(data: dict, columns, path: str = "input"):
    missing = [c for c in columns if c not in data]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing};"
                          f" found {sorted(data)}")


# -- colormap -------------------------------------------------------------------

_DIVERGING = LinearSegmentedColormap.from_list(
    "usc_diverging",
    [(0.0, "#08306b"), (0.28, "#4292c6"), (0.5, "#ffffff"),
     (0.68, "#ffe873"), (0.85, "#d7301f"), (1.0, "#000000")])

_POSITIVE = LinearSegmentedColormap.from_list(
    "usc_positive",
    [(0.0, "#ffffff"), (0.36, "#ffe873"), (0.7, "#d7301f"), (1.0, "#000000")])


def colormap_for(values: np.ndarray):
    """(cmap, norm) with white at zero; diverging when negatives are present."""
    vmin = float(np.min(values))
    vmax = float(np.max(values))
    if vmax <= 0.0:
        vmax = 1e-30
    if vmin < 0.0:
        return _DIVERGING, TwoSlopeNorm(vcenter=0.0, vmin=vmin, vmax=vmax)
    return _POSITIVE, Normalize(vmin=0.0, vmax=vmax)


# -- series preparation (pure helpers) ------------------------------------------

def level_series(data: dict, path: str):
    require(data, ["lambda"], path)
    levels = sorted((c for c in data if c.startswith("E") and c[1:].isdigit()),
                    key=lambda c: int(c[1:]))
    if not levels:
        raise SchemaError(f"{path}: no level columns E1..Ek")
    return data["lambda"], [(c, data[c]) for c in levels]


def splitting_by_theta(data: dict, path: str):
    require(data, ["theta", "lambda", "splitting"], path)
    out = []
    for theta in np.unique(data["theta"]):
        mask = data["theta"] == theta
        out.append((float(theta), data["lambda"][mask], data["splitting"][mask]))
    return out


def gaussian_overlay(lam: np.ndarray, split: np.ndarray):
    """Reference line with slope exactly -2 in ln(split) vs (lam)^2.

    Anchored to the data at the largest coupling, where the asymptotic
    form split = Delta*exp(-2*lam^2) applies.
    """
    good = split > 0
    x = lam[good] ** 2
    y = split[good]
    anchor = np.argmax(x)
    log_c = np.log(y[anchor]) + 2.0 * x[anchor]
    return x, np.exp(log_c - 2.0 * x)


def pair_series(data: dict, path: str):
    require(data, ["lambda"], path)
    pairs = sorted((c for c in data if c.startswith("s_n")),
                   key=lambda c: int(c[3:]))
    if not pairs:
        raise SchemaError(f"{path}: no pair-splitting columns s_n*")
    return data["lambda"], [(c, data[c]) for c in pairs]


def phase_space_grid(meta: dict, data: dict, path: str):
    require(data, ["X", "P", "value"], path)
    x = np.unique(data["X"])
    p = np.unique(data["P"])
    if x.size * p.size != data["value"].size:
        raise SchemaError(f"{path}: X/P grid is not rectangular")
    values = np.full((x.size, p.size), np.nan)
    xi = np.searchsorted(x, data["X"])
    pi = np.searchsorted(p, data["P"])
    values[xi, pi] = data["value"]
    return x, p, values


def scan_series(data: dict, column: str, path: str):
    require(data, ["eps_over_delta", "lambda", column], path)
    out = []
    for frac in np.unique(data["eps_over_delta"]):
        mask = data["eps_over_delta"] == frac
        out.append((float(frac), data["lambda"][mask], data[column][mask]))
    return out


def onset_series(data: dict, path: str):
    require(data, ["omega0_over_delta", "target", "lam_over_delta",
                   "line_sqrt_over_delta", "line_omega0_over_delta"], path)
    out = []
    for target in np.unique(data["target"]):
        mask = data["target"] == target
        order = np.argsort(data["omega0_over_delta"][mask])
        out.append((float(target), data["omega0_over_delta"][mask][order],
                    data["lam_over_delta"][mask][order]))
    ratios = np.sort(np.unique(data["omega0_over_delta"]))
    return out, ratios


# -- renderers ------------------------------------------------------------------

LAMBDA_LABEL = r"$\lambda/\hbar\omega_0$"


def _render_levels(meta, data, path, ax):
    lam, series = level_series(data, path)
    for name, values in series:
        ax.plot(lam, values, lw=1.0)
    unit = meta.get("unit", "omega0")
    ax.set_xlabel(LAMBDA_LABEL)
    ax.set_ylabel(r"$E/\hbar\omega_0$" if unit == "omega0" else r"$E/E_{\rm q}$")


def _render_splitting_linear(meta, data, path, ax):
    for theta, lam, split in splitting_by_theta(data, path):
        ax.plot(lam, split, lw=1.2, label=rf"$\theta={theta:.3f}$")
    ax.set_xlabel(LAMBDA_LABEL)
    ax.set_ylabel(r"$(E_2-E_1)/\hbar\omega_0$")
    ax.legend(frameon=False, fontsize=8)


def _render_splitting_log(meta, data, path, ax):
    groups = splitting_by_theta(data, path)
    for theta, lam, split in groups:
        good = split > 0
        ax.semilogy(lam[good] ** 2, split[good], lw=1.2,
                    label=rf"$\theta={theta:.3f}$")
    theta0 = min(groups, key=lambda g: abs(g[0]))
    x_ref, y_ref = gaussian_overlay(theta0[1], theta0[2])
    ax.semilogy(x_ref, y_ref, "k:", lw=1.0, label=r"slope $-2$")
    ax.set_xlabel(r"$(\lambda/\hbar\omega_0)^2$")
    ax.set_ylabel(r"$(E_2-E_1)/\hbar\omega_0$")
    ax.legend(frameon=False, fontsize=8)


def _render_pairs(meta, data, path, ax):
    lam, series = pair_series(data, path)
    for name, values in series:
        good = values > 0
        ax.semilogy(lam[good], values[good], lw=1.2, label=f"n={name[3:]}")
    ax.set_xlabel(LAMBDA_LABEL)
    ax.set_ylabel(r"$(E_{2n+2}-E_{2n+1})/E_{\rm q}$")
    ax.legend(frameon=False, fontsize=8)


def _render_phase_space(meta, data, path, ax):
    x, p, values = phase_space_grid(meta, data, path)
    cmap, norm = colormap_for(values)
    mesh = ax.pcolormesh(x, p, values.T, cmap=cmap, norm=norm, shading="auto")
    ax.figure.colorbar(mesh, ax=ax, label=meta.get("kind", "value"))
    ax.set_xlabel(r"$X$")
    ax.set_ylabel(r"$P$")
    ax.set_aspect("equal")


def _scan_renderer(column, ylabel, logy=False):
    def inner(meta, data, path, ax):
        for frac, lam, values in scan_series(data, column, path):
            plot = ax.semilogy if logy else ax.plot
            plot(lam, values, lw=1.2, label=rf"$\epsilon/\Delta={frac:g}$")
        ax.set_xlabel(LAMBDA_LABEL)
        ax.set_ylabel(ylabel)
        ax.legend(frameon=False, fontsize=8)
    return inner


def _render_onset(meta, data, path, ax):
    series, ratios = onset_series(data, path)
    for target, x, y in series:
        ax.loglog(x, y, "o-", lw=1.2, label=f"S = {target:g}")
    ax.loglog(ratios, 0.5 * np.sqrt(ratios), "k:", lw=1.0,
              label=r"$\sqrt{\hbar\omega_0 E_{\rm q}}/2$")
    ax.loglog(ratios, ratios, "k--", lw=1.0, label=r"$\hbar\omega_0$")
    ax.set_xlabel(r"$\hbar\omega_0/\Delta$")
    ax.set_ylabel(r"$\lambda/\Delta$")
    ax.legend(frameon=False, fontsize=8)


def _figure_renderers():
    table = {}
    for panel in "abc":
        table[f"fig3{panel}"] = _render_levels
        table[f"fig5{panel}"] = _render_pairs
        table[f"fig6{panel}"] = _render_levels
        table[f"fig9{panel}"] = _scan_renderer("s_p", r"$s_p$")
        table[f"fig10{panel}"] = _scan_renderer("S", r"$S$")
    table["fig4a"] = _render_splitting_linear
    table["fig4b"] = _render_splitting_log
    table["fig7"] = _render_levels
    for panel in "abcdefgh":
        table[f"fig8{panel}"] = _render_phase_space
    table["fig11"] = _scan_renderer("K", r"$K/\hbar^2$", logy=True)
    table["fig12"] = _render_onset
    return table


RENDERERS = _figure_renderers()


def load_input(figure_id: str, path: str):
    """CSV by default; fig8 panels also accept the JSON phase-space format."""
    if path.endswith(".json"):
        with open(path) as fh:
            report = json.load(fh)
        if not {"x_grid", "p_grid", "values"} <= set(report):
            raise SchemaError(f"{path}: not a phase-space JSON report")
        x = np.asarray(report["x_grid"], dtype=float)
        p = np.asarray(report["p_grid"], dtype=float)
        values = np.asarray(report["values"], dtype=float)
        xx, pp = np.meshgrid(x, p, indexing="ij")
        data = {"X": xx.ravel(), "P": pp.ravel(), "value": values.ravel()}
        return {"kind": report.get("kind", "")}, data
    return load_csv(path)


def render(figure_id: str, input_path: str, output_path: str):
    """Render one figure panel; raises SchemaError on column mismatch."""
    if figure_id not in RENDERERS:
        raise SchemaError(f"unknown figure id {figure_id!r}")
    meta, data = load_input(figure_id, input_path)
    fig, ax = plt.subplots(figsize=(4.2, 3.4), dpi=150)
    try:
        RENDERERS[figure_id](meta, data, input_path, ax)
        ax.set_title(figure_id)
        fig.tight_layout()
        fig.savefig(output_path)
    finally:
        plt.close(fig)
    return output_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a uscsim figure panel")
    parser.add_argument("figure_id", help="e.g. fig3a, fig8f, fig12")
    parser.add_argument("input", help="CSV (or JSON for fig8) from the uscsim CLI")
    parser.add_argument("-o", "--output", default=None,
                        help="output image (default <figure_id>.png)")
    args = parser.parse_args(argv)
    out = args.output or f"{args.figure_id}.png"
    try:
        render(args.figure_id, args.input, out)
    except (SchemaError, OSError, json.JSONDecodeError) as err:
        sys.stderr.write(f"error: {err}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
