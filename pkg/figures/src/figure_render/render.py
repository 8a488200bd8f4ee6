"""Figure layouts.

Three figure ids are recognized:

* ``fig1``: interaction energy vs separation, one curve per coupling,
  legend ordered by coupling, with an inset repeating the chain curves
  at small separation.
* ``fig2``: displacement factor eta vs offset c/a, one curve per
  separation ratio beta; a warning annotation is drawn if any curve's
  eta at c=0 deviates from 1.
* ``fig4``: exact energy (dashed) overlaid with the pairwise sum vs
  separation.

Rendering is deterministic: fixed style, no timestamps, and all values
come verbatim from the CSV.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .csvdata import CsvError

_STYLE = {
    "figure.figsize": (6.0, 4.2),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}

ETA_ZERO_TOL = 1e-6


def _group(table, key_col, x_col, y_col):
    """Rows grouped by a key column -> sorted [(key, xs, ys)]."""
    table.require([key_col, x_col, y_col])
    keys = table.column(key_col)
    xs = table.column(x_col)
    ys = table.column(y_col)
    series = {}
    for k, x, y in zip(keys, xs, ys):
        series.setdefault(k, []).append((x, y))
    out = []
    for k in sorted(series):
        pts = sorted(series[k])
        out.append((k, [p[0] for p in pts], [p[1] for p in pts]))
    return out


def render_fig1(tables, out_path):
    main = tables[0]
    curves = _group(main, "g_over_a", "b_over_a", "energy")
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for g, xs, ys in curves:
            ax.plot(xs, ys, label="g/a = %g" % g)
        ax.set_xlabel("b / a")
        ax.set_ylabel("energy per cell")
        ax.set_title("Interaction energy of two parallel chains")
        ax.legend()
        # inset: the short-separation end of the same chain curves
        inset_src = tables[1] if len(tables) > 1 else main
        inset_curves = _group(inset_src, "g_over_a", "b_over_a", "energy")
        axin = ax.inset_axes([0.45, 0.12, 0.5, 0.45])
        for g, xs, ys in inset_curves:
            n = max(2, len(xs) // 3)
            axin.plot(xs[:n], ys[:n])
        axin.set_xlabel("b / a", fontsize=8)
        axin.tick_params(labelsize=7)
        fig.savefig(out_path)
        plt.close(fig)
    return []


def render_fig2(tables, out_path):
    table = tables[0]
    curves = _group(table, "beta", "c_over_a", "eta")
    warnings = []
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for beta, xs, ys in curves:
            ax.plot(xs, ys, label="beta = %g" % beta)
            at0 = [y for x, y in zip(xs, ys) if x == 0.0]
            if at0 and abs(at0[0] - 1.0) > ETA_ZERO_TOL:
                warnings.append(
                    "beta=%g: eta(0) = %.9g deviates from 1" % (beta, at0[0])
                )
        ax.set_xlabel("c / a")
        ax.set_ylabel("eta")
        ax.set_title("Displacement dependence of the interaction energy")
        ax.legend()
        if warnings:
            ax.annotate(
                "WARNING: " + "; ".join(warnings),
                xy=(0.02, 0.02),
                xycoords="axes fraction",
                fontsize=8,
                color="red",
            )
        fig.savefig(out_path)
        plt.close(fig)
    return warnings


def render_fig4(tables, out_path):
    table = tables[0]
    table.require(["b_over_a", "energy_exact", "energy_pairwise"])
    xs = table.column("b_over_a")
    exact = table.column("energy_exact")
    pair = table.column("energy_pairwise")
    pts = sorted(zip(xs, exact, pair))
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            "k--",
            label="exact",
        )
        ax.plot(
            [p[0] for p in pts],
            [p[2] for p in pts],
            "b-",
            label="pairwise sum",
        )
        ax.set_xlabel("b / a")
        ax.set_ylabel("energy per cell")
        ax.set_title("Exact energy vs pairwise summation")
        ax.legend()
        fig.savefig(out_path)
        plt.close(fig)
    return []


FIGURES = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig4": render_fig4,
}


def render_figure(fig_id, tables, out_path):
    """Dispatch on figure id; returns a list of warning strings."""
    if fig_id not in FIGURES:
        raise CsvError(
            "unknown figure id %r (know: %s)" % (fig_id, ", ".join(sorted(FIGURES)))
        )
    if not tables:
        raise CsvError("no input tables")
    return FIGURES[fig_id](tables, out_path)
