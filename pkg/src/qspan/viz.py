"""
Figure rendering for reports: fiber-matrix heatmaps and dimension charts,
written as PNG files next to the machine-readable output.
"""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy

from .exactnum import QMatrix


def _as_float_array(m: QMatrix):
    return numpy.array([[float(m[i, j]) for j in range(m.cols)]
                        for i in range(m.rows)])


def render_matrix(m: QMatrix, path: str, title: str = ""):
    "Heatmap of a matrix; small matrices get exact cell annotations."
    a = _as_float_array(m)
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(a, cmap="Blues", interpolation="nearest")
    if m.rows <= 12 and m.cols <= 12:
        from .exactnum import rat_str
        for i in range(m.rows):
            for j in range(m.cols):
                if m[i, j]:
                    ax.text(j, i, rat_str(m[i, j]), ha="center", va="center",
                            fontsize=8)
    ax.set_title(title)
    ax.set_xlabel("source")
    ax.set_ylabel("target")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_bar(values, labels, path: str, title: str = "", ylabel: str = ""):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(len(values)), values, color="#4878a8")
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_hecke_figures(report, ctx, outdir: str):
    "Generator fiber matrices, relation outcomes, and orbit sizes."
    os.makedirs(outdir, exist_ok=True)
    for d in range(1, ctx.rank + 1):
        m = ctx.sigma(d).fiber_matrix()
        render_matrix(m, os.path.join(outdir, "sigma%d_fiber.png" % d),
                      "sigma_%d fiber matrix (q=%d)" % (d, ctx.q))
    names = [r.name for r in report.relations]
    vals = [int(r.matrix_ok) + int(r.span_iso_ok) for r in report.relations]
    render_bar(vals, names, os.path.join(outdir, "relations.png"),
               "relation checks (2 = matrix + span, 1 = matrix only)",
               "checks passed")


def render_main_claim_figures(report, outdir: str):
    os.makedirs(outdir, exist_ok=True)
    labels = ["(%d,%d)" % (i, j) for (i, j, _, _, _) in report.dim_checks]
    dims = [d for (_, _, d, _, _) in report.dim_checks]
    render_bar(dims, labels, os.path.join(outdir, "hom_dims.png"),
               "hom-space dimensions", "dim")
