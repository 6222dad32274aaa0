"""Figure builders: one deterministic layout per dataset kind.

Rendering is one-shot and headless (Agg backend); all styles are fixed so
the same CSV always produces the same figure geometry.  Files are written
atomically: a failure at any stage leaves no output behind.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .contract import ContractError, Dataset, parse_csv

KINDS = ("born-spectrum", "coefficients", "survival")

_CONTINUUM_STYLE = dict(color="#1f4e79", linestyle="-", linewidth=1.6)
_RESONANCE_STYLE = dict(color="#c23b22", linestyle=":", linewidth=2.0)
_ASYMPTOTE_STYLE = dict(color="#707070", linestyle="--", linewidth=1.0)


@dataclass(frozen=True)
class PlotJob:
    """One rendering request: input CSV, figure kind, output image."""

    input_path: str
    kind: str
    output_path: str
    dpi: int = 150

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind: {self.kind!r}")
        if self.dpi < 10:
            raise ValueError("dpi must be at least 10")


def _param_note(dataset: Dataset) -> Optional[str]:
    lam = dataset.metadata.get("lambda")
    a = dataset.metadata.get("a")
    if lam is None or a is None:
        return None
    return f"$\\lambda$ = {lam}, a = {a}"


def _born_spectrum_figure(dataset: Dataset):
    dataset.require("k", "density_continuum", "density_resonance")
    k = dataset.numeric("k")
    cont = dataset.numeric("density_continuum")
    reso = dataset.numeric("density_resonance")
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.plot(k, cont, label="continuum", **_CONTINUUM_STYLE)
    ax.plot(k, reso, label="resonance expansion", **_RESONANCE_STYLE)
    ax.set_xlabel("k")
    ax.set_ylabel(r"$|C(k)|^2$")
    title = "Born-rule momentum density"
    note = _param_note(dataset)
    ax.set_title(f"{title} ({note})" if note else title)
    ax.legend(loc="upper right")
    ax.margins(x=0.0)
    return fig


def _coefficients_figure(dataset: Dataset):
    dataset.require("n", "log10_product")
    n = dataset.numeric("n")
    log_products = dataset.numeric("log10_product")
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.axhline(0.0, color="#b0b0b0", linewidth=0.8)
    ax.vlines(n, log_products, 0.0, color="#1f4e79", linewidth=1.2)
    ax.plot(n, log_products, "o", color="#1f4e79", markersize=6.0)
    ax.set_xlabel("n")
    ax.set_ylabel(r"$\log_{10}\,|C_n|^2 I_n$")
    title = "Resonance coefficient products"
    note = _param_note(dataset)
    ax.set_title(f"{title} ({note})" if note else title)
    ax.set_xticks(np.arange(int(n.min()), int(n.max()) + 1))
    return fig


def _regime_segments(tags):
    """Consecutive runs of equal tags as (start, end_exclusive, tag)."""
    segments = []
    start = 0
    for i in range(1, len(tags) + 1):
        if i == len(tags) or tags[i] != tags[start]:
            segments.append((start, i, tags[start]))
            start = i
    return segments


def _survival_figure(dataset: Dataset):
    dataset.require("t", "S_resonance", "regime_tag")
    t = dataset.numeric("t")
    s = dataset.numeric("S_resonance")
    tags = dataset.strings("regime_tag")
    keep = np.isfinite(t) & np.isfinite(s) & (t > 0) & (s > 0)
    if not np.any(keep):
        raise ContractError("no positive survival values to plot")
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.loglog(t[keep], s[keep], label="survival S(t)", **_CONTINUUM_STYLE)
    if "S_asymptotic" in dataset.columns:
        asym = dataset.numeric("S_asymptotic")
        ok = keep & np.isfinite(asym) & (asym > 0)
        if np.any(ok):
            ax.loglog(
                t[ok], asym[ok], label="power-law asymptote", **_ASYMPTOTE_STYLE
            )
    for start, end, tag in _regime_segments(tags):
        if start > 0:
            boundary = math.sqrt(t[start - 1] * t[start])
            ax.axvline(boundary, color="#b0b0b0", linewidth=0.8, linestyle="--")
        center = math.sqrt(t[start] * t[end - 1])
        ax.text(
            center,
            0.94,
            tag,
            transform=ax.get_xaxis_transform(),
            ha="center",
            fontsize=9,
            color="#404040",
        )
    ax.set_xlabel("t")
    ax.set_ylabel("S(t)")
    title = "Survival probability"
    note = _param_note(dataset)
    ax.set_title(f"{title} ({note})" if note else title)
    ax.legend(loc="lower left")
    return fig


_BUILDERS = {
    "born-spectrum": _born_spectrum_figure,
    "coefficients": _coefficients_figure,
    "survival": _survival_figure,
}


def build_figure(dataset: Dataset, kind: str):
    """Figure for an already-parsed dataset; raises on column mismatch."""
    if kind not in _BUILDERS:
        raise ValueError(f"unknown figure kind: {kind!r}")
    return _BUILDERS[kind](dataset)


def render(job: PlotJob) -> None:
    """Parse, build, and atomically write the figure for one job."""
    dataset = parse_csv(job.input_path)
    fig = build_figure(dataset, job.kind)
    try:
        out_dir = os.path.dirname(os.path.abspath(job.output_path))
        suffix = os.path.splitext(job.output_path)[1]
        fd, tmp = tempfile.mkstemp(dir=out_dir, suffix=suffix)
        os.close(fd)
        try:
            fig.savefig(tmp, dpi=job.dpi)
            os.replace(tmp, job.output_path)
        except BaseException:
            os.unlink(tmp)
            raise
    finally:
        plt.close(fig)
