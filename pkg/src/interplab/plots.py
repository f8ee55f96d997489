"""Matplotlib renderings of the grid dumps, written next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_DPI = 150


def _save(fig, path: str | Path) -> str:
    path = Path(path)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def render_lebesgue(xs, values, path, nodes=None, bound=None) -> str:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(xs, values, lw=0.8, color="C0")
    if bound is not None:
        ax.axhline(bound, color="C3", ls="--", lw=1.0, label=f"bound {bound:.4g}")
        ax.legend(loc="upper center")
    if nodes is not None and len(nodes) <= 64:
        ax.plot(nodes, np.ones(len(nodes)), "k.", ms=3)
    ax.set_xlabel("x")
    ax.set_ylabel("lebesgue function")
    return _save(fig, path)


def render_profile(xs, values, path, ylabel, reference=None) -> str:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(xs, values, lw=1.0, color="C0", label="measured")
    if reference is not None:
        rx, rv, rlabel = reference
        ax.plot(rx, rv, lw=1.0, ls="--", color="C3", label=rlabel)
    ax.set_xlabel("x")
    ax.set_ylabel(ylabel)
    ax.legend()
    return _save(fig, path)


def render_harmonic(report: dict, path) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    names = ["lower", "upper", "side"]
    masses = [report["lower_mass"], report["upper_mass"], report["side_mass"]]
    ax.bar(names, masses, color=["C0", "C1", "C2"])
    ax.set_yscale("log")
    ax.set_ylabel("exit mass")
    ax.set_title(f"mass sum = {report['mass_sum']:.9f}")
    return _save(fig, path)


def render_trace(trace, path) -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.arange(len(trace)), trace, drawstyle="steps-post")
    ax.set_xlabel("accepted step")
    ax.set_ylabel("objective")
    return _save(fig, path)


def render_trig_trials(records: list[dict], path) -> str:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    idx = [r["seed"] for r in records]
    ax1.plot(idx, [r["sup"] for r in records], ".", ms=4)
    ax1.axhline(2.0, color="C3", ls="--")
    ax1.set_xlabel("trial")
    ax1.set_ylabel("sup quantity")
    ax2.plot(idx, [r["integral"] for r in records], ".", ms=4)
    ax2.axhline(8.0, color="C3", ls="--")
    ax2.set_xlabel("trial")
    ax2.set_ylabel("integral quantity")
    return _save(fig, path)
