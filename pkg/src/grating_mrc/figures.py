"""Figure rendering for the CLI report paths.

Each ``render_*`` helper writes one PNG next to the delimited output it
illustrates.  matplotlib is imported lazily with the Agg backend so that
library users and headless runs never pay for (or require) a display.
"""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_table_figure(rows: list[dict], path) -> None:
    """Computed vs reference residuals for the twelve benchmark runs."""
    plt = _pyplot()
    labels = [f"{r['profile']} {r['angle_name']}" for r in rows]
    computed = [r["r_min"] for r in rows]
    reference = [r["paper_r_min"] for r in rows]
    pos = np.arange(len(rows))

    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    ax.bar(pos - 0.2, reference, width=0.4, label="reference", color="#888888")
    ax.bar(pos + 0.2, computed, width=0.4, label="computed", color="#1f77b4")
    ax.set_yscale("log")
    ax.set_xticks(pos)
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("boundary residual $r_{min}$")
    ax.legend(frameon=False)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_field_figure(xs, ys, scattered, total, boundary_xy, path) -> None:
    """|v| and |u| heatmaps over the sampling grid (NaN below the boundary)."""
    plt = _pyplot()
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.6), sharey=True)
    for ax, grid, title in (
        (axes[0], scattered, "|v| scattered"),
        (axes[1], total, "|u| total"),
    ):
        mesh = ax.pcolormesh(xs, ys, grid, shading="nearest", cmap="viridis")
        ax.plot(boundary_xy[:, 0], boundary_xy[:, 1], color="white", lw=1.0)
        ax.set_title(title, fontsize=10)
        ax.set_xlabel("x")
        fig.colorbar(mesh, ax=ax)
    axes[0].set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_efficiencies_figure(efficiencies: dict[int, float], balance: float, path) -> None:
    """Per-order diffraction efficiencies with the energy-balance total."""
    plt = _pyplot()
    orders = sorted(efficiencies)
    values = [efficiencies[j] for j in orders]

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.bar([str(j) for j in orders], values, color="#1f77b4")
    ax.axhline(1.0, color="#888888", lw=0.8, ls="--")
    ax.set_xlabel("diffraction order j")
    ax.set_ylabel("efficiency")
    ax.set_title(f"energy balance = {balance:.6f}", fontsize=10)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_solve_figure(solution, path) -> None:
    """Singular-value spectrum of the final pass plus the residual history."""
    plt = _pyplot()
    fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.4))

    sv = np.asarray(solution.singular_values, dtype=float)
    index = np.arange(1, sv.size + 1)
    axes[0].semilogy(index, sv, ".-", ms=4)
    if solution.n_discarded:
        axes[0].semilogy(index[-solution.n_discarded:], sv[-solution.n_discarded:],
                         "x", color="#cc3333", label="discarded")
        axes[0].legend(frameon=False, fontsize=8)
    axes[0].set_xlabel("index")
    axes[0].set_ylabel("singular value")
    axes[0].set_title("final design matrix", fontsize=10)

    passes = np.arange(1, len(solution.history) + 1)
    residuals = [rec.r_min for rec in solution.history]
    axes[1].semilogy(passes, residuals, "o-")
    axes[1].set_xticks(passes)
    axes[1].set_xlabel("pass")
    axes[1].set_ylabel("$r_{min}$")
    axes[1].set_title("refinement history", fontsize=10)

    for ax in axes:
        ax.spines["right"].set_visible(False)
        ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
