"""Matplotlib figure rendering for the CLI report path.

Figures are written to files next to the delimited output; nothing here is
interactive and the Agg backend is forced so the renderers work headless.
The CSV remains the canonical output, figures are a convenience view.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .params import flip_amplitude

__all__ = [
    "figure_simulation",
    "figure_scan",
    "figure_resonance",
    "figure_trajectory",
    "figure_elliptic",
    "save_figure",
]

_GRID_KW = {"alpha": 0.3}


def save_figure(fig, path, dpi: int = 150) -> None:
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def figure_simulation(t, p_flip, p_analytic, b_eff, model):
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.plot(t, p_flip, lw=1.0, label="numeric")
    if np.all(np.isfinite(p_analytic)):
        ax1.plot(t, p_analytic, "--", lw=1.0, label="rotating-field law")
    ax1.set_ylabel(r"$P_\downarrow$")
    ax1.legend(loc="upper right")
    ax1.grid(True, **_GRID_KW)
    ax1.set_title(
        f"g={model.particle.g:g}, eta={model.wave.eta:g}, "
        f"eps^2={model.wave.epsilon_sq:g}")
    for k, lbl in enumerate(("$B'_x$", "$B'_y$", "$B'_z$")):
        ax2.plot(t, b_eff[:, k], lw=0.8, label=lbl)
    ax2.set_xlabel(r"$t$  [$1/\omega_L$]")
    ax2.set_ylabel("effective field")
    ax2.legend(loc="upper right", ncol=3)
    ax2.grid(True, **_GRID_KW)
    fig.tight_layout()
    return fig


def figure_scan(records, g):
    etas = np.array([r.eta for r in records])
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    dense = np.linspace(etas.min(), etas.max(), 400)
    ax1.plot(dense, [flip_amplitude(x, g) for x in dense], "-", lw=1.0,
             color="0.6", label="analytic")
    ax1.plot(etas, [r.amplitude_numeric for r in records], "o", ms=4,
             label="numeric")
    ax1.set_xlabel(r"$\eta$")
    ax1.set_ylabel("flip amplitude")
    ax1.legend()
    ax1.grid(True, **_GRID_KW)
    ax2.plot(etas, [r.omega_s_analytic for r in records], "-", lw=1.0,
             color="0.6", label="analytic")
    ax2.plot(etas, [r.omega_s_numeric for r in records], "o", ms=4,
             label="numeric")
    ax2.set_xlabel(r"$\eta$")
    ax2.set_ylabel(r"$\omega_S / \omega_L$")
    ax2.legend()
    ax2.grid(True, **_GRID_KW)
    fig.suptitle(f"resonance scan, g={g:g}")
    fig.tight_layout()
    return fig


def figure_resonance(result):
    etas = np.array([e for e, _ in result.evaluations])
    amps = np.array([a for _, a in result.evaluations])
    order = np.argsort(etas)
    fig, ax = plt.subplots(figsize=(6, 4))
    dense = np.linspace(etas.min(), etas.max(), 400)
    ax.plot(dense, [flip_amplitude(x, result.g) for x in dense], "-",
            color="0.6", lw=1.0, label="analytic")
    ax.plot(etas[order], amps[order], "o", ms=4, label="search samples")
    ax.axvline(result.eta_peak, color="C3", lw=1.0,
               label=rf"$\eta_{{peak}}$ = {result.eta_peak:.4f}")
    ax.set_xlabel(r"$\eta$")
    ax.set_ylabel("flip amplitude")
    ax.set_title(f"resonance search, g={result.g:g}")
    ax.legend()
    ax.grid(True, **_GRID_KW)
    fig.tight_layout()
    return fig


def figure_trajectory(t, pos, vel):
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    axes[0].plot(pos[:, 0], pos[:, 1], lw=0.8)
    axes[0].set_xlabel("x")
    axes[0].set_ylabel("y")
    axes[0].set_title("transverse orbit")
    axes[0].set_aspect("equal", adjustable="datalim")
    axes[1].plot(t, pos[:, 2], lw=0.8)
    axes[1].set_xlabel(r"$t$  [$1/\omega_L$]")
    axes[1].set_ylabel("z")
    axes[1].set_title("longitudinal drift")
    for k, lbl in enumerate(("$v_x$", "$v_y$", "$v_z$")):
        axes[2].plot(t, vel[:, k], lw=0.8, label=lbl)
    axes[2].set_xlabel(r"$t$  [$1/\omega_L$]")
    axes[2].set_ylabel("velocity  [c]")
    axes[2].legend(ncol=3, fontsize=8)
    axes[2].set_title("velocity components")
    for ax in axes:
        ax.grid(True, **_GRID_KW)
    fig.tight_layout()
    return fig


def figure_elliptic(u, triple, m):
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(u, np.atleast_1d(triple.sn), label="sn")
    ax.plot(u, np.atleast_1d(triple.cn), label="cn")
    ax.plot(u, np.atleast_1d(triple.dn), label="dn")
    ax.plot(u, np.atleast_1d(triple.am), "--", label="am")
    ax.set_xlabel("u")
    ax.set_title(f"Jacobi functions, m = {m:g}")
    ax.legend(ncol=4)
    ax.grid(True, **_GRID_KW)
    fig.tight_layout()
    return fig
