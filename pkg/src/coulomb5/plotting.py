"""Figures written next to the CLI tables (Agg backend, no timestamps)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["axes.grid"] = True
plt.rcParams["figure.autolayout"] = True
plt.rcParams["font.size"] = 10.0
plt.rcParams["legend.fontsize"] = "small"

# keep PNGs reproducible
_SAVE_META = {"Software": None}


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=120, metadata=_SAVE_META)
    plt.close(fig)
    return path


def radial_figure(rows: list[dict], path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.4, 6.0), sharex=True)
    for lam in sorted({r["lambda"] for r in rows}):
        sub = [r for r in rows if r["lambda"] == lam]
        r = np.array([s["r"] for s in sub])
        ax1.plot(r, r**2 * np.array([s["R"] for s in sub]), label=rf"$\lambda={lam}$")
        ax1.plot(r, r**2 * np.array([s["R_asymptotic"] for s in sub]), "k:", lw=0.8)
        ax2.semilogy(r, r**2 * np.array([s["abs_diff"] for s in sub]) / 2 + 1e-300, label=rf"$\lambda={lam}$")
    ax1.set_ylabel(r"$r^2 R_{k\lambda}$")
    ax1.legend()
    ax2.set_xlabel(r"$r$")
    ax2.set_ylabel(r"$r^2|R - R_{\rm asym}|/2$")
    return _save(fig, path)


def xsec_figure(rows: list[dict], path: Path) -> Path:
    th = np.array([r["theta"] for r in rows])
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.4, 6.0), sharex=True)
    ax1.semilogy(th, [r["xsec_printed"] for r in rows], label=r"$d\sigma/d\Omega$")
    ax1.semilogy(th, [r["abs_f_sq"] for r in rows], "--", label=r"$|f(\theta)|^2$ (closed form)")
    ax1.legend()
    ax2.plot(th, [r["ratio"] for r in rows], label="ratio")
    ax2.plot(th, np.sin(th / 2) ** 4, "k:", lw=0.8, label=r"$\sin^4(\theta/2)$")
    ax2.set_xlabel(r"$\theta$")
    ax2.legend()
    return _save(fig, path)


def field_figure(rows: list[dict], path: Path) -> Path:
    r = np.array([row["r"] for row in rows])
    th = np.array([row["theta"] for row in rows])
    val = np.array([row["abs_psi_sq"] for row in rows])
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    sc = ax.scatter(r * np.cos(th), r * np.sin(th), c=val, s=12, cmap="viridis")
    fig.colorbar(sc, ax=ax, label=r"$|\psi|^2$")
    ax.set_xlabel(r"$x_0$")
    ax.set_ylabel(r"$\rho$")
    ax.set_aspect("equal")
    return _save(fig, path)


def residual_figure(rows: list[dict], key: str, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    vals = np.array([row[key] for row in rows], dtype=float)
    ax.semilogy(np.arange(len(vals)), np.maximum(vals, 1e-300), "o", ms=3)
    ax.set_xlabel("sample")
    ax.set_ylabel(key)
    return _save(fig, path)
