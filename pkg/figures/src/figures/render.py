"""
Render simulator CSV outputs in the styles used throughout this study:
pair-map heatmaps on a fixed [0, 1] scale, sweep curves with the gray
reservoir reference, spectra with optional mode-frequency markers, and
decibel spectra.
"""

from dataclasses import dataclass
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .io import REFERENCE_INDEX, SchemaError, read_map, read_series, read_spectrum

KINDS = ("heatmap", "sweep", "spectrum", "spectrum-db")

# drop the library version stamp so identical inputs give identical bytes
_PNG_METADATA = {"Software": None}


@dataclass(frozen=True)
class FigureSpec:
    """One rendering job: input file, figure kind, output file, decorations."""

    in_path: str
    kind: str
    out_path: str
    xlabel: str = ""
    ylabel: str = ""
    markers: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "markers", tuple(float(m) for m in self.markers))


def to_decibels(values) -> np.ndarray:
    """Exact 10*log10 of positive linear values."""
    values = np.asarray(values, dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise SchemaError("decibel transform needs finite positive values")
    return 10.0 * np.log10(values)


def _new_axes():
    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=150)
    return fig, ax


def _save(fig, out_path: str) -> str:
    path = Path(out_path)
    fig.savefig(path, format="png", metadata=_PNG_METADATA, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def _render_heatmap(spec: FigureSpec) -> str:
    data = read_map(spec.in_path)
    n = data.values.shape[0]
    index = "k" if data.basis == "normal-mode" else "j"
    fig, ax = _new_axes()
    image = ax.imshow(
        data.values,
        origin="lower",
        vmin=0.0,
        vmax=1.0,
        cmap="viridis",
        extent=(0.5, n + 0.5, 0.5, n + 0.5),
        interpolation="nearest",
    )
    fig.colorbar(image, ax=ax, label="normalized log-negativity")
    ax.set_xlabel(spec.xlabel or f"${index}_{{II}}$")
    ax.set_ylabel(spec.ylabel or f"${index}_{{I}}$")
    ticks = range(1, n + 1, max(1, n // 10))
    ax.set_xticks(list(ticks))
    ax.set_yticks(list(ticks))
    return _save(fig, spec.out_path)


def _render_sweep(spec: FigureSpec) -> str:
    data = read_series(spec.in_path)
    fig, ax = _new_axes()
    positive = np.all(data.x > 0.0)
    if data.x_name == "axis_value" and positive and np.max(data.x) / np.min(data.x) >= 20.0:
        ax.set_xscale("log")
    for row, index in enumerate(data.indices):
        if index == REFERENCE_INDEX:
            ax.plot(data.x, data.curves[row], color="0.6", linewidth=3.0, label="reference")
        else:
            ax.plot(data.x, data.curves[row], marker="o", markersize=3.5, label=f"pair {index}")
    ax.set_xlabel(spec.xlabel or data.x_name.replace("_", " "))
    ax.set_ylabel(spec.ylabel or "normalized log-negativity")
    if len(data.indices) <= 11:
        ax.legend(fontsize=8, ncols=2)
    return _save(fig, spec.out_path)


def _render_spectrum(spec: FigureSpec, decibel: bool) -> str:
    data = read_spectrum(spec.in_path)
    fig, ax = _new_axes()
    if decibel:
        ax.plot(data.omega, to_decibels(data.s), "b--", label=r"$10\,\log_{10} S(\omega)$")
        ax.plot(data.omega, to_decibels(data.t), "r-.", label=r"$10\,\log_{10} T(\omega)$")
        ax.axhline(0.0, color="0.7", linewidth=0.8)
        ax.set_ylabel(spec.ylabel or "dB")
    else:
        ax.plot(data.omega, data.en, "k-", label=r"$E_N(\omega)$")
        ax.plot(data.omega, data.s, "b--", label=r"$S(\omega)$")
        ax.plot(data.omega, data.t, "r-.", label=r"$T(\omega)$")
        ax.axhline(1.0, color="0.7", linewidth=0.8)
        ax.set_ylabel(spec.ylabel or "spectrum")
    for freq in spec.markers:
        ax.axvline(freq, color="0.4", linewidth=0.8, linestyle=":")
    ax.set_xlabel(spec.xlabel or r"$\omega$")
    ax.legend(fontsize=8)
    return _save(fig, spec.out_path)


def render(spec: FigureSpec) -> str:
    """Render one figure and return the written path."""
    if spec.kind == "heatmap":
        return _render_heatmap(spec)
    if spec.kind == "sweep":
        return _render_sweep(spec)
    return _render_spectrum(spec, decibel=spec.kind == "spectrum-db")
