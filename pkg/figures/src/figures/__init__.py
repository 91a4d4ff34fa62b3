"""Batch renderers for the cavity-array simulator's CSV outputs."""

from .io import MapData, SchemaError, SeriesData, SpectrumData, read_map, read_series, read_spectrum
from .render import KINDS, FigureSpec, render, to_decibels

__all__ = [
    "FigureSpec",
    "KINDS",
    "MapData",
    "SchemaError",
    "SeriesData",
    "SpectrumData",
    "read_map",
    "read_series",
    "read_spectrum",
    "render",
    "to_decibels",
]
