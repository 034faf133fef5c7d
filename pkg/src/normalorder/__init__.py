"""Exact boson normal ordering for operators linear in one boson."""

from .boson import NormalForm, Shape, Side
from .fps import Series
from .flow import BiSeries, NormalExponential, normal_exponential
from .sheffer import Poly, ShefferPair, catalog

__all__ = [
    "BiSeries",
    "NormalExponential",
    "NormalForm",
    "Poly",
    "Series",
    "ShefferPair",
    "Shape",
    "Side",
    "catalog",
    "normal_exponential",
]
