"""Smooth compactly supported test functions, quadrature and partial Fourier transforms."""

from .expr import (
    Abs2, AbsPow, BumpPoly, Compose, Conj, Const, Coord, Integral, LogAbs, Prod, Recip, Sign, SmoothFn,
    Sum, add, bump, const, coord, mul, pullback, tensor, tensor_bump,
)
from .intervals import FULL, IntervalSet, box, full_support
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate, sup_norm
from .fourier import (
    DUAL_IDENTITY, GridFn, dual_inv, dual_mul, fourier_2leg, fourier_at, fourier_bracket, inverse_fourier,
    partial_fourier,
)
