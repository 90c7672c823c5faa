"""Periodic Fourier-collocation grid and nonlocal operators.

All fields live on a uniform grid of N points on (-l, l] and are stored by
their nodal values.  Differentiation and the smoothing operators Q, L, N, J
act diagonally on the discrete Fourier coefficients:

    Q: 1/(1+k^2)     (Helmholtz inverse, (I - d^2/dx^2)^{-1})
    L: k^2/(1+k^2)   (= I - Q)
    N: ik/(1+k^2)    (= d/dx Q)
    J: 1+k^2         (= Q^{-1})

``helmholtz_kernel`` applies Q a second, independent way: convolution with
the periodized Green kernel cosh(l-|x|)/(2 sinh l), with the kernel's Fourier
coefficients obtained by Gauss-Legendre quadrature split at the |x|=0 corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform periodic collocation grid on (-l, l]."""

    N: int
    l: float
    nodes: np.ndarray = field(repr=False)
    wavenumbers: np.ndarray = field(repr=False)

    @property
    def dx(self) -> float:
        return 2.0 * self.l / self.N


def make_grid(N: int, l: float) -> Grid:
    """Build the N-point grid x_j = -l + j*(2l/N) with wavenumbers m*pi/l."""
    if N % 2 != 0:
        raise ValueError("N must be even")
    if N < 8:
        raise ValueError("N must be at least 8")
    if l <= 0:
        raise ValueError("half-period l must be positive")
    nodes = -l + np.arange(N) * (2.0 * l / N)
    # integer mode ladder in FFT order: 0, 1, ..., N/2-1, -N/2, ..., -1
    modes = np.fft.fftfreq(N, d=1.0 / N)
    wavenumbers = modes * (np.pi / l)
    nodes.setflags(write=False)
    wavenumbers.setflags(write=False)
    return Grid(N=N, l=l, nodes=nodes, wavenumbers=wavenumbers)


@dataclass(frozen=True)
class Field:
    """Real periodic function sampled at the grid nodes."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.N,):
            raise ValueError("values must have one entry per grid node")
        object.__setattr__(self, "values", v)

    def spectrum(self) -> np.ndarray:
        return np.fft.fft(self.values)

    def norm_sup(self) -> float:
        return float(np.max(np.abs(self.values)))


def field_from_function(grid: Grid, fn) -> Field:
    return Field(grid, fn(grid.nodes))


def _apply_symbol(f: Field, symbol: np.ndarray) -> Field:
    return Field(f.grid, np.fft.ifft(symbol * np.fft.fft(f.values)).real)


def derivative(f: Field, order: int = 1) -> Field:
    """Spectral derivative; odd orders zero the Nyquist mode."""
    if order <= 0:
        raise ValueError("derivative order must be >= 1")
    k = f.grid.wavenumbers
    symbol = (1j * k) ** order
    if order % 2 == 1:
        symbol = symbol.copy()
        symbol[f.grid.N // 2] = 0.0
    return _apply_symbol(f, symbol)


def apply_Q(f: Field) -> Field:
    k2 = f.grid.wavenumbers ** 2
    return _apply_symbol(f, 1.0 / (1.0 + k2))


def apply_L(f: Field) -> Field:
    k2 = f.grid.wavenumbers ** 2
    return _apply_symbol(f, k2 / (1.0 + k2))


def apply_N(f: Field) -> Field:
    k = f.grid.wavenumbers
    symbol = (1j * k) / (1.0 + k ** 2)
    symbol = symbol.copy()
    symbol[f.grid.N // 2] = 0.0
    return _apply_symbol(f, symbol)


def apply_J(f: Field) -> Field:
    k2 = f.grid.wavenumbers ** 2
    return _apply_symbol(f, 1.0 + k2)


def _kernel_coefficients(grid: Grid) -> np.ndarray:
    """Fourier coefficients of cosh(l-|x|)/(2 sinh l) by panel quadrature.

    The kernel has a corner at x=0, so the integral over (-l, l) is split
    there and each half is integrated by composite Gauss-Legendre, with
    enough panels to resolve oscillations up to the grid Nyquist mode.
    """
    l, k = grid.l, grid.wavenumbers
    kmax = float(np.max(np.abs(k)))
    panels = max(8, int(np.ceil(kmax * l / 4.0)))
    q_nodes, q_weights = np.polynomial.legendre.leggauss(12)
    edges = np.linspace(0.0, l, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    s = (mid[:, None] + half[:, None] * q_nodes[None, :]).ravel()
    w = (half[:, None] * q_weights[None, :]).ravel()
    g = np.cosh(l - s) / (2.0 * np.sinh(l))
    # kernel is even: int_{-l}^{l} G e^{-iks} ds = 2 int_0^l G cos(ks) ds
    return 2.0 * np.cos(np.outer(k, s)) @ (w * g)


_KERNEL_CACHE: dict[tuple[int, float], np.ndarray] = {}


def helmholtz_kernel(f: Field) -> Field:
    """Apply Q by periodic convolution with the Green kernel."""
    key = (f.grid.N, f.grid.l)
    ghat = _KERNEL_CACHE.get(key)
    if ghat is None:
        ghat = _kernel_coefficients(f.grid)
        _KERNEL_CACHE[key] = ghat
    # convolution theorem for the trigonometric interpolant of f
    return _apply_symbol(f, ghat)


def commutator_LN(h: Field) -> Field:
    """[L, Nh]h = L((Nh)*h) - (Nh)*(Lh) with pointwise products."""
    nh = apply_N(h)
    return Field(
        h.grid,
        apply_L(Field(h.grid, nh.values * h.values)).values
        - nh.values * apply_L(h).values,
    )


def translate(f: Field, a: float) -> Field:
    """Spectral phase-shift translation: returns x -> f(x - a)."""
    k = f.grid.wavenumbers
    return _apply_symbol(f, np.exp(-1j * k * a))


def inner(f: Field, g: Field) -> float:
    """Discrete L2 inner product with uniform weight 2l/N."""
    return float(np.dot(f.values, g.values)) * f.grid.dx


def dealias_two_thirds(f: Field) -> Field:
    """Zero the top third of modes (2/3 rule for quadratic products)."""
    modes = np.fft.fftfreq(f.grid.N, d=1.0 / f.grid.N)
    mask = np.abs(modes) <= f.grid.N / 3.0
    return _apply_symbol(f, mask.astype(float))
