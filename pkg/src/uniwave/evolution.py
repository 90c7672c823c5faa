"""Pseudospectral time integration of the unidirectional wave equation.

Used to verify that computed profiles translate rigidly at their wave speed,
that the linear dispersion relation is reproduced, and that small-amplitude
periodic traveling-wave branches bifurcate from the predicted speeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import spectral
from .spectral import Field, Grid, apply_N, apply_Q, commutator_LN, make_grid


class BlowupDetected(RuntimeError):
    pass


@dataclass(frozen=True)
class EvolutionConfig:
    grid: Grid
    T: float
    dt: float | None = None  # None: CFL-style automatic step
    dealias: bool = True
    form: str = "nonconservative"  # or "conservative"

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError("final time T must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.form not in ("nonconservative", "conservative"):
            raise ValueError("form must be nonconservative or conservative")


def rhs(h: Field, form: str = "nonconservative", dealias: bool = True) -> Field:
    """Right-hand side h_t of the evolution equation."""
    grid = h.grid
    hv = h.values

    def clean(values: np.ndarray) -> np.ndarray:
        f = Field(grid, values)
        return spectral.dealias_two_thirds(f).values if dealias else values

    if form == "nonconservative":
        hx = spectral.derivative(h, 1).values
        quad = clean(3.0 * hv * hx) - clean_commutator(h, dealias)
        return Field(grid, -0.5 * (quad - apply_N(h).values - hx))
    # conservative: perfect x-derivative of the flux
    nh = apply_N(h).values
    flux = (
        clean(0.75 * hv ** 2)
        + 0.5 * apply_N(Field(grid, clean(hv * nh))).values
        - clean(0.25 * nh ** 2)
        - 0.5 * apply_Q(h).values
        - 0.5 * hv
    )
    return Field(grid, -spectral.derivative(Field(grid, flux), 1).values)


def clean_commutator(h: Field, dealias: bool) -> np.ndarray:
    """Commutator term with the quadratic products optionally dealiased."""
    grid = h.grid
    nh = apply_N(h).values
    lh = spectral.apply_L(h).values
    prod1 = Field(grid, nh * h.values)
    prod2 = nh * lh
    if dealias:
        prod1 = spectral.dealias_two_thirds(prod1)
        prod2 = spectral.dealias_two_thirds(Field(grid, prod2)).values
    return spectral.apply_L(prod1).values - prod2


def auto_timestep(h0: Field) -> float:
    return 0.5 * h0.grid.dx / (1.0 + float(np.max(np.abs(h0.values))))


def evolve(h0: Field, config: EvolutionConfig) -> Field:
    """Classical RK4 with spectral right-hand side; returns h(., T)."""
    dt = config.dt if config.dt is not None else auto_timestep(h0)
    steps = max(1, int(np.ceil(config.T / dt)))
    dt = config.T / steps
    grid = h0.grid
    v = h0.values.copy()

    def f(values: np.ndarray) -> np.ndarray:
        return rhs(Field(grid, values), config.form, config.dealias).values

    for _ in range(steps):
        k1 = f(v)
        k2 = f(v + 0.5 * dt * k1)
        k3 = f(v + 0.5 * dt * k2)
        k4 = f(v + dt * k3)
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if np.max(np.abs(v)) > 1e6:
            raise BlowupDetected("sup-norm exceeded 1e6 during evolution")
    return Field(grid, v)


def dispersion_speed(k: int) -> float:
    """Phase speed of the k-th linear cosine mode."""
    if k < 1:
        raise ValueError("mode index k must be >= 1")
    return -1.0 / (2.0 * (1.0 + k * k)) - 0.5


def _steady_residual(c: float, phi: Field) -> Field:
    """Steady traveling-wave functional F[c, phi] (odd for even phi)."""
    grid = phi.grid
    pv = phi.values
    px = spectral.derivative(phi, 1).values
    comm = commutator_LN(phi).values
    out = 0.5 * (3.0 * pv * px - comm - apply_N(phi).values - px) - c * px
    return Field(grid, out)


def small_amplitude_branch(
    m: int,
    k: int,
    s: float,
    n_modes: int = 64,
    grid_N: int = 256,
    max_iter: int = 50,
    tol: float = 1e-12,
):
    """Newton continuation of the m-fold periodic branch at mode m*k.

    Solves F[c, phi] = 0 in the even cosine subspace with m-fold symmetry,
    normalized so the cos(m*k*x) coefficient equals s, with the speed c as
    the extra unknown.  Returns (c, phi) with c -> c_{mk} as s -> 0.
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be >= 1")
    if abs(s) > 0.05:
        raise ValueError("amplitude parameter s too large (|s| <= 0.05)")
    grid = make_grid(grid_N, np.pi)
    x = grid.nodes
    modes = m * np.arange(1, n_modes + 1)
    modes = modes[modes < grid_N // 2]
    ck = dispersion_speed(m * k)
    cos_mat = np.cos(np.outer(modes, x))  # (n_modes, N)
    sin_mat = np.sin(np.outer(modes, x))
    norm_row = int(np.nonzero(modes == m * k)[0][0])

    def residual(unknowns: np.ndarray) -> np.ndarray:
        c, coeffs = unknowns[0], unknowns[1:]
        phi = Field(grid, coeffs @ cos_mat)
        F = _steady_residual(c, phi).values
        # project onto the sine modes of the symmetry subspace
        proj = (sin_mat @ F) * (2.0 / grid_N)
        return np.append(proj, coeffs[norm_row] - s)

    unknowns = np.zeros(1 + len(modes))
    unknowns[0] = ck
    unknowns[1 + norm_row] = s
    for _ in range(max_iter):
        r = residual(unknowns)
        if np.max(np.abs(r)) < tol:
            break
        J = np.empty((len(r), len(unknowns)))
        step = 1e-7
        for j in range(len(unknowns)):
            pert = unknowns.copy()
            pert[j] += step
            J[:, j] = (residual(pert) - r) / step
        try:
            delta = np.linalg.solve(J, r)
        except np.linalg.LinAlgError as exc:
            raise RuntimeError("Newton iteration singular") from exc
        unknowns = unknowns - delta
        if not np.all(np.isfinite(unknowns)):
            raise RuntimeError("Newton iteration diverged")
    else:
        raise RuntimeError("Newton iteration did not converge")
    c, coeffs = float(unknowns[0]), unknowns[1:]
    return c, Field(grid, coeffs @ cos_mat)
