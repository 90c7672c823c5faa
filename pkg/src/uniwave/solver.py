"""Fourier-collocation solvers for traveling-wave profiles.

Depression profiles (plus branch) are computed in the shifted variable
utilde = u - y, where y is a branch equilibrium, so that the problem takes
the fixed-point form L utilde = N(utilde) with an invertible diagonal (in
Fourier) linear operator and a quadratic nonlinearity, solved by the
Petviashvili iteration with optional vector extrapolation.  Elevation
profiles (minus branch) are computed by a damped Newton iteration on the
even cosine subspace, because the Petviashvili map has no localized
attractor on that branch (see solve_profile).  Every accepted profile is
re-checked against the original nonlocal equation for h = (I - d^2/dx^2) u,
a residual that shares no code path with the fixed-point operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import spectral
from .equilibria import Branch, WaveParameters, branch_root, coefficients_at
from .spectral import Field, Grid, apply_J, apply_N, apply_Q, make_grid


class SolverError(RuntimeError):
    pass


class NearSingularOperator(SolverError):
    """The linear operator has a (near-)resonant wavenumber on this grid."""


class DegenerateIterate(SolverError):
    """The stabilizing-factor denominator vanished (e.g. zero iterate)."""


class DivergenceError(SolverError):
    pass


class MaxIterationsExceeded(SolverError):
    pass


@dataclass(frozen=True)
class InitialGuess:
    """Localized seed profile: shape in {"sech2", "gaussian"} or "values"."""

    shape: str = "sech2"
    amplitude: float | None = None  # None: +1 for minus branch, -1 for plus
    width: float = 0.5
    values: np.ndarray | None = None

    def build(self, grid: Grid, branch: Branch) -> np.ndarray:
        if self.shape == "values":
            if self.values is None or len(self.values) != grid.N:
                raise ValueError("initial-guess values must match the grid")
            return np.asarray(self.values, dtype=float)
        amp = self.amplitude
        if amp is None:
            amp = 1.0 if branch is Branch.MINUS else -1.0
        x = grid.nodes
        if self.shape == "sech2":
            return amp / np.cosh(self.width * x) ** 2
        if self.shape == "gaussian":
            return amp * np.exp(-((self.width * x) ** 2))
        raise ValueError(f"unknown initial-guess shape {self.shape!r}")


@dataclass(frozen=True)
class SolverConfig:
    grid: Grid
    tol_increment: float = 1e-12
    tol_residual: float = 1e-10
    max_iter: int = 1000
    exponent: float = 2.0
    acceleration: str = "mpe"  # "none" | "mpe" | "rre"
    cycle_width: int = 6
    initial_guess: InitialGuess = field(default_factory=InitialGuess)

    def __post_init__(self):
        if self.tol_increment <= 0 or self.tol_residual <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.cycle_width < 2:
            raise ValueError("cycle_width must be >= 2")
        if self.acceleration not in ("none", "mpe", "rre"):
            raise ValueError("acceleration must be one of none, mpe, rre")


def default_config(N: int = 1024, l: float = 100.0, **kwargs) -> SolverConfig:
    return SolverConfig(grid=make_grid(N, l), **kwargs)


@dataclass
class ProfileResult:
    u_tilde: Field
    u: Field
    h: Field
    parameters: WaveParameters
    iterations: int
    m_history: np.ndarray
    residual_fixedpoint: float
    residual_nonlocal: float
    converged: bool


def fixedpoint_operators(params: WaveParameters, grid: Grid):
    """Linear symbol Lam(k) and nonlinear map of the shifted profile equation.

    Lam(k) = alpha (1+k^2)^2 - (y/2) k^2 - (1/2)(1+k^2); the nonlinearity is
    -(1/2)( (3/2) J(J ut)^2 + d/dx(ut_x * J ut) - (1/2) J(ut_x^2) ) with
    pointwise products, J = I - d^2/dx^2.
    """
    y = branch_root(params.cs, params.g, params.branch)
    cset = coefficients_at(params.cs, y)
    k = grid.wavenumbers
    k2 = k ** 2
    lam = cset.alpha * (1.0 + k2) ** 2 - (y / 2.0) * k2 - 0.5 * (1.0 + k2)
    if np.min(np.abs(lam)) < 1e-10 * np.max(np.abs(lam)):
        raise NearSingularOperator("linear operator near-singular on grid")

    def nonlinear(ut: np.ndarray) -> np.ndarray:
        f = Field(grid, ut)
        jut = apply_J(f).values
        dut = spectral.derivative(f, 1).values
        term1 = 1.5 * apply_J(Field(grid, jut ** 2)).values
        term2 = spectral.derivative(Field(grid, dut * jut), 1).values
        term3 = 0.5 * apply_J(Field(grid, dut ** 2)).values
        return -0.5 * (term1 + term2 - term3)

    return lam, nonlinear


def petviashvili_step(ut, lam, nonlinear, exponent, dx):
    """One stabilized fixed-point update; returns (next iterate, m factor)."""
    nl = nonlinear(ut)
    lut = np.fft.ifft(lam * np.fft.fft(ut)).real
    denom = np.dot(nl, ut) * dx
    if abs(denom) < 1e-300:
        raise DegenerateIterate("degenerate iterate")
    m = (np.dot(lut, ut) * dx) / denom
    nxt = (m ** exponent) * np.fft.ifft(np.fft.fft(nl) / lam).real
    if not np.all(np.isfinite(nxt)):
        raise DivergenceError("divergence detected")
    return nxt, float(m)


def _extrapolate(history: np.ndarray, mode: str) -> np.ndarray:
    """MPE/RRE vector extrapolation over a cycle of fixed-point iterates."""
    U = np.diff(history, axis=0).T  # first differences, columns
    if mode == "mpe":
        c, *_ = np.linalg.lstsq(U[:, :-1], -U[:, -1], rcond=None)
        gamma = np.append(c, 1.0)
    else:  # rre: minimize ||U gamma|| subject to sum(gamma) = 1
        K = U.T @ U
        ones = np.ones(K.shape[0])
        try:
            gamma = np.linalg.solve(K, ones)
        except np.linalg.LinAlgError:
            gamma, *_ = np.linalg.lstsq(K, ones, rcond=None)
    total = gamma.sum()
    if abs(total) < 1e-300:
        return history[-1]
    gamma = gamma / total
    return history[:-1].T @ gamma


def _residual_values(h: Field, params: WaveParameters) -> np.ndarray:
    """Pointwise residual of the nonlocal profile equation at h."""
    g, cs = params.g, params.cs
    grid = h.grid
    nh = apply_N(h).values
    qh = apply_Q(h).values
    hv = h.values
    return (
        -cs * hv
        + 0.75 * hv ** 2
        + 0.5 * apply_N(Field(grid, hv * nh)).values
        - 0.25 * nh ** 2
        - 0.5 * qh
        - 0.5 * hv
        + g
    )


def residual_nonlocal(h: Field, params: WaveParameters) -> float:
    """Sup-norm of the nonlocal profile equation evaluated at h."""
    return float(np.max(np.abs(_residual_values(h, params))))


def _symmetrize(ut: np.ndarray) -> np.ndarray:
    """Even part about x = 0 (node reflection j -> -j mod N)."""
    idx = (-np.arange(len(ut))) % len(ut)
    return 0.5 * (ut + ut[idx])


def _center(ut: np.ndarray, grid: Grid) -> np.ndarray:
    """Phase-shift the profile so the extremum of |ut| sits at x = 0."""
    j = int(np.argmax(np.abs(ut)))
    shift = grid.nodes[j]
    f = spectral.translate(Field(grid, ut), -shift)
    mid = grid.N // 2  # node x = 0
    # Newton refinement of the sub-node offset from u'(0) = 0
    for _ in range(4):
        d1 = spectral.derivative(f, 1).values[mid]
        d2 = spectral.derivative(f, 2).values[mid]
        if abs(d2) < 1e-14 * (1.0 + abs(d1)):
            break
        delta = d1 / d2
        if abs(delta) > grid.dx:
            break
        f = spectral.translate(f, delta)
    return f.values


def _m_factor(ut, lam, nonlinear, dx) -> float:
    """Petviashvili stabilizing factor of an iterate (1 at a solution)."""
    nl = nonlinear(ut)
    lut = np.fft.ifft(lam * np.fft.fft(ut)).real
    denom = np.dot(nl, ut) * dx
    if abs(denom) < 1e-300:
        return np.inf
    return float((np.dot(lut, ut) * dx) / denom)


def _tabletop_guess(params: WaveParameters, grid: Grid) -> np.ndarray:
    """Pulse seed spanning from the wave's equilibrium to the other root.

    Elevation waves (minus branch) rise toward the upper root and depression
    waves (plus branch) dip toward the lower one, so a pulse of that height
    lands in the right Newton basin on both branches.
    """
    y = branch_root(params.cs, params.g, params.branch)
    other_branch = Branch.PLUS if params.branch is Branch.MINUS else Branch.MINUS
    other = branch_root(params.cs, params.g, other_branch)
    return y + 1.05 * (other - y) / np.cosh(grid.nodes / 2.5) ** 2


def _newton_even(h0, params: WaveParameters, config: SolverConfig, monitor=None):
    """Damped Newton iteration for h on the even cosine subspace.

    Solves the nonlocal profile equation directly in the physical variable
    h = (I - d^2/dx^2) u, restricted to profiles even about x = 0.  The
    Jacobian is assembled densely over the cosine basis (the linearization
    of the quadratic terms is exact, no finite differences) and each step
    is kept only if a backtracking line search reduces the sup residual.
    Returns (h values, iterations used, sup residual).
    """
    grid = config.grid
    N, k = grid.N, grid.wavenumbers
    sym_n = (1j * k) / (1.0 + k ** 2)
    sym_n[N // 2] = 0.0
    sym_q = 1.0 / (1.0 + k ** 2)
    modes = np.arange(N // 2 + 1) * (np.pi / grid.l)
    B = np.cos(np.outer(grid.nodes, modes))

    def smooth(sym, A):
        return np.fft.ifft(sym[:, None] * np.fft.fft(A, axis=0), axis=0).real

    NB = smooth(sym_n, B)
    QB = smooth(sym_q, B)
    cs = params.cs
    h = np.asarray(h0, dtype=float)
    sup = float(np.max(np.abs(_residual_values(Field(grid, h), params))))
    target = 0.01 * config.tol_residual
    iterations = 0
    for _ in range(config.max_iter):
        if sup <= target:
            break
        iterations += 1
        nh = apply_N(Field(grid, h)).values
        J = (
            -(cs + 0.5) * B
            + 1.5 * h[:, None] * B
            + 0.5 * smooth(sym_n, B * nh[:, None] + h[:, None] * NB)
            - 0.5 * nh[:, None] * NB
            - 0.5 * QB
        )
        r = _residual_values(Field(grid, h), params)
        coeffs, *_ = np.linalg.lstsq(J, -r, rcond=None)
        step = B @ coeffs
        t, improved = 1.0, False
        while t >= 1e-4:
            trial = float(
                np.max(np.abs(_residual_values(Field(grid, h + t * step), params)))
            )
            if trial < sup:
                improved = True
                break
            t *= 0.5
        if not improved:
            break  # stagnation: leave the residual gate to the caller
        h = h + t * step
        sup = trial
        if monitor is not None:
            monitor(h)
        if t * float(np.max(np.abs(step))) <= config.tol_increment:
            break
    return h, iterations, sup


def solve_profile(params: WaveParameters, config: SolverConfig) -> ProfileResult:
    """Compute the localized traveling-wave profile at the given parameters.

    Depression waves (plus branch) are found by the accelerated Petviashvili
    iteration on the shifted fixed-point form.  Profiles that cross the
    level h = (2/3) c_t, where the profile ODE degenerates, leave the
    Petviashvili map without a localized attractor (iterates collapse onto
    grid-scale spikes); such profiles, which include all elevation waves
    (minus branch) and the deeper depression waves, are computed by a damped
    Newton iteration on the even cosine subspace instead.  Either way the
    result is gated on the nodal residual of the original nonlocal equation.
    """
    grid = config.grid
    y = branch_root(params.cs, params.g, params.branch)
    lam, nonlinear = fixedpoint_operators(params, grid)
    dx = grid.dx

    if params.branch is Branch.MINUS:
        return _solve_newton(params, config, y, lam, nonlinear, dx)
    try:
        return _solve_petviashvili(params, config, y, lam, nonlinear, dx)
    except SolverError:
        # deep depression profiles also cross the degenerate level and leave
        # the Petviashvili map without a localized attractor
        return _solve_newton(params, config, y, lam, nonlinear, dx)


def _solve_petviashvili(params, config, y, lam, nonlinear, dx) -> ProfileResult:
    grid = config.grid
    ut = config.initial_guess.build(grid, params.branch)

    m_history: list[float] = []
    iterations = 0
    cycle: list[np.ndarray] = [ut]
    converged = False
    increment = np.inf
    for _ in range(config.max_iter):
        nxt, m = petviashvili_step(ut, lam, nonlinear, config.exponent, dx)
        iterations += 1
        m_history.append(m)
        increment = float(np.max(np.abs(nxt - ut)))
        ut = nxt
        if config.acceleration != "none":
            # extrapolation assumes a near-linear contraction; applied too
            # early it can jump into the basin of a different fixed point
            if abs(m - 1.0) > 0.2:
                cycle = [ut]
            else:
                cycle.append(ut)
                if len(cycle) == config.cycle_width + 1:
                    extrap = _extrapolate(np.array(cycle), config.acceleration)
                    if np.all(np.isfinite(extrap)):
                        ut = extrap
                    cycle = [ut]
        if increment <= config.tol_increment and abs(m - 1.0) < 1e-6:
            converged = True
            break
    if not converged:
        raise MaxIterationsExceeded(
            f"no convergence in {iterations} iterations "
            f"(last increment {increment:.3e})"
        )

    ut = _symmetrize(_center(ut, grid))
    # polish: centering slightly perturbs aliased products, so take a few
    # plain steps (restricted to the even subspace, where the fixed point
    # is stable) to settle back onto it
    for _ in range(10):
        nxt, m = petviashvili_step(ut, lam, nonlinear, config.exponent, dx)
        nxt = _symmetrize(nxt)
        done = np.max(np.abs(nxt - ut)) <= config.tol_increment
        ut = nxt
        if done:
            break
    u = Field(grid, ut + y)
    h = apply_J(u)
    res_nl = residual_nonlocal(h, params)
    if res_nl > config.tol_residual:
        raise SolverError(
            f"nonlocal residual {res_nl:.3e} exceeds tolerance "
            f"{config.tol_residual:.1e}"
        )
    return ProfileResult(
        u_tilde=Field(grid, ut),
        u=u,
        h=h,
        parameters=params,
        iterations=iterations,
        m_history=np.array(m_history),
        residual_fixedpoint=_fixedpoint_residual(ut, lam, nonlinear),
        residual_nonlocal=res_nl,
        converged=True,
    )


def _solve_newton(params, config, y, lam, nonlinear, dx) -> ProfileResult:
    """Newton solve in the h variable, reported in the shifted variable."""
    grid = config.grid
    guess = config.initial_guess
    if guess.shape == "values" or guess.amplitude is not None:
        ut0 = guess.build(grid, params.branch)
        h0 = apply_J(Field(grid, ut0)).values + y
    else:
        h0 = _tabletop_guess(params, grid)
    h0 = _symmetrize(h0)

    m_history: list[float] = []

    def monitor(hv: np.ndarray) -> None:
        ut = apply_Q(Field(grid, hv - y)).values
        m_history.append(_m_factor(ut, lam, nonlinear, dx))

    hv, iterations, res_nl = _newton_even(h0, params, config, monitor=monitor)
    if res_nl > config.tol_residual:
        raise SolverError(
            f"nonlocal residual {res_nl:.3e} exceeds tolerance "
            f"{config.tol_residual:.1e}"
        )
    h = Field(grid, hv)
    u = Field(grid, apply_Q(Field(grid, hv - y)).values + y)
    ut = Field(grid, u.values - y)
    return ProfileResult(
        u_tilde=ut,
        u=u,
        h=h,
        parameters=params,
        iterations=iterations,
        m_history=np.array(m_history),
        residual_fixedpoint=_fixedpoint_residual(ut.values, lam, nonlinear),
        residual_nonlocal=res_nl,
        converged=True,
    )


def _fixedpoint_residual(ut, lam, nonlinear) -> float:
    lut = np.fft.ifft(lam * np.fft.fft(ut)).real
    return float(np.max(np.abs(lut - nonlinear(ut))))


def continuation_sweep(params_list, config: SolverConfig):
    """Solve a parameter path, seeding each solve with the previous profile.

    Returns a list of (params, ProfileResult | None, error message) triples,
    ordered as the input; failures do not abort the sweep.
    """
    results = []
    seed = config.initial_guess
    for params in params_list:
        cfg = replace(config, initial_guess=seed)
        try:
            res = solve_profile(params, cfg)
        except (SolverError, ValueError) as exc:
            results.append((params, None, str(exc)))
            continue
        results.append((params, res, ""))
        seed = InitialGuess(shape="values", values=res.u_tilde.values)
    return results
