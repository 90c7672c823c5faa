"""Direct integration of the traveling-wave profile ODE system.

The profile u(X) of a traveling wave solves a fourth-order ODE whose
first-order form Y = (u, u', u'', u''') has a singular surface where the
coefficient alpha = (3/2)(y1 - y3) - (cs + 1/2) of u'''' vanishes.
Rescaling the independent variable by dX = alpha dZ removes the singularity;
all integration is done on the rescaled system.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .equilibria import Branch, WaveParameters, branch_root, linearization_matrix

ALPHA_SINGULARITY_TOL = 1e-12
BLOWUP_NORM = 1e8


class SingularityError(RuntimeError):
    """Evaluation requested on (or too close to) the alpha = 0 surface."""


class Termination(enum.Enum):
    TIME_LIMIT = "TimeLimit"
    ALPHA_CROSSING = "AlphaCrossing"
    BLOWUP = "Blowup"
    RETURNED_TO_EQUILIBRIUM = "ReturnedToEquilibrium"


@dataclass
class Trajectory:
    z: np.ndarray
    states: np.ndarray  # shape (n, 4)
    termination: Termination
    alpha: np.ndarray
    alpha_crossings: int = 0
    outcome: str = ""


def alpha_coefficient(Y: np.ndarray, params: WaveParameters) -> float:
    return 1.5 * (Y[0] - Y[2]) - params.ct


def _g_plus_F(Y, params: WaveParameters):
    """g + F(Y); equilibria off the singular surface satisfy g + F = 0."""
    y1, y2, y3, y4 = Y
    ct = params.ct
    quad = (
        0.75 * y1 ** 2
        - 2.5 * y1 * y3
        + 2.25 * y3 ** 2
        - 1.25 * y2 ** 2
        + 3.0 * y2 * y4
        - 1.5 * y4 ** 2
    )
    return params.g + (2.0 * ct + 0.5) * y3 - (ct + 0.5) * y1 + quad


def vector_field_X(Y: np.ndarray, params: WaveParameters) -> np.ndarray:
    """Right-hand side in the physical variable X (singular at alpha = 0)."""
    a = alpha_coefficient(Y, params)
    if abs(a) <= ALPHA_SINGULARITY_TOL:
        raise SingularityError("singularity as alpha = 0")
    return np.array([Y[1], Y[2], Y[3], -_g_plus_F(Y, params) / a])


def vector_field_Z(Y: np.ndarray, params: WaveParameters) -> np.ndarray:
    """Desingularized right-hand side (alpha times the X field)."""
    a = alpha_coefficient(Y, params)
    return np.array([a * Y[1], a * Y[2], a * Y[3], -_g_plus_F(Y, params)])


def integrate_orbit(
    initial: np.ndarray,
    params: WaveParameters,
    z_max: float,
    rtol: float = 1e-10,
    atol: float = 1e-10,
    n_samples: int = 2000,
    return_center: np.ndarray | None = None,
) -> Trajectory:
    """Integrate the desingularized system with adaptive RK45.

    Terminates on z_max, state blow-up, or (if ``return_center`` is given)
    on re-entering a small ball around that point after first leaving a ball
    100 times larger.
    """
    initial = np.asarray(initial, dtype=float)
    if not np.all(np.isfinite(initial)):
        raise ValueError("initial state must be finite")

    def rhs(z, y):
        return vector_field_Z(y, params)

    def blowup(z, y):
        return float(np.linalg.norm(y)) - BLOWUP_NORM

    blowup.terminal = True
    z_eval = np.linspace(0.0, z_max, n_samples)
    sol = solve_ivp(
        rhs, (0.0, z_max), initial, method="RK45", rtol=rtol, atol=atol,
        t_eval=z_eval, events=[blowup], dense_output=False,
    )
    if sol.status == -1:
        raise RuntimeError(f"integration failed: {sol.message}")
    z = sol.t
    states = sol.y.T
    termination = Termination.BLOWUP if sol.status == 1 else Termination.TIME_LIMIT

    if return_center is not None and len(z) > 2:
        dist = np.linalg.norm(states - return_center[None, :], axis=1)
        r_small = 1e-8 * (1.0 + np.linalg.norm(return_center))
        r_large = 100.0 * r_small
        left = np.nonzero(dist > r_large)[0]
        if left.size:
            back = np.nonzero(dist[left[0]:] < r_small)[0]
            if back.size:
                stop = left[0] + back[0] + 1
                z, states = z[:stop], states[:stop]
                termination = Termination.RETURNED_TO_EQUILIBRIUM

    alpha = 1.5 * (states[:, 0] - states[:, 2]) - params.ct
    crossings = int(np.sum(np.sign(alpha[1:]) * np.sign(alpha[:-1]) < 0))
    return Trajectory(
        z=z, states=states, termination=termination, alpha=alpha,
        alpha_crossings=crossings,
    )


def unstable_direction(params: WaveParameters) -> tuple[float, np.ndarray]:
    """Most unstable eigenvalue and its (real) unit eigenvector at the root."""
    L = linearization_matrix(params.cs, params.g, params.branch)
    eigvals, eigvecs = np.linalg.eig(L)
    idx = int(np.argmax(eigvals.real))
    lam = eigvals[idx]
    if lam.real <= 1e-9:
        raise ValueError("no unstable manifold at this equilibrium")
    v = eigvecs[:, idx].real
    v = v / np.linalg.norm(v)
    nz = np.nonzero(np.abs(v) > 1e-14)[0][0]
    if v[nz] < 0:
        v = -v
    return float(lam.real), v


def shoot_unstable(
    params: WaveParameters,
    eps: float,
    z_max: float,
    **integrate_kwargs,
) -> Trajectory:
    """Shoot along the unstable eigenvector of a branch equilibrium."""
    y = branch_root(params.cs, params.g, params.branch)
    equilibrium = np.array([y, 0.0, 0.0, 0.0])
    _, v = unstable_direction(params)
    if eps == 0.0:
        warnings.warn("eps = 0 gives a degenerate (constant) trajectory")
    traj = integrate_orbit(
        equilibrium + eps * v, params, z_max,
        return_center=equilibrium, **integrate_kwargs,
    )
    if traj.termination is Termination.RETURNED_TO_EQUILIBRIUM:
        traj.outcome = "homoclinic candidate"
    elif traj.termination is Termination.BLOWUP:
        traj.outcome = "escape"
    else:
        span = np.max(np.linalg.norm(traj.states - equilibrium[None, :], axis=1))
        traj.outcome = "bounded oscillation" if span < 1e3 else "escape"
    return traj
