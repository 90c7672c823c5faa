"""Equilibrium branches, thresholds, and linearization regimes.

The traveling-wave profile ODE has constant solutions u = y(cs, g) given by
the roots of (3/4)y^2 - (cs+1)y + g = 0.  Linearizing the first-order profile
system about a branch root gives a reversible matrix whose characteristic
polynomial z^4 - b z^2 + a is determined by three coefficients (alpha, beta,
gamma).  The position of (b, a) relative to four bifurcation curves fixes the
eigenvalue configuration and thereby the type of orbit (and wave) expected
near that equilibrium.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SQRT_CURVE_TOL = 1e-12


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


class Region(enum.Enum):
    R1_LEFT = "R1_left"
    R1_RIGHT = "R1_right"
    R2 = "R2"
    R3_LEFT = "R3_left"
    R3_RIGHT = "R3_right"
    R4 = "R4"
    C0 = "C0"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"


class WaveType(enum.Enum):
    NMTW_DEPRESSION = "NMTW_depression"
    MTW_DEPRESSION = "MTW_depression"
    TW_ELEVATION = "TW_elevation"
    PTW = "PTW"
    TW_PTW = "TW_PTW"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class WaveParameters:
    cs: float
    g: float
    branch: Branch = Branch.MINUS

    def __post_init__(self):
        if self.cs <= 0:
            raise ValueError("wave speed cs must be positive")

    @property
    def ct(self) -> float:
        """Shifted speed cs + 1/2."""
        return self.cs + 0.5


@dataclass(frozen=True)
class Thresholds:
    g1: float
    g2: float
    g1_star: float
    g1_dstar: float
    g_plus: float
    g_minus: float
    delta_plus: float
    delta_minus: float

    def as_dict(self) -> dict:
        return {
            "g1": self.g1,
            "g2": self.g2,
            "g1_star": self.g1_star,
            "g1_dstar": self.g1_dstar,
            "g_plus": self.g_plus,
            "g_minus": self.g_minus,
            "delta_plus": self.delta_plus,
            "delta_minus": self.delta_minus,
        }


@dataclass(frozen=True)
class CoefficientSet:
    alpha: float
    beta: float
    gamma: float

    @property
    def a(self) -> float:
        return -self.beta * self.alpha ** 3

    @property
    def b(self) -> float:
        return -self.alpha * self.gamma

    @property
    def S(self) -> float:
        return self.gamma ** 2 + 4.0 * self.alpha * self.beta

    @property
    def Delta(self) -> float:
        return self.b ** 2 - 4.0 * self.a


def thresholds(cs: float) -> Thresholds:
    """Threshold values of the integration constant g at speed cs."""
    if cs <= 0:
        raise ValueError("wave speed cs must be positive")
    ct = cs + 0.5
    g1 = (cs + 1.0) ** 2 / 3.0
    g1_star = g1 - (cs - 0.5) ** 2 / 75.0
    g1_dstar = g1 - 1.0 / 12.0
    root = math.sqrt((10.0 * cs + 13.0) ** 2 + 44.0 * (cs - 0.5) ** 2)
    delta_plus = ((10.0 * cs + 13.0) + root) / 22.0
    delta_minus = ((10.0 * cs + 13.0) - root) / 22.0
    g_minus = g1 - delta_minus ** 2 / 3.0
    g_plus = g1 - delta_plus ** 2 / 3.0
    # g where the alpha=0 equilibrium quadric degenerates to a cone
    g2 = ct / 3.0 + (7.0 / 18.0) * ct ** 2
    return Thresholds(
        g1=g1,
        g2=g2,
        g1_star=g1_star,
        g1_dstar=g1_dstar,
        g_plus=g_plus,
        g_minus=g_minus,
        delta_plus=delta_plus,
        delta_minus=delta_minus,
    )


def branch_roots(cs: float, g: float) -> tuple[float, float]:
    """Both constant equilibrium values (y_plus, y_minus); real iff g <= g1."""
    if cs <= 0:
        raise ValueError("wave speed cs must be positive")
    disc = (cs + 1.0) ** 2 - 3.0 * g
    if disc < 0:
        raise ValueError("g exceeds g1(cs): no real equilibria on alpha!=0 branch")
    r = math.sqrt(disc)
    return (2.0 / 3.0) * ((cs + 1.0) + r), (2.0 / 3.0) * ((cs + 1.0) - r)


def branch_root(cs: float, g: float, branch: Branch) -> float:
    y_plus, y_minus = branch_roots(cs, g)
    return y_plus if branch is Branch.PLUS else y_minus


def coefficients(cs: float, g: float, branch: Branch) -> CoefficientSet:
    """Linearization coefficients at the selected branch root."""
    y = branch_root(cs, g, branch)
    return coefficients_at(cs, y)


def coefficients_at(cs: float, y: float) -> CoefficientSet:
    alpha = (3.0 * y - 1.0) / 2.0 - cs
    beta = cs + (2.0 - 3.0 * y) / 2.0
    gamma = 2.0 * cs + (3.0 - 5.0 * y) / 2.0
    return CoefficientSet(alpha=alpha, beta=beta, gamma=gamma)


def char_eigenvalues(cset: CoefficientSet) -> np.ndarray:
    """Four roots of z^4 - b z^2 + a, closed under negation and conjugation."""
    a, b = cset.a, cset.b
    disc = complex(b * b - 4.0 * a) ** 0.5
    z2 = np.array([(b + disc) / 2.0, (b - disc) / 2.0])
    roots = np.sqrt(z2.astype(complex))
    return np.array([roots[0], -roots[0], roots[1], -roots[1]])


def classify_region(a: float, b: float, Delta: float) -> Region:
    """Locate (b, a) in the bifurcation-curve partition of the plane."""
    tol = SQRT_CURVE_TOL
    if abs(a) <= tol:
        return Region.C0 if b > 0 else Region.C1
    if a > 0:
        sq = 2.0 * math.sqrt(a)
        if abs(b + sq) <= tol:
            return Region.C2
        if abs(b - sq) <= tol:
            return Region.C3
        if Delta < 0:
            return Region.R1_RIGHT if b >= 0 else Region.R1_LEFT
        return Region.R2 if b > 0 else Region.R4
    return Region.R3_LEFT if b < 0 else Region.R3_RIGHT


def predicted_wave_type(cs: float, g: float, branch: Branch) -> WaveType:
    """Tabulated wave-type prediction for the homoclinic/periodic orbits."""
    th = thresholds(cs)
    if g >= th.g1:
        raise ValueError("prediction requires g < g1(cs)")
    if cs == 0.5:
        return WaveType.UNCLASSIFIED
    if branch is Branch.PLUS:
        if cs > 0.5:
            if g < th.g1_star:
                return WaveType.NMTW_DEPRESSION
            if g < th.g_minus:
                return WaveType.NMTW_DEPRESSION
            return WaveType.PTW
        if g < th.g_minus:
            return WaveType.NMTW_DEPRESSION
        return WaveType.MTW_DEPRESSION
    # minus branch; for cs < 3 the row boundary g1_dstar lies below g1_star,
    # for cs > 3 the two elevation rows merge, so g1_dstar caps region 2 in
    # every speed range
    if g < th.g_plus:
        return WaveType.TW_ELEVATION
    if g < th.g1_dstar:
        return WaveType.TW_ELEVATION
    if cs < 0.5 and g >= th.g1_star:
        return WaveType.PTW
    return WaveType.TW_PTW


def linearization_matrix(cs: float, g: float, branch: Branch) -> np.ndarray:
    """Reversible 4x4 matrix of the profile system linearized at the root."""
    cset = coefficients(cs, g, branch)
    L = np.zeros((4, 4))
    L[0, 1] = L[1, 2] = L[2, 3] = cset.alpha
    L[3, 0] = cset.beta
    L[3, 2] = -cset.gamma
    return L


def shifted_nonlinear_term(U: np.ndarray) -> np.ndarray:
    """Quadratic part G(U) of the desingularized flow about a branch root."""
    u1, u2, u3, u4 = U
    v = u1 - u3
    f4 = (
        -0.75 * u1 ** 2
        + 1.25 * u2 ** 2
        + 2.5 * u1 * u3
        - 2.25 * u3 ** 2
        - 3.0 * u2 * u4
        + 1.5 * u4 ** 2
    )
    return np.array([1.5 * u2 * v, 1.5 * u3 * v, 1.5 * u4 * v, f4])


@dataclass(frozen=True)
class EquilibriumFamily:
    """Equilibria on the singular surface alpha = 0.

    Parameterized by (x1, x2, x3) on the quadric
        x3^2 + (3/5) x2^2 - (5/2) x1^2 = 2 (g2 - g),
    mapped to state vectors via y4 = x2, y2 = x1 + (6/5) x2,
    y3 = x3 - ct/3, y1 = x3 + ct/3.
    """

    cs: float
    g: float

    @property
    def level(self) -> float:
        return 2.0 * (thresholds(self.cs).g2 - self.g)

    def map_point(self, x1: float, x2: float, x3: float) -> np.ndarray:
        ct = self.cs + 0.5
        return np.array([x3 + ct / 3.0, x1 + 1.2 * x2, x3 - ct / 3.0, x2])

    def sample(self, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
        """n state vectors on the family (rows)."""
        rng = rng or np.random.default_rng(0)
        t = self.level
        out = np.empty((n, 4))
        for i in range(n):
            lo = 0.0 if t >= 0 else math.sqrt(-t / 2.5)
            x1 = (lo + rng.uniform(0.0, 2.0)) * rng.choice([-1.0, 1.0])
            rho2 = t + 2.5 * x1 ** 2
            theta = rng.uniform(0.0, 2.0 * math.pi)
            x3 = math.sqrt(rho2) * math.cos(theta)
            x2 = math.sqrt(rho2 * 5.0 / 3.0) * math.sin(theta)
            out[i] = self.map_point(x1, x2, x3)
        return out


@dataclass(frozen=True)
class EquilibriaCatalog:
    point_equilibria: list
    family: EquilibriumFamily
    case: str


def equilibria_catalog(cs: float, g: float) -> EquilibriaCatalog:
    """All equilibria of the desingularized profile system at (cs, g).

    Point equilibria (y, 0, 0, 0) exist for g <= g1 (merging at g = g1); the
    alpha = 0 family is a quadric surface present for every g, degenerating
    to its vertex point at g = g2.
    """
    th = thresholds(cs)
    points = []
    if g < th.g1:
        y_plus, y_minus = branch_roots(cs, g)
        points.append(np.array([y_plus, 0.0, 0.0, 0.0]))
        points.append(np.array([y_minus, 0.0, 0.0, 0.0]))
        case = "two point equilibria + singular family"
    elif g == th.g1:
        points.append(np.array([2.0 * (cs + 1.0) / 3.0, 0.0, 0.0, 0.0]))
        case = "merged point equilibrium + singular family"
    else:
        case = "singular family only"
    family = EquilibriumFamily(cs=cs, g=g)
    if g == th.g2:
        case += " (degenerate to vertex)"
    return EquilibriaCatalog(point_equilibria=points, family=family, case=case)


def equilibrium_report(cs: float, g: float, branch: Branch) -> dict:
    """JSON-ready summary of the linearization at one branch root."""
    th = thresholds(cs)
    y = branch_root(cs, g, branch)
    cset = coefficients_at(cs, y)
    eigs = char_eigenvalues(cset)
    region = classify_region(cset.a, cset.b, cset.Delta)
    if g < th.g1:
        wtype = predicted_wave_type(cs, g, branch)
    else:
        wtype = WaveType.UNCLASSIFIED
    return {
        "cs": cs,
        "g": g,
        "branch": branch.value,
        "y": y,
        "alpha": cset.alpha,
        "beta": cset.beta,
        "gamma": cset.gamma,
        "a": cset.a,
        "b": cset.b,
        "delta": cset.Delta,
        "S": cset.S,
        "eigenvalues": [[float(z.real), float(z.imag)] for z in eigs],
        "region": region.value,
        "predicted_type": wtype.value,
        "thresholds": th.as_dict(),
    }
