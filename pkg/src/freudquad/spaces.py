"""Coefficient weights for the five space families, plus modulation norms.

A ``SpaceWeight`` selects a rule k -> lambda_k on the basis expansion:

    poly(s)      (1+k)^s
    exp(p, q)    exp(q k^p)
    mod-poly(s)  exact radial moment mu_k(s) of the (1+|z|^2)^s window integral
    mod-exp(s)   exp((s/sqrt(pi)) sqrt(k))      (coefficient-side equivalent)
    mod-exp2(s)  (pi/(pi-s))^(k+1)              (exact, 0 <= s < pi)

For the squared-exponential weight (alpha=2) the time-frequency-transform
norms diagonalize over the basis: the transform maps h_k to a normalized
monomial, and a rotation-invariant weight keeps the monomials orthogonal,
so a weighted norm reduces to sum_k fhat_k^2 * mu_k with mu_k a 1-D radial
moment.  ``modulation_norm_sq`` uses that diagonal form; the 2-D grid
evaluator ``stft_grid_norm_sq`` exists as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import ConvergenceError, GridInsufficientError

__all__ = [
    "SpaceWeight",
    "HermiteExpansion",
    "GridSpec",
    "lambda_of",
    "coeff_norm_sq",
    "radial_moment",
    "modulation_norm_sq",
    "stft_grid_norm_sq",
]

_KINDS = ("poly", "exp", "mod-poly", "mod-exp", "mod-exp2")


@dataclass(frozen=True)
class SpaceWeight:
    """One of the five coefficient-weight families."""

    kind: str
    s: float | None = None
    p: float | None = None
    q: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == "exp":
            if self.p is None or self.q is None or self.p <= 0 or self.q <= 0:
                raise ValueError("exp weights need p > 0 and q > 0")
        else:
            if self.s is None or self.s < 0:
                raise ValueError(f"{self.kind} weights need s >= 0")
            if self.kind == "mod-exp2" and self.s >= math.pi:
                raise ValueError("mod-exp2 needs 0 <= s < pi")

    # constructors
    @classmethod
    def polynomial(cls, s: float) -> "SpaceWeight":
        return cls("poly", s=float(s))

    @classmethod
    def exponential(cls, p: float, q: float) -> "SpaceWeight":
        return cls("exp", p=float(p), q=float(q))

    @classmethod
    def mod_poly(cls, s: float) -> "SpaceWeight":
        return cls("mod-poly", s=float(s))

    @classmethod
    def mod_exp(cls, s: float) -> "SpaceWeight":
        return cls("mod-exp", s=float(s))

    @classmethod
    def mod_exp2(cls, s: float) -> "SpaceWeight":
        return cls("mod-exp2", s=float(s))

    @property
    def has_decay(self) -> bool:
        """True when lambda_k diverges, i.e. the unit ball is compact."""
        if self.kind == "exp":
            return True
        return self.s > 0

    def coefficient_equivalent(self) -> "SpaceWeight":
        """The exp-family weight with the same growth, for the two
        exponential modulation families; other kinds return themselves."""
        if self.kind == "mod-exp":
            return SpaceWeight.exponential(0.5, self.s / math.sqrt(math.pi))
        if self.kind == "mod-exp2":
            return SpaceWeight.exponential(1.0, math.log(math.pi / (math.pi - self.s)))
        return self

    def describe(self) -> dict:
        out = {"kind": self.kind}
        for name in ("s", "p", "q"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out


@dataclass(frozen=True)
class HermiteExpansion:
    """A finite expansion sum_k coeffs[k] h_k over the weighted basis."""

    coeffs: np.ndarray
    alpha: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=float))
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("expansion coefficients must be finite")
        self.coeffs.setflags(write=False)

    @classmethod
    def unit(cls, k: int, alpha: float = 2.0) -> "HermiteExpansion":
        """The basis element h_k as an expansion."""
        c = np.zeros(k + 1)
        c[k] = 1.0
        return cls(c, alpha)

    def norm_sq(self) -> float:
        return float(np.sum(self.coeffs**2))


def lambda_of(space: SpaceWeight, k):
    """lambda_k for scalar or array k >= 0."""
    karr = np.asarray(k)
    if np.any(karr < 0):
        raise ValueError("coefficient index must be >= 0")
    kf = karr.astype(float)
    # weights may overflow to inf deep in a tail scan; reciprocals are then 0
    if space.kind == "poly":
        out = (1.0 + kf) ** space.s
    elif space.kind == "exp":
        with np.errstate(over="ignore"):
            out = np.exp(space.q * kf**space.p)
    elif space.kind == "mod-exp":
        with np.errstate(over="ignore"):
            out = np.exp(space.s / math.sqrt(math.pi) * np.sqrt(kf))
    elif space.kind == "mod-exp2":
        t = math.pi / (math.pi - space.s)
        with np.errstate(over="ignore"):
            out = np.exp((kf + 1.0) * math.log(t))
    else:  # mod-poly: exact radial moments
        flat = np.array(
            [radial_moment("mod-poly", space.s, int(kk)) for kk in np.ravel(karr)]
        )
        out = flat.reshape(karr.shape)
    if np.isscalar(k) or karr.ndim == 0:
        return float(out)
    return out


def coeff_norm_sq(space: SpaceWeight, f: HermiteExpansion) -> float:
    """sum_k lambda_k * fhat_k^2."""
    k = np.arange(f.coeffs.size)
    return float(math.fsum(lambda_of(space, k) * f.coeffs**2))


def _moment_integrand_log(t, k, lgk):
    # t^k e^{-t} / k!  in log form; caller adds the window factor
    return k * math.log(t) - t - lgk if t > 0 else -math.inf


@lru_cache(maxsize=None)
def _radial_moment_cached(kind: str, s: float, k: int) -> float:
    if kind == "mod-exp2":
        t = math.pi / (math.pi - s)
        return t ** (k + 1)

    if kind == "mod-poly" and float(s).is_integer():
        # (1 + t/pi)^s expands exactly; moment = sum_j C(s,j) pi^-j (k+1)...(k+j)
        si = int(s)
        total = 0.0
        for j in range(si + 1):
            rising = math.exp(gammaln(k + j + 1) - gammaln(k + 1))
            total += math.comb(si, j) * math.pi ** (-j) * rising
        return total

    # adaptive quadrature of t^k e^{-t}/k! times the radial window
    lgk = gammaln(k + 1)
    if kind == "mod-poly":
        def f(t):
            return math.exp(_moment_integrand_log(t, k, lgk)) * (1.0 + t / math.pi) ** s
    elif kind == "mod-exp":
        def f(t):
            return math.exp(
                _moment_integrand_log(t, k, lgk) + s * math.sqrt(t / math.pi)
            )
    else:
        raise ValueError(f"radial moments are defined for the mod-* kinds, not {kind!r}")
    upper = k + 40.0 * math.sqrt(k + 1.0) + 60.0
    val, err = quad(f, 0.0, upper, epsabs=0.0, epsrel=1e-12, limit=200)
    if not np.isfinite(val) or (val > 0 and err / val > 1e-9):
        raise ConvergenceError(
            f"radial moment quadrature achieved only {err:.2e} on value {val:.2e}"
        )
    return float(val)


def radial_moment(kind: str, s: float, k: int) -> float:
    """mu_k: the k-th normalized radial moment of the window weight.

    mu_k = (1/k!) * integral_0^inf t^k w(sqrt(t/pi)) e^{-t} dt with
    w(r) = (1+r^2)^s, e^{s r} or e^{s r^2} for mod-poly / mod-exp /
    mod-exp2.  Exact reductions are used where they exist (integer s,
    and the mod-exp2 geometric form); otherwise adaptive quadrature.
    """
    if k < 0:
        raise ValueError("moment index must be >= 0")
    if kind == "mod-exp2" and not 0 <= s < math.pi:
        raise ValueError("mod-exp2 needs 0 <= s < pi")
    if s < 0:
        raise ValueError("s must be >= 0")
    return _radial_moment_cached(kind, float(s), int(k))


def modulation_norm_sq(kind: str, s: float, f: HermiteExpansion) -> float:
    """Diagonal form of the squared weighted transform norm.

    Valid only for alpha = 2, where the basis diagonalizes the transform.
    """
    if f.alpha != 2.0:
        raise ValueError(f"modulation norms require alpha=2, got {f.alpha}")
    terms = [
        f.coeffs[k] ** 2 * radial_moment(kind, s, k)
        for k in range(f.coeffs.size)
        if f.coeffs[k] != 0.0
    ]
    return float(math.fsum(terms))


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid for the 2-D cross-check integral.

    ``radius=None`` sizes the square from the expansion degree so the
    integrand at the boundary is below 1e-18 of its peak.
    """

    radius: float | None = None
    points: int = 801


def _auto_radius(m: int, kind: str, s: float) -> float:
    decay = math.pi - (s if kind == "mod-exp2" else 0.0)
    r_sq = (m + 40.0 * math.sqrt(m + 1.0) + 60.0) / decay
    return math.sqrt(r_sq)


def stft_grid_norm_sq(
    kind: str, s: float, f: HermiteExpansion, grid: GridSpec | None = None
) -> float:
    """2-D tensor-trapezoid evaluation of the weighted transform norm.

    Independent of the diagonal path: evaluates
    |sum_k fhat_k sqrt(pi^k/k!) zbar^k|^2 e^{-pi|z|^2} w(|z|) on a grid
    and integrates by the trapezoid rule in both directions.
    """
    if f.alpha != 2.0:
        raise ValueError(f"modulation norms require alpha=2, got {f.alpha}")
    grid = grid or GridSpec()
    m = f.coeffs.size - 1
    R = grid.radius if grid.radius is not None else _auto_radius(m, kind, s)
    u = np.linspace(-R, R, grid.points)
    X, Y = np.meshgrid(u, u, indexing="ij")
    Z = X - 1j * Y  # conjugate argument of the analytic factor
    mono = f.coeffs * np.exp(
        0.5 * (np.arange(m + 1) * math.log(math.pi) - gammaln(np.arange(m + 1) + 1))
    )
    P = np.zeros_like(Z)
    for c in mono[::-1]:
        P = P * Z + c
    r_sq = X * X + Y * Y
    if kind == "mod-poly":
        w = (1.0 + r_sq) ** s
    elif kind == "mod-exp":
        w = np.exp(s * np.sqrt(r_sq))
    elif kind == "mod-exp2":
        w = np.exp(s * r_sq)
    else:
        raise ValueError(f"unknown modulation kind {kind!r}")
    F = (P.real**2 + P.imag**2) * np.exp(-math.pi * r_sq) * w
    interior = F.max()
    boundary = max(F[0].max(), F[-1].max(), F[:, 0].max(), F[:, -1].max())
    if interior > 0 and boundary > 1e-12 * interior:
        raise GridInsufficientError(
            f"boundary integrand mass {boundary:.2e} vs peak {interior:.2e}; "
            "enlarge the grid radius"
        )
    return float(np.trapezoid(np.trapezoid(F, u, axis=1), u))
