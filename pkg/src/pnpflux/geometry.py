"""Reduced geometry coefficients from tabulated channel profiles.

The channel enters the reduced model only through H(x) = integral of
1/(D(s)h(s)) from 0 to x and the ratios alpha = H(a)/H(1),
beta = H(b)/H(1). Profiles are supplied as tables of (x, h, D) and
integrated with the composite trapezoid rule on the given grid; between
grid points the integrand is interpolated linearly, consistent with the
trapezoid order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ProfileError, RangeError
from .model import ChannelProfile


@dataclass(frozen=True)
class TabulatedProfile:
    """Cross-section area h(x) and diffusion coefficient D(x) on a grid over [0,1]."""

    grid: np.ndarray
    h_values: np.ndarray
    D_values: np.ndarray
    _integrand: np.ndarray = field(init=False, repr=False)
    _cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        h = np.asarray(self.h_values, dtype=float)
        D = np.asarray(self.D_values, dtype=float)
        if grid.ndim != 1 or grid.shape != h.shape or grid.shape != D.shape:
            raise ValueError("grid, h_values, D_values must be 1-D arrays of equal length")
        if grid.size < 2:
            raise ValueError("profile needs at least two grid points")
        if grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("grid must start at 0 and end at 1")
        if not np.all(np.diff(grid) > 0.0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(h > 0.0) or not np.all(D > 0.0):
            raise ValueError("h and D must be positive everywhere")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "h_values", h)
        object.__setattr__(self, "D_values", D)
        g = 1.0 / (D * h)
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(grid))))
        object.__setattr__(self, "_integrand", g)
        object.__setattr__(self, "_cumulative", cum)

    @classmethod
    def uniform(cls, n: int = 2) -> "TabulatedProfile":
        """D*h = 1 everywhere; H(x) = x exactly."""
        x = np.linspace(0.0, 1.0, n)
        return cls(grid=x, h_values=np.ones(n), D_values=np.ones(n))


@dataclass(frozen=True)
class ChargeProfile:
    """Piecewise-constant permanent charge: level 2*Q0 on (a, b), zero outside."""

    a: float
    b: float
    Q0: float

    def __post_init__(self):
        if not (0.0 < self.a < self.b < 1.0):
            raise ValueError(f"junctions must satisfy 0 < a < b < 1, got a={self.a}, b={self.b}")


def H_of(x: float, p: TabulatedProfile) -> float:
    """Resistance integral H(x) = integral_0^x ds/(D(s)h(s)), trapezoid rule.

    H(0) = 0 and H is strictly increasing (the integrand is positive).
    """
    if not (0.0 <= x <= 1.0):
        raise RangeError(f"position must lie in [0, 1], got {x}")
    grid, g, cum = p.grid, p._integrand, p._cumulative
    j = int(np.searchsorted(grid, x, side="right")) - 1
    if j >= grid.size - 1:
        return float(cum[-1])
    dx = x - grid[j]
    if dx == 0.0:
        return float(cum[j])
    w = dx / (grid[j + 1] - grid[j])
    g_at_x = (1.0 - w) * g[j] + w * g[j + 1]
    return float(cum[j] + 0.5 * (g[j] + g_at_x) * dx)


def alpha_beta(p: TabulatedProfile, cp: ChargeProfile) -> tuple[float, float, float, float]:
    """(alpha, beta, H(a), H(1)) for a charge profile on a tabulated channel."""
    H_a = H_of(cp.a, p)
    H_b = H_of(cp.b, p)
    H_1 = H_of(1.0, p)
    return (H_a / H_1, H_b / H_1, H_a, H_1)


def channel_from_profile(p: TabulatedProfile, cp: ChargeProfile) -> ChannelProfile:
    """Build the reduced geometry summary used by the flux model."""
    alpha, beta, H_a, H_1 = alpha_beta(p, cp)
    return ChannelProfile(a=cp.a, b=cp.b, alpha=alpha, beta=beta, H_a=H_a, H_1=H_1)


def parse_profile(lines) -> TabulatedProfile:
    """Parse profile text: one "x h D" triple per line, '#' starts a comment.

    Strict: any malformed data line raises ProfileError carrying its
    1-based line number.
    """
    xs: list[float] = []
    hs: list[float] = []
    Ds: list[float] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ProfileError(f"expected 3 fields 'x h D', got {len(parts)}", line=lineno)
        try:
            x, h, D = (float(t) for t in parts)
        except ValueError:
            raise ProfileError(f"non-numeric field in {parts!r}", line=lineno) from None
        if xs and x <= xs[-1]:
            raise ProfileError(f"grid not strictly increasing at x={x}", line=lineno)
        if h <= 0.0 or D <= 0.0:
            raise ProfileError(f"h and D must be positive, got h={h}, D={D}", line=lineno)
        xs.append(x)
        hs.append(h)
        Ds.append(D)
    if len(xs) < 2:
        raise ProfileError("profile needs at least two data lines")
    try:
        return TabulatedProfile(grid=np.array(xs), h_values=np.array(hs), D_values=np.array(Ds))
    except ValueError as exc:
        raise ProfileError(str(exc)) from None


def load_profile(path) -> TabulatedProfile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_profile(fh)
