"""Solving the reduced steady-state system for A at given boundary data.

Substituting the current relation I = I(A, V) into the governing residual
leaves a scalar problem g(A) = F(A, I(A, V)) on (0, A_max). The solver
scans g on a dense grid, treats domain failures as gaps (no bracketing
across a gap), refines every sign change with the bracketing root finder,
and reports every refined root with fluxes and flux ratios attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError, NoSolutionError
from .model import (A_max, ChannelProfile, FluxReport, PhysicalScaling,
                    ScaledBoundary, ScaledState, current_I, flux_ratio,
                    governing_residual, scaled_fluxes, unscale,
                    zero_charge_flux)
from .nlsolve import DEFAULT_CONFIG, SolverConfig, bracket_root

SCAN_SAMPLES = 2048
EDGE_MARGIN_REL = 1e-9
SIGMA_LIMIT_BAND = 1e-6


@dataclass(frozen=True)
class GoverningSolution:
    state: ScaledState
    fluxes: FluxReport
    bc: ScaledBoundary
    cp: ChannelProfile
    residual: float


@dataclass(frozen=True)
class CurvePoint:
    """One sampled record of the flux-ratio curve; A is None on a miss."""

    V: float
    A: float | None
    lam: float | None
    j_k: float | None
    status: str  # "ok" | "degenerate" | "miss"


def _scan_residual(bc: ScaledBoundary, cp: ChannelProfile,
                   samples: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized g(A) over the admissible range; invalid samples are gaps."""
    am = A_max(bc, cp)
    delta = EDGE_MARGIN_REL * am
    A = np.linspace(delta, am - delta, samples)
    with np.errstate(all="ignore"):
        B = (1.0 - cp.beta) / cp.alpha * (bc.l - A) + bc.r
        d = A - bc.l
        sA = np.hypot(1.0, A)
        sB = np.hypot(1.0, B)
        S = np.log(B * bc.l / (A * bc.r))
        G = np.log((B / A) * ((sA - 1.0) / (sB - 1.0)))
        I = d / S * (G - bc.V + sA - sB + (cp.beta - cp.alpha) * d / cp.alpha)
        u = I - d * sB
        v = I - d * sA
        rho = (cp.beta - cp.alpha) / cp.alpha * d * d + (sA - sB) * d
        g = I * np.log(u / v) - rho
        valid = (B > 0.0) & (S != 0.0) & (u * v > 0.0) & np.isfinite(g)
    return A, g, valid


def _equilibrium_solution(bc: ScaledBoundary, cp: ChannelProfile) -> GoverningSolution:
    state = ScaledState(A=bc.l, B=bc.r, I=0.0, f=0.0, Y=None)
    fluxes = FluxReport(j1=0.0, j2=0.0, j1_0=0.0, j2_0=0.0, lambda1=None, lambda2=None)
    return GoverningSolution(state=state, fluxes=fluxes, bc=bc, cp=cp, residual=0.0)


def _make_solution(A: float, bc: ScaledBoundary, cp: ChannelProfile) -> GoverningSolution:
    I = current_I(A, bc, cp)
    res = abs(governing_residual(A, I, bc, cp))
    state = ScaledState.from_AI(A, I, bc, cp)
    j1, j2 = scaled_fluxes(A, I, bc)
    lams: list[float | None] = []
    j0s: list[float] = []
    for k in (1, 2):
        j0s.append(zero_charge_flux(bc, cp, k))
        try:
            lams.append(flux_ratio(A, I, bc, cp, k))
        except DegenerateError:
            lams.append(None)
    fluxes = FluxReport(j1=j1, j2=j2, j1_0=j0s[0], j2_0=j0s[1],
                        lambda1=lams[0], lambda2=lams[1])
    return GoverningSolution(state=state, fluxes=fluxes, bc=bc, cp=cp, residual=res)


def solve_governing(bc: ScaledBoundary, cp: ChannelProfile,
                    cfg: SolverConfig = DEFAULT_CONFIG,
                    samples: int = SCAN_SAMPLES) -> list[GoverningSolution]:
    """All roots of the reduced system at the given boundary data, ascending in A.

    The symmetric equilibrium (l = r, V = 0) is returned exactly. An empty
    list means the scan found no sign change (a miss, not an error).
    """
    if bc.l == bc.r and bc.V == 0.0:
        return [_equilibrium_solution(bc, cp)]

    A_grid, g, valid = _scan_residual(bc, cp, samples)

    def g_scalar(A: float) -> float:
        return governing_residual(A, current_I(A, bc, cp), bc, cp)

    roots: list[float] = []
    for i in range(samples - 1):
        if not valid[i]:
            continue
        if g[i] == 0.0:
            roots.append(float(A_grid[i]))
            continue
        if not valid[i + 1]:
            continue
        if (g[i] < 0.0) != (g[i + 1] < 0.0) and g[i + 1] != 0.0:
            try:
                roots.append(bracket_root(g_scalar, float(A_grid[i]), float(A_grid[i + 1]), cfg))
            except (DomainError, DegenerateError):
                continue

    am = A_max(bc, cp)
    deduped: list[float] = []
    for A in sorted(roots):
        if not deduped or A - deduped[-1] > 1e-9 * max(1.0, am):
            deduped.append(A)
    return [_make_solution(A, bc, cp) for A in deduped]


def lambda_curve(V_grid, l: float, r: float, cp: ChannelProfile,
                 cfg: SolverConfig = DEFAULT_CONFIG, k: int = 1) -> list[CurvePoint]:
    """Sample lambda_k across potentials; one record per governing root.

    Misses and degenerate ratios are marked in the record status, never
    raised, so sweeps are total. Sorted by (V, A).
    """
    records: list[CurvePoint] = []
    for V in V_grid:
        bc = ScaledBoundary.from_concentrations(l, r, float(V))
        sols = solve_governing(bc, cp, cfg)
        if not sols:
            records.append(CurvePoint(V=float(V), A=None, lam=None, j_k=None, status="miss"))
            continue
        for sol in sols:
            lam = sol.fluxes.lambda1 if k == 1 else sol.fluxes.lambda2
            jk = sol.fluxes.j1 if k == 1 else sol.fluxes.j2
            records.append(CurvePoint(
                V=float(V), A=sol.state.A, lam=lam, j_k=jk,
                status="ok" if lam is not None else "degenerate"))
    records.sort(key=lambda p: (p.V, p.A if p.A is not None else math.inf))
    return records


@dataclass(frozen=True)
class Q0FluxResult:
    """Physical-scale fluxes and ratios at one permanent-charge level."""

    J1: float
    J2: float
    J1_0: float
    J2_0: float
    lambda1: float | None
    lambda2: float | None


def fluxes_for_Q0(Q0: float, L: float, R: float, V: float, cp: ChannelProfile,
                  cfg: SolverConfig = DEFAULT_CONFIG) -> Q0FluxResult:
    """Solve at charge level Q0 for boundary data (L, R, V), then unscale.

    Uses the smallest-A root when several exist. The zero-charge
    references come from the uncharged problem directly (through H(1)),
    so the ratios check the charged solve against an independent path.
    """
    if Q0 <= 0.0:
        raise ValueError("Q0 must be positive")
    if L <= 0.0 or R <= 0.0:
        raise ValueError("boundary concentrations must be positive")
    bc = ScaledBoundary.from_concentrations(L / Q0, R / Q0, V)
    sols = solve_governing(bc, cp, cfg)
    if not sols:
        raise NoSolutionError(f"no governing solution at Q0={Q0}, L={L}, R={R}, V={V}")
    sol = sols[0]
    ps = PhysicalScaling(Q0=Q0, L=L, R=R)
    u = unscale(sol.state, sol.fluxes, ps, cp)

    ratio_LR = L / R
    if abs(ratio_LR - 1.0) < SIGMA_LIMIT_BAND:
        s = ratio_LR - 1.0
        factor = R * (1.0 + s / 2.0 - s * s / 12.0)
        J0 = [(factor * sgn * V + (L - R)) / cp.H_1 for sgn in (1.0, -1.0)]
    else:
        lnLR = math.log(L / R)
        J0 = [(L - R) * (sgn * V + lnLR) / (cp.H_1 * lnLR) for sgn in (1.0, -1.0)]

    lams: list[float | None] = []
    for Jk, Jk0 in ((u.J1, J0[0]), (u.J2, J0[1])):
        lams.append(None if Jk0 == 0.0 else Jk / Jk0)
    return Q0FluxResult(J1=u.J1, J2=u.J2, J1_0=J0[0], J2_0=J0[1],
                        lambda1=lams[0], lambda2=lams[1])
