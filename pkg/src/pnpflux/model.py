"""Closed-form pieces of the reduced two-ion electrodiffusion model.

Setting: a 1:-1 ionic mixture flows through a channel whose permanent
charge is 2*Q0 on an interior interval (a, b) and zero outside. After the
boundary-layer reduction, the steady state is governed by two algebraic
relations in the geometric-mean concentration A at the left junction and
the current I, with everything scaled by the charge level Q0:

    A = A_phys/Q0,  B = B_phys/Q0,  l = L/Q0,  r = R/Q0,
    f = H(a)*F_phys/(2*Q0),  I = H(a)*I_phys/(2*Q0),  Y = 2*Q0*y/H(a),

where H(x) = integral_0^x ds/(D(s) h(s)) and alpha = H(a)/H(1),
beta = H(b)/H(1) summarize the channel geometry.

This module holds the value types, the algebraic relations (B from A, the
current relation, the governing residual), species fluxes, the
zero-charge reference fluxes, flux ratios, and the scaling maps. All
functions are pure; all types are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateError, DomainError

BOLTZMANN_J_PER_K = 1.380649e-23
ELEMENTARY_CHARGE_C = 1.602176634e-19
DEFAULT_TEMPERATURE_K = 298.15
DEFAULT_CONCENTRATION_M = 1.0

# |sigma - 1| below this uses the series branch of the zero-charge flux.
SIGMA_LIMIT_BAND = 1e-6


def _sqrt1p_sq_minus_1(c: float) -> float:
    """sqrt(1 + c^2) - 1 without cancellation for small c."""
    return c * c / (1.0 + math.hypot(1.0, c))


@dataclass(frozen=True)
class ChannelProfile:
    """Reduced channel geometry: junctions and resistance-integral ratios.

    alpha = H(a)/H(1), beta = H(b)/H(1); H_a and H_1 are kept for mapping
    scaled fluxes back to physical ones.
    """

    a: float
    b: float
    alpha: float
    beta: float
    H_a: float
    H_1: float

    def __post_init__(self):
        if not (0.0 < self.a < self.b < 1.0):
            raise ValueError(f"junctions must satisfy 0 < a < b < 1, got a={self.a}, b={self.b}")
        if not (0.0 < self.alpha < self.beta < 1.0):
            raise ValueError(
                f"coefficients must satisfy 0 < alpha < beta < 1, got "
                f"alpha={self.alpha}, beta={self.beta}"
            )
        if self.H_a <= 0.0 or self.H_1 <= 0.0:
            raise ValueError("H(a) and H(1) must be positive")
        if abs(self.alpha - self.H_a / self.H_1) > 1e-12 * abs(self.alpha):
            raise ValueError("alpha inconsistent with H_a / H_1")

    @classmethod
    def default(cls) -> "ChannelProfile":
        """Uniform D*h = 1 channel with junctions at 1/3 and 2/3."""
        return cls(a=1.0 / 3.0, b=2.0 / 3.0, alpha=1.0 / 3.0, beta=2.0 / 3.0,
                   H_a=1.0 / 3.0, H_1=1.0)


@dataclass(frozen=True)
class ScaledBoundary:
    """Charge-scaled bath data: l = L/Q0, r = R/Q0, sigma = l/r, potential V."""

    l: float
    r: float
    sigma: float
    V: float

    def __post_init__(self):
        if self.l <= 0.0 or self.r <= 0.0:
            raise ValueError(f"boundary concentrations must be positive, got l={self.l}, r={self.r}")
        if abs(self.sigma - self.l / self.r) > 1e-12 * abs(self.sigma):
            raise ValueError("sigma inconsistent with l / r")
        if not math.isfinite(self.V):
            raise ValueError("potential must be finite")

    @classmethod
    def from_concentrations(cls, l: float, r: float, V: float) -> "ScaledBoundary":
        if l <= 0.0 or r <= 0.0:
            raise ValueError(f"boundary concentrations must be positive, got l={l}, r={r}")
        return cls(l=l, r=r, sigma=l / r, V=V)


@dataclass(frozen=True)
class ScaledState:
    """Reduced unknowns: junction means A, B, current I, total flux f, layer quantity Y.

    Y is None at the zero-current equilibrium, where it is undetermined.
    """

    A: float
    B: float
    I: float
    f: float
    Y: float | None

    @classmethod
    def from_AI(cls, A: float, I: float, bc: ScaledBoundary, cp: ChannelProfile) -> "ScaledState":
        B = compute_B(A, bc, cp)
        state = cls(A=A, B=B, I=I, f=bc.l - A, Y=None if I == 0.0 else layer_quantity_Y(A, I, bc, cp))
        state.validate(bc, cp)
        return state

    def validate(self, bc: ScaledBoundary, cp: ChannelProfile) -> None:
        if not (0.0 < self.A <= A_max(bc, cp)):
            raise ValueError(f"A={self.A} outside (0, A_max]")
        expected_B = compute_B(self.A, bc, cp)
        if abs(self.B - expected_B) > 1e-12 * max(1.0, abs(expected_B)):
            raise ValueError("B inconsistent with A")
        if self.f != bc.l - self.A:
            raise ValueError("f must equal l - A")
        equilibrium = self.A == bc.l and self.I == 0.0
        if not equilibrium:
            d = self.A - bc.l
            u = self.I - d * math.hypot(1.0, self.B)
            v = self.I - d * math.hypot(1.0, self.A)
            if u * v <= 0.0:
                raise ValueError("current inside the excluded band")


@dataclass(frozen=True)
class FluxReport:
    """Species fluxes, zero-charge references, and flux ratios.

    lambda1/lambda2 are None when the corresponding zero-charge flux
    vanishes (reversal potential of the uncharged problem).
    """

    j1: float
    j2: float
    j1_0: float
    j2_0: float
    lambda1: float | None
    lambda2: float | None


@dataclass(frozen=True)
class PhysicalScaling:
    """Dimensional context: charge level, boundary data, and bath geometry."""

    Q0: float
    L: float
    R: float
    C0: float = DEFAULT_CONCENTRATION_M
    temperature: float = DEFAULT_TEMPERATURE_K
    a0: float = 0.0
    b0: float = 1.0

    def __post_init__(self):
        if self.Q0 <= 0.0:
            raise ValueError("Q0 must be positive")
        if self.C0 <= 0.0 or self.temperature <= 0.0:
            raise ValueError("C0 and temperature must be positive")


@dataclass(frozen=True)
class UnscaledQuantities:
    """Physical-scale counterparts of a scaled state and its fluxes."""

    A: float
    B: float
    I: float
    F: float
    J1: float
    J2: float


def compute_B(A: float, bc: ScaledBoundary, cp: ChannelProfile) -> float:
    """Right-junction mean concentration: B = (1-beta)/alpha * (l - A) + r.

    Affine in A; negative results (A beyond A_max) are returned for the
    caller to reject.
    """
    return (1.0 - cp.beta) / cp.alpha * (bc.l - A) + bc.r


def A_max(bc: ScaledBoundary, cp: ChannelProfile) -> float:
    """Largest admissible A, where B reaches zero: alpha*r/(1-beta) + l."""
    return cp.alpha * bc.r / (1.0 - cp.beta) + bc.l


def current_I(A: float, bc: ScaledBoundary, cp: ChannelProfile) -> float:
    """Current fixed by A and the applied potential.

        I = (A-l)/ln(B*l/(A*r)) * ( ln[B(sA-1)/(A(sB-1))] - V
                                    + sA - sB + (beta-alpha)(A-l)/alpha ),

    with sA = sqrt(1+A^2), sB = sqrt(1+B^2). Raises DomainError when a log
    argument is nonpositive or when ln(B*l/(A*r)) = 0; the latter happens
    identically at A = l (B = r there), where the expression is 0/0.
    """
    if A <= 0.0:
        raise DomainError(f"A must be positive, got {A}")
    B = compute_B(A, bc, cp)
    if B <= 0.0:
        raise DomainError(f"B = {B} <= 0 at A = {A} (A beyond A_max)")
    S = math.log(B * bc.l / (A * bc.r))
    if S == 0.0:
        raise DomainError("ln(B*l/(A*r)) = 0: current relation is 0/0 here")
    sA_m1 = _sqrt1p_sq_minus_1(A)
    sB_m1 = _sqrt1p_sq_minus_1(B)
    G = math.log(B * sA_m1 / (A * sB_m1))
    d = A - bc.l
    return d / S * (G - bc.V + (sA_m1 - sB_m1) + (cp.beta - cp.alpha) * d / cp.alpha)


def governing_residual(A: float, I: float, bc: ScaledBoundary, cp: ChannelProfile) -> float:
    """Residual of the reduced steady-state balance.

        F(A, I) = I * ln[(I - (A-l) sB)/(I - (A-l) sA)]
                  - (beta-alpha)/alpha (A-l)^2 - (sA - sB)(A-l)

    Defined for I strictly outside [(A-l) min(sA,sB), (A-l) max(sA,sB)].
    (A, I) = (l, 0) is the symmetric equilibrium where every term carries a
    factor (A-l) or ln 1; the residual is defined there by its limit, 0.
    """
    if A == bc.l and I == 0.0:
        return 0.0
    if A <= 0.0:
        raise DomainError(f"A must be positive, got {A}")
    B = compute_B(A, bc, cp)
    if B < 0.0:
        raise DomainError(f"B = {B} < 0 at A = {A} (A beyond A_max)")
    d = A - bc.l
    sA_m1 = _sqrt1p_sq_minus_1(A)
    sB_m1 = _sqrt1p_sq_minus_1(B)
    u = I - d * (1.0 + sB_m1)
    v = I - d * (1.0 + sA_m1)
    if u * v <= 0.0:
        raise DomainError(f"current I = {I} inside the excluded band at A = {A}")
    rho = (cp.beta - cp.alpha) / cp.alpha * d * d + (sA_m1 - sB_m1) * d
    return I * math.log(u / v) - rho


def scaled_fluxes(A: float, I: float, bc: ScaledBoundary) -> tuple[float, float]:
    """Species fluxes j_k = (l - A + (-1)^(k+1) I)/2; j1+j2 = l-A, j1-j2 = I."""
    f = bc.l - A
    return (0.5 * (f + I), 0.5 * (f - I))


def zero_charge_flux(bc: ScaledBoundary, cp: ChannelProfile, k: int) -> float:
    """Flux of species k when the permanent charge is removed.

        j_k(0) = alpha (l-r) ((-1)^(k+1) V + ln(l/r)) / (2 ln(l/r))

    The l = r singularity is removable; for |sigma - 1| < 1e-6 the factor
    (l-r)/ln(sigma) is evaluated by its series r*(1 + s/2 - s^2/12) with
    s = sigma - 1, which reaches alpha*r*(-1)^(k+1)*V/2 at sigma = 1.
    """
    if k not in (1, 2):
        raise ValueError(f"species index must be 1 or 2, got {k}")
    sgn = 1.0 if k == 1 else -1.0
    s = bc.sigma - 1.0
    if abs(s) < SIGMA_LIMIT_BAND:
        ratio = bc.r * (1.0 + s / 2.0 - s * s / 12.0)
        return cp.alpha * (ratio * sgn * bc.V + (bc.l - bc.r)) / 2.0
    lnsig = math.log(bc.l / bc.r)
    return cp.alpha * (bc.l - bc.r) * (sgn * bc.V + lnsig) / (2.0 * lnsig)


def flux_ratio(A: float, I: float, bc: ScaledBoundary, cp: ChannelProfile, k: int) -> float:
    """Ratio of the species flux to its zero-charge reference, lambda_k.

    Raises DegenerateError at the zero-charge reversal potential, where
    j_k(0) = 0 and the ratio is undefined.
    """
    jk0 = zero_charge_flux(bc, cp, k)
    if jk0 == 0.0:
        raise DegenerateError(f"zero-charge flux of species {k} vanishes; ratio undefined")
    jk = scaled_fluxes(A, I, bc)[k - 1]
    return jk / jk0


def layer_quantity_Y(A: float, I: float, bc: ScaledBoundary, cp: ChannelProfile) -> float:
    """Boundary-layer quantity Y from I*Y = -(beta-alpha)(l-A)/alpha + sA - sB."""
    if I == 0.0:
        raise DegenerateError("Y is undetermined at zero current")
    B = compute_B(A, bc, cp)
    sA_m1 = _sqrt1p_sq_minus_1(A)
    sB_m1 = _sqrt1p_sq_minus_1(B)
    return (-(cp.beta - cp.alpha) * (bc.l - A) / cp.alpha + (sA_m1 - sB_m1)) / I


def unscale(state: ScaledState, fluxes: FluxReport, ps: PhysicalScaling,
            cp: ChannelProfile) -> UnscaledQuantities:
    """Map charge-scaled quantities back to model scale.

    Concentrations scale by Q0; fluxes and current by 2*Q0/H(a).
    """
    c = 2.0 * ps.Q0 / cp.H_a
    return UnscaledQuantities(
        A=state.A * ps.Q0,
        B=state.B * ps.Q0,
        I=state.I * c,
        F=state.f * c,
        J1=fluxes.j1 * c,
        J2=fluxes.j2 * c,
    )


def rescale(u: UnscaledQuantities, ps: PhysicalScaling,
            cp: ChannelProfile) -> tuple[float, float, float, float, float, float]:
    """Inverse of unscale: returns (A, B, I, f, j1, j2) at charge scale."""
    c = cp.H_a / (2.0 * ps.Q0)
    return (u.A / ps.Q0, u.B / ps.Q0, u.I * c, u.F * c, u.J1 * c, u.J2 * c)


def nondimensionalize(voltage_volts: float, left_molar: float, right_molar: float,
                      C0_molar: float = DEFAULT_CONCENTRATION_M,
                      temperature_K: float = DEFAULT_TEMPERATURE_K) -> tuple[float, float, float]:
    """Dimensionless boundary data (V, L, R) from laboratory units.

    V = e0*voltage/(kB*T); concentrations divide by the characteristic C0.
    """
    if temperature_K <= 0.0:
        raise ValueError("temperature must be positive")
    if C0_molar <= 0.0:
        raise ValueError("characteristic concentration must be positive")
    V = ELEMENTARY_CHARGE_C * voltage_volts / (BOLTZMANN_J_PER_K * temperature_K)
    return (V, left_molar / C0_molar, right_molar / C0_molar)
