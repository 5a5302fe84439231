"""General-purpose nonlinear solvers.

A scalar bracketing root finder (bisection with guarded secant
acceleration) and an N-dimensional Newton solver with a dogleg
trust-region fallback and forward-difference Jacobian, plus deterministic
multi-start over a grid with root deduplication.

Model residuals raise DomainError outside their domain; the trust-region
loop treats such trial points as failed steps (shrink and retry), and the
bracketing routine retries nearby points inside the current bracket.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (DomainError, MaxIterError, NoBracketError,
                     SingularJacobianError)

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SolverConfig:
    residual_tol: float = 1e-10
    step_tol: float = 1e-12
    max_iters: int = 200
    fd_step_scale: float = math.sqrt(_EPS)
    trust_radius_init: float = 1.0
    trust_radius_max: float = 100.0

    def __post_init__(self):
        if self.residual_tol <= 0.0 or self.step_tol <= 0.0 or self.fd_step_scale <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.trust_radius_init <= 0.0 or self.trust_radius_max < self.trust_radius_init:
            raise ValueError("invalid trust-region radii")


DEFAULT_CONFIG = SolverConfig()


def _eval_endpoint(f: Callable[[float], float], x: float, other: float) -> tuple[float, float]:
    """Evaluate f at x, nudging toward `other` while f raises DomainError."""
    step = (other - x) * 1e-9
    for _ in range(64):
        try:
            val = f(x)
            if math.isfinite(val):
                return x, val
        except DomainError:
            pass
        x += step
        step *= 2.0
        if (other - x) * step <= 0.0:
            break
    raise NoBracketError("could not find a domain-valid endpoint")


def bracket_root(f: Callable[[float], float], lo: float, hi: float,
                 cfg: SolverConfig = DEFAULT_CONFIG, use_secant: bool = True) -> float:
    """Root of f inside a sign-changing bracket [lo, hi].

    Guarded false position: each iteration tries the secant point (kept
    strictly interior); whenever two consecutive iterations fail to halve
    the bracket, a bisection step is forced, so convergence is guaranteed.
    Returns x with |f(x)| <= residual_tol or bracket width <=
    step_tol*max(1, |x|). Trial points where f raises DomainError are
    replaced by points deeper inside the bracket.
    """
    a, fa = _eval_endpoint(f, lo, hi)
    b, fb = _eval_endpoint(f, hi, lo)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise NoBracketError(f"f({a}) = {fa} and f({b}) = {fb} have the same sign")

    force_bisect = False
    width_prev = abs(b - a)
    for it in range(cfg.max_iters):
        width = abs(b - a)
        if it >= 2 and width > 0.5 * width_prev:
            force_bisect = True
        width_prev = width

        x = None
        if use_secant and not force_bisect and fb != fa:
            cand = b - fb * (b - a) / (fb - fa)
            margin = 0.01 * width
            if min(a, b) + margin < cand < max(a, b) - margin:
                x = cand
        if x is None:
            x = 0.5 * (a + b)
        force_bisect = False

        fx = None
        for trial in (x, 0.5 * (a + b), 0.5 * (x + a), 0.5 * (x + b)):
            if not (min(a, b) < trial < max(a, b)):
                continue
            try:
                val = f(trial)
            except DomainError:
                continue
            if math.isfinite(val):
                x, fx = trial, val
                break
        if fx is None:
            raise MaxIterError("bracket interior is riddled with domain failures")

        if abs(fx) <= cfg.residual_tol or fx == 0.0:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, fa):
            a, fa = x, fx
        else:
            b, fb = x, fx
        if abs(b - a) <= cfg.step_tol * max(1.0, abs(x)):
            return a if abs(fa) <= abs(fb) else b
    raise MaxIterError(f"no root to tolerance within {cfg.max_iters} iterations")


def _jacobian_fd(F: Callable[[np.ndarray], np.ndarray], x: np.ndarray, Fx: np.ndarray,
                 cfg: SolverConfig) -> np.ndarray:
    """Forward-difference Jacobian; falls back to backward steps at domain edges."""
    n = x.size
    J = np.empty((Fx.size, n))
    for i in range(n):
        h = cfg.fd_step_scale * max(1.0, abs(x[i]))
        for step in (h, -h, h / 1024.0, -h / 1024.0):
            xp = x.copy()
            xp[i] += step
            try:
                Fp = F(xp)
            except DomainError:
                continue
            if np.all(np.isfinite(Fp)):
                J[:, i] = (Fp - Fx) / step
                break
        else:
            raise SingularJacobianError(f"no valid finite-difference step for coordinate {i}")
    return J


def _dogleg_step(J: np.ndarray, Fx: np.ndarray, newton: np.ndarray, radius: float,
                 scale: np.ndarray) -> np.ndarray:
    """Dogleg combination of the Cauchy and Newton steps inside the radius.

    The trust region lives in column-scaled coordinates z = scale * x
    (classic hybrid-method scaling), which keeps the region meaningful
    when the unknowns have very different magnitudes.
    """
    newton_z = scale * newton
    if np.linalg.norm(newton_z) <= radius:
        return newton
    Jz = J / scale[np.newaxis, :]
    g = Jz.T @ Fx  # steepest descent in z
    gnorm = np.linalg.norm(g)
    if gnorm == 0.0:
        return newton * (radius / np.linalg.norm(newton_z))
    Jg = Jz @ g
    t = gnorm ** 2 / np.dot(Jg, Jg)
    cauchy = -t * g
    cnorm = np.linalg.norm(cauchy)
    if cnorm >= radius:
        step_z = cauchy * (radius / cnorm)
    else:
        # ||cauchy + s (newton_z - cauchy)|| = radius
        d = newton_z - cauchy
        a = np.dot(d, d)
        b = 2.0 * np.dot(cauchy, d)
        c = np.dot(cauchy, cauchy) - radius ** 2
        s = (-b + math.sqrt(max(b * b - 4.0 * a * c, 0.0))) / (2.0 * a)
        step_z = cauchy + s * d
    return step_z / scale


def solve_system(F: Callable[[np.ndarray], np.ndarray], x0: Sequence[float],
                 cfg: SolverConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Newton iteration with a dogleg trust region; returns a root of F.

    The Newton step is taken when it fits inside the trust radius and
    reduces the residual; otherwise the dogleg point is tried. The radius
    shrinks by 4 when the actual-to-predicted reduction falls below 0.25
    and doubles (capped) when it exceeds 0.75. A DomainError during a
    trial step counts as reduction ratio 0. Success means max-norm of F
    at the returned point <= residual_tol.
    """
    x = np.asarray(x0, dtype=float).copy()
    Fx = np.asarray(F(x), dtype=float)
    if not np.all(np.isfinite(Fx)):
        raise DomainError("residual not finite at the starting point")
    if np.max(np.abs(Fx)) <= cfg.residual_tol:
        return x

    radius = cfg.trust_radius_init
    radius_cap = cfg.trust_radius_max
    scale = np.ones_like(x)
    res_history: list[float] = []
    for it in range(cfg.max_iters):
        res_history.append(float(np.max(np.abs(Fx))))
        # wandering starts creep along degenerate valleys; cut them early
        if it >= 25 and res_history[-1] > 0.9 * res_history[-26]:
            raise MaxIterError("residual stalled; start abandoned")
        J = _jacobian_fd(F, x, Fx, cfg)
        col_norms = np.linalg.norm(J, axis=0)
        if it == 0:
            scale = np.where(col_norms > 0.0, col_norms, 1.0)
            # radii are factors on the scaled start norm (hybrid-method convention)
            base = max(1.0, float(np.linalg.norm(scale * x)))
            radius = cfg.trust_radius_init * base
            radius_cap = cfg.trust_radius_max * base
        else:
            scale = np.maximum(scale, col_norms)
        try:
            newton = np.linalg.solve(J, -Fx)
        except np.linalg.LinAlgError:
            newton = np.linalg.lstsq(J, -Fx, rcond=None)[0]

        # the condition estimate is only needed on the suspect path
        suspect = (not np.all(np.isfinite(newton))
                   or float(np.linalg.norm(newton)) > 1e12 * (1.0 + float(np.linalg.norm(x))))
        cond = np.linalg.cond(J) if suspect else 0.0
        if suspect and cond > 1e14:
            g = J.T @ Fx
            gnorm = np.linalg.norm(g)
            Jg = J @ g if gnorm > 0 else g
            denom = np.dot(Jg, Jg)
            if gnorm == 0.0 or denom == 0.0:
                raise SingularJacobianError(f"Jacobian condition {cond:.3e}; gradient vanishes")
            step = -(gnorm ** 2 / denom) * g
            try:
                Ft = np.asarray(F(x + step), dtype=float)
                improved = np.all(np.isfinite(Ft)) and np.linalg.norm(Ft) < np.linalg.norm(Fx)
            except DomainError:
                improved = False
            if not improved:
                raise SingularJacobianError(
                    f"Jacobian condition {cond:.3e} and gradient step stalls")
            x, Fx = x + step, Ft
            if np.max(np.abs(Fx)) <= cfg.residual_tol:
                return x
            continue

        step = _dogleg_step(J, Fx, newton, radius, scale)
        step_norm = np.linalg.norm(step)
        predicted = np.linalg.norm(Fx) ** 2 - np.linalg.norm(Fx + J @ step) ** 2
        try:
            Ft = np.asarray(F(x + step), dtype=float)
            if not np.all(np.isfinite(Ft)):
                raise DomainError("non-finite residual")
            actual = np.linalg.norm(Fx) ** 2 - np.linalg.norm(Ft) ** 2
            ratio = actual / predicted if predicted > 0.0 else 0.0
        except DomainError:
            Ft = None
            ratio = 0.0

        if ratio > 1e-4 and Ft is not None:
            x = x + step
            Fx = Ft
            if np.max(np.abs(Fx)) <= cfg.residual_tol:
                return x
            moved = True
        else:
            moved = False

        if ratio < 0.25:
            radius *= 0.25
        elif ratio > 0.75:
            radius = min(2.0 * radius, radius_cap)

        if radius < cfg.step_tol * max(1.0, float(np.linalg.norm(x))):
            raise MaxIterError("trust region collapsed before reaching tolerance")
        if moved and step_norm <= cfg.step_tol * (1.0 + float(np.linalg.norm(x))):
            if np.max(np.abs(Fx)) <= cfg.residual_tol:
                return x
            raise MaxIterError("step size stalled above residual tolerance")
    raise MaxIterError(f"no convergence within {cfg.max_iters} iterations")


@dataclass(frozen=True)
class MultiStartBox:
    """Axis-aligned start box with per-dimension node counts (midpoint grid)."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.lower) == len(self.upper) == len(self.counts)):
            raise ValueError("lower, upper, counts must have equal lengths")
        for lo, hi, n in zip(self.lower, self.upper, self.counts):
            if not lo < hi:
                raise ValueError(f"need lower < upper, got [{lo}, {hi}]")
            if n < 1:
                raise ValueError("counts must be >= 1")

    def nodes(self):
        """Deterministic lexicographic iteration over grid nodes."""
        axes = [
            [lo + (hi - lo) * (i + 0.5) / n for i in range(n)]
            for lo, hi, n in zip(self.lower, self.upper, self.counts)
        ]
        for combo in itertools.product(*axes):
            yield np.array(combo)


@dataclass
class RootSet:
    """Deduplicated converged roots with bookkeeping."""

    roots: list[np.ndarray] = field(default_factory=list)
    residual_norms: list[float] = field(default_factory=list)
    start_counts: list[int] = field(default_factory=list)
    n_failed: int = 0


DEDUP_REL_TOL = 1e-6


def _same_root(a: np.ndarray, b: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) <= DEDUP_REL_TOL * scale


def multi_start(F: Callable[[np.ndarray], np.ndarray], box: MultiStartBox | None,
                cfg: SolverConfig = DEFAULT_CONFIG,
                extra_starts: Sequence[Sequence[float]] = ()) -> RootSet:
    """Run solve_system from every box node (plus extra starts) and merge roots.

    Individual start failures are counted, never raised. Every kept root is
    re-checked by a fresh residual evaluation. Output order is lexicographic
    in the root coordinates, so the result is independent of start order.
    box may be None to run from extra_starts alone.
    """
    rs = RootSet()
    box_nodes = box.nodes() if box is not None else ()
    starts = itertools.chain(box_nodes, (np.asarray(s, dtype=float) for s in extra_starts))
    for x0 in starts:
        try:
            root = solve_system(F, x0, cfg)
            res = float(np.max(np.abs(np.asarray(F(root), dtype=float))))
        except (DomainError, MaxIterError, SingularJacobianError, NoBracketError):
            rs.n_failed += 1
            continue
        if not math.isfinite(res) or res > cfg.residual_tol:
            rs.n_failed += 1
            continue
        for i, kept in enumerate(rs.roots):
            if _same_root(root, kept):
                rs.start_counts[i] += 1
                if res < rs.residual_norms[i]:
                    rs.roots[i] = root
                    rs.residual_norms[i] = res
                break
        else:
            rs.roots.append(root)
            rs.residual_norms.append(res)
            rs.start_counts.append(1)

    order = sorted(range(len(rs.roots)), key=lambda i: tuple(rs.roots[i]))
    rs.roots = [rs.roots[i] for i in order]
    rs.residual_norms = [rs.residual_norms[i] for i in order]
    rs.start_counts = [rs.start_counts[i] for i in order]
    return rs
