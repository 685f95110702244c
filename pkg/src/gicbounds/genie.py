"""Weighted-sum-rate outer bounds for the two-user channel.

Three families of supporting lines R1 + w*R2 <= v are computed:

* MU: a genie gives each receiver a noisy look at its own transmit signal
  (correlation rho_i, variance sigma_i^2); the bound is minimized over the
  four genie parameters subject to a weight-dependent feasibility box.
* ETA1 / ETA2: a genie hands one receiver the other transmitter's signal,
  reducing the channel to a one-sided one; the bounds are closed forms in
  the weight, valid on a bounded weight interval.

All values are bits per channel use.  Every function here is pure; the
optimizer is deterministic (fixed probe order, no randomness), so repeated
calls yield identical certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import TwoUserChannel

__all__ = [
    "GenieParams",
    "SupportingLine",
    "WeightKind",
    "sigma_feasible",
    "sigma_limits",
    "effective_powers",
    "eval_constraint1",
    "optimize_constraint1",
    "eval_constraint2",
    "eval_constraint3",
    "eta1_range",
    "eta2_range",
    "user1_genie_bound",
]

_LOG2 = math.log(2.0)


class WeightKind(str, Enum):
    MU = "MU"
    ETA1 = "ETA1"
    ETA2 = "ETA2"


@dataclass(frozen=True)
class GenieParams:
    """Genie side-information parameters: noise correlations rho_i in [0, 1]
    and noise variances sigma_i^2 > 0."""

    rho1: float
    rho2: float
    sigma1_sq: float
    sigma2_sq: float

    def __post_init__(self):
        for name in ("rho1", "rho2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        for name in ("sigma1_sq", "sigma2_sq"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")


@dataclass(frozen=True)
class SupportingLine:
    """One weighted-sum-rate constraint R1 + weight*R2 <= value.

    The certificate depends on the family: MU lines carry the minimizing
    genie parameters and the effective powers at which the bound was
    evaluated; ETA lines carry the intermediate power p_tilde of the
    one-sided reduction.
    """

    kind: WeightKind
    weight: float
    value: float
    genie: GenieParams | None = None
    effective: tuple[float, float] | None = None
    p_tilde: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"supporting line value must be finite, got {self.value}")
        if self.kind is WeightKind.MU and self.genie is None:
            raise ValueError("MU lines require a genie certificate")
        if self.kind is not WeightKind.MU:
            if self.p_tilde is None or self.p_tilde < 0:
                raise ValueError("ETA lines require p_tilde >= 0")


def sigma_limits(
    ch: TwoUserChannel, mu: float, rho1: float, rho2: float
) -> tuple[float, float]:
    """Upper limits of the (sigma1_sq, sigma2_sq) feasibility box.

    For mu >= 1 only sigma2_sq is capped, by (1 - rho1^2)/a; for mu < 1 only
    sigma1_sq is capped, by (1 - rho2^2)/b.  A zero gain makes the
    corresponding cap vacuous (+inf).
    """
    if mu <= 0:
        raise ValueError(f"mu must be > 0, got {mu}")
    if mu >= 1.0:
        s2_max = (1.0 - rho1 * rho1) / ch.a if ch.a > 0 else math.inf
        return math.inf, s2_max
    s1_max = (1.0 - rho2 * rho2) / ch.b if ch.b > 0 else math.inf
    return s1_max, math.inf


def sigma_feasible(ch: TwoUserChannel, mu: float, gp: GenieParams) -> bool:
    """Whether the genie variances lie in the weight-dependent feasibility box."""
    s1_max, s2_max = sigma_limits(ch, mu, gp.rho1, gp.rho2)
    return gp.sigma1_sq <= s1_max and gp.sigma2_sq <= s2_max


def effective_powers(
    ch: TwoUserChannel, mu: float, gp: GenieParams
) -> tuple[float, float]:
    """Effective powers (p1_star, p2_star) at which the extremal-inequality
    step of the MU bound is tight.

    For mu >= 1, p1_star decreases piecewise in sigma1_sq from p1 to 0
    (mirror image in sigma2_sq for mu < 1); the other power stays at its
    constraint.  At mu == 1 the sloped middle branch degenerates to a point
    and only the two outer branches remain.
    """
    if not sigma_feasible(ch, mu, gp):
        raise ValueError("genie parameters are outside the feasibility box")
    if mu >= 1.0:
        gap = 1.0 - gp.rho2 * gp.rho2
        s1 = gp.sigma1_sq
        if mu == 1.0:
            p1_star = ch.p1 if s1 * ch.b <= gap else 0.0
            return p1_star, ch.p2
        left = max((1.0 - mu) * ch.p1 / mu + gap / (ch.b * mu), 0.0)
        right = gap / (ch.b * mu)
        if s1 <= left:
            p1_star = ch.p1
        elif s1 <= right:
            p1_star = (gap - ch.b * mu * s1) / (ch.b * mu - ch.b)
        else:
            p1_star = 0.0
        return p1_star, ch.p2
    gap = 1.0 - gp.rho1 * gp.rho1
    s2 = gp.sigma2_sq
    left = max((mu - 1.0) * ch.p2 + mu * gap / ch.a, 0.0)
    right = mu * gap / ch.a
    if s2 <= left:
        p2_star = ch.p2
    elif s2 <= right:
        p2_star = (mu * gap - ch.a * s2) / (ch.a - ch.a * mu)
    else:
        p2_star = 0.0
    return ch.p1, p2_star


def _genie_term(
    p_own: float,
    p_star_own: float,
    cross_gain: float,
    p_other: float,
    p_star_other: float,
    rho: float,
    sigma_sq: float,
) -> float:
    """One user's share of the MU bound (in bits):

        0.5*log2(1 + p_star_own/sigma^2)
      - 0.5*log2(cross_gain*p_star_other + 1 - rho^2)
      + 0.5*log2(1 + p_own + cross_gain*p_other - (p_own + rho*sigma)^2
                                                  / (p_own + sigma^2))
    """
    sigma = math.sqrt(sigma_sq)
    shrink = cross_gain * p_star_other + 1.0 - rho * rho
    if shrink <= 0.0:
        return math.inf
    lin = p_own + rho * sigma
    cond_var = 1.0 + p_own + cross_gain * p_other - lin * lin / (p_own + sigma_sq)
    if cond_var <= 0.0:
        return math.inf
    return 0.5 * (
        math.log2(1.0 + p_star_own / sigma_sq)
        - math.log2(shrink)
        + math.log2(cond_var)
    )


def _require_regime(ch: TwoUserChannel) -> None:
    if not (0.0 < ch.a < 1.0 and 0.0 < ch.b < 1.0):
        raise ValueError(
            f"MU bound requires 0 < a < 1 and 0 < b < 1, got a={ch.a}, b={ch.b}"
        )


def eval_constraint1(ch: TwoUserChannel, mu: float, gp: GenieParams) -> float:
    """MU-family bound on R1 + mu*R2 at one feasible genie parameter point
    (no minimization).  Returns +inf at degenerate boundary parameters."""
    _require_regime(ch)
    p1_star, p2_star = effective_powers(ch, mu, gp)
    t1 = _genie_term(ch.p1, p1_star, ch.a, ch.p2, p2_star, gp.rho1, gp.sigma1_sq)
    t2 = _genie_term(ch.p2, p2_star, ch.b, ch.p1, p1_star, gp.rho2, gp.sigma2_sq)
    return t1 + mu * t2


def user1_genie_bound(ch: TwoUserChannel, rho1: float, sigma1: float) -> float:
    """Genie bound on user 1's rate alone, at full powers:

        0.5*log2(1 + p1/sigma1^2) - 0.5*log2(a*p2 + 1 - rho1^2)
      + 0.5*log2(1 + p1 + a*p2 - (p1 + rho1*sigma1)^2/(p1 + sigma1^2))

    For fixed rho1 this is minimized over sigma1 at rho1*sigma1 = 1 + a*p2,
    where it equals user 1's single-user-detection rate.
    """
    if sigma1 <= 0:
        raise ValueError(f"sigma1 must be > 0, got {sigma1}")
    return _genie_term(
        ch.p1, ch.p1, ch.a, ch.p2, ch.p2, rho1, sigma1 * sigma1
    )


# ---------------------------------------------------------------------------
# closed-form families (one-sided reductions)
# ---------------------------------------------------------------------------


def eta1_range(ch: TwoUserChannel) -> tuple[float, float]:
    """Admissible weight interval [(1+b*p1)/(b+b*p1), 1/b] for the ETA1 family."""
    if not 0.0 < ch.b < 1.0:
        raise ValueError(f"ETA1 family requires 0 < b < 1, got b={ch.b}")
    return (1.0 + ch.b * ch.p1) / (ch.b + ch.b * ch.p1), 1.0 / ch.b


def eta2_range(ch: TwoUserChannel) -> tuple[float, float]:
    """Admissible weight interval [a, (a+a*p2)/(1+a*p2)] for the ETA2 family."""
    if not 0.0 < ch.a < 1.0:
        raise ValueError(f"ETA2 family requires 0 < a < 1, got a={ch.a}")
    return ch.a, (ch.a + ch.a * ch.p2) / (1.0 + ch.a * ch.p2)


def _check_weight(w: float, lo: float, hi: float, name: str) -> None:
    tol = 1e-12 * max(1.0, abs(lo), abs(hi))
    if not (lo - tol <= w <= hi + tol):
        raise ValueError(f"{name}={w} outside admissible range [{lo}, {hi}]")


def eval_constraint2(ch: TwoUserChannel, eta1: float) -> SupportingLine:
    """Closed-form bound R1 + eta1*R2 <= 0.5*log2(1 + p1_tilde)
    - (eta1/2)*log2(1 + b*p1_tilde) + (eta1/2)*log2(1 + b*p1 + p2),
    where p1_tilde = (b*eta1 - 1)/(b - b*eta1).

    p1_tilde runs from p1 at the lower weight endpoint down to 0 at 1/b.
    """
    lo, hi = eta1_range(ch)
    _check_weight(eta1, lo, hi, "eta1")
    # Recovering p1_tilde from a weight near 1 is ill-conditioned (the
    # identity p1_tilde(lo) = p1 loses ~b*p1/(1-b) digits), so the two
    # distinguished endpoint weights are evaluated by their exact algebra.
    if eta1 == lo:
        p1_tilde = ch.p1
    elif eta1 == hi:
        p1_tilde = 0.0
    else:
        p1_tilde = (ch.b * eta1 - 1.0) / (ch.b - ch.b * eta1)
        if p1_tilde < 0.0:  # roundoff at the range edges
            p1_tilde = 0.0
    value = (
        0.5 * math.log2(1.0 + p1_tilde)
        - 0.5 * eta1 * math.log2(1.0 + ch.b * p1_tilde)
        + 0.5 * eta1 * math.log2(1.0 + ch.b * ch.p1 + ch.p2)
    )
    return SupportingLine(
        kind=WeightKind.ETA1, weight=eta1, value=value, p_tilde=p1_tilde
    )


def eval_constraint3(ch: TwoUserChannel, eta2: float) -> SupportingLine:
    """Closed-form bound R1 + eta2*R2 <= 0.5*log2(1 + p1 + a*p2)
    - 0.5*log2(1 + a*p2_tilde) + (eta2/2)*log2(1 + p2_tilde),
    where p2_tilde = (a - eta2)/(a*eta2 - a).

    p2_tilde runs from 0 at eta2 = a up to p2 at the upper weight endpoint.
    """
    lo, hi = eta2_range(ch)
    _check_weight(eta2, lo, hi, "eta2")
    # Mirror of the ETA1 endpoint handling: exact algebra at the two
    # distinguished weights, general formula in between.
    if eta2 == lo:
        p2_tilde = 0.0
    elif eta2 == hi:
        p2_tilde = ch.p2
    else:
        p2_tilde = (ch.a - eta2) / (ch.a * eta2 - ch.a)
        if p2_tilde < 0.0:
            p2_tilde = 0.0
    value = (
        0.5 * math.log2(1.0 + ch.p1 + ch.a * ch.p2)
        - 0.5 * math.log2(1.0 + ch.a * p2_tilde)
        + 0.5 * eta2 * math.log2(1.0 + p2_tilde)
    )
    return SupportingLine(
        kind=WeightKind.ETA2, weight=eta2, value=value, p_tilde=p2_tilde
    )


# ---------------------------------------------------------------------------
# MU-family minimization
# ---------------------------------------------------------------------------

_GRID_POINTS = 8
_RHO_MAX = 1.0 - 1e-6
_SIGMA_FLOOR = 1e-4
_SWEEP_TOL = 1e-9  # bits; convergence threshold for one descent sweep
_STEP_FLOOR = 1e-9


def _objective_grid(ch: TwoUserChannel, mu: float, r1, r2, s1, s2) -> np.ndarray:
    """Vectorized MU objective over parameter arrays (already clamped into
    the feasibility box).  Infeasible or degenerate entries come out +inf."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    a, b, p1, p2 = ch.a, ch.b, ch.p1, ch.p2

    if mu >= 1.0:
        gap2 = 1.0 - r2 * r2
        if mu == 1.0:
            p1_star = np.where(b * s1 <= gap2, p1, 0.0)
        else:
            left = np.maximum((1.0 - mu) * p1 / mu + gap2 / (b * mu), 0.0)
            right = gap2 / (b * mu)
            mid = (gap2 - b * mu * s1) / (b * mu - b)
            p1_star = np.where(s1 <= left, p1, np.where(s1 <= right, mid, 0.0))
        p2_star = np.full_like(p1_star, p2)
        feasible = s2 <= (1.0 - r1 * r1) / a
    else:
        gap1 = 1.0 - r1 * r1
        left = np.maximum((mu - 1.0) * p2 + mu * gap1 / a, 0.0)
        right = mu * gap1 / a
        mid = (mu * gap1 - a * s2) / (a - a * mu)
        p2_star = np.where(s2 <= left, p2, np.where(s2 <= right, mid, 0.0))
        p1_star = np.full_like(p2_star, p1)
        feasible = s1 <= (1.0 - r2 * r2) / b

    with np.errstate(divide="ignore", invalid="ignore"):
        shrink1 = a * p2_star + 1.0 - r1 * r1
        shrink2 = b * p1_star + 1.0 - r2 * r2
        lin1 = p1 + r1 * np.sqrt(s1)
        lin2 = p2 + r2 * np.sqrt(s2)
        cond1 = 1.0 + p1 + a * p2 - lin1 * lin1 / (p1 + s1)
        cond2 = 1.0 + p2 + b * p1 - lin2 * lin2 / (p2 + s2)
        val = 0.5 * (
            np.log2(1.0 + p1_star / s1) - np.log2(shrink1) + np.log2(cond1)
        ) + 0.5 * mu * (
            np.log2(1.0 + p2_star / s2) - np.log2(shrink2) + np.log2(cond2)
        )
    bad = (
        ~feasible
        | (shrink1 <= 0)
        | (shrink2 <= 0)
        | (cond1 <= 0)
        | (cond2 <= 0)
        | ~np.isfinite(val)
    )
    return np.where(bad, np.inf, val)


def _clamp_point(ch: TwoUserChannel, mu: float, x: list[float]) -> list[float]:
    """Project (rho1, rho2, s1, s2) into the feasibility box."""
    r1 = min(max(x[0], 0.0), _RHO_MAX)
    r2 = min(max(x[1], 0.0), _RHO_MAX)
    s1_max, s2_max = sigma_limits(ch, mu, r1, r2)
    s1 = min(max(x[2], _SIGMA_FLOOR * 1e-2), s1_max)
    s2 = min(max(x[3], _SIGMA_FLOOR * 1e-2), s2_max)
    return [r1, r2, s1, s2]


def _coordinate_descent(
    ch: TwoUserChannel, mu: float, start: list[float]
) -> tuple[float, list[float]]:
    """Derivative-free refinement: cycle through the four parameters with
    shrinking steps, clamping back into the feasibility box after each move.
    Restarts once more with fresh step sizes until that stops paying."""

    def f(x: list[float]) -> float:
        xx = _clamp_point(ch, mu, x)
        return float(_objective_grid(ch, mu, xx[0], xx[1], xx[2], xx[3]))

    x = _clamp_point(ch, mu, start)
    val = f(x)
    for _ in range(2):  # fresh-step restarts
        restart_val = val
        rho_step = 0.15
        log_step = math.log(3.0)
        while rho_step > _STEP_FLOOR or log_step > _STEP_FLOOR:
            sweep_start = val
            for idx in range(4):
                additive = idx < 2
                step = rho_step if additive else log_step
                for sign in (1.0, -1.0):
                    while True:
                        cand = list(x)
                        if additive:
                            cand[idx] = x[idx] + sign * step
                        else:
                            cand[idx] = x[idx] * math.exp(sign * step)
                        cand = _clamp_point(ch, mu, cand)
                        cand_val = f(cand)
                        if cand_val < val:
                            x, val = cand, cand_val
                        else:
                            break
            if sweep_start - val < _SWEEP_TOL:
                rho_step *= 0.5
                log_step *= 0.5
        if restart_val - val < _SWEEP_TOL:
            break
    return val, x


def _tight_sum_certificate(ch: TwoUserChannel) -> "GenieParams | None":
    # Local import: capacity builds on this module.
    from .capacity import CertificateUnavailableError, noisy_certificate, noisy_condition

    holds, _ = noisy_condition(ch)
    if not holds or ch.a == 0.0 or ch.b == 0.0:
        return None
    try:
        return noisy_certificate(ch)
    except CertificateUnavailableError:
        return None


def optimize_constraint1(ch: TwoUserChannel, mu: float) -> SupportingLine:
    """Minimize the MU-family bound on R1 + mu*R2 over the genie parameters.

    Deterministic multi-start search: a coarse feasible grid (8 points per
    parameter, sigma^2 log-spaced) followed by coordinate descent from the
    best grid candidates.  When mu == 1 and the channel has noisy
    interference, the closed-form tight parameters are probed first, so the
    returned value is exact there.  The result is always an upper bound on
    R1 + mu*R2 (every probe is feasible) and never exceeds the bound at any
    probed point.
    """
    _require_regime(ch)
    if mu <= 0:
        raise ValueError(f"mu must be > 0, got {mu}")

    candidates: list[tuple[float, list[float]]] = []

    if mu == 1.0:
        cert = _tight_sum_certificate(ch)
        if cert is not None and sigma_feasible(ch, mu, cert):
            x = [cert.rho1, cert.rho2, cert.sigma1_sq, cert.sigma2_sq]
            candidates.append((float(_objective_grid(ch, mu, *x)), x))

    smax = 10.0 * max(ch.p1, ch.p2, 1.0 / ch.a, 1.0 / ch.b)
    rho_axis = np.linspace(0.0, _RHO_MAX, _GRID_POINTS)
    sig_axis = np.geomspace(_SIGMA_FLOOR, smax, _GRID_POINTS)
    r1g, r2g, s1g, s2g = np.meshgrid(
        rho_axis, rho_axis, sig_axis, sig_axis, indexing="ij"
    )
    r1g, r2g = r1g.ravel(), r2g.ravel()
    s1g, s2g = s1g.ravel(), s2g.ravel()
    # Clamp the capped variance onto its rho-dependent limit instead of
    # discarding the grid point.
    if mu >= 1.0:
        s2g = np.minimum(s2g, (1.0 - r1g * r1g) / ch.a)
    else:
        s1g = np.minimum(s1g, (1.0 - r2g * r2g) / ch.b)

    # Extra structured probes on the manifold where both variance caps bind
    # (the closed-form tight point lives there); often holds the minimizer.
    rho_fine = np.linspace(0.0, _RHO_MAX, 2 * _GRID_POINTS)
    r1m, r2m = map(np.ravel, np.meshgrid(rho_fine, rho_fine, indexing="ij"))
    s1m = (1.0 - r2m * r2m) / ch.b
    s2m = (1.0 - r1m * r1m) / ch.a

    r1g = np.concatenate([r1g, r1m])
    r2g = np.concatenate([r2g, r2m])
    s1g = np.concatenate([s1g, s1m])
    s2g = np.concatenate([s2g, s2m])
    vals = _objective_grid(ch, mu, r1g, r2g, s1g, s2g)
    order = np.argsort(vals, kind="stable")[:4]
    for i in order:
        if math.isfinite(vals[i]):
            candidates.append(
                (float(vals[i]), [r1g[i], r2g[i], s1g[i], s2g[i]])
            )

    if not candidates:
        raise RuntimeError("no feasible genie parameters found")  # unreachable

    best_val, best_x = candidates[0]
    for val, x in candidates:
        if val < best_val:
            best_val, best_x = val, x
    for _, x in candidates:
        val, refined = _coordinate_descent(ch, mu, x)
        if val < best_val:
            best_val, best_x = val, refined

    best_x = _clamp_point(ch, mu, best_x)
    gp = GenieParams(
        rho1=best_x[0], rho2=best_x[1], sigma1_sq=best_x[2], sigma2_sq=best_x[3]
    )
    return SupportingLine(
        kind=WeightKind.MU,
        weight=mu,
        value=best_val,
        genie=gp,
        effective=effective_powers(ch, mu, gp),
    )
