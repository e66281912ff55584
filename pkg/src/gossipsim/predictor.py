"""Stopping-time thresholds, phase schedules and decay-specific calculators.

The two aggregate stopping rules work on sums of logarithmic growth
(shrink) factors: the growing rule triggers once
``sum log(1 + nu_t)`` crosses a threshold depending on the size targets
[A, B], and guarantees B informed vertices with high probability; the
shrinking rule is the dual for the uninformed side over [C, D]. Their
thresholds carry a correction factor ``(1 - (1-xi) A^-xi)^2`` with
xi = 1e-30; evaluated naively in doubles that factor underflows to 0, so
:func:`growth_correction` computes it through ``expm1``. With A = 1 the
factor is xi**2 = 1e-60 and the threshold is astronomically large (still a
representable float); starting phases at A = log n, as the phase schedule
does, is the practical path.

Point predictions (fixed-q runtimes, phase durations) are leading-order:
the vanishing correction factors are dropped, and every such object is
flagged ``leading_order`` so experiments compare against an explicit
multiplicative tolerance rather than a hidden asymptotic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .credibility import Additive, Constant, Credibility, Multiplicative, PowerLaw, Table
from .errors import (
    AlphaRange,
    DomainError,
    GammaNonpositive,
    KindError,
    NonIntegerReciprocal,
    PhiNonpositive,
    RangeError,
    Unreached,
    ZetaRange,
)
from .protocol import ProtocolKind

__all__ = [
    "PredictorConfig",
    "ThresholdScaleWarning",
    "growth_correction",
    "tau2_threshold",
    "tau2_rounds",
    "tau3_threshold",
    "tau3_rounds",
    "fixed_q_runtime",
    "Phase",
    "PhasePlan",
    "phase_schedule",
    "GeneralStrongResult",
    "general_strong_T",
    "general_lower_T",
    "powerlaw_expectation_bound",
    "PowerLawThresholds",
    "powerlaw_thresholds",
    "AdditiveThresholds",
    "additive_thresholds",
    "MultiplicativeThresholds",
    "multiplicative_thresholds",
    "StirlingProductCheck",
    "stirling_product_check",
    "HarmonicSumCheck",
    "harmonic_sum_check",
    "MultiplicativeProductCheck",
    "multiplicative_product_check",
]

SERIES_INCREMENT_TOL = 1e-12


class ThresholdScaleWarning(UserWarning):
    """The requested threshold is astronomically large (A = 1 regime)."""


@dataclass(frozen=True)
class PredictorConfig:
    xi: float = 1e-30
    round_cap: int = 1_000_000

    def __post_init__(self):
        if not 0.0 < self.xi < 1.0:
            raise RangeError(f"xi must be in (0, 1), got {self.xi}")
        if self.round_cap < 1:
            raise RangeError(f"round cap must be >= 1, got {self.round_cap}")


def growth_correction(a: float, xi: float) -> float:
    """1 - (1 - xi) * a**(-xi), evaluated without catastrophic cancellation.

    Rewritten as (1 - a**-xi) + xi * a**-xi so that for a = 1 the result is
    exactly xi rather than rounding to 0.
    """
    if a < 1.0:
        raise RangeError(f"size threshold must be >= 1, got {a}")
    decayed = math.exp(-xi * math.log(a))
    return -math.expm1(-xi * math.log(a)) + xi * decayed


def tau2_threshold(a: float, b: float, c_grow: float, xi: float = 1e-30) -> float:
    """Log-growth total that certifies going from A to B informed vertices.

    (log(B/A) + (log(B/A) + log(1 + c_grow) + 1)^(2/3)) / (1 - (1-xi) A^-xi)^2.
    """
    if not 1.0 <= a <= b:
        raise RangeError(f"need 1 <= A <= B, got A={a}, B={b}")
    if c_grow <= 0:
        raise RangeError(f"c_grow must be positive, got {c_grow}")
    ratio = math.log(b / a)
    numerator = ratio + (ratio + math.log1p(c_grow) + 1.0) ** (2.0 / 3.0)
    return numerator / growth_correction(a, xi) ** 2


def tau3_threshold(c: float, d: float, c_shrink: float) -> float:
    """Log-shrink total that certifies going from C down to D uninformed.

    With gamma = 1 - min(1 / (2 (1 - c_shrink) D), 1/2):
    (1/gamma) * (log(C/D) + (log(C/D) - log(1 - c_shrink) + 1)^(2/3)).
    """
    if not 0.75 <= d <= c:
        raise RangeError(f"need C >= D >= 3/4, got C={c}, D={d}")
    if not c_shrink < 1.0:
        raise RangeError(f"c_shrink must be < 1, got {c_shrink}")
    gamma = 1.0 - min(1.0 / (2.0 * (1.0 - c_shrink) * d), 0.5)
    ratio = math.log(c / d)
    return (ratio + (ratio - math.log(1.0 - c_shrink) + 1.0) ** (2.0 / 3.0)) / gamma


def tau2_rounds(
    nu,
    t1: int,
    a: float,
    b: float,
    c_grow: float,
    cfg: PredictorConfig = PredictorConfig(),
) -> int:
    """Minimal s >= t1 with sum_{t=t1}^{s-1} log(1 + nu(t)) >= tau2_threshold.

    ``nu`` maps a round index to the deterministic per-round growth lower
    bound. Raises :class:`Unreached` if the sum has not crossed after
    ``cfg.round_cap`` scanned rounds.
    """
    threshold = tau2_threshold(a, b, c_grow, cfg.xi)
    if a == 1.0:
        warnings.warn(
            "A = 1 puts the threshold at the 1/xi^2 scale; phase plans starting "
            "at A = log n are the practical route",
            ThresholdScaleWarning,
            stacklevel=2,
        )
    acc = 0.0
    for s in range(t1, t1 + cfg.round_cap + 1):
        if acc >= threshold:
            return s
        rate = nu(s)
        if rate < 0:
            raise RangeError(f"nu({s}) = {rate} must be >= 0")
        acc += math.log1p(rate)
    raise Unreached(cfg.round_cap)


def tau3_rounds(
    nu,
    t2: int,
    c: float,
    d: float,
    c_shrink: float,
    cfg: PredictorConfig = PredictorConfig(),
) -> int:
    """Minimal s >= t2 with sum_{t=t2}^{s-1} log(1 - nu(t)) <= -tau3_threshold."""
    threshold = tau3_threshold(c, d, c_shrink)
    acc = 0.0
    for s in range(t2, t2 + cfg.round_cap + 1):
        if acc <= -threshold:
            return s
        rate = nu(s)
        if not 0.0 <= rate < 1.0:
            raise RangeError(f"nu({s}) = {rate} must be in [0, 1)")
        acc += math.log1p(-rate)
    raise Unreached(cfg.round_cap)


# -- fixed credibility --------------------------------------------------------


def fixed_q_runtime(kind: ProtocolKind, q: float, n: int) -> float:
    """Leading-order spreading time for constant credibility q on expanders.

    PUSH:      (1/log(1+q) + 1/q) log n
    PULL:      (1/log(1+q) - 1/log(1-q)) log n   (undefined at q = 1)
    PUSH-PULL: (1/log(1+2q) + 1/(q - log(1-q))) log n

    The (1 + o(1)) factor is dropped; treat the result as a leading-order
    point estimate, not a bound.
    """
    if not 0.0 < q <= 1.0:
        raise RangeError(f"q must be in (0, 1], got {q}")
    if n < 2:
        raise RangeError(f"need n >= 2, got {n}")
    log_n = math.log(n)
    if kind is ProtocolKind.PUSH:
        return (1.0 / math.log1p(q) + 1.0 / q) * log_n
    if kind is ProtocolKind.PULL:
        if q == 1.0:
            raise DomainError("PULL runtime undefined at q = 1 (log(1-q) diverges)")
        return (1.0 / math.log1p(q) - 1.0 / math.log1p(-q)) * log_n
    tail = 0.0 if q == 1.0 else 1.0 / (q - math.log1p(-q))
    return (1.0 / math.log1p(2.0 * q) + tail) * log_n


@dataclass(frozen=True)
class Phase:
    """One range of informed (growing) or uninformed (shrinking) set sizes.

    ``nu`` is the rigorous per-round factor lower bound at the given
    spectral expansion; ``duration_bound`` is the leading-order number of
    rounds the phase takes.
    """

    start_size: float
    finish_size: float
    mode: str  # "growing" | "shrinking"
    nu: float
    duration_bound: float
    dominant: bool


@dataclass(frozen=True)
class PhasePlan:
    phases: tuple[Phase, ...]
    protocol: ProtocolKind
    q: float
    n: int
    lam: float
    c_shrink: float | None
    leading_order: bool = field(default=True)

    @property
    def total_rounds(self) -> float:
        return sum(p.duration_bound for p in self.phases)

    @property
    def dominant_rounds(self) -> float:
        return sum(p.duration_bound for p in self.phases if p.dominant)


def _growth_nu(kind: ProtocolKind, q: float, floor: float) -> float:
    if kind is ProtocolKind.PULL:
        return q * floor
    if kind is ProtocolKind.PUSH:
        return q * (1.0 - q / 2.0) * floor
    return 1.5 * q * (1.0 - q / 2.0) * floor


def _shrink_nu(kind: ProtocolKind, q: float, floor: float) -> float:
    if kind is ProtocolKind.PULL:
        return q * floor
    if kind is ProtocolKind.PUSH:
        return (1.0 - math.exp(-q)) * floor
    return (1.0 - math.exp(-q) * (1.0 - q)) * floor


def phase_schedule(
    kind: ProtocolKind,
    q: float,
    n: int,
    lam: float = 0.0,
    c_shrink: float | None = None,
) -> PhasePlan:
    """Six-phase decomposition 1 -> log n -> n/log n -> n/2 (informed), then
    n/2 -> n/log n -> log n -> 3/4 (uninformed), with per-phase rate floors.

    Phases 2 and 5 dominate the total; all other duration bounds are
    log log n scale. Duration bounds are leading-order.
    """
    if n < 3:
        raise RangeError(f"need n >= 3, got {n}")
    if not 0.0 <= lam <= 1.0:
        raise RangeError(f"lambda must be in [0, 1], got {lam}")
    if not 0.0 < q <= 1.0:
        raise RangeError(f"q must be in (0, 1], got {q}")
    if kind is ProtocolKind.PULL and q == 1.0:
        raise DomainError("PULL schedule undefined at q = 1 (log(1-q) diverges)")

    log_n = math.log(n)
    log_log_n = math.log(log_n)
    grow_den = math.log1p(2.0 * q if kind is ProtocolKind.PUSH_PULL else q)
    if kind is ProtocolKind.PUSH:
        shrink_den = q
    elif kind is ProtocolKind.PULL:
        shrink_den = -math.log1p(-q)
    else:
        shrink_den = math.inf if q == 1.0 else q - math.log1p(-q)

    spectral_slack = math.sqrt(lam + 1.0 / log_n)
    if kind is ProtocolKind.PUSH:
        nu2 = max(0.0, q * (1.0 - 7.0 * spectral_slack))
    elif kind is ProtocolKind.PUSH_PULL:
        nu2 = max(0.0, q * (2.0 - 12.0 * spectral_slack))
    else:
        nu2 = q * (1.0 - lam) * (1.0 - 1.0 / log_n)

    half = 0.5
    half_gap = (1.0 - lam) / 2.0
    wide = (1.0 - lam) * (1.0 - 1.0 / log_n)
    phases = (
        Phase(1.0, log_n, "growing", _growth_nu(kind, q, half), log_log_n / grow_den, False),
        Phase(log_n, n / log_n, "growing", nu2, log_n / grow_den, True),
        Phase(n / log_n, n / 2.0, "growing", _growth_nu(kind, q, half_gap), log_log_n / grow_den, False),
        Phase(n / 2.0, n / log_n, "shrinking", _shrink_nu(kind, q, half_gap), log_log_n / shrink_den, False),
        Phase(n / log_n, log_n, "shrinking", _shrink_nu(kind, q, wide), log_n / shrink_den, True),
        Phase(log_n, 0.75, "shrinking", _shrink_nu(kind, q, half), log_log_n / shrink_den, False),
    )
    return PhasePlan(phases=phases, protocol=kind, q=q, n=n, lam=lam, c_shrink=c_shrink)


# -- scans over arbitrary credibility -----------------------------------------


def _constant_phase(cred: Credibility) -> tuple[int, float] | None:
    """(round, value) from which q(t) is constant forever, if known."""
    if isinstance(cred, Constant):
        return 0, cred.q
    if isinstance(cred, Table):
        return len(cred.values), cred.tail
    if isinstance(cred, Additive):
        return math.ceil(1.0 / cred.alpha), 0.0
    return None


def _tail_sum_bound(cred: Credibility, t: int) -> float:
    """Upper bound on sum_{s >= t} q(s); inf when divergent or unknown."""
    if isinstance(cred, Multiplicative):
        return (1.0 - cred.alpha) ** t / cred.alpha
    if isinstance(cred, PowerLaw) and cred.alpha > 1.0:
        return (t + 1.0) ** (-cred.alpha) + (t + 1.0) ** (1.0 - cred.alpha) / (
            cred.alpha - 1.0
        )
    const = _constant_phase(cred)
    if const is not None and const[1] == 0.0:
        listed = sum(cred.value_at(s) for s in range(t, const[0])) if t < const[0] else 0.0
        return listed
    return math.inf


@dataclass(frozen=True)
class GeneralStrongResult:
    """Crossing round for the expander growth certificate, plus precondition info."""

    rounds: int
    threshold: float
    gamma: float
    epsilon: float
    epsilon_ok: bool


def general_strong_T(
    q: Credibility,
    lam: float,
    n: int,
    kind: ProtocolKind,
    cfg: PredictorConfig = PredictorConfig(),
) -> GeneralStrongResult:
    """Minimal T with sum_{t=0}^{T} log(1 + q(t)) >= threshold(n, lambda, kind).

    The threshold is (1/gamma) (log n + 7 (log n)^(2/3)) / (1-(1-xi)(log n)^-xi)^2
    with gamma = 1 - lambda for PULL and 1 - 7 sqrt(lambda + 1/log n) for PUSH.
    Also reports whether epsilon := 1 - sup_{t >= log n / (2 log 2)} q(t) is at
    least 1/log n, the certificate's late-round precondition.
    """
    if kind not in (ProtocolKind.PUSH, ProtocolKind.PULL):
        raise KindError("growth certificate covers PUSH and PULL only")
    if not 0.0 <= lam < 1.0:
        raise RangeError(f"lambda must be in [0, 1), got {lam}")
    if n < 3:
        raise RangeError(f"need n >= 3, got {n}")
    log_n = math.log(n)
    if kind is ProtocolKind.PULL:
        gamma = 1.0 - lam
    else:
        gamma = 1.0 - 7.0 * math.sqrt(lam + 1.0 / log_n)
    if gamma <= 0.0:
        raise GammaNonpositive(f"gamma = {gamma} <= 0; spectral slack too large")
    threshold = (
        (log_n + 7.0 * log_n ** (2.0 / 3.0))
        / growth_correction(log_n, cfg.xi) ** 2
        / gamma
    )

    t0 = math.ceil(log_n / (2.0 * math.log(2.0)))
    epsilon = 1.0 - q.sup_from(t0)
    epsilon_ok = epsilon >= 1.0 / log_n

    const = _constant_phase(q)
    acc = 0.0
    t = 0
    while t <= cfg.round_cap:
        if const is not None and t >= const[0]:
            inc = math.log1p(const[1])
            if acc >= threshold:
                rounds = t - 1
            elif inc == 0.0:
                raise Unreached(cfg.round_cap, "credibility hit 0 before the threshold")
            else:
                rounds = t + math.ceil((threshold - acc) / inc) - 1
            return GeneralStrongResult(
                rounds=max(rounds, 0),
                threshold=threshold,
                gamma=gamma,
                epsilon=epsilon,
                epsilon_ok=epsilon_ok,
            )
        # increments are at most log 2, so without a constant tail (which
        # gets a closed-form jump above) an out-of-range threshold is
        # decidable up front
        if const is None and acc + math.log(2.0) * (cfg.round_cap - t + 1) < threshold:
            raise Unreached(cfg.round_cap, "threshold beyond reach of the round cap")
        acc += math.log1p(q.value_at(t))
        if acc >= threshold:
            return GeneralStrongResult(
                rounds=t, threshold=threshold, gamma=gamma, epsilon=epsilon,
                epsilon_ok=epsilon_ok,
            )
        if acc + _tail_sum_bound(q, t + 1) < threshold:
            raise Unreached(cfg.round_cap, "log-growth series converges below the threshold")
        t += 1
    raise Unreached(cfg.round_cap)


def general_lower_T(
    q: Credibility,
    psi: float,
    n: int,
    rho: float,
    cfg: PredictorConfig = PredictorConfig(),
) -> int | float:
    """Maximal T with sum_{t=0}^{T-1} log(1 + psi q(t)) <= log n + log rho.

    Up to round T the expected informed count is still at most rho * n.
    Returns math.inf when the series can never cross (e.g. q summable or
    identically 0); returns 0 when even the empty sum exceeds the target.
    """
    if psi <= 0:
        raise RangeError(f"psi must be positive, got {psi}")
    if not 0.0 < rho < 1.0:
        raise RangeError(f"rho must be in (0, 1), got {rho}")
    target = math.log(n) + math.log(rho)
    if target < 0.0:
        return 0
    const = _constant_phase(q)
    if const is None and math.log1p(psi) * (cfg.round_cap + 1) < target:
        return math.inf  # cannot cross within the scan cap
    acc = 0.0
    t = 0
    while t <= cfg.round_cap:
        if const is not None and t >= const[0]:
            inc = math.log1p(psi * const[1])
            if inc == 0.0:
                return math.inf
            return t + math.floor((target - acc) / inc)
        inc = math.log1p(psi * q.value_at(t))
        if acc + inc > target:
            return t
        acc += inc
        if psi * _tail_sum_bound(q, t + 1) <= target - acc:
            return math.inf
        t += 1
    return math.inf


# -- decay-family calculators -------------------------------------------------


def powerlaw_expectation_bound(alpha: float, c_grow: float) -> float:
    """exp(c_grow * sum_t (t+1)**-alpha) for alpha > 1: a ceiling on E|I_T|.

    The series is truncated once the per-term increment drops below 1e-12.
    """
    if alpha <= 1.0:
        raise AlphaRange(f"needs alpha > 1, got {alpha}")
    if c_grow < 0:
        raise RangeError(f"c_grow must be >= 0, got {c_grow}")
    total = 0.0
    t = 1
    chunk = 65536
    while True:
        terms = [k ** (-alpha) for k in range(t, t + chunk)]
        total += math.fsum(terms)
        t += chunk
        if terms[-1] < SERIES_INCREMENT_TOL:
            break
    return math.exp(c_grow * total)


@dataclass(frozen=True)
class PowerLawThresholds:
    """Round thresholds for the slow/complete spread dichotomy, alpha <= 1.

    Up to ``t1_max`` at most ~sqrt(n) vertices are informed; from ``t2_min``
    the rumor has reached everyone (w.h.p. senses). ``alpha_one_branch``
    flags the polynomial-in-n forms used at alpha = 1.
    """

    t1_max: float
    t2_min: float
    alpha_one_branch: bool


def powerlaw_thresholds(
    alpha: float, phi_lb: float, psi_ub: float, n: int, xi: float = 1e-30
) -> PowerLawThresholds:
    """Dichotomy rounds for power-law credibility with alpha in (0, 1].

    For alpha < 1: t1_max = k1 ((1/psi) log n)^(1/(1-alpha)) with
    k1 = ((1-alpha)/2)^(1/(1-alpha)), and t2_min = k2 ((1/phi) log n)^(1/(1-alpha))
    with k2 = (16 (1-alpha) / (phi xi))^(1/(1-alpha)). At alpha = 1 both
    thresholds become polynomial in n. Values beyond float range come back
    as inf.
    """
    if not 0.0 < alpha <= 1.0:
        raise AlphaRange(f"needs alpha in (0, 1], got {alpha}")
    if phi_lb <= 0.0:
        raise PhiNonpositive(f"phi lower bound must be positive, got {phi_lb}")
    if psi_ub <= 0.0:
        raise RangeError(f"psi upper bound must be positive, got {psi_ub}")
    if n < 3:
        raise RangeError(f"need n >= 3, got {n}")
    log_n = math.log(n)

    def safe_exp(x: float) -> float:
        try:
            return math.exp(x)
        except OverflowError:
            return math.inf

    if alpha == 1.0:
        t1 = safe_exp(log_n / (2.0 * psi_ub) - 1.0)
        t2 = safe_exp((4.0 / phi_lb) * (2.0 / xi + 1.0) * log_n)
        return PowerLawThresholds(t1_max=t1, t2_min=t2, alpha_one_branch=True)

    power = 1.0 / (1.0 - alpha)
    log_t1 = power * (math.log((1.0 - alpha) / 2.0) + math.log(log_n / psi_ub))
    log_t2 = power * (
        math.log(16.0 * (1.0 - alpha) / (phi_lb * xi)) + math.log(log_n / phi_lb)
    )
    return PowerLawThresholds(
        t1_max=safe_exp(log_t1), t2_min=safe_exp(log_t2), alpha_one_branch=False
    )


@dataclass(frozen=True)
class AdditiveThresholds:
    """Critical decay rates for additive credibility q(t) = (1 - t alpha)^+.

    Above ``alpha_upper_regime`` only a vanishing fraction gets informed;
    below ``alpha_lower_regime`` the rumor reaches almost everyone.
    """

    alpha_upper_regime: float
    alpha_lower_regime: float


def additive_thresholds(
    n: int, zeta: float, gamma_p: float, xi: float = 1e-30
) -> AdditiveThresholds:
    """Both critical alpha values for the additive dichotomy.

    Few-informed boundary: log(4/e) / (log n + log zeta) for
    zeta in (1/n, 1/(2 sqrt(2))). Broad-spread boundary:
    log(4/e) / (X + log(2 sqrt(2))) where X is the expander growth
    threshold (1/gamma_p)(log n + 7 (log n)^(2/3)) / (1-(1-xi)(log n)^-xi)^2,
    evaluated in log space since exp(X) overflows.
    """
    if n < 3:
        raise RangeError(f"need n >= 3, got {n}")
    if not 1.0 / n < zeta < 1.0 / (2.0 * math.sqrt(2.0)):
        raise ZetaRange(f"zeta must be in (1/n, 1/(2*sqrt(2))), got {zeta}")
    if gamma_p <= 0.0:
        raise GammaNonpositive(f"gamma must be positive, got {gamma_p}")
    log_n = math.log(n)
    log_ratio = math.log(4.0 / math.e)

    denominator = log_n + math.log(zeta)
    upper = log_ratio / denominator if denominator > 0.0 else math.inf

    x = (log_n + 7.0 * log_n ** (2.0 / 3.0)) / growth_correction(log_n, xi) ** 2 / gamma_p
    lower = log_ratio / (x + math.log(2.0 * math.sqrt(2.0)))
    return AdditiveThresholds(alpha_upper_regime=upper, alpha_lower_regime=lower)


@dataclass(frozen=True)
class MultiplicativeThresholds:
    """Critical decay rates for multiplicative credibility q(t) = (1-alpha)^t.

    alpha >= ``alpha_few`` keeps the informed count at ~sqrt(n);
    alpha <= ``alpha_most`` informs almost everyone by round ``t_most``.
    """

    alpha_few: float
    alpha_most: float
    t_most: float


def multiplicative_thresholds(n: int) -> MultiplicativeThresholds:
    if n < 3:
        raise RangeError(f"need n >= 3, got {n}")
    log_n = math.log(n)
    return MultiplicativeThresholds(
        alpha_few=0.5 / log_n, alpha_most=0.125 / log_n, t_most=4.0 * log_n
    )


# -- numeric claim oracles ----------------------------------------------------


@dataclass(frozen=True)
class StirlingProductCheck:
    lower_ok: bool
    upper_ok: bool
    product: float
    lower_bound: float
    upper_bound: float


def stirling_product_check(alpha: float) -> StirlingProductCheck:
    """Check (1/sqrt(2)) (4/e)^(1/a) e^(-a/2) <= prod_{i<1/a} (2 - i a) <= sqrt(2) (4/e)^(1/a).

    The product and both bounds are compared in log space; 1/alpha must be a
    positive integer so the product is well formed.
    """
    if alpha <= 0.0:
        raise NonIntegerReciprocal(f"alpha must be positive, got {alpha}")
    m = 1.0 / alpha
    if abs(m - round(m)) > 1e-9 or round(m) < 1:
        raise NonIntegerReciprocal(f"1/alpha = {m} is not a positive integer")
    m = int(round(m))
    log_product = math.fsum(math.log(2.0 - i * alpha) for i in range(m))
    log_base = m * (math.log(4.0) - 1.0)
    log_lower = -0.5 * math.log(2.0) + log_base - alpha / 2.0
    log_upper = 0.5 * math.log(2.0) + log_base
    return StirlingProductCheck(
        lower_ok=log_lower <= log_product + 1e-12,
        upper_ok=log_product <= log_upper + 1e-12,
        product=math.exp(log_product),
        lower_bound=math.exp(log_lower),
        upper_bound=math.exp(log_upper),
    )


@dataclass(frozen=True)
class HarmonicSumCheck:
    lower_ok: bool
    upper_ok: bool
    partial_sum: float
    lower_bound: float
    upper_bound: float


def harmonic_sum_check(alpha: float, t: int) -> HarmonicSumCheck:
    """Check (T^(1-a) - 1)/(1-a) <= sum_{k=1}^T k^-a <= T^(1-a)/(1-a) for a in (0,1)."""
    if not 0.0 < alpha < 1.0:
        raise AlphaRange(f"needs alpha in (0, 1), got {alpha}")
    if t < 1:
        raise RangeError(f"need T >= 1, got {t}")
    partial = math.fsum(k ** (-alpha) for k in range(1, t + 1))
    lower = (t ** (1.0 - alpha) - 1.0) / (1.0 - alpha)
    upper = t ** (1.0 - alpha) / (1.0 - alpha)
    return HarmonicSumCheck(
        lower_ok=lower <= partial + 1e-12,
        upper_ok=partial <= upper + 1e-12,
        partial_sum=partial,
        lower_bound=lower,
        upper_bound=upper,
    )


@dataclass(frozen=True)
class MultiplicativeProductCheck:
    few_ok: bool
    most_ok: bool
    log_product_few: float
    log_product_most: float
    few_bound: float
    most_bound: float


def multiplicative_product_check(n: float) -> MultiplicativeProductCheck:
    """Check the two product claims behind the multiplicative dichotomy.

    prod_{i>=0} (1 + (1 - 0.5/log n)^i) <= sqrt(n) and
    prod_{i<4 log n} (1 + (1 - 0.125/log n)^i) >= n^(3/2), both in log space.
    """
    log_n = math.log(n)
    if log_n <= 1.0:
        raise RangeError(f"need log n > 1, got n = {n}")

    ratio_few = 1.0 - 0.5 / log_n
    total_few = 0.0
    term = 1.0
    while term > 1e-18:
        total_few += math.log1p(term)
        term *= ratio_few
    ratio_most = 1.0 - 0.125 / log_n
    total_most = 0.0
    term = 1.0
    for _ in range(int(math.floor(4.0 * log_n))):
        total_most += math.log1p(term)
        term *= ratio_most

    return MultiplicativeProductCheck(
        few_ok=total_few <= 0.5 * log_n + 1e-9,
        most_ok=total_most >= 1.5 * log_n - 1e-9,
        log_product_few=total_few,
        log_product_most=total_most,
        few_bound=0.5 * log_n,
        most_bound=1.5 * log_n,
    )
