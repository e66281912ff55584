"""Closed-form bounds on the expected growth and shrink factors.

All bounds are in terms of the round's credibility q, the conductance phi of
the informed set, the degree d, and (for the refined forms) the spectral
expansion lambda. Lower bounds are clamped at 0 instead of going negative
(a negative lower bound carries no information).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidEpsilon, KindError, RangeError
from .protocol import ProtocolKind

__all__ = [
    "BoundSet",
    "ProcessConstants",
    "basic_growth_bounds",
    "refined_spectral_lower",
    "shrink_bounds",
    "classify_process",
]


@dataclass(frozen=True)
class BoundSet:
    """A [lower, upper] bracket with the rule that produced it.

    ``upper_requires_connected`` marks brackets whose upper side is only
    valid on connected graphs (the PUSH shrink bound).
    """

    lower: float
    upper: float
    source: str
    upper_requires_connected: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise RangeError(f"lower {self.lower} > upper {self.upper} ({self.source})")


@dataclass(frozen=True)
class ProcessConstants:
    """Certified growth/shrink constants for an abstract spreading process."""

    c_grow: float
    c_shrink: float

    def __post_init__(self):
        if self.c_grow <= 0:
            raise RangeError(f"c_grow must be positive, got {self.c_grow}")
        if self.c_shrink >= 1:
            raise RangeError(f"c_shrink must be < 1, got {self.c_shrink}")


def _check_unit(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise RangeError(f"{name} must be in [0, 1], got {value}")
    return float(value)


def basic_growth_bounds(kind: ProtocolKind, q: float, phi: float) -> BoundSet:
    """Conductance-based bracket for E[|Delta|] / min(|I|, |U|).

    PUSH:      [q(1 - q/2) phi, q phi]
    PULL:      exactly q phi
    PUSH-PULL: [(3/2) q (1 - q/2) phi, 2 q phi]
    """
    q = _check_unit("q", q)
    phi = _check_unit("phi", phi)
    if kind is ProtocolKind.PULL:
        return BoundSet(q * phi, q * phi, "basic/pull")
    if kind is ProtocolKind.PUSH:
        return BoundSet(q * (1.0 - q / 2.0) * phi, q * phi, "basic/push")
    return BoundSet(1.5 * q * (1.0 - q / 2.0) * phi, 2.0 * q * phi, "basic/push-pull")


def refined_spectral_lower(
    kind: ProtocolKind, q: float, lam: float, informed_fraction: float
) -> float:
    """Spectral lower bound on E[|Delta|]/|I| for |I| <= n/2.

    With beta = lambda + |I|/n: PUSH gives q(1 - 7 sqrt(beta)) and PUSH-PULL
    gives q(2 - 12 sqrt(beta)), clamped at 0 (beta large makes them vacuous).
    """
    if kind is ProtocolKind.PULL:
        raise KindError("refined spectral lower bound covers PUSH and PUSH-PULL only")
    q = _check_unit("q", q)
    lam = _check_unit("lambda", lam)
    if not 0.0 <= informed_fraction <= 0.5:
        raise RangeError(f"informed fraction must be in [0, 1/2], got {informed_fraction}")
    beta = lam + informed_fraction
    root = math.sqrt(beta)
    if kind is ProtocolKind.PUSH:
        return max(0.0, q * (1.0 - 7.0 * root))
    return max(0.0, q * (2.0 - 12.0 * root))


def shrink_bounds(kind: ProtocolKind, q: float, phi: float, d: int) -> BoundSet:
    """Bracket for E[|Delta|] / |U| in the regime |I| >= n/2.

    PUSH:      [(1 - e^-q) phi,  1 - e^{-phi q} (1 - phi q^2 / d)]
               (upper side valid on connected graphs, d >= 2)
    PULL:      exactly q phi
    PUSH-PULL: [(1 - e^-q (1 - q)) phi,  1 - (1-q)^phi (1 - q phi)]

    For a perfect matching (d = 1) with q = 1 the exact factor is phi, which
    both PUSH-PULL sides contain; the PUSH upper formula needs d >= 2.
    """
    q = _check_unit("q", q)
    phi = _check_unit("phi", phi)
    if d < 1:
        raise RangeError(f"degree must be >= 1, got {d}")
    if kind is ProtocolKind.PULL:
        return BoundSet(q * phi, q * phi, "shrink/pull")
    if kind is ProtocolKind.PUSH:
        lower = max(0.0, (1.0 - math.exp(-q)) * phi)
        upper = 1.0 - math.exp(-phi * q) * (1.0 - phi * q * q / d)
        return BoundSet(
            lower,
            max(lower, upper),
            "shrink/push (upper needs connected, d >= 2)",
            upper_requires_connected=True,
        )
    lower = max(0.0, (1.0 - math.exp(-q) * (1.0 - q)) * phi)
    upper = 1.0 - (1.0 - q) ** phi * (1.0 - q * phi)
    return BoundSet(lower, max(lower, upper), "shrink/push-pull")


def classify_process(
    kind: ProtocolKind,
    q_sup: float,
    epsilon: float,
    always_connected: bool = False,
) -> ProcessConstants:
    """Certify (c_grow, c_shrink) for a protocol under sup_t q(t) <= 1 - epsilon.

    PUSH is 1-growing and (1 - epsilon)-shrinking, or (1 - 1/(2e))-shrinking
    on always-connected sequences even with epsilon = 0. PULL is 1-growing
    and (1 - epsilon)-shrinking; PUSH-PULL is 2-growing and
    (1 - epsilon^2)-shrinking. Both need epsilon > 0.
    """
    q_sup = _check_unit("q_sup", q_sup)
    if epsilon < 0:
        raise RangeError(f"epsilon must be >= 0, got {epsilon}")
    if epsilon > 0 and q_sup > 1.0 - epsilon + 1e-15:
        raise RangeError(f"need q_sup <= 1 - epsilon, got {q_sup} > {1 - epsilon}")

    if kind is ProtocolKind.PUSH:
        candidates = []
        if epsilon > 0:
            candidates.append(1.0 - epsilon)
        if always_connected:
            candidates.append(1.0 - math.exp(-1.0) / 2.0)
        if not candidates:
            raise InvalidEpsilon(
                "PUSH needs epsilon > 0 or an always-connected graph sequence"
            )
        return ProcessConstants(c_grow=1.0, c_shrink=min(candidates))
    if epsilon <= 0:
        raise InvalidEpsilon(f"{kind.value} needs epsilon > 0 for a shrink certificate")
    if kind is ProtocolKind.PULL:
        return ProcessConstants(c_grow=1.0, c_shrink=1.0 - epsilon)
    return ProcessConstants(c_grow=2.0, c_shrink=1.0 - epsilon * epsilon)
