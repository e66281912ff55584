"""Credibility functions q(t): the per-round transmission acceptance probability.

Five families are supported. Constant keeps q fixed; the power-law family is
``(t + 1) ** -alpha``; the additive family is ``max(1 - t * alpha, 0)``; the
multiplicative family is ``(1 - alpha) ** t``; and Table holds explicit
per-round values with a tail value for rounds past the list (credibility does
not need to be monotone, so Table can express arbitrary schedules).

Each family also has a compact textual form used by the CLI and config files:
``const:0.5``, ``power:1.0``, ``add:0.01``, ``mult:0.02`` and
``table:1,0.9,0.5;tail=0.1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import RangeError

__all__ = [
    "Constant",
    "PowerLaw",
    "Additive",
    "Multiplicative",
    "Table",
    "Credibility",
    "parse_credibility",
    "format_credibility",
]


@dataclass(frozen=True)
class Constant:
    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise RangeError(f"constant credibility must be in [0, 1], got {self.q}")

    def value_at(self, t: int) -> float:
        return self.q

    def sup_from(self, t0: int) -> float:
        return self.q


@dataclass(frozen=True)
class PowerLaw:
    """q(t) = (t + 1) ** -alpha, equal to 1 in the first round."""

    alpha: float

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise RangeError(f"power-law exponent must be positive, got {self.alpha}")

    def value_at(self, t: int) -> float:
        return float(t + 1) ** (-self.alpha)

    def sup_from(self, t0: int) -> float:
        return self.value_at(max(t0, 0))


@dataclass(frozen=True)
class Additive:
    """q(t) = max(1 - t * alpha, 0); hits exactly 0 for t >= ceil(1/alpha)."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise RangeError(f"additive decay must be in (0, 1), got {self.alpha}")

    def value_at(self, t: int) -> float:
        return max(1.0 - t * self.alpha, 0.0)

    def sup_from(self, t0: int) -> float:
        return self.value_at(max(t0, 0))


@dataclass(frozen=True)
class Multiplicative:
    """q(t) = (1 - alpha) ** t."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise RangeError(f"multiplicative decay must be in (0, 1), got {self.alpha}")

    def value_at(self, t: int) -> float:
        return (1.0 - self.alpha) ** t

    def sup_from(self, t0: int) -> float:
        return self.value_at(max(t0, 0))


@dataclass(frozen=True)
class Table:
    """Explicit per-round values; ``tail`` is used for rounds past the list.

    ``tail`` defaults to the last listed value. The schedule may be arbitrary,
    in particular non-monotone.
    """

    values: tuple[float, ...]
    tail: float | None = field(default=None)

    def __post_init__(self):
        if len(self.values) == 0:
            raise RangeError("table credibility needs at least one value")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        tail = self.values[-1] if self.tail is None else float(self.tail)
        object.__setattr__(self, "tail", tail)
        for v in (*self.values, tail):
            if not 0.0 <= v <= 1.0:
                raise RangeError(f"table credibility values must be in [0, 1], got {v}")

    def value_at(self, t: int) -> float:
        if t < len(self.values):
            return self.values[t]
        return self.tail

    def sup_from(self, t0: int) -> float:
        t0 = max(t0, 0)
        listed = self.values[t0:] if t0 < len(self.values) else ()
        return max((*listed, self.tail))


Credibility = Constant | PowerLaw | Additive | Multiplicative | Table


def parse_credibility(text: str) -> Credibility:
    """Parse the textual credibility spec, e.g. ``mult:0.02``."""
    head, sep, rest = text.strip().partition(":")
    if not sep:
        raise RangeError(f"bad credibility spec {text!r}: missing ':'")
    head = head.lower()
    try:
        if head == "const":
            return Constant(float(rest))
        if head == "power":
            return PowerLaw(float(rest))
        if head == "add":
            return Additive(float(rest))
        if head == "mult":
            return Multiplicative(float(rest))
        if head == "table":
            body, _, tail_part = rest.partition(";")
            values = tuple(float(v) for v in body.split(",") if v.strip())
            tail = None
            if tail_part:
                key, _, val = tail_part.partition("=")
                if key.strip() != "tail":
                    raise RangeError(f"bad table option {tail_part!r}")
                tail = float(val)
            return Table(values, tail)
    except ValueError as exc:
        raise RangeError(f"bad credibility spec {text!r}: {exc}") from exc
    raise RangeError(f"unknown credibility family {head!r}")


def format_credibility(cred: Credibility) -> str:
    """Inverse of :func:`parse_credibility`."""
    if isinstance(cred, Constant):
        return f"const:{cred.q:g}"
    if isinstance(cred, PowerLaw):
        return f"power:{cred.alpha:g}"
    if isinstance(cred, Additive):
        return f"add:{cred.alpha:g}"
    if isinstance(cred, Multiplicative):
        return f"mult:{cred.alpha:g}"
    body = ",".join(f"{v:g}" for v in cred.values)
    return f"table:{body};tail={cred.tail:g}"
