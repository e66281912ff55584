"""One-round protocol engines and exact per-round oracles.

A round of PUSH has every informed vertex send to one uniformly random
neighbor; a round of PULL has every uninformed vertex request from one
uniformly random neighbor; PUSH-PULL does both. Every transmission that
reaches an uninformed vertex is accepted independently with probability q,
so a vertex receiving k transmissions in the round is informed with
probability 1 - (1-q)**k. All vertices act on the informed set as it stood
at the start of the round (a vertex informed mid-round neither pushes nor
stops pulling until the next round).

Besides the sampler (:func:`step`), this module computes the exact one-round
law: closed-form expected |Delta| per state, and for tiny instances the full
joint distribution of the newly informed set, obtained by enumerating
neighbor choices only (acceptance coins are folded analytically, which cuts
the state space from (2d)**k to at most d**k profiles).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import RangeError, SetRangeError, SizeGuardExceeded
from .graphs import GraphSnapshot, as_vertex_mask

__all__ = [
    "ProtocolKind",
    "ProcessState",
    "DeltaDistribution",
    "ProcessPropertyReport",
    "initial_state",
    "step",
    "sample_delta_sizes",
    "exact_delta_expectation",
    "growth_factor",
    "enumerate_joint_distribution",
    "verify_process_properties",
]

ENUMERATION_PROFILE_GUARD = 1_000_000


class ProtocolKind(Enum):
    PUSH = "push"
    PULL = "pull"
    PUSH_PULL = "push-pull"

    @classmethod
    def parse(cls, text: str) -> "ProtocolKind":
        for kind in cls:
            if kind.value == text.strip().lower():
                return kind
        raise RangeError(f"unknown protocol {text!r}")

    @property
    def does_push(self) -> bool:
        return self in (ProtocolKind.PUSH, ProtocolKind.PUSH_PULL)

    @property
    def does_pull(self) -> bool:
        return self in (ProtocolKind.PULL, ProtocolKind.PUSH_PULL)


@dataclass(eq=False)
class ProcessState:
    """Round index plus the informed-vertex bitset; the set only ever grows."""

    t: int
    informed: np.ndarray

    @property
    def informed_count(self) -> int:
        return int(self.informed.sum())


def initial_state(n: int, informed_count: int = 1) -> ProcessState:
    if not 1 <= informed_count <= n:
        raise SetRangeError(f"initial informed count {informed_count} not in [1, {n}]")
    informed = np.zeros(n, dtype=bool)
    informed[:informed_count] = True
    return ProcessState(t=0, informed=informed)


def _check_q(q: float) -> float:
    if not 0.0 <= q <= 1.0:
        raise RangeError(f"credibility must be in [0, 1], got {q}")
    return float(q)


def step(
    kind: ProtocolKind,
    g: GraphSnapshot,
    state: ProcessState,
    q: float,
    rng: np.random.Generator,
) -> ProcessState:
    """Run one synchronous round and return the state at t + 1."""
    q = _check_q(q)
    informed = state.informed
    if informed.shape != (g.n,):
        raise SetRangeError(f"state has {informed.shape[0]} vertices, graph has {g.n}")
    if not informed.any():
        raise SetRangeError("informed set must be nonempty")
    new = informed.copy()

    if kind.does_push:
        pushers = np.flatnonzero(informed)
        targets = g.sample_neighbors(pushers, rng)
        accepted = rng.random(len(targets)) < q
        hits = targets[accepted & ~informed[targets]]
        new[hits] = True
    if kind.does_pull:
        pullers = np.flatnonzero(~informed)
        sources = g.sample_neighbors(pullers, rng)
        accepted = rng.random(len(pullers)) < q
        new[pullers[informed[sources] & accepted]] = True

    return ProcessState(t=state.t + 1, informed=new)


def sample_delta_sizes(
    kind: ProtocolKind,
    g: GraphSnapshot,
    informed,
    q: float,
    rng: np.random.Generator,
    n_samples: int,
) -> np.ndarray:
    """|Delta| for ``n_samples`` independent one-round draws from a fixed state.

    Semantically equivalent to ``n_samples`` calls of :func:`step` from the
    same state, but batched so Monte Carlo verification stays cheap.
    """
    q = _check_q(q)
    informed = as_vertex_mask(g.n, informed)
    keys = []

    if kind.does_push:
        pushers = np.flatnonzero(informed)
        flat = np.tile(pushers, n_samples)
        targets = g.sample_neighbors(flat, rng).reshape(n_samples, len(pushers))
        ok = (rng.random(targets.shape) < q) & ~informed[targets]
        rows, _ = np.nonzero(ok)
        keys.append(rows * g.n + targets[ok])
    if kind.does_pull:
        pullers = np.flatnonzero(~informed)
        flat = np.tile(pullers, n_samples)
        sources = g.sample_neighbors(flat, rng).reshape(n_samples, len(pullers))
        ok = informed[sources] & (rng.random(sources.shape) < q)
        rows, cols = np.nonzero(ok)
        keys.append(rows * g.n + pullers[cols])

    if not keys:
        return np.zeros(n_samples, dtype=np.int64)
    unique = np.unique(np.concatenate(keys))
    return np.bincount(unique // g.n, minlength=n_samples)


def _informed_degrees_of_uninformed(g: GraphSnapshot, informed: np.ndarray) -> np.ndarray:
    size = int(informed.sum())
    if not 1 <= size <= g.n - 1:
        raise SetRangeError(f"informed size {size} not in [1, {g.n - 1}]")
    return g.marked_degrees(informed)[~informed]


def exact_delta_expectation(kind: ProtocolKind, g: GraphSnapshot, informed, q: float) -> float:
    """Exact E[|Delta|] for one round from the given state.

    Per uninformed vertex u with k informed neighbors: PULL informs it with
    probability q*k/d, PUSH with 1 - (1 - q/d)**k, and PUSH-PULL with
    1 - (1 - q/d)**k * (1 - q*k/d) (push and pull failures are independent).
    """
    q = _check_q(q)
    informed = as_vertex_mask(g.n, informed)
    k = _informed_degrees_of_uninformed(g, informed).astype(np.float64)
    d = float(g.d)
    if kind is ProtocolKind.PULL:
        return float(np.sum(q * k / d))
    push_miss = np.power(1.0 - q / d, k)
    if kind is ProtocolKind.PUSH:
        return float(np.sum(1.0 - push_miss))
    return float(np.sum(1.0 - push_miss * (1.0 - q * k / d)))


def growth_factor(kind: ProtocolKind, g: GraphSnapshot, informed, q: float) -> float:
    """E[|Delta|] / min(|I|, |U|), the combined growth/shrink factor."""
    informed = as_vertex_mask(g.n, informed)
    size = int(informed.sum())
    if not 1 <= size <= g.n - 1:
        raise SetRangeError(f"informed size {size} not in [1, {g.n - 1}]")
    return exact_delta_expectation(kind, g, informed, q) / min(size, g.n - size)


# -- exact joint distribution (tiny instances) -------------------------------


@dataclass
class DeltaDistribution:
    """Exact law of the newly informed set for one round.

    ``support`` maps each possible Delta (frozenset of vertex ids) to its
    probability; ``marginals`` maps each uninformed vertex to its informing
    probability. Probabilities sum to 1 up to float rounding.
    """

    support: dict[frozenset, float]
    marginals: dict[int, float]

    def mean_size(self) -> float:
        return sum(p * len(s) for s, p in self.support.items())

    def variance_size(self) -> float:
        mean = self.mean_size()
        second = sum(p * len(s) ** 2 for s, p in self.support.items())
        return second - mean * mean

    def total_probability(self) -> float:
        return sum(self.support.values())


def _choice_branches(kind: ProtocolKind, g: GraphSnapshot, informed: np.ndarray):
    """Per-chooser outcome branches, acceptance coins not yet applied.

    Each branch list holds (uninformed-slot or None, probability) pairs: the
    slot that receives one transmission, or None when the choice is wasted.
    Choosers that cannot cause a transmission are dropped outright.
    """
    uninformed = np.flatnonzero(~informed)
    slot_of = {int(u): i for i, u in enumerate(uninformed)}
    d = g.d
    branches = []
    if kind.does_push:
        for v in np.flatnonzero(informed):
            slots = [slot_of[int(u)] for u in g.neighbors(v) if not informed[u]]
            if not slots:
                continue
            branch = [(s, 1.0 / d) for s in slots]
            if len(slots) < d:
                branch.append((None, (d - len(slots)) / d))
            branches.append(branch)
    if kind.does_pull:
        k = g.marked_degrees(informed)
        for slot, u in enumerate(uninformed):
            hit = k[u] / d
            if hit == 0.0:
                continue
            branch = [(slot, hit)]
            if hit < 1.0:
                branch.append((None, 1.0 - hit))
            branches.append(branch)
    return uninformed, branches


def _transmission_count_law(kind, g, informed) -> tuple[np.ndarray, dict[tuple, float]]:
    """Joint law of per-uninformed-vertex transmission counts.

    Convolves choosers one at a time; the number of *profiles* this covers is
    the product of branch sizes (at most d per chooser), guarded at
    ``ENUMERATION_PROFILE_GUARD``.
    """
    uninformed, branches = _choice_branches(kind, g, informed)
    profiles = 1
    for branch in branches:
        profiles *= len(branch)
        if profiles > ENUMERATION_PROFILE_GUARD:
            raise SizeGuardExceeded(
                f"would enumerate > {ENUMERATION_PROFILE_GUARD} choice profiles"
            )
    law: dict[tuple, float] = {tuple([0] * len(uninformed)): 1.0}
    for branch in branches:
        nxt: dict[tuple, float] = {}
        for kvec, p in law.items():
            for slot, bp in branch:
                if slot is None:
                    key = kvec
                else:
                    bumped = list(kvec)
                    bumped[slot] += 1
                    key = tuple(bumped)
                nxt[key] = nxt.get(key, 0.0) + p * bp
        law = nxt
    return uninformed, law


def enumerate_joint_distribution(
    kind: ProtocolKind, g: GraphSnapshot, informed, q: float
) -> DeltaDistribution:
    """Exact distribution of Delta by enumerating neighbor-choice profiles.

    Given a profile, each uninformed vertex that received k transmissions is
    informed independently with probability 1 - (1-q)**k; the coins are never
    enumerated.
    """
    q = _check_q(q)
    informed = as_vertex_mask(g.n, informed)
    size = int(informed.sum())
    if not 1 <= size <= g.n - 1:
        raise SetRangeError(f"informed size {size} not in [1, {g.n - 1}]")
    uninformed, law = _transmission_count_law(kind, g, informed)

    reachable = [
        slot for slot in range(len(uninformed)) if any(kvec[slot] for kvec in law)
    ]
    if 2 ** len(reachable) > ENUMERATION_PROFILE_GUARD:
        raise SizeGuardExceeded(
            f"support over {len(reachable)} reachable vertices exceeds the guard"
        )

    marginals = {int(u): 0.0 for u in uninformed}
    support: dict[frozenset, float] = {}
    for kvec, p in law.items():
        inform_p = [1.0 - (1.0 - q) ** kvec[slot] for slot in reachable]
        for slot, pu in zip(reachable, inform_p):
            marginals[int(uninformed[slot])] += p * pu
        for bits in range(2 ** len(reachable)):
            prob = p
            members = []
            for j, slot in enumerate(reachable):
                if bits >> j & 1:
                    prob *= inform_p[j]
                    members.append(int(uninformed[slot]))
                else:
                    prob *= 1.0 - inform_p[j]
            if prob == 0.0:
                continue
            key = frozenset(members)
            support[key] = support.get(key, 0.0) + prob
    if not support:
        support[frozenset()] = 1.0
    return DeltaDistribution(support=support, marginals=marginals)


@dataclass
class ProcessPropertyReport:
    """Outcome of checking negative correlation and the variance bound.

    ``worst_slack`` is the largest value of Pr[S subset of Delta] minus the
    product of the member marginals over all checked S; negative correlation
    holds when it is <= tolerance. ``var_margin`` is E|Delta| - Var|Delta|.
    """

    neg_corr_ok: bool
    var_ok: bool
    worst_slack: float
    var_margin: float
    subsets_checked: int
    mean_size: float
    exact_mean: float


def verify_process_properties(
    kind: ProtocolKind, g: GraphSnapshot, informed, q: float, tol: float = 1e-12
) -> ProcessPropertyReport:
    """Check Pr[S in Delta] <= prod of marginals for every S, and Var <= E.

    Subsets containing an unreachable vertex hold with equality (both sides
    are 0), so only subsets of reachable vertices are enumerated.
    """
    q = _check_q(q)
    informed = as_vertex_mask(g.n, informed)
    uninformed, law = _transmission_count_law(kind, g, informed)
    reachable = [
        slot for slot in range(len(uninformed)) if any(kvec[slot] for kvec in law)
    ]
    if 2 ** len(reachable) > ENUMERATION_PROFILE_GUARD:
        raise SizeGuardExceeded(
            f"checking all subsets of {len(reachable)} reachable vertices exceeds the guard"
        )

    entries = []  # (probability, per-slot informing probabilities)
    for kvec, p in law.items():
        entries.append((p, [1.0 - (1.0 - q) ** kvec[slot] for slot in reachable]))

    marginal = [sum(p * pu[j] for p, pu in entries) for j in range(len(reachable))]
    mean = sum(marginal)
    second = 0.0
    for p, pu in entries:
        m = sum(pu)
        var = sum(x * (1.0 - x) for x in pu)
        second += p * (var + m * m)
    variance = second - mean * mean

    worst = -math.inf
    checked = 0
    for r in range(2, len(reachable) + 1):
        for combo in itertools.combinations(range(len(reachable)), r):
            joint = sum(p * math.prod(pu[j] for j in combo) for p, pu in entries)
            product = math.prod(marginal[j] for j in combo)
            worst = max(worst, joint - product)
            checked += 1
    if checked == 0:
        worst = 0.0

    return ProcessPropertyReport(
        neg_corr_ok=worst <= tol,
        var_ok=variance <= mean + tol,
        worst_slack=worst,
        var_margin=mean - variance,
        subsets_checked=checked,
        mean_size=mean,
        exact_mean=exact_delta_expectation(kind, g, informed, q),
    )
