"""Seeded Monte Carlo experiment running, aggregation, persistence and checks.

An :class:`ExperimentSpec` pins everything a run depends on: the dynamic
graph, protocol, credibility schedule, trial count, round budget and master
seed. Trials are independent units: trial ``i`` draws all of its round
randomness from streams ``(master_seed, i, t)``, so results are identical
under any trial scheduling and two runs of the same spec agree byte for
byte.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .bounds import basic_growth_bounds, shrink_bounds
from .credibility import (
    Additive,
    Constant,
    Credibility,
    Multiplicative,
    PowerLaw,
    format_credibility,
)
from .errors import DomainError, IoError, RangeError
from .graphs import (
    CyclicGraphs,
    DynamicGraphSpec,
    ResampledRegular,
    StaticGraph,
    complete_graph,
    conductance,
    cycle_graph,
    generate_random_regular,
    is_connected,
    matching_graph,
)
from .predictor import (
    PredictorConfig,
    additive_thresholds,
    fixed_q_runtime,
    harmonic_sum_check,
    multiplicative_product_check,
    multiplicative_thresholds,
    powerlaw_expectation_bound,
    powerlaw_thresholds,
    stirling_product_check,
    tau2_rounds,
    tau2_threshold,
    tau3_rounds,
    tau3_threshold,
)
from .protocol import (
    ProtocolKind,
    exact_delta_expectation,
    growth_factor,
    initial_state,
    step,
    verify_process_properties,
)
from .seeds import mix_seed, rng_for

__all__ = [
    "RecordLevel",
    "ExperimentSpec",
    "TrialRecord",
    "ExperimentSummary",
    "resolved_max_rounds",
    "run_trial",
    "run_experiment",
    "summarize",
    "predictor_comparison",
    "export_records",
    "export_summary",
    "load_records_csv",
    "load_records_jsonl",
    "tiny_corpus",
    "iter_tiny_instances",
    "VerifyReport",
    "verify_suite",
]


class RecordLevel(Enum):
    SUMMARY = "summary"
    PER_ROUND = "per_round"
    PER_ROUND_EXACT = "per_round_with_exact_delta"

    @classmethod
    def parse(cls, text: str) -> "RecordLevel":
        aliases = {
            "summary": cls.SUMMARY,
            "per-round": cls.PER_ROUND,
            "per_round": cls.PER_ROUND,
            "per-round-exact": cls.PER_ROUND_EXACT,
            "per_round_with_exact_delta": cls.PER_ROUND_EXACT,
        }
        key = text.strip().lower()
        if key not in aliases:
            raise RangeError(f"unknown record level {text!r}")
        return aliases[key]


@dataclass(frozen=True, eq=False)
class ExperimentSpec:
    graph: DynamicGraphSpec
    protocol: ProtocolKind
    credibility: Credibility
    initial_informed: int = 1
    trials: int = 1
    max_rounds: int | None = None
    master_seed: int = 0
    record_level: RecordLevel = RecordLevel.PER_ROUND

    def __post_init__(self):
        if self.trials < 1:
            raise RangeError(f"trials must be >= 1, got {self.trials}")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise RangeError(f"max rounds must be >= 1, got {self.max_rounds}")
        if not 1 <= self.initial_informed <= self.graph.n:
            raise RangeError(
                f"initial informed count {self.initial_informed} not in [1, {self.graph.n}]"
            )


def resolved_max_rounds(spec: ExperimentSpec) -> int:
    """Explicit budget, else 10x the fixed-q runtime estimate, else 100 log n.

    The fallback keeps runs with vanishing credibility (power-law alpha > 1
    never completes) from spinning forever.
    """
    if spec.max_rounds is not None:
        return spec.max_rounds
    if isinstance(spec.credibility, Constant):
        try:
            return max(1, math.ceil(10.0 * fixed_q_runtime(spec.protocol, spec.credibility.q, spec.graph.n)))
        except (RangeError, DomainError):
            pass
    return max(1, math.ceil(100.0 * math.log(spec.graph.n)))


@dataclass
class TrialRecord:
    """Per-trial outcome; per-round fields are None at summary record level."""

    trial: int
    final_informed: int
    completion_round: int | None
    seed: int | None = None
    n: int | None = None
    informed_counts: list[int] | None = None
    q_values: list[float] | None = None
    exact_deltas: list[float] | None = None


def run_trial(spec: ExperimentSpec, trial_index: int) -> TrialRecord:
    """Run one seeded trial until everyone is informed or the budget runs out."""
    n = spec.graph.n
    budget = resolved_max_rounds(spec)
    state = initial_state(n, spec.initial_informed)
    counts = [state.informed_count]
    qs = [spec.credibility.value_at(0)]
    deltas: list[float] = []
    completion = 0 if state.informed_count == n else None

    for t in range(budget):
        if state.informed_count == n:
            break
        q_t = spec.credibility.value_at(t)
        g = spec.graph.snapshot(t)
        if spec.record_level is RecordLevel.PER_ROUND_EXACT:
            deltas.append(exact_delta_expectation(spec.protocol, g, state.informed, q_t))
        state = step(spec.protocol, g, state, q_t, rng_for(spec.master_seed, trial_index, t))
        counts.append(state.informed_count)
        qs.append(spec.credibility.value_at(state.t))
        if completion is None and state.informed_count == n:
            completion = state.t

    per_round = spec.record_level is not RecordLevel.SUMMARY
    return TrialRecord(
        trial=trial_index,
        seed=mix_seed(spec.master_seed, trial_index),
        n=n,
        final_informed=counts[-1],
        completion_round=completion,
        informed_counts=counts if per_round else None,
        q_values=qs if per_round else None,
        exact_deltas=deltas if spec.record_level is RecordLevel.PER_ROUND_EXACT else None,
    )


@dataclass
class ExperimentSummary:
    trials: int
    n: int
    fraction_completed: float
    completion_mean: float | None
    completion_median: float | None
    completion_quantiles: dict[str, float] | None
    final_informed_mean: float
    final_informed_median: float
    mean_informed_fraction_by_round: list[float] | None
    predictor: dict | None
    config: dict

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _describe_graph(graph: DynamicGraphSpec) -> str:
    if isinstance(graph, StaticGraph):
        g = graph.graph
        kind = "complete" if g.is_complete else "static"
        return f"{kind}(n={g.n}, d={g.d})"
    if isinstance(graph, CyclicGraphs):
        return f"cyclic({len(graph.graphs)} graphs, n={graph.n})"
    if isinstance(graph, ResampledRegular):
        return f"dynamic-regular(n={graph.n}, d={graph.d}, seed={graph.seed})"
    return f"matching-sequence(n={graph.n}, seed={graph.seed})"


def summarize(spec: ExperimentSpec, records: list[TrialRecord]) -> ExperimentSummary:
    """Aggregate trial records; every statistic is recomputable from exports."""
    n = spec.graph.n
    completions = [r.completion_round for r in records if r.completion_round is not None]
    finals = np.array([r.final_informed for r in records], dtype=float)

    quantiles = None
    if completions:
        arr = np.array(completions, dtype=float)
        quantiles = {
            "q10": float(np.quantile(arr, 0.10)),
            "q25": float(np.quantile(arr, 0.25)),
            "q75": float(np.quantile(arr, 0.75)),
            "q90": float(np.quantile(arr, 0.90)),
        }

    by_round = None
    traced = [r.informed_counts for r in records if r.informed_counts]
    if traced:
        horizon = max(len(c) for c in traced)
        total = np.zeros(horizon)
        for c in traced:
            padded = np.array(c + [c[-1]] * (horizon - len(c)), dtype=float)
            total += padded
        by_round = list(total / (len(traced) * n))

    return ExperimentSummary(
        trials=len(records),
        n=n,
        fraction_completed=len(completions) / len(records) if records else 0.0,
        completion_mean=float(np.mean(completions)) if completions else None,
        completion_median=float(np.median(completions)) if completions else None,
        completion_quantiles=quantiles,
        final_informed_mean=float(finals.mean()) if len(finals) else 0.0,
        final_informed_median=float(np.median(finals)) if len(finals) else 0.0,
        mean_informed_fraction_by_round=by_round,
        predictor=predictor_comparison(spec),
        config={
            "graph": _describe_graph(spec.graph),
            "n": n,
            "protocol": spec.protocol.value,
            "credibility": format_credibility(spec.credibility),
            "initial_informed": spec.initial_informed,
            "trials": spec.trials,
            "max_rounds": resolved_max_rounds(spec),
            "master_seed": spec.master_seed,
            "record_level": spec.record_level.value,
        },
    )


def run_experiment(spec: ExperimentSpec) -> ExperimentSummary:
    """Run all trials (independent streams; any scheduling gives the same result)."""
    records = [run_trial(spec, i) for i in range(spec.trials)]
    return summarize(spec, records)


def predictor_comparison(spec: ExperimentSpec, lam: float | None = None) -> dict | None:
    """Theoretical reference values for the experiment's protocol/credibility pair.

    Present exactly for the four named credibility families; None for Table
    schedules. Conductance floors that need lambda are included only when a
    measured lambda is supplied.
    """
    kind, cred, n = spec.protocol, spec.credibility, spec.graph.n
    psi = 2.0 if kind is ProtocolKind.PUSH_PULL else 1.0

    if isinstance(cred, Constant):
        out: dict = {"family": "constant", "q": cred.q}
        try:
            out["fixed_q_runtime"] = fixed_q_runtime(kind, cred.q, n)
        except (RangeError, DomainError):
            out["fixed_q_runtime"] = None
        return _jsonable(out)
    if isinstance(cred, PowerLaw):
        out = {"family": "power-law", "alpha": cred.alpha}
        c_grow = 2.0 if kind is ProtocolKind.PUSH_PULL else 1.0
        if cred.alpha > 1.0:
            out["expectation_bound"] = powerlaw_expectation_bound(cred.alpha, c_grow)
        else:
            phi = None
            if lam is not None:
                floor = (1.0 - lam) / 2.0
                factor = {ProtocolKind.PUSH: 0.5, ProtocolKind.PULL: 1.0, ProtocolKind.PUSH_PULL: 0.75}
                phi = floor * factor[kind]
            th = powerlaw_thresholds(cred.alpha, phi if phi else 1e-9, psi, n)
            out["t1_max"] = th.t1_max
            if phi:
                out["t2_min"] = th.t2_min
        return _jsonable(out)
    if isinstance(cred, Additive):
        out = {"family": "additive", "alpha": cred.alpha, "q_zero_round": math.ceil(1.0 / cred.alpha)}
        # n >= 65 keeps the reference zeta = n^(-1/4) inside its valid window
        if lam is not None and n >= 65 and kind in (ProtocolKind.PUSH, ProtocolKind.PULL):
            gamma = (1.0 - lam) if kind is ProtocolKind.PULL else 1.0 - 7.0 * math.sqrt(lam + 1.0 / math.log(n))
            if gamma > 0:
                th = additive_thresholds(n, zeta=n ** -0.25, gamma_p=gamma)
                out["alpha_upper_regime_at_quarter_zeta"] = th.alpha_upper_regime
                out["alpha_lower_regime"] = th.alpha_lower_regime
        return _jsonable(out)
    if isinstance(cred, Multiplicative):
        th = multiplicative_thresholds(n)
        return _jsonable(
            {
                "family": "multiplicative",
                "alpha": cred.alpha,
                "alpha_few": th.alpha_few,
                "alpha_most": th.alpha_most,
                "t_most": th.t_most,
                "regime": "few" if cred.alpha >= th.alpha_few else ("most" if cred.alpha <= th.alpha_most else "between"),
            }
        )
    return None


# -- persistence ---------------------------------------------------------------

PER_ROUND_HEADER = ("trial", "round", "informed", "q_t")
SUMMARY_HEADER = ("trial", "completion", "final")


def export_records(records: list[TrialRecord], path, fmt: str = "csv") -> None:
    """Write records as CSV or JSONL (UTF-8, LF newlines, headers present).

    CSV uses per-round rows (trial, round, informed, q_t) when the records
    carry trajectories, else summary rows (trial, completion, final). JSONL
    writes one full record object per line.
    """
    if fmt not in ("csv", "jsonl"):
        raise RangeError(f"unknown export format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            if fmt == "jsonl":
                for r in records:
                    fh.write(json.dumps(_jsonable(asdict(r)), sort_keys=True) + "\n")
                return
            writer = csv.writer(fh, lineterminator="\n")
            per_round = any(r.informed_counts for r in records)
            if per_round or not records:
                writer.writerow(PER_ROUND_HEADER)
                for r in records:
                    for t, informed in enumerate(r.informed_counts or ()):
                        q_t = r.q_values[t] if r.q_values else ""
                        writer.writerow([r.trial, t, informed, q_t])
            else:
                writer.writerow(SUMMARY_HEADER)
                for r in records:
                    completion = "" if r.completion_round is None else r.completion_round
                    writer.writerow([r.trial, completion, r.final_informed])
    except OSError as exc:
        raise IoError(str(exc)) from exc


def export_summary(summary: ExperimentSummary, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(summary.to_json() + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def load_records_csv(path) -> list[TrialRecord]:
    """Re-import an exported CSV (either row schema)."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoError(str(exc)) from exc
    if not rows:
        raise RangeError(f"{path}: missing header")
    header = tuple(rows[0])
    if header == PER_ROUND_HEADER:
        by_trial: dict[int, list[tuple[int, int, float]]] = {}
        for trial, rnd, informed, q_t in rows[1:]:
            by_trial.setdefault(int(trial), []).append(
                (int(rnd), int(informed), float(q_t) if q_t else 0.0)
            )
        records = []
        for trial in sorted(by_trial):
            entries = sorted(by_trial[trial])
            counts = [inf for _, inf, _ in entries]
            qs = [q for _, _, q in entries]
            records.append(
                TrialRecord(
                    trial=trial,
                    final_informed=counts[-1],
                    completion_round=None,
                    informed_counts=counts,
                    q_values=qs,
                )
            )
        return records
    if header == SUMMARY_HEADER:
        records = []
        for trial, completion, final in rows[1:]:
            records.append(
                TrialRecord(
                    trial=int(trial),
                    final_informed=int(final),
                    completion_round=None if completion == "" else int(completion),
                )
            )
        return records
    raise RangeError(f"{path}: unrecognized header {header}")


def load_records_jsonl(path) -> list[TrialRecord]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh if ln.strip()]
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return [TrialRecord(**json.loads(ln)) for ln in lines]


# -- built-in verification suites ----------------------------------------------


def tiny_corpus() -> list[tuple[str, object]]:
    """The exhaustively checkable instances: K2-K5, C3-C6 and two matchings."""
    graphs: list[tuple[str, object]] = []
    for n in range(2, 6):
        graphs.append((f"K{n}", complete_graph(n)))
    for n in range(3, 7):
        graphs.append((f"C{n}", cycle_graph(n)))
    graphs.append(("M4", matching_graph([(0, 1), (2, 3)])))
    graphs.append(("M6", matching_graph([(0, 1), (2, 3), (4, 5)])))
    return graphs


TINY_Q_GRID = (0.25, 0.5, 1.0)


def iter_tiny_instances():
    """Yield (name, graph, informed mask, q, kind) over the whole tiny corpus."""
    for name, g in tiny_corpus():
        for bits in range(1, 2**g.n - 1):
            informed = np.array([(bits >> v) & 1 == 1 for v in range(g.n)])
            for q in TINY_Q_GRID:
                for kind in ProtocolKind:
                    yield name, g, informed, q, kind


@dataclass
class VerifyReport:
    scope: str
    ok: bool
    checks: dict[str, dict]

    def lines(self) -> list[str]:
        out = []
        for name, info in self.checks.items():
            status = "PASS" if info.get("ok") else "FAIL"
            detail = ", ".join(f"{k}={v}" for k, v in info.items() if k != "ok")
            out.append(f"[{status}] {self.scope}/{name}: {detail}")
        return out


def _verify_tiny_exhaustive() -> VerifyReport:
    worst_corr = -math.inf
    worst_var = math.inf
    worst_mean_err = 0.0
    instances = 0
    for _, g, informed, q, kind in iter_tiny_instances():
        rep = verify_process_properties(kind, g, informed, q)
        worst_corr = max(worst_corr, rep.worst_slack)
        worst_var = min(worst_var, rep.var_margin)
        worst_mean_err = max(worst_mean_err, abs(rep.mean_size - rep.exact_mean))
        instances += 1
    checks = {
        "negative_correlation": {"ok": worst_corr <= 1e-12, "worst_slack": worst_corr},
        "bounded_variance": {"ok": worst_var >= -1e-12, "worst_margin": worst_var},
        "oracle_mean_equality": {"ok": worst_mean_err <= 1e-12, "worst_abs_err": worst_mean_err},
        "instances": {"ok": True, "count": instances},
    }
    return VerifyReport("tiny_exhaustive", all(c["ok"] for c in checks.values()), checks)


def _verify_bound_sandwich(samples: int = 1000, seed: int = 20_240_601) -> VerifyReport:
    rng = rng_for(seed)
    tol = 1e-9
    violations = 0
    worst = math.inf
    checked = 0
    for i in range(samples):
        d = int(rng.integers(2, 17))
        n = int(rng.integers(max(d + 1, 8), 129))
        if (n * d) % 2:
            n += 1
        g = generate_random_regular(n, d, seed=mix_seed(seed, i))
        connected = is_connected(g)
        size = int(rng.integers(1, n))
        informed = np.zeros(n, dtype=bool)
        informed[rng.choice(n, size=size, replace=False)] = True
        q = float(rng.choice(np.linspace(0.1, 1.0, 10)))
        phi = conductance(g, informed)
        for kind in ProtocolKind:
            gf = growth_factor(kind, g, informed, q)
            basic = basic_growth_bounds(kind, q, phi)
            for slack in (gf - basic.lower, basic.upper - gf):
                worst = min(worst, slack)
                violations += slack < -tol
                checked += 1
            if size >= n / 2:
                sb = shrink_bounds(kind, q, phi, d)
                lower_slack = gf - sb.lower
                worst = min(worst, lower_slack)
                violations += lower_slack < -tol
                checked += 1
                if not sb.upper_requires_connected or connected:
                    upper_slack = sb.upper - gf
                    worst = min(worst, upper_slack)
                    violations += upper_slack < -tol
                    checked += 1
    checks = {
        "table_sandwich": {
            "ok": violations == 0,
            "violations": violations,
            "worst_slack": worst,
            "inequalities": checked,
        }
    }
    return VerifyReport("bound_sandwich", violations == 0, checks)


def _verify_predictor_claims() -> VerifyReport:
    checks: dict[str, dict] = {}

    stirling_ok = True
    for k in range(7):
        rep = stirling_product_check(1.0 / 2**k)
        stirling_ok &= rep.lower_ok and rep.upper_ok
    checks["stirling_product"] = {"ok": stirling_ok}

    mult_ok = True
    for log_n in (10.0, 20.0):
        rep = multiplicative_product_check(math.exp(log_n))
        mult_ok &= rep.few_ok and rep.most_ok
    checks["multiplicative_product"] = {"ok": mult_ok}

    harm_ok = True
    for t in (10, 100, 1000):
        for alpha in (0.25, 0.5, 0.75):
            rep = harmonic_sum_check(alpha, t)
            harm_ok &= rep.lower_ok and rep.upper_ok
    checks["generalized_harmonic"] = {"ok": harm_ok}

    # At the theory's xi = 1e-30 every tau2 threshold sits at the 1/xi^2
    # scale, far beyond any scan; a larger configured xi keeps the
    # closed-form comparison meaningful.
    tau_ok = True
    cfg = PredictorConfig(xi=0.5)
    for a, b, c_grow, nu in ((2.0, 500.0, 1.0, 0.3), (10.0, 1e5, 2.0, 0.7)):
        threshold = tau2_threshold(a, b, c_grow, cfg.xi)
        expected = 5 + math.ceil(threshold / math.log1p(nu))
        tau_ok &= tau2_rounds(lambda t: nu, 5, a, b, c_grow, cfg) == expected
    for c, d_, c_shrink, nu in ((250.0, 0.75, 0.5, 0.2), (4096.0, 12.0, 0.9, 0.05)):
        threshold = tau3_threshold(c, d_, c_shrink)
        expected = 3 + math.ceil(threshold / -math.log1p(-nu))
        tau_ok &= tau3_rounds(lambda t: nu, 3, c, d_, c_shrink) == expected
    checks["stopping_time_closed_forms"] = {"ok": tau_ok}

    ok = all(c["ok"] for c in checks.values())
    return VerifyReport("predictor_claims", ok, checks)


def verify_suite(scope: str) -> VerifyReport:
    """Run one built-in verification suite.

    ``tiny_exhaustive`` checks negative correlation, the variance bound and
    oracle mean agreement over every tiny-corpus instance;
    ``bound_sandwich`` samples 1000 random (graph, set, q) triples and checks
    the growth/shrink brackets; ``predictor_claims`` runs the numeric claim
    oracles and the stopping-time closed forms.
    """
    if scope == "tiny_exhaustive":
        return _verify_tiny_exhaustive()
    if scope == "bound_sandwich":
        return _verify_bound_sandwich()
    if scope == "predictor_claims":
        return _verify_predictor_claims()
    raise RangeError(f"unknown verify scope {scope!r}")
