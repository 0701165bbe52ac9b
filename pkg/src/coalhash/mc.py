"""Monte Carlo harness: random tables, pooled histograms, convergence and
concentration statistics against the analytic limits.

Replicates are reproducible and independent: replicate ``r`` of an experiment
with seed ``s`` draws from ``PCG64(SeedSequence(entropy=s, spawn_key=(r,)))``,
so reports are bit-stable for a fixed config and replicates may be computed
in any order (or in parallel) without changing the result.

The conditional displacement distribution of a finished table is read off
exactly as ``count(k) / n`` per replicate; no random index is sampled, which
removes a layer of noise without changing what is being estimated.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import chi2 as _chi2_dist

from ._kernel import replay
from .limits import LimitDistribution, LimitSpec, build_distribution
from .table import HashTable, Policy

SCHEMA_VERSION = 1

# Spreads are tracked for p-hat(k) up to this k in concentration tests.
_SPREAD_K = 5


def replicate_stream(seed: int, index: int) -> np.random.Generator:
    """The documented (seed, replicate-index) -> child-generator derivation."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class ExperimentConfig:
    m: int
    n: int
    policy: Policy
    replicates: int
    seed: int
    k_max: int = 25

    def __post_init__(self):
        object.__setattr__(self, "policy", Policy(self.policy))
        if self.policy is Policy.UNSUCCESSFUL:
            raise ValueError("experiments build tables under policy L or E")
        if not 1 <= self.n <= self.m:
            raise ValueError(f"need 1 <= n <= m, got n={self.n}, m={self.m}")
        if self.replicates < 1:
            raise ValueError("need at least one replicate")
        if self.k_max < 1:
            raise ValueError("histogram cutoff k_max must be >= 1")

    @property
    def alpha(self) -> float:
        return self.n / self.m

    def to_dict(self) -> dict:
        d = asdict(self)
        d["policy"] = self.policy.value
        return d


@dataclass(frozen=True)
class ReplicateStats:
    """One replicate's empirical law: p-hat(0..k_max), lumped tail, moments."""

    probs: tuple[float, ...]
    tail: float
    mean: float
    variance: float


@dataclass(frozen=True)
class PooledHistogram:
    """Counts summed over all replicates; moments over the union of draws."""

    counts: tuple[int, ...]
    tail_count: int
    total: int
    mean: float
    variance: float

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(c / self.total for c in self.counts)

    @property
    def tail_prob(self) -> float:
        return self.tail_count / self.total


@dataclass(frozen=True)
class FitStats:
    """Distance of the pooled empirical law from the analytic limit."""

    tv_distance: float
    chi_square: float
    chi_square_dof: int
    chi_square_pvalue: float


@dataclass(frozen=True)
class SpreadStats:
    """Across-replicate sample standard deviations (the concentration data)."""

    mean_std: float
    variance_std: float
    prob_std: tuple[float, ...]  # p-hat(k) for k = 0.._SPREAD_K
    max_prob_std: float  # over all k = 0..k_max


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    pooled_policy: PooledHistogram
    pooled_u: PooledHistogram
    replicates_policy: tuple[ReplicateStats, ...]
    replicates_u: tuple[ReplicateStats, ...]
    distance_policy: FitStats
    distance_u: FitStats
    spread_policy: SpreadStats
    spread_u: SpreadStats

    def to_dict(self) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "pooled_policy": asdict(self.pooled_policy),
            "pooled_u": asdict(self.pooled_u),
            "replicates_policy": [asdict(r) for r in self.replicates_policy],
            "replicates_u": [asdict(r) for r in self.replicates_u],
            "distance_policy": asdict(self.distance_policy),
            "distance_u": asdict(self.distance_u),
            "spread_policy": asdict(self.spread_policy),
            "spread_u": asdict(self.spread_u),
        }
        return d


def build_random_table(m: int, n: int, policy: Policy, rng: np.random.Generator) -> HashTable:
    """n uniform addresses on 1..m from ``rng``, inserted sequentially."""
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    table = HashTable(m, policy)
    for h in rng.integers(1, m + 1, size=n):
        table.insert(int(h))
    return table


def _bin_counts(values: np.ndarray, k_max: int) -> tuple[np.ndarray, int]:
    counts = np.bincount(values, minlength=k_max + 1)
    head = counts[: k_max + 1]
    return head, int(counts[k_max + 1 :].sum())


def _replicate_stats(values: np.ndarray, k_max: int) -> tuple[ReplicateStats, np.ndarray, int]:
    head, tail = _bin_counts(values, k_max)
    total = values.size
    mean = float(values.mean())
    variance = float(values.var())
    stats = ReplicateStats(
        probs=tuple(float(c) / total for c in head),
        tail=tail / total,
        mean=mean,
        variance=variance,
    )
    return stats, head, tail


def _pool(reps: list[ReplicateStats], heads: list[np.ndarray], tails: list[int]) -> PooledHistogram:
    counts = np.sum(heads, axis=0)
    total = sum(int(h.sum()) for h in heads) + sum(tails)
    mean = sum(r.mean for r in reps) / len(reps)
    second = sum(r.variance + r.mean * r.mean for r in reps) / len(reps)
    return PooledHistogram(
        counts=tuple(int(c) for c in counts),
        tail_count=sum(tails),
        total=total,
        mean=mean,
        variance=second - mean * mean,
    )


def _fit(pooled: PooledHistogram, limit: LimitDistribution, k_max: int) -> FitStats:
    p_head, p_tail = limit.head_and_tail(k_max)
    emp = list(pooled.probs) + [pooled.tail_prob]
    ref = list(p_head) + [p_tail]
    tv = 0.5 * sum(abs(a - b) for a, b in zip(emp, ref))
    obs = list(pooled.counts) + [pooled.tail_count]
    exp = [p * pooled.total for p in ref]
    # Pool adjacent bins until every expected count reaches 5 (the tail is the
    # natural sink for the geometric decay; a leading zero bin is swept right).
    po: list[float] = []
    pe: list[float] = []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= 5.0:
            po.append(acc_o)
            pe.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0.0 or acc_o > 0.0:
        if pe:
            po[-1] += acc_o
            pe[-1] += acc_e
        else:
            po.append(acc_o)
            pe.append(acc_e)
    stat = sum((o - e) ** 2 / e for o, e in zip(po, pe) if e > 0.0)
    dof = max(len(pe) - 1, 0)
    pvalue = float(_chi2_dist.sf(stat, dof)) if dof > 0 else 1.0
    return FitStats(tv_distance=tv, chi_square=stat, chi_square_dof=dof, chi_square_pvalue=pvalue)


def _std(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(np.asarray(values), ddof=1))


def _spreads(reps: list[ReplicateStats], k_max: int) -> SpreadStats:
    prob_std = tuple(
        _std([r.probs[k] for r in reps]) for k in range(min(_SPREAD_K, k_max) + 1)
    )
    all_std = [_std([r.probs[k] for r in reps]) for k in range(k_max + 1)]
    return SpreadStats(
        mean_std=_std([r.mean for r in reps]),
        variance_std=_std([r.variance for r in reps]),
        prob_std=prob_std,
        max_prob_std=max(all_std),
    )


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Build ``config.replicates`` random tables and score them against the
    limiting laws at load factor n/m (both the insertion policy and the
    unsuccessful-search law)."""
    alpha = config.alpha
    limit_pol = build_distribution(LimitSpec(alpha, config.policy), eps=1e-10)
    limit_u = build_distribution(LimitSpec(alpha, Policy.UNSUCCESSFUL), eps=1e-10)
    early = config.policy is Policy.EARLY

    reps_pol: list[ReplicateStats] = []
    reps_u: list[ReplicateStats] = []
    heads_pol: list[np.ndarray] = []
    heads_u: list[np.ndarray] = []
    tails_pol: list[int] = []
    tails_u: list[int] = []
    for r in range(config.replicates):
        rng = replicate_stream(config.seed, r)
        addrs = rng.integers(1, config.m + 1, size=config.n)
        disp, ucost = replay(config.m, addrs, early)
        s, head, tail = _replicate_stats(disp, config.k_max)
        reps_pol.append(s)
        heads_pol.append(head)
        tails_pol.append(tail)
        s, head, tail = _replicate_stats(ucost, config.k_max)
        reps_u.append(s)
        heads_u.append(head)
        tails_u.append(tail)

    pooled_pol = _pool(reps_pol, heads_pol, tails_pol)
    pooled_u = _pool(reps_u, heads_u, tails_u)
    return ExperimentReport(
        config=config,
        pooled_policy=pooled_pol,
        pooled_u=pooled_u,
        replicates_policy=tuple(reps_pol),
        replicates_u=tuple(reps_u),
        distance_policy=_fit(pooled_pol, limit_pol, config.k_max),
        distance_u=_fit(pooled_u, limit_u, config.k_max),
        spread_policy=_spreads(reps_pol, config.k_max),
        spread_u=_spreads(reps_u, config.k_max),
    )


@dataclass(frozen=True)
class ConcentrationResult:
    """Contraction of across-replicate spreads when m is scaled by 4.

    Spreads should shrink roughly like 1/sqrt(m), i.e. contract by about 2;
    ``threshold`` is the deliberately loose empirical gate.  A factor is
    inf when the scaled spread is exactly 0 (degenerate configurations).
    """

    base_m: int
    scaled_m: int
    policy: Policy
    factors: dict[str, float]
    threshold: float
    passed: bool


def _contraction(base: float, scaled: float) -> float:
    if scaled == 0.0:
        return math.inf
    return base / scaled


def concentration_test(
    base: ExperimentReport, scaled: ExperimentReport, threshold: float = 1.5
) -> ConcentrationResult:
    """Require every tracked spread (conditional mean, conditional variance,
    p-hat(k) for k <= 5) to contract by ``threshold`` from m to 4m."""
    cb, cs = base.config, scaled.config
    if cb.replicates < 10 or cs.replicates < 10:
        raise ValueError("concentration test needs at least 10 replicates")
    if cs.m != 4 * cb.m or cs.n != 4 * cb.n:
        raise ValueError("scaled run must have exactly 4x the cells and items")
    if cs.policy is not cb.policy:
        raise ValueError("both runs must use the same policy")
    sb, ss = base.spread_policy, scaled.spread_policy
    factors = {"mean": _contraction(sb.mean_std, ss.mean_std),
               "variance": _contraction(sb.variance_std, ss.variance_std)}
    for k, (b, s) in enumerate(zip(sb.prob_std, ss.prob_std)):
        factors[f"p{k}"] = _contraction(b, s)
    return ConcentrationResult(
        base_m=cb.m,
        scaled_m=cs.m,
        policy=cb.policy,
        factors=factors,
        threshold=threshold,
        passed=all(f >= threshold for f in factors.values()),
    )


def run_concentration(config: ExperimentConfig, threshold: float = 1.5):
    """Run ``config`` and its 4x-scaled sibling; return both reports and the
    contraction verdict."""
    scaled = ExperimentConfig(
        m=4 * config.m,
        n=4 * config.n,
        policy=config.policy,
        replicates=config.replicates,
        seed=config.seed,
        k_max=config.k_max,
    )
    base_report = run_experiment(config)
    scaled_report = run_experiment(scaled)
    return base_report, scaled_report, concentration_test(base_report, scaled_report, threshold)


@dataclass(frozen=True)
class YuleCheckResult:
    """Empirical law of a pure-birth population (rate = size, started at 1)
    run to time t.  The reference law is geometric: P(k) = e^-t (1-e^-t)^(k-1)
    with mean e^t."""

    t: float
    samples: int
    counts: tuple[tuple[int, int], ...]  # (population size, occurrences)
    mean: float

    def prob(self, k: int) -> float:
        for size, count in self.counts:
            if size == k:
                return count / self.samples
        return 0.0


def yule_check(t: float, samples: int, rng: np.random.Generator) -> YuleCheckResult:
    """Simulate the birth process event by event, ``samples`` times."""
    if t <= 0.0:
        raise ValueError("time horizon must be positive")
    if samples < 1:
        raise ValueError("need at least one sample")
    tally: dict[int, int] = {}
    total = 0
    exponential = rng.exponential
    for _ in range(samples):
        pop = 1
        left = t
        while True:
            wait = exponential(1.0 / pop)
            if wait > left:
                break
            left -= wait
            pop += 1
        tally[pop] = tally.get(pop, 0) + 1
        total += pop
    counts = tuple(sorted(tally.items()))
    return YuleCheckResult(t=t, samples=samples, counts=counts, mean=total / samples)
