"""Exhaustive ground truth for tiny tables.

Every one of the m^n equally likely hash sequences is replayed through a
deliberately naive re-implementation of the insertion rules (no rover, no
incremental displacement bookkeeping: the largest empty cell is found by a
fresh scan and every displacement is re-derived by walking the links), giving
exact rational displacement distributions.  ``oracle_vs_table`` replays the
same sequences through :class:`~coalhash.table.HashTable` step by step and
reports the largest disagreement, which must be zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .mc import ExperimentConfig, run_experiment
from .table import HashTable, Policy

ENUMERATION_GUARD = 10**7


@dataclass(frozen=True)
class ExactDistribution:
    """Exact averaged displacement laws over all m^n hash sequences.

    ``probs[k]`` is the exact probability that a uniformly chosen item of a
    uniformly chosen table has displacement k (a multiple of 1/(n m^n));
    ``u_probs[k]`` is the analogue for the unsuccessful-search cost from a
    uniformly chosen start address (a multiple of 1/(m m^n)).
    """

    m: int
    n: int
    policy: Policy
    probs: tuple[Fraction, ...]
    u_probs: tuple[Fraction, ...]
    mean: Fraction
    variance: Fraction
    u_mean: Fraction
    u_variance: Fraction

    def probs_float(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.probs)

    def u_probs_float(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.u_probs)


def _check_size(m: int, n: int) -> None:
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    if m**n > ENUMERATION_GUARD:
        max_n = int(math.log(ENUMERATION_GUARD) / math.log(m)) if m > 1 else n
        raise ValueError(
            f"m^n = {m**n} exceeds the enumeration guard {ENUMERATION_GUARD}; "
            f"for m={m} the largest feasible n is {max_n}"
        )


def _naive_build(m: int, seq, early: bool):
    """Straight-line replay: returns (occupied set, link dict, item cells)."""
    occupied: set[int] = set()
    link: dict[int, int] = {}
    cells: list[int] = []
    for h in seq:
        if h not in occupied:
            occupied.add(h)
            cells.append(h)
            continue
        free = max(c for c in range(1, m + 1) if c not in occupied)
        occupied.add(free)
        cells.append(free)
        if early:
            old = link.get(h)
            link[h] = free
            if old is not None:
                link[free] = old
        else:
            end = h
            while end in link:
                end = link[end]
            link[end] = free
    return occupied, link, cells


def _walk_all(link: dict[int, int], seq, cells) -> list[int]:
    """Displacement of every item, each derived by walking from its address."""
    out = []
    for h, cell in zip(seq, cells):
        d = 0
        c = h
        while c != cell:
            c = link[c]
            d += 1
        out.append(d)
    return out


def _naive_ucosts(m: int, occupied, link) -> list[int]:
    out = []
    for j in range(1, m + 1):
        if j not in occupied:
            out.append(0)
            continue
        d = 1
        c = j
        while c in link:
            c = link[c]
            d += 1
        out.append(d)
    return out


def _chain_partition(occupied, link) -> set[frozenset[int]]:
    targets = set(link.values())
    parts = set()
    for head in occupied - targets:
        chain = [head]
        c = head
        while c in link:
            c = link[c]
            chain.append(c)
        parts.add(frozenset(chain))
    return parts


def enumerate_exact(m: int, n: int, policy: Policy) -> ExactDistribution:
    """Exact distributions by brute force over every sequence in {1..m}^n."""
    policy = Policy(policy)
    if policy is Policy.UNSUCCESSFUL:
        raise ValueError("enumerate under an insertion policy (L or E)")
    _check_size(m, n)
    early = policy is Policy.EARLY
    d_counts = [0] * n  # displacement k = 0..n-1
    u_counts = [0] * (n + 1)  # cost k = 0..n
    d_sum = d_sqsum = u_sum = u_sqsum = 0
    for seq in itertools.product(range(1, m + 1), repeat=n):
        occupied, link, cells = _naive_build(m, seq, early)
        for d in _walk_all(link, seq, cells):
            d_counts[d] += 1
            d_sum += d
            d_sqsum += d * d
        for u in _naive_ucosts(m, occupied, link):
            u_counts[u] += 1
            u_sum += u
            u_sqsum += u * u
    seqs = m**n
    probs = tuple(Fraction(c, n * seqs) for c in d_counts)
    u_probs = tuple(Fraction(c, m * seqs) for c in u_counts)
    mean = Fraction(d_sum, n * seqs)
    u_mean = Fraction(u_sum, m * seqs)
    return ExactDistribution(
        m=m,
        n=n,
        policy=policy,
        probs=probs,
        u_probs=u_probs,
        mean=mean,
        variance=Fraction(d_sqsum, n * seqs) - mean * mean,
        u_mean=u_mean,
        u_variance=Fraction(u_sqsum, m * seqs) - u_mean * u_mean,
    )


@dataclass(frozen=True)
class OracleTableResult:
    max_discrepancy: int
    sequences: int
    first_mismatch: tuple[int, ...] | None


def oracle_vs_table(m: int, n: int, policy: Policy) -> OracleTableResult:
    """Replay every sequence through HashTable and through the naive rules,
    comparing displacements after every single insert plus the final search
    costs, occupancy and chain partition.  Any nonzero discrepancy is a bug
    in one of the two implementations."""
    policy = Policy(policy)
    if policy is Policy.UNSUCCESSFUL:
        raise ValueError("replay under an insertion policy (L or E)")
    _check_size(m, n)
    early = policy is Policy.EARLY
    worst = 0
    first_bad = None
    count = 0
    for seq in itertools.product(range(1, m + 1), repeat=n):
        count += 1
        table = HashTable(m, policy)
        diff = 0
        for i in range(n):
            table.insert(seq[i])
            occupied, link, cells = _naive_build(m, seq[: i + 1], early)
            naive_disp = _walk_all(link, seq[: i + 1], cells)
            diff = max(
                diff,
                max(
                    abs(a - b)
                    for a, b in zip(table.displacements(), naive_disp)
                ),
            )
        naive_u = _naive_ucosts(m, occupied, link)
        table_u = [table.unsuccessful_search_cost(j) for j in range(1, m + 1)]
        diff = max(diff, max(abs(a - b) for a, b in zip(table_u, naive_u)))
        if table.occupied_cells() != occupied:
            diff = max(diff, 1)
        if {frozenset(c) for c in table.chains()} != _chain_partition(occupied, link):
            diff = max(diff, 1)
        if diff > worst:
            worst = diff
            if first_bad is None:
                first_bad = seq
    return OracleTableResult(
        max_discrepancy=worst, sequences=count, first_mismatch=first_bad
    )


@dataclass(frozen=True)
class OracleMcResult:
    tv_distance: float
    bound: float
    passed: bool


def oracle_vs_mc(
    m: int, n: int, policy: Policy, replicates: int, seed: int
) -> OracleMcResult:
    """Total-variation distance between the exact law and a pooled Monte
    Carlo estimate, gated by an aggregated 4-sigma multinomial bound."""
    if replicates < 10**4:
        raise ValueError("need at least 10^4 replicates for a stable bound")
    exact = enumerate_exact(m, n, policy)
    config = ExperimentConfig(
        m=m, n=n, policy=policy, replicates=replicates, seed=seed, k_max=max(n, 1)
    )
    report = run_experiment(config)
    emp = list(report.pooled_policy.probs)
    ref = list(exact.probs_float()) + [0.0] * (len(emp) - len(exact.probs))
    tv = 0.5 * (
        sum(abs(a - b) for a, b in zip(emp, ref)) + report.pooled_policy.tail_prob
    )
    draws = replicates * n
    bound = 2.0 * sum((p * (1.0 - p) / draws) ** 0.5 for p in ref if p > 0.0)
    return OracleMcResult(tv_distance=tv, bound=bound, passed=tv <= bound)
