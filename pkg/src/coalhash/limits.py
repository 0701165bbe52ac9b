"""Limiting displacement distributions and their moments.

As the table grows with load factor ``n/m -> alpha``, the distribution of a
randomly chosen displacement converges, for each policy, to a fixed law on
the nonnegative integers:

* ``U`` (unsuccessful search): p(0) = 1 - alpha and, for k >= 1,
  ``p(k) = integral_0^alpha (1 - alpha + t) (1 - e^-t)^(k-1) dt``;
* ``L`` (late insertion): p(0) = 1 - alpha/2 and
  ``p(k) = (1/alpha) integral_0^alpha (alpha - t - (alpha-t)^2/2) (1 - e^-t)^(k-1) dt``;
* ``E`` (early insertion): p(0) = 1 - alpha/2 and
  ``p(k) = (1/alpha) integral_0^alpha (alpha - t) e^-t (1 - e^-t)^(k-1) dt``.

At alpha = 0 all three laws collapse to the point mass at 0.  The integrals
are evaluated by adaptive Gauss-Kronrod quadrature; k = 1, 2 also have exact
closed forms used as an independent cross-check, and the means and variances
have closed forms throughout.  All probabilities decay geometrically like
``(1 - e^-alpha)^k``, which yields the certified tail bounds used to cut off
a distribution at finite k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .table import Policy

# Quadrature tolerances.  The integrands are smooth and bounded on [0, alpha],
# so these are met with large margin (observed errors are near 1e-16).
_QUAD_EPSABS = 1e-13
_QUAD_EPSREL = 1e-12

# Below this load factor the variance closed forms lose all precision to
# cancellation and are replaced by their Taylor expansions about 0.
_SERIES_ALPHA = 1e-4


class QuadratureError(ArithmeticError):
    """Numerical self-check failed (normalization outside certified bounds)."""


@dataclass(frozen=True)
class LimitSpec:
    """Load factor plus policy, identifying one limiting distribution."""

    alpha: float
    policy: Policy

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"load factor must lie in [0, 1], got {self.alpha}")
        object.__setattr__(self, "policy", Policy(self.policy))


@dataclass(frozen=True)
class LimitDistribution:
    """Probabilities p(0..k_max) of one limiting law plus tail and moments.

    ``tail_mass`` is the actual probability beyond ``k_max`` (via the proven
    normalization to 1); ``tail_bound`` is the certified geometric upper
    bound used to choose ``k_max``, so ``tail_mass <= tail_bound`` always.
    """

    spec: LimitSpec
    probs: tuple[float, ...]
    tail_mass: float
    tail_bound: float
    mean: float
    variance: float
    k_max: int

    def prob(self, k: int) -> float:
        """p(k), 0.0 past the cutoff (at most ``tail_mass`` is ignored)."""
        return self.probs[k] if 0 <= k <= self.k_max else 0.0

    def head_and_tail(self, k: int) -> tuple[tuple[float, ...], float]:
        """The law folded at ``k``: probabilities for 0..k and one lump above."""
        head = tuple(self.prob(i) for i in range(k + 1))
        return head, max(1.0 - sum(head), 0.0)


def _integrand_scale(alpha: float, policy: Policy):
    """(integrand(t), prefactor) for the k >= 1 integral formulas."""
    if policy is Policy.UNSUCCESSFUL:
        return (lambda t: 1.0 - alpha + t), 1.0
    if policy is Policy.LATE:
        return (lambda t: alpha - t - 0.5 * (alpha - t) ** 2), 1.0 / alpha
    return (lambda t: (alpha - t) * math.exp(-t)), 1.0 / alpha


def p_limit(spec: LimitSpec, k: int) -> float:
    """Limit probability of displacement value ``k`` under ``spec``."""
    if k < 0:
        raise ValueError("displacement value must be nonnegative")
    a = spec.alpha
    if k == 0:
        return 1.0 - a if spec.policy is Policy.UNSUCCESSFUL else 1.0 - 0.5 * a
    if a == 0.0:
        return 0.0
    base, scale = _integrand_scale(a, spec.policy)
    if k == 1:
        f = base
    else:
        f = lambda t: base(t) * (-math.expm1(-t)) ** (k - 1)
    value, _ = quad(f, 0.0, a, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=200)
    return scale * value


def p_closed_small_k(spec: LimitSpec, k: int) -> float:
    """Exact closed forms at k = 1, 2; the independent quadrature check."""
    a = spec.alpha
    if a <= 0.0:
        raise ValueError("closed small-k forms need a positive load factor")
    pol = spec.policy
    if k == 1:
        if pol is Policy.UNSUCCESSFUL:
            return a - 0.5 * a * a
        if pol is Policy.LATE:
            return 0.5 * a - a * a / 6.0
        return (math.expm1(-a) + a) / a
    if k == 2:
        if pol is Policy.UNSUCCESSFUL:
            return 2.0 * math.expm1(-a) + 2.0 * a - 0.5 * a * a
        if pol is Policy.LATE:
            return -2.0 * math.expm1(-a) / a - 2.0 + a - a * a / 6.0
        return 0.5 + math.expm1(-a) / a - math.expm1(-2.0 * a) / (4.0 * a)
    raise ValueError(f"closed form only available for k in (1, 2), got k={k}")


def mean_limit(spec: LimitSpec) -> float:
    """Closed-form mean of the limiting law (continuous extension at 0)."""
    a = spec.alpha
    if spec.policy is Policy.UNSUCCESSFUL:
        return 0.25 * math.expm1(2.0 * a) + 0.5 * a
    if a == 0.0:
        return 0.0
    if spec.policy is Policy.LATE:
        return math.expm1(2.0 * a) / (8.0 * a) + 0.25 * a - 0.25
    return (math.expm1(a) - a) / a


def _horner(a: float, coeffs) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * a + c
    return acc


# Taylor expansions about alpha = 0 of the variance closed forms, ascending
# powers alpha^1..alpha^6 (alpha^2..alpha^6 for the probe variance).  All
# four expressions are O(1)-term differences near 0, so direct evaluation
# there is pure cancellation.
_VAR_SERIES = {
    Policy.UNSUCCESSFUL: (1.0, 1 / 2, 2 / 3, 5 / 12, 1 / 6, 1 / 60),
    Policy.LATE: (1 / 2, 1 / 4, 1 / 4, 7 / 45, 7 / 90, 23 / 720),
    Policy.EARLY: (1 / 2, 1 / 4, 1 / 8, 1 / 18, 1 / 48, 19 / 2880),
}
_PROBE_VAR_SERIES = (1 / 2, 1.0, 3 / 4, 11 / 30, 19 / 180)


def var_limit(spec: LimitSpec) -> float:
    """Closed-form variance of the limiting law."""
    a = spec.alpha
    if a < _SERIES_ALPHA:
        return a * _horner(a, _VAR_SERIES[spec.policy])
    if spec.policy is Policy.UNSUCCESSFUL:
        return (
            -math.exp(4.0 * a) / 16.0
            + 4.0 / 9.0 * math.exp(3.0 * a)
            - (0.25 * a + 0.125) * math.exp(2.0 * a)
            - 0.25 * a * a
            + 5.0 / 12.0 * a
            - 37.0 / 144.0
        )
    if spec.policy is Policy.LATE:
        g2 = math.expm1(2.0 * a) / a
        g1 = math.expm1(a) / a
        return (
            -g2 * g2 / 64.0
            + (64.0 * math.exp(2.0 * a) + 37.0 * math.exp(a) + 37.0) / 432.0 * g1
            - math.exp(2.0 * a) / 16.0
            - a * a / 16.0
            + 5.0 / 24.0 * a
            - 7.0 / 36.0
        )
    g1 = math.expm1(a) / a
    return 0.5 * (a - 2.0) * g1 * g1 + 2.0 * g1 - 1.0


def probe_stats_unsuccessful(alpha: float) -> tuple[float, float]:
    """(mean, variance) of the probe count of an unsuccessful search.

    The probe count is max(d, 1): an unsuccessful search inspects at least
    the one (empty) cell it starts at.
    """
    spec = LimitSpec(alpha, Policy.UNSUCCESSFUL)
    mean = mean_limit(spec) + 1.0 - alpha
    if alpha < _SERIES_ALPHA:
        return mean, alpha * alpha * _horner(alpha, _PROBE_VAR_SERIES)
    a = alpha
    variance = (
        -math.exp(4.0 * a) / 16.0
        + 4.0 / 9.0 * math.exp(3.0 * a)
        + (0.25 * a - 0.625) * math.exp(2.0 * a)
        - 0.25 * a * a
        - a / 12.0
        + 35.0 / 144.0
    )
    return mean, variance


def _tail_envelope(alpha: float, policy: Policy) -> float:
    """A with p(k) <= A * (1 - e^-alpha)^(k-1) for all k >= 1.

    A is the total mass of the k-integrand (the k = 1 probability for E),
    so the bound is exact termwise, not asymptotic.
    """
    if policy is Policy.UNSUCCESSFUL:
        return alpha - 0.5 * alpha * alpha
    if policy is Policy.LATE:
        return 0.5 * alpha - alpha * alpha / 6.0
    return (math.expm1(-alpha) + alpha) / alpha


def tail_bound(spec: LimitSpec, k_max: int) -> float:
    """Certified upper bound on the probability mass beyond ``k_max``."""
    a = spec.alpha
    if a == 0.0:
        return 0.0
    q = -math.expm1(-a)
    # sum_{k > k_max} A q^(k-1) = A q^k_max / (1 - q), and 1/(1-q) = e^alpha.
    return _tail_envelope(a, spec.policy) * q**k_max * math.exp(a)


def build_distribution(spec: LimitSpec, eps: float) -> LimitDistribution:
    """Evaluate the law out to the smallest k_max whose certified tail
    bound drops below ``eps``; attach closed-form moments."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"tail tolerance must lie in (0, 1), got {eps}")
    mean = mean_limit(spec)
    variance = var_limit(spec)
    if spec.alpha == 0.0:
        return LimitDistribution(
            spec=spec, probs=(1.0,), tail_mass=0.0, tail_bound=0.0,
            mean=mean, variance=variance, k_max=0,
        )
    k_max = 1
    while tail_bound(spec, k_max) >= eps:
        k_max += 1
    probs = tuple(p_limit(spec, k) for k in range(k_max + 1))
    defect = 1.0 - sum(probs)
    bound = tail_bound(spec, k_max)
    if not -10.0 * eps <= defect <= bound + 10.0 * eps:
        raise QuadratureError(
            f"normalization defect {defect:.3e} outside [0, {bound:.3e}] "
            f"for alpha={spec.alpha}, policy={spec.policy.value}"
        )
    return LimitDistribution(
        spec=spec, probs=probs, tail_mass=max(defect, 0.0), tail_bound=bound,
        mean=mean, variance=variance, k_max=k_max,
    )


def moment_tail_bound(spec: LimitSpec, k_max: int, power: int) -> float:
    """Certified bound on ``sum_{k > k_max} k^power p(k)``.

    Sums the geometric envelope termwise until it is exhausted to double
    precision; with q < 1 - 1/e this converges in a few hundred terms.
    """
    a = spec.alpha
    if a == 0.0:
        return 0.0
    q = -math.expm1(-a)
    env = _tail_envelope(a, spec.policy)
    total = 0.0
    k = k_max + 1
    while True:
        term = env * k**power * q ** (k - 1)
        total += term
        if term < 1e-30 * max(total, 1e-300):
            return total
        k += 1


def tail_asymptotic_ratio(spec: LimitSpec, k: int) -> float:
    """p(k) / (1 - e^-alpha)^k, for inspecting the geometric decay rate."""
    if k < 1:
        raise ValueError("tail ratio defined for k >= 1")
    if spec.alpha <= 0.0:
        raise ValueError("tail ratio needs a positive load factor")
    q = -math.expm1(-spec.alpha)
    return p_limit(spec, k) / q**k
