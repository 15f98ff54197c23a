"""Closed-form finite-key security bounds.

Computes the correctness failure probability, the dishonest-receiver bound
(theoretical and experimental variants), and their sum, itemized per
component. Entropy is in bits (log base 2); the KL divergence in the tail
exponent uses natural log, keeping each exponent dimensionally consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

_COMPONENT_CAP = 2.0
_UNDERFLOW = 1e-300


class BoundsError(ValueError):
    pass


def binary_entropy(p: float) -> float:
    """Binary entropy in bits, with h(0) = h(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise BoundsError(f"entropy argument {p} outside [0, 1]")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def binary_kl(q: float, p: float) -> float:
    """KL divergence between Bernoulli(q) and Bernoulli(p) in nats."""
    if not 0.0 < p < 1.0:
        raise BoundsError("reference probability must be in (0, 1)")
    if not 0.0 <= q <= 1.0:
        raise BoundsError("probability outside [0, 1]")
    if q == 0.0:
        return -math.log(1.0 - p)
    if q == 1.0:
        return -math.log(p)
    return q * math.log(q / p) + (1.0 - q) * math.log((1.0 - q) / (1.0 - p))


def hoeffding_a(n: float, alpha: float, delta: float) -> float:
    """Sampled subset vs whole set, sampling without replacement."""
    _check_hoeffding(alpha, delta)
    return 2.0 * math.exp(-2.0 * alpha * n * delta * delta)


def hoeffding_b(n: float, alpha: float, delta: float) -> float:
    """Sampled subset vs its complement."""
    _check_hoeffding(alpha, delta)
    return 2.0 * math.exp(-2.0 * alpha * (1.0 - alpha) ** 2 * n * delta * delta)


def hoeffding_c(n: float, alpha: float, delta: float, n0: float) -> float:
    """Subset vs complement when only n0 or more of the sample is kept."""
    _check_hoeffding(alpha, delta)
    if n0 < 1:
        raise BoundsError("kept sample size must be at least 1")
    return 2.0 * (math.exp(-0.5 * alpha * (1.0 - alpha) ** 2 * n * delta * delta)
                  + math.exp(-0.5 * n0 * delta * delta))


def _check_hoeffding(alpha: float, delta: float) -> None:
    if not 0.0 < alpha < 0.5:
        raise BoundsError("test ratio must be in (0, 1/2)")
    if delta <= 0.0:
        raise BoundsError("tolerance must be positive")


@dataclass(frozen=True)
class ProtocolParams:
    """Full protocol parameter record with derived block sizes.

    Derived sizes are floored, the conservative direction for the check and
    raw-string constraints.
    """

    n0: int
    alpha: float
    delta1: float
    delta2: float
    p_max: float
    n: int
    f: float = 1.0
    p_multi: float = 0.0
    eps_ir: float = 2.0 ** -32
    eps_bind: float = 2.0 ** -32

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise BoundsError("test ratio must be in (0, 1)")
        if self.delta1 < 0.0 or self.delta2 < 0.0 or self.delta2 >= 0.5:
            raise BoundsError("bad statistical tolerances")
        if not 0.0 <= self.p_max < 0.5:
            raise BoundsError("max error rate must be in [0, 1/2)")
        if self.f < 1.0:
            raise BoundsError("IR efficiency below the Shannon limit")
        if self.p_multi < 0.0:
            raise BoundsError("multi-photon ratio must be non-negative")
        if self.n < 1:
            raise BoundsError("output length must be at least 1 bit")

    @property
    def n_test(self) -> int:
        return math.floor(self.alpha * self.n0)

    @property
    def n_check(self) -> int:
        return math.floor((0.5 - self.delta2) * self.alpha * self.n0)

    @property
    def n_raw(self) -> int:
        return math.floor((0.5 - self.delta2) * (1.0 - self.alpha) * self.n0)

    def with_n(self, n: int) -> "ProtocolParams":
        return replace(self, n=n)


def entropy_rate_bracket(params: ProtocolParams, experimental: bool) -> float:
    """Per-bit min-entropy budget after reconciliation leak and tolerances.

    The experimental variant additionally charges the multi-photon leak.
    """
    q = (params.p_max + params.delta1) / (0.5 - params.delta2)
    if q >= 0.5:
        raise BoundsError("rate bracket undefined: effective error rate >= 1/2")
    bracket = (0.5
               - 2.0 * params.delta2 / (1.0 - 2.0 * params.delta2)
               - binary_entropy(q)
               - params.f * binary_entropy(params.p_max + params.delta1))
    if experimental:
        bracket -= params.p_multi / (0.5 - params.delta2)
    return bracket


def _squash(x: float) -> tuple[float, bool]:
    """Cap at the vacuous bound 2 and flush denormal-range values to zero."""
    if x < _UNDERFLOW:
        return (0.0, x > 0.0)
    return (min(x, _COMPONENT_CAP), False)


@dataclass(frozen=True)
class BoundReport:
    eps_correct: float
    eps_stat: float
    eps_kl: float
    eps_bind: float
    eps_lhl: float
    experimental: bool
    underflowed: tuple[str, ...] = field(default=())

    @property
    def eps_receiver(self) -> float:
        return self.eps_stat + self.eps_kl + self.eps_bind + self.eps_lhl

    @property
    def eps_max(self) -> float:
        return self.eps_correct + self.eps_receiver

    def to_dict(self) -> dict:
        return {
            "eps_correct": self.eps_correct,
            "eps_stat": self.eps_stat,
            "eps_kl": self.eps_kl,
            "eps_bind": self.eps_bind,
            "eps_lhl": self.eps_lhl,
            "eps_receiver": self.eps_receiver,
            "eps_max": self.eps_max,
            "experimental": self.experimental,
            "underflowed": list(self.underflowed),
        }


def eps_correctness(params: ProtocolParams) -> float:
    """Honest-run failure probability: 2^(-(N_raw-n)/2) + 2*eps_IR."""
    if params.n_raw <= params.n:
        raise BoundsError("raw block not longer than the output")
    exponent = -0.5 * (params.n_raw - params.n)
    first = 0.0 if exponent < -1100 else 2.0 ** exponent
    return first + 2.0 * params.eps_ir


def eps_receiver(params: ProtocolParams, experimental: bool) -> BoundReport:
    """Dishonest-receiver bound, itemized.

    Statistical term, KL concentration term, commitment binding, and the
    leftover-hash term with the entropy-rate bracket.
    """
    d1sq = params.delta1 * params.delta1
    e1 = -0.5 * (1.0 - params.alpha) ** 2 * params.n_test * d1sq
    e2 = -0.5 * params.n_check * d1sq
    # log-space: sqrt(2) * sqrt(e^e1 + e^e2)
    big = max(e1, e2)
    if big < -1400:
        stat = 0.0
        stat_uf = True
    else:
        stat = math.sqrt(2.0) * math.exp(0.5 * big) * \
            math.sqrt(math.exp(e1 - big) + math.exp(e2 - big))
        stat_uf = False

    kl_exp = -binary_kl(0.5 - params.delta2, 0.5) * (1.0 - params.alpha) * params.n0
    kl_uf = kl_exp < -700
    kl = 0.0 if kl_uf else math.exp(kl_exp)

    bracket = entropy_rate_bracket(params, experimental)
    lhl_exp = 0.5 * (params.n - params.n_raw * bracket)
    lhl_uf = lhl_exp < -1070
    lhl = math.inf if lhl_exp > 64 else (0.0 if lhl_uf else 0.5 * 2.0 ** lhl_exp)

    comps = {"eps_stat": (stat, stat_uf), "eps_kl": (kl, kl_uf),
             "eps_bind": (params.eps_bind, False), "eps_lhl": (lhl, lhl_uf)}
    underflowed = []
    squashed = {}
    for name, (val, flushed) in comps.items():
        sq, uf = _squash(val)
        squashed[name] = sq
        if uf or flushed:
            underflowed.append(name)
    ec, uf = _squash(eps_correctness(params))
    if uf:
        underflowed.append("eps_correct")
    return BoundReport(eps_correct=ec, experimental=experimental,
                       underflowed=tuple(underflowed), **squashed)


def eps_max(params: ProtocolParams, experimental: bool = False) -> BoundReport:
    """Total security bound: correctness plus dishonest-receiver components."""
    return eps_receiver(params, experimental)


TABLE1_PARAMS = ProtocolParams(
    n0=5_860_000, alpha=0.35, delta1=9.00e-3, delta2=3.00e-3,
    p_max=0.0114, n=128, f=1.64, p_multi=3.67e-3,
    eps_ir=2.0 ** -32, eps_bind=2.0 ** -32,
)
