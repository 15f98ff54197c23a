"""Key-rate and resource analysis.

Largest secure output length, critical error rate, critical signal count with
tolerance optimization, OT throughput, and deterministic CSV emission for the
rate curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from qrot import bounds
from qrot.bounds import BoundsError, ProtocolParams, binary_entropy


class RatesError(ValueError):
    pass


def _eps_for_n(params: ProtocolParams, n: int, experimental: bool,
               asymptotic: bool) -> float:
    p = params.with_n(n)
    if asymptotic:
        # finite-size statistical terms dropped (the N0 -> infinity limit)
        try:
            bracket = bounds.entropy_rate_bracket(p, experimental)
        except BoundsError:
            return math.inf
        lhl_exp = 0.5 * (n - p.n_raw * bracket)
        lhl = math.inf if lhl_exp > 64 else 0.5 * 2.0 ** lhl_exp
        corr_exp = -0.5 * (p.n_raw - n)
        corr = 2.0 ** corr_exp if corr_exp > -1070 else 0.0
        return lhl + corr + 2.0 * p.eps_ir + p.eps_bind
    try:
        return bounds.eps_max(p, experimental).eps_max
    except BoundsError:
        return math.inf


def n_max(params: ProtocolParams, eps_target: float, experimental: bool = False,
          asymptotic: bool = False) -> int:
    """Largest n with total security within eps_target; 0 if none."""
    hi = params.n_raw - 1
    if hi < 1 or _eps_for_n(params, 1, experimental, asymptotic) > eps_target:
        return 0
    lo = 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _eps_for_n(params, mid, experimental, asymptotic) <= eps_target:
            lo = mid
        else:
            hi = mid - 1
    return lo


def key_rate(params: ProtocolParams, eps_target: float, experimental: bool = False,
             asymptotic: bool = False) -> float:
    return n_max(params, eps_target, experimental, asymptotic) / params.n0


def asymptotic_bracket(p_max: float, f: float, alpha: float = 0.0,
                       delta1: float = 0.0, delta2: float = 0.0) -> float:
    """Per-raw-bit entropy budget in the large-N0 limit."""
    q = (p_max + delta1) / (0.5 - delta2)
    if q >= 0.5:
        return -math.inf
    return (0.5 - 2.0 * delta2 / (1.0 - 2.0 * delta2) - binary_entropy(q)
            - f * binary_entropy(p_max + delta1))


def asymptotic_key_rate(p_max: float, f: float, alpha: float = 0.0,
                        delta1: float = 0.0, delta2: float = 0.0) -> float:
    """n_max / N0 in the large-N0 limit: the raw fraction times the bracket."""
    bracket = asymptotic_bracket(p_max, f, alpha, delta1, delta2)
    return max(0.0, (0.5 - delta2) * (1.0 - alpha) * bracket)


def p_crit(f: float, alpha: float = 0.0, delta1: float = 0.0,
           delta2: float = 0.0) -> float:
    """Error rate at which the asymptotic key rate hits zero (bisection)."""
    if f < 1.0:
        raise RatesError("IR efficiency below the Shannon limit")
    lo, hi = 0.0, 0.25 - delta1 - 1e-9

    def g(p: float) -> float:
        return asymptotic_bracket(p, f, alpha, delta1, delta2)

    if g(lo) <= 0.0:
        return 0.0
    while g(hi) > 0.0:
        hi = min(0.5 - delta2 - delta1 - 1e-9, hi * 1.5)
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class OptimizeResult:
    n_crit: int
    alpha: float
    delta1: float
    delta2: float
    eps_achieved: float
    n_target: int
    feasible: bool


def _min_n0_at(alpha: float, delta1: float, delta2: float, eps_target: float,
               p_max: float, f: float, p_multi: float, n_target: int,
               experimental: bool, eps_ir: float, eps_bind: float,
               n0_cap: int = 10 ** 11) -> int | None:
    """Smallest N0 making an n_target-bit key feasible; None if over the cap."""

    def feasible(n0: int) -> bool:
        try:
            p = ProtocolParams(n0=n0, alpha=alpha, delta1=delta1, delta2=delta2,
                               p_max=p_max, n=n_target, f=f, p_multi=p_multi,
                               eps_ir=eps_ir, eps_bind=eps_bind)
        except BoundsError:
            return False
        if p.n_raw <= n_target:
            return False
        try:
            return bounds.eps_max(p, experimental).eps_max <= eps_target
        except BoundsError:
            return False

    lo, hi = 4 * n_target + 8, None
    probe = lo
    while probe <= n0_cap:
        if feasible(probe):
            hi = probe
            break
        lo = probe
        probe *= 2
    if hi is None:
        return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def n_crit(eps_target: float, p_max: float, f: float, p_multi: float,
           n_target: int, grid: tuple[int, int, int] = (8, 10, 6),
           experimental: bool | None = None,
           eps_ir: float = 2.0 ** -32, eps_bind: float = 2.0 ** -32) -> OptimizeResult:
    """Minimal signal count over a (alpha, delta1, delta2) grid.

    Coarse grid pass followed by a 10x finer local refinement around the
    best point; ties broken lexicographically on (N0, alpha, delta1, delta2)
    so the search is deterministic.
    """
    if experimental is None:
        experimental = p_multi > 0.0
    gap = p_crit(f) - p_max
    if gap <= 0.0:
        return OptimizeResult(0, 0.0, 0.0, 0.0, math.inf, n_target, False)

    na, n1, n2 = grid
    alphas = [0.05 + (0.5 - 0.05) * i / (na - 1) for i in range(na)]
    d1_hi = max(2e-4, 0.9 * gap)
    d1s = [1e-4 + (d1_hi - 1e-4) * i / (n1 - 1) for i in range(n1)]
    d2s = [1e-4 + (0.05 - 1e-4) * i / (n2 - 1) for i in range(n2)]

    def search(points):
        best = None
        for a in points[0]:
            for d1 in points[1]:
                for d2 in points[2]:
                    r = _min_n0_at(a, d1, d2, eps_target, p_max, f, p_multi,
                                   n_target, experimental, eps_ir, eps_bind)
                    if r is None:
                        continue
                    key = (r, a, d1, d2)
                    if best is None or key < best:
                        best = key
        return best

    best = search((alphas, d1s, d2s))
    if best is None:
        return OptimizeResult(0, 0.0, 0.0, 0.0, math.inf, n_target, False)

    def refine_axis(values, center, lo_cap, hi_cap):
        step = (values[-1] - values[0]) / (len(values) - 1) if len(values) > 1 else 0.0
        if step == 0.0:
            return [center]
        lo = max(lo_cap, center - step)
        hi = min(hi_cap, center + step)
        return [lo + (hi - lo) * i / 9 for i in range(10)]

    _, a0, d10, d20 = best
    fine = search((refine_axis(alphas, a0, 0.02, 0.5),
                   refine_axis(d1s, d10, 1e-5, gap),
                   refine_axis(d2s, d20, 1e-5, 0.08)))
    if fine is not None and fine < best:
        best = fine

    n0, a, d1, d2 = best
    p = ProtocolParams(n0=n0, alpha=a, delta1=d1, delta2=d2, p_max=p_max,
                       n=n_target, f=f, p_multi=p_multi,
                       eps_ir=eps_ir, eps_bind=eps_bind)
    achieved = bounds.eps_max(p, experimental).eps_max
    return OptimizeResult(n0, a, d1, d2, achieved, n_target, True)


def ot_rate(r_c: float, n_crit_signals: int) -> float:
    """Potential OT instances per second from the coincidence rate."""
    if n_crit_signals <= 0:
        raise RatesError("critical signal count must be positive")
    if r_c < 0:
        raise RatesError("coincidence rate must be non-negative")
    return r_c / n_crit_signals


# ---------------------------------------------------------------------------
# figure CSV emission
# ---------------------------------------------------------------------------

FIG2_ORANGE = {"alpha": 0.35, "delta1": 0.01, "delta2": 0.025, "f": 1.2}
FIG3_PARAMS = {"alpha": 0.35, "delta1": 9.20e-3, "delta2": 3.00e-3,
               "p_max": 0.01, "f": 1.2}


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def emit_fig2(points: int = 300) -> list[str]:
    """Asymptotic key rate vs error rate: ideal-parameter and typical curves."""
    rows = ["p_max,R_key_ideal,R_key_typical"]
    for i in range(points + 1):
        p = 0.03 * i / points
        blue = asymptotic_key_rate(p, f=1.0)
        orange = asymptotic_key_rate(p, FIG2_ORANGE["f"], FIG2_ORANGE["alpha"],
                                     FIG2_ORANGE["delta1"], FIG2_ORANGE["delta2"])
        rows.append(f"{_fmt(p)},{_fmt(blue)},{_fmt(orange)}")
    return rows


def fig3_key_rate(n0: int, eps_target: float) -> float:
    cfg = FIG3_PARAMS
    try:
        p = ProtocolParams(n0=n0, alpha=cfg["alpha"], delta1=cfg["delta1"],
                           delta2=cfg["delta2"], p_max=cfg["p_max"], n=1,
                           f=cfg["f"])
    except BoundsError:
        return 0.0
    if p.n_raw <= 1:
        return 0.0
    return key_rate(p, eps_target)


def emit_fig3(eps_targets=(1e-3, 1e-5, 1e-7, 1e-9),
              n0_grid=None) -> list[str]:
    """Key rate vs signal count for several security levels."""
    if n0_grid is None:
        n0_grid = [int(10 ** (4 + i / 8)) for i in range(41)]
    head = "N0," + ",".join(f"R_key_eps{e:g}" for e in eps_targets)
    rows = [head]
    for n0 in n0_grid:
        vals = [fig3_key_rate(n0, e) for e in eps_targets]
        rows.append(",".join([_fmt(n0)] + [_fmt(v) for v in vals]))
    return rows


def emit_fig4(p_max: float = 0.01, f: float = 1.2, n_target: int = 128,
              exponents=range(3, 10)) -> list[str]:
    """Optimized critical signal count vs security level."""
    rows = ["eps_max,N_crit"]
    for e in exponents:
        res = n_crit(10.0 ** -e, p_max, f, p_multi=0.0, n_target=n_target,
                     grid=(5, 6, 4))
        rows.append(f"{_fmt(10.0 ** -e)},{res.n_crit if res.feasible else 0}")
    return rows


def emit_figure(selector: str, **kwargs) -> list[str]:
    if selector == "fig2":
        return emit_fig2(**kwargs)
    if selector == "fig3":
        return emit_fig3(**kwargs)
    if selector == "fig4":
        return emit_fig4(**kwargs)
    raise RatesError(f"unknown figure {selector!r}")
