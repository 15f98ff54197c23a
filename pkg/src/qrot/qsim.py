"""Parametric simulator of the quantum phase.

Plays the role of a trusted third party standing in for the entangled-photon
source and both measurement stations: matching bases agree up to the channel
error rate, mismatched bases give uniform outcomes. Losses, dark counts and
double-pair emissions are modelled as probabilities, not optics.

Detected multi-photon rounds are counted but not accepted; undetected ones
(taken to be one third of the detected count, the equal-efficiency
four-detector model) pass through flagged, for leak-accounting tests only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from qrot.bitcore import BitString, Rng

# P(detected | multi-photon round): undetected ~= detected / 3
_DETECT_GIVEN_MULTI = 0.75


class QsimError(ValueError):
    pass


@dataclass(frozen=True)
class SourceModel:
    p_err: float = 0.0
    p_double: float = 0.0
    p_loss: float = 0.0
    p_dark: float = 0.0

    def __post_init__(self):
        for name in ("p_err", "p_double", "p_loss", "p_dark"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise QsimError(f"{name} outside [0, 1]")
        if self.p_err >= 0.5:
            raise QsimError("channel error rate must be below 1/2")


class ClickPattern(enum.Enum):
    SINGLE = "single"
    DOUBLE_SAME_BASIS = "double_same_basis"
    OTHER = "other"
    NONE = "none"


class ReportResult(enum.Enum):
    SUCCESS = "success"
    SUCCESS_RANDOM = "success_random"
    FAILURE = "failure"


@dataclass(frozen=True)
class RoundOutcome:
    alice_basis: int
    alice_bit: int
    alice_multi: bool
    bob_pattern: ClickPattern
    bob_basis: int
    bob_bit: int


def generate_round(model: SourceModel, rng: Rng) -> RoundOutcome:
    """One raw source round; scalar twin of the vectorized phase runner."""
    u = rng.uniform(4)
    raw = rng.bytes(4)
    theta_a, theta_b, x_a, flip_or_uniform = (b & 1 for b in raw)
    if u[0] < model.p_loss:
        return RoundOutcome(theta_a, x_a, False, ClickPattern.NONE, theta_b, 0)
    multi = u[1] < model.p_double
    alice_multi = multi and u[2] < _DETECT_GIVEN_MULTI
    if theta_a == theta_b:
        noise = int(rng.uniform(1)[0] < model.p_err)
        x_b = x_a ^ noise
    else:
        x_b = flip_or_uniform
    if u[3] < model.p_dark:
        pattern = ClickPattern.OTHER
    elif multi and not alice_multi:
        pattern = ClickPattern.DOUBLE_SAME_BASIS
    else:
        pattern = ClickPattern.SINGLE
    return RoundOutcome(theta_a, x_a, alice_multi, pattern, theta_b, x_b)


def report(pattern: ClickPattern, measured_bit: int, rng: Rng) -> tuple[ReportResult, int]:
    """Receiver's click-pattern reporting rules."""
    if pattern == ClickPattern.SINGLE:
        return ReportResult.SUCCESS, measured_bit
    if pattern == ClickPattern.DOUBLE_SAME_BASIS:
        return ReportResult.SUCCESS_RANDOM, rng.bytes(1)[0] & 1
    return ReportResult.FAILURE, 0


def multi_photon_estimate(n_tot: int, n_multi: int) -> float:
    """Estimated ratio of accepted coincidences hiding a multi-photon event."""
    if n_tot <= 0:
        raise QsimError("no coincidences observed")
    if n_multi > n_tot:
        raise QsimError("more multi-photon events than coincidences")
    return n_multi / (3.0 * n_tot)


@dataclass
class AliceView:
    theta: BitString
    x: BitString
    n_tot: int
    n_multi: int


@dataclass
class BobView:
    theta: BitString
    x: BitString
    # set only when the adversarial leak-accounting flag is on
    undetected_multi: np.ndarray | None = field(default=None, repr=False)


def run_quantum_phase(model: SourceModel, n0: int, rng: Rng,
                      adversarial_multi_view: bool = False) -> tuple[AliceView, BobView]:
    """Run the source until exactly n0 rounds are accepted by both sides.

    Accepted means: a coincidence, single-photon on Alice's side (or an
    undetected double), and a successful report from Bob. Detected
    multi-photon coincidences increment the counters driving the
    multi-photon abort check.
    """
    if n0 < 1:
        raise QsimError("need at least one signal")

    theta_a = np.empty(0, np.uint8)
    theta_b = np.empty(0, np.uint8)
    x_a = np.empty(0, np.uint8)
    x_b = np.empty(0, np.uint8)
    undet = np.empty(0, bool)
    n_tot = 0
    n_multi = 0

    while theta_a.size < n0:
        chunk = max(1024, int((n0 - theta_a.size) * 1.3))
        u = rng.uniform(4 * chunk).reshape(4, chunk)
        rb = np.frombuffer(rng.bytes(4 * chunk), np.uint8).reshape(4, chunk) & 1
        ta, tb, xa, unif = rb

        coincidence = u[0] >= model.p_loss
        multi = coincidence & (u[1] < model.p_double)
        detected_multi = multi & (u[2] < _DETECT_GIVEN_MULTI)
        dark = u[3] < model.p_dark

        match = ta == tb
        noise = (rng.uniform(chunk) < model.p_err).astype(np.uint8)
        xb = np.where(match, xa ^ noise, unif)

        accepted = coincidence & ~detected_multi & ~dark

        # cut at the raw round where the quota is filled; later rounds of
        # this chunk never happened
        need = n0 - theta_a.size
        acc_idx = np.nonzero(accepted)[0]
        if acc_idx.size > need:
            cut = int(acc_idx[need - 1]) + 1
            coincidence, detected_multi = coincidence[:cut], detected_multi[:cut]
            dark, multi, accepted = dark[:cut], multi[:cut], accepted[:cut]
            ta, tb, xa, xb = ta[:cut], tb[:cut], xa[:cut], xb[:cut]

        n_tot += int((coincidence & ~dark).sum())
        n_multi += int((detected_multi & ~dark).sum())

        theta_a = np.concatenate([theta_a, ta[accepted]])
        theta_b = np.concatenate([theta_b, tb[accepted]])
        x_a = np.concatenate([x_a, xa[accepted]])
        x_b = np.concatenate([x_b, xb[accepted]])
        undet = np.concatenate([undet, (multi & ~detected_multi)[accepted]])

    alice = AliceView(BitString.from_bits(theta_a), BitString.from_bits(x_a),
                      n_tot, n_multi)
    bob = BobView(BitString.from_bits(theta_b), BitString.from_bits(x_b),
                  undet if adversarial_multi_view else None)
    return alice, bob
