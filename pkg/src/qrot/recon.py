"""Verifiable one-way information reconciliation.

The sender transmits a syndrome of her raw string plus a short hash tag; the
receiver runs belief-propagation syndrome decoding against his own noisy copy
and accepts the candidate only if the tag matches. Correct whenever the
relative error between the two strings is below the design error rate.

Two backends: an LDPC code from a seeded regular Gallager-style ensemble, and
a trivial zero-leak backend for noiseless end-to-end runs.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from qrot import _kernels
from qrot.bitcore import BitString, Rng
from qrot.bounds import binary_entropy

BACKEND_TRIVIAL = "TRIVIAL_NOISELESS"
BACKEND_LDPC = "LDPC"

BP_MAX_ITER = 60
BP_NORM = 0.8
LLR_CLAMP = 25.0

_TAG_LABEL = b"\x02"  # domain separation from the commitment hash


class ReconError(ValueError):
    pass


@dataclass(frozen=True)
class IrParams:
    n_raw: int
    p_design: float
    f: float = 1.2
    tag_bits: int = 32
    backend: str = BACKEND_LDPC

    def __post_init__(self):
        if not 0.0 < self.p_design < 0.5 and self.backend == BACKEND_LDPC:
            raise ReconError("design error rate must be in (0, 0.5)")
        if self.f < 1.0:
            raise ReconError("IR efficiency below the Shannon limit")
        if self.tag_bits < 8:
            raise ReconError("verification tag too short")
        if self.backend == BACKEND_LDPC and self.syndrome_bits >= self.n_raw:
            raise ReconError("syndrome as large as the block; no compression")

    @property
    def syndrome_bits(self) -> int:
        if self.backend == BACKEND_TRIVIAL:
            return 0
        return math.ceil(self.f * binary_entropy(self.p_design) * self.n_raw)

    @property
    def leak_bits(self) -> int:
        """Bits disclosed on the wire: syndrome plus verification tag."""
        return self.syndrome_bits + self.tag_bits


@dataclass(frozen=True)
class Syndrome:
    syn: BitString
    tag: BitString
    code_seed: bytes

    def serialize(self) -> bytes:
        syn_bytes = self.syn.payload
        tag_bytes = self.tag.payload
        return (self.code_seed + struct.pack(">I", self.syn.length) + syn_bytes
                + struct.pack(">H", self.tag.length) + tag_bytes)

    @classmethod
    def parse(cls, raw: bytes) -> tuple["Syndrome", int]:
        if len(raw) < 36:
            raise ReconError("truncated syndrome record")
        code_seed = raw[:32]
        ell = struct.unpack(">I", raw[32:36])[0]
        syn_end = 36 + (ell + 7) // 8
        tau = struct.unpack(">H", raw[syn_end:syn_end + 2])[0]
        end = syn_end + 2 + (tau + 7) // 8
        if len(raw) < end:
            raise ReconError("truncated syndrome record")
        return cls(BitString(raw[36:syn_end], ell),
                   BitString(raw[syn_end + 2:end], tau), code_seed), end


def _tag(x: BitString, tag_bits: int) -> BitString:
    dig = hashlib.blake2b(_TAG_LABEL + x.serialize(),
                          digest_size=(tag_bits + 7) // 8).digest()
    return BitString(dig, tag_bits)


# ---------------------------------------------------------------------------
# parity-check construction: column weight 3, near-uniform row weights
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _code_structure(code_seed: bytes, n_raw: int, ell: int):
    """Edge arrays for a seeded (3, ~3n/ell)-regular code.

    Returns (chk_rows (m,dmax) padded with E, var_of_edge (E+1,),
    var_edges (n,3)). Duplicate variable-check incidences are repaired by
    swapping sockets so every edge is distinct in GF(2).
    """
    rng = Rng(hashlib.blake2b(b"ldpc" + code_seed, digest_size=32).digest())
    e_tot = 3 * n_raw
    var_of_edge = np.repeat(np.arange(n_raw, dtype=np.int64), 3)
    perm = np.arange(e_tot, dtype=np.int64)
    j = np.arange(e_tot, dtype=np.int64) + rng.randbelow_array(e_tot - np.arange(e_tot))
    _kernels.fisher_yates_partial(perm, j)
    var_of_edge = var_of_edge[perm]

    base, extra = divmod(e_tot, ell)
    row_deg = np.full(ell, base, dtype=np.int64)
    row_deg[:extra] += 1
    row_of_edge = np.repeat(np.arange(ell, dtype=np.int64), row_deg)

    # repair duplicate (variable, check) incidences
    for _ in range(64):
        key = row_of_edge * n_raw + var_of_edge
        order = np.argsort(key, kind="stable")
        dup_pos = order[1:][np.diff(key[order]) == 0]
        if dup_pos.size == 0:
            break
        swap_with = rng.randbelow_array(np.full(dup_pos.size, e_tot))
        for a, b in zip(dup_pos.tolist(), swap_with.tolist()):
            var_of_edge[a], var_of_edge[b] = var_of_edge[b], var_of_edge[a]
    else:
        raise ReconError("could not build a simple parity-check graph")

    dmax = int(row_deg.max())
    chk_rows = np.full((ell, dmax), e_tot, dtype=np.int64)
    start = 0
    for i, d in enumerate(row_deg.tolist()):
        chk_rows[i, :d] = np.arange(start, start + d)
        start += d

    var_edges = np.empty((n_raw, 3), dtype=np.int64)
    fill = np.zeros(n_raw, dtype=np.int64)
    for e, v in enumerate(var_of_edge.tolist()):
        var_edges[v, fill[v]] = e
        fill[v] += 1

    voe_ext = np.concatenate([var_of_edge, [n_raw]])
    return chk_rows, voe_ext, var_edges


def _syndrome_bits_of(x_bits: np.ndarray, code_seed: bytes, n_raw: int,
                      ell: int) -> np.ndarray:
    chk_rows, var_of_edge, _ = _code_structure(code_seed, n_raw, ell)
    ext = np.concatenate([x_bits.astype(np.uint8), [0]])
    return np.bitwise_xor.reduce(ext[var_of_edge[chk_rows]], axis=1)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def syn(x: BitString, params: IrParams, code_seed: bytes) -> Syndrome:
    if x.length != params.n_raw:
        raise ReconError("block length mismatch")
    if len(code_seed) != 32:
        raise ReconError("code seed must be 32 bytes")
    if params.backend == BACKEND_TRIVIAL:
        s = BitString.zeros(0)
    else:
        bits = _syndrome_bits_of(x.bits(), code_seed, params.n_raw,
                                 params.syndrome_bits)
        s = BitString.from_bits(bits)
    return Syndrome(s, _tag(x, params.tag_bits), code_seed)


def dec(s: Syndrome, y: BitString, params: IrParams) -> BitString | None:
    """Decode the sender's string from ``y`` and the syndrome; None on reject."""
    if y.length != params.n_raw:
        raise ReconError("block length mismatch")
    if s.tag.length != params.tag_bits or s.syn.length != params.syndrome_bits:
        return None

    if params.backend == BACKEND_TRIVIAL:
        candidate = y
    else:
        y_bits = y.bits()
        target = _syndrome_bits_of(y_bits, s.code_seed, params.n_raw,
                                   params.syndrome_bits) ^ s.syn.bits()
        chk_rows, var_of_edge, var_edges = _code_structure(
            s.code_seed, params.n_raw, params.syndrome_bits)
        llr0 = math.log((1.0 - params.p_design) / params.p_design)
        err, converged, _ = _kernels.bp_decode(
            chk_rows, var_of_edge, var_edges, target.astype(np.uint8),
            llr0, BP_MAX_ITER, BP_NORM, LLR_CLAMP)
        if not converged:
            return None
        candidate = BitString.from_bits(y_bits ^ err)

    return candidate if _tag(candidate, params.tag_bits) == s.tag else None


def epsilon_ir(params: IrParams) -> float:
    """Wrong-accept probability bound: a tag collision."""
    return 2.0 ** (-params.tag_bits)
