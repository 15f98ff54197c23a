"""Privacy amplification with Toeplitz matrices over GF(2).

A seed of N_raw + n - 1 bits defines an n x N_raw Toeplitz matrix T with
T[i, j] = diag[n - 1 + j - i]; hashing is the GF(2) matrix-vector product.
Two multiply paths are provided: a windowed integer matmul and a blocked
FFT convolution. They are exact and interchangeable.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from qrot import bounds
from qrot.bitcore import BitString, Rng

_FFT_BLOCK = 1 << 20
_FFT_MIN = 4096  # below this the windowed product is faster


class PampError(ValueError):
    pass


@dataclass(frozen=True)
class ToeplitzSeed:
    """Descriptor of the hashing matrix: input width, output width, diagonal."""

    n_in: int
    n_out: int
    diag: BitString

    def __post_init__(self):
        if self.diag.length != self.n_in + self.n_out - 1:
            raise PampError("diagonal length must be n_in + n_out - 1")

    # wire form: 4-byte N_raw, 4-byte n, packed diagonal bits
    def serialize(self) -> bytes:
        return struct.pack(">II", self.n_in, self.n_out) + self.diag.payload

    @classmethod
    def parse(cls, raw: bytes) -> "ToeplitzSeed":
        if len(raw) < 8:
            raise PampError("truncated hash descriptor")
        n_in, n_out = struct.unpack(">II", raw[:8])
        nbits = n_in + n_out - 1
        if len(raw) != 8 + (nbits + 7) // 8:
            raise PampError("hash descriptor length mismatch")
        return cls(n_in, n_out, BitString(raw[8:], nbits))


def sample_seed(rng: Rng, n_in: int, n_out: int) -> ToeplitzSeed:
    return ToeplitzSeed(n_in, n_out, rng.bits(n_in + n_out - 1))


def _hash_naive(diag: np.ndarray, x: np.ndarray, n_out: int) -> np.ndarray:
    """Row i is the dot product of x with diag[n_out-1-i : n_out-1-i+n_in]."""
    n_in = x.size
    windows = np.lib.stride_tricks.sliding_window_view(diag, n_in)
    rows = windows[n_out - 1 - np.arange(n_out)]
    return (rows.astype(np.int64) @ x.astype(np.int64)) & 1


def _hash_fft(diag: np.ndarray, x: np.ndarray, n_out: int) -> np.ndarray:
    """Blocked FFT convolution; integer-exact after rounding, verified."""
    n_in = x.size
    acc = np.zeros(n_out, dtype=np.int64)
    for start in range(0, n_in, _FFT_BLOCK):
        block = x[start:start + _FFT_BLOCK].astype(np.float64)
        seg = diag[start:start + block.size + n_out - 1].astype(np.float64)
        size = 1 << (int(seg.size + block.size - 1).bit_length())
        conv = np.fft.irfft(np.fft.rfft(seg, size) * np.fft.rfft(block[::-1], size), size)
        # y_i += sum_j diag[n_out-1+(start+j)-i] x[start+j]; in conv indexing
        # (seg conv rev(block)) the needed lags sit at block_len-1+n_out-1-i.
        idx = block.size - 1 + n_out - 1 - np.arange(n_out)
        vals = conv[idx]
        rounded = np.rint(vals)
        if np.max(np.abs(vals - rounded)) > 0.25:
            raise PampError("FFT convolution lost integer exactness")
        acc += rounded.astype(np.int64)
    return (acc & 1).astype(np.int64)


def hash_bits(seed: ToeplitzSeed, x: BitString, method: str = "auto") -> BitString:
    """T.x over GF(2). ``method``: auto, fft or naive; identical outputs."""
    if x.length != seed.n_in:
        raise PampError("input length mismatch")
    if seed.n_out == 0:
        return BitString.zeros(0)
    diag = seed.diag.bits()
    xb = x.bits()
    if method == "auto":
        method = "fft" if seed.n_in >= _FFT_MIN else "naive"
    if method == "naive":
        out = _hash_naive(diag, xb, seed.n_out)
    elif method == "fft":
        out = _hash_fft(diag, xb, seed.n_out)
    else:
        raise PampError(f"unknown method {method!r}")
    return BitString.from_bits(out.astype(np.uint8))


def universality_probe(n_in: int, n_out: int, trials: int, rng: Rng) -> float:
    """Empirical collision frequency of random distinct inputs under random
    seeds; 2-universality promises at most 2^-n_out."""
    if n_in > 24:
        raise PampError("probe limited to small inputs")
    collisions = 0
    chunk = 4096
    done = 0
    nbits = n_in + n_out - 1
    while done < trials:
        t = min(chunk, trials - done)
        diag = (np.frombuffer(rng.bytes(t * nbits), np.uint8) & 1).reshape(t, nbits)
        x = (np.frombuffer(rng.bytes(t * n_in), np.uint8) & 1).reshape(t, n_in)
        y = (np.frombuffer(rng.bytes(t * n_in), np.uint8) & 1).reshape(t, n_in)
        same = np.all(x == y, axis=1)
        if same.any():  # resample collided inputs by flipping one bit
            y[same, 0] ^= 1
        # batch windowed product
        windows = np.stack([
            diag[:, n_out - 1 - i: n_out - 1 - i + n_in] for i in range(n_out)
        ], axis=1)
        hx = (windows @ x[:, :, None].astype(np.int64)) & 1
        hy = (windows @ y[:, :, None].astype(np.int64)) & 1
        collisions += int(np.all(hx == hy, axis=(1, 2)).sum())
        done += t
    return collisions / trials


def output_length(params: bounds.ProtocolParams, multi_photon: bool,
                  budget: float) -> int:
    """Largest output size whose leftover-hash term stays within ``budget``."""
    if budget <= 0.0:
        raise PampError("budget must be positive")
    bracket = bounds.entropy_rate_bracket(params, multi_photon)
    # 0.5 * 2^((n - N_raw*bracket)/2) <= budget
    n_max = math.floor(params.n_raw * bracket + 2.0 * math.log2(2.0 * budget))
    return max(0, min(n_max, params.n_raw - 1))
