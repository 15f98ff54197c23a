"""Bit-level primitives: packed bit strings, index sets and seeded randomness.

Bits are packed MSB-first within each byte so the wire encoding is unambiguous.
All types are immutable after construction except :class:`Rng`.
"""

from __future__ import annotations

import os
import struct
from typing import Iterable, Sequence

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms


class BitcoreError(ValueError):
    pass


def _bit_count(arr: np.ndarray) -> int:
    return int(np.bitwise_count(arr).sum())


class BitString:
    """Fixed-length bit string packed into bytes, MSB of each byte first.

    Trailing pad bits of the last byte are always zero.
    """

    __slots__ = ("length", "_buf")

    def __init__(self, payload: bytes | np.ndarray, length: int):
        nbytes = (length + 7) // 8
        buf = np.frombuffer(bytes(payload), dtype=np.uint8).copy() \
            if not isinstance(payload, np.ndarray) else payload.astype(np.uint8, copy=True)
        if buf.size != nbytes:
            raise BitcoreError(f"payload of {buf.size} bytes cannot hold {length} bits")
        # force pad bits to zero
        if length % 8 and nbytes:
            buf[-1] &= 0xFF << (8 - length % 8) & 0xFF
        buf.setflags(write=False)
        self.length = length
        self._buf = buf

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, length: int) -> "BitString":
        return cls(np.zeros((length + 7) // 8, dtype=np.uint8), length)

    @classmethod
    def from_bits(cls, bits: Sequence[int] | np.ndarray) -> "BitString":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise BitcoreError("expected a flat bit sequence")
        return cls(np.packbits(arr), arr.size)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitString":
        if value < 0 or value >> length:
            raise BitcoreError("value out of range for declared length")
        nbytes = (length + 7) // 8
        raw = (value << (8 * nbytes - length)).to_bytes(nbytes, "big")
        return cls(raw, length)

    # -- views ---------------------------------------------------------

    @property
    def payload(self) -> bytes:
        return self._buf.tobytes()

    def bits(self) -> np.ndarray:
        """Unpacked 0/1 array of length ``self.length``."""
        return np.unpackbits(self._buf, count=self.length) if self.length else \
            np.zeros(0, dtype=np.uint8)

    def to_int(self) -> int:
        if self.length == 0:
            return 0
        return int.from_bytes(self.payload, "big") >> (8 * self._buf.size - self.length)

    def popcount(self) -> int:
        return _bit_count(self._buf)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self._buf[i >> 3] >> (7 - (i & 7))) & 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, BitString) and other.length == self.length
                and bool(np.array_equal(other._buf, self._buf)))

    def __hash__(self) -> int:
        return hash((self.length, self.payload))

    def __repr__(self) -> str:
        shown = "".join(str(b) for b in self.bits()[:64])
        tail = "..." if self.length > 64 else ""
        return f"BitString({shown}{tail}, len={self.length})"

    def __xor__(self, other: "BitString") -> "BitString":
        if other.length != self.length:
            raise BitcoreError("xor requires equal lengths")
        return BitString(self._buf ^ other._buf, self.length)

    def concat(self, other: "BitString") -> "BitString":
        if self.length % 8 == 0:
            return BitString(np.concatenate([self._buf, other._buf]),
                             self.length + other.length)
        return BitString.from_bits(np.concatenate([self.bits(), other.bits()]))

    # -- wire form: 4-byte big-endian bit length, packed payload --------

    def serialize(self) -> bytes:
        return struct.pack(">I", self.length) + self.payload

    @classmethod
    def parse(cls, raw: bytes) -> tuple["BitString", int]:
        """Returns the parsed string and the number of bytes consumed."""
        if len(raw) < 4:
            raise BitcoreError("truncated BitString header")
        length = struct.unpack(">I", raw[:4])[0]
        nbytes = (length + 7) // 8
        if len(raw) < 4 + nbytes:
            raise BitcoreError("truncated BitString payload")
        return cls(raw[4:4 + nbytes], length), 4 + nbytes


class IndexSet:
    """Sorted duplicate-free indices into a bit string of universe size N."""

    __slots__ = ("universe", "indices")

    def __init__(self, indices: Iterable[int] | np.ndarray, universe: int):
        arr = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                         dtype=np.int64)
        arr = np.sort(arr)
        if arr.size:
            if arr[0] < 0 or arr[-1] >= universe:
                raise BitcoreError("index out of declared universe")
            if np.any(arr[1:] == arr[:-1]):
                raise BitcoreError("duplicate index")
        arr.setflags(write=False)
        self.universe = universe
        self.indices = arr

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self):
        return iter(self.indices.tolist())

    def __eq__(self, other) -> bool:
        return (isinstance(other, IndexSet) and other.universe == self.universe
                and bool(np.array_equal(other.indices, self.indices)))

    def __hash__(self) -> int:
        return hash((self.universe, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"IndexSet({self.indices.tolist()[:16]}, N={self.universe})"

    def complement(self) -> "IndexSet":
        mask = np.ones(self.universe, dtype=bool)
        mask[self.indices] = False
        return IndexSet(np.nonzero(mask)[0], self.universe)

    def membership_mask(self) -> np.ndarray:
        mask = np.zeros(self.universe, dtype=bool)
        mask[self.indices] = True
        return mask

    # -- wire form: 4-byte count, then 4-byte big-endian indices --------

    def serialize(self) -> bytes:
        return struct.pack(">I", len(self)) + \
            self.indices.astype(">u4").tobytes()

    @classmethod
    def parse(cls, raw: bytes, universe: int) -> tuple["IndexSet", int]:
        if len(raw) < 4:
            raise BitcoreError("truncated IndexSet header")
        count = struct.unpack(">I", raw[:4])[0]
        end = 4 + 4 * count
        if len(raw) < end:
            raise BitcoreError("truncated IndexSet body")
        arr = np.frombuffer(raw[4:end], dtype=">u4").astype(np.int64)
        return cls(arr, universe), end


def relative_hamming(x: BitString) -> float:
    """Fraction of set bits; the normalized Hamming weight."""
    if x.length == 0:
        raise BitcoreError("relative Hamming weight of the empty string")
    return x.popcount() / x.length


def extract(x: BitString, s: IndexSet) -> BitString:
    """Restriction of ``x`` to the positions in ``s``, in ascending order."""
    if s.universe > x.length or (len(s) and s.indices[-1] >= x.length):
        raise BitcoreError("index set exceeds bit string length")
    if len(s) == 0:
        return BitString.zeros(0)
    return BitString.from_bits(x.bits()[s.indices])


class Rng:
    """Deterministic ChaCha20 keystream generator with a 32-byte seed.

    The same seed always yields the same stream, which keeps statistical
    tests reproducible. Honest-party randomness in production comes from
    :meth:`from_os`.
    """

    _CHUNK = 1 << 16

    def __init__(self, seed: bytes):
        if len(seed) != 32:
            raise BitcoreError("seed must be exactly 32 bytes")
        self.seed = bytes(seed)
        self._enc = Cipher(algorithms.ChaCha20(self.seed, b"\x00" * 16), mode=None).encryptor()
        self._pool = b""
        self.position = 0

    @classmethod
    def from_os(cls) -> "Rng":
        return cls(os.urandom(32))

    @classmethod
    def from_int(cls, seed: int) -> "Rng":
        return cls(seed.to_bytes(32, "big"))

    def bytes(self, n: int) -> bytes:
        while len(self._pool) < n:
            self._pool += self._enc.update(b"\x00" * max(self._CHUNK, n - len(self._pool)))
        out, self._pool = self._pool[:n], self._pool[n:]
        self.position += n
        return out

    def bits(self, nbits: int) -> BitString:
        return BitString(self.bytes((nbits + 7) // 8), nbits)

    def spawn(self, label: bytes) -> "Rng":
        """Independent child stream; used to give subsystems their own streams."""
        import hashlib
        return Rng(hashlib.blake2b(self.bytes(32) + label, digest_size=32).digest())

    def words32(self, n: int) -> np.ndarray:
        return np.frombuffer(self.bytes(4 * n), dtype=">u4").astype(np.uint32)

    def randbelow_array(self, bounds: np.ndarray) -> np.ndarray:
        """One uniform integer in [0, bounds[i]) per entry, by rejection."""
        bounds = np.asarray(bounds, dtype=np.uint64)
        if np.any(bounds == 0):
            raise BitcoreError("zero bound")
        out = np.empty(bounds.size, dtype=np.int64)
        pending = np.arange(bounds.size)
        while pending.size:
            b = bounds[pending]
            words = self.words32(pending.size).astype(np.uint64)
            limit = (np.uint64(1 << 32) // b) * b
            ok = words < limit
            out[pending[ok]] = (words[ok] % b[ok]).astype(np.int64)
            pending = pending[~ok]
        return out

    def randbelow(self, bound: int) -> int:
        return int(self.randbelow_array(np.array([bound]))[0])

    def uniform(self, n: int) -> np.ndarray:
        """n floats uniform in [0, 1) with 32-bit resolution."""
        return self.words32(n) / np.float64(1 << 32)


def sample_subset(rng: Rng, universe: int, size: int) -> IndexSet:
    """Uniform ``size``-subset of {0..universe-1} via a partial Fisher-Yates shuffle."""
    if size > universe:
        raise BitcoreError("subset larger than universe")
    if size == 0:
        return IndexSet([], universe)
    from qrot._kernels import fisher_yates_partial

    perm = np.arange(universe, dtype=np.int64)
    # j[i] uniform in [i, universe)
    j = np.arange(size, dtype=np.int64) + rng.randbelow_array(universe - np.arange(size))
    fisher_yates_partial(perm, j)
    return IndexSet(perm[:size], universe)
