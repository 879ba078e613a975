"""Packed binary {-1,+1} sequences, seeded sampling, and reference generators.

Storage convention: bit i set means s_i = -1, bit i clear means s_i = +1.
Two positions agree exactly when their bits XOR to zero, so correlation
sums reduce to XOR + popcount on the packed integer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidLengthError

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the witness set covers all n < 2^64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    k = max(n, 2)
    while not is_prime(k):
        k += 1
    return k


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi."""
    out = []
    p = next_prime(max(lo, 2))
    while p <= hi:
        out.append(p)
        p = next_prime(p + 1)
    return out


@dataclass(frozen=True)
class BinarySequence:
    """Immutable +-1 sequence of length m, packed into an int (bit i = 1 <=> s_i = -1)."""

    m: int
    bits: int

    def __post_init__(self):
        if self.m < 1:
            raise InvalidLengthError(f"sequence length must be >= 1, got {self.m}")
        if not 0 <= self.bits < (1 << self.m):
            raise InvalidInputError("bits outside [0, 2^m); padding bits must be zero")

    def __len__(self) -> int:
        return self.m

    def values(self) -> np.ndarray:
        """Decode to an int8 array of +-1."""
        byts = self.bits.to_bytes((self.m + 7) // 8, "little")
        raw = np.unpackbits(np.frombuffer(byts, dtype=np.uint8), bitorder="little")
        return (1 - 2 * raw[: self.m].astype(np.int8)).astype(np.int8)

    @classmethod
    def from_values(cls, values) -> "BinarySequence":
        vals = np.asarray(values)
        if vals.ndim != 1 or vals.size < 1:
            raise InvalidLengthError("need a non-empty 1-d array of +-1")
        if not np.all(np.abs(vals) == 1):
            raise InvalidInputError("entries must be -1 or +1")
        raw = np.packbits(vals == -1, bitorder="little")
        return cls(int(vals.size), int.from_bytes(raw.tobytes(), "little"))

    def words(self) -> np.ndarray:
        """Packed storage as ceil(m/64) little-endian uint64 words, padding zero."""
        nwords = (self.m + 63) // 64
        return np.frombuffer(self.bits.to_bytes(nwords * 8, "little"), dtype="<u8").copy()

    @classmethod
    def from_words(cls, m: int, words) -> "BinarySequence":
        w = np.asarray(words, dtype=np.uint64)
        if w.size != (m + 63) // 64:
            raise InvalidInputError("word count must be ceil(m/64)")
        bits = int.from_bytes(w.astype("<u8").tobytes(), "little")
        return cls(m, bits)  # constructor rejects nonzero padding

    def to_line(self) -> str:
        return "".join("-" if (self.bits >> i) & 1 else "+" for i in range(self.m))

    @classmethod
    def from_line(cls, line: str) -> "BinarySequence":
        text = line.strip()
        if not text or set(text) - {"+", "-"}:
            raise InvalidInputError("sequence line must be non-empty over '+'/'-'")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "-":
                bits |= 1 << i
        return cls(len(text), bits)


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream; output is a pure function of all three fields.

    Backed by numpy's Philox generator with key = (master_seed, stream_id),
    so distinct stream_ids give statistically independent streams and the
    mapping is stable across library versions.
    """

    master_seed: int
    stream_id: int
    counter: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id", "counter"):
            v = getattr(self, name)
            if not 0 <= v < (1 << 64):
                raise InvalidInputError(f"{name} must be a 64-bit non-negative integer")

    def generator(self) -> np.random.Generator:
        bg = np.random.Philox(
            key=np.array([self.master_seed, self.stream_id], dtype=np.uint64),
            counter=np.array([self.counter, 0, 0, 0], dtype=np.uint64),
        )
        return np.random.Generator(bg)


def sample_uniform(m: int, stream: RngStream) -> BinarySequence:
    """Draw S uniformly from the 2^m sequences; deterministic given the stream."""
    if m < 1:
        raise InvalidLengthError(f"sequence length must be >= 1, got {m}")
    nwords = (m + 63) // 64
    words = stream.generator().integers(0, 1 << 64, size=nwords, dtype=np.uint64)
    bits = int.from_bytes(words.astype("<u8").tobytes(), "little") & ((1 << m) - 1)
    return BinarySequence(m, bits)


def constant_sequence(m: int, value: int) -> BinarySequence:
    if m < 1:
        raise InvalidLengthError(f"sequence length must be >= 1, got {m}")
    if value == 1:
        return BinarySequence(m, 0)
    if value == -1:
        return BinarySequence(m, (1 << m) - 1)
    raise InvalidInputError("value must be -1 or +1")


def legendre_sequence(m: int) -> BinarySequence:
    """s_i = +1 iff i is zero or a nonzero square mod m, else -1 (m an odd prime)."""
    if m == 2 or not is_prime(m):
        raise InvalidInputError(f"modulus must be an odd prime, got {m}")
    squares = {(i * i) % m for i in range(1, m)}
    bits = 0
    for i in range(1, m):
        if i not in squares:
            bits |= 1 << i
    return BinarySequence(m, bits)


def write_sequences(path, seqs) -> None:
    """One '+'/'-' line per sequence; round-trips bit-exactly."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        for s in seqs:
            fh.write(s.to_line() + "\n")


def read_sequences(path) -> list[BinarySequence]:
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            if line.strip():
                out.append(BinarySequence.from_line(line))
    return out
