"""Byte/frame synchronization by preamble correlation, plus exact analytic
miss-detection and false-alarm probabilities.

Detection uses two banks of 8 match-count correlators, one per bit offset
within a byte.  Bank 1 looks at a candidate preamble window, bank 2 at the
window one frame later (the next frame's preamble); lock is declared when the
same offset clears the threshold in both banks, so one decision spans
P1 + D1 + P2 = 264 bytes (P32) or 526 bytes (P64).

The correlation metric is the match count (Hamming similarity), in [0, N]:
the operating thresholds (e.g. 28 out of 32, tolerating 4 errors) are defined
on that scale.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .framing import FrameKind, gen_preamble

_SCAN_CHUNK_BYTES = 4096


@dataclass(frozen=True)
class CorrelatorBankConfig:
    kind: FrameKind
    gamma: int

    def __post_init__(self):
        if not 0 <= self.gamma <= self.kind.preamble_bits:
            raise ValueError("gamma out of range")

    @property
    def span_bytes(self) -> int:
        return self.kind.span_bytes


@dataclass(frozen=True)
class SyncResult:
    locked: bool
    bit_offset: int
    frame_start_bit: int
    score_bank1: int
    score_bank2: int


@dataclass(frozen=True)
class SyncProbabilities:
    p_miss: float
    p_false_single: float
    p_false_double: float


def correlate(window: np.ndarray, preamble: np.ndarray) -> int:
    """Number of matching bit positions."""
    w = np.asarray(window, dtype=np.uint8)
    p = np.asarray(preamble, dtype=np.uint8)
    if w.size != p.size:
        raise ValueError(f"window length {w.size} != preamble length {p.size}")
    return int(np.sum(w == p))


def match_counts(bits: np.ndarray, preamble: np.ndarray) -> np.ndarray:
    """Sliding match count of every window of len(preamble) against it."""
    x = 1 - 2 * np.asarray(bits, dtype=np.int32)
    p = 1 - 2 * np.asarray(preamble, dtype=np.int32)
    return (preamble.size + np.correlate(x, p, mode="valid")) >> 1


def _scan(bits: np.ndarray, cfg: CorrelatorBankConfig, from_bit: int) -> SyncResult:
    """First dual-bank lock at or after from_bit; unlocked if none."""
    kind = cfg.kind
    n = kind.preamble_bits
    frame_bits = kind.frame_bits
    preamble = gen_preamble(kind)
    # byte-major scan over (byte, offset) pairs is a plain scan over bit
    # positions; the last usable bank-1 position keeps bank 2 inside the stream
    last = bits.size - (frame_bits + n)
    chunk = _SCAN_CHUNK_BYTES * 8
    pos = from_bit
    while pos <= last:
        hi = min(pos + chunk, last + 1)
        counts = match_counts(bits[pos: hi + frame_bits + n - 1], preamble)
        npos = hi - pos
        ok = (counts[:npos] >= cfg.gamma) & (counts[frame_bits: frame_bits + npos] >= cfg.gamma)
        hits = np.nonzero(ok)[0]
        if hits.size:
            i = pos + int(hits[0])
            return SyncResult(True, i % 8, i, int(counts[hits[0]]),
                              int(counts[hits[0] + frame_bits]))
        pos = hi
    return SyncResult(False, 0, -1, 0, 0)


def detect(stream: np.ndarray, cfg: CorrelatorBankConfig) -> SyncResult:
    """Scan a bit stream for the first dual-bank preamble lock."""
    bits = np.asarray(stream, dtype=np.uint8)
    need = cfg.span_bytes * 8 + 7
    if bits.size < need:
        raise ValueError(f"stream too short: {bits.size} bits < {need}")
    return _scan(bits, cfg, 0)


class FrameSynchronizer:
    """Acquisition plus per-frame tracking over one demodulated bit stream.

    After lock the preamble is re-verified every frame against gamma; one miss
    is ridden out (the frame is still delivered at the flywheel position), two
    consecutive misses declare sync lost and acquisition restarts.  Instances
    hold per-stream scan state; use one per stream.
    """

    def __init__(self, cfg: CorrelatorBankConfig):
        self.cfg = cfg
        self._preamble = gen_preamble(cfg.kind)

    def locate_frames(self, bits: np.ndarray) -> tuple[list[int], int]:
        """Returns (frame start bit positions, sync loss count)."""
        bits = np.asarray(bits, dtype=np.uint8)
        kind = self.cfg.kind
        n = kind.preamble_bits
        frame_bits = kind.frame_bits
        starts: list[int] = []
        losses = 0
        pos = 0
        while bits.size - pos >= frame_bits + n:
            res = _scan(bits, self.cfg, pos)
            if not res.locked:
                break
            s = res.frame_start_bit
            miss_streak = 0
            lost = False
            while s + frame_bits <= bits.size:
                if correlate(bits[s: s + n], self._preamble) >= self.cfg.gamma:
                    miss_streak = 0
                    starts.append(s)
                else:
                    miss_streak += 1
                    if miss_streak >= 2:
                        losses += 1
                        lost = True
                        break
                    starts.append(s)
                s += frame_bits
            if not lost:
                return starts, losses
            pos = s + 1
        return starts, losses


def binomial_tail_ge(n: int, k: int, p: float) -> float:
    """P[Binomial(n, p) >= k] with exact coefficients and compensated summation.

    Summing the upper tail directly keeps tiny probabilities (down to ~1e-300)
    free of the cancellation that 1 - P[X < k] would suffer.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    total = math.fsum(
        math.comb(n, i) * p ** i * (1 - p) ** (n - i) for i in range(k, n + 1)
    )
    return min(1.0, total)


def p_miss_single(n: int, gamma: int, p: float) -> float:
    """Probability one preamble window scores below gamma on a BSC(p)."""
    if not 0 <= gamma <= n:
        raise ValueError("gamma out of range")
    return binomial_tail_ge(n, n - gamma + 1, p)


def p_miss(n: int, gamma: int, p: float) -> float:
    """Dual-bank miss probability 1 - D^2, computed without cancellation."""
    m = p_miss_single(n, gamma, p)
    return m * (2.0 - m)


def p_false(n: int, gamma: int) -> tuple[float, float]:
    """(single-bank, dual-bank) false alarm probability per correlator position.

    Equiprobable random data makes the match count Binomial(n, 1/2), so the
    single-bank value is an exact dyadic rational sum_{i>=gamma} C(n,i) / 2^n.
    """
    if not 0 <= gamma <= n:
        raise ValueError("gamma out of range")
    count = sum(math.comb(n, i) for i in range(gamma, n + 1))
    q = count / 2 ** n
    return q, q * q


def sync_probabilities(n: int, gamma: int, p: float) -> SyncProbabilities:
    q1, q2 = p_false(n, gamma)
    return SyncProbabilities(p_miss(n, gamma, p), q1, q2)


def tradeoff_table(kind: FrameKind, p: float,
                   gammas: range | list[int]) -> list[tuple[int, SyncProbabilities]]:
    """One (gamma, probabilities) row per threshold, for the trade-off curves."""
    n = kind.preamble_bits
    return [(g, sync_probabilities(n, g, p)) for g in gammas]


def write_tradeoff_csv(rows: list[tuple[int, SyncProbabilities]], fp) -> None:
    writer = csv.writer(fp)
    writer.writerow(["gamma", "p_miss", "p_false_single", "p_false_double"])
    for gamma, sp in rows:
        writer.writerow([gamma, repr(sp.p_miss), repr(sp.p_false_single),
                         repr(sp.p_false_double)])
