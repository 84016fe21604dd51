"""GF(2^8) arithmetic and the RS(255, 239) byte code used by the frame pipeline.

Field construction: GF(2^8) with primitive polynomial
x^8 + x^4 + x^3 + x^2 + 1 (0x11D), generator alpha = 0x02.  The code is the
conventional systematic RS(255, 239) with generator roots alpha^0 .. alpha^15,
so it corrects up to 8 byte errors per 255-byte block.  Both choices are local
conventions: any consistent pair would work, but these are frozen so encoded
fixtures stay stable.

Byte 0 of a block is the highest-order coefficient of the codeword polynomial
(first transmitted byte), matching the shift-register encoder ordering.

All operations are pure functions; the lookup tables are built once at import
and never mutated, so everything here is safe for concurrent use.
"""

from __future__ import annotations

import numpy as np

PRIM_POLY = 0x11D
BLOCK_BYTES = 255
MESSAGE_BYTES = 239
PARITY_BYTES = BLOCK_BYTES - MESSAGE_BYTES
CORRECTABLE_BYTES = PARITY_BYTES // 2


class RsDecodeFailure(ValueError):
    """Received block has more errors than the code can correct."""


def _build_tables() -> tuple[list[int], list[int]]:
    exp = [0] * 512
    log = [0] * 256
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= PRIM_POLY
    for i in range(255, 512):
        exp[i] = exp[i - 255]
    return exp, log


_EXP, _LOG = _build_tables()


def gf256_mul(a: int, b: int) -> int:
    """Product of two field elements."""
    if a == 0 or b == 0:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


def gf256_div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("GF(256) division by zero")
    if a == 0:
        return 0
    return _EXP[(_LOG[a] - _LOG[b]) % 255]


def gf256_pow(a: int, n: int) -> int:
    if n == 0:
        return 1
    if a == 0:
        return 0
    return _EXP[(_LOG[a] * n) % 255]


def gf256_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("GF(256) inverse of zero")
    return _EXP[255 - _LOG[a]]


def _generator_poly() -> list[int]:
    """prod_{i=0}^{15} (x - alpha^i), coefficients highest power first, monic."""
    g = [1]
    for i in range(PARITY_BYTES):
        root = _EXP[i]
        nxt = [0] * (len(g) + 1)
        for j, c in enumerate(g):
            nxt[j] ^= gf256_mul(c, 1)
            nxt[j + 1] ^= gf256_mul(c, root)
        g = nxt
    return g


GENERATOR_POLY = _generator_poly()

# Full 256x256 product table; the batch encoder and syndrome computation are
# pure table gathers, which is what keeps 1e5-block runs in seconds.
_EXP_NP = np.array(_EXP, dtype=np.uint8)
_MUL = np.zeros((256, 256), dtype=np.uint8)
_nz = np.arange(1, 256)
_logs = np.array(_LOG, dtype=np.int64)
_MUL[1:, 1:] = _EXP_NP[(_logs[_nz][:, None] + _logs[_nz][None, :]) % 255]

_GEN_TAIL = np.array(GENERATOR_POLY[1:], dtype=np.uint8)

# _SYND_POW[i, j] = alpha^(i * deg_j) where deg_j = 254 - j is the polynomial
# degree carried by byte j of a block.
_degrees = (BLOCK_BYTES - 1 - np.arange(BLOCK_BYTES, dtype=np.int64)) % 255
_SYND_POW = _EXP_NP[(np.arange(PARITY_BYTES, dtype=np.int64)[:, None] * _degrees[None, :]) % 255]


def encode_blocks(messages: np.ndarray) -> np.ndarray:
    """Systematically encode a (B, 239) uint8 batch into (B, 255) codewords."""
    msgs = np.atleast_2d(np.asarray(messages, dtype=np.uint8))
    if msgs.shape[1] != MESSAGE_BYTES:
        raise ValueError(f"messages must have {MESSAGE_BYTES} columns, got {msgs.shape[1]}")
    nblk = msgs.shape[0]
    parity = np.zeros((nblk, PARITY_BYTES), dtype=np.uint8)
    for j in range(MESSAGE_BYTES):
        feedback = msgs[:, j] ^ parity[:, 0]
        shifted = np.empty_like(parity)
        shifted[:, :-1] = parity[:, 1:]
        shifted[:, -1] = 0
        parity = shifted ^ _MUL[feedback[:, None], _GEN_TAIL[None, :]]
    return np.concatenate([msgs, parity], axis=1)


def syndromes_blocks(blocks: np.ndarray) -> np.ndarray:
    """Syndromes S_i = r(alpha^i), i = 0..15, for a (B, 255) uint8 batch."""
    blk = np.atleast_2d(np.asarray(blocks, dtype=np.uint8))
    if blk.shape[1] != BLOCK_BYTES:
        raise ValueError(f"blocks must have {BLOCK_BYTES} columns, got {blk.shape[1]}")
    prods = _MUL[blk[:, None, :], _SYND_POW[None, :, :]]
    return np.bitwise_xor.reduce(prods, axis=2)


def rs_encode(message: bytes) -> bytes:
    """Encode a 239-byte message into a systematic 255-byte codeword."""
    if len(message) != MESSAGE_BYTES:
        raise ValueError(f"message must be {MESSAGE_BYTES} bytes, got {len(message)}")
    block = encode_blocks(np.frombuffer(message, dtype=np.uint8)[None, :])
    return block[0].tobytes()


def _berlekamp_massey(synd: list[int]) -> list[int]:
    """Error locator Lambda(x) from the syndromes, ascending coefficients."""
    lam = [1]
    prev = [1]
    shift = 1
    b = 1
    errors = 0
    for r in range(PARITY_BYTES):
        delta = synd[r]
        for i in range(1, errors + 1):
            if i < len(lam) and lam[i]:
                delta ^= gf256_mul(lam[i], synd[r - i])
        if delta == 0:
            shift += 1
            continue
        coef = gf256_div(delta, b)
        update = lam[:]
        xb = [0] * shift + [gf256_mul(coef, c) for c in prev]
        if len(xb) > len(update):
            update += [0] * (len(xb) - len(update))
        for i, c in enumerate(xb):
            update[i] ^= c
        if 2 * errors <= r:
            prev = lam
            lam = update
            errors = r + 1 - errors
            b = delta
            shift = 1
        else:
            lam = update
            shift += 1
    while len(lam) > 1 and lam[-1] == 0:
        lam.pop()
    return lam


def _find_error_positions(lam: list[int]) -> list[int]:
    """Chien search: byte positions whose locators are roots of Lambda."""
    coeffs = np.array(lam, dtype=np.uint8)
    degs = np.arange(len(lam), dtype=np.int64)
    points = np.arange(255, dtype=np.int64)
    vals = np.bitwise_xor.reduce(_MUL[coeffs[:, None], _EXP_NP[(degs[:, None] * points[None, :]) % 255]], axis=0)
    positions = []
    for e in np.nonzero(vals == 0)[0]:
        # Lambda(alpha^e) == 0 means locator X = alpha^(-e); byte p has X = alpha^(254-p).
        p = BLOCK_BYTES - 1 - ((255 - int(e)) % 255)
        if 0 <= p < BLOCK_BYTES:
            positions.append(p)
    return positions


def rs_decode(received: bytes) -> tuple[bytes, int]:
    """Decode a 255-byte block; returns (message, corrected byte count).

    Raises RsDecodeFailure whenever the syndromes reveal an uncorrectable
    block (more than 8 byte errors, in all but a vanishing fraction of cases).
    """
    if len(received) != BLOCK_BYTES:
        raise ValueError(f"received must be {BLOCK_BYTES} bytes, got {len(received)}")
    block = np.frombuffer(received, dtype=np.uint8).copy()
    synd = syndromes_blocks(block[None, :])[0]
    if not synd.any():
        return block[:MESSAGE_BYTES].tobytes(), 0

    synd_list = [int(s) for s in synd]
    lam = _berlekamp_massey(synd_list)
    nerrs = len(lam) - 1
    if nerrs == 0 or nerrs > CORRECTABLE_BYTES:
        raise RsDecodeFailure(f"error count {nerrs} exceeds correction capability")
    positions = _find_error_positions(lam)
    if len(positions) != nerrs:
        raise RsDecodeFailure("error locator does not split over the field")

    # Forney, first consecutive root alpha^0: Omega = S * Lambda mod x^16,
    # e_p = X_p * Omega(X_p^-1) / Lambda'(X_p^-1).
    omega = [0] * PARITY_BYTES
    for i in range(nerrs + 1):
        if i >= len(lam) or lam[i] == 0:
            continue
        for j in range(PARITY_BYTES - i):
            if synd_list[j]:
                omega[i + j] ^= gf256_mul(lam[i], synd_list[j])
    lam_odd = lam[1::2]  # Lambda'(x) = sum of odd-degree terms / x in GF(2^m)

    for p in positions:
        x_log = (BLOCK_BYTES - 1 - p) % 255
        xinv_log = (255 - x_log) % 255
        om = 0
        for i, c in enumerate(omega):
            if c:
                om ^= _EXP[(_LOG[c] + i * xinv_log) % 255]
        dlam = 0
        for i, c in enumerate(lam_odd):
            if c:
                dlam ^= _EXP[(_LOG[c] + (2 * i) * xinv_log) % 255]
        if dlam == 0:
            raise RsDecodeFailure("degenerate locator derivative")
        mag = gf256_mul(_EXP[x_log], gf256_div(om, dlam))
        block[p] ^= mag

    if syndromes_blocks(block[None, :])[0].any():
        raise RsDecodeFailure("correction did not land on a codeword")
    return block[:MESSAGE_BYTES].tobytes(), nerrs
