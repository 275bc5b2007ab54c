"""Systematic Reed-Solomon codes over GF(2^m).

An ``RsCode`` is the full-length (N, K) code with N = 2^m - 1 symbols,
minimum distance d = N - K + 1 (the MDS bound), correcting up to
t = floor((N - K) / 2) symbol errors. The generator polynomial has roots
alpha^1 .. alpha^(N-K). Encoding is systematic: the K message symbols appear
verbatim at positions 0..K-1 of the codeword array and the N-K parity
symbols follow. Position i of the array carries the coefficient of
x^(N-1-i), so position 0 is the highest-degree term.

Decoding is the classical bounded-distance pipeline: syndrome computation,
Berlekamp-Massey for the error locator, Chien search for its roots, Forney
for the error magnitudes, and a final syndrome re-check. A word within t
symbol errors of a codeword is always decoded to that codeword. A word that
is within t of a *different* codeword than the caller had in mind is
miscorrected; that is inherent to bounded-distance decoding and is not
detected here.

Words beyond every decoding sphere are resolved by an explicit policy:

* ``FAIL_DENY``      - report ``DecodeStatus.FAILURE``;
* ``FALLBACK_SYSTEMATIC`` - take the systematic positions of the received
  word as the message and re-encode, making the decode map total and
  deterministic.

Bit/symbol packing is big-endian within each symbol: the first of m bits is
the most significant bit of symbol 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import LengthMismatchError
from .gf import Field


class DecodePolicy(str, Enum):
    FAIL_DENY = "fail-deny"
    FALLBACK_SYSTEMATIC = "fallback"


class DecodeStatus(Enum):
    EXACT_CODEWORD = "exact"
    CORRECTED = "corrected"
    FALLBACK = "fallback"
    FAILURE = "failure"


@dataclass(frozen=True, slots=True)
class DecodeOutcome:
    """Result of one decode: message/codeword are None only on FAILURE.

    ``error_count`` is the number of symbols actually corrected (0 for an
    exact codeword, None for fallback and failure).
    """

    status: DecodeStatus
    codeword: tuple[int, ...] | None
    message: tuple[int, ...] | None
    error_count: int | None

    @property
    def ok(self) -> bool:
        return self.status is not DecodeStatus.FAILURE


class RsCode:
    """An (N, K) Reed-Solomon code over a given ``Field``."""

    __slots__ = ("field", "n_symbols", "k_symbols", "num_parity", "t", "d_min",
                 "generator_poly")

    def __init__(self, field: Field, k_symbols: int):
        n = field.order
        if not 1 <= k_symbols <= n:
            raise ValueError(f"K must be in 1..{n}, got {k_symbols}")
        self.field = field
        self.n_symbols = n
        self.k_symbols = k_symbols
        self.num_parity = n - k_symbols
        self.t = (n - k_symbols) // 2
        self.d_min = n - k_symbols + 1
        self.generator_poly = self._build_generator()

    @property
    def n_bits(self) -> int:
        """Codeword length in bits, m * N."""
        return self.field.m * self.n_symbols

    @property
    def k_bits(self) -> int:
        """Message (sketch) length in bits, m * K."""
        return self.field.m * self.k_symbols

    def _build_generator(self) -> tuple[int, ...]:
        # g(x) = prod_{j=1..N-K} (x - alpha^j), coefficients highest degree
        # first, g[0] == 1.
        field = self.field
        g = [1]
        for j in range(1, self.num_parity + 1):
            root = field.alpha_pow(j)
            nxt = [0] * (len(g) + 1)
            for i, coef in enumerate(g):
                nxt[i] ^= coef
                nxt[i + 1] ^= field.mul(coef, root)
            g = nxt
        return tuple(g)

    def _check_word(self, word, expected_len: int, what: str) -> list[int]:
        symbols = [int(s) for s in word]
        if len(symbols) != expected_len:
            raise LengthMismatchError(
                f"{what} must be {expected_len} symbols, got {len(symbols)}"
            )
        size = self.field.size
        for s in symbols:
            if not 0 <= s < size:
                raise ValueError(f"symbol {s} out of range for GF(2^{self.field.m})")
        return symbols

    def encode(self, message) -> list[int]:
        """Systematic encode: returns [message | parity] of length N."""
        msg = self._check_word(message, self.k_symbols, "message")
        exp = self.field.exp_table
        log = self.field.log_table
        gen = self.generator_poly
        npar = self.num_parity
        if npar == 0:
            return msg
        # Long division of msg(x) * x^(N-K) by g(x); the running remainder is
        # the parity register.
        rem = [0] * npar
        for s in msg:
            feedback = s ^ rem[0]
            rem.pop(0)
            rem.append(0)
            if feedback:
                lf = log[feedback]
                for j in range(npar):
                    gj = gen[j + 1]
                    if gj:
                        rem[j] ^= exp[lf + log[gj]]
        return msg + rem

    def syndromes(self, word) -> list[int]:
        """S_j = word(alpha^j) for j = 1..N-K (empty when K = N)."""
        w = self._check_word(word, self.n_symbols, "word")
        return self._syndromes_unchecked(w)

    def _syndromes_unchecked(self, w: list[int]) -> list[int]:
        exp = self.field.exp_table
        log = self.field.log_table
        order = self.field.order
        out = []
        for j in range(1, self.num_parity + 1):
            a_log = j % order
            acc = 0
            for c in w:  # Horner, highest degree first
                if acc:
                    acc = exp[log[acc] + a_log]
                acc ^= c
            out.append(acc)
        return out

    def decode(self, received, policy: DecodePolicy = DecodePolicy.FALLBACK_SYSTEMATIC) -> DecodeOutcome:
        """Bounded-distance decode of N received symbols under a policy."""
        word = self._check_word(received, self.n_symbols, "received")
        policy = DecodePolicy(policy)

        synd = self._syndromes_unchecked(word)
        if not any(synd):
            cw = tuple(word)
            return DecodeOutcome(DecodeStatus.EXACT_CODEWORD, cw,
                                 cw[: self.k_symbols], 0)

        corrected = self._try_correct(word, synd)
        if corrected is not None:
            cw, nerr = corrected
            return DecodeOutcome(DecodeStatus.CORRECTED, cw,
                                 cw[: self.k_symbols], nerr)

        if policy is DecodePolicy.FAIL_DENY:
            return DecodeOutcome(DecodeStatus.FAILURE, None, None, None)
        message = tuple(word[: self.k_symbols])
        return DecodeOutcome(DecodeStatus.FALLBACK, tuple(self.encode(message)),
                             message, None)

    # -- decoding internals ---------------------------------------------------

    def _try_correct(self, word: list[int], synd: list[int]):
        """Return (codeword, error_count) or None if no codeword within t."""
        sigma = self._berlekamp_massey(synd)
        deg = len(sigma) - 1
        if deg > self.t:
            return None
        err_degrees = self._chien_search(sigma)
        if len(err_degrees) != deg:
            return None
        magnitudes = self._forney(sigma, synd, err_degrees)
        n1 = self.n_symbols - 1
        out = list(word)
        nerr = 0
        for d, e in zip(err_degrees, magnitudes):
            if e:
                out[n1 - d] ^= e
                nerr += 1
        if any(self._syndromes_unchecked(out)):
            return None
        return tuple(out), nerr

    def _berlekamp_massey(self, synd: list[int]) -> list[int]:
        """Minimal error-locator sigma(x), coefficients low to high."""
        field = self.field
        cur = [1]   # sigma estimate
        prev = [1]  # copy from last length change
        lenc = 0    # current LFSR length
        gap = 1     # steps since last length change
        prev_delta = 1
        for n, s_n in enumerate(synd):
            delta = s_n
            for i in range(1, lenc + 1):
                if i < len(cur) and cur[i]:
                    delta ^= field.mul(cur[i], synd[n - i])
            if delta == 0:
                gap += 1
                continue
            coef = field.div(delta, prev_delta)
            adjust = [0] * gap + [field.mul(coef, p) for p in prev]
            if 2 * lenc <= n:
                cur, prev = _poly_xor(cur, adjust), cur
                lenc = n + 1 - lenc
                prev_delta = delta
                gap = 1
            else:
                cur = _poly_xor(cur, adjust)
                gap += 1
        while len(cur) > 1 and cur[-1] == 0:
            cur.pop()
        return cur

    def _chien_search(self, sigma: list[int]) -> list[int]:
        """Degrees d in [0, N) with sigma(alpha^-d) = 0, i.e. error terms x^d."""
        field = self.field
        exp = field.exp_table
        log = field.log_table
        order = field.order
        found = []
        for d in range(self.n_symbols):
            x = exp[(order - d) % order]  # alpha^-d
            acc = 0
            for coef in reversed(sigma):
                if acc:
                    acc = exp[log[acc] + log[x]]
                acc ^= coef
            if acc == 0:
                found.append(d)
        return found

    def _forney(self, sigma: list[int], synd: list[int], err_degrees: list[int]) -> list[int]:
        """Error magnitudes via Omega(X^-1) / sigma'(X^-1), X = alpha^degree.

        With generator roots starting at alpha^1, Y_l = X_l * Omega / sigma'
        and the magnitude is Y_l / X_l, which cancels to Omega / sigma'.
        """
        field = self.field
        npar = self.num_parity
        omega = _poly_mul_trunc(field, synd, sigma, npar)
        # Formal derivative in characteristic 2: keep odd-power coefficients.
        sigma_deriv = [sigma[i] if i % 2 == 1 else 0 for i in range(1, len(sigma))]
        out = []
        for d in err_degrees:
            x_inv = field.alpha_pow(-d)
            num = _poly_eval(field, omega, x_inv)
            den = _poly_eval(field, sigma_deriv, x_inv)
            out.append(field.div(num, den))
        return out

    def __repr__(self) -> str:
        return (f"RsCode(m={self.field.m}, N={self.n_symbols}, "
                f"K={self.k_symbols}, t={self.t})")


def _poly_xor(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] ^= v
    return out


def _poly_mul_trunc(field: Field, a: list[int], b: list[int], nterms: int) -> list[int]:
    """(a * b) mod x^nterms, coefficients low to high."""
    out = [0] * nterms
    exp = field.exp_table
    log = field.log_table
    for i, ai in enumerate(a):
        if ai == 0 or i >= nterms:
            continue
        la = log[ai]
        for j, bj in enumerate(b):
            if bj and i + j < nterms:
                out[i + j] ^= exp[la + log[bj]]
    return out


def _poly_eval(field: Field, poly: list[int], x: int) -> int:
    """Evaluate a low-to-high coefficient polynomial at x (Horner)."""
    acc = 0
    exp = field.exp_table
    log = field.log_table
    if x == 0:
        return poly[0] if poly else 0
    lx = log[x]
    for coef in reversed(poly):
        if acc:
            acc = exp[log[acc] + lx]
        acc ^= coef
    return acc


def bits_to_symbols(bits, m: int) -> list[int]:
    """Pack a 0/1 sequence into symbols, big-endian within each symbol."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise LengthMismatchError("bit vector must be one-dimensional")
    if arr.size % m != 0:
        raise LengthMismatchError(
            f"bit length {arr.size} is not a multiple of m={m}"
        )
    if arr.size and arr.max() > 1:
        raise ValueError("bit vector entries must be 0 or 1")
    weights = 1 << np.arange(m - 1, -1, -1)
    return (arr.reshape(-1, m) @ weights).astype(int).tolist()


def symbols_to_bits(symbols, m: int) -> np.ndarray:
    """Unpack symbols to a 0/1 uint8 array, big-endian within each symbol."""
    arr = np.asarray(symbols, dtype=np.int64)
    if arr.ndim != 1:
        raise LengthMismatchError("symbol vector must be one-dimensional")
    if arr.size and (arr.min() < 0 or arr.max() >= (1 << m)):
        raise ValueError(f"symbol out of range for m={m}")
    shifts = np.arange(m - 1, -1, -1)
    return ((arr[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)
