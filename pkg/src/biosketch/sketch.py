"""Secure-sketch and fuzzy-commitment template protection over the RS codec.

Secure sketch: the enrolled reliable-bit vector is packed into symbols and
decoded; the K-symbol message of the decode outcome is the sketch, and only
its salted hash is stored. Authentication decodes the probe bits the same
way and compares hashes.

Fuzzy commitment: a random K-symbol message is encoded and the XOR offset
between its codeword bits and the enrolled bits is stored along with the
salted hash of the message. Authentication XORs the probe bits onto the
offset and decodes; any probe within t symbol errors of the enrolled bits
lands back on the enrolled codeword.

Records never contain the biometric bits, the key indices, or the plain
sketch. The hash is SHA-256 over salt || 64-bit little-endian bit length ||
big-endian packed bits.
"""

from __future__ import annotations

import hmac
import hashlib
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    EnrollmentDecodeError,
    LengthMismatchError,
    ParameterMismatchError,
    ParseError,
)
from .gf import Field
from .rs import DecodePolicy, RsCode, bits_to_symbols, symbols_to_bits

SCHEME_SECURE_SKETCH = "secure-sketch"
SCHEME_FUZZY_COMMITMENT = "fuzzy-commitment"

DIGEST_BITS = 256


class DecisionReason(str, Enum):
    HASH_MATCH = "hash-match"
    HASH_MISMATCH = "hash-mismatch"
    DECODE_FAILURE = "decode-failure"


@dataclass(frozen=True)
class Decision:
    accepted: bool
    reason: DecisionReason

    def __post_init__(self):
        assert self.accepted == (self.reason is DecisionReason.HASH_MATCH)


@dataclass(frozen=True)
class SketchParams:
    """Code and policy parameters pinned inside every record."""

    m: int
    k_symbols: int
    policy: DecodePolicy
    primitive_poly: int

    def build_code(self) -> RsCode:
        return RsCode(Field(self.m, self.primitive_poly), self.k_symbols)

    @property
    def n_bits(self) -> int:
        return self.m * ((1 << self.m) - 1)


def params_for_code(code: RsCode, policy: DecodePolicy) -> SketchParams:
    return SketchParams(
        m=code.field.m,
        k_symbols=code.k_symbols,
        policy=DecodePolicy(policy),
        primitive_poly=code.field.primitive_poly,
    )


@dataclass(frozen=True)
class EnrollmentRecord:
    """The stored template: scheme, parameters, salt, digest, FC offset.

    ``offset`` is the big-endian packed XOR offset (fuzzy commitment only);
    its bit length is ``params.n_bits``.
    """

    scheme: str
    subject_id: str
    params: SketchParams
    salt: bytes
    digest: bytes
    offset: bytes | None = None

    def __post_init__(self):
        if self.scheme not in (SCHEME_SECURE_SKETCH, SCHEME_FUZZY_COMMITMENT):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if len(self.digest) != DIGEST_BITS // 8:
            raise ValueError("digest must be 256 bits")
        if self.scheme == SCHEME_SECURE_SKETCH and self.offset is not None:
            raise ValueError("secure-sketch records store no offset")
        if self.scheme == SCHEME_FUZZY_COMMITMENT:
            expect = (self.params.n_bits + 7) // 8
            if self.offset is None or len(self.offset) != expect:
                raise ValueError(f"fuzzy-commitment offset must be {expect} bytes")

    def offset_bits(self) -> np.ndarray:
        if self.offset is None:
            raise ValueError("record has no offset")
        return np.unpackbits(
            np.frombuffer(self.offset, dtype=np.uint8), count=self.params.n_bits
        )


def hash_sketch(bits, salt: bytes) -> bytes:
    """Salted SHA-256 over the canonical encoding of a bit vector."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise LengthMismatchError("bit vector must be 1-D")
    if arr.size and arr.max() > 1:
        raise ValueError("bit vector entries must be 0 or 1")
    h = hashlib.sha256()
    h.update(bytes(salt))
    h.update(arr.size.to_bytes(8, "little"))
    h.update(np.packbits(arr).tobytes())
    return h.digest()


def _pack_offset(bits: np.ndarray) -> bytes:
    return np.packbits(bits).tobytes()


def _check_bits(bits, n_bits: int, what: str) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.size != n_bits:
        raise LengthMismatchError(f"{what} must be {n_bits} bits, got {arr.size}")
    if arr.max(initial=0) > 1:
        raise ValueError(f"{what} entries must be 0 or 1")
    return arr


def enroll_ss(r_a, code: RsCode, policy: DecodePolicy, salt: bytes,
              subject_id: str = "") -> EnrollmentRecord:
    """Secure-sketch enrollment: store the salted hash of the decoded message.

    Under FAIL_DENY an undecodable enrollment raises ``EnrollmentDecodeError``
    and the caller should re-acquire or re-enroll.
    """
    policy = DecodePolicy(policy)
    arr = _check_bits(r_a, code.n_bits, "enrollment bits")
    outcome = code.decode(bits_to_symbols(arr, code.field.m), policy)
    if not outcome.ok:
        raise EnrollmentDecodeError(
            "enrollment bits are not within decoding range under fail-deny"
        )
    digest = hash_sketch(symbols_to_bits(outcome.message, code.field.m), salt)
    return EnrollmentRecord(
        scheme=SCHEME_SECURE_SKETCH,
        subject_id=subject_id,
        params=params_for_code(code, policy),
        salt=bytes(salt),
        digest=digest,
    )


def enroll_fc(r_a, code: RsCode, rng_seed, salt: bytes,
              subject_id: str = "",
              policy: DecodePolicy = DecodePolicy.FALLBACK_SYSTEMATIC) -> EnrollmentRecord:
    """Fuzzy-commitment enrollment: random codeword offset plus message hash."""
    arr = _check_bits(r_a, code.n_bits, "enrollment bits")
    rng = np.random.default_rng(rng_seed)
    message = rng.integers(0, code.field.size, size=code.k_symbols).tolist()
    codeword_bits = symbols_to_bits(code.encode(message), code.field.m)
    offset = codeword_bits ^ arr
    digest = hash_sketch(symbols_to_bits(message, code.field.m), salt)
    return EnrollmentRecord(
        scheme=SCHEME_FUZZY_COMMITMENT,
        subject_id=subject_id,
        params=params_for_code(code, policy),
        salt=bytes(salt),
        digest=digest,
        offset=_pack_offset(offset),
    )


def _resolve_code(record: EnrollmentRecord, code: RsCode | None) -> RsCode:
    if code is None:
        return record.params.build_code()
    if (code.field.m != record.params.m
            or code.k_symbols != record.params.k_symbols
            or code.field.primitive_poly != record.params.primitive_poly):
        raise ParameterMismatchError(
            f"code {code!r} does not match record parameters {record.params}"
        )
    return code


def _probe_bits(record: EnrollmentRecord, r_b) -> np.ndarray:
    arr = np.asarray(r_b, dtype=np.uint8)
    if arr.ndim != 1 or arr.size != record.params.n_bits:
        raise ParameterMismatchError(
            f"probe has {arr.size} bits, record expects {record.params.n_bits}"
        )
    if arr.max(initial=0) > 1:
        raise ValueError("probe entries must be 0 or 1")
    return arr


def _decide(record: EnrollmentRecord, message_symbols, m: int) -> Decision:
    digest = hash_sketch(symbols_to_bits(message_symbols, m), record.salt)
    if hmac.compare_digest(digest, record.digest):
        return Decision(True, DecisionReason.HASH_MATCH)
    return Decision(False, DecisionReason.HASH_MISMATCH)


def auth_ss(r_b, record: EnrollmentRecord, code: RsCode | None = None) -> Decision:
    """Secure-sketch authentication of probe bits against a record."""
    if record.scheme != SCHEME_SECURE_SKETCH:
        raise ParameterMismatchError("record is not a secure-sketch record")
    code = _resolve_code(record, code)
    arr = _probe_bits(record, r_b)
    outcome = code.decode(bits_to_symbols(arr, code.field.m), record.params.policy)
    if not outcome.ok:
        return Decision(False, DecisionReason.DECODE_FAILURE)
    return _decide(record, outcome.message, code.field.m)


def auth_fc(r_b, record: EnrollmentRecord, code: RsCode | None = None) -> Decision:
    """Fuzzy-commitment authentication of probe bits against a record."""
    if record.scheme != SCHEME_FUZZY_COMMITMENT:
        raise ParameterMismatchError("record is not a fuzzy-commitment record")
    code = _resolve_code(record, code)
    arr = _probe_bits(record, r_b)
    shifted = record.offset_bits() ^ arr
    outcome = code.decode(bits_to_symbols(shifted, code.field.m), record.params.policy)
    if not outcome.ok:
        return Decision(False, DecisionReason.DECODE_FAILURE)
    return _decide(record, outcome.message, code.field.m)


def authenticate(r_b, record: EnrollmentRecord, code: RsCode | None = None) -> Decision:
    if record.scheme == SCHEME_SECURE_SKETCH:
        return auth_ss(r_b, record, code)
    return auth_fc(r_b, record, code)


# -- record file format -------------------------------------------------------
#
# Line-oriented text, hex-encoded binary fields:
#   biosketch-record v1
#   subject_id=<id>
#   scheme=secure-sketch | fuzzy-commitment
#   m=<int>
#   k_symbols=<int>
#   policy=fail-deny | fallback
#   primitive_poly=<int>
#   salt=<hex>
#   digest=<hex, 64 chars>
#   offset=<hex>             (fuzzy commitment only)

_RECORD_HEADER = "biosketch-record v1"


def record_to_text(record: EnrollmentRecord) -> str:
    lines = [
        _RECORD_HEADER,
        f"subject_id={record.subject_id}",
        f"scheme={record.scheme}",
        f"m={record.params.m}",
        f"k_symbols={record.params.k_symbols}",
        f"policy={record.params.policy.value}",
        f"primitive_poly={record.params.primitive_poly}",
        f"salt={record.salt.hex()}",
        f"digest={record.digest.hex()}",
    ]
    if record.offset is not None:
        lines.append(f"offset={record.offset.hex()}")
    return "\n".join(lines) + "\n"


def record_from_text(text: str) -> EnrollmentRecord:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _RECORD_HEADER:
        raise ParseError("not an enrollment record")
    try:
        fields = dict(ln.split("=", 1) for ln in lines[1:])
        params = SketchParams(
            m=int(fields["m"]),
            k_symbols=int(fields["k_symbols"]),
            policy=DecodePolicy(fields["policy"]),
            primitive_poly=int(fields["primitive_poly"]),
        )
        offset = bytes.fromhex(fields["offset"]) if "offset" in fields else None
        return EnrollmentRecord(
            scheme=fields["scheme"],
            subject_id=fields["subject_id"],
            params=params,
            salt=bytes.fromhex(fields["salt"]),
            digest=bytes.fromhex(fields["digest"]),
            offset=offset,
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed enrollment record: {exc}") from exc
