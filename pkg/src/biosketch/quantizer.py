"""Binarization and user-specific reliable-component selection.

The fused feature vector is binarized against per-dimension population
medians, so over the reference population every dimension splits evenly and
an unrelated subject's bits look like fair coin flips. Per user, dimensions
are scored by the probability that a fresh sample reproduces the enrolled
bit under a Gaussian model, and the key is a nonce-keyed draw of G
dimensions from a window of the top-scoring candidates. The window is what
makes keys revocable: a fresh nonce yields a different key over nearly as
reliable components. With ``window_factor=1`` the draw degenerates to the
plain top-G set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import DimensionMismatchError, InsufficientDataError, ParseError

SIGMA_FLOOR = 1e-9


@dataclass(frozen=True)
class PopulationStats:
    """Per-dimension mean and median over a reference population."""

    mean: np.ndarray
    median: np.ndarray
    n_subjects: int
    n_samples: int

    @property
    def dimension(self) -> int:
        return self.median.size


@dataclass(frozen=True)
class UserStats:
    """Per-dimension mean and standard deviation of one user's samples."""

    mean: np.ndarray
    std: np.ndarray
    n_samples: int

    @property
    def dimension(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class ReliableKey:
    """The user-specific key: G sorted component indices plus its nonce."""

    indices: tuple[int, ...]
    dimension: int
    nonce: int

    def __post_init__(self):
        idx = self.indices
        if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
            raise ValueError("key indices must be strictly increasing")
        if idx and (idx[0] < 0 or idx[-1] >= self.dimension):
            raise IndexError("key index out of range")

    @property
    def count(self) -> int:
        return len(self.indices)


def population_stats(vectors, subject_ids) -> PopulationStats:
    """Reference statistics from fused vectors labelled by subject."""
    mat = np.asarray(vectors, dtype=np.float64)
    if mat.ndim != 2:
        raise DimensionMismatchError("vectors must be a (samples, dims) matrix")
    ids = list(subject_ids)
    if len(ids) != mat.shape[0]:
        raise DimensionMismatchError("one subject id per sample row required")
    if len(set(ids)) < 2:
        raise InsufficientDataError("population statistics need >= 2 subjects")
    if not np.all(np.isfinite(mat)):
        raise ValueError("non-finite values in population vectors")
    return PopulationStats(
        mean=mat.mean(axis=0),
        median=np.median(mat, axis=0),
        n_subjects=len(set(ids)),
        n_samples=mat.shape[0],
    )


def user_stats(vectors) -> UserStats:
    """Enrollment statistics from one user's fused sample vectors."""
    mat = np.asarray(vectors, dtype=np.float64)
    if mat.ndim != 2:
        raise DimensionMismatchError("vectors must be a (samples, dims) matrix")
    if mat.shape[0] < 2:
        raise InsufficientDataError("user statistics need >= 2 samples")
    return UserStats(
        mean=mat.mean(axis=0),
        std=mat.std(axis=0, ddof=1),
        n_samples=mat.shape[0],
    )


def binarize(vector, pop: PopulationStats) -> np.ndarray:
    """Bit j is 1 when the vector exceeds the population median there."""
    vec = np.asarray(vector, dtype=np.float64)
    if vec.shape != (pop.dimension,):
        raise DimensionMismatchError(
            f"vector has shape {vec.shape}, expected ({pop.dimension},)"
        )
    return (vec > pop.median).astype(np.uint8)


def reliability(user: UserStats, pop: PopulationStats) -> np.ndarray:
    """Probability that a fresh sample reproduces the enrolled bit.

    Gaussian model per dimension: Phi(|mu - median| / sigma). Zero-variance
    dimensions use a floor of 1e-9, which drives the score to 1 when the
    mean is off the median and leaves it at 0.5 otherwise.
    """
    if user.dimension != pop.dimension:
        raise DimensionMismatchError(
            f"user dimension {user.dimension} != population {pop.dimension}"
        )
    z = np.abs(user.mean - pop.median) / np.maximum(user.std, SIGMA_FLOOR)
    return ndtr(z)


def select_reliable(scores, count: int, nonce: int,
                    window_factor: float = 2.0) -> ReliableKey:
    """Nonce-keyed draw of `count` indices from the top-scoring window.

    Candidates are ranked by score with a nonce-keyed pseudorandom
    permutation breaking ties; the window is the best
    min(d, round(count * window_factor)) of them and the key is a uniform
    draw of `count` indices from the window using the same nonce. The result
    is a pure function of (scores, count, nonce, window_factor).
    """
    sc = np.asarray(scores, dtype=np.float64)
    if sc.ndim != 1:
        raise DimensionMismatchError("scores must be a 1-D vector")
    d = sc.size
    if not 1 <= count <= d:
        raise ValueError(f"cannot select {count} of {d} components")
    if window_factor < 1.0:
        raise ValueError("window_factor must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([0x6B65, int(nonce)]))
    tie_break = rng.permutation(d)
    order = np.lexsort((tie_break, -sc))
    window = order[: min(d, max(count, int(round(count * window_factor))))]
    if window.size > count:
        chosen = rng.choice(window, size=count, replace=False)
    else:
        chosen = window
    return ReliableKey(
        indices=tuple(int(i) for i in np.sort(chosen)),
        dimension=d,
        nonce=int(nonce),
    )


def extract(bits, key: ReliableKey) -> np.ndarray:
    """Gather the key's components from a binarized vector."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise DimensionMismatchError("bit vector must be 1-D")
    if key.indices and key.indices[-1] >= arr.size:
        raise IndexError(
            f"key index {key.indices[-1]} out of range for {arr.size} bits"
        )
    return arr[list(key.indices)]


# -- key file format ----------------------------------------------------------
#
# Line-oriented text:
#   biosketch-key v1
#   d=<dimension>
#   G=<count>
#   nonce=<decimal>
#   <index>        (one decimal index per line, ascending)

_KEY_HEADER = "biosketch-key v1"


def key_to_text(key: ReliableKey) -> str:
    lines = [_KEY_HEADER, f"d={key.dimension}", f"G={key.count}",
             f"nonce={key.nonce}"]
    lines.extend(str(i) for i in key.indices)
    return "\n".join(lines) + "\n"


def key_from_text(text: str) -> ReliableKey:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _KEY_HEADER:
        raise ParseError("not a reliable-key file")
    try:
        fields = dict(ln.split("=", 1) for ln in lines[1:4])
        d = int(fields["d"])
        count = int(fields["G"])
        nonce = int(fields["nonce"])
        indices = tuple(int(ln) for ln in lines[4:])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed key file: {exc}") from exc
    if len(indices) != count:
        raise ParseError(f"key file lists {len(indices)} indices, header says {count}")
    return ReliableKey(indices=indices, dimension=d, nonce=nonce)
