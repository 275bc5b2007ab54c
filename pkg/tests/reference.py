"""Independent reference implementations used as test oracles.

Everything here is deliberately written the slow, obvious way and shares no
code with the package: polynomial arithmetic by shift-and-reduce, matrix
products by explicit loops, decoding by exhaustive search.
"""

import itertools
import math

import numpy as np


def slow_gf_mul(a: int, b: int, primitive_poly: int, m: int) -> int:
    """Carry-less multiply then reduce modulo the field polynomial."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & (1 << m):
            a ^= primitive_poly
    return acc


def slow_gf_pow(a: int, e: int, primitive_poly: int, m: int) -> int:
    acc = 1
    for _ in range(e):
        acc = slow_gf_mul(acc, a, primitive_poly, m)
    return acc


def element_order(a: int, primitive_poly: int, m: int) -> int:
    """Multiplicative order of a nonzero element, by iteration."""
    acc = a
    order = 1
    while acc != 1:
        acc = slow_gf_mul(acc, a, primitive_poly, m)
        order += 1
        if order > (1 << m):
            raise AssertionError("element never cycled; polynomial not invertible")
    return order


def brute_force_nearest(codewords, received):
    """All minimum-distance codewords, in enumeration order."""
    best, best_d = [], None
    for cw in codewords:
        d = sum(1 for x, y in zip(cw, received) if x != y)
        if best_d is None or d < best_d:
            best, best_d = [tuple(cw)], d
        elif d == best_d:
            best.append(tuple(cw))
    return best, best_d


def naive_affine(W, b, x):
    """Matrix-vector product plus bias with explicit loops."""
    out = []
    for i in range(len(W)):
        acc = b[i]
        for j in range(len(x)):
            acc += W[i][j] * x[j]
        out.append(acc)
    return np.asarray(out)


def naive_bilinear(P, face, iris):
    """Projection of the outer product with explicit loops."""
    flat = []
    for f in face:
        for g in iris:
            flat.append(f * g)
    out = []
    for i in range(len(P)):
        acc = 0.0
        for j in range(len(flat)):
            acc += P[i][j] * flat[j]
        out.append(acc)
    return np.asarray(out)


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the error function."""
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def error_patterns(n: int, q: int, max_weight: int):
    """Every q-ary error pattern of length n with weight <= max_weight."""
    yield (0,) * n
    for w in range(1, max_weight + 1):
        for positions in itertools.combinations(range(n), w):
            for values in itertools.product(range(1, q), repeat=w):
                pattern = [0] * n
                for p, v in zip(positions, values):
                    pattern[p] = v
                yield tuple(pattern)
