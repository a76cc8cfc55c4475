"""Dense univariate polynomial kernels over F_p on int64 numpy arrays.

Arrays hold coefficients low to high, reduced into ``[0, p)``, with no
trailing zeros; the zero polynomial is the empty array.
"""

from __future__ import annotations

import numpy as np

from .base import NotInvertible

_EMPTY = np.zeros(0, dtype=np.int64)
_KRONECKER_MIN = 48
_FFT_MIN = 512


def empty() -> np.ndarray:
    return _EMPTY


def trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    if not len(nz):
        return _EMPTY
    top = nz[-1] + 1
    return a if top == len(a) else a[:top]


def const(c: int, p: int) -> np.ndarray:
    c %= p
    return np.array([c], dtype=np.int64) if c else _EMPTY


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    if not len(b):
        return a
    out = a.copy()
    out[:len(b)] += b
    out[:len(b)] %= p
    return trim(out)


def sub(a, b, p):
    return add(a, neg(b, p), p)


def neg(a, p):
    if not len(a):
        return a
    return (p - a) % p


def scale(a, c, p):
    c %= p
    if not c or not len(a):
        return _EMPTY
    return a * c % p


def mul(a, b, p):
    la, lb = len(a), len(b)
    if not la or not lb:
        return _EMPTY
    if la == 1:
        return scale(b, int(a[0]), p)
    if lb == 1:
        return scale(a, int(b[0]), p)
    short = min(la, lb)
    if short < _KRONECKER_MIN:
        return trim(np.convolve(a, b) % p)
    if short >= _FFT_MIN:
        got = _fft(a, b, p)
        if got is not None:
            return trim(got)
    return trim(_kronecker(a, b, p))


def _fft(a, b, p):
    """Float FFT product, accepted only when every entry rounds cleanly."""
    if min(len(a), len(b)) * (p - 1) ** 2 >= 1 << 30:
        return None
    n = len(a) + len(b) - 1
    size = 1 << (n - 1).bit_length()
    raw = np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)[:n]
    rounded = np.rint(raw)
    if np.max(np.abs(raw - rounded)) > 0.2:
        return None
    return rounded.astype(np.int64) % p


def _kronecker(a, b, p):
    bound = min(len(a), len(b)) * (p - 1) ** 2
    if bound < 1 << 8:
        width, dt = 1, "<u1"
    elif bound < 1 << 16:
        width, dt = 2, "<u2"
    elif bound < 1 << 32:
        width, dt = 4, "<u4"
    else:
        width, dt = 8, "<u8"
    ia = int.from_bytes(a.astype(dt).tobytes(), "little")
    ib = int.from_bytes(b.astype(dt).tobytes(), "little")
    n = len(a) + len(b) - 1
    raw = (ia * ib).to_bytes(n * width, "little")
    return np.frombuffer(raw, dtype=dt).astype(np.int64) % p


def upsample(a, factor):
    """``f(t) -> f(t**factor)``."""
    if factor == 1 or len(a) <= 1:
        return a
    out = np.zeros((len(a) - 1) * factor + 1, dtype=np.int64)
    out[::factor] = a
    return out


def strided_mul(a, b, p):
    """Product of ``(stride, arr)`` pairs, strides being powers of p.

    ``(s, arr)`` stands for ``arr`` upsampled by ``s``.
    """
    (sa, xa), (sb, xb) = a, b
    g = min(sa, sb)
    return g, mul(upsample(xa, sa // g), upsample(xb, sb // g), p)


def strided_len(a) -> int:
    s, arr = a
    return (len(arr) - 1) * s + 1 if len(arr) else 0


def divisible_stride(a, p):
    """True when every nonzero coefficient sits at an index divisible by p."""
    nz = np.flatnonzero(a)
    return bool(len(nz)) and not np.any(nz % p)


def divmod_(a, b, p):
    if not len(b):
        raise NotInvertible("polynomial division by zero")
    if len(a) < len(b):
        return _EMPTY, a
    r = a.copy()
    db = len(b) - 1
    inv_lead = pow(int(b[-1]), -1, p)
    q = np.zeros(len(a) - db, dtype=np.int64)
    for k in range(len(a) - 1, db - 1, -1):
        c = int(r[k]) * inv_lead % p
        if c:
            q[k - db] = c
            seg = r[k - db:k + 1]
            seg -= c * b
            seg %= p
    return trim(q), trim(r[:db])


def exact_div(a, b, p):
    q, r = divmod_(a, b, p)
    if len(r):
        raise ArithmeticError("inexact polynomial division")
    return q


def monic(a, p):
    if not len(a):
        return a
    lead = int(a[-1])
    if lead == 1:
        return a
    return a * pow(lead, -1, p) % p


def gcd(a, b, p):
    """Monic greatest common divisor (zero when both inputs are zero)."""
    while len(b):
        _, r = divmod_(a, b, p)
        a, b = b, r
    return monic(a, p)


def power(a, e, p):
    result = const(1, p)
    base = a
    while e:
        if e & 1:
            result = mul(result, base, p)
        e >>= 1
        if e:
            base = mul(base, base, p)
    return result


def frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a
