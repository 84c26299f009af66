"""Error-free transformations of binary64 sum, product and division.

Each function returns the rounded result together with its exact error, so
that for instance ``hi + lo == a + b`` holds in exact arithmetic.  The
checks here run at the API boundary only; the table builders call the
unchecked kernels directly.
"""

import math
from fractions import Fraction
from typing import NamedTuple

from . import backend
from .errors import EFTError

U = 2.0 ** -53
SPLIT_LIMIT = 2.0 ** 996
# below this a product's rounding error may fall into the subnormal range
PROD_FLOOR = 2.0 ** -969


class TwoTerm(NamedTuple):
    hi: float
    lo: float


class QuoRem(NamedTuple):
    q: float
    r: float


def _core(name):
    return backend.get(name)


def two_sum(a, b, backend=None) -> TwoTerm:
    """hi = fl(a + b) and hi + lo = a + b exactly (6 flops)."""
    x, y = _core(backend).two_sum(a, b)
    if not math.isfinite(x):
        raise EFTError("eft overflow")
    return TwoTerm(x, y)


def fast_two_sum(a, b, backend=None) -> TwoTerm:
    """Same contract as two_sum but needs |a| >= |b| (3 flops)."""
    if __debug__ and abs(a) < abs(b):
        raise EFTError("fast_two_sum ordering violated")
    x, y = _core(backend).fast_two_sum(a, b)
    if not math.isfinite(x):
        raise EFTError("eft overflow")
    return TwoTerm(x, y)


def split(a, backend=None) -> TwoTerm:
    """a = hi + lo with both halves fitting in 26 significand bits."""
    if abs(a) > SPLIT_LIMIT:
        raise EFTError("split overflow")
    return TwoTerm(*_core(backend).split(a))


def two_prod(a, b, backend=None) -> TwoTerm:
    """hi = fl(a * b) and hi + lo = a * b exactly (17 flops, Dekker split)."""
    if abs(a) > SPLIT_LIMIT or abs(b) > SPLIT_LIMIT:
        raise EFTError("eft range error")
    x, y = _core(backend).two_prod(a, b)
    if not math.isfinite(x) or (x != 0 and abs(x) < PROD_FLOOR) or (
            x == 0 and a != 0 and b != 0):
        raise EFTError("eft range error")
    return TwoTerm(x, y)


def two_prod_fma(a, b) -> TwoTerm:
    """FMA-style product EFT.

    Not used by any builder; the residual is obtained exactly from rational
    arithmetic since the interpreter offers no fused multiply-add.
    """
    x = a * b
    if not math.isfinite(x):
        raise EFTError("eft range error")
    y = float(Fraction(a) * Fraction(b) - Fraction(x))
    return TwoTerm(x, y)


def div_rem(a, b, backend=None) -> QuoRem:
    """q = fl(a / b) and a = b*q + r exactly (20 flops)."""
    if b == 0:
        raise EFTError("division by zero")
    q = a / b
    if not math.isfinite(q) or abs(q) > SPLIT_LIMIT or abs(b) > SPLIT_LIMIT:
        raise EFTError("eft range error")
    if a != 0 and (q == 0 or abs(a) < PROD_FLOOR):
        # b*q would underflow and the remainder is no longer exact
        raise EFTError("eft range error")
    q, r = _core(backend).div_rem(a, b)
    return QuoRem(q, r)
