"""Double-double arithmetic.

A DD is the unevaluated sum hi + lo of two doubles with |lo| <= u|hi|.
Each routine follows its reference listing line by line, including which
EFT is used where, so flop counts are 10, 20, 22, 24 and 100.
"""

import math
from typing import NamedTuple

from . import backend
from .errors import DDError


class DD(NamedTuple):
    hi: float
    lo: float = 0.0

    def __float__(self):
        return self.hi + self.lo


def _wrap(pair):
    h, l = pair
    if not (math.isfinite(h) and math.isfinite(l)):
        raise DDError("dd overflow")
    return DD(h, l)


def _as_dd(a):
    if isinstance(a, DD):
        return a
    if isinstance(a, tuple):
        return DD(*a)
    return DD(float(a), 0.0)


def dd_add_d(a, b, backend=None):
    a = _as_dd(a)
    return _wrap(_core(backend).add_dd_d(a.hi, a.lo, b))


def dd_add_dd(a, b, backend=None):
    a, b = _as_dd(a), _as_dd(b)
    return _wrap(_core(backend).add_dd_dd(a.hi, a.lo, b.hi, b.lo))


def dd_mul_d(a, b, backend=None):
    a = _as_dd(a)
    return _wrap(_core(backend).prod_dd_d(a.hi, a.lo, b))


def dd_mul_dd(a, b, backend=None):
    a, b = _as_dd(a), _as_dd(b)
    return _wrap(_core(backend).prod_dd_dd(a.hi, a.lo, b.hi, b.lo))


def dd_div_dd(a, b, backend=None):
    a, b = _as_dd(a), _as_dd(b)
    if b.hi == 0:
        raise DDError("dd division by zero")
    return _wrap(_core(backend).div_dd_dd(a.hi, a.lo, b.hi, b.lo))


def dd_div_d_d(a, b, backend=None):
    """Quotient of two doubles as a DD (30 flops)."""
    if b == 0:
        raise DDError("dd division by zero")
    return _wrap(_core(backend).div_d_d(a, b))


def is_normalized(a):
    a = _as_dd(a)
    return a.hi + a.lo == a.hi and (a.hi != 0 or a.lo == 0)


def _core(name):
    return backend.get(name)
