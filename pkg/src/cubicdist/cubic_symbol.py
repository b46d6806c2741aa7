"""The cubic residue symbol (alpha/lambda)_3 and the characters chi_c.

Two independent routes: `symbol_prime_oracle` exponentiates in the residue
field, `symbol` runs a Euclid-style recursion driven by cubic reciprocity and
the supplementary laws for w and 1-w.  The array kernels at the bottom reduce
into F_p or F_{p^2} and are what the L-function code uses in bulk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eisenstein import (
    UNITS,
    EisensteinInt,
    ModulusC,
    PrimeTable,
    decompose,
    factor,
    powmod_array,
    primary_associate,
)

_NAMES = ("1", "zeta3", "zeta3^2")


@dataclass(frozen=True, slots=True)
class CubeRoot:
    """zeta3**exponent, or the zero value when exponent is None."""

    exponent: int | None

    def __post_init__(self) -> None:
        if self.exponent is not None and self.exponent not in (0, 1, 2):
            raise ValueError("exponent must be 0, 1, 2 or None")

    @classmethod
    def of(cls, e: int) -> CubeRoot:
        return cls(e % 3)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: CubeRoot) -> CubeRoot:
        if self.is_zero or other.is_zero:
            return ZERO_ROOT
        return CubeRoot.of(self.exponent + other.exponent)

    def __pow__(self, k: int) -> CubeRoot:
        if self.is_zero:
            return ONE_ROOT if k == 0 else ZERO_ROOT
        return CubeRoot.of(self.exponent * k)

    def conj(self) -> CubeRoot:
        return self if self.is_zero else CubeRoot.of(-self.exponent)

    def __complex__(self) -> complex:
        if self.is_zero:
            return 0j
        return complex(np.exp(2j * np.pi * self.exponent / 3))

    def __str__(self) -> str:
        return "0" if self.is_zero else _NAMES[self.exponent]


ONE_ROOT = CubeRoot(0)
ZERO_ROOT = CubeRoot(None)

# ------------------------------------------------------------------ oracle


def _fp2_mul(x: tuple[int, int], y: tuple[int, int], p: int) -> tuple[int, int]:
    bd = x[1] * y[1]
    return ((x[0] * y[0] - bd) % p, (x[0] * y[1] + x[1] * y[0] - bd) % p)


def _fp2_pow(x: tuple[int, int], e: int, p: int) -> tuple[int, int]:
    out = (1, 0)
    while e:
        if e & 1:
            out = _fp2_mul(out, x, p)
        x = _fp2_mul(x, x, p)
        e >>= 1
    return out


def symbol_prime_oracle(alpha: EisensteinInt, pi: EisensteinInt) -> CubeRoot:
    """(alpha/pi)_3 from alpha^((N(pi)-1)/3) = w^j mod pi, for a prime pi not above 3."""
    n = pi.norm()
    if n % 3 == 0 or n < 2:
        raise ValueError(f"{pi!r} is a unit or lies above 3")
    q = math.isqrt(n)
    if q * q == n and pi.a % q == 0 and pi.b % q == 0:
        # inert: O/pi = F_p[w]/(w^2+w+1)
        p = q
        x = (alpha.a % p, alpha.b % p)
        if x == (0, 0):
            return ZERO_ROOT
        t = _fp2_pow(x, (n - 1) // 3, p)
        table = {(1, 0): 0, (0, 1): 1, (p - 1, p - 1): 2}
    else:
        # split: O/pi = F_p with w -> r where pi | w - r
        p = n
        if pi.b % p == 0:
            raise ValueError(f"{pi!r} is not prime")
        r = (-pi.a * pow(pi.b, -1, p)) % p
        v = (alpha.a + alpha.b * r) % p
        if v == 0:
            return ZERO_ROOT
        t = pow(v, (p - 1) // 3, p)
        table = {1: 0, r: 1, r * r % p: 2}
    if t not in table:
        raise ValueError(f"{pi!r} is not prime")
    return CubeRoot(table[t])


def symbol_composite_oracle(alpha: EisensteinInt, lam: EisensteinInt) -> CubeRoot:
    """Product of prime symbols over the factorization of lambda."""
    out = ONE_ROOT
    for rec, m in factor(lam):
        if rec.norm == 3:
            raise ValueError("lambda divisible by 1-w")
        out = out * symbol_prime_oracle(alpha, rec.generator) ** m
    return out


# ------------------------------------------------------------------ fast route


def _unit_exponent(u: EisensteinInt) -> int:
    return UNITS.index(u) % 3


def symbol(alpha: EisensteinInt, lam: EisensteinInt) -> CubeRoot:
    """(alpha/lambda)_3 for lambda coprime to 3, by reciprocity descent.

    Each round reduces alpha mod lambda, splits the remainder as
    unit * (1-w)^r * primary, evaluates the unit and 1-w parts with the
    supplementary laws for lambda = 1 + 3m + 3n w:
        (w/lambda) = w^-(m+n),   ((1-w)/lambda) = w^m,   (-1/lambda) = 1,
    and swaps the primary part into the denominator.
    """
    if not lam:
        raise ValueError("lambda must be nonzero")
    if (lam.a + lam.b) % 3 == 0:
        raise ValueError(f"{lam!r} is divisible by 1-w")
    _, lam = primary_associate(lam)
    acc = 0
    a = alpha
    while lam.norm() != 1:
        a = a % lam
        if not a:
            return ZERO_ROOT
        u, r, prim = decompose(a)
        m, n = (lam.a - 1) // 3, lam.b // 3
        acc += r * m - _unit_exponent(u) * (m + n)
        assert prim.norm() < lam.norm(), "reciprocity descent must shrink the norm"
        a, lam = lam, prim
    return CubeRoot.of(acc)


def chi_c(c: ModulusC, ideal_gen: EisensteinInt) -> CubeRoot:
    """chi_c(<g>) = (a/c)_3 where g = unit * (1-w)^r * a with a primary."""
    _, _, a = decompose(ideal_gen)
    return symbol(a, c.value)


# ------------------------------------------------------------------ arrays


def _exponents_split(a: np.ndarray, b: np.ndarray, p, root) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    root = np.asarray(root, dtype=np.int64)
    v = (np.asarray(a, dtype=np.int64) % p + (np.asarray(b, dtype=np.int64) % p) * root) % p
    t = powmod_array(v, (p - 1) // 3, p)
    out = np.full(t.shape, -1, dtype=np.int8)
    out[t == 1] = 0
    out[t == root] = 1
    out[t == (root * root) % p] = 2
    if np.any((out < 0) & (v != 0)):
        raise ValueError("residue map did not land on a cube root of unity")
    return out


def _exponents_inert(a: np.ndarray, b: np.ndarray, p) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    x0 = np.asarray(a, dtype=np.int64) % p
    x1 = np.asarray(b, dtype=np.int64) % p
    shape = np.broadcast_shapes(x0.shape, x1.shape, p.shape)
    x0, x1 = np.broadcast_to(x0, shape).copy(), np.broadcast_to(x1, shape).copy()
    pp = np.broadcast_to(p, shape)
    e = ((pp * pp - 1) // 3).copy()
    r0, r1 = np.ones(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64)
    zero = (x0 == 0) & (x1 == 0)
    while e.any():
        odd = (e & 1).astype(bool)
        bd = r1 * x1
        n0 = (r0 * x0 - bd) % pp
        n1 = (r0 * x1 + r1 * x0 - bd) % pp
        r0, r1 = np.where(odd, n0, r0), np.where(odd, n1, r1)
        bd = x1 * x1
        x0, x1 = (x0 * x0 - bd) % pp, (2 * x0 * x1 - bd) % pp
        e >>= 1
    out = np.full(shape, -1, dtype=np.int8)
    out[(r0 == 1) & (r1 == 0)] = 0
    out[(r0 == 0) & (r1 == 1)] = 1
    out[(r0 == pp - 1) & (r1 == pp - 1)] = 2
    out[zero] = -1
    if np.any((out < 0) & ~zero):
        raise ValueError("residue map did not land on a cube root of unity")
    return out


def exponents_mod_prime(a, b, p: int, root: int) -> np.ndarray:
    """Exponents j of (x/pi)_3 for x = a + b*w (arrays); -1 marks pi | x.

    root < 0 selects the inert prime p, otherwise the split prime with
    pi | w - root.
    """
    if root < 0:
        return _exponents_inert(a, b, p)
    return _exponents_split(a, b, p, root)


def exponents_mod_element(a, b, lam: EisensteinInt) -> np.ndarray:
    """Exponents of (x/lambda)_3 over arrays of x, via the factorization of lambda."""
    from .eisenstein import residue_root

    a = np.asarray(a, dtype=np.int64)
    acc = np.zeros(np.broadcast_shapes(a.shape, np.shape(b)), dtype=np.int64)
    zero = np.zeros(acc.shape, dtype=bool)
    for rec, m in factor(lam):
        if rec.norm == 3:
            raise ValueError("lambda divisible by 1-w")
        root = residue_root(rec) if rec.norm == rec.p else -1
        e = exponents_mod_prime(a, b, rec.p, root)
        zero |= e < 0
        acc += m * e.astype(np.int64)
    out = (acc % 3).astype(np.int8)
    out[zero] = -1
    return out


def chi_at_primes(c: EisensteinInt, table: PrimeTable) -> np.ndarray:
    """Exponents of (c/pi)_3 for every prime of the table (-1 where pi | c)."""
    out = np.empty(len(table), dtype=np.int8)
    sp = table.split
    out[sp] = _exponents_split(c.a, c.b, table.p[sp], table.root[sp])
    if (~sp).any():
        out[~sp] = _exponents_inert(c.a, c.b, table.p[~sp])
    return out
