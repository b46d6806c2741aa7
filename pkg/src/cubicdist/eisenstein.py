"""Exact arithmetic in the Eisenstein integers Z[w], w = exp(2*pi*i/3).

Elements are pairs (a, b) meaning a + b*w.  Python integers are unbounded, so
the scalar code never overflows.  The vectorized helpers at the bottom work in
int64 and check their own bounds.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

INT64_SAFE = 3_037_000_499  # largest m with m*m < 2**63


def _round_div(n: int, d: int) -> int:
    """Nearest integer to n/d (d > 0), ties rounded up."""
    return (2 * n + d) // (2 * d)


@dataclass(frozen=True, slots=True, order=True)
class EisensteinInt:
    a: int
    b: int

    @classmethod
    def parse(cls, text: str) -> EisensteinInt:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected A,B but got {text!r}")
        return cls(int(parts[0]), int(parts[1]))

    @staticmethod
    def _coerce(other: EisensteinInt | int) -> EisensteinInt:
        if isinstance(other, EisensteinInt):
            return other
        if isinstance(other, (int, np.integer)):
            return EisensteinInt(int(other), 0)
        return NotImplemented

    def __add__(self, other: EisensteinInt | int) -> EisensteinInt:
        o = self._coerce(other)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other: EisensteinInt | int) -> EisensteinInt:
        o = self._coerce(other)
        return EisensteinInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: int) -> EisensteinInt:
        return self._coerce(other) - self

    def __neg__(self) -> EisensteinInt:
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other: EisensteinInt | int) -> EisensteinInt:
        o = self._coerce(other)
        bd = self.b * o.b
        return EisensteinInt(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> EisensteinInt:
        if k < 0:
            raise ValueError("negative power")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> EisensteinInt:
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __complex__(self) -> complex:
        return complex(self.a - 0.5 * self.b, self.b * math.sqrt(3) / 2)

    def __divmod__(self, other: EisensteinInt | int) -> tuple[EisensteinInt, EisensteinInt]:
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[w]")
        t = self * o.conj()
        q = EisensteinInt(_round_div(t.a, n), _round_div(t.b, n))
        return q, self - q * o

    def __floordiv__(self, other: EisensteinInt | int) -> EisensteinInt:
        return divmod(self, other)[0]

    def __mod__(self, other: EisensteinInt | int) -> EisensteinInt:
        return divmod(self, other)[1]

    def exact_div(self, other: EisensteinInt | int) -> EisensteinInt:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other!r} does not divide {self!r}")
        return q

    def divides(self, other: EisensteinInt | int) -> bool:
        """True if self | other."""
        if not self:
            return not self._coerce(other)
        return not (self._coerce(other) % self)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_primary(self) -> bool:
        """x = 1 mod 3."""
        return self.a % 3 == 1 and self.b % 3 == 0

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}w"


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
ZETA = EisensteinInt(0, 1)
RAMIFIED = EisensteinInt(1, -1)  # 1 - w, the prime above 3

# zeta^e for e = 0, 1, 2 and their negatives
UNITS = (ONE, ZETA, EisensteinInt(-1, -1), -ONE, -ZETA, EisensteinInt(1, 1))


def unit(e: int, negative: bool = False) -> EisensteinInt:
    u = UNITS[e % 3]
    return -u if negative else u


def norm(x: EisensteinInt) -> int:
    return x.norm()


def gcd(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    """A greatest common divisor (defined up to units) by norm descent."""
    while y:
        x, y = y, x % y
    return x


def ramified_valuation(x: EisensteinInt) -> tuple[int, EisensteinInt]:
    """Return (r, y) with x = (1-w)^r * y and 1-w not dividing y."""
    if not x:
        raise ValueError("zero has no valuation")
    r, a, b = 0, x.a, x.b
    while (a + b) % 3 == 0:
        # x / (1-w) = x * (2+w) / 3
        a, b = (2 * a - b) // 3, (a + b) // 3
        r += 1
    return r, EisensteinInt(a, b)


def decompose(x: EisensteinInt) -> tuple[EisensteinInt, int, EisensteinInt]:
    """x = unit * (1-w)^r * primary with primary = 1 mod 3."""
    r, y = ramified_valuation(x)
    for u in UNITS:
        p = y * u.conj()
        if p.is_primary():
            return u, r, p
    raise AssertionError(f"no primary associate for {x!r}")  # pragma: no cover


def primary_associate(x: EisensteinInt) -> tuple[EisensteinInt, EisensteinInt]:
    """(unit, primary) with x = unit * (1-w)^r * primary for the appropriate r."""
    if not x:
        raise ValueError("zero has no primary associate")
    u, _, p = decompose(x)
    return u, p


class Splitting(str, enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True, slots=True)
class PrimeIdealRec:
    generator: EisensteinInt
    norm: int
    splitting: Splitting

    @property
    def p(self) -> int:
        """The rational prime below."""
        return math.isqrt(self.norm) if self.splitting is Splitting.INERT else self.norm

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm, self.generator.a, self.generator.b)


RAMIFIED_PRIME = PrimeIdealRec(RAMIFIED, 3, Splitting.RAMIFIED)


@dataclass(frozen=True, slots=True)
class ModulusC:
    value: EisensteinInt
    norm: int

    def __post_init__(self) -> None:
        v = self.value
        if v.a % 9 != 1 or v.b % 9 != 0 or v == ONE:
            raise ValueError(f"{v!r} is not = 1 mod 9 or equals 1")
        if v.norm() != self.norm:
            raise ValueError("norm mismatch")

    @classmethod
    def checked(cls, value: EisensteinInt) -> ModulusC:
        if not is_squarefree(value):
            raise ValueError(f"{value!r} is not square-free")
        return cls(value, value.norm())


# ---------------------------------------------------------------- rational side


def rational_primes(n: int) -> np.ndarray:
    """Primes <= n by an Eratosthenes sieve."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    s[4::2] = False
    for i in range(3, math.isqrt(n) + 1, 2):
        if s[i]:
            s[i * i :: 2 * i] = False
    return np.flatnonzero(s).astype(np.int64)


_TRIAL_LIMIT = 1 << 20


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in rational_primes(_TRIAL_LIMIT))


def factor_int(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization of a positive integer."""
    if n < 1:
        raise ValueError("factor_int needs n >= 1")
    out = []

    def strip(d: int) -> None:
        nonlocal n
        k = 0
        while n % d == 0:
            n //= d
            k += 1
        if k:
            out.append((d, k))

    for p in _small_primes():
        if p * p > n:
            break
        strip(p)
    else:
        d = _TRIAL_LIMIT + 1
        while d * d <= n:
            strip(d)
            d += 2
    if n > 1:
        out.append((n, 1))
    return out


def cube_root_of_unity_mod(p: int) -> int:
    """Some r with r^2 + r + 1 = 0 mod p, for a prime p = 1 mod 3."""
    if p % 3 != 1:
        raise ValueError(f"{p} is not 1 mod 3")
    e = (p - 1) // 3
    for g in range(2, p):
        r = pow(g, e, p)
        if r != 1:
            return r
    raise AssertionError("unreachable")  # pragma: no cover


@lru_cache(maxsize=1 << 16)
def split_prime_pair(p: int) -> tuple[EisensteinInt, EisensteinInt]:
    """The two primary primes of norm p (p = 1 mod 3), sorted."""
    r = cube_root_of_unity_mod(p)
    pi = gcd(EisensteinInt(p, 0), EisensteinInt(-r, 1))
    if pi.norm() != p:
        raise AssertionError(f"gcd failed for p={p}")
    _, pi = primary_associate(pi)
    return tuple(sorted((pi, pi.conj())))  # type: ignore[return-value]


def prime_record(p: int, generator: EisensteinInt | None = None) -> PrimeIdealRec:
    """A prime ideal record above the rational prime p."""
    if p == 3:
        return RAMIFIED_PRIME
    if p % 3 == 2:
        return PrimeIdealRec(EisensteinInt(-p, 0), p * p, Splitting.INERT)
    if generator is None:
        generator = split_prime_pair(p)[0]
    return PrimeIdealRec(generator, p, Splitting.SPLIT)


def enumerate_primes(max_norm: int) -> list[PrimeIdealRec]:
    """All prime ideals of norm <= max_norm, sorted by norm then generator."""
    if max_norm < 3:
        raise ValueError("max_norm must be >= 3")
    out = []
    for p in rational_primes(max_norm).tolist():
        if p == 3:
            out.append(RAMIFIED_PRIME)
        elif p % 3 == 1:
            for g in split_prime_pair(p):
                out.append(PrimeIdealRec(g, p, Splitting.SPLIT))
        elif p * p <= max_norm:
            out.append(prime_record(p))
    out.sort(key=PrimeIdealRec.sort_key)
    return out


def factor(x: EisensteinInt) -> list[tuple[PrimeIdealRec, int]]:
    """Prime ideal factorization of <x>, sorted by norm then generator."""
    if not x:
        raise ValueError("cannot factor zero")
    r, y = ramified_valuation(x)
    out = [(RAMIFIED_PRIME, r)] if r else []
    for p, k in factor_int(y.norm()):
        if p % 3 == 2:
            rec = prime_record(p)
            y = y.exact_div(p ** (k // 2))
            out.append((rec, k // 2))
            continue
        for g in split_prime_pair(p):
            m = 0
            while g.divides(y):
                y = y.exact_div(g)
                m += 1
            if m:
                out.append((PrimeIdealRec(g, p, Splitting.SPLIT), m))
    if not y.is_unit():
        raise AssertionError(f"factorization of {x!r} left {y!r}")
    out.sort(key=lambda t: t[0].sort_key())
    return out


def factorization_unit(x: EisensteinInt, factors: Iterable[tuple[PrimeIdealRec, int]]) -> EisensteinInt:
    """The unit u with x = u * prod(generator^mult)."""
    prod = ONE
    for rec, m in factors:
        prod = prod * rec.generator**m
    return x.exact_div(prod)


def is_squarefree(x: EisensteinInt) -> bool:
    if not x:
        raise ValueError("zero is not square-free or otherwise")
    return all(m == 1 for _, m in factor(x))


def enumerate_C(max_norm: int) -> list[ModulusC]:
    """All c in the modulus family with N(c) <= max_norm, sorted by (norm, a, b)."""
    a, b, n = moduli_arrays(max_norm)
    return [ModulusC(EisensteinInt(int(x), int(y)), int(m)) for x, y, m in zip(a, b, n)]


# ---------------------------------------------------------------- vectorized


def norm_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a * a - a * b + b * b


def squarefree_int_mask(n: np.ndarray, segment: int = 1 << 22) -> np.ndarray:
    """mu(n)^2 == 1 for each entry of a positive int64 array (segmented sieve)."""
    n = np.asarray(n, dtype=np.int64)
    out = np.ones(n.shape, dtype=bool)
    if n.size == 0:
        return out
    if n.min() < 1:
        raise ValueError("squarefree_int_mask needs positive entries")
    top = int(n.max())
    ps = rational_primes(math.isqrt(top))
    sq = ps * ps
    order = np.argsort(n, kind="stable")
    ns = n[order]
    res = np.ones(ns.shape, dtype=bool)
    lo = 0
    while lo <= top:
        hi = min(lo + segment, top + 1)
        i0, i1 = np.searchsorted(ns, [lo, hi])
        if i1 > i0:
            seg = np.ones(hi - lo, dtype=bool)
            for q in sq.tolist():
                if q >= hi:
                    break
                seg[(-lo) % q :: q] = False
            res[i0:i1] = seg[ns[i0:i1] - lo]
        lo = hi
    out[order] = res
    return out


def squarefree_mask(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Square-freeness of a + b*w in Z[w] via rational data.

    With x = (1-w)^r * y, y coprime to 3, g = gcd of the coordinates of y and
    y' = y/g primitive: x is square-free iff r <= 1, g and N(y') are square-free
    integers and gcd(g, N(y')) = 1.  A primitive element has at most one of two
    conjugate split primes as a factor, so N(y') tracks its exponents exactly.
    """
    a = np.asarray(a, dtype=np.int64).copy()
    b = np.asarray(b, dtype=np.int64).copy()
    ok = (a != 0) | (b != 0)
    div = ((a + b) % 3 == 0) & ok
    # one factor of 1-w may be removed; a second one means 3 | x
    a2, b2 = (2 * a - b) // 3, (a + b) // 3
    a = np.where(div, a2, a)
    b = np.where(div, b2, b)
    ok &= ~(div & ((a + b) % 3 == 0))
    g = np.gcd(a, b)
    g = np.where(g == 0, 1, g)
    n = norm_array(a // g, b // g)
    n = np.where(ok, n, 1)
    if n.size and n.max() > INT64_SAFE**2 // 4:
        raise OverflowError("norm too large for int64 kernels")
    good = squarefree_int_mask(n) & squarefree_int_mask(g) & (np.gcd(g, n) == 1)
    return good & ok


def _row_bounds(b: np.ndarray, bound: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer range of a with a^2 - a b + b^2 <= bound, per b (empty when lo > hi)."""
    disc = (4 * bound - 3 * b * b).astype(float)
    root = np.sqrt(np.maximum(disc, 0.0))
    lo = np.ceil((b - root) / 2 - 1e-9).astype(np.int64)
    hi = np.floor((b + root) / 2 + 1e-9).astype(np.int64)
    # repair rounding at the boundary
    lo = np.where(norm_array(lo - 1, b) <= bound, lo - 1, lo)
    lo = np.where(norm_array(lo, b) > bound, lo + 1, lo)
    hi = np.where(norm_array(hi + 1, b) <= bound, hi + 1, hi)
    hi = np.where(norm_array(hi, b) > bound, hi - 1, hi)
    empty = disc < 0
    return np.where(empty, 1, lo), np.where(empty, 0, hi)


def _expand(b: np.ndarray, lo: np.ndarray, hi: np.ndarray, a0: int, step: int):
    """Points a = a0 + step*s in [lo, hi] for each row b."""
    slo = -((a0 - lo) // step)  # ceil((lo - a0)/step)
    shi = (hi - a0) // step
    counts = np.maximum(shi - slo + 1, 0)
    total = int(counts.sum())
    bb = np.repeat(b, counts)
    start = np.repeat(slo, counts)
    offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    return a0 + step * (start + offs), bb


def _lattice_ellipse(max_norm: int, a0: int, b0: int, step: int, min_norm: int = 0):
    """Points a = a0 + step*s, b = b0 + step*t with min_norm < N(a+bw) <= max_norm."""
    bmax = math.isqrt(4 * max_norm // 3) + 1
    t = np.arange(-((bmax + b0) // step) - 1, (bmax - b0) // step + 2, dtype=np.int64)
    b = b0 + step * t
    b = b[3 * b * b <= 4 * max_norm]
    lo_o, hi_o = _row_bounds(b, max_norm)
    if min_norm <= 0:
        aa, bb = _expand(b, lo_o, hi_o, a0, step)
    else:
        lo_i, hi_i = _row_bounds(b, min_norm)
        inner = lo_i <= hi_i
        left_hi = np.where(inner, lo_i - 1, hi_o)
        right_lo = np.where(inner, hi_i + 1, hi_o + 1)
        a1, b1 = _expand(b, lo_o, left_hi, a0, step)
        a2, b2 = _expand(b, right_lo, hi_o, a0, step)
        aa, bb = np.concatenate([a1, a2]), np.concatenate([b1, b2])
    n = norm_array(aa, bb)
    return aa, bb, n


def lattice_points(max_norm: int, a0: int, b0: int, step: int, min_norm: int = 0):
    """Sorted (by norm, a, b) points of the coset (a0, b0) + step*Z^2 in a norm shell."""
    a, b, n = _lattice_ellipse(max_norm, a0, b0, step, min_norm)
    order = np.lexsort((b, a, n))
    return a[order], b[order], n[order]


def moduli_arrays(max_norm: int, min_norm: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arrays (a, b, norm) of the modulus family in min_norm < N <= max_norm."""
    a, b, n = lattice_points(max_norm, 1, 0, 9, min_norm)
    keep = ~((a == 1) & (b == 0))
    a, b, n = a[keep], b[keep], n[keep]
    keep = squarefree_mask(a, b)
    return a[keep], b[keep], n[keep]


@dataclass(frozen=True)
class PrimeTable:
    """Unramified prime ideals as arrays, sorted by norm then image of w.

    root is the image r of w in the residue field F_p for split primes (so
    that pi | w - r), and -1 for inert primes.
    """

    norm: np.ndarray
    p: np.ndarray
    root: np.ndarray

    def __len__(self) -> int:
        return int(self.norm.size)

    @property
    def split(self) -> np.ndarray:
        return self.root >= 0


def powmod_array(base: np.ndarray, exp: np.ndarray | int, mod: np.ndarray | int) -> np.ndarray:
    """Elementwise base^exp mod mod in int64 (mod < 2^31.5)."""
    base = np.asarray(base, dtype=np.int64)
    mod = np.asarray(mod, dtype=np.int64)
    if mod.size and int(mod.max()) > INT64_SAFE:
        raise OverflowError("modulus too large for int64 powmod")
    exp = np.asarray(exp, dtype=np.int64)
    shape = np.broadcast_shapes(base.shape, exp.shape, mod.shape)
    result = np.ones(shape, dtype=np.int64) % mod
    b = np.broadcast_to(base % mod, shape).copy()
    e = np.broadcast_to(exp, shape).copy()
    while True:
        odd = (e & 1).astype(bool)
        if odd.any():
            result = np.where(odd, (result * b) % mod, result)
        e >>= 1
        if not e.any():
            break
        b = (b * b) % mod
    return result


def cube_roots_of_unity_mod(ps: np.ndarray) -> np.ndarray:
    """Vectorized cube_root_of_unity_mod for primes = 1 mod 3."""
    ps = np.asarray(ps, dtype=np.int64)
    out = np.ones(ps.shape, dtype=np.int64)
    todo = np.ones(ps.shape, dtype=bool)
    g = 2
    while todo.any():
        r = powmod_array(np.full(int(todo.sum()), g), (ps[todo] - 1) // 3, ps[todo])
        idx = np.flatnonzero(todo)
        hit = r != 1
        out[idx[hit]] = r[hit]
        todo[idx[hit]] = False
        g += 1
    return out


@lru_cache(maxsize=8)
def prime_table(max_norm: int) -> PrimeTable:
    ps = rational_primes(max_norm)
    sp = ps[ps % 3 == 1]
    r1 = cube_roots_of_unity_mod(sp)
    r2 = (-1 - r1) % sp
    inert = ps[(ps % 3 == 2) & (ps * ps <= max_norm)]
    norm_ = np.concatenate([sp, sp, inert * inert])
    p = np.concatenate([sp, sp, inert])
    root = np.concatenate([np.minimum(r1, r2), np.maximum(r1, r2), -np.ones_like(inert)])
    order = np.lexsort((root, norm_))
    t = PrimeTable(norm_[order], p[order], root[order])
    for arr in (t.norm, t.p, t.root):
        arr.setflags(write=False)
    return t


def prime_ideal_norms(max_norm: int) -> np.ndarray:
    """Norms of the unramified prime ideals, ascending."""
    return prime_table(max_norm).norm


def table_generator(p: int, root: int) -> EisensteinInt:
    """Primary generator of the prime (p, w - root), or of the inert prime p."""
    if root < 0:
        return EisensteinInt(-p, 0)
    for g in split_prime_pair(p):
        if (g.a + g.b * root) % p == 0:
            return g
    raise AssertionError("root does not match either prime")  # pragma: no cover


def residue_root(rec: PrimeIdealRec) -> int:
    """Image of w in O/pi = F_p for a split prime."""
    if rec.splitting is not Splitting.SPLIT:
        raise ValueError("residue_root needs a split prime")
    g, p = rec.generator, rec.norm
    return (-g.a * pow(g.b, -1, p)) % p
