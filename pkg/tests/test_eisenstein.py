from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicdist.eisenstein import (
    RAMIFIED,
    UNITS,
    EisensteinInt,
    ModulusC,
    Splitting,
    decompose,
    enumerate_C,
    enumerate_primes,
    factor,
    factorization_unit,
    gcd,
    is_squarefree,
    lattice_points,
    moduli_arrays,
    norm,
    primary_associate,
    prime_table,
    rational_primes,
    squarefree_mask,
)

coord = st.integers(-1000, 1000)
elements = st.builds(EisensteinInt, coord, coord)
nonzero = elements.filter(bool)


def test_norm_examples():
    assert norm(EisensteinInt(0, 0)) == 0
    assert norm(EisensteinInt(1, 3)) == 7
    assert norm(EisensteinInt(1, 9)) == 73


@given(elements, elements)
def test_norm_multiplicative(x, y):
    assert norm(x * y) == norm(x) * norm(y)


@given(elements)
def test_conjugation_preserves_norm(x):
    assert x.conj() == EisensteinInt(x.a - x.b, -x.b)
    assert x.conj().norm() == x.norm()
    assert (x * x.conj()) == EisensteinInt(x.norm(), 0)


def test_units_are_the_norm_one_elements():
    found = {EisensteinInt(a, b) for a in range(-2, 3) for b in range(-2, 3) if norm(EisensteinInt(a, b)) == 1}
    assert found == set(UNITS)


def test_complex_embedding():
    w = complex(EisensteinInt(0, 1))
    assert abs(w - np.exp(2j * np.pi / 3)) < 1e-15


@given(elements, nonzero)
def test_division_with_remainder(x, y):
    q, r = divmod(x, y)
    assert q * y + r == x
    assert r.norm() < y.norm()


@given(nonzero, nonzero)
def test_gcd_divides_both(x, y):
    g = gcd(x, y)
    assert g.divides(x) and g.divides(y)


def test_primary_associate_examples():
    assert primary_associate(EisensteinInt(1, 0)) == (EisensteinInt(1, 0), EisensteinInt(1, 0))
    assert primary_associate(EisensteinInt(0, 1)) == (EisensteinInt(0, 1), EisensteinInt(1, 0))
    # 2 + w has norm 3, so it is a unit times 1 - w and the power of 1 - w comes out first
    x = EisensteinInt(2, 1)
    u, r, p = decompose(x)
    assert (r, p) == (1, EisensteinInt(1, 0)) and u * RAMIFIED == x
    assert primary_associate(x) == (u, p)
    assert not any((v * x).is_primary() for v in UNITS)
    # for an element prime to 3 exactly one unit multiple is = 1 mod 3
    y = EisensteinInt(2, 3)
    u, p = primary_associate(y)
    assert u * p == y and p.is_primary()
    assert [v * y for v in UNITS if (v * y).is_primary()] == [p]


def test_primary_associate_rejects_zero():
    with pytest.raises(ValueError):
        primary_associate(EisensteinInt(0, 0))


@given(nonzero.filter(lambda x: (x.a + x.b) % 3 != 0))
def test_primary_associate_property(x):
    u, p = primary_associate(x)
    assert u.is_unit() and p.is_primary() and u * p == x


def test_enumerate_primes_small():
    assert [(p.norm, p.splitting) for p in enumerate_primes(3)] == [(3, Splitting.RAMIFIED)]
    assert sorted(p.norm for p in enumerate_primes(7)) == [3, 4, 7, 7]


def _brute_prime_count(bound: int) -> int:
    # an element of prime norm is prime; an inert prime p has norm p^2 and
    # divides no element of smaller norm, so count associate classes directly
    seen = set()
    r = int(bound**0.5) + 2
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            x = EisensteinInt(a, b)
            n = x.norm()
            if n < 2 or n > bound:
                continue
            if all(not (y.norm() not in (1, n) and y.divides(x)) for y in _small_elements(n)):
                seen.add(min((u * x).a * 10**6 + (u * x).b for u in UNITS))
    return len(seen)


def _small_elements(n: int):
    r = int(n**0.5) + 1
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            y = EisensteinInt(a, b)
            if 1 < y.norm() < n:
                yield y


def test_enumerate_primes_matches_brute_force():
    assert len(enumerate_primes(200)) == _brute_prime_count(200)


def test_prime_census_to_10k():
    recs = enumerate_primes(10_000)
    by_p: dict[int, list] = {}
    for r in recs:
        by_p.setdefault(r.p, []).append(r)
    for p in rational_primes(10_000).tolist():
        got = by_p.get(p, [])
        if p == 3:
            assert [r.splitting for r in got] == [Splitting.RAMIFIED]
        elif p % 3 == 1:
            assert len(got) == 2 and all(r.norm == p for r in got)
            assert got[0].generator == got[1].generator.conj()
        elif p * p <= 10_000:
            assert len(got) == 1 and got[0].norm == p * p
    assert recs == sorted(recs, key=lambda r: r.sort_key())


def test_prime_generators_are_primary_and_irreducible():
    for rec in enumerate_primes(2000):
        if rec.splitting is not Splitting.RAMIFIED:
            assert rec.generator.is_primary()
        assert factor(rec.generator) == [(rec, 1)]


def test_factor_examples():
    assert factor(EisensteinInt(1, 0)) == []
    f = factor(EisensteinInt(10, 0))
    assert [(r.norm, r.splitting, m) for r, m in f] == [(4, Splitting.INERT, 1), (25, Splitting.INERT, 1)]
    assert [(r.generator, m) for r, m in factor(EisensteinInt(9, 0))] == [(RAMIFIED, 4)]
    with pytest.raises(ValueError):
        factor(EisensteinInt(0, 0))


@settings(max_examples=200)
@given(nonzero)
def test_factor_reconstructs(x):
    fs = factor(x)
    prod = EisensteinInt(1, 0)
    for rec, m in fs:
        prod = prod * rec.generator**m
    u = factorization_unit(x, fs)
    assert u.is_unit() and u * prod == x


def test_is_squarefree_examples():
    assert is_squarefree(EisensteinInt(1, 0))
    assert not is_squarefree(EisensteinInt(-8, 0))
    assert is_squarefree(EisensteinInt(10, 0))
    with pytest.raises(ValueError):
        is_squarefree(EisensteinInt(0, 0))


@settings(max_examples=300)
@given(nonzero)
def test_vectorised_squarefree_matches_factorisation(x):
    fast = bool(squarefree_mask(np.array([x.a]), np.array([x.b]))[0])
    assert fast == is_squarefree(x)


def test_enumerate_C_examples():
    assert enumerate_C(72) == []
    got = {(c.value.a, c.value.b) for c in enumerate_C(73)}
    assert got == {(1, 9), (-8, -9)}
    assert all(c.value != EisensteinInt(-8, 0) for c in enumerate_C(100))


def test_enumerate_C_brute_force():
    bound = 3000
    brute = []
    for s, t in itertools.product(range(-10, 11), repeat=2):
        x = EisensteinInt(1 + 9 * s, 9 * t)
        if x != EisensteinInt(1, 0) and x.norm() <= bound and is_squarefree(x):
            brute.append((x.norm(), x.a, x.b))
    got = [(c.norm, c.value.a, c.value.b) for c in enumerate_C(bound)]
    assert sorted(got) == sorted(brute)
    assert [g[0] for g in got] == sorted(g[0] for g in got)
    assert len(set(got)) == len(got)
    assert enumerate_C(bound) == enumerate_C(bound)


def test_modulus_invariants():
    ModulusC.checked(EisensteinInt(1, 9))
    for bad in (EisensteinInt(1, 0), EisensteinInt(2, 9), EisensteinInt(-8, 0)):
        with pytest.raises(ValueError):
            ModulusC.checked(bad)
    with pytest.raises(ValueError):
        ModulusC(EisensteinInt(1, 9), 74)


def test_lattice_annulus_matches_brute_force():
    a, b, n = lattice_points(500, 1, 0, 3, min_norm=100)
    got = set(zip(a.tolist(), b.tolist()))
    brute = {(1 + 3 * s, 3 * t) for s in range(-20, 21) for t in range(-20, 21)
             if 100 < norm(EisensteinInt(1 + 3 * s, 3 * t)) <= 500}
    assert got == brute


def test_moduli_arrays_counts_split_by_annuli():
    a1, _, _ = moduli_arrays(20_000)
    a2, _, _ = moduli_arrays(40_000, 20_000)
    a3, _, _ = moduli_arrays(40_000)
    assert a1.size + a2.size == a3.size


def test_prime_table_roots():
    t = prime_table(1000)
    sp = t.split
    assert np.all((t.root[sp] ** 2 + t.root[sp] + 1) % t.p[sp] == 0)
    assert np.all(t.norm[~sp] == t.p[~sp] ** 2)
    assert np.all(np.diff(t.norm) >= 0)


def test_parse_and_str():
    assert EisensteinInt.parse("2,-3") == EisensteinInt(2, -3)
    with pytest.raises(ValueError):
        EisensteinInt.parse("2")
