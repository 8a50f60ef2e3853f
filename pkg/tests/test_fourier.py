import cmath
import itertools
import random
from math import gcd

import pytest

from drgcayley import cayley as C
from drgcayley import drg as D
from drgcayley import fourier as F
from drgcayley import groups as G


def numeric_value(x: F.CyclotomicInteger) -> complex:
    """Independent check route: evaluate at w = exp(2 pi i / p^s)."""
    n = x.modulus
    w = cmath.exp(2j * cmath.pi / n)
    return sum(c * w**e for e, c in enumerate(x.coeffs))


def random_cyclotomic(rng, p, s):
    n = p**s
    return F.CyclotomicInteger.from_coeffs(
        p, s, [rng.randint(-4, 4) for _ in range(n)]
    )


@pytest.mark.parametrize("p,s", [(3, 1), (3, 2), (3, 3), (5, 1)])
def test_ring_axioms_and_numeric_agreement(p, s):
    rng = random.Random(100 * p + s)
    for _ in range(40):
        x = random_cyclotomic(rng, p, s)
        y = random_cyclotomic(rng, p, s)
        z = random_cyclotomic(rng, p, s)
        assert (x + y).coeffs == (y + x).coeffs
        assert (x * y).coeffs == (y * x).coeffs
        assert ((x * y) * z).coeffs == (x * (y * z)).coeffs
        assert (x * (y + z)).coeffs == (x * y + x * z).coeffs
        # canonical form idempotence
        assert F.CyclotomicInteger.from_coeffs(p, s, x.coeffs).coeffs == x.coeffs
        # numeric cross-check of the product
        assert cmath.isclose(
            numeric_value(x * y),
            numeric_value(x) * numeric_value(y),
            rel_tol=1e-9,
            abs_tol=1e-7,
        )


def test_canonical_form_top_block_is_zero():
    rng = random.Random(9)
    p, s = 3, 2
    m = p ** (s - 1)
    for _ in range(50):
        x = random_cyclotomic(rng, p, s)
        for j in range(m):
            assert x.coeffs[j + (p - 1) * m] == 0


def test_root_power_multiplication():
    p, s = 3, 2
    n = 9
    for a, b in itertools.product(range(n), repeat=2):
        lhs = F.CyclotomicInteger.root_power(p, s, a) * F.CyclotomicInteger.root_power(p, s, b)
        assert lhs == F.CyclotomicInteger.root_power(p, s, (a + b) % n)


def test_cyclotomic_relation_reduces_to_zero():
    # 1 + w^{p^{s-1}} + ... + w^{(p-1) p^{s-1}} = 0
    for p, s in ((3, 1), (3, 2), (3, 3), (5, 2)):
        m = p ** (s - 1)
        acc = F.CyclotomicInteger.zero(p, s)
        for i in range(p):
            acc = acc + F.CyclotomicInteger.root_power(p, s, i * m)
        assert acc.is_zero()


def test_hand_reduction_p3_s1():
    one_w = F.CyclotomicInteger.from_coeffs(3, 1, [1, 1, 0])
    one_w2 = F.CyclotomicInteger.from_coeffs(3, 1, [1, 0, 1])
    assert (one_w * one_w2) == F.CyclotomicInteger.integer(3, 1, 1)


def test_transform_examples():
    ctx = F.FourierContext(3, 2)
    t = ctx.transform_subset({0})
    assert all(v == F.CyclotomicInteger.integer(3, 2, 1) for v in t.values)
    t = ctx.transform_subset(range(9))
    assert t.value_at(0) == F.CyclotomicInteger.integer(3, 2, 9)
    assert all(t.value_at(z).is_zero() for z in range(1, 9))
    t = ctx.transform_subset({0, 1, 2})
    assert t.value_at(3).is_zero()  # 1 + w^3 + w^6
    assert t.value_at(0) == F.CyclotomicInteger.integer(3, 2, 3)


def test_transform_additive_on_disjoint_subsets():
    ctx = F.FourierContext(3, 2)
    rng = random.Random(12)
    for _ in range(20):
        a = {x for x in range(9) if rng.random() < 0.4}
        b = {x for x in range(9) if rng.random() < 0.4} - a
        ta, tb = ctx.transform_subset(a), ctx.transform_subset(b)
        tu = ctx.transform_subset(a | b)
        for z in range(9):
            assert tu.value_at(z) == ta.value_at(z) + tb.value_at(z)


def test_parseval_count():
    # sum_z F(D_A)(z) F(D_-A)(z) = n |A|
    for p, s in ((3, 2), (5, 1), (3, 3)):
        ctx = F.FourierContext(p, s)
        n = ctx.n
        rng = random.Random(n)
        for _ in range(10):
            a = {x for x in range(n) if rng.random() < 0.5}
            ta = ctx.transform_subset(a)
            tneg = ctx.transform_subset({(-x) % n for x in a})
            acc = F.CyclotomicInteger.zero(p, s)
            for z in range(n):
                acc = acc + ta.value_at(z) * tneg.value_at(z)
            assert acc == F.CyclotomicInteger.integer(p, s, n * len(a))


def test_convolution_check_cases():
    assert F.convolution_check(3, 2, {0}, {0}).ok
    assert F.convolution_check(3, 2, set(range(9)), {2, 5}).ok
    rng = random.Random(6)
    for _ in range(25):
        a = {x for x in range(9) if rng.random() < 0.5}
        b = {x for x in range(9) if rng.random() < 0.5}
        assert F.convolution_check(3, 2, a, b).ok


def test_inversion_check_cases():
    f = [0] * 9
    f[0] = 1
    assert F.inversion_check(3, 2, f).ok
    f = [0] * 9
    f[1] = 1
    ctx = F.FourierContext(3, 2)
    double = ctx.transform_table(ctx.transform_function(f))
    assert double.value_at(8) == F.CyclotomicInteger.integer(3, 2, 9)
    assert all(double.value_at(z).is_zero() for z in range(8))
    rng = random.Random(3)
    for _ in range(10):
        f = [rng.randint(-5, 5) for _ in range(27)]
        assert F.inversion_check(3, 3, f).ok


def test_transversal_zeros_examples():
    assert F.transversal_zeros(3, 2, {0, 1, 2}, 3)
    assert F.transversal_zeros(3, 2, {0, 4, 8}, 3)
    assert F.transversal_zeros(3, 1, {0, 1, 2}, 3)
    with pytest.raises(ValueError):
        F.transversal_zeros(3, 2, {0, 3, 6}, 3)  # not a transversal


def all_transversals(n, h_members):
    cosets = {}
    for g in range(n):
        key = min((g + h) % n for h in h_members)
        cosets.setdefault(key, []).append(g)
    return [set(combo) for combo in itertools.product(*cosets.values())]


def test_transversal_zeros_exhaustive_z9():
    for a in all_transversals(9, (0, 3, 6)):
        assert F.transversal_zeros(3, 2, a, 3)


def test_union_of_orbit_transversals_collapse():
    """Union-of-orbits transversals of p^{s-1} Z_{p^s} must equal p Z_{p^s}.

    For s >= 2 no such transversal exists at all; for s = 1 the only one is
    {0} = p Z_p.  Both facts are enumerated exhaustively here.
    """
    for p, s in ((3, 1), (3, 2), (3, 3), (5, 1), (5, 2)):
        n = p**s
        h = [(x * p ** (s - 1)) % n for x in range(p)]
        p_zn = {x for x in range(n) if x % p == 0}
        found = []
        for a in all_transversals(n, h):
            orbit_closed = all(
                set(F.unit_orbit(n, n // gcd(x, n))) <= a for x in a
            )
            if orbit_closed:
                found.append(a)
        for a in found:
            assert a == p_zn
        if s >= 2:
            assert found == []
        else:
            assert found == [{0}]


def test_rational_image_orbits():
    assert F.rational_image_orbits(3, 2, {3, 6}) == ((3, (3, 6)),)
    assert F.rational_image_orbits(3, 2, {1}) is None
    assert F.rational_image_orbits(3, 2, set(range(1, 9))) == (
        (3, (3, 6)),
        (9, (1, 2, 4, 5, 7, 8)),
    )


def test_fourier_audit_on_verified_graphs():
    d3 = G.pair_group(3, 1)
    subs3 = G.subgroups_of_order(d3, 3)
    for mask in (
        (subs3[0].mask | subs3[1].mask) ^ 1,  # lattice
        ((1 << 9) - 1) ^ subs3[0].mask,  # K_{3x3}
    ):
        g = C.build(d3, C.SymmetricSet(d3, mask))
        part = C.distance_partition(g)
        arr = D.check_drg(g, part)
        assert F.fourier_audit(g, arr, part).ok

    d5 = G.pair_group(5, 1)
    subs5 = G.subgroups_of_order(d5, 5)
    mask = (subs5[0].mask | subs5[1].mask | subs5[2].mask) ^ 1
    g = C.build(d5, C.SymmetricSet(d5, mask))
    part = C.distance_partition(g)
    arr = D.check_drg(g, part)
    assert F.fourier_audit(g, arr, part).ok


def test_fourier_audit_preconditions():
    d3 = G.pair_group(3, 1)
    complete = C.build(d3, C.SymmetricSet(d3, ((1 << 9) - 1) ^ 1))
    part = C.distance_partition(complete)
    arr = D.check_drg(complete, part)
    with pytest.raises(ValueError):
        F.fourier_audit(complete, arr, part)  # diameter 1
