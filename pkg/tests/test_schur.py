import random

import numpy as np
import pytest

from drgcayley import cayley as C
from drgcayley import groups as G
from drgcayley import schur as SR


def lattice_module():
    d = G.pair_group(3, 1)
    subs = G.subgroups_of_order(d, 3)
    g = C.build(d, C.SymmetricSet(d, (subs[0].mask | subs[1].mask) ^ 1))
    part = C.distance_partition(g)
    return d, g, SR.distance_module(g, part)


def test_convolution_hand_example():
    """underline(H \\ 0)^2 = 2*underline(0) + underline(H \\ 0) for |H| = 3."""
    d = G.pair_group(3, 1)
    h = G.subgroups_of_order(d, 3)[0]
    cs = SR.ClassSum.of_subset(d, h.mask ^ 1)
    sq = SR.convolve(cs, cs)
    expect = [0] * 9
    expect[0] = 2
    for g in G.iter_bits(h.mask ^ 1):
        expect[g] = 1
    assert sq.coeffs == tuple(expect)


def test_convolution_identity_and_total():
    d = G.pair_group(3, 1)
    ident = SR.ClassSum.of_subset(d, 1)
    rng = random.Random(4)
    vec = tuple(rng.randint(-3, 3) for _ in range(9))
    x = SR.ClassSum(d, vec)
    assert SR.convolve(ident, x).coeffs == vec
    total = SR.ClassSum.of_subset(d, (1 << 9) - 1)
    assert SR.convolve(total, total).coeffs == (9,) * 9


def test_convolution_commutative_on_abelian():
    d = G.pair_group(3, 2)
    rng = random.Random(8)
    for _ in range(10):
        x = SR.ClassSum(d, tuple(rng.randint(0, 3) for _ in range(27)))
        y = SR.ClassSum(d, tuple(rng.randint(0, 3) for _ in range(27)))
        assert SR.convolve(x, y).coeffs == SR.convolve(y, x).coeffs


def test_distance_module_cells():
    d = G.pair_group(3, 1)
    complete = C.build(d, C.SymmetricSet(d, ((1 << 9) - 1) ^ 1))
    dm = SR.distance_module(complete, C.distance_partition(complete))
    assert dm.cell_sizes() == (1, 8)
    _, _, lat = lattice_module()
    assert lat.cell_sizes() == (1, 4, 4)
    h = G.subgroups_of_order(d, 3)[0]
    km = C.build(d, C.SymmetricSet(d, ((1 << 9) - 1) ^ h.mask))
    assert SR.distance_module(km, C.distance_partition(km)).cell_sizes() == (1, 6, 2)


def test_lattice_module_is_schur_ring_with_lambda_constant():
    _, _, dm = lattice_module()
    constants = SR.is_schur_ring(dm)
    assert constants is not None
    assert constants[1, 1, 1] == 1  # the common-neighbor count of an edge
    SR.structure_constants_sanity(dm, constants)


def test_structure_constants_counting_identity():
    d, g, dm = lattice_module()
    constants = SR.is_schur_ring(dm)
    sizes = dm.cell_sizes()
    r = dm.cell_count
    for i in range(r):
        for j in range(r):
            assert sum(
                int(constants[i, j, k]) * sizes[k] for k in range(r)
            ) == sizes[i] * sizes[j]
    assert np.array_equal(constants, constants.transpose(1, 0, 2))


def test_trivial_basis():
    d = G.pair_group(3, 2)
    triv = SR.CellPartition(d, (1, ((1 << 27) - 1) ^ 1))
    assert SR.is_schur_ring(triv) is not None
    assert SR.is_trivial(triv) and SR.is_primitive(triv)


def test_singleton_cells_fail():
    d = G.pair_group(3, 1)
    cells = (1, 1 << d.rank(1, 0), ((1 << 9) - 1) ^ 1 ^ (1 << d.rank(1, 0)))
    assert SR.is_schur_ring(SR.CellPartition(d, cells)) is None


def test_partition_validation():
    d = G.pair_group(3, 1)
    with pytest.raises(ValueError):
        SR.CellPartition(d, (1, 3))  # overlapping / not covering
    with pytest.raises(ValueError):
        SR.CellPartition(d, (2, ((1 << 9) - 1) ^ 2))  # cell 0 not the identity


def test_primitivity_of_modules():
    d = G.pair_group(3, 1)
    h = G.subgroups_of_order(d, 3)[0]
    km = C.build(d, C.SymmetricSet(d, ((1 << 9) - 1) ^ h.mask))
    dm = SR.distance_module(km, C.distance_partition(km))
    assert SR.is_schur_ring(dm) is not None
    assert not SR.is_primitive(dm)  # the distance-2 cell is H minus identity
    _, _, lat = lattice_module()
    assert SR.is_primitive(lat)


def test_power_map():
    _, _, dm = lattice_module()
    assert SR.power_map(dm, 1) == (0, 1, 2)
    assert SR.power_map(dm, 8) == (0, 1, 2)  # negation fixes symmetric cells
    assert SR.power_map(dm, 2) == (0, 1, 2)  # unit scaling fixes subgroup unions
    with pytest.raises(ValueError):
        SR.power_map(dm, 3)  # not coprime
    d = G.pair_group(3, 1)
    bad = SR.CellPartition(
        d, (1, 1 << d.rank(1, 0), ((1 << 9) - 1) ^ 1 ^ (1 << d.rank(1, 0)))
    )
    with pytest.raises(ValueError):
        SR.power_map(bad, 2)


def test_power_map_permutes_cells_of_any_verified_basis():
    # the full atom-partition basis of Z_9 is a Schur ring; m=2 permutes cells
    z9 = G.cyclic_group(9)
    cells = tuple(sum(1 << g for g in c) for c in G.atom_partition(z9))
    basis = SR.CellPartition(z9, cells)
    assert SR.is_schur_ring(basis) is not None
    perm = SR.power_map(basis, 2)
    assert sorted(perm) == list(range(len(cells)))
