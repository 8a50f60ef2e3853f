"""Group-algebra layer: class sums, distance modules, Schur-ring checks.

Cell partitions are verified against the three Schur-ring conditions by
convolving 0/1 class sums and testing that every product is constant on
every cell.  All arithmetic is 64-bit integer; coefficients stay below
|G|^2 for everything in scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .cayley import CayleyGraph, DistancePartition, iter_bits, mask_of
from .groups import GroupDescriptor, closure_mask, group_tables


@dataclass(frozen=True)
class ClassSum:
    """An element of the integral group algebra as a coefficient vector."""

    group: GroupDescriptor
    coeffs: tuple[int, ...]

    @classmethod
    def of_subset(cls, group: GroupDescriptor, mask: int) -> "ClassSum":
        vec = [0] * group.order
        for g in iter_bits(mask):
            vec[g] = 1
        return cls(group, tuple(vec))

    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)


def convolve(x: ClassSum, y: ClassSum) -> ClassSum:
    """Group-algebra product: coefficient of g is sum_h x(h) * y(g - h)."""
    if x.group != y.group:
        raise ValueError("class sums over different groups")
    sub = group_tables(x.group).sub
    xv = x.vector()
    yv = y.vector()
    prod = yv[sub] @ xv  # (y[g-h])_{g,h} . x
    return ClassSum(x.group, tuple(int(v) for v in prod))


@dataclass(frozen=True)
class CellPartition:
    """A candidate simple basis: disjoint cells covering G, cell 0 = {id}."""

    group: GroupDescriptor
    cells: tuple[int, ...]  # bitmasks

    def __post_init__(self) -> None:
        total = 0
        for c in self.cells:
            if total & c:
                raise ValueError("cells are not disjoint")
            total |= c
        if total != (1 << self.group.order) - 1:
            raise ValueError("cells do not cover the group")
        if self.cells[0] != 1:
            raise ValueError("cell 0 must be the identity singleton")

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    def cell_sizes(self) -> tuple[int, ...]:
        return tuple(c.bit_count() for c in self.cells)


def distance_module(graph: CayleyGraph, partition: DistancePartition) -> CellPartition:
    """Cells = BFS distance layers of the (connected) graph."""
    return CellPartition(graph.group, tuple(partition.layer_masks))


def is_schur_ring(basis: CellPartition) -> np.ndarray | None:
    """Structure constants p[i][j][k] when the partition spans a Schur ring.

    Checks inverse-closure of the cell list, then decomposes every pairwise
    product of cell sums over the cells by verifying the convolution output
    is constant on each cell.  Returns None the moment either fails.
    """
    desc = basis.group
    n = desc.order
    tabs = group_tables(desc)
    neg = tabs.neg
    cells = basis.cells
    r = len(cells)
    # inverse closure: -T_i must be a cell for every i
    cellset = set(cells)
    for c in cells:
        neg_mask = 0
        for g in iter_bits(c):
            neg_mask |= 1 << int(neg[g])
        if neg_mask not in cellset:
            return None
    ind = np.zeros((r, n), dtype=np.int64)
    cell_idx: list[np.ndarray] = []
    for i, c in enumerate(cells):
        members = np.fromiter(iter_bits(c), dtype=np.int64)
        ind[i, members] = 1
        cell_idx.append(members)
    sub = tabs.sub
    constants = np.zeros((r, r, r), dtype=np.int64)
    for j in range(r):
        gathered = ind[j][sub]  # (n, n): row g is T_j shifted for convolution
        prods = ind @ gathered.T  # (r, n): conv(T_i, T_j) for all i
        for k in range(r):
            vals = prods[:, cell_idx[k]]
            first = vals[:, 0]
            if not (vals == first[:, None]).all():
                return None
            constants[:, j, k] = first
    return constants


def is_trivial(basis: CellPartition) -> bool:
    return basis.cell_count == 2


def is_primitive(basis: CellPartition) -> bool:
    """True when every non-identity cell generates the whole group."""
    full = (1 << basis.group.order) - 1
    return all(
        closure_mask(basis.group, c) == full for c in basis.cells[1:]
    )


def power_map(basis: CellPartition, m: int) -> tuple[int, ...]:
    """The cell permutation induced by g -> m*g, for gcd(m, |G|) = 1.

    On a verified Schur basis over an abelian group the image of every cell
    is again a cell; a non-cell image means the input was not a verified
    basis and is raised as such.
    """
    desc = basis.group
    if gcd(m, desc.order) != 1:
        raise ValueError(f"{m} is not coprime to the group order {desc.order}")
    index_of = {c: i for i, c in enumerate(basis.cells)}
    perm = []
    for c in basis.cells:
        image = mask_of(desc.scale(m, g) for g in iter_bits(c))
        if image not in index_of:
            raise ValueError(
                f"image of a cell under g -> {m}g is not a cell; "
                "input is not a verified Schur basis"
            )
        perm.append(index_of[image])
    return tuple(perm)


def structure_constants_sanity(basis: CellPartition, constants: np.ndarray) -> None:
    """Symmetry and counting identities every verified basis must satisfy."""
    r = basis.cell_count
    sizes = basis.cell_sizes()
    if not np.array_equal(constants, constants.transpose(1, 0, 2)):
        raise AssertionError("structure constants are not symmetric in i, j")
    for i in range(r):
        for j in range(r):
            total = int(sum(constants[i, j, k] * sizes[k] for k in range(r)))
            if total != sizes[i] * sizes[j]:
                raise AssertionError(
                    f"sum_k p[{i}][{j}][k] |T_k| != |T_{i}| |T_{j}|"
                )
