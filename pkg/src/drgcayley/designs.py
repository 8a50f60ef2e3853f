"""Transversal designs, their line graphs, and difference-set machinery.

Covers the partial-congruence-partition route to TD(r, v), the explicit
line-graph isomorphism onto Cay(G, union of subgroups minus identity), an
exhaustive translation-canonical difference-set search, and the bipartite
double-layer construction over Z_n + Z_2 driven by difference sets in its
even-index subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .cayley import (
    CayleyGraph,
    PlainGraph,
    SymmetricSet,
    build,
    distance_partition,
    is_connected,
    iter_bits,
    mask_of,
)
from .drg import IntersectionArray, SrgParams, check_drg
from .groups import (
    GroupDescriptor,
    Subgroup,
    automorphism_group,
    group_tables,
    product_group,
    subgroups_of_order,
)
from .structure import is_antipodal, is_bipartite


class SearchBudgetError(RuntimeError):
    """Candidate count exceeds the configured enumeration budget."""


# -- partial congruence partitions and transversal designs ------------------


@dataclass(frozen=True)
class PartialCongruencePartition:
    group: GroupDescriptor
    subgroups: tuple[Subgroup, ...]

    @property
    def degree(self) -> int:
        return len(self.subgroups)


def pcp_enumerate(desc: GroupDescriptor, r: int) -> list[PartialCongruencePartition]:
    """All r-sets of order-v subgroups meeting pairwise in the identity."""
    order = desc.order
    v = 1
    while v * v < order:
        v += 1
    if v * v != order:
        raise ValueError(f"group order {order} is not a perfect square")
    subs = subgroups_of_order(desc, v)
    out = []
    for combo in itertools.combinations(subs, r):
        if all(
            (a.mask & b.mask) == 1
            for a, b in itertools.combinations(combo, 2)
        ):
            out.append(PartialCongruencePartition(desc, combo))
    return out


@dataclass(frozen=True)
class TransversalDesign:
    v: int
    r: int
    points: tuple[tuple[int, int], ...]  # (class index, coset index)
    classes: tuple[tuple[int, ...], ...]  # point ids per class
    lines: tuple[tuple[int, ...], ...]  # point ids per line, indexed by g

    def to_json_obj(self) -> dict:
        return {
            "v": self.v,
            "r": self.r,
            "points": [list(pt) for pt in self.points],
            "classes": [list(cls) for cls in self.classes],
            "lines": [list(line) for line in self.lines],
        }

    def validate(self) -> None:
        if len(self.points) != self.r * self.v:
            raise AssertionError("wrong point count")
        if len(self.lines) != self.v * self.v:
            raise AssertionError("wrong line count")
        class_of = {}
        for ci, cls in enumerate(self.classes):
            for pt in cls:
                class_of[pt] = ci
        for line in self.lines:
            if len(line) != self.r:
                raise AssertionError("line of wrong size")
            if len({class_of[pt] for pt in line}) != self.r:
                raise AssertionError("line meets some class twice")
        # two points in distinct classes lie on exactly one common line,
        # two points in the same class on none
        npts = len(self.points)
        common = [[0] * npts for _ in range(npts)]
        for line in self.lines:
            for a, b in itertools.combinations(line, 2):
                common[a][b] += 1
                common[b][a] += 1
        for a in range(npts):
            for b in range(a + 1, npts):
                expected = 0 if class_of[a] == class_of[b] else 1
                if common[a][b] != expected:
                    raise AssertionError(
                        f"points {a},{b} lie on {common[a][b]} common lines"
                    )


def td_from_pcp(pcp: PartialCongruencePartition) -> TransversalDesign:
    """Points = cosets gH, classes = cosets of each H, lines = {gH : H}.

    Coset indices are ordered by minimal member rank so designs serialize
    reproducibly.  Degenerate r = v + 1 input is rejected.
    """
    desc = pcp.group
    order = desc.order
    v = 1
    while v * v < order:
        v += 1
    r = pcp.degree
    if not 2 <= r <= v:
        raise ValueError(f"need 2 <= r <= v = {v}, got r = {r}")
    add = group_tables(desc).add
    point_id: dict[tuple[int, int], int] = {}
    points: list[tuple[int, int]] = []
    classes: list[tuple[int, ...]] = []
    coset_key: list[dict[int, int]] = []
    for ci, sub in enumerate(pcp.subgroups):
        reps: dict[int, int] = {}
        mins = []
        for g in desc.elements():
            key = min(int(add[g, h]) for h in iter_bits(sub.mask))
            if key not in reps:
                reps[key] = -1
                mins.append(key)
        mins.sort()
        cls_ids = []
        lookup: dict[int, int] = {}
        for idx, key in enumerate(mins):
            pid = len(points)
            points.append((ci, idx))
            point_id[(ci, idx)] = pid
            lookup[key] = idx
            cls_ids.append(pid)
        classes.append(tuple(cls_ids))
        coset_key.append(lookup)
    lines = []
    for g in desc.elements():
        line = []
        for ci, sub in enumerate(pcp.subgroups):
            key = min(int(add[g, h]) for h in iter_bits(sub.mask))
            line.append(point_id[(ci, coset_key[ci][key])])
        lines.append(tuple(sorted(line)))
    td = TransversalDesign(
        v=v, r=r, points=tuple(points), classes=tuple(classes), lines=tuple(lines)
    )
    td.validate()
    return td


@dataclass(frozen=True)
class LineGraphResult:
    graph: PlainGraph  # on line indices (= group element ranks)
    cayley: CayleyGraph
    isomorphic: bool


def line_graph(pcp: PartialCongruencePartition, td: TransversalDesign) -> LineGraphResult:
    """Lines as vertices, adjacency = shared point; checked against Cayley.

    The map sending line {gH : H} to the group element g must carry the line
    graph edge-for-edge onto Cay(G, union of the subgroups minus identity);
    a failure would be a construction bug and raises.
    """
    desc = pcp.group
    n = desc.order
    adj = [0] * n
    point_lines: dict[int, list[int]] = {}
    for li, line in enumerate(td.lines):
        for pt in line:
            point_lines.setdefault(pt, []).append(li)
    for lids in point_lines.values():
        for a, b in itertools.combinations(lids, 2):
            adj[a] |= 1 << b
            adj[b] |= 1 << a
    union_mask = 0
    for sub in pcp.subgroups:
        union_mask |= sub.mask
    sset = SymmetricSet(desc, union_mask ^ 1)
    cay = build(desc, sset)
    iso = all(adj[g] == cay.adjacency[g] for g in range(n))
    if not iso:
        raise AssertionError("line graph is not isomorphic to the Cayley graph")
    labels = tuple(desc.element_str(g) for g in range(n))
    return LineGraphResult(PlainGraph(labels, tuple(adj)), cay, iso)


def td_line_srg_params(r: int, v: int) -> SrgParams:
    """(v^2, r(v-1), v + r^2 - 3r, r^2 - r) by substitution."""
    if not 2 <= r <= v:
        raise ValueError(f"need 2 <= r <= v, got r={r}, v={v}")
    return SrgParams(v * v, r * (v - 1), v + r * r - 3 * r, r * r - r)


# -- difference sets ---------------------------------------------------------


@dataclass(frozen=True)
class DifferenceSetCertificate:
    group: GroupDescriptor
    elements: tuple[int, ...]
    v: int
    k: int
    lam: int

    @property
    def order_n(self) -> int:
        return self.k - self.lam

    @property
    def nontrivial(self) -> bool:
        return self.k not in (0, 1, self.v - 1, self.v)

    def element_strs(self) -> list[str]:
        return [self.group.element_str(g) for g in self.elements]


def diffset_verify(
    desc: GroupDescriptor, elements: tuple[int, ...] | frozenset[int]
) -> DifferenceSetCertificate | None:
    """Certificate when the difference multiset is flat, else None."""
    sub = group_tables(desc).sub
    elems = tuple(sorted(set(elements)))
    counts = [0] * desc.order
    for d1 in elems:
        row = sub[d1]
        for d2 in elems:
            if d1 != d2:
                counts[int(row[d2])] += 1
    lams = set(counts[1:])
    if len(lams) != 1:
        return None
    return DifferenceSetCertificate(
        desc, elems, desc.order, len(elems), lams.pop()
    )


def diffset_canonical(
    desc: GroupDescriptor, elements: tuple[int, ...]
) -> tuple[int, ...]:
    """Lex-least image under all translations and group automorphisms."""
    best: tuple[int, ...] | None = None
    add = group_tables(desc).add
    for aut in automorphism_group(desc):
        mapped = sorted(aut.perm[e] for e in elements)
        for t in desc.elements():
            cand = tuple(sorted(int(add[e, t]) for e in mapped))
            if best is None or cand < best:
                best = cand
    assert best is not None
    return best


def diffset_search(
    desc: GroupDescriptor, k: int, budget: int = 10_000_000
) -> list[DifferenceSetCertificate]:
    """All size-k difference sets up to translation/automorphism equivalence.

    Translation canonicalization pins the identity into every candidate, so
    the scan is over C(|G|-1, k-1) subsets; the budget guards that count.
    """
    n = desc.order
    if k == 0:
        return []
    candidates = comb(n - 1, k - 1)
    if candidates > budget:
        raise SearchBudgetError(
            f"C({n - 1},{k - 1}) = {candidates} exceeds budget {budget}"
        )
    found: dict[tuple[int, ...], DifferenceSetCertificate] = {}
    for rest in itertools.combinations(range(1, n), k - 1):
        cert = diffset_verify(desc, (0,) + rest)
        if cert is None:
            continue
        canon = diffset_canonical(desc, cert.elements)
        if canon not in found:
            recert = diffset_verify(desc, canon)
            assert recert is not None
            found[canon] = recert
    return [found[key] for key in sorted(found)]


# -- bipartite double-layer construction over Z_n + Z_2 ----------------------


@dataclass(frozen=True)
class BipartiteDoubleReport:
    group: GroupDescriptor
    graph: CayleyGraph
    certificate: DifferenceSetCertificate | None
    is_drg: bool
    array: IntersectionArray | None
    diameter: int | None
    bipartite: bool
    antipodal: bool

    @property
    def in_diffset_family(self) -> bool:
        """DRG of diameter 3 and non-antipodal: the difference-set family."""
        return self.is_drg and self.diameter == 3 and not self.antipodal

    @property
    def equivalence_holds(self) -> bool:
        return self.in_diffset_family == (
            self.certificate is not None and self.certificate.nontrivial
        )


def even_index_subgroup(desc: GroupDescriptor) -> tuple[GroupDescriptor, dict[int, int]]:
    """2Z_n + Z_2 inside Z_n + Z_2, identified with Z_{n/2} + Z_2."""
    n = desc.first_modulus
    sub = product_group(n // 2, 2)
    embed = {}
    for a in range(0, n, 2):
        for b in range(2):
            embed[desc.rank(a, b)] = sub.rank(a // 2, b)
    return sub, embed


def bipartite_double_check(
    n: int, row0: tuple[int, ...] | frozenset[int], row1: tuple[int, ...] | frozenset[int]
) -> BipartiteDoubleReport:
    """Build Cay(Z_n + Z_2, (R_0,0) u (R_1,1)) and test the equivalence.

    R_0 and R_1 must be nonempty, negation-closed subsets of the odd
    residues.  The shifted set (-1+R_0, 0) u (-1+R_1, 1) is verified as a
    difference set inside the even-index subgroup; the graph is in the
    diameter-3 non-antipodal bipartite family exactly when that set is a
    nontrivial difference set, and the report records both sides.
    """
    if n % 2 != 0 or n < 4:
        raise ValueError("n must be even and >= 4")
    r0 = sorted({x % n for x in row0})
    r1 = sorted({x % n for x in row1})
    if not r0 or not r1:
        raise ValueError("both rows must be nonempty")
    for r in (r0, r1):
        if any(x % 2 == 0 for x in r):
            raise ValueError("rows must consist of odd residues")
        if {(-x) % n for x in r} != set(r):
            raise ValueError("rows must be negation-closed")
    desc = product_group(n, 2)
    sset = SymmetricSet.from_elements(
        desc, [desc.rank(a, 0) for a in r0] + [desc.rank(a, 1) for a in r1]
    )
    graph = build(desc, sset)
    sub, embed = even_index_subgroup(desc)
    shifted = tuple(
        sorted(
            [embed[desc.rank((a - 1) % n, 0)] for a in r0]
            + [embed[desc.rank((a - 1) % n, 1)] for a in r1]
        )
    )
    cert = diffset_verify(sub, shifted)
    if not is_connected(graph):
        return BipartiteDoubleReport(
            desc, graph, cert, False, None, None, False, False
        )
    part = distance_partition(graph)
    array = check_drg(graph, part)
    bip = is_bipartite(graph) is not None
    antip = is_antipodal(graph, part) if part.diameter >= 2 else False
    return BipartiteDoubleReport(
        desc,
        graph,
        cert,
        array is not None,
        array,
        part.diameter,
        bip,
        antip,
    )


def odd_row_subsets(n: int) -> list[tuple[int, ...]]:
    """Every negation-closed subset of the odd residues of Z_n."""
    cells: list[tuple[int, ...]] = []
    seen: set[int] = set()
    for x in range(1, n, 2):
        if x in seen:
            continue
        y = (-x) % n
        seen.add(x)
        seen.add(y)
        cells.append((x,) if x == y else (x, y))
    subsets = []
    for bits in range(1 << len(cells)):
        s: list[int] = []
        for i, cell in enumerate(cells):
            if bits >> i & 1:
                s.extend(cell)
        subsets.append(tuple(sorted(s)))
    return subsets


def bipartite_double_sweep(n: int) -> list[BipartiteDoubleReport]:
    """Exhaustive (R_0, R_1) sweep; the both-directions empirical check."""
    subsets = [s for s in odd_row_subsets(n) if s]
    reports = []
    for r0 in subsets:
        for r1 in subsets:
            reports.append(bipartite_double_check(n, r0, r1))
    return reports
