"""Arithmetic, subgroup, and automorphism structure of Z_m + Z_q.

Every group handled by this package is Z_m + Z_q with q | m (or q = 1 for
plain cyclic groups).  Elements are addressed by a fixed rank bijection

    rank(a, b) = a*q + b,   a in [0, m),  b in [0, q),

so bit-vector indices are stable across runs and serialized artifacts.
Subsets of the group are stored as Python int bitmasks over ranks.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator

import numpy as np

DEFAULT_AUT_ORDER_BOUND = 243


class GroupFormatError(ValueError):
    """A group or element literal failed to parse."""


class AutomorphismBoundError(RuntimeError):
    """Group order exceeds the automorphism enumeration bound."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, e) with n = p**e, or None."""
    if n < 2:
        return None
    for p in range(2, n + 1):
        if p * p > n:
            return (n, 1)
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            return (p, e) if n == 1 else None
    return None


@dataclass(frozen=True)
class GroupDescriptor:
    """The abelian group Z_m + Z_q with the fixed rank bijection."""

    first_modulus: int
    second_modulus: int

    def __post_init__(self) -> None:
        m, q = self.first_modulus, self.second_modulus
        if m < 1 or q < 1:
            raise GroupFormatError(f"moduli must be positive, got ({m}, {q})")

    @property
    def order(self) -> int:
        return self.first_modulus * self.second_modulus

    @property
    def is_cyclic(self) -> bool:
        return self.second_modulus == 1

    @property
    def prime_power_pair(self) -> tuple[int, int] | None:
        """(p, s) when the group is Z_{p^s} + Z_p, else None."""
        q = self.second_modulus
        if q == 1 or not _is_prime(q):
            return None
        pp = _prime_power(self.first_modulus)
        if pp is None or pp[0] != q:
            return None
        return (q, pp[1])

    @property
    def flavor(self) -> str:
        if self.is_cyclic:
            return "cyclic"
        return "pair" if self.prime_power_pair is not None else "product"

    # -- element arithmetic ------------------------------------------------
    def rank(self, a: int, b: int = 0) -> int:
        m, q = self.first_modulus, self.second_modulus
        return (a % m) * q + (b % q)

    def unrank(self, r: int) -> tuple[int, int]:
        return divmod(r, self.second_modulus)

    def add(self, x: int, y: int) -> int:
        a1, b1 = self.unrank(x)
        a2, b2 = self.unrank(y)
        return self.rank(a1 + a2, b1 + b2)

    def neg(self, x: int) -> int:
        a, b = self.unrank(x)
        return self.rank(-a, -b)

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def scale(self, c: int, x: int) -> int:
        a, b = self.unrank(x)
        return self.rank(c * a, c * b)

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, x: int) -> int:
        a, b = self.unrank(x)
        m, q = self.first_modulus, self.second_modulus
        oa = m // gcd(a, m)
        ob = q // gcd(b, q)
        return oa * ob // gcd(oa, ob)

    def generators(self) -> tuple[int, ...]:
        """Canonical generating ranks: (1,0) and, when q > 1, (0,1)."""
        if self.is_cyclic:
            return (self.rank(1, 0),)
        return (self.rank(1, 0), self.rank(0, 1))

    # -- literals ----------------------------------------------------------
    def spec(self) -> str:
        if self.is_cyclic:
            return f"Zn:{self.first_modulus}"
        pp = self.prime_power_pair
        if pp is not None:
            p, s = pp
            return f"{p}^{s}x{p}"
        return f"{self.first_modulus}x{self.second_modulus}"

    def element_str(self, r: int) -> str:
        if self.is_cyclic:
            return str(r)
        a, b = self.unrank(r)
        return f"({a},{b})"

    def parse_element(self, token: str) -> int:
        token = token.strip()
        if self.is_cyclic:
            if not re.fullmatch(r"\d+", token):
                raise GroupFormatError(f"bad cyclic element literal {token!r}")
            v = int(token)
            if not 0 <= v < self.order:
                raise GroupFormatError(f"element {v} out of range for {self.spec()}")
            return v
        m = re.fullmatch(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", token)
        if not m:
            raise GroupFormatError(f"bad element literal {token!r}")
        a, b = int(m.group(1)), int(m.group(2))
        if a >= self.first_modulus or b >= self.second_modulus:
            raise GroupFormatError(f"element ({a},{b}) out of range for {self.spec()}")
        return self.rank(a, b)


def pair_group(p: int, s: int) -> GroupDescriptor:
    """Z_{p^s} + Z_p.  p = 2 is allowed only for the even-order extension."""
    if not _is_prime(p):
        raise GroupFormatError(f"{p} is not prime")
    if s < 1:
        raise GroupFormatError(f"exponent must be >= 1, got {s}")
    return GroupDescriptor(p**s, p)


def cyclic_group(n: int) -> GroupDescriptor:
    return GroupDescriptor(n, 1)


def product_group(m: int, q: int) -> GroupDescriptor:
    return GroupDescriptor(m, q)


_PAIR_RE = re.compile(r"(\d+)(?:\^(\d+))?\s*x\s*(\d+)", re.IGNORECASE)
_CYCLIC_RE = re.compile(r"Zn\s*:\s*(\d+)", re.IGNORECASE)


def parse_group(spec: str) -> GroupDescriptor:
    """Parse "p^s x p" / "m x q" / "Zn:n" group literals."""
    s = spec.strip()
    m = _CYCLIC_RE.fullmatch(s)
    if m:
        return cyclic_group(int(m.group(1)))
    m = _PAIR_RE.fullmatch(s)
    if m:
        base = int(m.group(1))
        exp = int(m.group(2)) if m.group(2) else 1
        q = int(m.group(3))
        return GroupDescriptor(base**exp, q)
    raise GroupFormatError(f"unrecognized group literal {spec!r}")


# -- cached numpy tables ---------------------------------------------------


@dataclass(frozen=True)
class GroupTables:
    add: np.ndarray  # int16 (n, n): add[x, y] = rank(x + y)
    sub: np.ndarray  # int16 (n, n): sub[x, y] = rank(x - y)
    neg: np.ndarray  # int16 (n,)
    order_of: np.ndarray  # int32 (n,)


@lru_cache(maxsize=None)
def group_tables(desc: GroupDescriptor) -> GroupTables:
    m, q = desc.first_modulus, desc.second_modulus
    n = desc.order
    r = np.arange(n)
    a, b = np.divmod(r, q)
    a1 = a[:, None] + a[None, :]
    b1 = b[:, None] + b[None, :]
    add = ((a1 % m) * q + (b1 % q)).astype(np.int16)
    neg = (((-a) % m) * q + ((-b) % q)).astype(np.int16)
    sub = add[:, neg].astype(np.int16)
    oa = m // np.gcd(a, m)
    ob = q // np.gcd(b, q)
    order_of = (oa * ob // np.gcd(oa, ob)).astype(np.int32)
    return GroupTables(add=add, sub=sub, neg=neg, order_of=order_of)


# -- inverse pairs and atoms -----------------------------------------------


@lru_cache(maxsize=None)
def inverse_pairs(desc: GroupDescriptor) -> tuple[tuple[int, ...], ...]:
    """Partition of non-identity elements into {g, -g} cells.

    Cells are ordered by their minimum rank.  Involutions (g = -g, possible
    only in even-order groups) come out as singleton cells.
    """
    neg = group_tables(desc).neg
    cells: list[tuple[int, ...]] = []
    seen = 0
    for g in range(1, desc.order):
        if seen >> g & 1:
            continue
        h = int(neg[g])
        seen |= (1 << g) | (1 << h)
        cells.append((g,) if h == g else (g, h))
    return tuple(cells)


@lru_cache(maxsize=None)
def atom_partition(desc: GroupDescriptor) -> tuple[tuple[int, ...], ...]:
    """Cells [g] = {x : <x> = <g>}; the identity forms its own cell."""
    by_subgroup: dict[int, list[int]] = {}
    for g in desc.elements():
        key = cyclic_subgroup_mask(desc, g)
        by_subgroup.setdefault(key, []).append(g)
    cells = [tuple(sorted(v)) for v in by_subgroup.values()]
    cells.sort(key=lambda c: c[0])
    return tuple(cells)


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    group: GroupDescriptor
    mask: int
    order: int
    generators: tuple[int, ...]

    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def contains(self, r: int) -> bool:
        return bool(self.mask >> r & 1)


def cyclic_subgroup_mask(desc: GroupDescriptor, g: int) -> int:
    mask = 1
    x = g
    while not mask >> x & 1:
        mask |= 1 << x
        x = desc.add(x, g)
    return mask


def closure_mask(desc: GroupDescriptor, mask: int) -> int:
    """Mask of the subgroup generated by the elements of ``mask``."""
    add = group_tables(desc).add
    closed = 1 | mask
    frontier = closed
    while frontier:
        new = 0
        for v in iter_bits(frontier):
            row = add[v]
            for w in iter_bits(closed):
                new |= 1 << int(row[w])
        frontier = new & ~closed
        closed |= new
    return closed


@lru_cache(maxsize=None)
def all_subgroups(desc: GroupDescriptor) -> tuple[Subgroup, ...]:
    """Every subgroup, found as joins of at most two cyclic subgroups.

    All groups handled here are generated by two elements, so one join
    round over the cyclic subgroups is exhaustive.
    """
    cyclic: dict[int, int] = {}  # mask -> smallest generator
    for g in desc.elements():
        m = cyclic_subgroup_mask(desc, g)
        if m not in cyclic:
            cyclic[m] = g
    add = group_tables(desc).add
    found: dict[int, tuple[int, ...]] = {m: (g,) for m, g in cyclic.items()}
    masks = sorted(cyclic)
    for i, m1 in enumerate(masks):
        mem1 = list(iter_bits(m1))
        for m2 in masks[i + 1 :]:
            join = 0
            for x in mem1:
                row = add[x]
                for y in iter_bits(m2):
                    join |= 1 << int(row[y])
            if join not in found:
                found[join] = (cyclic[m1], cyclic[m2])
    subs = [
        Subgroup(desc, mask, mask.bit_count(), gens)
        for mask, gens in found.items()
    ]
    subs.sort(key=lambda h: (h.order, h.mask))
    return tuple(subs)


def subgroups_of_order(desc: GroupDescriptor, order: int) -> tuple[Subgroup, ...]:
    if desc.order % order != 0:
        return ()
    return tuple(h for h in all_subgroups(desc) if h.order == order)


@lru_cache(maxsize=None)
def maximal_subgroup_masks(desc: GroupDescriptor) -> tuple[int, ...]:
    """Masks of the prime-index subgroups.

    <S> = G exactly when S is contained in none of them, which turns the
    census connectivity test into a handful of word ANDs.
    """
    n = desc.order
    primes = {p for p in range(2, n + 1) if n % p == 0 and _is_prime(p)}
    return tuple(
        h.mask for h in all_subgroups(desc) if n // h.order in primes
    )


def is_transversal(desc: GroupDescriptor, elements: Iterable[int], sub: Subgroup) -> bool:
    """True when ``elements`` meets every coset of ``sub`` exactly once."""
    add = group_tables(desc).add
    counts: dict[int, int] = {}
    for e in elements:
        key = min(int(add[e, h]) for h in iter_bits(sub.mask))
        counts[key] = counts.get(key, 0) + 1
        if counts[key] > 1:
            return False
    return len(counts) == desc.order // sub.order


# -- automorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class GroupAutomorphism:
    group: GroupDescriptor
    image_first: int
    image_second: int
    perm: tuple[int, ...]

    def apply(self, r: int) -> int:
        return self.perm[r]

    def apply_mask(self, mask: int) -> int:
        out = 0
        for v in iter_bits(mask):
            out |= 1 << self.perm[v]
        return out


@lru_cache(maxsize=None)
def automorphism_group(
    desc: GroupDescriptor, order_bound: int = DEFAULT_AUT_ORDER_BOUND
) -> tuple[GroupAutomorphism, ...]:
    """All automorphisms, by enumerating images of the canonical generators.

    Candidate images are filtered by order preservation; the induced linear
    map is kept when its permutation table is a bijection.
    """
    n = desc.order
    if n > order_bound:
        raise AutomorphismBoundError(
            f"group order {n} exceeds automorphism enumeration bound {order_bound}"
        )
    m, q = desc.first_modulus, desc.second_modulus
    tabs = group_tables(desc)
    r = np.arange(n)
    x1, x2 = np.divmod(r, q)

    auts: list[GroupAutomorphism] = []
    if desc.is_cyclic:
        for u in range(1, m + 1 if m == 1 else m):
            if gcd(u, m) != 1:
                continue
            perm = tuple(int(v) for v in (u * r) % m)
            auts.append(GroupAutomorphism(desc, perm[min(1, n - 1)], 0, perm))
        if m == 1:
            auts.append(GroupAutomorphism(desc, 0, 0, (0,)))
        return tuple(sorted(auts, key=lambda a: a.perm))

    order_of = tabs.order_of
    gen1_candidates = [g for g in range(n) if int(order_of[g]) == m]
    gen2_candidates = [g for g in range(n) if q % int(order_of[g]) == 0]
    for a in gen1_candidates:
        a1, a2 = desc.unrank(a)
        for b in gen2_candidates:
            b1, b2 = desc.unrank(b)
            img1 = (x1 * a1 + x2 * b1) % m
            img2 = (x1 * a2 + x2 * b2) % q
            perm_arr = img1 * q + img2
            test = np.zeros(n, dtype=bool)
            test[perm_arr] = True
            if not test.all():
                continue
            auts.append(
                GroupAutomorphism(desc, a, b, tuple(int(v) for v in perm_arr))
            )
    return tuple(sorted(auts, key=lambda t: t.perm))


@lru_cache(maxsize=None)
def pair_permutations(desc: GroupDescriptor) -> tuple[tuple[int, ...], ...]:
    """Distinct actions of Aut(G) on inverse-pair indices (duplicates merged)."""
    pairs = inverse_pairs(desc)
    index_of = {cell[0]: i for i, cell in enumerate(pairs)}
    for cell in pairs:
        for g in cell:
            index_of[g] = index_of[cell[0]]
    perms = set()
    for aut in automorphism_group(desc):
        perms.add(tuple(index_of[aut.perm[cell[0]]] for cell in pairs))
    return tuple(sorted(perms))
