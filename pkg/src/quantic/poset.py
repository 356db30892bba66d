"""Finite posets stored as full order-relation bitmasks.

Carriers are capped at 64 elements so that every up-set and down-set fits in a
single machine word; all downstream algorithms (classification, nucleus
enumeration) reduce to bitmask arithmetic on these masks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import CarrierTooLarge, InternalCheckError, StructureError

# Hard cap for carriers that feed enumeration algorithms.
ENUM_CAP = 64
# 2**n subset scans (exhaustive cross-validation) are only run up to this size;
# beyond it the pairwise characterizations, which are equivalent on finite
# carriers, stand alone.
EXHAUSTIVE_CAP = 14


def bits(mask: int):
    """Yield the set bit positions of mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_count(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class PosetFlags:
    """Order-theoretic classification of one carrier."""

    complete: bool
    near_sup_complete: bool
    bounded_complete: bool
    dcpo: bool
    bdcpo: bool
    bounded_above: bool
    bounded_below: bool
    join_semilattice: bool
    meet_semilattice: bool
    lattice: bool
    algebraic: bool

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class FinitePoset:
    """Immutable finite poset on elements 0..n-1.

    up[i] is the bitmask of {j : i <= j} and down[i] the bitmask of
    {j : j <= i}; leq is O(1).  Construction validates reflexivity,
    antisymmetry and transitivity and reports a counterexample triple on
    failure.
    """

    kind = "finite"

    __slots__ = ("n", "up", "down", "labels", "__dict__")

    def __init__(self, leq_rows: Sequence[Sequence[bool]], labels: Optional[Sequence[str]] = None):
        n = len(leq_rows)
        if n > ENUM_CAP:
            raise CarrierTooLarge(f"poset has {n} elements, cap is {ENUM_CAP}")
        up = []
        for i, row in enumerate(leq_rows):
            if len(row) != n:
                raise StructureError(f"leq row {i} has length {len(row)}, expected {n}")
            mask = 0
            for j, v in enumerate(row):
                if v:
                    mask |= 1 << j
            up.append(mask)
        self.n = n
        self.up = tuple(up)
        self.down = tuple(self._transpose(up, n))
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise StructureError("labels length does not match carrier size")
        self._validate()

    @staticmethod
    def _transpose(up: Sequence[int], n: int):
        down = [0] * n
        for i in range(n):
            for j in bits(up[i]):
                down[j] |= 1 << i
        return down

    def _validate(self):
        n, up = self.n, self.up
        for i in range(n):
            if not (up[i] >> i) & 1:
                raise StructureError(f"order not reflexive at element {i}")
        for i in range(n):
            for j in bits(up[i]):
                if j != i and (up[j] >> i) & 1:
                    raise StructureError(f"order not antisymmetric on pair ({i}, {j})")
                if up[j] & ~up[i]:
                    k = next(bits(up[j] & ~up[i]))
                    raise StructureError(
                        f"order not transitive: {i} <= {j} and {j} <= {k} but not {i} <= {k}"
                    )

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_up_masks(cls, up: Sequence[int], labels=None) -> "FinitePoset":
        n = len(up)
        return cls([[bool((up[i] >> j) & 1) for j in range(n)] for i in range(n)], labels)

    @classmethod
    def from_covers(cls, covers: Sequence[Iterable[int]], labels=None) -> "FinitePoset":
        """Build from cover lists: covers[i] lists elements directly above i."""
        n = len(covers)
        up = [1 << i for i in range(n)]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                for j in covers[i]:
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        return cls.from_up_masks(up, labels)

    @classmethod
    def chain(cls, n: int, labels=None) -> "FinitePoset":
        return cls([[i <= j for j in range(n)] for i in range(n)], labels)

    @classmethod
    def antichain(cls, n: int, labels=None) -> "FinitePoset":
        return cls([[i == j for j in range(n)] for i in range(n)], labels)

    @classmethod
    def diamond(cls) -> "FinitePoset":
        # 0 < a, b < 1 with a, b incomparable
        return cls.from_covers([[1, 2], [3], [3], []], labels=["0", "a", "b", "1"])

    @classmethod
    def powerset(cls, k: int, labels=None) -> "FinitePoset":
        """Subsets of a k-element set ordered by inclusion; element i is the mask i."""
        n = 1 << k
        if labels is None:
            labels = ["{" + ",".join(str(b) for b in bits(i)) + "}" for i in range(n)]
        return cls([[(i | j) == j for j in range(n)] for i in range(n)], labels)

    # -- basic queries -----------------------------------------------------

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def check_ids(self, xs: Iterable[int]):
        for x in xs:
            if not (0 <= x < self.n):
                raise StructureError(f"element id {x} foreign to carrier of size {self.n}")

    def mask_of(self, xs: Iterable[int]) -> int:
        mask = 0
        for x in xs:
            if not (0 <= x < self.n):
                raise StructureError(f"element id {x} foreign to carrier of size {self.n}")
            mask |= 1 << x
        return mask

    @property
    def universe(self) -> int:
        return (1 << self.n) - 1

    def least_of(self, mask: int) -> Optional[int]:
        """Least element of the subset mask, or None."""
        for u in bits(mask):
            if not (mask & ~self.up[u]):
                return u
        return None

    def greatest_of(self, mask: int) -> Optional[int]:
        for u in bits(mask):
            if not (mask & ~self.down[u]):
                return u
        return None

    def upper_bounds(self, mask: int) -> int:
        acc = self.universe
        for x in bits(mask):
            acc &= self.up[x]
        return acc

    def lower_bounds(self, mask: int) -> int:
        acc = self.universe
        for x in bits(mask):
            acc &= self.down[x]
        return acc

    def sup_mask(self, mask: int) -> Optional[int]:
        """Least upper bound of the subset mask, or None if it does not exist."""
        return self.least_of(self.upper_bounds(mask))

    def inf_mask(self, mask: int) -> Optional[int]:
        return self.greatest_of(self.lower_bounds(mask))

    def sup(self, xs: Iterable[int]) -> Optional[int]:
        return self.sup_mask(self.mask_of(xs))

    def inf(self, xs: Iterable[int]) -> Optional[int]:
        return self.inf_mask(self.mask_of(xs))

    def join(self, i: int, j: int) -> Optional[int]:
        return self.least_of(self.up[i] & self.up[j])

    def meet(self, i: int, j: int) -> Optional[int]:
        return self.greatest_of(self.down[i] & self.down[j])

    @cached_property
    def bottom(self) -> Optional[int]:
        return self.least_of(self.universe)

    @cached_property
    def top(self) -> Optional[int]:
        return self.greatest_of(self.universe)

    def is_directed_mask(self, mask: int) -> bool:
        """The empty set is not directed; pairs suffice on finite carriers."""
        if not mask:
            return False
        elems = list(bits(mask))
        for a in elems:
            for b in elems:
                if b > a:
                    if not (self.up[a] & self.up[b] & mask):
                        return False
        return True

    def is_directed(self, xs: Iterable[int]) -> bool:
        return self.is_directed_mask(self.mask_of(xs))

    def is_downward_closed(self, mask: int) -> bool:
        for x in bits(mask):
            if self.down[x] & ~mask:
                return False
        return True

    def maximal_elements(self) -> list:
        return [i for i in range(self.n) if self.up[i] == (1 << i)]

    def minimal_elements(self) -> list:
        return [i for i in range(self.n) if self.down[i] == (1 << i)]

    def covers(self, i: int) -> list:
        """Elements directly above i."""
        strict = self.up[i] & ~(1 << i)
        out = []
        for j in bits(strict):
            if not any(self.lt(i, k) and self.lt(k, j) for k in bits(strict)):
                out.append(j)
        return out

    def compact_elements(self) -> list:
        """Every element of a finite poset is compact: directed sets have maxima."""
        return list(range(self.n))

    def dual(self) -> "FinitePoset":
        return FinitePoset.from_up_masks(self.down, self.labels)

    def restrict(self, members: Sequence[int]) -> "FinitePoset":
        """Induced subposet on the given (sorted, distinct) elements."""
        self.check_ids(members)
        return FinitePoset(
            [[self.leq(a, b) for b in members] for a in members],
            [self.labels[a] for a in members],
        )

    # -- classification ----------------------------------------------------

    @cached_property
    def flags(self) -> PosetFlags:
        n = self.n
        join_semi = all(self.join(i, j) is not None for i in range(n) for j in range(i, n))
        meet_semi = all(self.meet(i, j) is not None for i in range(n) for j in range(i, n))
        has_top = self.top is not None
        has_bottom = self.bottom is not None
        # On finite carriers every nonempty subset is finite, so pairwise joins
        # decide near sup-completeness, and adding the empty set decides
        # completeness.
        near_sup = join_semi and (has_top or n == 0)
        complete = near_sup and has_bottom
        bounded_complete = all(
            self.join(i, j) is not None
            for i in range(n)
            for j in range(i, n)
            if self.up[i] & self.up[j]
        )
        if n <= EXHAUSTIVE_CAP:
            self._cross_validate_flags(complete, near_sup, bounded_complete)
        return PosetFlags(
            complete=complete,
            near_sup_complete=near_sup,
            bounded_complete=bounded_complete,
            dcpo=True,
            bdcpo=True,
            bounded_above=has_top,
            bounded_below=has_bottom,
            join_semilattice=join_semi,
            meet_semilattice=meet_semi,
            lattice=join_semi and meet_semi,
            algebraic=True,
        )

    def _cross_validate_flags(self, complete, near_sup, bounded_complete):
        """Exhaustive subset scan against the pairwise answers."""
        scan_complete = True
        scan_near = True
        scan_bc = True
        for mask in range(1 << self.n):
            has_sup = self.sup_mask(mask) is not None
            if not has_sup:
                scan_complete = False
                if mask:
                    scan_near = False
                    if self.upper_bounds(mask):
                        scan_bc = False
        if (scan_complete, scan_near, scan_bc) != (complete, near_sup, bounded_complete):
            raise InternalCheckError(
                "pairwise and exhaustive poset classification disagree: "
                f"pair={(complete, near_sup, bounded_complete)} "
                f"scan={(scan_complete, scan_near, scan_bc)}"
            )

    # -- misc ----------------------------------------------------------------

    def iter_subsets(self):
        return range(1 << self.n)

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.up == other.up

    def __hash__(self):
        return hash(self.up)

    def __repr__(self):
        return f"FinitePoset(n={self.n})"

    def isomorphic_to(self, other: "FinitePoset") -> Optional[dict]:
        """Search for an order isomorphism; returns the mapping or None."""
        if self.n != other.n:
            return None
        n = self.n
        mine = sorted(range(n), key=lambda i: (bit_count(self.up[i]), bit_count(self.down[i])))
        profile = lambda p, i: (bit_count(p.up[i]), bit_count(p.down[i]))
        candidates = [
            [j for j in range(n) if profile(other, j) == profile(self, i)] for i in range(n)
        ]
        assign: dict = {}
        used = set()

        def ok(i, j):
            for i2, j2 in assign.items():
                if self.leq(i, i2) != other.leq(j, j2) or self.leq(i2, i) != other.leq(j2, j):
                    return False
            return True

        def backtrack(k):
            if k == n:
                return True
            i = mine[k]
            for j in candidates[i]:
                if j not in used and ok(i, j):
                    assign[i] = j
                    used.add(j)
                    if backtrack(k + 1):
                        return True
                    del assign[i]
                    used.discard(j)
            return False

        return dict(assign) if backtrack(0) else None


def ub_scan_sup(p: FinitePoset, xs: Iterable[int]) -> Optional[int]:
    """Independent sup oracle: full scan of the upper-bound set for a least element."""
    members = list(xs)
    ubs = [u for u in range(p.n) if all(p.leq(x, u) for x in members)]
    for u in ubs:
        if all(p.leq(u, v) for v in ubs):
            return u
    return None
