"""The concrete worlds: power-set prequantales, module systems on finite
abelian groups, weak ideal systems on finite commutative monoids, ring ideal
lattices, chain examples, and the lazy carriers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .errors import CarrierTooLarge, HypothesisNotMet, InternalCheckError, StructureError
from .lazy import ChainOmega, UpsetsNat, upsets_ideal_map, upsets_saturation_map
from .magma import OrderedMagma, adjoin_annihilator
from .nucleus import MonotoneMap, is_nucleus, transportable_mask
from .poset import FinitePoset, bits

POWERSET_BASE_CAP = 5
SYSTEM_BASE_CAP = 4


@dataclass(frozen=True)
class FiniteMagmaDesc:
    """A plain finite magma: labels, a table, and flags verified from the table."""

    labels: tuple
    table: tuple
    associative: bool
    commutative: bool
    unital: bool
    unit: Optional[int]

    @classmethod
    def from_table(cls, labels: Sequence[str], table: Sequence[Sequence[int]]) -> "FiniteMagmaDesc":
        n = len(labels)
        if len(table) != n or any(len(r) != n for r in table):
            raise StructureError("magma table shape mismatch")
        tt = tuple(tuple(r) for r in table)
        for r in tt:
            for v in r:
                if not (0 <= v < n):
                    raise StructureError("magma table value out of range")
        assoc = all(
            tt[tt[x][y]][z] == tt[x][tt[y][z]] for x in range(n) for y in range(n) for z in range(n)
        )
        comm = all(tt[x][y] == tt[y][x] for x in range(n) for y in range(n))
        unit = next(
            (u for u in range(n) if all(tt[u][x] == x and tt[x][u] == x for x in range(n))),
            None,
        )
        return cls(tuple(labels), tt, assoc, comm, unit is not None, unit)

    @property
    def n(self) -> int:
        return len(self.labels)

    def is_group(self) -> bool:
        if not (self.associative and self.unital):
            return False
        return all(
            any(self.table[x][y] == self.unit for y in range(self.n)) for x in range(self.n)
        )

    @classmethod
    def cyclic_group(cls, n: int) -> "FiniteMagmaDesc":
        return cls.from_table(
            [f"g{i}" if i else "1" for i in range(n)],
            [[(i + j) % n for j in range(n)] for i in range(n)],
        )

    @classmethod
    def klein_four(cls) -> "FiniteMagmaDesc":
        return cls.from_table(
            ["1", "a", "b", "ab"],
            [[i ^ j for j in range(4)] for i in range(4)],
        )

    @classmethod
    def left_zero(cls, n: int = 2) -> "FiniteMagmaDesc":
        return cls.from_table([f"m{i}" for i in range(n)], [[i] * n for i in range(n)])

    @classmethod
    def trivial_monoid(cls) -> "FiniteMagmaDesc":
        return cls.from_table(["1"], [[0]])

    @classmethod
    def two_element_monoid(cls) -> "FiniteMagmaDesc":
        # {1, a} with a*a = a
        return cls.from_table(["1", "a"], [[0, 1], [1, 1]])

    @classmethod
    def nonassociative_pair(cls) -> "FiniteMagmaDesc":
        # a*a = b, all other products collapse; associativity fails at (a,a,a).
        return cls.from_table(["a", "b"], [[1, 0], [1, 1]])


# -- power-set carriers ----------------------------------------------------------


@dataclass(frozen=True)
class PowersetCarrier:
    """A power-set ordered magma plus the subset bookkeeping for its elements."""

    desc: FiniteMagmaDesc
    element_masks: tuple       # carrier element id -> subset mask over desc
    mask_index: dict
    magma: OrderedMagma

    def mask_of(self, symbols: Iterable[int]) -> int:
        out = 0
        for s in symbols:
            out |= 1 << s
        return out

    def element_of(self, symbols: Iterable[int]) -> int:
        return self.mask_index[self.mask_of(symbols)]


def _powerset_carrier(desc: FiniteMagmaDesc, drop_empty: bool, name: str) -> PowersetCarrier:
    k = desc.n
    masks = [m for m in range(1 << k) if m or not drop_empty]
    masks.sort()
    index = {m: i for i, m in enumerate(masks)}
    leq = [[(a & ~b) == 0 for b in masks] for a in masks]
    labels = ["{" + ",".join(desc.labels[s] for s in bits(m)) + "}" for m in masks]
    poset = FinitePoset(leq, labels)
    mul = []
    for a in masks:
        row = []
        for b in masks:
            prod = 0
            for x in bits(a):
                for y in bits(b):
                    prod |= 1 << desc.table[x][y]
            row.append(index[prod])
        mul.append(row)
    magma = OrderedMagma(poset, mul, name=name)
    return PowersetCarrier(desc, tuple(masks), index, magma)


def powerset_prequantale(desc: FiniteMagmaDesc, drop_empty: bool = False) -> PowersetCarrier:
    """2^M (or 2^M minus the empty set) under complex multiplication."""
    if desc.n > POWERSET_BASE_CAP:
        raise CarrierTooLarge(f"power-set base capped at {POWERSET_BASE_CAP}")
    name = f"2^{{{desc.n}}}-{{}}" if drop_empty else f"2^{{{desc.n}}}"
    carrier = _powerset_carrier(desc, drop_empty, name)
    prof = carrier.magma.profile
    if drop_empty:
        if not prof.near_prequantale or prof.with_annihilator:
            raise InternalCheckError("2^M minus the empty set must be a near prequantale")
    else:
        if not prof.prequantale:
            raise InternalCheckError("2^M must be a prequantale")
        if prof.quantale != desc.associative:
            raise InternalCheckError("2^M is a quantale exactly when M is a semigroup")
    return carrier


def powerset_of_magma_elements(m: OrderedMagma, drop_empty: bool) -> PowersetCarrier:
    """Power set of the elements of an existing ordered magma (ignoring its order)."""
    desc = FiniteMagmaDesc.from_table(m.poset.labels, m.mul)
    if desc.n > POWERSET_BASE_CAP:
        raise CarrierTooLarge(f"power-set base capped at {POWERSET_BASE_CAP}")
    return _powerset_carrier(desc, drop_empty, f"2^[{m.name}]")


# -- module systems and ideal systems ----------------------------------------------


@dataclass(frozen=True)
class SetSystemCarrier:
    """2^(M_0) for a base magma M with an absorbing zero symbol adjoined.

    Symbol 0 is the absorbing zero; base element i sits at symbol i + 1.
    """

    base: FiniteMagmaDesc
    symbols: tuple
    symbol_mul: tuple
    carrier: PowersetCarrier

    @property
    def magma(self) -> OrderedMagma:
        return self.carrier.magma

    @property
    def zero_singleton(self) -> int:
        return self.carrier.element_of([0])

    @property
    def empty_set(self) -> int:
        return self.carrier.element_of([])

    def translate(self, c: int, element: int) -> int:
        """The element cX for a symbol c."""
        mask = self.carrier.element_masks[element]
        out = 0
        for s in bits(mask):
            out |= 1 << self.symbol_mul[c][s]
        return self.carrier.mask_index[out]


def _with_zero(desc: FiniteMagmaDesc) -> Tuple[tuple, tuple]:
    symbols = ("0",) + tuple(desc.labels)
    k = len(symbols)
    mul = [[0] * k for _ in range(k)]
    for i in range(desc.n):
        for j in range(desc.n):
            mul[i + 1][j + 1] = desc.table[i][j] + 1
    return symbols, tuple(tuple(r) for r in mul)


def _set_system(desc: FiniteMagmaDesc, name: str) -> SetSystemCarrier:
    if desc.n > SYSTEM_BASE_CAP:
        raise CarrierTooLarge(f"system base capped at {SYSTEM_BASE_CAP}")
    symbols, symbol_mul = _with_zero(desc)
    zero_desc = FiniteMagmaDesc.from_table(symbols, symbol_mul)
    carrier = _powerset_carrier(zero_desc, drop_empty=False, name=name)
    if not carrier.magma.profile.multiplicative_lattice:
        raise InternalCheckError("2^(M_0) must be a multiplicative lattice")
    return SetSystemCarrier(desc, symbols, symbol_mul, carrier)


def module_system_lattice(group: FiniteMagmaDesc) -> SetSystemCarrier:
    if not group.is_group() or not group.commutative:
        raise HypothesisNotMet("module systems live over finite abelian groups")
    return _set_system(group, f"2^(G0:{group.n})")


def ideal_system_lattice(monoid: FiniteMagmaDesc) -> SetSystemCarrier:
    if not (monoid.associative and monoid.commutative and monoid.unital):
        raise HypothesisNotMet("ideal systems live over commutative monoids")
    return _set_system(monoid, f"2^(M0:{monoid.n})")


def module_system_conditions(sys: SetSystemCarrier, r: MonotoneMap) -> dict:
    """The four equivalent characterizations, each evaluated independently.

    All presuppose that the empty set maps to the zero singleton; callers that
    want a straight predicate should use is_module_system.
    """
    m = sys.magma
    p = m.poset
    t = r.table
    closure = r.is_expansive and r.is_order_preserving and r.is_idempotent

    def translations_transport() -> bool:
        return all(
            t[sys.translate(c, x)] == sys.translate(c, t[x])
            for c in range(len(sys.symbols))
            for x in range(m.n)
        )

    cond1 = closure and translations_transport()
    cond2 = closure and all(
        t[m.op(t[m.op(x, y)], z)] == t[m.op(x, t[m.op(y, z)])]
        for x in range(m.n)
        for y in range(m.n)
        for z in range(m.n)
    )
    cond3 = closure and all(
        t[m.op(t[x], t[y])] == t[m.op(x, y)] for x in range(m.n) for y in range(m.n)
    )
    cond4 = all(
        p.leq(m.op(x, y), t[z]) == p.leq(m.op(x, t[y]), t[z])
        for x in range(m.n)
        for y in range(m.n)
        for z in range(m.n)
    )
    return {"translations": cond1, "associative": cond2, "strictness": cond3, "single-axiom": cond4}


def is_module_system(sys: SetSystemCarrier, r: MonotoneMap) -> bool:
    if r.table[sys.empty_set] != sys.zero_singleton:
        return False
    conds = module_system_conditions(sys, r)
    if len(set(conds.values())) > 1:
        raise InternalCheckError(f"module-system conditions disagree: {conds}")
    nucleus_route = is_nucleus(sys.magma, r) if is_closure_safe(r) else False
    if nucleus_route != conds["translations"]:
        raise InternalCheckError("module systems must be the nuclei fixing the zero rule")
    return conds["translations"]


def is_closure_safe(r: MonotoneMap) -> bool:
    return r.is_expansive and r.is_order_preserving and r.is_idempotent


def weak_ideal_system_conditions(sys: SetSystemCarrier, r: MonotoneMap) -> dict:
    m = sys.magma
    p = m.poset
    t = r.table
    closure = is_closure_safe(r)
    k = len(sys.symbols)
    # Raw definition: 0 in r(empty), c M_0 inside r({c}), c r(X) inside r(cX).
    zero_in_empty = p.leq(sys.zero_singleton, t[sys.empty_set])
    whole = sys.carrier.element_of(range(k))
    c_m0 = all(
        p.leq(sys.translate(c, whole), t[sys.carrier.element_of([c])]) for c in range(k)
    )
    c_transport = all(
        p.leq(sys.translate(c, t[x]), t[sys.translate(c, x)])
        for c in range(k)
        for x in range(m.n)
    )
    raw = closure and zero_in_empty and c_m0 and c_transport
    unit_symbol = sys.base.unit + 1 if sys.base.unit is not None else None
    nucleus_form = (
        closure
        and is_nucleus(m, r)
        and t[sys.carrier.element_of([0])] == t[sys.empty_set]
        and unit_symbol is not None
        and t[sys.carrier.element_of([unit_symbol])] == whole
    )
    return {"raw": raw, "nucleus": nucleus_form}


def is_weak_ideal_system(sys: SetSystemCarrier, r: MonotoneMap) -> bool:
    conds = weak_ideal_system_conditions(sys, r)
    if conds["raw"] != conds["nucleus"]:
        raise InternalCheckError(f"weak-ideal-system characterizations disagree: {conds}")
    return conds["raw"]


def is_ideal_system(sys: SetSystemCarrier, r: MonotoneMap) -> bool:
    if not is_weak_ideal_system(sys, r):
        return False
    exact = all(
        r.table[sys.translate(c, x)] == sys.translate(c, r.table[x])
        for c in range(len(sys.symbols))
        for x in range(sys.magma.n)
    )
    singles = [sys.carrier.element_of([c]) for c in range(len(sys.symbols))]
    tmask = transportable_mask(sys.magma, r)
    via_transport = all((tmask >> s) & 1 for s in singles)
    if exact != via_transport:
        raise InternalCheckError("ideal-system characterizations disagree")
    return exact


# -- chains -------------------------------------------------------------------------


def zchain_with_top(n: int = 1) -> OrderedMagma:
    """Finite surrogate of a totally ordered group with a top: {-n..n, inf} with
    clamped addition and an absorbing top.

    Clamping breaks associativity, so the classification honestly reports a
    commutative unital near prequantale rather than a near multiplicative
    lattice; the divisorial simplicity scan still applies.
    """
    vals = list(range(-n, n + 1))
    labels = [str(v) for v in vals] + ["inf"]
    size = len(labels)
    leq = [[i <= j for j in range(size)] for i in range(size)]
    top = size - 1

    def clamp(v: int) -> int:
        return max(-n, min(n, v))

    mul = []
    for i in range(size):
        row = []
        for j in range(size):
            if i == top or j == top:
                row.append(top)
            else:
                row.append(vals.index(clamp(vals[i] + vals[j])))
        mul.append(row)
    return OrderedMagma(FinitePoset(leq, labels), mul, name=f"Z[{n}]+inf")


def zchain_with_both_ends(n: int = 1) -> OrderedMagma:
    """The same surrogate with an annihilator adjoined below."""
    return adjoin_annihilator(zchain_with_top(n), label="-inf")


def lazy_chain() -> ChainOmega:
    return ChainOmega()


def upsets_quantale() -> UpsetsNat:
    return UpsetsNat()


def upsets_shipped_maps(carrier: Optional[UpsetsNat] = None) -> dict:
    c = carrier or UpsetsNat()
    return {
        "monoid-ideal": upsets_ideal_map(c),
        "submonoid-saturation": upsets_saturation_map(c),
    }
