"""Closure operations and nuclei on finite carriers.

Predicates cross-check every equivalent characterization they implement and
raise InternalCheckError on disagreement; enumeration runs the image-set
construction with the naive filter available as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (
    CarrierTooLarge,
    HypothesisNotMet,
    InternalCheckError,
    NoUnit,
    StructureError,
)
from .magma import MagmaMorphism, OrderedMagma, is_sup_spanning
from .poset import EXHAUSTIVE_CAP, FinitePoset, bits

# Image-set enumeration walks all 2**n candidate subsets.
ENUMERATION_CAP = 16


def poset_of(carrier) -> FinitePoset:
    return carrier.poset if isinstance(carrier, OrderedMagma) else carrier


class MonotoneMap:
    """A self-map of a finite carrier, stored as a dense table.

    Equality and ordering are pointwise on tables; instances are immutable and
    hashable so nucleus lattices can be built on top of them.
    """

    kind = "finite"

    def __init__(self, carrier, table: Sequence[int]):
        p = poset_of(carrier)
        if len(table) != p.n:
            raise StructureError("map table length does not match carrier")
        p.check_ids(table)
        self.carrier = carrier
        self.table = tuple(table)

    @classmethod
    def identity(cls, carrier) -> "MonotoneMap":
        return cls(carrier, tuple(range(poset_of(carrier).n)))

    @classmethod
    def top_map(cls, carrier) -> "MonotoneMap":
        p = poset_of(carrier)
        if p.top is None:
            raise HypothesisNotMet("top map needs a bounded-above carrier")
        return cls(carrier, tuple(p.top for _ in range(p.n)))

    @property
    def poset(self) -> FinitePoset:
        return poset_of(self.carrier)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def __eq__(self, other):
        return isinstance(other, MonotoneMap) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __le__(self, other: "MonotoneMap") -> bool:
        p = self.poset
        return all(p.leq(a, b) for a, b in zip(self.table, other.table))

    def __repr__(self):
        return f"MonotoneMap{self.table}"

    def compose(self, inner: "MonotoneMap") -> "MonotoneMap":
        return MonotoneMap(self.carrier, tuple(self.table[x] for x in inner.table))

    def image_mask(self) -> int:
        out = 0
        for t in self.table:
            out |= 1 << t
        return out

    def image(self) -> list:
        return sorted(set(self.table))

    def fixed_mask(self) -> int:
        out = 0
        for x, t in enumerate(self.table):
            if x == t:
                out |= 1 << x
        return out

    @cached_property
    def is_expansive(self) -> bool:
        p = self.poset
        return all(p.leq(x, t) for x, t in enumerate(self.table))

    @cached_property
    def is_order_preserving(self) -> bool:
        p = self.poset
        return all(
            p.leq(self.table[x], self.table[y]) for x in range(p.n) for y in bits(p.up[x])
        )

    @cached_property
    def is_idempotent(self) -> bool:
        return all(self.table[t] == t for t in self.table)

    @cached_property
    def is_preclosure(self) -> bool:
        return self.is_expansive and self.is_order_preserving


def is_closure(s: MonotoneMap) -> bool:
    """Expansive + order-preserving + idempotent, cross-checked against the
    single axiom: x <= y* iff x* <= y* for all x, y."""
    cached = s.__dict__.get("_closure_flag")
    if cached is not None:
        return cached
    p = s.poset
    three_part = s.is_expansive and s.is_order_preserving and s.is_idempotent
    single = all(
        p.leq(x, s.table[y]) == p.leq(s.table[x], s.table[y])
        for x in range(p.n)
        for y in range(p.n)
    )
    if three_part != single:
        raise InternalCheckError("closure characterizations disagree")
    s.__dict__["_closure_flag"] = three_part
    return three_part


def _mult_compat(m: OrderedMagma, s: MonotoneMap) -> bool:
    p, t = m.poset, s.table
    return all(
        p.leq(m.op(t[x], t[y]), t[m.op(x, y)]) for x in range(m.n) for y in range(m.n)
    )


def _nucleus_conditions(m: OrderedMagma, s: MonotoneMap) -> Tuple[bool, bool, bool]:
    """The three equivalent conditions, each including the closure premise."""
    p, t = m.poset, s.table
    closed = is_closure(s)
    c1 = closed and _mult_compat(m, s)
    c2 = closed and all(
        t[m.op(t[x], t[y])] == t[m.op(x, y)] for x in range(m.n) for y in range(m.n)
    )
    c3 = closed and all(
        p.leq(m.op(x, t[y]), t[m.op(x, y)]) and p.leq(m.op(t[x], y), t[m.op(x, y)])
        for x in range(m.n)
        for y in range(m.n)
    )
    return c1, c2, c3


def _unital_selfmap_conditions(m: OrderedMagma, s: MonotoneMap) -> Tuple[bool, bool]:
    """The two single-axiom forms valid for arbitrary self-maps of unital carriers."""
    p, t, n = m.poset, s.table, m.n
    cond2 = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                a = p.leq(m.op(x, y), t[z])
                if a != p.leq(m.op(x, t[y]), t[z]) or a != p.leq(m.op(t[x], y), t[z]):
                    cond2 = False
                    break
            if not cond2:
                break
        if not cond2:
            break
    cond3 = all(p.leq(x, t[x]) for x in range(n)) and all(
        p.leq(m.op(t[x], t[y]), t[z])
        for x in range(n)
        for y in range(n)
        for z in range(n)
        if p.leq(m.op(x, y), t[z])
    )
    return cond2, cond3


def is_nucleus(m: OrderedMagma, s: MonotoneMap) -> bool:
    """Closure with x*y* <= (xy)*, all equivalent characterizations compared."""
    if s.carrier is m:
        cached = s.__dict__.get("_nucleus_flag")
        if cached is not None:
            return cached
    c1, c2, c3 = _nucleus_conditions(m, s)
    if not (c1 == c2 == c3):
        raise InternalCheckError("nucleus characterizations disagree")
    if m.unit is not None or _one_sided_unital(m):
        u2, u3 = _unital_selfmap_conditions(m, s)
        if not (c1 == u2 == u3):
            raise InternalCheckError("unital single-axiom nucleus forms disagree")
    if s.carrier is m:
        s.__dict__["_nucleus_flag"] = c1
    return c1


def _one_sided_unital(m: OrderedMagma) -> bool:
    cached = m.__dict__.get("_one_sided_unital")
    if cached is None:
        n = m.n
        cached = any(all(m.op(u, x) == x for x in range(n)) for u in range(n)) or any(
            all(m.op(x, u) == x for x in range(n)) for u in range(n)
        )
        m.__dict__["_one_sided_unital"] = cached
    return cached


def is_strict_nucleus(m: OrderedMagma, s: MonotoneMap) -> bool:
    t = s.table
    return is_nucleus(m, s) and all(
        m.op(t[x], t[y]) == t[m.op(x, y)] for x in range(m.n) for y in range(m.n)
    )


def transportable_mask(m: OrderedMagma, s: MonotoneMap) -> int:
    """T*(M): elements a with (ax)* = a x* and (xa)* = x* a for all x."""
    t = s.table
    out = 0
    for a in range(m.n):
        if all(
            t[m.op(a, x)] == m.op(a, t[x]) and t[m.op(x, a)] == m.op(t[x], a)
            for x in range(m.n)
        ):
            out |= 1 << a
    return out


# -- preclosure fixpoint ------------------------------------------------------


def closure_from_preclosure(s: MonotoneMap) -> MonotoneMap:
    """Finest closure coarser than the preclosure s, by iteration to fixpoint.

    On a finite carrier the orbit of each element strictly ascends, so at most
    n steps are needed; the result is cross-checked against the
    infimum-of-fixed-points formula.  When the carrier is an ordered magma and
    s satisfies x y+ <= (xy)+ and x+ y <= (xy)+ on a near-residuated carrier,
    the result is verified to be a nucleus.
    """
    if not s.is_preclosure:
        raise HypothesisNotMet("closure_from_preclosure requires a preclosure")
    p = s.poset
    table = list(s.table)
    for _ in range(p.n + 1):
        new = [s.table[x] for x in table]
        if new == table:
            break
        table = new
    else:
        raise InternalCheckError("preclosure iteration failed to stabilize")
    star = MonotoneMap(s.carrier, table)
    if not is_closure(star):
        raise HypothesisNotMet(
            "preclosure is not bounded above by a closure operation on this carrier"
        )
    fix = s.fixed_mask()
    for x in range(p.n):
        fiber = fix & p.up[x]
        least = p.least_of(fiber)
        if least is None or least != table[x]:
            raise InternalCheckError("fixpoint iteration disagrees with infimum formula")
    if isinstance(s.carrier, OrderedMagma):
        m = s.carrier
        if m.profile.near_residuated:
            t = s.table
            mult_ok = all(
                p.leq(m.op(x, t[y]), t[m.op(x, y)]) and p.leq(m.op(t[x], y), t[m.op(x, y)])
                for x in range(m.n)
                for y in range(m.n)
            )
            if mult_ok and not is_nucleus(m, star):
                raise InternalCheckError("multiplicative preclosure hull failed nucleus check")
    return star


# -- meets and joins in N(M) ---------------------------------------------------


def nuclei_meet(m: OrderedMagma, gamma: Iterable[MonotoneMap]) -> MonotoneMap:
    """Pointwise infimum; the empty meet is the top map e."""
    maps = list(gamma)
    p = m.poset
    if not maps:
        return MonotoneMap.top_map(m)
    for s in maps:
        if not is_nucleus(m, s):
            raise HypothesisNotMet("nuclei_meet requires nuclei")
    table = []
    for x in range(m.n):
        fiber = p.mask_of([s.table[x] for s in maps])
        v = p.inf_mask(fiber)
        if v is None:
            raise HypothesisNotMet(f"missing infimum for the fibers over element {x}")
        table.append(v)
    out = MonotoneMap(m, table)
    if not is_nucleus(m, out):
        raise InternalCheckError("pointwise meet of nuclei is not a nucleus")
    union_images = 0
    for s in maps:
        union_images |= s.image_mask()
    if union_images & ~out.image_mask():
        raise InternalCheckError("meet image does not contain the union of images")
    return out


def nuclei_join(
    m: OrderedMagma,
    gamma: Iterable[MonotoneMap],
    bound: Optional[MonotoneMap] = None,
) -> MonotoneMap:
    """Join as closure of the common fixed points.

    Guaranteed to be a nucleus when m is a near prequantale, or when m is
    bounded complete and near residuated with the family bounded above (a
    top map suffices; otherwise a witnessing coarser nucleus must be passed
    as `bound`); outside those hypotheses the operation refuses.
    """
    maps = list(gamma)
    p = m.poset
    prof = m.profile
    if not prof.near_prequantale:
        if not (prof.bounded_complete and prof.near_residuated):
            raise HypothesisNotMet(
                "join of nuclei needs a near prequantale, or a bounded-complete "
                "near-residuated carrier with the family bounded above"
            )
        if p.top is None:
            if bound is None or not is_nucleus(m, bound) or not all(s <= bound for s in maps):
                raise HypothesisNotMet(
                    "family not witnessed bounded above in N(M); pass a coarser "
                    "nucleus as the bound"
                )
    for s in maps:
        if not is_nucleus(m, s):
            raise HypothesisNotMet("nuclei_join requires nuclei")
    common = p.universe
    for s in maps:
        common &= s.fixed_mask()
    table = []
    for x in range(m.n):
        least = p.least_of(common & p.up[x])
        if least is None:
            raise InternalCheckError("common fixed points fail the closure-system property")
        table.append(least)
    out = MonotoneMap(m, table)
    if not is_nucleus(m, out):
        raise InternalCheckError("join of nuclei is not a nucleus")
    if out.image_mask() != common:
        raise InternalCheckError("join image is not the intersection of images")
    return out


# -- enumeration ----------------------------------------------------------------


def enumerate_closures(carrier, cap: int = ENUMERATION_CAP) -> List[MonotoneMap]:
    """All closure operations, via candidate image sets.

    A subset C is the image of a (unique) closure operation exactly when every
    fiber {a in C : a >= x} has a least element, and then x* is that element.
    The 2**n walk over candidate images is capped; callers who accept the
    exponential cost may raise the cap explicitly.
    """
    p = poset_of(carrier)
    if p.n > cap:
        raise CarrierTooLarge(f"closure enumeration capped at {cap} elements")
    required = 0
    for mx in p.maximal_elements():
        required |= 1 << mx
    out = []
    up = p.up
    for c in range(1 << p.n):
        if (c & required) != required:
            continue
        table = []
        for x in range(p.n):
            fiber = c & up[x]
            if not fiber:
                break
            least = p.least_of(fiber)
            if least is None:
                break
            table.append(least)
        else:
            out.append(MonotoneMap(carrier, tuple(table)))
    out.sort(key=lambda s: s.table)
    return out


def enumerate_closures_bruteforce(carrier) -> List[MonotoneMap]:
    """Independent oracle: filter all self-maps.  Exponential, tiny carriers only."""
    p = poset_of(carrier)
    if p.n ** p.n > 5_000_000:
        raise CarrierTooLarge("brute-force closure enumeration is n**n")
    out = []
    for table in product(range(p.n), repeat=p.n):
        s = MonotoneMap(carrier, table)
        if s.is_expansive and s.is_order_preserving and s.is_idempotent:
            out.append(s)
    out.sort(key=lambda s: s.table)
    return out


def enumerate_nuclei(
    m: OrderedMagma, cross_check: bool = True, cap: int = ENUMERATION_CAP
) -> List[MonotoneMap]:
    """All nuclei on m.

    On bounded-complete near-residuated carriers the image-set criterion
    (meet-closed, residual-stable subsets) is used and cross-checked against
    filtering the closure enumeration; otherwise only the filter route runs.
    """
    closures = enumerate_closures(m, cap=cap)
    filtered = [s for s in closures if is_nucleus(m, s)]
    prof = m.profile
    if prof.bounded_complete and prof.near_residuated and cross_check:
        by_images = _nuclei_by_image_sets(m, cap=cap)
        if [s.table for s in by_images] != [s.table for s in filtered]:
            raise InternalCheckError("image-set and filter nucleus enumerations disagree")
    return filtered


def _nuclei_by_image_sets(m: OrderedMagma, cap: int = ENUMERATION_CAP) -> List[MonotoneMap]:
    p = m.poset
    out = []
    for s in enumerate_closures(m, cap=cap):
        c = s.image_mask()
        if _meet_closed(p, c) and _residual_stable(m, c):
            out.append(s)
    out.sort(key=lambda s: s.table)
    return out


def _meet_closed(p: FinitePoset, c: int) -> bool:
    elems = list(bits(c))
    for i, a in enumerate(elems):
        for b in elems[i:]:
            if p.down[a] & p.down[b]:
                w = p.meet(a, b)
                if w is None or not ((c >> w) & 1):
                    return False
    return True


def _residual_stable(m: OrderedMagma, c: int) -> bool:
    p = m.poset
    for x in bits(c):
        for y in range(m.n):
            lset = p.mask_of([z for z in range(m.n) if p.leq(m.op(z, y), x)])
            if lset:
                r = p.greatest_of(lset)
                if r is not None and not ((c >> r) & 1):
                    return False
            rset = p.mask_of([z for z in range(m.n) if p.leq(m.op(y, z), x)])
            if rset:
                r = p.greatest_of(rset)
                if r is not None and not ((c >> r) & 1):
                    return False
    return True


# -- quotients -------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientMagma:
    parent: OrderedMagma
    nucleus: MonotoneMap
    members: tuple            # parent ids of the image, ascending
    magma: OrderedMagma       # the image with star-multiplication
    to_parent: tuple          # quotient id -> parent id
    to_quotient: dict         # parent image id -> quotient id


def quotient(m: OrderedMagma, s: MonotoneMap) -> QuotientMagma:
    """The image M* under star-multiplication, with the inherited structure asserted."""
    if not is_nucleus(m, s):
        raise HypothesisNotMet("quotient requires a nucleus")
    p = m.poset
    members = tuple(sorted(set(s.table)))
    index = {x: i for i, x in enumerate(members)}
    sub = p.restrict(members)
    mul = [[index[s.table[m.op(x, y)]] for y in members] for x in members]
    q = OrderedMagma(sub, mul, name=f"{m.name}^*" if m.name else "quotient")
    _assert_corestriction_sup_preserving(m, s, members, index, sub)
    _assert_profile_inheritance(m, q)
    _assert_quotient_residuals(m, s)
    return QuotientMagma(m, s, members, q, members, index)


def _assert_corestriction_sup_preserving(m, s, members, index, sub):
    p = m.poset
    if p.n > EXHAUSTIVE_CAP:
        subsets = [1 << x | 1 << y for x in range(p.n) for y in range(p.n)]
    else:
        subsets = list(range(1 << p.n))
    for mask in subsets:
        v = p.sup_mask(mask)
        if v is None:
            continue
        img = 0
        for x in bits(mask):
            img |= 1 << index[s.table[x]]
        if sub.sup_mask(img) != index[s.table[v]]:
            raise InternalCheckError("corestriction of the nucleus is not sup-preserving")


def _assert_profile_inheritance(m: OrderedMagma, q: OrderedMagma):
    inherited = (
        "prequantale",
        "near_prequantale",
        "semiprequantale",
        "multiplicative_semilattice",
        "prequantic_semilattice",
        "near_residuated",
        "residuated",
    )
    pm, pq = m.profile, q.profile
    for flag in inherited:
        if getattr(pm, flag) and not getattr(pq, flag):
            raise InternalCheckError(f"quotient failed to inherit {flag}")
    for flag in ("quantale", "near_quantale", "multiplicative_lattice", "near_multiplicative_lattice"):
        if getattr(pm, flag) and not getattr(pq, flag):
            raise InternalCheckError(f"quotient failed to inherit {flag}")


def _assert_quotient_residuals(m: OrderedMagma, s: MonotoneMap):
    """(x/y)* = x/y* = x/y for star-fixed x, whenever the residual exists."""
    if not m.profile.near_residuated:
        return
    p, t = m.poset, s.table
    for x in range(m.n):
        if t[x] != x:
            continue
        for y in range(m.n):
            lset = p.mask_of([z for z in range(m.n) if p.leq(m.op(z, y), x)])
            if not lset:
                continue
            r = p.greatest_of(lset)
            l2 = p.mask_of([z for z in range(m.n) if p.leq(m.op(z, t[y]), x)])
            r2 = p.greatest_of(l2) if l2 else None
            if t[r] != r or r2 != r:
                raise InternalCheckError("quotient residual formula failed")


def nucleus_of_morphism(f: MagmaMorphism) -> MonotoneMap:
    """The unique nucleus splitting a near-sup-preserving surjection-onto-image."""
    src = f.source
    if not (f.is_order_preserving() and f.is_magma_hom() and f.preserves_sups(True)):
        raise HypothesisNotMet("nucleus_of_morphism needs a near-sup-preserving magma hom")
    if not src.profile.near_prequantale:
        raise HypothesisNotMet("nucleus_of_morphism needs a near prequantale source")
    p = src.poset
    table = []
    for x in range(src.n):
        fiber = p.mask_of([y for y in range(src.n) if f.table[y] == f.table[x]])
        v = p.sup_mask(fiber)
        if v is None:
            raise InternalCheckError("fiber supremum missing on a near prequantale")
        table.append(v)
    s = MonotoneMap(src, table)
    if not is_nucleus(src, s):
        raise InternalCheckError("morphism-induced map failed the nucleus check")
    for x in range(src.n):
        if f.table[s.table[x]] != f.table[x]:
            raise InternalCheckError("morphism does not factor through its nucleus")
    members = sorted(set(s.table))
    if len(set(f.table[x] for x in members)) != len(members):
        raise InternalCheckError("morphism restricted to the image is not injective")
    _assert_image_iso(f, s, members)
    return s


def _assert_image_iso(f: MagmaMorphism, s: MonotoneMap, members):
    """Q* with star-multiplication is isomorphic to im f inside the target."""
    src, tgt = f.source, f.target
    for x in members:
        for y in members:
            star_prod = s.table[src.op(x, y)]
            if f.table[star_prod] != tgt.op(f.table[x], f.table[y]):
                raise InternalCheckError("image of nucleus not isomorphic to morphism image")
    for x in members:
        for y in members:
            if src.leq(x, y) != tgt.leq(f.table[x], f.table[y]):
                raise InternalCheckError("image correspondence is not an order isomorphism")


# -- induced nuclei ---------------------------------------------------------------


@dataclass(frozen=True)
class Submagma:
    parent: OrderedMagma
    members: tuple
    magma: OrderedMagma
    to_parent: tuple
    to_sub: dict

    @classmethod
    def of(cls, parent: OrderedMagma, members: Iterable[int]) -> "Submagma":
        mem = tuple(sorted(set(members)))
        parent.poset.check_ids(mem)
        mmask = 0
        for x in mem:
            mmask |= 1 << x
        if parent.submagma_closure(mmask) != mmask:
            raise StructureError("subset is not closed under multiplication")
        index = {x: i for i, x in enumerate(mem)}
        sub = parent.poset.restrict(mem)
        mul = [[index[parent.op(x, y)] for y in mem] for x in mem]
        return cls(parent, mem, OrderedMagma(sub, mul), mem, index)


def induced_lower(m: OrderedMagma, n_sub: Submagma, s: MonotoneMap) -> MonotoneMap:
    """Finest nucleus on m restricting to the nucleus s on a sup-spanning submagma."""
    if not m.profile.near_prequantale:
        raise HypothesisNotMet("induced_lower needs a near prequantale")
    if not is_sup_spanning(m, n_sub.members):
        raise HypothesisNotMet("submagma is not sup-spanning")
    if not is_nucleus(n_sub.magma, s):
        raise HypothesisNotMet("induced_lower requires a nucleus on the submagma")
    p = m.poset
    star_on_parent = {x: n_sub.to_parent[s.table[n_sub.to_sub[x]]] for x in n_sub.members}
    good = 0
    for y in range(m.n):
        if all(p.leq(star_on_parent[z], y) for z in n_sub.members if p.leq(z, y)):
            good |= 1 << y
    table = []
    for x in range(m.n):
        v = p.least_of(good & p.up[x])
        if v is None:
            raise InternalCheckError("induced-nucleus fiber has no least element")
        table.append(v)
    out = MonotoneMap(m, table)
    if not is_nucleus(m, out):
        raise InternalCheckError("induced lower map failed the nucleus check")
    for z in n_sub.members:
        if out.table[z] != star_on_parent[z]:
            raise InternalCheckError("induced lower nucleus does not restrict to the input")
    return out


def induced_upper(m: OrderedMagma, n_sub: Submagma, s: MonotoneMap) -> MonotoneMap:
    """Coarsest nucleus restricting to s on a saturated downward-closed submagma."""
    p = m.poset
    mmask = 0
    for x in n_sub.members:
        mmask |= 1 << x
    if not p.is_downward_closed(mmask):
        raise HypothesisNotMet("submagma is not downward closed")
    ann = m.annihilator
    for x in range(m.n):
        for y in range(m.n):
            if x == ann or y == ann:
                continue
            if ((mmask >> m.op(x, y)) & 1) and not (
                ((mmask >> x) & 1) and ((mmask >> y) & 1)
            ):
                raise HypothesisNotMet(
                    f"subset is not saturated: {x}*{y} lands inside but the pair does not"
                )
    if not is_nucleus(n_sub.magma, s):
        raise HypothesisNotMet("induced_upper requires a nucleus on the submagma")
    top = p.top
    if top is None:
        raise HypothesisNotMet("induced_upper needs a bounded-above carrier")
    table = []
    for x in range(m.n):
        if (mmask >> x) & 1:
            table.append(n_sub.to_parent[s.table[n_sub.to_sub[x]]])
        else:
            table.append(top)
    out = MonotoneMap(m, table)
    if not is_nucleus(m, out):
        raise InternalCheckError("induced upper map failed the nucleus check")
    return out


# -- R(M), the Galois connection, and 1[x] ---------------------------------------


def r_set_mask(m: OrderedMagma) -> int:
    if m.unit is None:
        raise NoUnit("R(M) needs a unit")
    out = 0
    for x in range(m.n):
        if m.op(x, x) == x and m.leq(m.unit, x):
            out |= 1 << x
    return out


def d_map(m: OrderedMagma, a: int) -> MonotoneMap:
    """The strict nucleus x -> x*a for idempotent a >= 1 on an ordered commutative monoid."""
    prof = m.profile
    if not (prof.commutative and prof.associative and prof.unital):
        raise HypothesisNotMet("d_map needs an ordered commutative monoid")
    if not ((r_set_mask(m) >> a) & 1):
        raise HypothesisNotMet("d_map needs an idempotent element above the unit")
    s = MonotoneMap(m, tuple(m.op(x, a) for x in range(m.n)))
    if not is_strict_nucleus(m, s):
        raise InternalCheckError("translation by an idempotent above 1 must be a strict nucleus")
    return s


def unit_part(m: OrderedMagma, s: MonotoneMap) -> int:
    """1* for a nucleus s; always lands in R(M)."""
    if m.unit is None:
        raise NoUnit("unit_part needs a unital carrier")
    if not is_nucleus(m, s):
        raise HypothesisNotMet("unit_part requires a nucleus")
    v = s.table[m.unit]
    if not ((r_set_mask(m) >> v) & 1):
        raise InternalCheckError("1* left R(M)")
    return v


def one_bracket(q: OrderedMagma, x: int) -> int:
    """1[x] = 1 v x v x^2 v ... on a unital near quantale."""
    prof = q.profile
    if not (prof.unital and prof.associative and prof.near_prequantale):
        raise HypothesisNotMet("1[x] needs a unital near quantale")
    p = q.poset
    powers = {q.unit, x}
    cur = x
    while True:
        cur = q.op(cur, x)
        if cur in powers:
            break
        powers.add(cur)
    v = p.sup(powers)
    if v is None:
        raise InternalCheckError("power supremum missing on a near-sup-complete carrier")
    rmask = r_set_mask(q)
    fiber = rmask & p.up[x]
    if p.least_of(fiber) != v:
        raise InternalCheckError("1[x] is not the least idempotent above the unit and x")
    return v


def one_bracket_map(q: OrderedMagma) -> MonotoneMap:
    s = MonotoneMap(q, tuple(one_bracket(q, x) for x in range(q.n)))
    if not is_closure(s):
        raise InternalCheckError("1[-] failed the closure check")
    if s.image_mask() != r_set_mask(q):
        raise InternalCheckError("image of 1[-] is not R(Q)")
    return s


# -- the lattice N(M) and the tower ----------------------------------------------


@dataclass(frozen=True)
class NucleusLattice:
    base: OrderedMagma
    maps: tuple                # the nuclei, in deterministic order
    magma: OrderedMagma        # N(M) under pointwise order with join as multiplication


def nucleus_lattice(m: OrderedMagma) -> NucleusLattice:
    maps = tuple(enumerate_nuclei(m))
    k = len(maps)
    p = m.poset
    leq_rows = [[maps[i] <= maps[j] for j in range(k)] for i in range(k)]
    lat = FinitePoset(leq_rows, [f"n{i}" for i in range(k)])
    mul = []
    for i in range(k):
        row = []
        for j in range(k):
            v = lat.join(i, j)
            if v is None:
                # Guaranteed to exist when m is near sup-complete; refuse otherwise.
                raise HypothesisNotMet("N(M) is not a join semilattice for this carrier")
            row.append(v)
        mul.append(row)
    magma = OrderedMagma(lat, mul, name=f"N({m.name})" if m.name else "N(M)")
    # The lattice join must agree with the common-fixed-point join formula.
    if m.profile.near_prequantale or (
        m.profile.bounded_complete and m.profile.near_residuated and p.top is not None
    ):
        for i in range(k):
            for j in range(k):
                joined = nuclei_join(m, [maps[i], maps[j]])
                if joined.table != maps[mul[i][j]].table:
                    raise InternalCheckError("N(M) join table disagrees with the join formula")
    return NucleusLattice(m, maps, magma)


@dataclass(frozen=True)
class TowerReport:
    levels: tuple              # NucleusLattice per level
    sizes: tuple
    stabilizes: Optional[bool]  # d_- iso at the last computed step
    simple: bool


def nucleus_tower(m: OrderedMagma, depth: int = 2, level_cap: int = ENUMERATION_CAP) -> TowerReport:
    """N(M), N(N(M)), ... with the structure theorems asserted at each level."""
    if not m.profile.near_sup_magma:
        raise HypothesisNotMet("the nucleus tower needs a near sup-magma")
    levels = []
    current = m
    for _ in range(depth):
        if current.n > level_cap:
            raise CarrierTooLarge("tower level exceeds the enumeration cap")
        lat = nucleus_lattice(current)
        levels.append(lat)
        _assert_level_structure(lat)
        current = lat.magma
    stabilizes = None
    if len(levels) >= 2:
        stabilizes = _d_embedding_is_iso(levels[-2], levels[-1])
    simple = len(levels[0].maps) <= 2
    return TowerReport(tuple(levels), tuple(len(l.maps) for l in levels), stabilizes, simple)


def _assert_level_structure(lat: NucleusLattice):
    nm = lat.magma
    if nm.n == 0:
        return
    prof = nm.profile
    if not prof.near_multiplicative_lattice:
        raise InternalCheckError("N(M) is not a near multiplicative lattice under join")
    rmask = r_set_mask(nm)
    if rmask != nm.poset.universe:
        raise InternalCheckError("N(M) != R(N(M))")
    for i in range(nm.n):
        for j in range(nm.n):
            if nm.op(i, j) != nm.poset.join(i, j):
                raise InternalCheckError("multiplication on N(M) is not the join")


def _d_embedding_is_iso(lower: NucleusLattice, upper: NucleusLattice) -> bool:
    """d_-: N^n -> N^(n+1), a ->  (x -> x v a); iso exactly when surjective."""
    nm = lower.magma
    p = nm.poset
    images = []
    for a in range(nm.n):
        table = tuple(p.join(x, a) for x in range(nm.n))
        images.append(table)
    upper_tables = {s.table for s in upper.maps}
    for t in images:
        if t not in upper_tables:
            raise InternalCheckError("d_a is not a nucleus on the next tower level")
    if len(set(images)) != nm.n:
        raise InternalCheckError("d_- embedding is not injective")
    return len(upper.maps) == nm.n


# -- composition joins -------------------------------------------------------------


@dataclass(frozen=True)
class CompositionJoinVerdict:
    certified: bool
    n: Optional[int]
    composition: Optional[MonotoneMap]
    matches_join: Optional[bool]


def composition_join_check(
    m: OrderedMagma, s1: MonotoneMap, s2: MonotoneMap, bound: int = 8
) -> CompositionJoinVerdict:
    """Certify s1 v s2 as an n-fold alternating composition when one order of
    alternation is coarser than the other; bound exhaustion is not a refutation."""
    for s in (s1, s2):
        if not is_nucleus(m, s):
            raise HypothesisNotMet("composition_join_check requires nuclei")
    p = m.poset

    def alternating(first: MonotoneMap, second: MonotoneMap, n: int) -> MonotoneMap:
        # n-fold composition applying `first` first: ... o second o first
        out = MonotoneMap.identity(m)
        for i in range(n):
            out = (first if i % 2 == 0 else second).compose(out)
        return out

    for n in range(1, bound + 1):
        a = alternating(s2, s1, n)   # ... o s2 o s1 o s2 reading right to left
        b = alternating(s1, s2, n)
        cand = None
        if b <= a:
            cand = a
        elif a <= b:
            cand = b
        if cand is not None:
            if not is_nucleus(m, cand):
                raise InternalCheckError("certified composition is not a nucleus")
            matches = None
            try:
                matches = nuclei_join(m, [s1, s2]).table == cand.table
            except HypothesisNotMet:
                matches = None
            if matches is False:
                raise InternalCheckError("certified composition disagrees with the join")
            return CompositionJoinVerdict(True, n, cand, matches)
    return CompositionJoinVerdict(False, None, None, None)
