"""Ordered magmas over finite posets: classification, residuals, special subsets.

Every class flag is decided by its defining condition and, on small carriers,
cross-validated against an equivalent characterization; a disagreement raises
InternalCheckError because the equivalences are theorems, not heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import InternalCheckError, NoUnit, StructureError
from .poset import EXHAUSTIVE_CAP, FinitePoset, bits


@dataclass(frozen=True)
class ClassificationProfile:
    sup_magma: bool
    near_sup_magma: bool
    dcpo_magma: bool
    bounded_complete: bool
    bounded_above: bool
    with_annihilator: bool
    prequantale: bool
    near_prequantale: bool
    semiprequantale: bool
    prequantic_semilattice: bool
    multiplicative_semilattice: bool
    scott_topological: bool
    residuated: bool
    near_residuated: bool
    associative: bool
    commutative: bool
    unital: bool
    precoherent: bool

    # Derived composite classes.
    @property
    def quantale(self) -> bool:
        return self.prequantale and self.associative

    @property
    def near_quantale(self) -> bool:
        return self.near_prequantale and self.associative

    @property
    def semiquantale(self) -> bool:
        return self.semiprequantale and self.associative

    @property
    def multiplicative_lattice(self) -> bool:
        return self.quantale and self.commutative and self.unital

    @property
    def near_multiplicative_lattice(self) -> bool:
        return self.near_quantale and self.commutative and self.unital

    @property
    def semimultiplicative_lattice(self) -> bool:
        return self.semiquantale and self.commutative and self.unital

    @property
    def coherent(self) -> bool:
        # On finite carriers the unit is always compact.
        return self.precoherent and self.unital

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        for k in (
            "quantale",
            "near_quantale",
            "semiquantale",
            "multiplicative_lattice",
            "near_multiplicative_lattice",
            "semimultiplicative_lattice",
            "coherent",
        ):
            d[k] = getattr(self, k)
        return d


# Arrows of the implication diagrams among ordered-magma classes, as
# (antecedent flags) -> (consequent flags).  Checked over every constructed
# carrier; a violation is an internal error.
PROFILE_IMPLICATIONS = [
    (("prequantale",), ("near_prequantale", "sup_magma", "residuated", "with_annihilator")),
    (("near_prequantale",), ("semiprequantale", "near_sup_magma", "near_residuated", "scott_topological")),
    (("semiprequantale",), ("multiplicative_semilattice", "bounded_complete")),
    (("prequantic_semilattice",), ("multiplicative_semilattice", "with_annihilator")),
    (("multiplicative_semilattice", "with_annihilator"), ("prequantic_semilattice",)),
    (("near_prequantale", "with_annihilator"), ("prequantale",)),
    (("residuated",), ("near_residuated",)),
    (("sup_magma",), ("near_sup_magma",)),
    (("near_sup_magma",), ("dcpo_magma", "bounded_complete", "bounded_above")),
    (("bounded_complete", "bounded_above"), ("near_sup_magma",)),
    (("prequantale",), ("prequantic_semilattice",)),
]


@dataclass(frozen=True)
class Residual:
    """left = x/a (largest z with z*a <= x), right = a\\x (largest z with a*z <= x)."""

    left: Optional[int]
    right: Optional[int]


@dataclass(frozen=True)
class DistinguishedSets:
    units: tuple          # U(M): both translations are poset automorphisms
    invertible: tuple     # Inv(M)
    idempotents: tuple
    r_set: Optional[tuple]  # R(M) = idempotents >= 1, None when no unit
    k_is_submagma: bool


class OrderedMagma:
    """A finite poset plus an order-compatible multiplication table.

    The unit and annihilator are detected, never declared, so derived
    structures cannot carry stale flags.
    """

    kind = "finite"

    def __init__(self, poset: FinitePoset, mul: Sequence[Sequence[int]], name: str = ""):
        n = poset.n
        if len(mul) != n or any(len(row) != n for row in mul):
            raise StructureError("multiplication table shape does not match carrier")
        for row in mul:
            poset.check_ids(row)
        self.poset = poset
        self.mul = tuple(tuple(row) for row in mul)
        self.name = name
        self._validate_compat()
        self.unit = self._find_unit()
        self.annihilator = self._find_annihilator()

    def _validate_compat(self):
        p, mul, n = self.poset, self.mul, self.poset.n
        for x in range(n):
            for x2 in bits(p.up[x]):
                rx, rx2 = mul[x], mul[x2]
                for y in range(n):
                    if not p.leq(rx[y], rx2[y]):
                        raise StructureError(
                            f"multiplication not order-compatible: {x} <= {x2} "
                            f"but not {rx[y]} <= {rx2[y]} (right factor {y})"
                        )
                    if not p.leq(mul[y][x], mul[y][x2]):
                        raise StructureError(
                            f"multiplication not order-compatible: {x} <= {x2} "
                            f"but not {mul[y][x]} <= {mul[y][x2]} (left factor {y})"
                        )

    def _find_unit(self) -> Optional[int]:
        for u in range(self.poset.n):
            if all(self.mul[u][x] == x and self.mul[x][u] == x for x in range(self.poset.n)):
                return u
        return None

    def _find_annihilator(self) -> Optional[int]:
        b = self.poset.bottom
        if b is None:
            return None
        if all(self.mul[b][x] == b and self.mul[x][b] == b for x in range(self.poset.n)):
            return b
        return None

    # -- plumbing ------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.poset.n

    def op(self, x: int, y: int) -> int:
        return self.mul[x][y]

    def leq(self, x: int, y: int) -> bool:
        return self.poset.leq(x, y)

    def label(self, x: int) -> str:
        return self.poset.labels[x]

    def __repr__(self):
        return f"OrderedMagma({self.name or self.n})"

    def __eq__(self, other):
        return (
            isinstance(other, OrderedMagma)
            and self.poset == other.poset
            and self.mul == other.mul
        )

    def __hash__(self):
        return hash((self.poset, self.mul))

    # -- classification ------------------------------------------------------

    @cached_property
    def profile(self) -> ClassificationProfile:
        return classify(self)

    def complex_mul_mask(self, xmask: int, ymask: int) -> int:
        """Elementwise product set XY as a mask."""
        out = 0
        for x in bits(xmask):
            row = self.mul[x]
            for y in bits(ymask):
                out |= 1 << row[y]
        return out

    def submagma_closure(self, mask: int) -> int:
        """Smallest multiplication-closed superset of mask."""
        while True:
            grown = mask | self.complex_mul_mask(mask, mask)
            if grown == mask:
                return mask
            mask = grown

    def translations(self):
        """All left and right translation tables L_a, R_a."""
        n = self.n
        out = []
        for a in range(n):
            out.append(tuple(self.mul[a][x] for x in range(n)))
            out.append(tuple(self.mul[x][a] for x in range(n)))
        return out


def residual(m: OrderedMagma, x: int, a: int) -> Residual:
    """Left and right residuals computed by scan of the defining sets; lazy
    carriers answer through their residual rule when they carry one."""
    if not isinstance(m, OrderedMagma):
        rule = getattr(m, "residual", None)
        if rule is None:
            from .errors import UndecidableFamily

            raise UndecidableFamily("residuals on lazy carriers need a residual rule")
        value = rule(x, a)
        # Both shipped lazy carriers are commutative.
        return Residual(value, value)
    p = m.poset
    left_set = p.mask_of([z for z in range(m.n) if p.leq(m.op(z, a), x)])
    right_set = p.mask_of([z for z in range(m.n) if p.leq(m.op(a, z), x)])
    left = p.greatest_of(left_set) if left_set else None
    right = p.greatest_of(right_set) if right_set else None
    res = Residual(left, right)
    if left is not None:
        if not p.leq(m.op(left, a), x):
            raise InternalCheckError("residual adjunction violated on the left")
    if right is not None:
        if not p.leq(m.op(a, right), x):
            raise InternalCheckError("residual adjunction violated on the right")
    return res


def _residuation_status(m: OrderedMagma):
    """(residuated, near_residuated) by direct scan of every residual set."""
    p = m.poset
    residuated = True
    near = True
    for x in range(m.n):
        for a in range(m.n):
            lset = [z for z in range(m.n) if p.leq(m.op(z, a), x)]
            rset = [z for z in range(m.n) if p.leq(m.op(a, z), x)]
            for s in (lset, rset):
                if not s:
                    residuated = False
                elif p.greatest_of(p.mask_of(s)) is None:
                    residuated = False
                    near = False
    return residuated, near


def _translations_preserve_existing_sups(m: OrderedMagma, nonempty_only: bool) -> bool:
    """a(sup X) == sup(aX) for every X whose sup exists (exhaustive up to cap)."""
    p = m.poset
    if m.n > EXHAUSTIVE_CAP:
        return _translations_preserve_pair_sups(m, nonempty_only)
    start = 1 if nonempty_only else 0
    for mask in range(start, 1 << m.n):
        s = p.sup_mask(mask)
        if s is None:
            continue
        for a in range(m.n):
            left = m.complex_mul_mask(1 << a, mask)
            if p.sup_mask(left) != m.op(a, s):
                return False
            right = m.complex_mul_mask(mask, 1 << a)
            if p.sup_mask(right) != m.op(s, a):
                return False
    return True


def _translations_preserve_pair_sups(m: OrderedMagma, nonempty_only: bool) -> bool:
    """Pairwise (plus empty-set) form; equivalent on finite carriers by induction."""
    p = m.poset
    for a in range(m.n):
        for x in range(m.n):
            for y in range(x, m.n):
                s = p.join(x, y)
                if s is None:
                    continue
                if m.op(a, s) != p.join(m.op(a, x), m.op(a, y)):
                    return False
                if m.op(s, a) != p.join(m.op(x, a), m.op(y, a)):
                    return False
        if not nonempty_only:
            b = p.bottom
            if b is not None and (m.op(a, b) != b or m.op(b, a) != b):
                return False
    return True


def _distributes_over_finite_nonempty(m: OrderedMagma) -> bool:
    """Multiplicative-semilattice law a(x v y) = ax v ay, (x v y)a = xa v ya."""
    p = m.poset
    if not p.flags.join_semilattice:
        return False
    for a in range(m.n):
        row = m.mul[a]
        for x in range(m.n):
            for y in range(x, m.n):
                j = p.join(x, y)
                if row[j] != p.join(row[x], row[y]):
                    return False
                if m.op(j, a) != p.join(m.op(x, a), m.op(y, a)):
                    return False
    return True


def classify(m: OrderedMagma) -> ClassificationProfile:
    """Full Table-style classification with theorem cross-validation."""
    p = m.poset
    pf = p.flags
    n = m.n

    associative = all(
        m.op(m.op(x, y), z) == m.op(x, m.op(y, z))
        for x in range(n)
        for y in range(n)
        for z in range(n)
    )
    commutative = all(m.op(x, y) == m.op(y, x) for x in range(n) for y in range(n))
    unital = m.unit is not None
    with_annihilator = m.annihilator is not None

    residuated, near_residuated = _residuation_status(m)

    mult_semilattice = _distributes_over_finite_nonempty(m)
    # On a finite carrier every nonempty subset is finite and a join
    # semilattice has a top, so the near-prequantale and semiprequantale
    # conditions both reduce to the multiplicative-semilattice law.
    near_prequantale = mult_semilattice
    semiprequantale = mult_semilattice
    prequantic_semilattice = mult_semilattice and with_annihilator
    prequantale = near_prequantale and with_annihilator

    # Cross-validation: each equality below is a proposition about ordered
    # magmas, so a mismatch is a library bug.
    if near_prequantale != (pf.near_sup_complete and near_residuated):
        raise InternalCheckError(
            f"near-prequantale characterizations disagree on {m.name or m}"
        )
    if prequantale != (pf.complete and residuated):
        raise InternalCheckError(f"prequantale characterizations disagree on {m.name or m}")
    if n <= EXHAUSTIVE_CAP:
        scan_np = pf.near_sup_complete and _translations_preserve_existing_sups(m, True)
        scan_p = pf.complete and _translations_preserve_existing_sups(m, False)
        if scan_np != near_prequantale or scan_p != prequantale:
            raise InternalCheckError(
                f"subset-scan classification disagrees with pairwise on {m.name or m}"
            )

    profile = ClassificationProfile(
        sup_magma=pf.complete,
        near_sup_magma=pf.near_sup_complete,
        dcpo_magma=True,
        bounded_complete=pf.bounded_complete,
        bounded_above=pf.bounded_above,
        with_annihilator=with_annihilator,
        prequantale=prequantale,
        near_prequantale=near_prequantale,
        semiprequantale=semiprequantale,
        prequantic_semilattice=prequantic_semilattice,
        multiplicative_semilattice=mult_semilattice,
        scott_topological=True,
        residuated=residuated,
        near_residuated=near_residuated,
        associative=associative,
        commutative=commutative,
        unital=unital,
        precoherent=True,
    )
    check_profile_implications(profile, m.name)
    return profile


def check_profile_implications(profile: ClassificationProfile, name: str = ""):
    for antecedents, consequents in PROFILE_IMPLICATIONS:
        if all(getattr(profile, a) for a in antecedents):
            for c in consequents:
                if not getattr(profile, c):
                    raise InternalCheckError(
                        f"implication diagram violated on {name or 'carrier'}: "
                        f"{antecedents} => {c}"
                    )


def is_scott_topological(m) -> bool:
    """Finite directed sets have maxima, so order-compatibility already decides
    this; lazy carriers answer from their declared continuity flag."""
    if isinstance(m, OrderedMagma):
        return True
    return bool(m.declared_profile.get("scott_topological", False))


def is_sup_spanning(m: OrderedMagma, sigma: Iterable[int]) -> bool:
    """xy = sup{ay : a in Sigma, a <= x} = sup{xb : b in Sigma, b <= y} for all x, y."""
    p = m.poset
    smask = p.mask_of(sigma)
    for x in range(m.n):
        below_x = smask & p.down[x]
        for y in range(m.n):
            below_y = smask & p.down[y]
            target = m.op(x, y)
            left = p.mask_of([m.op(a, y) for a in bits(below_x)])
            if p.sup_mask(left) != target:
                return False
            right = p.mask_of([m.op(x, b) for b in bits(below_y)])
            if p.sup_mask(right) != target:
                return False
    return True


def distinguished_sets(m: OrderedMagma, require_unit_for_r: bool = False) -> DistinguishedSets:
    """U(M), Inv(M), Idem(M), R(M) and whether K(M) is a submagma."""
    p, n = m.poset, m.n
    units = []
    for u in range(n):
        lt = tuple(m.op(u, x) for x in range(n))
        rt = tuple(m.op(x, u) for x in range(n))
        if _is_poset_automorphism(p, lt) and _is_poset_automorphism(p, rt):
            units.append(u)
    invertible = []
    for u in range(n):
        for v in range(n):
            if all(m.op(v, m.op(u, x)) == x and m.op(u, m.op(v, x)) == x for x in range(n)) and all(
                m.op(m.op(x, u), v) == x and m.op(m.op(x, v), u) == x for x in range(n)
            ):
                invertible.append(u)
                break
    if not set(invertible) <= set(units):
        raise InternalCheckError("Inv(M) not contained in U(M)")
    idem = [x for x in range(n) if m.op(x, x) == x]
    if m.unit is not None:
        r_set = tuple(x for x in idem if p.leq(m.unit, x))
    elif require_unit_for_r:
        raise NoUnit("R(M) requested on a carrier without unit")
    else:
        r_set = None
    # Finite carriers: K(M) = M, trivially a submagma.
    return DistinguishedSets(tuple(units), tuple(invertible), tuple(idem), r_set, True)


def _is_poset_automorphism(p: FinitePoset, table) -> bool:
    if len(set(table)) != p.n:
        return False
    inv = [0] * p.n
    for i, t in enumerate(table):
        inv[t] = i
    for i in range(p.n):
        for j in bits(p.up[i]):
            if not p.leq(table[i], table[j]):
                return False
            if not p.leq(inv[i], inv[j]):
                return False
    return True


def is_cyclic_element(m: OrderedMagma, a: int):
    """xy <= a implies yx <= a; counterexamples reported in lexicographic order."""
    p = m.poset
    for x in range(m.n):
        for y in range(m.n):
            if p.leq(m.op(x, y), a) and not p.leq(m.op(y, x), a):
                return False, (x, y)
    return True, None


# -- derived carriers --------------------------------------------------------


def adjoin_annihilator(m: OrderedMagma, label: str = "0") -> OrderedMagma:
    """M_0 = M with a new absorbing bottom; the profile is re-derived, not patched."""
    n = m.n
    rows = [[m.leq(i, j) for j in range(n)] + [False] for i in range(n)]
    rows.append([True] * (n + 1))
    poset = FinitePoset(rows, list(m.poset.labels) + [label])
    mul = [[m.op(i, j) for j in range(n)] + [n] for i in range(n)]
    mul.append([n] * (n + 1))
    return OrderedMagma(poset, mul, name=f"{m.name}+0" if m.name else "adjoin0")


def adjoin_top(m: OrderedMagma, label: str = "inf") -> OrderedMagma:
    """M with a new absorbing top adjoined."""
    n = m.n
    rows = [[m.leq(i, j) for j in range(n)] + [True] for i in range(n)]
    rows.append([False] * n + [True])
    poset = FinitePoset(rows, list(m.poset.labels) + [label])
    mul = [[m.op(i, j) for j in range(n)] + [n] for i in range(n)]
    mul.append([n] * (n + 1))
    return OrderedMagma(poset, mul, name=f"{m.name}+top" if m.name else "adjointop")


# -- morphisms ----------------------------------------------------------------


class MagmaMorphism:
    """A verified structure-preserving map between two finite ordered magmas."""

    def __init__(self, source: OrderedMagma, target: OrderedMagma, table: Sequence[int]):
        if len(table) != source.n:
            raise StructureError("morphism table length does not match source")
        target.poset.check_ids(table)
        self.source = source
        self.target = target
        self.table = tuple(table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def image_mask(self) -> int:
        out = 0
        for t in self.table:
            out |= 1 << t
        return out

    def is_order_preserving(self) -> bool:
        s, t = self.source.poset, self.target.poset
        return all(
            t.leq(self.table[i], self.table[j]) for i in range(s.n) for j in bits(s.up[i])
        )

    def is_magma_hom(self) -> bool:
        return all(
            self.table[self.source.op(x, y)] == self.target.op(self.table[x], self.table[y])
            for x in range(self.source.n)
            for y in range(self.source.n)
        )

    def preserves_sups(self, nonempty_only: bool) -> bool:
        """Exhaustive check that f(sup X) = sup f(X) whenever sup X exists."""
        from .errors import CarrierTooLarge

        sp, tp = self.source.poset, self.target.poset
        if sp.n > EXHAUSTIVE_CAP:
            raise CarrierTooLarge("morphism sup-check is exponential in the source carrier")
        start = 1 if nonempty_only else 0
        for mask in range(start, 1 << sp.n):
            s = sp.sup_mask(mask)
            if s is None:
                continue
            fmask = 0
            for x in bits(mask):
                fmask |= 1 << self.table[x]
            if tp.sup_mask(fmask) != self.table[s]:
                return False
        return True

    def preserves_finite_nonempty_sups(self) -> bool:
        """Multiplicative-semilattice morphism condition; pairs suffice when all
        finite sups exist, otherwise falls back to the exhaustive scan."""
        return self.preserves_sups(nonempty_only=True)

    def compose(self, inner: "MagmaMorphism") -> "MagmaMorphism":
        if inner.target is not self.source and inner.target != self.source:
            raise StructureError("morphism composition mismatch")
        return MagmaMorphism(inner.source, self.target, [self.table[x] for x in inner.table])
