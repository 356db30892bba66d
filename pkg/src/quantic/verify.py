"""Proposition-keyed verification suites.

Each named check re-proves one result by brute force on a given carrier and
reports pass, fail, or skip (hypotheses not met / carrier too large).  The CLI
command verify-all prints the whole matrix; the test suite runs it across the
corpus.  Names follow the result labels used throughout the library's design
notes so a failure localizes immediately.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .divisorial import (
    divisorial_decomposition,
    is_simple,
    is_stable,
    stable_closure,
    star_w,
    v,
)
from .errors import (
    CarrierTooLarge,
    HypothesisNotMet,
    InternalCheckError,
    UndecidableFamily,
)
from .finitary import star_f, verify_klattice
from .idl import down_map_on_powerset, idl, roundtrip_checks
from .instances import POWERSET_BASE_CAP
from .magma import (
    MagmaMorphism,
    OrderedMagma,
    adjoin_annihilator,
    distinguished_sets,
    is_sup_spanning,
)
from .nucleus import (
    ENUMERATION_CAP,
    MonotoneMap,
    composition_join_check,
    closure_from_preclosure,
    d_map,
    enumerate_closures,
    enumerate_nuclei,
    is_closure,
    is_nucleus,
    nuclei_join,
    nuclei_meet,
    nucleus_lattice,
    nucleus_of_morphism,
    one_bracket_map,
    r_set_mask,
    transportable_mask,
    unit_part,
)
from .poset import bits

SAMPLE_MAPS = 400
SEED = 1251


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str      # pass | fail | skip
    detail: str


Check = Tuple[str, Callable[[OrderedMagma], Tuple[str, str]]]
_REGISTRY: List[Check] = []


def register(name: str):
    def deco(fn):
        _REGISTRY.append((name, fn))
        return fn

    return deco


def _skip(reason: str) -> Tuple[str, str]:
    return "skip", reason


def _ok(detail: str = "") -> Tuple[str, str]:
    return "pass", detail


def _fail(detail: str) -> Tuple[str, str]:
    return "fail", detail


def _small(m: OrderedMagma, cap: int = ENUMERATION_CAP) -> bool:
    return m.n <= cap


def _random_maps(m: OrderedMagma, k: int = SAMPLE_MAPS):
    rng = random.Random(SEED + m.n)
    n = m.n
    for _ in range(k):
        yield MonotoneMap(m, tuple(rng.randrange(n) for _ in range(n)))


@register("closureprop1")
def _check_closureprop1(m: OrderedMagma):
    """The three nucleus conditions agree on closures; is_nucleus cross-checks
    them internally, so running it over samples and closures is the proof."""
    if not _small(m):
        return _skip("carrier too large")
    try:
        for s in _random_maps(m):
            is_nucleus(m, s)
        for s in enumerate_closures(m):
            is_nucleus(m, s)
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok("random sample plus all closures")


@register("closureprop1a")
def _check_closureprop1a(m: OrderedMagma):
    if m.unit is None:
        return _skip("needs a unital carrier")
    if not _small(m):
        return _skip("carrier too large")
    try:
        for s in _random_maps(m):
            is_nucleus(m, s)
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok("single-axiom forms agree on the random sample")


def _spanning_subset(m: OrderedMagma):
    """A small sup-spanning subset when one exists: sup-irreducible elements,
    falling back to the whole carrier (always sup-spanning)."""
    p = m.poset
    irreducible = []
    for x in range(m.n):
        strictly_below = p.down[x] & ~(1 << x)
        if p.sup_mask(strictly_below) != x:
            irreducible.append(x)
    if irreducible and is_sup_spanning(m, irreducible):
        return irreducible
    return list(range(m.n))


@register("closureprop2")
def _check_closureprop2(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    p = m.poset
    sigma = _spanning_subset(m)
    for s in enumerate_closures(m):
        direct = is_nucleus(m, s)
        via_sigma = all(
            p.leq(m.op(a, s.table[x]), s.table[m.op(a, x)])
            and p.leq(m.op(s.table[x], a), s.table[m.op(x, a)])
            for a in sigma
            for x in range(m.n)
        )
        if direct != via_sigma:
            return _fail(f"sup-spanning criterion missed closure {s.table}")
    return _ok(f"sigma of size {len(sigma)}")


@register("closureprop3")
def _check_closureprop3(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    inv = distinguished_sets(m).invertible
    for s in enumerate_nuclei(m):
        tmask = transportable_mask(m, s)
        if any(not ((tmask >> u) & 1) for u in inv):
            return _fail(f"invertible element not transportable through {s.table}")
    return _ok(f"|Inv| = {len(inv)}")


@register("joinspan")
def _check_joinspan(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    for s in enumerate_closures(m):
        tmask = transportable_mask(m, s)
        if is_sup_spanning(m, list(bits(tmask))) and not is_nucleus(m, s):
            return _fail(f"closure {s.table} has sup-spanning transportables but no nucleus")
    return _ok()


@register("quantales")
def _check_quantales(m: OrderedMagma):
    prof = m.profile
    if prof.prequantale != (prof.sup_magma and prof.residuated):
        return _fail("prequantale flag disagrees with complete+residuated")
    return _ok()


@register("nearprequantales")
def _check_nearprequantales(m: OrderedMagma):
    if m.n + 1 > 64:
        return _skip("carrier too large")
    with_zero = adjoin_annihilator(m)
    if m.profile.near_prequantale != with_zero.profile.prequantale:
        return _fail("M near prequantale must match M+0 prequantale")
    return _ok()


@register("starlemma")
def _check_starlemma(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    from .nucleus import quotient

    pf = m.poset.flags
    for s in enumerate_nuclei(m):
        q = quotient(m, s)  # asserts sup-preserving corestriction internally
        qf = q.magma.poset.flags
        for flag in ("complete", "near_sup_complete", "bounded_complete",
                     "join_semilattice", "meet_semilattice"):
            if getattr(pf, flag) and not getattr(qf, flag):
                return _fail(f"quotient lost poset property {flag}")
    return _ok()


@register("CSTstar")
def _check_cststar(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    from .nucleus import quotient

    try:
        for s in enumerate_nuclei(m):
            quotient(m, s)
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok()


@register("supremark")
def _check_supremark(m: OrderedMagma):
    if not m.profile.near_prequantale or not _small(m):
        return _skip("needs a small near prequantale")
    from .nucleus import quotient

    for s in enumerate_nuclei(m):
        q = quotient(m, s)
        table = [q.to_quotient[s.table[x]] for x in range(m.n)]
        f = MagmaMorphism(m, q.magma, table)
        recovered = nucleus_of_morphism(f)
        if recovered.table != s.table:
            return _fail(f"nucleus of its own corestriction is not itself: {s.table}")
    return _ok()


@register("preclosurelemma")
def _check_preclosurelemma(m: OrderedMagma):
    if m.poset.top is None or not _small(m):
        return _skip("needs a bounded-above small carrier")
    p = m.poset
    rng = random.Random(SEED)
    produced = 0
    for _ in range(200):
        table = []
        for x in range(m.n):
            ups = list(bits(p.up[x]))
            table.append(rng.choice(ups))
        s = MonotoneMap(m, table)
        if not s.is_order_preserving:
            continue
        produced += 1
        star = closure_from_preclosure(s)
        if not is_closure(star):
            return _fail("iterated preclosure is not a closure")
        fix = s.fixed_mask()
        for x in range(m.n):
            if star.table[x] != p.least_of(fix & p.up[x]):
                return _fail("hull disagrees with the fixed-point infimum formula")
    return _ok(f"{produced} random preclosures")


@register("CMC")
def _check_cmc(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    prof = m.profile
    try:
        maps = enumerate_nuclei(m)
    except CarrierTooLarge:
        return _skip("carrier too large")
    try:
        for i, s in enumerate(maps):
            for t in maps[i:]:
                met = nuclei_meet(m, [s, t])
                # The pointwise infimum must be the meet within the poset of
                # all enumerated nuclei.
                below_both = [u for u in maps if u <= s and u <= t]
                assert met.table in {u.table for u in maps}
                if any(not (u <= met) for u in below_both):
                    return _fail("pointwise meet is not the N(M) meet")
        if prof.near_prequantale or (
            prof.bounded_complete and prof.near_residuated and m.poset.top is not None
        ):
            for i, s in enumerate(maps):
                for t in maps[i:]:
                    joined = nuclei_join(m, [s, t])
                    common = s.fixed_mask() & t.fixed_mask()
                    if joined.image_mask() != common:
                        return _fail("join image is not the fixed-point intersection")
    except (InternalCheckError, HypothesisNotMet) as exc:
        return _fail(str(exc))
    return _ok(f"{len(maps)} nuclei")


@register("characterizingclosures")
def _check_characterizing(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    try:
        enumerate_nuclei(m, cross_check=True)
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok("image-set route agrees with the filter route")


@register("complemmacor")
def _check_complemmacor(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    maps = enumerate_nuclei(m)
    certified = 0
    for s in maps:
        for t in maps:
            verdict = composition_join_check(m, s, t, bound=6)
            if verdict.certified:
                certified += 1
                if verdict.matches_join is False:
                    return _fail("certified composition join mismatch")
    return _ok(f"{certified} certified pairs")


@register("dalpha")
def _check_dalpha(m: OrderedMagma):
    prof = m.profile
    if not (prof.commutative and prof.associative and prof.unital) or not _small(m):
        return _skip("needs a small ordered commutative monoid")
    p = m.poset
    rmask = r_set_mask(m)
    maps = enumerate_nuclei(m)
    for a in bits(rmask):
        da = d_map(m, a)
        if unit_part(m, da) != a:
            return _fail("unit_part after d_map is not the identity")
        for s in maps:
            if (da <= s) != p.leq(a, s.table[m.unit]):
                return _fail("Galois law d_a <= s iff a <= 1^s fails")
    return _ok(f"|R(M)| = {bin(rmask).count('1')}")


@register("RMlemma")
def _check_rmlemma(m: OrderedMagma):
    prof = m.profile
    if not prof.unital:
        return _skip("needs a unit")
    p = m.poset
    rmask = r_set_mask(m)
    relems = list(bits(rmask))
    closed = all(((rmask >> m.op(a, b)) & 1) for a in relems for b in relems)
    if not closed:
        if prof.commutative and prof.associative:
            return _fail("R(M) must be a submagma of a commutative monoid")
        return _skip("R(M) is not a submagma here")
    for a in relems:
        for b in relems:
            ab = m.op(a, b)
            join_in_r = None
            ubs = [c for c in relems if p.leq(a, c) and p.leq(b, c)]
            for c in ubs:
                if all(p.leq(c, d) for d in ubs):
                    join_in_r = c
                    break
            if ab != join_in_r:
                return _fail("multiplication on R(M) is not the join within R(M)")
    return _ok()


@register("structure2")
def _check_structure2(m: OrderedMagma):
    if not m.profile.near_sup_magma or not _small(m, 10):
        return _skip("needs a small near sup-magma")
    try:
        nucleus_lattice(m)  # asserts N=R(N) and mult = join internally via the tower helpers
    except (InternalCheckError, HypothesisNotMet) as exc:
        return _fail(str(exc))
    return _ok()


@register("1compact")
def _check_1compact(m: OrderedMagma):
    ds = distinguished_sets(m)
    kmask = m.poset.universe  # every element of a finite carrier is compact
    for u in ds.units:
        for k in range(m.n):
            if not ((kmask >> m.op(u, k)) & 1) or not ((kmask >> m.op(k, u)) & 1):
                return _fail("U(M)K(M) escaped K(M)")
    if m.unit is not None:
        one_compact = bool((kmask >> m.unit) & 1)
        u_in_k = all((kmask >> u) & 1 for u in ds.units)
        meets = any((kmask >> u) & 1 for u in ds.units)
        if not (one_compact == u_in_k == meets):
            return _fail("compact-unit equivalence fails")
    return _ok()


@register("onebracket")
def _check_onebracket(m: OrderedMagma):
    prof = m.profile
    if not (prof.unital and prof.associative and prof.near_prequantale):
        return _skip("needs a unital near quantale")
    try:
        s = one_bracket_map(m)
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok(f"image size {len(s.image())}")


@register("klattice")
def _check_klattice(m: OrderedMagma):
    if not m.profile.semiprequantale or not _small(m):
        return _skip("needs a small precoherent semiprequantale")
    for s in enumerate_nuclei(m):
        sf = star_f(m, s)
        if sf.table != s.table:
            return _fail("finitary companion moved on a finite carrier")
        verdict = verify_klattice(m, s)
        if not verdict.holds:
            return _fail(verdict.detail)
    return _ok()


@register("Nf")
def _check_nf(m: OrderedMagma):
    """Joins of (finitary) nuclei match the supremum over the composition monoid."""
    if not m.profile.near_prequantale or not _small(m):
        return _skip("needs a small near prequantale")
    p = m.poset
    maps = enumerate_nuclei(m)
    for i, s in enumerate(maps):
        for t in maps[i:]:
            joined = nuclei_join(m, [s, t])
            monoid = {tuple(range(m.n))}
            frontier = [tuple(range(m.n))]
            while frontier:
                nxt = []
                for f in frontier:
                    for g in (s.table, t.table):
                        h = tuple(g[f[x]] for x in range(m.n))
                        if h not in monoid:
                            monoid.add(h)
                            nxt.append(h)
                frontier = nxt
            for x in range(m.n):
                orbit = [f[x] for f in monoid]
                if p.sup(orbit) != joined.table[x]:
                    return _fail("composition-monoid supremum misses the join")
    return _ok()


@register("downarrowlemma")
def _check_downarrow(m: OrderedMagma):
    if not m.profile.multiplicative_semilattice or m.n > POWERSET_BASE_CAP:
        return _skip("needs a multiplicative semilattice with a tiny carrier")
    power, down_map = down_map_on_powerset(m)
    if not is_nucleus(power, down_map):
        return _fail("the down operator is not a nucleus on the nonempty power set")
    ideals = idl(m)
    if len(down_map.image()) != len(ideals.ideal_masks):
        return _fail("image of the down operator is not the ideal completion")
    return _ok()


@register("maintheorem")
def _check_maintheorem(m: OrderedMagma):
    if not m.profile.multiplicative_semilattice or not _small(m, 10):
        return _skip("needs a small multiplicative semilattice")
    try:
        roundtrip_checks(m)
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok("both round trips are isomorphisms")


@register("divprop")
def _check_divprop(m: OrderedMagma):
    if not m.profile.near_prequantale or not _small(m):
        return _skip("needs a small near prequantale")
    maps = enumerate_nuclei(m)
    for s in maps:
        divisorial_decomposition(m, s)
    for a in range(m.n):
        va = v(m, a)
        fixing = [s for s in maps if s.table[a] == a]
        if not all(s <= va for s in fixing) or va.table not in {s.table for s in fixing}:
            return _fail(f"v({a}) is not the maximum nucleus fixing {a}")
    return _ok(f"{len(maps)} nuclei decomposed")


@register("simpleprequantales")
def _check_simple(m: OrderedMagma):
    if not m.profile.near_prequantale or not _small(m):
        return _skip("needs a small near prequantale")
    try:
        rep = is_simple(m)
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok(f"simple={rep.simple} via {sorted(rep.routes)}")


@register("stabletheorem")
def _check_stabletheorem(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    maps = enumerate_nuclei(m)
    try:
        stable_maps = []
        for s in maps:
            bar = stable_closure(m, s)
            verdict = is_stable(m, s)
            if verdict:
                stable_maps.append(s)
            below = [t for t in maps if t <= s and is_stable(m, t)]
            if any(not (t <= bar) for t in below):
                return _fail("stable closure is not the coarsest stable nucleus below")
        for i, s in enumerate(stable_maps):
            for t in stable_maps[i:]:
                if not is_stable(m, nuclei_meet(m, [s, t])):
                    return _fail("meet of stable nuclei is not stable")
    except HypothesisNotMet as exc:
        return _skip(str(exc))
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok(f"{len(stable_maps)} stable among {len(maps)}")


@register("stablecor")
def _check_stablecor(m: OrderedMagma):
    if not _small(m):
        return _skip("carrier too large")
    try:
        for s in enumerate_nuclei(m):
            w = star_w(m, s)
            if w.table != stable_closure(m, s).table:
                return _fail("star_w differs from the stable closure on a finite carrier")
    except HypothesisNotMet as exc:
        return _skip(str(exc))
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok()


@register("vstrategies")
def _check_vstrategies(m: OrderedMagma):
    if not m.profile.near_prequantale or not _small(m):
        return _skip("needs a small near prequantale")
    try:
        for a in range(m.n):
            v(m, a, strategy="all")
    except InternalCheckError as exc:
        return _fail(str(exc))
    return _ok("all applicable strategies agreed on every element")


def run_all(m: OrderedMagma, names: Optional[List[str]] = None) -> List[CheckResult]:
    out = []
    for name, fn in _REGISTRY:
        if names is not None and name not in names:
            continue
        try:
            status, detail = fn(m)
        except CarrierTooLarge as exc:
            status, detail = "skip", str(exc)
        except (InternalCheckError, HypothesisNotMet) as exc:
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, status, detail))
    return out


def check_names() -> List[str]:
    return [name for name, _ in _REGISTRY]


# -- lazy carriers ----------------------------------------------------------------


def run_all_lazy(carrier) -> List[CheckResult]:
    """The applicable suites for a lazy carrier: certification bundles for the
    shipped rule maps, finitary reports, the compact-identity spot check, and
    the residual adjunction on sampled pairs."""
    from .finitary import is_finitary, star_f, verify_klattice
    from .lazy import ChainOmega, INF, UpsetsNat, chain_rule_map
    from .instances import upsets_shipped_maps

    if isinstance(carrier, UpsetsNat):
        shipped = list(upsets_shipped_maps(carrier).values())
        nuclei = [r for r in shipped if r.certificate.nucleus_witnessed]
    elif isinstance(carrier, ChainOmega):
        shipped = [
            chain_rule_map("d", lambda x: x),
            chain_rule_map("e", lambda x: INF),
            chain_rule_map("d3", lambda x: max(x, 3)),
        ]
        nuclei = shipped
    else:
        return [CheckResult("certification", "skip", f"unknown carrier {carrier!r}")]

    out = []
    bad = [r.name for r in shipped if not r.certificate.closure_witnessed]
    out.append(
        CheckResult(
            "certification",
            "fail" if bad else "pass",
            f"uncertified: {bad}" if bad else f"{len(shipped)} rule maps certified",
        )
    )
    broken = [r.name for r in shipped if not is_finitary(r).is_finitary]
    out.append(
        CheckResult(
            "finitary",
            "fail" if broken else "pass",
            f"violations: {broken}" if broken else "no violation on declared families",
        )
    )
    klattice_status, klattice_detail = "pass", []
    for r in nuclei:
        try:
            companion = star_f(carrier, r)
            verdict = verify_klattice(carrier, companion)
            if not verdict.holds:
                klattice_status = "fail"
            klattice_detail.append(f"{r.name}:{verdict.holds}")
        except (HypothesisNotMet, UndecidableFamily) as exc:  # pragma: no cover
            klattice_detail.append(f"{r.name}:skip({exc})")
    out.append(CheckResult("klattice", klattice_status, " ".join(klattice_detail)))
    rule = getattr(carrier, "residual", None)
    if rule is None:
        out.append(CheckResult("residual-adjunction", "skip", "no residual rule"))
    else:
        xs = carrier.sample(8)
        failures = 0
        for x in xs:
            for a in xs:
                w = rule(x, a)
                if w is None:
                    continue
                for z in xs:
                    if carrier.leq(carrier.op(z, a), x) != carrier.leq(z, w):
                        failures += 1
        out.append(
            CheckResult(
                "residual-adjunction",
                "fail" if failures else "pass",
                f"{failures} adjunction failures on the sample grid",
            )
        )
    return out
