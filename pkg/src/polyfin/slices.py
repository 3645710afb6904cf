"""Slice-category machinery over finite sets.

Provides the three change-of-base functors between slices (post-composition,
pullback, dependent product), distributivity pullbacks with their
terminality test, the comparison map whose invertibility characterizes
terminality, Beck-Chevalley components for commuting squares, and the
natural section triples of a distributivity pullback.

Dependent products are materialized: the carrier over a base point is the
set of section tables of the fiber.  The chosen degenerate shapes make the
identity laws strict: pulling back along an identity, or taking the
dependent product of an identity, returns its argument on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import (
    IllFormedMorphism,
    NotAPullbackAround,
    NotASection,
    NotComposable,
)
from .finset import (
    Element,
    FinFn,
    FinSetObj,
    Pair,
    PullbackSquare,
    Sect,
    check_pullback,
    compose_fn,
    identity_fn,
    mediate,
    paranoid_enabled,
)


@dataclass(frozen=True)
class SliceObj:
    """An object of the slice over arrow.cod: just an arrow into the base."""

    arrow: FinFn

    @property
    def base(self) -> FinSetObj:
        return self.arrow.cod

    @property
    def carrier(self) -> FinSetObj:
        return self.arrow.dom

    @property
    def is_terminal(self) -> bool:
        return self.arrow.is_identity


@dataclass(frozen=True)
class SliceMor:
    """A commuting triangle between two slice objects over one base."""

    src: SliceObj
    tgt: SliceObj
    mediating: FinFn

    def __post_init__(self):
        if self.src.base != self.tgt.base:
            raise IllFormedMorphism("slice morphism must stay over one base")
        if compose_fn(self.tgt.arrow, self.mediating) != self.src.arrow:
            raise IllFormedMorphism("triangle over the base does not commute")

    @property
    def is_bijective(self) -> bool:
        return self.mediating.is_bijective


def terminal_slice(base: FinSetObj) -> SliceObj:
    return SliceObj(identity_fn(base))


def sigma(f: FinFn, x: SliceObj) -> SliceObj:
    """Post-composition with f, sending a slice over f.dom to one over f.cod."""
    if x.base != f.dom:
        raise NotComposable("slice base must be the domain of f")
    return SliceObj(compose_fn(f, x.arrow))


def sigma_mor(f: FinFn, h: SliceMor) -> SliceMor:
    return SliceMor(sigma(f, h.src), sigma(f, h.tgt), h.mediating)


def delta(f: FinFn, y: SliceObj) -> tuple[SliceObj, FinFn]:
    """Pullback of a slice over f.cod along f, plus the counit leg.

    Returns (x, eps) where x lives over f.dom and eps maps x's carrier back
    to y's carrier.  Inherits the pullback normalization, so
    delta(f, 1) = (1, f) and delta(id, y) = (y, id) strictly.
    """
    if y.base != f.cod:
        raise NotComposable("slice base must be the codomain of f")
    sq = pullback_square_for_delta(f, y)
    return SliceObj(sq.proj2), sq.proj1


def pullback_square_for_delta(f: FinFn, y: SliceObj) -> PullbackSquare:
    from .finset import pullback
    return pullback(y.arrow, f)


def delta_mor(f: FinFn, h: SliceMor) -> SliceMor:
    """Image of a slice morphism under pullback along f."""
    src_sq = pullback_square_for_delta(f, h.src)
    tgt_sq = pullback_square_for_delta(f, h.tgt)
    med = mediate(tgt_sq, compose_fn(h.mediating, src_sq.proj1), src_sq.proj2)
    return SliceMor(SliceObj(src_sq.proj2), SliceObj(tgt_sq.proj2), med)


def pi(f: FinFn, x: SliceObj) -> SliceObj:
    """Dependent product of a slice over f.dom along f.

    The carrier over b consists of the section tables of x's fibers across
    f's fiber of b, encoded Pair(b, Sect(...)).  Degenerate shapes are
    strict: pi(id, x) = x and pi(f, 1) = 1.
    """
    if x.base != f.dom:
        raise NotComposable("slice base must be the domain of f")
    if f.is_identity:
        return x
    if x.arrow.is_identity:
        return terminal_slice(f.cod)
    elems = []
    for b in f.cod:
        fib = f.fiber(b)
        for combo in product(*[x.arrow.fiber(a) for a in fib]):
            elems.append(Pair(b, Sect(zip(fib, combo))))
    carrier = FinSetObj(elems)
    return SliceObj(FinFn(carrier, f.cod, [(e, e.left) for e in carrier]))


def pi_section_value(f: FinFn, x: SliceObj, elem: Element, a: Element) -> Element:
    """Value at fiber point a of the section encoded by a pi(f, x) element.

    Mirrors pi's degenerate branches, so callers never pattern-match on the
    element structure directly.
    """
    if f.is_identity:
        return elem
    if x.arrow.is_identity:
        return a
    assert isinstance(elem, Pair) and isinstance(elem.right, Sect)
    return elem.right[a]


def pi_make_element(f: FinFn, x: SliceObj, b: Element,
                    values: dict[Element, Element]) -> Element:
    """Encode a section of x over f's fiber of b as a pi(f, x) element."""
    if f.is_identity:
        return values[b]
    if x.arrow.is_identity:
        return b
    return Pair(b, Sect(values.items()))


def pi_mor(f: FinFn, h: SliceMor) -> SliceMor:
    """Image of a slice morphism under the dependent product along f."""
    src = pi(f, h.src)
    tgt = pi(f, h.tgt)
    pairs = []
    for e in src.carrier:
        b = src.arrow(e)
        values = {a: h.mediating(pi_section_value(f, h.src, e, a))
                  for a in f.fiber(b)}
        pairs.append((e, pi_make_element(f, h.tgt, b, values)))
    return SliceMor(src, tgt, FinFn(src.carrier, tgt.carrier, pairs))


@dataclass(frozen=True)
class DistPB:
    """A pullback around (f, g) presented as distributivity-pullback data.

    Shape: X --p--> Z --g--> A --f--> B with Y --r--> B and X --q--> Y,
    where the outer square (g o p, f, r, q) is a pullback.  Terminality
    among all pullbacks around (f, g) is what check_dpb_terminal decides;
    constructors of candidates are free to violate it.
    """

    around_f: FinFn
    around_g: FinFn
    X: FinSetObj
    Y: FinSetObj
    p: FinFn
    q: FinFn
    r: FinFn

    def outer_square(self) -> PullbackSquare:
        return PullbackSquare(self.X, compose_fn(self.around_g, self.p),
                              self.q, self.around_f, self.r)

    def validate_shape(self) -> None:
        f, g = self.around_f, self.around_g
        if g.cod != f.dom:
            raise NotAPullbackAround("g must land in the domain of f")
        if (self.p.dom != self.X or self.p.cod != g.dom
                or self.q.dom != self.X or self.q.cod != self.Y
                or self.r.dom != self.Y or self.r.cod != f.cod):
            raise NotAPullbackAround("arrows do not match the stated objects")
        if not self.outer_square().commutes():
            raise NotAPullbackAround("outer square does not commute")


def dist_pullback(f: FinFn, g: FinFn) -> DistPB:
    """The chosen distributivity pullback of g along f.

    Y carries pi(f, g) with r its arrow, X is the chosen pullback of r
    along f, and p evaluates the section at the fiber point.  Degenerate
    chains are the chosen strict shapes: for f an identity the result is
    (1, 1, g); for g an identity it is (1, f, 1).
    """
    from .finset import pullback
    if g.cod != f.dom:
        raise NotComposable("g must land in the domain of f")
    gslice = SliceObj(g)
    yslice = pi(f, gslice)
    sq = pullback(f, yslice.arrow)
    X, q = sq.apex, sq.proj2
    pairs = []
    for e in X:
        a = sq.proj1(e)
        y = q(e)
        pairs.append((e, pi_section_value(f, gslice, y, a)))
    p = FinFn(X, g.dom, pairs)
    return DistPB(f, g, X, yslice.carrier, p, q, yslice.arrow)


def dpb_compare(cand: DistPB, canonical: DistPB) -> tuple[FinFn, FinFn]:
    """The unique morphism of pullbacks around (f, g) into the chosen one.

    Returns (s, t) with canonical.p o s = cand.p, canonical.q o s = t o
    cand.q and canonical.r o t = cand.r.  Requires cand's outer square to
    be a pullback.
    """
    f, g = cand.around_f, cand.around_g
    gslice = SliceObj(g)
    gp = compose_fn(g, cand.p)
    locate: dict[tuple[Element, Element], Element] = {}
    for x in cand.X:
        key = (cand.q(x), gp(x))
        if key in locate:
            raise NotAPullbackAround("outer square is not a pullback")
        locate[key] = x
    t_pairs = []
    t_map: dict[Element, Element] = {}
    for y in cand.Y:
        b = cand.r(y)
        values = {}
        for a in f.fiber(b):
            x = locate.get((y, a))
            if x is None:
                raise NotAPullbackAround("outer square is not a pullback")
            values[a] = cand.p(x)
        image = pi_make_element(f, gslice, b, values)
        t_map[y] = image
        t_pairs.append((y, image))
    t = FinFn(cand.Y, canonical.Y, t_pairs)
    index = {(compose_fn(g, canonical.p)(x), canonical.q(x)): x
             for x in canonical.X}
    s_pairs = [(x, index[(gp(x), t_map[cand.q(x)])]) for x in cand.X]
    s = FinFn(cand.X, canonical.X, s_pairs)
    return s, t


def check_dpb_terminal(cand: DistPB) -> bool:
    """Decide terminality among pullbacks around (f, g).

    Terminality against the chosen distributivity pullback is equivalent to
    the canonical comparison morphism being a pair of bijections.
    """
    cand.validate_shape()
    if not check_pullback(cand.outer_square()):
        raise NotAPullbackAround("outer square is not a pullback")
    canonical = dist_pullback(cand.around_f, cand.around_g)
    s, t = dpb_compare(cand, canonical)
    return s.is_bijective and t.is_bijective


def dpb_mediate(d: DistPB, p_cand: FinFn, q_cand: FinFn,
                r_cand: FinFn) -> tuple[FinFn, FinFn]:
    """Mediating morphism from a pullback-around into a terminal d.

    The candidate (p_cand, q_cand, r_cand) must be a pullback around
    (d.around_f, d.around_g); d must be terminal.  Computed by comparing
    both into the chosen distributivity pullback and inverting d's side.
    """
    cand = DistPB(d.around_f, d.around_g, p_cand.dom, r_cand.dom,
                  p_cand, q_cand, r_cand)
    cand.validate_shape()
    canonical = dist_pullback(d.around_f, d.around_g)
    s_c, t_c = dpb_compare(cand, canonical)
    s_d, t_d = dpb_compare(d, canonical)
    if not (s_d.is_bijective and t_d.is_bijective):
        raise NotAPullbackAround("target is not a distributivity pullback")
    s = compose_fn(s_d.inverse(), s_c)
    t = compose_fn(t_d.inverse(), t_c)
    if paranoid_enabled():
        _assert_unique_dpb_mediator(d, cand, s, t)
    return s, t


def _assert_unique_dpb_mediator(d: DistPB, cand: DistPB,
                                s: FinFn, t: FinFn) -> None:
    space = (max(len(d.X), 1) ** len(cand.X)
             * max(len(d.Y), 1) ** len(cand.Y))
    if space > 100_000:
        return
    hits = 0
    for s2 in _all_fns(cand.X, d.X):
        if compose_fn(d.p, s2) != cand.p:
            continue
        for t2 in _all_fns(cand.Y, d.Y):
            if (compose_fn(d.r, t2) == cand.r
                    and compose_fn(d.q, s2) == compose_fn(t2, cand.q)):
                hits += 1
                if (s2, t2) != (s, t):
                    raise NotAPullbackAround("mediator is not unique")
    if hits != 1:
        raise NotAPullbackAround("mediator is not unique")


def _all_fns(dom: FinSetObj, cod: FinSetObj):
    if len(dom) == 0:
        yield FinFn(dom, cod, [])
        return
    for values in product(cod.elements, repeat=len(dom)):
        yield FinFn(dom, cod, list(zip(dom.elements, values)))


def delta_component(d: DistPB, z: SliceObj) -> SliceMor:
    """Component at z of the comparison sum-of-products -> product-of-sums.

    Maps sigma_r pi_q delta_p z to pi_f sigma_g z by re-indexing sections
    through the outer pullback of d.  A bijection at every z exactly when
    d is terminal.
    """
    f, g = d.around_f, d.around_g
    if z.base != g.dom:
        raise NotComposable("z must live over the domain of g")
    d.validate_shape()
    dz, eps_p = delta(d.p, z)
    piq = pi(d.q, dz)
    lhs = sigma(d.r, piq)
    sg = sigma(g, z)
    rhs = pi(f, sg)
    gp = compose_fn(g, d.p)
    locate: dict[tuple[Element, Element], Element] = {}
    for x in d.X:
        key = (d.q(x), gp(x))
        if key in locate:
            raise NotAPullbackAround("outer square is not a pullback")
        locate[key] = x
    pairs = []
    for e in piq.carrier:
        y = piq.arrow(e)
        b = d.r(y)
        values = {}
        for a in f.fiber(b):
            x = locate.get((y, a))
            if x is None:
                raise NotAPullbackAround("outer square is not a pullback")
            v = pi_section_value(d.q, dz, e, x)
            values[a] = eps_p(v)
        pairs.append((e, pi_make_element(f, sg, b, values)))
    return SliceMor(lhs, rhs, FinFn(lhs.carrier, rhs.carrier, pairs))


@dataclass(frozen=True)
class CommutingSquare:
    """A commuting square: right o top = bottom o left."""

    top: FinFn
    left: FinFn
    right: FinFn
    bottom: FinFn

    def __post_init__(self):
        if (self.top.dom != self.left.dom or self.top.cod != self.right.dom
                or self.left.cod != self.bottom.dom
                or self.right.cod != self.bottom.cod):
            raise NotComposable("square boundaries do not match")
        if compose_fn(self.right, self.top) != compose_fn(self.bottom, self.left):
            raise IllFormedMorphism("square does not commute")

    def is_pullback(self) -> bool:
        sq = PullbackSquare(self.top.dom, self.top, self.left,
                            self.right, self.bottom)
        return check_pullback(sq)


def left_bc_component(square: CommutingSquare, x: SliceObj) -> SliceMor:
    """Component at x of the sum-then-pullback comparison of a square.

    For the square with top f, left h, right k, bottom g, this is
    sigma_f delta_h x -> delta_k sigma_g x; a bijection for every x
    exactly when the square is a pullback.
    """
    f, h, k, g = square.top, square.left, square.right, square.bottom
    if x.base != h.cod:
        raise NotComposable("x must live over the lower-left object")
    dh, eps_h = delta(h, x)
    lhs = sigma(f, dh)
    sg = sigma(g, x)
    tgt_sq = pullback_square_for_delta(k, sg)
    med = mediate(tgt_sq, eps_h, compose_fn(f, dh.arrow))
    return SliceMor(lhs, SliceObj(tgt_sq.proj2), med)


def right_bc_component(square: CommutingSquare, x: SliceObj) -> SliceMor:
    """Component at x of the pullback-then-product comparison of a square.

    For the square with top f, left h, right k, bottom g, this maps
    delta_g pi_k x to pi_h delta_f x for x over the top-right object.
    Built from two distributivity pullbacks and the induced comparison.
    """
    f, h, k, g = square.top, square.left, square.right, square.bottom
    if x.base != k.dom:
        raise NotComposable("x must live over the top-right object")
    dpb1 = dist_pullback(k, x.arrow)
    src_sq = pullback_square_for_delta(g, SliceObj(dpb1.r))
    src = SliceObj(src_sq.proj2)
    dfx_sq = pullback_square_for_delta(f, x)
    dfx = SliceObj(dfx_sq.proj2)
    dpb2 = dist_pullback(h, dfx.arrow)
    tgt = SliceObj(dpb2.r)
    top_sq = pullback_square_for_delta(dpb1.p, SliceObj(dfx_sq.proj1))
    a4 = top_sq.apex
    to_a2 = top_sq.proj1
    to_b3 = top_sq.proj2
    u = mediate(src_sq, compose_fn(dpb1.q, to_b3),
                compose_fn(h, compose_fn(dfx.arrow, to_a2)))
    _, t = dpb_mediate(dpb2, to_a2, u, src.arrow)
    return SliceMor(src, tgt, t)


def induce_sections(d: DistPB, s1: FinFn | None = None,
                    s3: FinFn | None = None) -> tuple[FinFn, FinFn, FinFn]:
    """Natural section triple of a distributivity pullback from one seed.

    Given a section s1 of g, or a section s3 of r, produces the unique
    triple (s1, s2, s3) of sections of g, g o p and r with s1 = p o s2 and
    q o s2 = s3 o f.
    """
    f, g = d.around_f, d.around_g
    if (s1 is None) == (s3 is None):
        raise NotASection("provide exactly one of s1, s3")
    if s1 is not None:
        if s1.dom != g.cod or s1.cod != g.dom or not compose_fn(g, s1).is_identity:
            raise NotASection("seed is not a section of g")
        s2, s3_out = dpb_mediate(d, s1, f, identity_fn(f.cod))
        return compose_fn(d.p, s2), s2, s3_out
    if s3.dom != d.r.cod or s3.cod != d.Y or not compose_fn(d.r, s3).is_identity:
        raise NotASection("seed is not a section of r")
    outer = d.outer_square()
    s2 = mediate(outer, identity_fn(f.dom), compose_fn(s3, f))
    return compose_fn(d.p, s2), s2, s3


def slice_homset(x: SliceObj, y: SliceObj) -> list[SliceMor]:
    """All slice morphisms x -> y, enumerated in canonical order."""
    if x.base != y.base:
        raise NotComposable("slices live over different bases")
    per_elem = [y.arrow.fiber(x.arrow(e)) for e in x.carrier]
    out = []
    for combo in product(*per_elem):
        fn = FinFn(x.carrier, y.carrier, list(zip(x.carrier.elements, combo)))
        out.append(SliceMor(x, y, fn))
    return out


def sigma_delta_transpose(f: FinFn, x: SliceObj, y: SliceObj,
                          m: SliceMor) -> SliceMor:
    """Adjunct of m : sigma_f x -> y across post-composition -| pullback."""
    sq = pullback_square_for_delta(f, y)
    med = mediate(sq, m.mediating, x.arrow)
    return SliceMor(x, SliceObj(sq.proj2), med)


def delta_pi_transpose(f: FinFn, y: SliceObj, x: SliceObj,
                       m: SliceMor) -> SliceMor:
    """Adjunct of m : delta_f y -> x across pullback -| dependent product."""
    sq = pullback_square_for_delta(f, y)
    index = {(sq.proj1(e), sq.proj2(e)): e for e in sq.apex}
    target = pi(f, x)
    pairs = []
    for e in y.carrier:
        b = y.arrow(e)
        values = {a: m.mediating(index[(e, a)]) for a in f.fiber(b)}
        pairs.append((e, pi_make_element(f, x, b, values)))
    return SliceMor(y, target, FinFn(y.carrier, target.carrier, pairs))


def slice_pullback(m1: SliceMor, m2: SliceMor) -> tuple[SliceMor, SliceMor]:
    """Pullback of a cospan in a slice category, computed on carriers."""
    from .finset import pullback
    if m1.tgt != m2.tgt:
        raise NotComposable("cospan legs must share a target slice")
    sq = pullback(m1.mediating, m2.mediating)
    apex = SliceObj(compose_fn(m1.src.arrow, sq.proj1))
    return (SliceMor(apex, m1.src, sq.proj1), SliceMor(apex, m2.src, sq.proj2))
