"""Polynomial diagrams over finite sets and their bicategorical composition.

A polynomial from X to Y is a diagram X <- A -> B -> Y.  Composition of a
composable sequence is the associated polynomial of the terminal subdivided
composite over it, built here by repeatedly extending on the right; the
left extension is also provided and agrees up to unique isomorphism.

Because chosen pullbacks and distributivity pullbacks are normalized at
identities, identity polynomials are strict units for this composition,
span composites coincide on the nose with span composition by pullback,
and composites with a companion (lft) on the left or a conjoint (rgt) on
the right reduce to the one-line formulas without special-casing.

Comparisons between bracketings are computed structurally: every iterated
binary composite is flattened to a subdivided composite over the full
sequence and mediated into the terminal one, never searched for.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product

from .errors import IllFormedPolynomial, NotCartesian, NotComposable
from .finset import (
    FinFn,
    FinSetObj,
    PullbackSquare,
    check_pullback,
    compose_fn,
    identity_fn,
    mediate,
    pullback,
)
from .slices import (
    DistPB,
    SliceObj,
    dist_pullback,
    dpb_mediate,
)


@dataclass(frozen=True)
class Polynomial:
    """Bridge diagram src <-p1- mid_src -p2-> mid_tgt -p3-> tgt."""

    src: FinSetObj
    mid_src: FinSetObj
    mid_tgt: FinSetObj
    tgt: FinSetObj
    p1: FinFn
    p2: FinFn
    p3: FinFn

    @property
    def is_span(self) -> bool:
        return self.p2.is_identity

    @property
    def is_identity(self) -> bool:
        return self.p1.is_identity and self.p2.is_identity and self.p3.is_identity


def mk_poly(p1: FinFn, p2: FinFn, p3: FinFn) -> Polynomial:
    """Validated polynomial from its three legs."""
    if p1.dom != p2.dom:
        raise IllFormedPolynomial("p1 and p2 must share a domain")
    if p2.cod != p3.dom:
        raise IllFormedPolynomial("p2 must land in the domain of p3")
    return Polynomial(p1.cod, p1.dom, p2.cod, p3.cod, p1, p2, p3)


def identity_poly(obj: FinSetObj) -> Polynomial:
    one = identity_fn(obj)
    return Polynomial(obj, obj, obj, obj, one, one, one)


def embed_map(f: FinFn, side: str) -> Polynomial:
    """Companion (side="left") or conjoint (side="right") span of a map.

    lft f is the span (1, 1, f); rgt f is (f, 1, 1).
    """
    one = identity_fn(f.dom)
    if side == "left":
        return Polynomial(f.dom, f.dom, f.dom, f.cod, one, one, f)
    if side == "right":
        return Polynomial(f.cod, f.dom, f.dom, f.dom, f, one, one)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def span_poly(left: FinFn, right: FinFn) -> Polynomial:
    """The span with apex left.dom = right.dom and identity middle."""
    if left.dom != right.dom:
        raise IllFormedPolynomial("span legs must share an apex")
    return Polynomial(left.cod, left.dom, right.dom, right.cod,
                      left, identity_fn(left.dom), right)


@dataclass(frozen=True)
class CartesianMorphism:
    """A pair of maps between parallel polynomials.

    Stored leniently; is_cartesian decides whether boundaries agree and
    the middle square is a pullback.
    """

    src_poly: Polynomial
    tgt_poly: Polynomial
    f0: FinFn
    f1: FinFn

    def middle_square(self) -> PullbackSquare:
        return PullbackSquare(self.src_poly.mid_src, self.src_poly.p2,
                              self.f0, self.f1, self.tgt_poly.p2)

    @property
    def is_iso(self) -> bool:
        return self.f0.is_bijective and self.f1.is_bijective

    def validate(self) -> None:
        if not is_cartesian(self):
            raise NotCartesian("morphism fails the cartesian conditions")


def is_cartesian(m: CartesianMorphism) -> bool:
    """True iff m is parallel, commutes, and has a pullback middle square."""
    p, q = m.src_poly, m.tgt_poly
    if p.src != q.src or p.tgt != q.tgt:
        return False
    if m.f0.dom != p.mid_src or m.f0.cod != q.mid_src:
        return False
    if m.f1.dom != p.mid_tgt or m.f1.cod != q.mid_tgt:
        return False
    if compose_fn(q.p1, m.f0) != p.p1 or compose_fn(q.p3, m.f1) != p.p3:
        return False
    if compose_fn(q.p2, m.f0) != compose_fn(m.f1, p.p2):
        return False
    return check_pullback(m.middle_square())


def identity_cartesian(p: Polynomial) -> CartesianMorphism:
    return CartesianMorphism(p, p, identity_fn(p.mid_src), identity_fn(p.mid_tgt))


def vcompose(m2: CartesianMorphism, m1: CartesianMorphism) -> CartesianMorphism:
    """Composite in a hom category: first m1, then m2."""
    if m1.tgt_poly != m2.src_poly:
        raise NotComposable("morphisms are not composable in the hom category")
    return CartesianMorphism(m1.src_poly, m2.tgt_poly,
                             compose_fn(m2.f0, m1.f0), compose_fn(m2.f1, m1.f1))


def cartesian_inverse(m: CartesianMorphism) -> CartesianMorphism:
    return CartesianMorphism(m.tgt_poly, m.src_poly,
                             m.f0.inverse(), m.f1.inverse())


@dataclass(frozen=True)
class SubdividedComposite:
    """Staged composite data (Y, q, r, s) over a composable sequence.

    ys has one more entry than over; q1 : ys[0] -> src, q3 : ys[n] -> tgt,
    q2s[i] : ys[i] -> ys[i+1]; rs[i] : ys[i] -> over[i].mid_src and
    ss[i] : ys[i+1] -> over[i].mid_tgt.  Each square (q2s[i], ss[i],
    over[i].p2, rs[i]) is a pullback; adjacent stages commute.
    """

    over: tuple[Polynomial, ...]
    ys: tuple[FinSetObj, ...]
    q1: FinFn
    q2s: tuple[FinFn, ...]
    q3: FinFn
    rs: tuple[FinFn, ...]
    ss: tuple[FinFn, ...]

    def __post_init__(self):
        self.validate()

    @property
    def start_obj(self) -> FinSetObj:
        return self.q1.cod

    @property
    def end_obj(self) -> FinSetObj:
        return self.q3.cod

    def validate(self) -> None:
        n = len(self.over)
        if not (len(self.ys) == n + 1 and len(self.q2s) == n
                and len(self.rs) == n and len(self.ss) == n):
            raise NotComposable("component counts do not match the sequence")
        for a, b in zip(self.over, self.over[1:]):
            if a.tgt != b.src:
                raise NotComposable("underlying sequence is not composable")
        if self.q1.dom != self.ys[0] or self.q3.dom != self.ys[-1]:
            raise NotComposable("q1/q3 must start at the end objects")
        if n == 0:
            if self.q1.cod != self.q3.cod:
                raise NotComposable("an endospan needs a single base object")
            return
        if self.q1.cod != self.over[0].src or self.q3.cod != self.over[-1].tgt:
            raise NotComposable("q1/q3 must land in the sequence boundaries")
        for i, p in enumerate(self.over):
            if self.q2s[i].dom != self.ys[i] or self.q2s[i].cod != self.ys[i + 1]:
                raise NotComposable(f"q2s[{i}] boundaries are wrong")
            if self.rs[i].dom != self.ys[i] or self.rs[i].cod != p.mid_src:
                raise NotComposable(f"rs[{i}] boundaries are wrong")
            if self.ss[i].dom != self.ys[i + 1] or self.ss[i].cod != p.mid_tgt:
                raise NotComposable(f"ss[{i}] boundaries are wrong")
        if compose_fn(self.over[0].p1, self.rs[0]) != self.q1:
            raise NotComposable("q1 must factor through the first stage")
        if compose_fn(self.over[-1].p3, self.ss[-1]) != self.q3:
            raise NotComposable("q3 must factor through the last stage")
        for i in range(n - 1):
            lhs = compose_fn(self.over[i + 1].p1, self.rs[i + 1])
            rhs = compose_fn(self.over[i].p3, self.ss[i])
            if lhs != rhs:
                raise NotComposable(f"stages {i} and {i + 1} do not commute")
        for i, p in enumerate(self.over):
            sq = PullbackSquare(self.ys[i], self.q2s[i], self.rs[i],
                                self.ss[i], p.p2)
            if not check_pullback(sq):
                raise NotComposable(f"stage {i} square is not a pullback")


@dataclass(frozen=True)
class SdCMorphism:
    """Componentwise map between subdivided composites over one sequence."""

    src: SubdividedComposite
    tgt: SubdividedComposite
    ts: tuple[FinFn, ...]

    def __post_init__(self):
        s, t = self.src, self.tgt
        n = len(s.over)
        if t.over != s.over or len(self.ts) != n + 1:
            raise NotComposable("morphism does not match the sequence")
        if s.q1 != compose_fn(t.q1, self.ts[0]):
            raise NotComposable("q1 triangle fails")
        if s.q3 != compose_fn(t.q3, self.ts[-1]):
            raise NotComposable("q3 triangle fails")
        for i in range(n):
            if compose_fn(t.q2s[i], self.ts[i]) != compose_fn(self.ts[i + 1], s.q2s[i]):
                raise NotComposable(f"q2 square {i} fails")
            if s.rs[i] != compose_fn(t.rs[i], self.ts[i]):
                raise NotComposable(f"r triangle {i} fails")
            if s.ss[i] != compose_fn(t.ss[i], self.ts[i + 1]):
                raise NotComposable(f"s triangle {i} fails")

    @property
    def is_iso(self) -> bool:
        return all(t.is_bijective for t in self.ts)


def unary_sdc(p: Polynomial) -> SubdividedComposite:
    """The tautological subdivided composite of a single polynomial."""
    return SubdividedComposite(
        over=(p,), ys=(p.mid_src, p.mid_tgt), q1=p.p1, q2s=(p.p2,),
        q3=p.p3, rs=(identity_fn(p.mid_src),), ss=(identity_fn(p.mid_tgt),))


def identity_endospan(obj: FinSetObj) -> SubdividedComposite:
    one = identity_fn(obj)
    return SubdividedComposite(over=(), ys=(obj,), q1=one, q2s=(),
                               q3=one, rs=(), ss=())


def restrict_last(sdc: SubdividedComposite) -> SubdividedComposite:
    """Forget the last stage, re-aiming q3 at the previous boundary."""
    n = len(sdc.over)
    if n == 0:
        raise NotComposable("nothing to restrict")
    if n == 1:
        q3 = compose_fn(sdc.over[0].p1, sdc.rs[0])
    else:
        q3 = compose_fn(sdc.over[-2].p3, sdc.ss[-2])
    return SubdividedComposite(over=sdc.over[:-1], ys=sdc.ys[:-1], q1=sdc.q1,
                               q2s=sdc.q2s[:-1], q3=q3, rs=sdc.rs[:-1],
                               ss=sdc.ss[:-1])


def restrict_first(sdc: SubdividedComposite) -> SubdividedComposite:
    """Forget the first stage, re-aiming q1 at the next boundary."""
    n = len(sdc.over)
    if n == 0:
        raise NotComposable("nothing to restrict")
    q1 = compose_fn(sdc.over[0].p3, sdc.ss[0])
    return SubdividedComposite(over=sdc.over[1:], ys=sdc.ys[1:], q1=q1,
                               q2s=sdc.q2s[1:], q3=sdc.q3, rs=sdc.rs[1:],
                               ss=sdc.ss[1:])


@dataclass(frozen=True)
class _Stage:
    """Construction data of one right extension, kept for mediation."""

    sdc: SubdividedComposite
    csq: PullbackSquare
    dpb: DistPB
    chain_sqs: tuple[PullbackSquare, ...]
    eps: tuple[FinFn, ...]


def extend_right(pn: Polynomial, sdc: SubdividedComposite
                 ) -> tuple[SubdividedComposite, SdCMorphism]:
    """Right extension of a subdivided composite by one more polynomial.

    Returns the extended composite together with the counit morphism from
    its restriction back to sdc; the counit exhibits the extension as the
    value of the right adjoint to restriction.
    """
    stage = _extend_right_stage(pn, sdc)
    counit = SdCMorphism(restrict_last(stage.sdc), sdc, stage.eps)
    return stage.sdc, counit


def _extend_right_stage(pn: Polynomial, sdc: SubdividedComposite) -> _Stage:
    n_prev = len(sdc.over)
    if sdc.end_obj != pn.src:
        raise NotComposable("extension polynomial does not start at the end")
    if n_prev == 0 and sdc.q1 != sdc.q3:
        raise NotComposable("right extension of an endospan needs q1 = q3")
    csq = pullback(sdc.q3, pn.p1)
    dpb = dist_pullback(pn.p2, csq.proj2)
    eps: list[FinFn | None] = [None] * (n_prev + 1)
    eps[n_prev] = compose_fn(csq.proj1, dpb.p)
    ys: list[FinSetObj | None] = [None] * (n_prev + 2)
    ys[n_prev], ys[n_prev + 1] = dpb.X, dpb.Y
    q2s: list[FinFn | None] = [None] * (n_prev + 1)
    q2s[n_prev] = dpb.q
    chain: list[PullbackSquare | None] = [None] * max(n_prev, 0)
    for i in range(n_prev - 1, -1, -1):
        sq = pullback(eps[i + 1], sdc.q2s[i])
        chain[i] = sq
        ys[i] = sq.apex
        q2s[i] = sq.proj1
        eps[i] = sq.proj2
    rs = [compose_fn(sdc.rs[i], eps[i]) for i in range(n_prev)]
    rs.append(compose_fn(csq.proj2, dpb.p))
    ss = [compose_fn(sdc.ss[i], eps[i + 1]) for i in range(n_prev)]
    ss.append(dpb.r)
    new = SubdividedComposite(
        over=sdc.over + (pn,), ys=tuple(ys), q1=compose_fn(sdc.q1, eps[0]),
        q2s=tuple(q2s), q3=compose_fn(pn.p3, dpb.r), rs=tuple(rs), ss=tuple(ss))
    return _Stage(new, csq, dpb, tuple(chain), tuple(eps))


def extend_left(sdc: SubdividedComposite, p1: Polynomial
                ) -> tuple[SubdividedComposite, SdCMorphism]:
    """Left extension by one polynomial, with its counit morphism.

    The mirror of extend_right: a chain of distributivity pullbacks over
    the existing stages followed by closing pullbacks.  Used as the
    independent construction against which right extension is compared.
    """
    m = len(sdc.over)
    n = m + 1
    if sdc.start_obj != p1.tgt:
        raise NotComposable("extension polynomial does not end at the start")
    if m == 0 and sdc.q1 != sdc.q3:
        raise NotComposable("left extension of an endospan needs q1 = q3")
    sq0 = pullback(sdc.q1, p1.p3)
    g0 = sq0.proj2
    fs = [sq0.proj1]
    dpbs: list[DistPB] = []
    for i in range(1, m + 1):
        d = dist_pullback(sdc.q2s[i - 1], fs[i - 1])
        dpbs.append(d)
        fs.append(d.r)
    ys: list[FinSetObj | None] = [None] * (n + 1)
    q2s: list[FinFn | None] = [None] * n
    eps: list[FinFn | None] = [None] * (m + 1)
    eps[m] = fs[m]
    if m == 0:
        ys[1] = sq0.apex
        s1new = g0
    else:
        ys[n] = dpbs[m - 1].Y
        ys[n - 1] = dpbs[m - 1].X
        q2s[n - 1] = dpbs[m - 1].q
        gpp = dpbs[m - 1].p
        for j in range(n - 1, 1, -1):
            eps[j - 1] = compose_fn(fs[j - 1], gpp)
            sq = pullback(gpp, dpbs[j - 2].q)
            ys[j - 1] = sq.apex
            q2s[j - 1] = sq.proj1
            gpp = compose_fn(dpbs[j - 2].p, sq.proj2)
        s1new = compose_fn(g0, gpp)
        eps[0] = compose_fn(fs[0], gpp)
    sqv0 = pullback(s1new, p1.p2)
    ys[0] = sqv0.apex
    q2s[0] = sqv0.proj1
    r1new = sqv0.proj2
    rs = [r1new]
    ss = [s1new]
    for i in range(2, n + 1):
        rs.append(compose_fn(sdc.rs[i - 2], eps[i - 2]))
        ss.append(compose_fn(sdc.ss[i - 2], eps[i - 1]))
    new = SubdividedComposite(
        over=(p1,) + sdc.over, ys=tuple(ys), q1=compose_fn(p1.p1, r1new),
        q2s=tuple(q2s), q3=compose_fn(sdc.q3, fs[m]), rs=tuple(rs), ss=tuple(ss))
    counit = SdCMorphism(restrict_first(new), sdc, tuple(eps))
    return new, counit


@dataclass(frozen=True)
class TerminalTower:
    """Terminal subdivided composite with its staged construction data."""

    seq: tuple[Polynomial, ...]
    base: SubdividedComposite
    stages: tuple[_Stage, ...]

    @property
    def sdc(self) -> SubdividedComposite:
        return self.stages[-1].sdc if self.stages else self.base


def terminal_tower(seq: list[Polynomial],
                   at: FinSetObj | None = None) -> TerminalTower:
    seq = tuple(seq)
    for a, b in zip(seq, seq[1:]):
        if a.tgt != b.src:
            raise NotComposable("sequence is not composable")
    if not seq:
        if at is None:
            raise NotComposable("an empty sequence needs a base object")
        return TerminalTower((), identity_endospan(at), ())
    base = identity_endospan(seq[0].src)
    stages = []
    current = base
    for p in seq:
        stage = _extend_right_stage(p, current)
        stages.append(stage)
        current = stage.sdc
    return TerminalTower(seq, base, tuple(stages))


def terminal_sdc(seq: list[Polynomial],
                 at: FinSetObj | None = None) -> SubdividedComposite:
    """The terminal subdivided composite over a composable sequence."""
    return terminal_tower(seq, at).sdc


def mediate_into_tower(tower: TerminalTower,
                       sdc: SubdividedComposite) -> SdCMorphism:
    """The unique morphism from a subdivided composite into the terminal one.

    Computed structurally stage by stage: mediate the restriction, lift
    through the stage's distributivity pullback, then walk the chain of
    pullbacks back to the start.
    """
    if sdc.over != tower.seq:
        raise NotComposable("composite is not over the tower's sequence")
    ts = _mediate_components(tower, sdc, len(tower.seq))
    return SdCMorphism(sdc, tower.sdc, tuple(ts))


def _mediate_components(tower: TerminalTower, sdc: SubdividedComposite,
                        n: int) -> list[FinFn]:
    if n == 0:
        if sdc.q1 != sdc.q3:
            raise NotComposable("no morphism into the identity endospan")
        return [sdc.q1]
    prev = _mediate_components(tower, restrict_last(sdc), n - 1)
    stage = tower.stages[n - 1]
    u = mediate(stage.csq, prev[n - 1], sdc.rs[n - 1])
    t_last, t_end = dpb_mediate(stage.dpb, u, sdc.q2s[n - 1], sdc.ss[n - 1])
    ts: list[FinFn | None] = [None] * (n + 1)
    ts[n] = t_end
    ts[n - 1] = t_last
    for i in range(n - 2, -1, -1):
        ts[i] = mediate(stage.chain_sqs[i],
                        compose_fn(ts[i + 1], sdc.q2s[i]), prev[i])
    return ts


def associated_polynomial(sdc: SubdividedComposite) -> Polynomial:
    """Outer boundary (q1, composite of the q2s, q3) of a composite."""
    if sdc.q2s:
        comp = reduce(lambda acc, step: compose_fn(step, acc), sdc.q2s)
    else:
        comp = identity_fn(sdc.ys[0])
    return mk_poly(sdc.q1, comp, sdc.q3)


def compose_seq(seq: list[Polynomial],
                at: FinSetObj | None = None) -> Polynomial:
    """Composite of a composable sequence; [] at X gives the identity."""
    return associated_polynomial(terminal_sdc(seq, at))


def compose2(q: Polynomial, p: Polynomial) -> Polynomial:
    """Binary composite q after p."""
    if p.tgt != q.src:
        raise NotComposable("polynomials are not composable")
    return compose_seq([p, q])


@dataclass(frozen=True)
class Leaf:
    poly: Polynomial


@dataclass(frozen=True)
class Node:
    """Bracketing node; the composite applies second after first."""

    first: "Leaf | Node"
    second: "Leaf | Node"


def bracketing_leaves(tree: Leaf | Node) -> list[Polynomial]:
    if isinstance(tree, Leaf):
        return [tree.poly]
    return bracketing_leaves(tree.first) + bracketing_leaves(tree.second)


def bracketing_poly(tree: Leaf | Node) -> Polynomial:
    if isinstance(tree, Leaf):
        return tree.poly
    return compose2(bracketing_poly(tree.second), bracketing_poly(tree.first))


def flatten_bracketing(tree: Leaf | Node) -> SubdividedComposite:
    """Subdivided composite over the full leaf sequence realizing a tree.

    Preserves the outer boundary strictly, so its associated polynomial is
    exactly the iterated binary composite of the tree.
    """
    if isinstance(tree, Leaf):
        return unary_sdc(tree.poly)
    a = flatten_bracketing(tree.first)
    b = flatten_bracketing(tree.second)
    ma = associated_polynomial(a)
    mb = associated_polynomial(b)
    outer = terminal_sdc([ma, mb])
    return _flatten_binary(outer, a, b)


def _chain_from(sdc: SubdividedComposite, i: int) -> FinFn:
    comp = identity_fn(sdc.ys[-1])
    maps = sdc.q2s[i:]
    if maps:
        comp = reduce(lambda acc, step: compose_fn(step, acc), maps)
    else:
        comp = identity_fn(sdc.ys[i])
    return comp


def _flatten_binary(outer: SubdividedComposite, a: SubdividedComposite,
                    b: SubdividedComposite) -> SubdividedComposite:
    k, l = len(a.over), len(b.over)
    w0, w1, w2 = outer.ys
    u1, u2 = outer.q2s
    r1s, r2s = outer.rs
    s1s, s2s = outer.ss
    ys: list[FinSetObj] = [w0]
    q2s: list[FinFn] = []
    rs: list[FinFn] = []
    ss: list[FinFn] = []
    a_sqs = [pullback(s1s, _chain_from(a, i)) for i in range(1, k + 1)]
    prev_into_w1 = u1
    prev_into_side = r1s
    for i in range(1, k + 1):
        sq = a_sqs[i - 1]
        step = mediate(sq, prev_into_w1, compose_fn(a.q2s[i - 1], prev_into_side))
        q2s.append(step)
        ys.append(sq.apex)
        rs.append(compose_fn(a.rs[i - 1], prev_into_side))
        ss.append(compose_fn(a.ss[i - 1], sq.proj2))
        prev_into_w1 = sq.proj1
        prev_into_side = sq.proj2
    b_sqs = [pullback(s2s, _chain_from(b, j)) for j in range(1, l + 1)]
    prev_into_w2 = u2
    prev_into_side = r2s
    for j in range(1, l + 1):
        sq = b_sqs[j - 1]
        step = mediate(sq, prev_into_w2, compose_fn(b.q2s[j - 1], prev_into_side))
        q2s.append(step)
        ys.append(sq.apex)
        rs.append(compose_fn(b.rs[j - 1], prev_into_side))
        ss.append(compose_fn(b.ss[j - 1], sq.proj2))
        prev_into_w2 = sq.proj1
        prev_into_side = sq.proj2
    return SubdividedComposite(over=a.over + b.over, ys=tuple(ys),
                               q1=outer.q1, q2s=tuple(q2s), q3=outer.q3,
                               rs=tuple(rs), ss=tuple(ss))


def associator(r: Polynomial, q: Polynomial, p: Polynomial) -> CartesianMorphism:
    """Canonical invertible comparison r o (q o p) -> (r o q) o p.

    Both bracketings are flattened over (p, q, r) and mediated into the
    terminal subdivided composite; the comparison is the composite of one
    mediation with the inverse of the other.
    """
    if p.tgt != q.src or q.tgt != r.src:
        raise NotComposable("triple is not composable")
    tower = terminal_tower([p, q, r])
    flat_l = flatten_bracketing(Node(Node(Leaf(p), Leaf(q)), Leaf(r)))
    flat_r = flatten_bracketing(Node(Leaf(p), Node(Leaf(q), Leaf(r))))
    t_l = mediate_into_tower(tower, flat_l)
    t_r = mediate_into_tower(tower, flat_r)
    f0 = compose_fn(t_r.ts[0].inverse(), t_l.ts[0])
    f1 = compose_fn(t_r.ts[-1].inverse(), t_l.ts[-1])
    return CartesianMorphism(associated_polynomial(flat_l),
                             associated_polynomial(flat_r), f0, f1)


def bracketing_comparison(tree_a: Leaf | Node,
                          tree_b: Leaf | Node) -> CartesianMorphism:
    """Canonical comparison between any two bracketings of one sequence."""
    leaves = bracketing_leaves(tree_a)
    if bracketing_leaves(tree_b) != leaves:
        raise NotComposable("bracketings are over different sequences")
    tower = terminal_tower(leaves)
    flat_a = flatten_bracketing(tree_a)
    flat_b = flatten_bracketing(tree_b)
    t_a = mediate_into_tower(tower, flat_a)
    t_b = mediate_into_tower(tower, flat_b)
    f0 = compose_fn(t_b.ts[0].inverse(), t_a.ts[0])
    f1 = compose_fn(t_b.ts[-1].inverse(), t_a.ts[-1])
    return CartesianMorphism(associated_polynomial(flat_a),
                             associated_polynomial(flat_b), f0, f1)


def hcompose2(g: CartesianMorphism, f: CartesianMorphism) -> CartesianMorphism:
    """Horizontal composite of morphisms: (g : q -> q') o (f : p -> p').

    Relabels the terminal composite of (p, q) along the components of f
    and g, then mediates into the terminal composite of (p', q').
    """
    p, p2 = f.src_poly, f.tgt_poly
    q, q2 = g.src_poly, g.tgt_poly
    if p.tgt != q.src:
        raise NotComposable("morphisms do not compose horizontally")
    f.validate()
    g.validate()
    s = terminal_sdc([p, q])
    relabeled = SubdividedComposite(
        over=(p2, q2), ys=s.ys, q1=s.q1, q2s=s.q2s, q3=s.q3,
        rs=(compose_fn(f.f0, s.rs[0]), compose_fn(g.f0, s.rs[1])),
        ss=(compose_fn(f.f1, s.ss[0]), compose_fn(g.f1, s.ss[1])))
    tower = terminal_tower([p2, q2])
    m = mediate_into_tower(tower, relabeled)
    return CartesianMorphism(compose2(q, p), compose2(q2, p2),
                             m.ts[0], m.ts[-1])


def whisker_left(q: Polynomial, f: CartesianMorphism) -> CartesianMorphism:
    """q o f for a morphism f between polynomials composable with q."""
    return hcompose2(identity_cartesian(q), f)


def whisker_right(g: CartesianMorphism, p: Polynomial) -> CartesianMorphism:
    """g o p for a morphism g between polynomials composable with p."""
    return hcompose2(g, identity_cartesian(p))


def hom_project(p: Polynomial, side: str) -> SliceObj:
    """Left projection p1 over src, or right projection p3 over tgt."""
    if side == "left":
        return SliceObj(p.p1)
    if side == "right":
        return SliceObj(p.p3)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def hom_pullback(a: CartesianMorphism, b: CartesianMorphism
                 ) -> tuple[CartesianMorphism, CartesianMorphism]:
    """Pullback of a cospan in a hom category, formed componentwise.

    Returns the two projections from the apex polynomial onto the sources
    of a and b.
    """
    if a.tgt_poly != b.tgt_poly:
        raise NotComposable("cospan legs must share a target polynomial")
    a.validate()
    b.validate()
    p, q = a.src_poly, b.src_poly
    sq0 = pullback(a.f0, b.f0)
    sq1 = pullback(a.f1, b.f1)
    s2 = mediate(sq1, compose_fn(p.p2, sq0.proj1), compose_fn(q.p2, sq0.proj2))
    apex = Polynomial(p.src, sq0.apex, sq1.apex, p.tgt,
                      compose_fn(p.p1, sq0.proj1), s2,
                      compose_fn(p.p3, sq1.proj1))
    return (CartesianMorphism(apex, p, sq0.proj1, sq1.proj1),
            CartesianMorphism(apex, q, sq0.proj2, sq1.proj2))


def cartesian_homset(p: Polynomial, q: Polynomial) -> list[CartesianMorphism]:
    """All cartesian morphisms p -> q between parallel polynomials.

    For each 1-component the 0-component is found by matching: the pair
    map (p2, f0) must biject onto the canonical pullback of (f1, q.p2),
    which prunes the search far below the full function space.
    """
    if p.src != q.src or p.tgt != q.tgt:
        return []
    out = []
    f1_choices = [q.p3.fiber(p.p3(b)) for b in p.mid_tgt]
    for f1_vals in product(*f1_choices):
        f1 = FinFn(p.mid_tgt, q.mid_tgt,
                   list(zip(p.mid_tgt.elements, f1_vals)))
        wanted = {(b, a) for b in p.mid_tgt for a in q.mid_src
                  if f1(b) == q.p2(a)}
        if len(wanted) != len(p.mid_src):
            continue
        xs = p.mid_src.elements
        assignment: list = []

        def backtrack(i: int, remaining: set) -> None:
            if i == len(xs):
                f0 = FinFn(p.mid_src, q.mid_src,
                           list(zip(xs, assignment)))
                out.append(CartesianMorphism(p, q, f0, f1))
                return
            x = xs[i]
            b = p.p2(x)
            for a in q.p1.fiber(p.p1(x)):
                if (b, a) in remaining:
                    assignment.append(a)
                    remaining.remove((b, a))
                    backtrack(i + 1, remaining)
                    remaining.add((b, a))
                    assignment.pop()

        backtrack(0, set(wanted))
    return out


def sdc_morphisms(src: SubdividedComposite,
                  tgt: SubdividedComposite) -> list[SdCMorphism]:
    """Brute-force enumeration of morphisms between subdivided composites."""
    if src.over != tgt.over:
        return []
    out = []
    spaces = []
    for ys, yt in zip(src.ys, tgt.ys):
        fns = []
        for values in product(yt.elements, repeat=len(ys)):
            fns.append(FinFn(ys, yt, list(zip(ys.elements, values))))
        spaces.append(fns)
    for ts in product(*spaces):
        try:
            out.append(SdCMorphism(src, tgt, tuple(ts)))
        except NotComposable:
            continue
    return out


def span_compose2(q: Polynomial, p: Polynomial) -> Polynomial:
    """Composite of two spans by the chosen pullback; test oracle."""
    if not (p.is_span and q.is_span):
        raise NotComposable("span composition needs spans")
    if p.tgt != q.src:
        raise NotComposable("spans are not composable")
    sq = pullback(p.p3, q.p1)
    return span_poly(compose_fn(p.p1, sq.proj1), compose_fn(q.p3, sq.proj2))
