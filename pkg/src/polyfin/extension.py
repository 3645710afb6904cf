"""Evaluation of polynomials on slices and the induced transformations.

A polynomial X <- A -> B -> Y acts on a slice over X by pulling back along
p1, taking the dependent product along p2 (realized as a distributivity
pullback so the staging is retained), and post-composing with p3.  The
action on slice morphisms, the component family of a cartesian morphism,
and the comparison between iterated and composite evaluation are all
computed by the same mediation machinery as composition itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotCartesian, NotComposable
from .finset import FinFn, FinSetObj, PullbackSquare, compose_fn, mediate
from .poly import (
    CartesianMorphism,
    Polynomial,
    associator,
    compose2,
    embed_map,
    is_cartesian,
)
from .slices import (
    DistPB,
    SliceMor,
    SliceObj,
    delta_mor,
    dist_pullback,
    dpb_mediate,
    pi_make_element,
    pi_section_value,
    pullback_square_for_delta,
    sigma,
    sigma_mor,
    pi_mor,
)


@dataclass(frozen=True)
class EvalTrace:
    """Audit record of one evaluation: the staged objects and arrows."""

    input: SliceObj
    C2: FinSetObj
    C3: FinSetObj
    C4: FinSetObj
    counit: FinFn
    delta_arrow: FinFn
    dpb_p: FinFn
    dpb_q: FinFn
    dpb_r: FinFn
    output: SliceObj

    def delta_square(self, p: Polynomial) -> PullbackSquare:
        return PullbackSquare(self.C2, self.counit, self.delta_arrow,
                              self.input.arrow, p.p1)

    def dpb(self, p: Polynomial) -> DistPB:
        return DistPB(p.p2, self.delta_arrow, self.C3, self.C4,
                      self.dpb_p, self.dpb_q, self.dpb_r)


@dataclass(frozen=True)
class NatComponentTrace:
    """Audit record of one component of an induced transformation."""

    C2: FinSetObj
    C3: FinSetObj
    C4: FinSetObj
    C2p: FinSetObj
    C3p: FinSetObj
    C4p: FinSetObj
    f2: FinFn
    f3: FinFn
    f4: FinFn
    src_trace: EvalTrace
    tgt_trace: EvalTrace
    m: CartesianMorphism

    def cross_squares(self) -> tuple[PullbackSquare, PullbackSquare, PullbackSquare]:
        """The three comparison squares between the two evaluation stages."""
        s2 = PullbackSquare(self.C2, self.src_trace.delta_arrow, self.f2,
                            self.m.f0, self.tgt_trace.delta_arrow)
        s3 = PullbackSquare(self.C3, self.src_trace.dpb_p, self.f3,
                            self.f2, self.tgt_trace.dpb_p)
        s4 = PullbackSquare(self.C4, self.src_trace.dpb_r, self.f4,
                            self.m.f1, self.tgt_trace.dpb_r)
        return s2, s3, s4


def eval_obj(p: Polynomial, x: SliceObj) -> tuple[SliceObj, EvalTrace]:
    """Value of the polynomial on a slice over its source, with trace."""
    if x.base != p.src:
        raise NotComposable("slice must live over the polynomial's source")
    dsq = pullback_square_for_delta(p.p1, x)
    d = dist_pullback(p.p2, dsq.proj2)
    out = sigma(p.p3, SliceObj(d.r))
    trace = EvalTrace(x, dsq.apex, d.X, d.Y, dsq.proj1, dsq.proj2,
                      d.p, d.q, d.r, out)
    return out, trace


def eval_mor(p: Polynomial, h: SliceMor) -> SliceMor:
    """Action of the polynomial on a slice morphism."""
    if h.src.base != p.src:
        raise NotComposable("morphism must live over the polynomial's source")
    m2 = delta_mor(p.p1, h)
    m3 = pi_mor(p.p2, m2)
    return sigma_mor(p.p3, m3)


def nat_component(m: CartesianMorphism, x: SliceObj
                  ) -> tuple[SliceMor, NatComponentTrace]:
    """Component at x of the transformation induced by a cartesian morphism.

    Induces the comparison of the pullback stages from the 0-component,
    then lifts through the distributivity pullback of the target; at the
    terminal slice the component is the 1-component itself.
    """
    if not is_cartesian(m):
        raise NotCartesian("component construction needs a cartesian morphism")
    p, q = m.src_poly, m.tgt_poly
    if x.base != p.src:
        raise NotComposable("slice must live over the shared source")
    op, tp = eval_obj(p, x)
    oq, tq = eval_obj(q, x)
    f2 = mediate(tq.delta_square(q), tp.counit,
                 compose_fn(m.f0, tp.delta_arrow))
    f3, f4 = dpb_mediate(tq.dpb(q), compose_fn(f2, tp.dpb_p), tp.dpb_q,
                         compose_fn(m.f1, tp.dpb_r))
    comp = SliceMor(op, oq, f4)
    trace = NatComponentTrace(tp.C2, tp.C3, tp.C4, tq.C2, tq.C3, tq.C4,
                              f2, f3, f4, tp, tq, m)
    return comp, trace


def coherence_component(q: Polynomial, p: Polynomial, x: SliceObj) -> SliceMor:
    """Comparison from iterated evaluation to evaluation of the composite.

    The target-side projection of the canonical comparison between the
    bracketings q o (p o lft x) and (q o p) o lft x; a bijection natural
    in all three arguments.
    """
    if p.tgt != q.src:
        raise NotComposable("polynomials are not composable")
    if x.base != p.src:
        raise NotComposable("slice must live over the inner source")
    a = associator(q, p, embed_map(x.arrow, "left"))
    lhs = eval_obj(q, eval_obj(p, x)[0])[0]
    rhs = eval_obj(compose2(q, p), x)[0]
    return SliceMor(lhs, rhs, a.f1)


def coherence_component_direct(q: Polynomial, p: Polynomial,
                               x: SliceObj) -> SliceMor:
    """Independent route to the same comparison, by section re-indexing.

    Rebuilds the composite's staging and transports each nested section
    table pointwise.  Used to cross-check the mediation-based route.
    """
    from .finset import pullback
    if p.tgt != q.src or x.base != p.src:
        raise NotComposable("arguments do not compose")
    op, tp = eval_obj(p, x)
    oq, tq = eval_obj(q, op)
    c = compose2(q, p)
    oc, tc = eval_obj(c, x)
    dslice_p = SliceObj(tp.delta_arrow)
    dslice_q = SliceObj(tq.delta_arrow)
    dslice_c = SliceObj(tc.delta_arrow)
    cpb = pullback(p.p3, q.p1)
    cpb_index = {(cpb.proj1(e), cpb.proj2(e)): e for e in cpb.apex}
    c_dpb = dist_pullback(q.p2, cpb.proj2)
    chain_sq = pullback(compose_fn(cpb.proj1, c_dpb.p), p.p2)
    assert chain_sq.apex == c.mid_src and c_dpb.Y == c.mid_tgt
    mid_slice = SliceObj(cpb.proj2)
    dc_index = {(tc.counit(e), tc.delta_arrow(e)): e for e in tc.C2}
    pairs = []
    for e4 in oq.carrier:
        bq = tq.dpb_r(e4)
        mid_values = {}
        for aq in q.p2.fiber(bq):
            e2 = pi_section_value(q.p2, dslice_q, e4, aq)
            c4 = tq.counit(e2)
            mid_values[aq] = cpb_index[(tp.dpb_r(c4), aq)]
        mid = pi_make_element(q.p2, mid_slice, bq, mid_values)
        values = {}
        for e0 in c.p2.fiber(mid):
            e3 = chain_sq.proj1(e0)
            ap = chain_sq.proj2(e0)
            aq = cpb.proj2(c_dpb.p(e3))
            e2 = pi_section_value(q.p2, dslice_q, e4, aq)
            c4 = tq.counit(e2)
            c2elt = pi_section_value(p.p2, dslice_p, c4, ap)
            values[e0] = dc_index[(tp.counit(c2elt), e0)]
        pairs.append((e4, pi_make_element(c.p2, dslice_c, mid, values)))
    return SliceMor(oq, oc, FinFn(oq.carrier, oc.carrier, pairs))


def faithful_probes(q: Polynomial) -> tuple[SliceObj, SliceObj]:
    """The two slices that jointly determine a morphism into q."""
    from .slices import terminal_slice
    return terminal_slice(q.src), SliceObj(q.p1)
