"""Slice operations, distributivity pullbacks, and their comparison maps."""

import pytest

from polyfin import gen
from polyfin.errors import NotAPullbackAround, NotASection, NotComposable
from polyfin.finset import (
    Atom,
    FinFn,
    FinSetObj,
    Pair,
    compose_fn,
    constant_fn,
    identity_fn,
    mk_finset,
    mk_fn,
)
from polyfin.slices import (
    CommutingSquare,
    DistPB,
    SliceObj,
    check_dpb_terminal,
    delta,
    delta_component,
    delta_pi_transpose,
    dist_pullback,
    induce_sections,
    left_bc_component,
    pi,
    right_bc_component,
    sigma,
    sigma_delta_transpose,
    slice_homset,
    slice_pullback,
    terminal_slice,
)


def const_slice(tag, n, base, point):
    carrier = mk_finset([f"{tag}{i}" for i in range(n)])
    return SliceObj(constant_fn(carrier, base, point))


class TestSigma:
    def test_identity(self):
        a = mk_finset(["a"])
        x = const_slice("c", 2, a, Atom("a"))
        assert sigma(identity_fn(a), x) == x

    def test_whole_map_as_slice(self):
        a, b = mk_finset(["a"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        assert sigma(f, terminal_slice(a)).arrow == f

    def test_two_point_carrier(self):
        a, b = mk_finset(["a"]), mk_finset(["b"])
        f = mk_fn(a, b, [(Atom("a"), Atom("b"))])
        x = const_slice("c", 2, a, Atom("a"))
        out = sigma(f, x)
        assert out.base == b and len(out.carrier) == 2

    def test_base_mismatch(self):
        a, b = mk_finset(["a"]), mk_finset(["b"])
        with pytest.raises(NotComposable):
            sigma(identity_fn(b), terminal_slice(a))


class TestDelta:
    def test_terminal_goes_to_terminal_with_counit_f(self):
        a, b = mk_finset(["a1", "a2"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        d, counit = delta(f, terminal_slice(b))
        assert d == terminal_slice(a)
        assert counit == f

    def test_identity_map_is_strict(self):
        b = mk_finset(["b1", "b2"])
        y = const_slice("c", 3, b, Atom("b1"))
        d, counit = delta(identity_fn(b), y)
        assert d == y
        assert counit.is_identity

    def test_fiber_product_count(self):
        one = mk_finset(["*"])
        two = mk_finset(["u", "v"])
        f = constant_fn(two, one, Atom("*"))
        y = const_slice("c", 3, one, Atom("*"))
        d, _ = delta(f, y)
        assert d.base == two and len(d.carrier) == 3 * 2


class TestPi:
    def test_terminal_to_terminal(self):
        a, b = mk_finset(["a1", "a2"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        assert pi(f, terminal_slice(a)) == terminal_slice(b)

    def test_identity_map_strict(self):
        a = mk_finset(["a1", "a2"])
        x = const_slice("c", 2, a, Atom("a1"))
        assert pi(identity_fn(a), x) == x

    def test_product_of_fiber_sizes(self):
        a, b = mk_finset(["a1", "a2"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        carrier = mk_finset(["c1", "c2", "d1", "d2", "d3"])
        x = SliceObj(mk_fn(carrier, a, [
            (Atom("c1"), Atom("a1")), (Atom("c2"), Atom("a1")),
            (Atom("d1"), Atom("a2")), (Atom("d2"), Atom("a2")),
            (Atom("d3"), Atom("a2"))]))
        out = pi(f, x)
        assert len(out.arrow.fiber(Atom("b"))) == 2 * 3

    def test_empty_fiber_gives_one_section(self):
        b = mk_finset(["b"])
        empty = mk_finset([])
        f = FinFn(empty, b, [])
        x = SliceObj(FinFn(empty, empty, []))
        out = pi(f, x)
        assert len(out.arrow.fiber(Atom("b"))) == 1


class TestDistPullback:
    def test_counts_and_evaluation(self):
        a = mk_finset(["a1", "a2"])
        b = mk_finset(["b"])
        z = mk_finset(["z1", "z2", "w1", "w2", "w3"])
        f = constant_fn(a, b, Atom("b"))
        g = mk_fn(z, a, [(Atom("z1"), Atom("a1")), (Atom("z2"), Atom("a1")),
                         (Atom("w1"), Atom("a2")), (Atom("w2"), Atom("a2")),
                         (Atom("w3"), Atom("a2"))])
        d = dist_pullback(f, g)
        assert len(d.Y) == 2 * 3
        assert len(d.X) == 2 * 6
        for x in d.X:
            assert g(d.p(x)) == compose_fn(g, d.p)(x)
        from polyfin.finset import check_pullback
        assert check_pullback(d.outer_square())
        assert check_dpb_terminal(d)

    def test_identity_f_shape(self):
        a = mk_finset(["a1", "a2"])
        z = mk_finset(["z1", "z2", "z3"])
        g = constant_fn(z, a, Atom("a1"))
        d = dist_pullback(identity_fn(a), g)
        assert d.p.is_identity and d.q.is_identity and d.r == g

    def test_identity_g_shape(self):
        a, b = mk_finset(["a1", "a2"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        d = dist_pullback(f, identity_fn(a))
        assert d.p.is_identity and d.q == f and d.r.is_identity

    def test_boundary_mismatch(self):
        a, b = mk_finset(["a"]), mk_finset(["b"])
        with pytest.raises(NotComposable):
            dist_pullback(identity_fn(a), identity_fn(b))


class TestDpbTerminal:
    def test_canonical_is_terminal(self, rng):
        for _ in range(10):
            d = gen.rand_dpb(rng, 3)
            assert check_dpb_terminal(d)

    def test_shrunk_is_not_terminal(self, rng):
        hit = 0
        for _ in range(20):
            d = gen.rand_dpb(rng, 3)
            small = gen.shrink_dpb(d, rng)
            if small is None:
                continue
            hit += 1
            assert not check_dpb_terminal(small)
        assert hit >= 5

    def test_duplicated_is_not_terminal(self, rng):
        hit = 0
        for _ in range(20):
            d = gen.rand_dpb(rng, 3)
            big = gen.duplicate_dpb(d, rng)
            if big is None:
                continue
            hit += 1
            assert not check_dpb_terminal(big)
        assert hit >= 5

    def test_identity_diagram_is_terminal(self):
        a = mk_finset(["a1", "a2"])
        one = identity_fn(a)
        d = DistPB(one, one, a, a, one, one, one)
        assert check_dpb_terminal(d)

    def test_ill_formed_candidate(self):
        a, b = mk_finset(["a"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        d = DistPB(f, identity_fn(a), a, b, identity_fn(a), f,
                   identity_fn(b))
        bad = DistPB(f, identity_fn(a), a, b, identity_fn(a), f,
                     constant_fn(b, a, Atom("a")))
        with pytest.raises(NotAPullbackAround):
            check_dpb_terminal(bad)
        assert check_dpb_terminal(d)


class TestDeltaComponent:
    def test_bijective_for_genuine(self, rng):
        for _ in range(10):
            d = gen.rand_dpb(rng, 3)
            z = gen.rand_slice(rng, d.around_g.dom, 3)
            assert delta_component(d, z).is_bijective

    def test_terminal_slice_detects_failure(self, rng):
        found = 0
        for _ in range(20):
            d = gen.rand_dpb(rng, 2)
            bad = gen.duplicate_dpb(d, rng)
            if bad is None:
                continue
            found += 1
            comp = delta_component(bad, terminal_slice(bad.around_g.dom))
            assert not comp.is_bijective
        assert found >= 5

    def test_both_sides_count(self, rng):
        for _ in range(10):
            d = gen.rand_dpb(rng, 2)
            z = gen.rand_slice(rng, d.around_g.dom, 2)
            comp = delta_component(d, z)
            assert len(comp.src.carrier) == len(comp.tgt.carrier)


class TestBeckChevalley:
    def _square(self, rng, force_pullback):
        from polyfin.finset import pullback
        b = gen.rand_set(rng, 3, "b")
        c = gen.rand_set(rng, 3, "c")
        dd = gen.rand_set(rng, 3, "d")
        k = gen.rand_fn(rng, b, dd)
        g = gen.rand_fn(rng, c, dd)
        if force_pullback:
            sq = pullback(k, g)
            return CommutingSquare(sq.proj1, sq.proj2, k, g)
        a = gen.rand_set(rng, 3, "a", min_size=0)
        cands = [(x, y) for x in b for y in c if k(x) == g(y)]
        if not cands:
            return None
        choice = [rng.choice(cands) for _ in a]
        f = FinFn(a, b, [(e, bc[0]) for e, bc in zip(a.elements, choice)])
        h = FinFn(a, c, [(e, bc[1]) for e, bc in zip(a.elements, choice)])
        return CommutingSquare(f, h, k, g)

    def test_pullback_squares_give_bijections(self, rng):
        for _ in range(10):
            sq = self._square(rng, True)
            for x in (terminal_slice(sq.left.cod),
                      gen.doubled_slice(sq.left.cod)):
                assert left_bc_component(sq, x).is_bijective
            for x in (terminal_slice(sq.right.dom),
                      gen.doubled_slice(sq.right.dom)):
                assert right_bc_component(sq, x).is_bijective

    def test_non_pullbacks_detected(self, rng):
        hits = 0
        for _ in range(40):
            sq = self._square(rng, False)
            if sq is None or sq.is_pullback():
                continue
            hits += 1
            alphas = [left_bc_component(sq, x).is_bijective
                      for x in (terminal_slice(sq.left.cod),
                                gen.doubled_slice(sq.left.cod))]
            betas = [right_bc_component(sq, x).is_bijective
                     for x in (terminal_slice(sq.right.dom),
                               gen.doubled_slice(sq.right.dom))]
            assert not all(alphas)
            assert not all(betas)
        assert hits >= 8

    def test_right_cell_at_terminal_is_always_bijective(self, rng):
        for _ in range(15):
            sq = self._square(rng, False)
            if sq is None:
                continue
            comp = right_bc_component(sq, terminal_slice(sq.right.dom))
            assert comp.is_bijective

    def test_left_cell_matches_element_formula(self, rng):
        from polyfin.slices import pullback_square_for_delta
        for _ in range(8):
            sq = self._square(rng, rng.random() < 0.5)
            if sq is None:
                continue
            f, h, k, g = sq.top, sq.left, sq.right, sq.bottom
            for x in (terminal_slice(h.cod), gen.doubled_slice(h.cod)):
                comp = left_bc_component(sq, x)
                dh_sq = pullback_square_for_delta(h, x)
                tgt_sq = pullback_square_for_delta(k, sigma(g, x))
                index = {(tgt_sq.proj1(e), tgt_sq.proj2(e)): e
                         for e in tgt_sq.apex}
                for e in dh_sq.apex:
                    expected = index[(dh_sq.proj1(e), f(dh_sq.proj2(e)))]
                    assert comp.mediating(e) == expected

    def test_right_cell_matches_element_formula(self, rng):
        from polyfin.slices import (
            pi_make_element,
            pi_section_value,
            pullback_square_for_delta,
        )
        for _ in range(8):
            sq = self._square(rng, rng.random() < 0.5)
            if sq is None:
                continue
            f, h, k, g = sq.top, sq.left, sq.right, sq.bottom
            for x in (terminal_slice(k.dom), gen.doubled_slice(k.dom)):
                comp = right_bc_component(sq, x)
                d1 = dist_pullback(k, x.arrow)
                src_sq = pullback_square_for_delta(g, SliceObj(d1.r))
                dfx_sq = pullback_square_for_delta(f, x)
                dfx = SliceObj(dfx_sq.proj2)
                dfx_index = {(dfx_sq.proj1(e), dfx_sq.proj2(e)): e
                             for e in dfx_sq.apex}
                for e in src_sq.apex:
                    y = src_sq.proj1(e)
                    c = src_sq.proj2(e)
                    values = {}
                    for a in h.fiber(c):
                        v = pi_section_value(k, x, y, f(a))
                        values[a] = dfx_index[(v, a)]
                    expected = pi_make_element(h, dfx, c, values)
                    assert comp.mediating(e) == expected


class TestSections:
    def _surjective_dpb(self, rng):
        b = gen.rand_set(rng, 2, "b")
        c = gen.rand_set(rng, 2, "c")
        f = gen.rand_fn(rng, b, c)
        a_elems = [Pair(e, Atom(str(i))) for e in b
                   for i in range(rng.randint(1, 2))]
        a = FinSetObj(a_elems)
        g = FinFn(a, b, [(e, e.left) for e in a])
        return f, g, dist_pullback(f, g)

    def test_triple_from_splitting(self, rng):
        for _ in range(10):
            f, g, d = self._surjective_dpb(rng)
            s1 = FinFn(g.cod, g.dom,
                       [(e, rng.choice(g.fiber(e))) for e in g.cod])
            t1, t2, t3 = induce_sections(d, s1=s1)
            assert t1 == s1
            assert compose_fn(g, t1).is_identity
            assert compose_fn(compose_fn(g, d.p), t2).is_identity
            assert compose_fn(d.r, t3).is_identity
            assert compose_fn(d.p, t2) == t1
            assert compose_fn(d.q, t2) == compose_fn(t3, f)

    def test_triple_from_r_section_matches(self, rng):
        for _ in range(10):
            f, g, d = self._surjective_dpb(rng)
            s1 = FinFn(g.cod, g.dom,
                       [(e, g.fiber(e)[0]) for e in g.cod])
            triple = induce_sections(d, s1=s1)
            again = induce_sections(d, s3=triple[2])
            assert again == triple

    def test_degenerate_identity_g(self):
        a, b = mk_finset(["a1", "a2"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        d = dist_pullback(f, identity_fn(a))
        t1, t2, t3 = induce_sections(d, s1=identity_fn(a))
        assert t1.is_identity and t2.is_identity and t3.is_identity

    def test_not_a_section(self):
        a, b = mk_finset(["a1", "a2"]), mk_finset(["b"])
        f = constant_fn(a, b, Atom("b"))
        d = dist_pullback(f, constant_fn(a, a, Atom("a1")))
        with pytest.raises(NotASection):
            induce_sections(d, s1=constant_fn(a, a, Atom("a2")))
        with pytest.raises(NotASection):
            induce_sections(d)


class TestAdjunctions:
    def test_sigma_delta_bijection(self, rng):
        for _ in range(15):
            a = gen.rand_set(rng, 3, "a")
            b = gen.rand_set(rng, 3, "b")
            f = gen.rand_fn(rng, a, b)
            x = gen.rand_slice(rng, a, 3)
            y = gen.rand_slice(rng, b, 3)
            lhs = slice_homset(sigma(f, x), y)
            rhs = slice_homset(x, delta(f, y)[0])
            images = {sigma_delta_transpose(f, x, y, m).mediating
                      for m in lhs}
            assert len(lhs) == len(rhs) == len(images)
            assert images == {m.mediating for m in rhs}

    def test_delta_pi_bijection(self, rng):
        for _ in range(15):
            a = gen.rand_set(rng, 3, "a")
            b = gen.rand_set(rng, 3, "b")
            f = gen.rand_fn(rng, a, b)
            y = gen.rand_slice(rng, b, 3)
            x = gen.rand_slice(rng, a, 3)
            lhs = slice_homset(delta(f, y)[0], x)
            rhs = slice_homset(y, pi(f, x))
            images = {delta_pi_transpose(f, y, x, m).mediating for m in lhs}
            assert len(lhs) == len(rhs) == len(images)
            assert images == {m.mediating for m in rhs}


def test_slice_pullback_is_pullback(rng):
    from polyfin.finset import PullbackSquare, check_pullback
    for _ in range(10):
        base = gen.rand_set(rng, 3, "x")
        w = gen.rand_slice(rng, base, 3)
        x = gen.rand_slice(rng, base, 3)
        y = gen.rand_slice(rng, base, 3)
        hx = slice_homset(x, w)
        hy = slice_homset(y, w)
        if not hx or not hy:
            continue
        m1, m2 = hx[0], hy[0]
        left, right = slice_pullback(m1, m2)
        assert left.src == right.src
        sq = PullbackSquare(left.src.carrier, left.mediating, right.mediating,
                            m1.mediating, m2.mediating)
        assert check_pullback(sq)


def test_pi_preserves_terminals_and_pullbacks(rng):
    from polyfin.finset import PullbackSquare, check_pullback
    from polyfin.slices import pi_mor
    done = 0
    for _ in range(15):
        a = gen.rand_set(rng, 2, "a")
        b = gen.rand_set(rng, 2, "b")
        f = gen.rand_fn(rng, a, b)
        assert pi(f, terminal_slice(a)) == terminal_slice(b)
        w = gen.rand_slice(rng, a, 2)
        x = gen.rand_slice(rng, a, 2)
        y = gen.rand_slice(rng, a, 2)
        hx, hy = slice_homset(x, w), slice_homset(y, w)
        if not hx or not hy:
            continue
        done += 1
        left, right = slice_pullback(hx[0], hy[0])
        img_left = pi_mor(f, left)
        img_right = pi_mor(f, right)
        sq = PullbackSquare(img_left.src.carrier, img_left.mediating,
                            img_right.mediating, pi_mor(f, hx[0]).mediating,
                            pi_mor(f, hy[0]).mediating)
        assert check_pullback(sq)
    assert done >= 3
