"""The law registry itself: green on the real build, red on mutants.

The three injected defects exercised here:

  * drop_section      -- the dependent product loses one section table;
  * skip_normalization -- chosen pullbacks ignore the identity special
                          cases, so identity laws hold only up to
                          isomorphism;
  * swap_components   -- the associator returns its two component maps
                         transposed.

Each must be caught by at least one named law, with a serialized
counterexample in the report.
"""

import json

import pytest

import polyfin.extension
import polyfin.finset
import polyfin.laws
import polyfin.poly
import polyfin.slices
from polyfin.finset import FinFn, FinSetObj, Pair
from polyfin.gen import InstanceGenConfig
from polyfin.laws import LAWS, run_law
from polyfin.poly import CartesianMorphism
from polyfin.slices import SliceObj

CFG = InstanceGenConfig(seed=1234, max_set_size=3, cases=15)


@pytest.mark.parametrize("name", sorted(LAWS))
def test_law_passes_on_clean_build(name):
    report = run_law(name, CFG)
    assert report.passed, report.failures[:1]


def test_unknown_law_rejected():
    with pytest.raises(KeyError):
        run_law("no-such-law", CFG)


def test_config_requires_positive_size():
    with pytest.raises(ValueError):
        InstanceGenConfig(seed=0, max_set_size=0)


def _assert_caught(report):
    assert not report.passed
    payload = json.dumps(report.to_json(), sort_keys=True)
    assert "detail" in payload


class TestMutationSensitivity:
    def test_dropped_section_caught(self, monkeypatch):
        real_pi = polyfin.slices.pi

        def mutant_pi(f, x):
            out = real_pi(f, x)
            if f.is_identity or x.arrow.is_identity:
                return out
            if len(out.carrier) < 2:
                return out
            keep = out.carrier.elements[:-1]
            carrier = FinSetObj(keep)
            return SliceObj(FinFn(carrier, out.base,
                                  [(e, out.arrow(e)) for e in keep]))

        monkeypatch.setattr(polyfin.slices, "pi", mutant_pi)
        monkeypatch.setattr(polyfin.laws, "pi", mutant_pi)
        _assert_caught(run_law("oracle-agreement", CFG))
        _assert_caught(run_law("delta-criterion", CFG))
        _assert_caught(run_law("adjunctions", CFG))

    def test_skipped_normalization_caught(self, monkeypatch):
        def raw_pullback(f, g):
            from polyfin.errors import NotComposable
            from polyfin.finset import PullbackSquare
            if f.cod != g.cod:
                raise NotComposable("legs of a pullback must share a codomain")
            elems = [Pair(a, b) for a in f.dom for b in g.dom
                     if f(a) == g(b)]
            apex = FinSetObj(elems)
            proj1 = FinFn(apex, f.dom, [(e, e.left) for e in apex])
            proj2 = FinFn(apex, g.dom, [(e, e.right) for e in apex])
            return PullbackSquare(apex, proj1, proj2, f, g)

        monkeypatch.setattr(polyfin.finset, "pullback", raw_pullback)
        monkeypatch.setattr(polyfin.poly, "pullback", raw_pullback)
        _assert_caught(run_law("units", CFG))

    def test_swapped_components_caught(self, monkeypatch):
        real_associator = polyfin.poly.associator

        def mutant_associator(r, q, p):
            a = real_associator(r, q, p)
            return CartesianMorphism(a.src_poly, a.tgt_poly, a.f1, a.f0)

        monkeypatch.setattr(polyfin.laws, "associator", mutant_associator)
        monkeypatch.setattr(polyfin.extension, "associator",
                            mutant_associator)
        _assert_caught(run_law("associativity", CFG))
        _assert_caught(run_law("coherence", CFG))
