import numpy as np
import pytest

from hurwitzred import InconsistencyError
from hurwitzred.braid import (A_WORDS, CUSPS, BraidWord, action_permutations, apply_a, apply_q,
                              apply_word, closed_form, decompose_components,
                              fuse_isomorphic_components, gamma)
from hurwitzred.groups import build_dihedral, build_psl2
from hurwitzred.nielsen import canonicalize_many, enumerate_nielsen, resolve_class_vector

FIXTURES = [
    ("psl2", 5, "5A,5A,5B,5B"), ("psl2", 5, "5A,5A,5A,5A"), ("psl2", 5, "3A,3A,3A,3A"),
    ("psl2", 7, "7A,7A,7B,7B"), ("psl2", 7, "7A,7A,7A,7A"),
    ("dihedral", 7, "2A,2A,2A,2A"),
]


def _nielsen(kind, n, names):
    G = build_psl2(n) if kind == "psl2" else build_dihedral(n)
    return enumerate_nielsen(resolve_class_vector(G, names))


def _same_classes(G, word1, word2, arr):
    a = canonicalize_many(G, apply_word(G, word1, arr))
    b = canonicalize_many(G, apply_word(G, word2, arr))
    return np.array_equal(a, b)


@pytest.mark.parametrize("kind,n,names", FIXTURES)
def test_braid_relations(kind, n, names):
    ns = _nielsen(kind, n, names)
    G, arr = ns.group, ns.array
    assert ns.d > 0
    # these hold on tuples, not only on classes
    assert np.array_equal(apply_word(G, (1, 2, 1), arr), apply_word(G, (2, 1, 2), arr))
    assert np.array_equal(apply_word(G, (2, 3, 2), arr), apply_word(G, (3, 2, 3), arr))
    assert np.array_equal(apply_word(G, (1, 3), arr), apply_word(G, (3, 1), arr))
    assert np.array_equal(apply_word(G, (1, -1, 2, -2, 3, -3), arr), arr)


@pytest.mark.parametrize("kind,n,names", FIXTURES)
def test_sphere_relation_trivial_on_classes(kind, n, names):
    ns = _nielsen(kind, n, names)
    G, arr = ns.group, ns.array
    moved = canonicalize_many(G, apply_word(G, (1, 2, 3, 3, 2, 1), arr))
    assert np.array_equal(moved, arr)


@pytest.mark.parametrize("kind,n,names", FIXTURES)
def test_words_match_closed_forms(kind, n, names):
    ns = _nielsen(kind, n, names)
    G, arr = ns.group, ns.array
    for w in CUSPS:
        assert np.array_equal(canonicalize_many(G, apply_word(G, A_WORDS[w], arr)),
                              canonicalize_many(G, closed_form(G, w, arr)))


@pytest.mark.parametrize("kind,n,names", FIXTURES)
def test_cusp_loops_compose_to_identity(kind, n, names):
    ns = _nielsen(kind, n, names)
    acts = action_permutations(ns)
    assert np.array_equal(acts["inf"][acts["1"][acts["0"]]], np.arange(ns.d))
    for w in CUSPS:
        assert sorted(acts[w]) == list(range(ns.d))


def test_gamma_products(psl5):
    t = (1, 2, 3, 4)
    assert gamma(psl5, "0", t) == psl5.mul(4, 1)
    assert gamma(psl5, "1", t) == psl5.mul(2, 4)
    assert gamma(psl5, "inf", t) == psl5.mul(3, 4)
    with pytest.raises(ValueError):
        gamma(psl5, "2", t)


def test_q_inverse(psl7):
    ns = enumerate_nielsen(resolve_class_vector(psl7, "7A,7A,7B,7B"))
    for i in (1, 2, 3):
        back = apply_q(psl7, i, -1, apply_q(psl7, i, 1, ns.array))
        assert np.array_equal(back, ns.array)


def test_braid_word_algebra():
    w = BraidWord((1, 2, -3))
    assert w.inverse().letters == (3, -2, -1)
    assert (w * w.inverse()).letters == (1, 2, -3, 3, -2, -1)
    with pytest.raises(ValueError):
        BraidWord((4,))


def test_apply_a_single_tuple(psl5):
    ns = enumerate_nielsen(resolve_class_vector(psl5, "5A,5A,5B,5B"))
    acts = action_permutations(ns)
    for i, t in enumerate(ns.tuples):
        assert apply_a(psl5, "inf", t) == ns.tuples[acts["inf"][i]]


def test_components_psl5(psl5):
    ns = enumerate_nielsen(resolve_class_vector(psl5, "5A,5A,5B,5B"))
    comps = decompose_components(ns)
    assert [c.degree for c in comps] == [2, 5]
    assert sorted(m for c in comps for m in c.members) == list(range(ns.d))


def test_fusion_psl7_aaaa(psl7):
    ns = enumerate_nielsen(resolve_class_vector(psl7, "7A,7A,7A,7A"))
    comps = decompose_components(ns)
    assert [c.degree for c in comps] == [2, 2, 2, 7]
    fams = fuse_isomorphic_components(ns, comps)
    assert sorted(len(f) for f in fams) == [1, 3]
    assert fuse_isomorphic_components(ns, comps, depth=0) == [[c.index] for c in comps]


def test_broken_set_is_reported(psl5):
    ns = enumerate_nielsen(resolve_class_vector(psl5, "5A,5A,5B,5B"))
    truncated = type(ns)(ns.class_vector, ns.tuples[:-1])
    with pytest.raises(InconsistencyError):
        action_permutations(truncated)
