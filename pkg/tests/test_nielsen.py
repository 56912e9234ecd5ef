import numpy as np
import pytest

from hurwitzred.groups import build_dihedral, build_psl2
from hurwitzred.nielsen import (canonicalize_many, canonicalize_tuple, enumerate_nielsen,
                                product, resolve_class_vector)

import oracles


def _oracle_count(G, names):
    elements = [tuple(r) for r in G.rows.tolist()]
    cv = resolve_class_vector(G, names)
    classes = [{tuple(G.rows[m].tolist()) for m in G.classes[c].members} for c in cv.classes]
    if len(G.center()) == 1:
        return oracles.nielsen_count_free(elements, classes, oracles.compose, oracles.inverse,
                                          elements[0])
    return oracles.nielsen_orbits(elements, classes, oracles.compose, oracles.inverse,
                                  elements[0])


@pytest.mark.parametrize("ell,names,d", [
    (5, "5A,5A,5B,5B", 7), (5, "5A,5A,5A,5A", 10), (5, "3A,3A,3A,3A", 18),
    (7, "7A,7A,7B,7B", 22), (7, "7A,7A,7A,7A", 13),
])
def test_nielsen_sizes_against_oracle(ell, names, d):
    G = build_psl2(ell)
    ns = enumerate_nielsen(resolve_class_vector(G, names))
    assert ns.d == d
    assert _oracle_count(G, names) == d


def test_dihedral_counts():
    D8 = build_dihedral(4)
    assert enumerate_nielsen(resolve_class_vector(D8, "2A,2A,2B,2B")).d == 2
    assert enumerate_nielsen(resolve_class_vector(D8, "2A,2A,2A,2A")).d == 0
    assert _oracle_count(D8, "2A,2A,2B,2B") == 2


def test_tuples_are_valid(psl7):
    ns = enumerate_nielsen(resolve_class_vector(psl7, "7A,7A,7B,7B"))
    ns.verify()
    for t in ns.tuples:
        assert product(psl7, t) == 0
        assert canonicalize_tuple(psl7, t) == t


def test_canonical_form_is_conjugation_invariant(psl7):
    ns = enumerate_nielsen(resolve_class_vector(psl7, "7A,7A,7A,7A"))
    arr = ns.array
    for h in (5, 77, 160):
        conj = psl7.conj(arr, h)
        assert np.array_equal(canonicalize_many(psl7, conj), arr)


def test_exhaustive_conjugates_collapse(psl11):
    # every conjugate of one tuple canonicalizes to the same representative
    ns = enumerate_nielsen(resolve_class_vector(psl11, "11A,11A,11B,11B"))
    t = np.array(ns.tuples[7])
    conj = psl11.conj(t[None, :], np.arange(psl11.order)[:, None])
    canon = canonicalize_many(psl11, conj)
    assert len(np.unique(canon, axis=0)) == 1
    assert tuple(canon[0]) == ns.tuples[7]


def test_anchor_independence(psl11):
    cv = resolve_class_vector(psl11, "11A,11A,11B,11B")
    a = enumerate_nielsen(cv)
    other = int(psl11.classes[cv.classes[0]].members[-1])
    b = enumerate_nielsen(cv, anchor=other)
    assert a.tuples == b.tuples
    assert a.d == 51


def test_without_generation_includes_subgroups(psl5):
    cv = resolve_class_vector(psl5, "5A,5A,5B,5B")
    full = enumerate_nielsen(cv, require_generation=False)
    gen = enumerate_nielsen(cv)
    extra = set(full.tuples) - set(gen.tuples)
    assert set(gen.tuples) <= set(full.tuples)
    assert extra
    assert all(not psl5.generated_by(t) for t in extra)


def test_workers_give_identical_sets(psl11):
    cv = resolve_class_vector(psl11, "11A,11A,11A,11A")
    assert enumerate_nielsen(cv, workers=2).tuples == enumerate_nielsen(cv).tuples


def test_class_vector_resolution(psl5):
    cv = resolve_class_vector(psl5, "3,3,3,3")
    assert cv.labels == ("3A",) * 4
    assert cv.ni_label == "AAAA"
    with pytest.raises(ValueError):
        resolve_class_vector(psl5, "5,5,5,5")
    with pytest.raises(ValueError):
        resolve_class_vector(psl5, "9Z,3A,3A,3A")
    with pytest.raises(ValueError):
        resolve_class_vector(psl5, "3A,3A,3A")
