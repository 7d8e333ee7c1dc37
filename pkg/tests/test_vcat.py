import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toptheory import quantale as qmod
from toptheory import vcat
from toptheory.vcat import COVARIANT, CONTRAVARIANT, VCategory, VCategoryError

import oracles

TWO = qmod.two()


def as_vcat(rel):
    return VCategory(TWO, rel.astype(np.int64))


def powerset_lattice(n):
    subsets = list(range(1 << n))
    rel = np.array([[(a & b) == a for b in subsets] for a in subsets])
    return as_vcat(rel)


def m3():
    # bottom, three atoms, top
    rel = np.eye(5, dtype=bool)
    rel[0, :] = True
    rel[:, 4] = True
    return as_vcat(rel)


def lattice_tables(rel):
    n = len(rel)
    ubs = lambda xs: [u for u in range(n) if all(rel[x, u] for x in xs)]
    lbs = lambda xs: [u for u in range(n) if all(rel[u, x] for x in xs)]
    least = lambda us: next((u for u in us if all(rel[u, w] for w in us)), None)
    most = lambda us: next((u for u in us if all(rel[w, u] for w in us)), None)
    return (lambda *xs: least(ubs(xs))), (lambda *xs: most(lbs(xs)))


def is_distributive_lattice(rel):
    sup, inf = lattice_tables(rel)
    n = len(rel)
    return all(inf(x, sup(y, z)) == sup(inf(x, y), inf(x, z))
               for x, y, z in itertools.product(range(n), repeat=3))


def test_preorder_counts_match_oracle():
    for n in range(5):
        assert len(vcat.enumerate_vcategories(n, TWO)) == len(oracles.preorders(n))
    assert [len(oracles.preorders(n)) for n in range(5)] == [1, 1, 4, 29, 355]


def test_invalid_structure_rejected():
    with pytest.raises(VCategoryError):
        VCategory(TWO, [[0, 1], [0, 1]])
    bad = VCategory(TWO, [[1, 1, 0], [0, 1, 1], [0, 0, 1]], check=False)
    rep = bad.validate()
    assert rep.failures()[0].law == "transitive"


def test_presheaf_counts():
    one = VCategory(TWO, [[1]])
    assert len(vcat.presheaves(one)) == 2
    chain = VCategory(TWO, [[1, 1], [0, 1]])
    assert len(vcat.presheaves(chain, COVARIANT)) == 3


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_presheaves_are_up_and_down_sets(n):
    for rel in oracles.preorders(n):
        A = as_vcat(rel)
        up = sorted(oracles.upsets(rel))
        down = sorted(oracles.upsets(rel.T))
        assert sorted(map(tuple, vcat.presheaves(A, COVARIANT).tolist())) == up
        assert sorted(map(tuple, vcat.presheaves(A, CONTRAVARIANT).tolist())) == down


def test_presheaf_category_is_reflexive():
    for q in (TWO, qmod.goedel_chain(3), qmod.lawvere_chain(4)):
        A = VCategory(q, [[q.unit, q.bottom], [q.bottom, q.unit]])
        P, rows = vcat.presheaf_cat(A, COVARIANT)
        assert all(q.le(q.unit, P.entries[i, i]) for i in range(P.size))
        assert P.validate().ok


def test_tensor_by_unit_is_object():
    for q in (TWO, qmod.goedel_chain(3), qmod.lawvere_chain(4)):
        A = VCategory(q, [[q.unit, q.bottom], [q.bottom, q.unit]])
        P, _ = vcat.presheaf_cat(A, COVARIANT)
        for x in range(P.size):
            assert x in vcat.tensor(q.unit, x, P)


def test_cotensors_exist_in_presheaf_categories():
    q = qmod.goedel_chain(3)
    for A in vcat.enumerate_vcategories(2, q):
        P, _ = vcat.presheaf_cat(A, CONTRAVARIANT)
        for v in range(q.size):
            for x in range(P.size):
                assert vcat.cotensor(v, x, P)
        assert vcat.is_complete(P) and vcat.is_cocomplete(P)


def test_colimit_weighted_by_representable():
    q = qmod.lawvere_chain(4)
    A = VCategory(q, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    P, _ = vcat.presheaf_cat(A, CONTRAVARIANT)
    diagram = [0, 2, 4]
    index = VCategory(q, P.entries[np.ix_(diagram, diagram)])
    for i in range(3):
        weights = vcat.yoneda(index, i, CONTRAVARIANT)
        assert diagram[i] in vcat.weighted_colimit(weights, diagram, P)


def test_conical_sup_is_lattice_join():
    A = powerset_lattice(2)
    sup, inf = lattice_tables(A.entries.astype(bool))
    for x, y in itertools.combinations_with_replacement(range(A.size), 2):
        assert vcat.conical_sup([x, y], A) == (sup(x, y),)
        assert vcat.conical_inf([x, y], A) == (inf(x, y),)


def test_empty_limit_is_top():
    A = powerset_lattice(2)
    assert vcat.weighted_limit([], [], A) == (3,)
    assert vcat.conical_sup([], A) == (0,)


def test_complete_distributivity_examples():
    P2 = powerset_lattice(2)
    assert vcat.is_completely_distributive(P2)
    assert vcat.is_totally_algebraic(P2)
    assert not vcat.is_completely_distributive(m3())
    one = VCategory(TWO, [[1]])
    assert vcat.is_completely_distributive(one) and vcat.is_totally_algebraic(one)


def test_cd_matches_distributivity_for_small_lattices():
    # for finite lattices over two, complete distributivity is ordinary distributivity
    seen = 0
    for n in range(1, 5):
        for rel in oracles.preorders(n):
            if any(rel[x, y] and rel[y, x] for x in range(n) for y in range(n) if x != y):
                continue
            A = as_vcat(rel)
            if not vcat.is_complete(A):
                continue
            seen += 1
            assert bool(vcat.is_completely_distributive(A)) == is_distributive_lattice(rel)
            # finite distributive lattices are totally algebraic
            assert bool(vcat.is_totally_algebraic(A)) == is_distributive_lattice(rel)
    assert seen > 0
    assert not is_distributive_lattice(m3().entries.astype(bool))


def test_separation_and_reflection():
    A = VCategory(TWO, [[1, 1, 1], [1, 1, 1], [0, 0, 1]])
    assert not vcat.is_separated(A)
    R, cls = vcat.poset_reflection(A)
    assert R.size == 2 and cls == (0, 0, 1)
    assert vcat.is_separated(R)


def test_find_isomorphism():
    a = np.array([[1, 1], [0, 1]])
    b = np.array([[1, 0], [1, 1]])
    f = vcat.find_isomorphism(a, b)
    assert f == (1, 0)
    assert vcat.find_isomorphism(a, np.eye(2, dtype=np.int64)) is None


def test_op_and_vfunctor():
    q = qmod.goedel_chain(3)
    A = VCategory(q, [[2, 1], [0, 2]])
    assert np.array_equal(A.op().entries, A.entries.T)
    assert vcat.is_vfunctor([0, 1], A, A)
    assert vcat.is_vfunctor([0, 0], A, A)
    assert not vcat.is_vfunctor([1, 0], A, A)


@st.composite
def closed_structures(draw):
    q = draw(st.sampled_from([TWO, qmod.goedel_chain(3), qmod.lawvere_chain(4)]))
    n = draw(st.integers(1, 4))
    vals = draw(st.lists(st.integers(0, q.size - 1), min_size=n * n, max_size=n * n))
    a = np.array(vals, dtype=np.int64).reshape(n, n)
    np.fill_diagonal(a, q.unit)
    # close under composition
    for _ in range(n):
        comp = q.join_reduce(q.tensor_table[a[:, :, None], a[None, :, :]], axis=1)
        a = q.join_table[a, comp]
    return q, a


@given(closed_structures())
def test_closure_gives_vcategory_with_complete_presheaves(case):
    q, a = case
    A = VCategory(q, a)
    P, rows = vcat.presheaf_cat(A, CONTRAVARIANT)
    assert vcat.is_complete(P)
    for x in range(A.size):
        assert tuple(vcat.yoneda(A, x, CONTRAVARIANT)) in {tuple(r) for r in rows.tolist()}
