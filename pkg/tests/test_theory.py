import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from toptheory import quantale as qmod
from toptheory import theory as thy
from toptheory.theory import TMatrix, TheoryError
from toptheory.vmat import VMatrix, identity

import oracles

QUANTALES = [qmod.two(), qmod.goedel_chain(3), qmod.lawvere_chain(4)]
THEORIES = [thy.make_theory(name, q) for q in QUANTALES
            for name in ("identity", "finite-ultrafilter")]


def ultrafilters_by_definition(n):
    """Families of subsets (bitmasks) that are proper, upward closed, closed
    under intersection, and contain each set or its complement."""
    full = (1 << n) - 1
    subsets = range(1 << n)
    found = []
    for bits in range(1 << (1 << n)):
        fam = {s for s in subsets if bits >> s & 1}
        if 0 in fam or full not in fam:
            continue
        if any((a | b) not in fam for a in fam for b in subsets):
            continue
        if any((a & b) not in fam for a in fam for b in fam):
            continue
        if all(s in fam or (full ^ s) in fam for s in subsets):
            found.append(frozenset(fam))
    return found


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_finite_ultrafilters_are_principal(n):
    brute = ultrafilters_by_definition(n)
    principal = [frozenset(s for s in range(1 << n) if s >> i & 1) for i in range(n)]
    assert sorted(map(sorted, brute)) == sorted(map(sorted, principal))
    assert sorted(map(sorted, thy.all_ultrafilters(n))) == sorted(map(sorted, brute))


@pytest.mark.parametrize("th", THEORIES, ids=lambda t: f"{t.name}-{t.quantale.name}")
def test_validate_theory_passes(th):
    rep = thy.validate_theory(th)
    assert rep.ok, rep.failures()
    assert th.tsize(1) == 1


def test_word_theory_excluded():
    with pytest.raises(TheoryError):
        thy.make_theory("word", qmod.two())
    with pytest.raises(TheoryError):
        thy.make_theory("nonsense", qmod.two())


@pytest.mark.parametrize("q", QUANTALES, ids=lambda q: q.name)
def test_xi_of_principal_is_value(q):
    uf = thy.finite_ultrafilter_theory(q)
    for v in q.elements():
        principal = uf.unit(q.size)[v]
        assert uf.xi[principal] == v
    assert "degenerate" in uf.metadata


def test_corrupted_xi_fails_with_witness():
    th = thy.identity_theory(qmod.lawvere_chain(4))
    bad = th.with_xi([0, 0, 2, 3])
    rep = thy.validate_theory(bad)
    failing = {c.law: c.witness for c in rep.failures()}
    assert "em-algebra" in failing and failing["em-algebra"] is not None
    assert thy.validate_theory(th).ok


@st.composite
def vmatrices(draw, q, rows, cols):
    vals = draw(st.lists(st.integers(0, q.size - 1), min_size=rows * cols,
                         max_size=rows * cols))
    return VMatrix(q, np.array(vals, dtype=np.int64).reshape(rows, cols))


@given(st.data())
def test_lax_extension_agrees_across_theories(data):
    q = data.draw(st.sampled_from(QUANTALES))
    x, y = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 3))
    r = data.draw(vmatrices(q, y, x))
    ident = thy.lax_extend(thy.identity_theory(q), r)
    assert ident == r
    assert thy.lax_extend(thy.finite_ultrafilter_theory(q), r) == ident


@given(st.data())
def test_lax_extension_is_functorial(data):
    q = data.draw(st.sampled_from(QUANTALES))
    th = thy.make_theory(data.draw(st.sampled_from(["identity", "finite-ultrafilter"])), q)
    x, y, z = (data.draw(st.integers(0, 3)) for _ in range(3))
    r, s = data.draw(vmatrices(q, y, x)), data.draw(vmatrices(q, z, y))
    assert thy.lax_extend(th, s @ r) == thy.lax_extend(th, s) @ thy.lax_extend(th, r)
    ident = identity(x, q)
    assert thy.lax_extend(th, ident) == identity(th.tsize(x), q)


@st.composite
def tmatrices(draw, th, src, tgt):
    m = draw(vmatrices(th.quantale, th.tsize(tgt), src))
    return TMatrix(th, src, tgt, m)


@given(st.data())
def test_kleisli_unit_and_associativity(data):
    th = data.draw(st.sampled_from(THEORIES))
    w, x, y, z = (data.draw(st.integers(0, 3)) for _ in range(4))
    alpha = data.draw(tmatrices(th, x, y))
    assert thy.kleisli_identity(th, y) @ alpha == alpha
    assert alpha @ thy.kleisli_identity(th, x) >= alpha
    beta, gamma = data.draw(tmatrices(th, y, z)), data.draw(tmatrices(th, z, w))
    assert (gamma @ beta) @ alpha == gamma @ (beta @ alpha)


def test_identity_theory_kleisli_is_matrix_composition():
    q = qmod.goedel_chain(3)
    th = thy.identity_theory(q)
    for a in oracles.all_matrices(q, 2, 2):
        for b in itertools.islice(oracles.all_matrices(q, 2, 2), 0, None, 5):
            got = thy.kleisli_compose(TMatrix(th, 2, 2, b), TMatrix(th, 2, 2, a))
            assert got.entries.tolist() == oracles.compose_loops(q, b, a)


def test_kleisli_lifting_adjunction_exhaustive_over_two():
    q = qmod.two()
    for name in ("identity", "finite-ultrafilter"):
        th = thy.make_theory(name, q)
        for nx, ny, nz in itertools.product(range(1, 3), repeat=3):
            psis = [TMatrix(th, ny, nx, m) for m in oracles.all_matrices(q, nx, ny)]
            gammas = [TMatrix(th, nz, nx, m) for m in oracles.all_matrices(q, nx, nz)]
            deltas = [TMatrix(th, nz, ny, m) for m in oracles.all_matrices(q, ny, nz)]
            for psi in psis:
                for gamma in gammas:
                    lift = thy.kleisli_lifting(psi, gamma)
                    for delta in deltas:
                        assert ((psi @ delta) <= gamma) == (delta <= lift)
                for delta in deltas:
                    assert thy.kleisli_lifting(psi, psi @ delta) >= delta


def test_boolean_lifting_is_relational_residual():
    q = qmod.two()
    th = thy.identity_theory(q)
    for psi_m in oracles.all_matrices(q, 2, 2):      # psi[x, y]
        for gamma_m in oracles.all_matrices(q, 2, 2):    # gamma[x, z]
            lift = thy.kleisli_lifting(TMatrix(th, 2, 2, psi_m), TMatrix(th, 2, 2, gamma_m))
            want = [[int(all(not psi_m[x][y] or gamma_m[x][z] for x in range(2)))
                     for z in range(2)] for y in range(2)]
            assert lift.entries.tolist() == want


def test_tmatrix_shape_checked():
    th = thy.identity_theory(qmod.two())
    with pytest.raises(ValueError):
        TMatrix(th, 2, 3, [[1, 0], [0, 1]])
