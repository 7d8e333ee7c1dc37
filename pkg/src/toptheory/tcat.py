"""T-graphs, T-categories, T-functors and T-distributors.

A structure on ``X`` is a V-matrix ``X -> TX``; ``a[t, x]`` is read as the
degree to which the point ``t`` of ``TX`` converges to ``x``.  A T-distributor
``X -|-> Y`` is a matrix ``X -> TY``.  Products ``X x Y`` encode ``(x, y)``
as ``x * |Y| + y``.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .quantale import Quantale
from .report import Check, Report
from .theory import (Theory, TMatrix, kleisli_compose, kleisli_identity,
                     kleisli_operator, lax_extend)
from .vcat import VCategory, find_isomorphism
from .vmat import VMatrix, ShapeError, compose_entries, from_function

__all__ = [
    "TGraph", "TCategory", "TCategoryError", "TDistributor", "is_tgraph",
    "is_tcategory", "is_tfunctor", "is_tgraph_morphism", "is_tdistributor",
    "graphs_of_functor", "functor_leq", "underlying_vcat", "alexandrov",
    "m_functor", "dual", "discrete", "algebra_structures", "tensor_product",
    "unit_E", "v_as_tcategory", "exponential_graph", "char_tmod",
    "is_compact", "sup_is_graph_morphism", "t_functors", "enumerate_tcategories",
    "find_tisomorphism", "lax_extend_batch", "point_distributor",
]


class TCategoryError(ValueError):
    def __init__(self, report: Report):
        super().__init__("; ".join(f"{c.law}: {c.witness}" for c in report.failures()))
        self.report = report


class TGraph:
    """A set ``range(size)`` with a reflexive structure matrix ``X -> TX``."""

    def __init__(self, theory: Theory, size: int, structure, labels: Sequence[str] | None = None,
                 check: bool = True):
        Q = theory.quantale
        m = structure if isinstance(structure, VMatrix) else \
            VMatrix(Q, np.asarray(structure, dtype=np.int64).reshape(theory.tsize(size), size))
        if m.shape != (theory.tsize(size), size):
            raise ShapeError(f"structure on {size} objects needs shape "
                             f"{(theory.tsize(size), size)}, got {m.shape}")
        self.theory = theory
        self.size = size
        self.matrix = m
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(size))
        if check:
            rep = self.validate()
            if not rep.ok:
                raise TCategoryError(rep)

    @property
    def quantale(self) -> Quantale:
        return self.theory.quantale

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries

    def tmatrix(self) -> TMatrix:
        return TMatrix(self.theory, self.size, self.size, self.matrix)

    def hom(self, t: int, x: int) -> int:
        return int(self.entries[t, x])

    def tlabels(self) -> list[str]:
        return self.theory.tlabels(self.labels)

    def validate(self) -> Report:
        rep = Report(f"T-graph on {self.size} objects")
        rep.add(is_tgraph(self))
        return rep

    def __eq__(self, other):
        if not isinstance(other, TGraph):
            return NotImplemented
        return self.size == other.size and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.size, self.matrix))

    def __repr__(self):
        return f"{type(self).__name__}({self.theory.name}, {self.quantale.name}, {self.size} objects)"


class TCategory(TGraph):
    def validate(self) -> Report:
        rep = Report(f"T-category on {self.size} objects")
        rep.add(is_tgraph(self))
        rep.add(_transitive(self))
        return rep


def is_tgraph(X: TGraph) -> Check:
    """Reflexivity ``e_X <= a``: ``k <= a(e(x), x)``."""
    Q, e = X.quantale, X.theory.unit(X.size)
    for x in range(X.size):
        if not Q.leq[Q.unit, X.entries[e[x], x]]:
            return Check.fails("reflexive", {"object": X.labels[x]})
    return Check.holds("reflexive")


def _transitive(X: TGraph) -> Check:
    a = X.tmatrix()
    comp = kleisli_compose(a, a)
    viol = ~X.quantale.leq[comp.entries, a.entries]
    if viol.any():
        t, x = map(int, np.argwhere(viol)[0])
        return Check.fails("transitive", {"point": X.tlabels()[t], "object": X.labels[x],
                                          "composite": X.quantale.label(comp.entries[t, x]),
                                          "structure": X.quantale.label(a.entries[t, x])})
    return Check.holds("transitive")


def is_tcategory(X: TGraph) -> Check:
    r = is_tgraph(X)
    if not r:
        return Check("t-category", r.verdict, r.witness)
    t = _transitive(X)
    return Check("t-category", t.verdict, t.witness)


def is_tgraph_morphism(f: Sequence[int], X: TGraph, Y: TGraph) -> Check:
    """``a(t, x) <= b(Tf(t), f(x))`` for every ``t`` in ``TX`` and ``x`` in ``X``."""
    f = tuple(int(v) for v in f)
    if len(f) != X.size:
        raise ShapeError(f"map has {len(f)} values, source has {X.size} objects")
    tf = np.asarray(X.theory.tmap(f, Y.size), dtype=np.int64)
    fa = np.asarray(f, dtype=np.int64)
    rhs = Y.entries[tf[:, None], fa[None, :]] if len(tf) and len(fa) else \
        np.zeros(X.entries.shape, dtype=np.int64)
    viol = ~X.quantale.leq[X.entries, rhs]
    if viol.any():
        t, x = map(int, np.argwhere(viol)[0])
        return Check.fails("t-functor", {"point": X.tlabels()[t], "object": X.labels[x]})
    return Check.holds("t-functor")


is_tfunctor = is_tgraph_morphism


class TDistributor:
    """``phi: X -|-> Y`` between T-categories, checked on construction."""

    def __init__(self, source: TCategory, target: TCategory, matrix, check: bool = True):
        tm = matrix if isinstance(matrix, TMatrix) else \
            TMatrix(source.theory, source.size, target.size, matrix)
        self.source = source
        self.target = target
        self.tmatrix = tm
        if check:
            c = is_tdistributor(tm, source, target)
            if not c:
                rep = Report("T-distributor")
                rep.add(c)
                raise TCategoryError(rep)

    @property
    def entries(self) -> np.ndarray:
        return self.tmatrix.entries

    def __matmul__(self, other: "TDistributor") -> "TDistributor":
        return TDistributor(other.source, self.target,
                            kleisli_compose(self.tmatrix, other.tmatrix), check=False)

    def __le__(self, other):
        return self.tmatrix <= other.tmatrix

    def __eq__(self, other):
        if not isinstance(other, TDistributor):
            return NotImplemented
        return self.tmatrix == other.tmatrix

    def __hash__(self):
        return hash(self.tmatrix)


def is_tdistributor(phi: TMatrix, X: TGraph, Y: TGraph) -> Check:
    """``phi o a <= phi`` and ``b o phi <= phi``."""
    if (phi.source, phi.target) != (X.size, Y.size):
        raise ShapeError("distributor shape does not match its endpoints")
    Q = X.quantale
    left = kleisli_compose(phi, X.tmatrix())
    viol = ~Q.leq[left.entries, phi.entries]
    if viol.any():
        t, x = map(int, np.argwhere(viol)[0])
        return Check.fails("t-distributor", {"side": "phi o a", "point": Y.tlabels()[t],
                                             "object": X.labels[x]})
    right = kleisli_compose(Y.tmatrix(), phi)
    viol = ~Q.leq[right.entries, phi.entries]
    if viol.any():
        t, x = map(int, np.argwhere(viol)[0])
        return Check.fails("t-distributor", {"side": "b o phi", "point": Y.tlabels()[t],
                                             "object": X.labels[x]})
    return Check.holds("t-distributor")


def graphs_of_functor(f: Sequence[int], X: TCategory, Y: TCategory,
                      check: bool = True) -> tuple[TMatrix, TMatrix]:
    """``(f_*, f^*)`` with ``f_*(t, x) = b(t, f(x))`` and ``f^*(s, y) = b(Tf(s), y)``."""
    f = tuple(int(v) for v in f)
    if check:
        c = is_tfunctor(f, X, Y)
        if not c:
            rep = Report("graphs_of_functor")
            rep.add(c)
            raise TCategoryError(rep)
    th = X.theory
    b = Y.entries
    lower = b[:, list(f)] if f else np.zeros((th.tsize(Y.size), 0), dtype=np.int64)
    tf = list(th.tmap(f, Y.size))
    upper = b[tf, :] if tf else np.zeros((0, Y.size), dtype=np.int64)
    return (TMatrix(th, X.size, Y.size, lower), TMatrix(th, Y.size, X.size, upper))


def point_distributor(X: TCategory, x: int) -> tuple[np.ndarray, np.ndarray]:
    """``x_*: E -|-> X`` as a function on ``TX`` and ``x^*: X -|-> E`` as a
    function on ``X`` (the graphs of the point ``x: 1 -> X``)."""
    lower = X.entries[:, x].copy()
    upper = X.entries[X.theory.unit(X.size)[x], :].copy()
    return lower, upper


def functor_leq(f: Sequence[int], g: Sequence[int], X: TCategory, Y: TCategory) -> bool:
    """``f <= g`` iff ``f_* <= g_*``."""
    return graphs_of_functor(f, X, Y, check=False)[0] <= graphs_of_functor(g, X, Y, check=False)[0]


# the functors between V-categories and T-categories -------------------------

def underlying_vcat(X: TGraph) -> VCategory:
    """``S(X)``: ``hom(x, y) = a(e(x), y)``."""
    e = list(X.theory.unit(X.size))
    return VCategory(X.quantale, X.entries[e, :], X.labels, check=False)


def alexandrov(theory: Theory, A: VCategory) -> TCategory:
    """``A(r) = T_xi r . e``: ``a(t, x) = T_xi r(t, e(x))``."""
    tr = lax_extend(theory, VMatrix(theory.quantale, A.entries))
    e = list(theory.unit(A.size))
    return TCategory(theory, A.size, tr.entries[:, e], A.labels)


def m_functor(X: TGraph) -> VCategory:
    """``M(X)``: the V-category on ``TX`` with structure ``m . T_xi a``."""
    K = kleisli_operator(X.tmatrix())
    return VCategory(X.quantale, K.entries, X.tlabels(), check=False)


def discrete(theory: Theory, n: int, algebra: Sequence[int], labels=None) -> TCategory:
    """The T-category ``(n, alpha)`` of a T-algebra ``alpha: Tn -> n``."""
    Q = theory.quantale
    m = np.full((theory.tsize(n), n), Q.bottom, dtype=np.int64)
    for t, x in enumerate(algebra):
        m[t, x] = Q.unit
    return TCategory(theory, n, m, labels)


def algebra_structures(theory: Theory, n: int) -> list[tuple[int, ...]]:
    """Every Eilenberg-Moore structure ``alpha: Tn -> n``."""
    return list(theory._cached(("algebras", n), lambda: tuple(_algebras(theory, n))))


def _algebras(theory: Theory, n: int):
    tn = theory.tsize(n)
    e, m = theory.unit(n), theory.mult(n)
    found = []
    for alpha in itertools.product(range(n), repeat=tn):
        if any(alpha[e[x]] != x for x in range(n)):
            continue
        ta = theory.tmap(alpha, n)
        if all(alpha[ta[z]] == alpha[m[z]] for z in range(len(m))):
            found.append(alpha)
    return found


def dual(X: TCategory) -> TCategory:
    """``X^op``: the Alexandrov structure of the dual of ``M(X)``, on ``TX``."""
    MX = m_functor(X)
    return alexandrov(X.theory, VCategory(X.quantale, MX.entries.T, MX.labels, check=False))


def tensor_product(X: TGraph, Y: TGraph) -> TCategory:
    """``c(w, (x, y)) = a(T pi1 w, x) * b(T pi2 w, y)``."""
    th = X.theory
    p1, p2 = th.projections(X.size, Y.size)
    Q = th.quantale
    c = Q.tensor_table[X.entries[p1][:, :, None], Y.entries[p2][:, None, :]]
    c = c.reshape(len(p1), X.size * Y.size)
    labels = [f"({x},{y})" for x in X.labels for y in Y.labels]
    return TCategory(th, X.size * Y.size, c, labels)


def unit_E(theory: Theory) -> TCategory:
    return TCategory(theory, 1, [[theory.quantale.unit]], ["*"])


def v_as_tcategory(theory: Theory) -> TCategory:
    """``(V, hom_xi)``: ``c(t, v) = hom(xi(t), v)``."""
    Q = theory.quantale
    c = Q.hom_table[theory.xi[:, None], np.arange(Q.size)[None, :]]
    return TCategory(theory, Q.size, c, Q.carrier)


def exponential_graph(X: TCategory, functions: Sequence[Sequence[int]] | None = None) -> TGraph:
    """The T-graph ``V^X`` on a set of functions ``X -> V`` (default: all T-functors).

    ``<<p, phi>> = meet over q in T(X x C) above p and x of
    hom(a(T pi1 q, x), hom(xi.T ev(q), phi(x)))``.
    """
    th, Q = X.theory, X.quantale
    if functions is None:
        functions = t_functors(X, v_as_tcategory(th))
    C = np.asarray(functions, dtype=np.int64).reshape(len(functions), X.size)
    nC = len(C)
    p1, p2 = th.projections(X.size, nC)
    ev = [int(C[c, x]) for x in range(X.size) for c in range(nC)]
    xev = th.xi_hat(ev)                                                # over T(X x C)
    out = np.full((th.tsize(nC), nC), Q.top, dtype=np.int64)
    if X.size:
        # inner[q, phi, x] = hom(a(p1 q, x), hom(xev(q), phi(x)))
        inner = Q.hom_table[X.entries[p1][:, None, :], Q.hom_table[xev[:, None, None], C[None, :, :]]]
        per_q = Q.meet_reduce(inner, axis=-1)                          # (q, phi)
        M = Q.meet_table
        for q in range(len(p2)):
            out[p2[q]] = M[out[p2[q]], per_q[q]]
    labels = ["(" + ",".join(Q.label(v) for v in row) + ")" for row in C]
    G = TGraph(th, nC, out, labels, check=False)
    G.functions = C
    return G


def char_tmod(psi: TMatrix, X: TCategory, Y: TCategory) -> Report:
    """Compare (i) the distributor laws of ``psi: X -|-> Y`` with (ii) ``psi``
    being a T-functor out of ``|Y| (x) X`` and out of ``Y^op (x) X``.

    The three individual verdicts go to ``data``; the only check is that
    (i) and (ii) agree.
    """
    th = X.theory
    rep = Report("char-tmod")
    d = is_tdistributor(psi, X, Y)
    VV = v_as_tcategory(th)
    values = [int(psi.entries[t, x]) for t in range(th.tsize(Y.size)) for x in range(X.size)]
    algebra_Y = discrete(th, th.tsize(Y.size), th.mult(Y.size))
    f1 = is_tfunctor(values, tensor_product(algebra_Y, X), VV)
    f2 = is_tfunctor(values, tensor_product(dual(Y), X), VV)
    rep.data.update({name: c.to_dict() for name, c in
                     (("distributor", d), ("functor-from-algebra", f1),
                      ("functor-from-dual", f2))})
    rep.data["distributor-holds"] = bool(d)
    rep.data["functor-holds"] = bool(f1) and bool(f2)
    agree = bool(d) == (bool(f1) and bool(f2))
    rep.add(Check.of("equivalence", agree, {"distributor": d.verdict.value,
                                             "algebra": f1.verdict.value,
                                             "dual": f2.verdict.value}))
    return rep


def is_compact(X: TCategory) -> Check:
    """``k <= join_x a(t, x)`` for every ``t`` in ``TX``."""
    Q = X.quantale
    for t in range(X.theory.tsize(X.size)):
        if not Q.leq[Q.unit, Q.join_all(X.entries[t, :])]:
            return Check.fails("compact", {"point": X.tlabels()[t]})
    return Check.holds("compact")


def sup_is_graph_morphism(X: TCategory) -> Check:
    """Whether ``join: V^X -> V`` is a T-graph morphism into ``(V, hom_xi)``."""
    G = exponential_graph(X)
    Q = X.quantale
    sup = [Q.join_all(c) for c in G.functions]
    c = is_tgraph_morphism(sup, G, v_as_tcategory(X.theory))
    return Check("sup-graph-morphism", c.verdict, c.witness)


# enumeration ----------------------------------------------------------------

def t_functors(X: TGraph, Y: TGraph) -> list[tuple[int, ...]]:
    """Every T-functor ``X -> Y``, in lexicographic order."""
    return [f for f in itertools.product(range(Y.size), repeat=X.size)
            if is_tgraph_morphism(f, X, Y)]


def lax_extend_batch(theory: Theory, R: np.ndarray) -> np.ndarray:
    """``T_xi r`` for a stack of matrices ``R`` of shape ``(B, ny, nx)``."""
    Q = theory.quantale
    B, ny, nx = R.shape
    p1, p2 = theory.projections(ny, nx)
    flat = R.reshape(B, ny * nx)
    vals = np.array([theory.xi_hat(row) for row in flat], dtype=np.int64) \
        if B else np.zeros((0, len(p1)), dtype=np.int64)
    out = np.full((B, theory.tsize(ny), theory.tsize(nx)), Q.bottom, dtype=np.int64)
    for w in range(len(p1)):
        out[:, p1[w], p2[w]] = Q.join_table[out[:, p1[w], p2[w]], vals[:, w]]
    return out


def enumerate_tcategories(theory: Theory, n: int) -> list[TCategory]:
    """Every T-category structure on ``range(n)`` (not up to isomorphism)."""
    Q = theory.quantale
    tn = theory.tsize(n)
    if n == 0:
        return [TCategory(theory, 0, np.zeros((tn, 0), dtype=np.int64), check=False)]
    e = theory.unit(n)
    refl = [v for v in range(Q.size) if Q.leq[Q.unit, v]]
    cells = [(t, x) for t in range(tn) for x in range(n)]
    choices = [refl if e[x] == t else range(Q.size) for t, x in cells]
    raw = np.array(list(itertools.product(*choices)), dtype=np.int64)
    mats = raw.reshape(-1, tn, n)
    ext = lax_extend_batch(theory, mats)                        # (B, T tn, tn)
    mult = np.asarray(theory.mult(n), dtype=np.int64)
    # K = m . T_xi a, then a o a = K . a
    K = np.full((len(mats), tn, tn), Q.bottom, dtype=np.int64)
    for z in range(len(mult)):
        K[:, mult[z], :] = Q.join_table[K[:, mult[z], :], ext[:, z, :]]
    comp = compose_entries(Q, K, mats)
    ok = Q.leq[comp, mats].all(axis=(1, 2))
    return [TCategory(theory, n, m, check=False) for m in mats[ok]]


def find_tisomorphism(X: TGraph, Y: TGraph) -> tuple[int, ...] | None:
    """A bijection ``f`` with ``a(t, x) = b(Tf t, f x)``.

    Candidates come from isomorphisms of the underlying V-graphs and are then
    checked on the full structure.
    """
    if X.size != Y.size:
        return None
    th = X.theory
    ex, ey = list(th.unit(X.size)), list(th.unit(Y.size))
    sx, sy = X.entries[ex, :], Y.entries[ey, :]
    for perm in _isomorphisms(sx, sy):
        tf = list(th.tmap(perm, Y.size))
        if np.array_equal(X.entries, Y.entries[np.ix_(tf, list(perm))]):
            return perm
    return None


def _isomorphisms(a: np.ndarray, b: np.ndarray):
    first = find_isomorphism(a, b)
    if first is None:
        return
    yield first
    n = a.shape[0]
    if n > 8:
        return
    for perm in itertools.permutations(range(n)):
        if perm != first and np.array_equal(a, b[np.ix_(perm, perm)]):
            yield perm
