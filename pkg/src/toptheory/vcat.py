"""Quantale-enriched categories on finite object sets.

``entries[x, y]`` is the hom from ``x`` to ``y``.  Covariant presheaves are
V-functors ``A -> V`` (``a(x,y) * phi(x) <= phi(y)``), contravariant ones are
V-functors ``A^op -> V`` (``a(x,y) * psi(y) <= psi(x)``).  (Co)limits are
found by searching for representing objects and are returned as the full
isomorphism class, an empty tuple meaning "does not exist".
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from .quantale import Quantale
from .report import Check, Report

__all__ = [
    "VCategory", "VCategoryError", "CompletenessError", "COVARIANT",
    "CONTRAVARIANT", "presheaves", "presheaf_cat", "yoneda", "tensor",
    "cotensor", "sup_of_presheaf", "weighted_colimit", "weighted_limit",
    "conical_sup", "conical_inf", "is_complete", "is_cocomplete",
    "left_of_sup", "is_completely_distributive", "is_totally_algebraic",
    "find_isomorphism", "enumerate_vcategories", "poset_reflection",
    "is_vfunctor", "is_separated", "is_presheaf",
]

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"


class VCategoryError(ValueError):
    def __init__(self, report: Report):
        super().__init__("; ".join(f"{c.law}: {c.witness}" for c in report.failures()))
        self.report = report


class CompletenessError(ValueError):
    pass


class VCategory:
    def __init__(self, quantale: Quantale, entries, labels: Sequence[str] | None = None,
                 check: bool = True):
        a = np.array(entries, dtype=np.int64)
        if a.size == 0:
            a = a.reshape(0, 0)
        if a.shape[0] != a.shape[1]:
            raise ValueError(f"structure must be square, got {a.shape}")
        a.setflags(write=False)
        self.quantale = quantale
        self.entries = a
        self.labels = tuple(labels) if labels is not None else \
            tuple(str(i) for i in range(a.shape[0]))
        if len(self.labels) != a.shape[0]:
            raise ValueError("one label per object required")
        if check:
            rep = self.validate()
            if not rep.ok:
                raise VCategoryError(rep)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def hom(self, x: int, y: int) -> int:
        return int(self.entries[x, y])

    def validate(self) -> Report:
        Q, a = self.quantale, self.entries
        rep = Report("v-category")
        bad = next((x for x in range(self.size) if not Q.leq[Q.unit, a[x, x]]), None)
        rep.add(Check.of("reflexive", bad is None,
                         None if bad is None else {"object": self.labels[bad]}))
        # comp[x, y, z] = a(y,z) * a(x,y)
        comp = Q.tensor_table[a[:, :, None], a[None, :, :]]
        viol = ~Q.leq[comp, a[:, None, :]]
        if viol.any():
            x, y, z = map(int, np.argwhere(viol)[0])
            w = {"x": self.labels[x], "y": self.labels[y], "z": self.labels[z]}
            rep.add(Check.fails("transitive", w))
        else:
            rep.add(Check.holds("transitive"))
        return rep

    def op(self) -> "VCategory":
        return VCategory(self.quantale, self.entries.T, self.labels, check=False)

    def isomorphic_objects(self, x: int, y: int) -> bool:
        Q = self.quantale
        return bool(Q.leq[Q.unit, self.entries[x, y]] and Q.leq[Q.unit, self.entries[y, x]])

    def __eq__(self, other):
        if not isinstance(other, VCategory):
            return NotImplemented
        return self.quantale == other.quantale and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def __repr__(self):
        return f"VCategory({self.quantale.name}, {self.size} objects)"


def is_presheaf(A: VCategory, weights: Sequence[int], variance: str = COVARIANT) -> Check:
    Q, a = A.quantale, A.entries
    w = np.asarray(weights, dtype=np.int64)
    if variance == COVARIANT:
        viol = ~Q.leq[Q.tensor_table[a, w[:, None]], w[None, :]]
    else:
        viol = ~Q.leq[Q.tensor_table[a, w[None, :]], w[:, None]]
    if viol.any():
        x, y = map(int, np.argwhere(viol)[0])
        return Check.fails(f"{variance}-presheaf", {"x": A.labels[x], "y": A.labels[y]})
    return Check.holds(f"{variance}-presheaf")


def presheaves(A: VCategory, variance: str = COVARIANT) -> np.ndarray:
    """All closed weight functions, as rows of an array, in lexicographic order.

    Objects are assigned one at a time; each partial assignment is pruned
    against every constraint involving already-assigned objects.
    """
    Q, a = A.quantale, A.entries
    n, V = A.size, Q.size
    if variance not in (COVARIANT, CONTRAVARIANT):
        raise ValueError(f"variance must be {COVARIANT!r} or {CONTRAVARIANT!r}")
    if variance == CONTRAVARIANT:
        a = a.T
    parts = np.zeros((1, 0), dtype=np.int64)
    for i in range(n):
        grown = []
        for v in range(V):
            keep = np.ones(len(parts), dtype=bool)
            if i:
                # a(j,i) * phi(j) <= v  and  a(i,j) * v <= phi(j)
                keep &= Q.leq[Q.tensor_table[a[:i, i][None, :], parts], v].all(axis=1)
                keep &= Q.leq[Q.tensor_table[a[i, :i], v][None, :], parts].all(axis=1)
            keep &= Q.leq[Q.tensor_table[a[i, i], v], v]
            sel = parts[keep]
            grown.append(np.hstack([sel, np.full((len(sel), 1), v, dtype=np.int64)]))
        parts = np.vstack(grown)
        order = np.lexsort(parts.T[::-1])
        parts = parts[order]
    return parts


def _hom_table(Q: Quantale, rows: np.ndarray) -> np.ndarray:
    """[p, q] = meet over x of hom(p(x), q(x)) for all pairs of rows."""
    if rows.shape[1] == 0:
        return np.full((len(rows), len(rows)), Q.top, dtype=np.int64)
    return Q.meet_reduce(Q.hom_table[rows[:, None, :], rows[None, :, :]], axis=-1)


def presheaf_cat(A: VCategory, variance: str = COVARIANT) -> tuple[VCategory, np.ndarray]:
    """The V-category of presheaves with ``[p, q] = meet_x hom(p(x), q(x))``.

    Returns the category and the array of weight rows (object ``i`` is row ``i``).
    """
    rows = presheaves(A, variance)
    Q = A.quantale
    labels = ["(" + ",".join(Q.label(v) for v in r) + ")" for r in rows]
    return VCategory(Q, _hom_table(Q, rows), labels, check=False), rows


def yoneda(A: VCategory, x: int, variance: str = CONTRAVARIANT) -> np.ndarray:
    """``a(-, x)`` (contravariant) or ``a(x, -)`` (covariant)."""
    return A.entries[:, x].copy() if variance == CONTRAVARIANT else A.entries[x, :].copy()


def _objects_with_out_row(A: VCategory, row: np.ndarray) -> tuple[int, ...]:
    return tuple(int(s) for s in np.flatnonzero((A.entries == row[None, :]).all(axis=1)))


def _objects_with_in_col(A: VCategory, col: np.ndarray) -> tuple[int, ...]:
    return tuple(int(s) for s in np.flatnonzero((A.entries == col[:, None]).all(axis=0)))


def tensor(v: int, x: int, A: VCategory) -> tuple[int, ...]:
    """Objects ``t`` with ``a(t, y) = hom(v, a(x, y))`` for all ``y``."""
    return _objects_with_out_row(A, A.quantale.hom_table[v, A.entries[x, :]])


def cotensor(v: int, x: int, A: VCategory) -> tuple[int, ...]:
    """Objects ``c`` with ``a(y, c) = hom(v, a(y, x))`` for all ``y``."""
    return _objects_with_in_col(A, A.quantale.hom_table[v, A.entries[:, x]])


def weighted_colimit(weights: Sequence[int], diagram: Sequence[int], A: VCategory) -> tuple[int, ...]:
    """Colimit of ``h = diagram`` weighted by ``psi = weights``:
    ``a(c, y) = meet_i hom(psi(i), a(h(i), y))``."""
    Q = A.quantale
    w = np.asarray(weights, dtype=np.int64)
    h = np.asarray(diagram, dtype=np.int64)
    if len(h) == 0:
        row = np.full(A.size, Q.top, dtype=np.int64)
    else:
        row = Q.meet_reduce(Q.hom_table[w[:, None], A.entries[h, :]], axis=0)
    return _objects_with_out_row(A, row)


def weighted_limit(weights: Sequence[int], diagram: Sequence[int], A: VCategory) -> tuple[int, ...]:
    """Limit of ``h`` weighted by ``phi``: ``a(y, l) = meet_i hom(phi(i), a(y, h(i)))``."""
    Q = A.quantale
    w = np.asarray(weights, dtype=np.int64)
    h = np.asarray(diagram, dtype=np.int64)
    if len(h) == 0:
        col = np.full(A.size, Q.top, dtype=np.int64)
    else:
        col = Q.meet_reduce(Q.hom_table[w[:, None], A.entries[:, h].T], axis=0)
    return _objects_with_in_col(A, col)


def sup_of_presheaf(psi: Sequence[int], A: VCategory) -> tuple[int, ...]:
    """Supremum of a contravariant presheaf: ``a(s,y) = meet_x hom(psi(x), a(x,y))``."""
    return weighted_colimit(psi, range(A.size), A)


def conical_sup(objs: Iterable[int], A: VCategory) -> tuple[int, ...]:
    objs = list(objs)
    return weighted_colimit([A.quantale.unit] * len(objs), objs, A)


def conical_inf(objs: Iterable[int], A: VCategory) -> tuple[int, ...]:
    objs = list(objs)
    return weighted_limit([A.quantale.unit] * len(objs), objs, A)


def _first_missing(candidates: np.ndarray, present: np.ndarray) -> int | None:
    """Index of the first row of ``candidates`` that is not a row of ``present``."""
    if not len(candidates):
        return None
    found = (candidates[:, None, :] == present[None, :, :]).all(axis=2).any(axis=1)
    bad = np.flatnonzero(~found)
    return int(bad[0]) if bad.size else None


def _limit_shapes(A: VCategory, columns: np.ndarray) -> tuple:
    """Candidate columns (or rows) for binary conical limits and for cotensors
    by each ``v``; sups are handled by passing rows."""
    Q = A.quantale
    pairs = np.array(list(itertools.combinations(range(A.size), 2)),
                     dtype=np.int64).reshape(-1, 2)
    k = Q.unit
    binary = Q.meet_table[Q.hom_table[k, columns[pairs[:, 0]]], Q.hom_table[k, columns[pairs[:, 1]]]]
    scaled = Q.hom_table[np.arange(Q.size)[:, None, None], columns[None]]
    return pairs, binary, scaled.reshape(Q.size * A.size, A.size)


def is_complete(A: VCategory) -> Check:
    """All cotensors and all conical infima exist.

    On a finite object set binary and empty infima give every conical
    infimum, and with cotensors they give every weighted limit.
    """
    Q = A.quantale
    if not conical_inf([], A):
        return Check.fails("complete", {"missing": "empty infimum (top)"})
    cols = A.entries.T                                   # cols[x] = a(-, x)
    pairs, binary, scaled = _limit_shapes(A, cols)
    i = _first_missing(binary, cols)
    if i is not None:
        x, y = pairs[i]
        return Check.fails("complete", {"missing": "infimum",
                                        "of": [A.labels[x], A.labels[y]]})
    i = _first_missing(scaled, cols)
    if i is not None:
        return Check.fails("complete", {"missing": "cotensor", "v": Q.label(i // A.size),
                                        "x": A.labels[i % A.size]})
    return Check.holds("complete")


def is_cocomplete(A: VCategory) -> Check:
    Q = A.quantale
    if not conical_sup([], A):
        return Check.fails("cocomplete", {"missing": "empty supremum (bottom)"})
    rows = A.entries                                     # rows[x] = a(x, -)
    pairs, binary, scaled = _limit_shapes(A, rows)
    i = _first_missing(binary, rows)
    if i is not None:
        x, y = pairs[i]
        return Check.fails("cocomplete", {"missing": "supremum",
                                          "of": [A.labels[x], A.labels[y]]})
    i = _first_missing(scaled, rows)
    if i is not None:
        return Check.fails("cocomplete", {"missing": "tensor", "v": Q.label(i // A.size),
                                          "x": A.labels[i % A.size]})
    return Check.holds("cocomplete")


def left_of_sup(A: VCategory):
    """Search for a left adjoint ``t`` of ``sup: P(A) -> A``.

    Returns ``(t_rows, psis, sup_index, witness)`` where ``t_rows[a]`` is the
    candidate ``t(a)`` as a contravariant presheaf; ``witness`` is ``None``
    exactly when the adjunction ``[t(a), psi] = a(a, sup psi)`` holds.
    """
    if not is_complete(A):
        raise CompletenessError("complete distributivity needs a complete V-category")
    Q = A.quantale
    psis = presheaves(A, CONTRAVARIANT)
    sups = np.array([sup_of_presheaf(p, A)[0] for p in psis], dtype=np.int64)
    # A(a, S psi) for every a, psi
    a_to_sup = A.entries[:, sups]                                    # (|A|, |P|)
    # t(a)(x) = meet_psi hom(A(a, S psi), psi(x))
    t_rows = Q.meet_reduce(Q.hom_table[a_to_sup[:, :, None], psis[None, :, :]], axis=1)
    if len(psis) == 0:
        t_rows = np.full((A.size, A.size), Q.top, dtype=np.int64)
    witness = None
    for a in range(A.size):
        if not is_presheaf(A, t_rows[a], CONTRAVARIANT):
            witness = {"object": A.labels[a], "reason": "t(a) not a presheaf"}
            break
        lhs = Q.meet_reduce(Q.hom_table[t_rows[a][None, :], psis], axis=1) if A.size else \
            np.full(len(psis), Q.top, dtype=np.int64)
        bad = np.flatnonzero(lhs != a_to_sup[a])
        if len(bad):
            witness = {"object": A.labels[a],
                       "presheaf": [Q.label(v) for v in psis[bad[0]]]}
            break
    return t_rows, psis, sups, witness


def is_completely_distributive(A: VCategory) -> Check:
    """``sup: P(A) -> A`` has a further left adjoint."""
    *_, witness = left_of_sup(A)
    return Check.of("completely-distributive", witness is None, witness)


def is_totally_algebraic(A: VCategory) -> Check:
    """Completely distributive, and ``sup`` restricts to an isomorphism
    ``P(A0) -> A`` where ``A0`` is the equalizer of Yoneda and ``t``."""
    t_rows, _, _, witness = left_of_sup(A)
    if witness is not None:
        return Check.fails("totally-algebraic", {"not-completely-distributive": witness})
    Q = A.quantale
    a0 = [a for a in range(A.size) if np.array_equal(t_rows[a], A.entries[:, a])]
    sub = VCategory(Q, A.entries[np.ix_(a0, a0)], [A.labels[a] for a in a0], check=False)
    pre = presheaves(sub, CONTRAVARIANT)
    images = []
    for p in pre:
        s = weighted_colimit(p, a0, A)
        if not s:
            return Check.fails("totally-algebraic", {"no-colimit-for": p.tolist()})
        images.append(s[0])
    if sorted(images) != list(range(A.size)):
        missing = sorted(set(range(A.size)) - set(images))
        return Check.fails("totally-algebraic",
                           {"generators": [A.labels[a] for a in a0],
                            "not-reached": [A.labels[m] for m in missing],
                            "presheaves": len(pre)})
    img = np.array(images, dtype=np.int64)
    if not np.array_equal(_hom_table(Q, pre), A.entries[np.ix_(img, img)]):
        return Check.fails("totally-algebraic",
                           {"generators": [A.labels[a] for a in a0],
                            "reason": "restricted sup is not an isomorphism"})
    return Check.holds("totally-algebraic")


def is_vfunctor(f: Sequence[int], A: VCategory, B: VCategory) -> Check:
    Q = A.quantale
    f = np.asarray(f, dtype=np.int64)
    viol = ~Q.leq[A.entries, B.entries[np.ix_(f, f)]]
    if viol.any():
        x, y = map(int, np.argwhere(viol)[0])
        return Check.fails("v-functor", {"x": A.labels[x], "y": A.labels[y]})
    return Check.holds("v-functor")


def is_separated(A: VCategory) -> Check:
    for x, y in itertools.combinations(range(A.size), 2):
        if A.isomorphic_objects(x, y):
            return Check.fails("separated", {"x": A.labels[x], "y": A.labels[y]})
    return Check.holds("separated")


def find_isomorphism(a: np.ndarray, b: np.ndarray) -> tuple[int, ...] | None:
    """A bijection ``f`` with ``b[f(x), f(y)] = a[x, y]``, or ``None``.

    Works on any pair of square tables; pruned by diagonal values and sorted
    row/column profiles before backtracking.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return None
    n = a.shape[0]

    def sig(m, i):
        return (m[i, i], tuple(sorted(m[i, :])), tuple(sorted(m[:, i])))

    sa = [sig(a, i) for i in range(n)]
    sb = [sig(b, i) for i in range(n)]
    if sorted(sa) != sorted(sb):
        return None
    cand = [[j for j in range(n) if sb[j] == sa[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(cand[i]))
    f = [-1] * n
    used = [False] * n

    def go(k):
        if k == n:
            return True
        i = order[k]
        for j in cand[i]:
            if used[j]:
                continue
            ok = all(a[i, order[t]] == b[j, f[order[t]]] and
                     a[order[t], i] == b[f[order[t]], j] for t in range(k))
            if ok:
                f[i], used[j] = j, True
                if go(k + 1):
                    return True
                used[j] = False
        f[i] = -1
        return False

    return tuple(f) if go(0) else None


def enumerate_vcategories(n: int, Q: Quantale) -> list[VCategory]:
    """Every V-category structure on ``range(n)`` (not up to isomorphism)."""
    diag = [v for v in range(Q.size) if Q.leq[Q.unit, v]]
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    choices = [diag] * n + [range(Q.size)] * len(off)
    combos = list(itertools.product(*choices))
    raw = np.array(combos, dtype=np.int64).reshape(len(combos), n + len(off))
    mats = np.empty((len(raw), n, n), dtype=np.int64)
    for i in range(n):
        mats[:, i, i] = raw[:, i]
    for c, (i, j) in enumerate(off):
        mats[:, i, j] = raw[:, n + c]
    comp = Q.tensor_table[mats[:, :, :, None], mats[:, None, :, :]]   # (B, x, y, z) = a(x,y)*a(y,z)
    ok = Q.leq[comp, mats[:, :, None, :]].all(axis=(1, 2, 3))
    return [VCategory(Q, m, check=False) for m in mats[ok]]


def poset_reflection(A: VCategory) -> tuple[VCategory, tuple[int, ...]]:
    """Identify isomorphic objects; returns the quotient and the quotient map."""
    classes: list[int] = []
    cls_of = []
    for x in range(A.size):
        for c, rep in enumerate(classes):
            if A.isomorphic_objects(x, rep):
                cls_of.append(c)
                break
        else:
            classes.append(x)
            cls_of.append(len(classes) - 1)
    sub = A.entries[np.ix_(classes, classes)]
    return VCategory(A.quantale, sub, [A.labels[c] for c in classes], check=False), tuple(cls_of)
