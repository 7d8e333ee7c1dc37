"""Adjoint distributors out of the unit ``E`` and the Cauchy completion.

A left adjoint ``psi: E -|-> X`` is a function ``TX -> V``; its right adjoint
``phi: X -|-> E`` is a function ``X -> V`` (since ``T1 = 1``).  Right
adjoints are found as the residual ``psi ⧅ a``, the largest candidate, so a
left adjoint exists exactly when that candidate passes unit and counit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .report import Check, Report
from .tcat import (TCategory, TCategoryError, dual, exponential_graph, is_tcategory,
                   is_tfunctor, lax_extend_batch, point_distributor)
from .theory import TMatrix, kleisli_compose, kleisli_operator
from .vmat import compose_entries

__all__ = [
    "AdjointPair", "left_adjoint_distributors", "adjoint_pairs_bruteforce",
    "cauchy_completion", "is_cauchy_complete", "yoneda_indices",
]


@dataclass(frozen=True)
class AdjointPair:
    left: tuple[int, ...]          # psi on TX
    right: tuple[int, ...]         # phi on X
    unit: int                      # (phi o psi)(*, *), at least k

    def to_dict(self, X: TCategory) -> dict:
        Q = X.quantale
        return {"left": dict(zip(X.tlabels(), (Q.label(v) for v in self.left))),
                "right": dict(zip(X.labels, (Q.label(v) for v in self.right))),
                "unit": Q.label(self.unit)}


def _as_left(X: TCategory, values) -> TMatrix:
    th = X.theory
    return TMatrix(th, 1, X.size, np.asarray(values, dtype=np.int64).reshape(th.tsize(X.size), 1))


def _as_right(X: TCategory, values) -> TMatrix:
    return TMatrix(X.theory, X.size, 1, np.asarray(values, dtype=np.int64).reshape(1, X.size))


def _left_candidates(X: TCategory) -> np.ndarray:
    """Every function ``TX -> V`` that is a distributor ``E -|-> X``,
    i.e. ``a o psi <= psi`` and ``psi o k <= psi``; one row per candidate."""
    th, Q = X.theory, X.quantale
    tn = th.tsize(X.size)
    cand = np.array(list(itertools.product(range(Q.size), repeat=tn)),
                    dtype=np.int64).reshape(Q.size ** tn, tn)
    K = kleisli_operator(X.tmatrix()).entries                       # TX -> TX
    ok = Q.leq[compose_entries(Q, K[None], cand[:, :, None])[:, :, 0], cand].all(axis=1)
    # psi o k_! = m_X . T_xi psi . k
    ext = lax_extend_batch(th, cand[:, :, None])                    # (B, TTX, 1)
    mult = np.asarray(th.mult(X.size), dtype=np.int64)
    back = np.full((len(cand), tn), Q.bottom, dtype=np.int64)
    for z in range(len(mult)):
        back[:, mult[z]] = Q.join_table[back[:, mult[z]], Q.tensor_table[ext[:, z, 0], Q.unit]]
    ok &= Q.leq[back, cand].all(axis=1)
    return cand[ok]


def _pairs_for(X: TCategory, lefts: np.ndarray) -> list[AdjointPair]:
    """Test the largest right candidate ``psi ⧅ a`` for each left candidate."""
    th, Q = X.theory, X.quantale
    a = X.entries
    ext = lax_extend_batch(th, lefts[:, :, None])                   # (B, TTX, 1)
    mult = np.asarray(th.mult(X.size), dtype=np.int64)
    K = np.full(lefts.shape, Q.bottom, dtype=np.int64)              # m . T_xi psi on T1
    for z in range(len(mult)):
        K[:, mult[z]] = Q.join_table[K[:, mult[z]], ext[:, z, 0]]
    # phi(x) = meet_t hom(K(t), a(t, x))
    if lefts.shape[1]:
        phi = Q.meet_reduce(Q.hom_table[K[:, :, None], a[None, :, :]], axis=1)
    else:
        phi = np.full((len(lefts), X.size), Q.top, dtype=np.int64)
    tphi = lax_extend_batch(th, phi[:, None, :])[:, 0, :]           # T1 x TX
    unit = Q.join_reduce(Q.tensor_table[tphi, lefts], axis=1) if lefts.shape[1] else \
        np.full(len(lefts), Q.bottom, dtype=np.int64)
    counit = Q.leq[Q.tensor_table[K[:, :, None], phi[:, None, :]], a[None]].all(axis=(1, 2))
    out = []
    for i in np.flatnonzero(Q.leq[Q.unit, unit] & counit):
        out.append(AdjointPair(tuple(int(v) for v in lefts[i]),
                               tuple(int(v) for v in phi[i]), int(unit[i])))
    return out


def left_adjoint_distributors(X: TCategory) -> list[AdjointPair]:
    """All adjoint pairs ``psi -| phi`` with ``psi: E -|-> X``, ordered by ``psi``."""
    return _pairs_for(X, _left_candidates(X))


def adjoint_pairs_bruteforce(X: TCategory) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Slow oracle: every pair ``(psi, phi)`` of distributors satisfying unit and
    counit, with no use of residuals."""
    th, Q = X.theory, X.quantale
    tn = th.tsize(X.size)
    E = TMatrix(th, 1, 1, [[Q.unit]])
    a = X.tmatrix()
    lefts = [tuple(v) for v in _left_candidates(X)]
    rights = []
    for vals in itertools.product(range(Q.size), repeat=X.size):
        phi = _as_right(X, vals)
        if kleisli_compose(phi, a) <= phi and kleisli_compose(E, phi) <= phi:
            rights.append(vals)
    pairs = []
    for l in lefts:
        psi = _as_left(X, l)
        for r in rights:
            phi = _as_right(X, r)
            if Q.leq[Q.unit, kleisli_compose(phi, psi).entries[0, 0]] and \
                    kleisli_compose(psi, phi) <= a:
                pairs.append((l, tuple(r)))
    return pairs


def yoneda_indices(X: TCategory, pairs: list[AdjointPair]) -> tuple[int, ...] | None:
    """Index of ``x_*`` among ``pairs`` for each object ``x`` (None if missing)."""
    lefts = {p.left: i for i, p in enumerate(pairs)}
    out = []
    for x in range(X.size):
        lower, _ = point_distributor(X, x)
        idx = lefts.get(tuple(int(v) for v in lower))
        if idx is None:
            return None
        out.append(idx)
    return tuple(out)


def cauchy_completion(X: TCategory) -> tuple[TCategory, tuple[int, ...], list[AdjointPair]]:
    """``(X~, y, pairs)``: objects of ``X~`` are the left adjoints ``E -|-> X``
    carrying the exponential T-graph structure of ``V^(X^op)``; ``y(x) = x_*``."""
    pairs = left_adjoint_distributors(X)
    Xop = dual(X)
    G = exponential_graph(Xop, [p.left for p in pairs])
    labels = [_name_pair(X, i, p) for i, p in enumerate(pairs)]
    tilde = TCategory(X.theory, len(pairs), G.matrix, labels, check=False)
    rep = Report("cauchy-completion")
    rep.add(is_tcategory(tilde))
    y = yoneda_indices(X, pairs)
    rep.add(Check.of("representables-adjoint", y is not None))
    if y is not None:
        rep.add(is_tfunctor(y, X, tilde))
    if not rep.ok:
        raise TCategoryError(rep)
    return tilde, y, pairs


def _name_pair(X: TCategory, i: int, p: AdjointPair) -> str:
    for x in range(X.size):
        if tuple(int(v) for v in X.entries[:, x]) == p.left:
            return f"{X.labels[x]}_*"
    return f"psi{i}"


def is_cauchy_complete(X: TCategory) -> Check:
    """Every left adjoint ``E -|-> X`` is ``x_*`` for some ``x``."""
    reps = {tuple(int(v) for v in X.entries[:, x]) for x in range(X.size)}
    for p in left_adjoint_distributors(X):
        if p.left not in reps:
            return Check.fails("cauchy-complete", p.to_dict(X))
    return Check.holds("cauchy-complete")
