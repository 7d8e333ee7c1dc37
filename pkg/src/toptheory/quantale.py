"""Finite commutative unital quantales given by explicit tables.

Elements are addressed internally by their index ``0..n-1``; ``carrier``
holds the printable identifiers.  All derived structure (binary join and
meet, residuation ``hom``, top, bottom) lives in numpy lookup tables so the
matrix code can evaluate whole arrays of entries at once.
"""

from __future__ import annotations

import itertools
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .report import Check, Report

__all__ = [
    "Quantale", "QuantaleError", "make_builtin", "two", "goedel_chain",
    "lawvere_chain", "product", "from_tables", "validate", "totally_below",
    "check_frm_hypotheses",
]


class QuantaleError(ValueError):
    """Raised when a table fails a quantale law; carries the full report."""

    def __init__(self, report: Report):
        self.report = report
        first = report.failures()[0]
        super().__init__(f"{report.subject}: law '{first.law}' violated, "
                         f"witness {first.witness}")


class Quantale:
    def __init__(self, carrier: Sequence[str], leq, tensor, unit,
                 name: str = "custom", hom=None, check: bool = True):
        self.carrier = tuple(str(c) for c in carrier)
        if len(set(self.carrier)) != len(self.carrier):
            raise ValueError("duplicate element identifiers")
        self.index = {c: i for i, c in enumerate(self.carrier)}
        self.name = name
        n = len(self.carrier)
        self.leq = _frozen(np.asarray(leq, dtype=bool).reshape(n, n))
        self.tensor_table = _frozen(np.asarray(tensor, dtype=np.int64).reshape(n, n))
        self.unit = unit if isinstance(unit, (int, np.integer)) else self.index[unit]
        self.unit = int(self.unit)
        self._given_hom = hom
        if check:
            report = validate(self)
            if not report.ok:
                raise QuantaleError(report)

    def __repr__(self):
        return f"Quantale({self.name}, n={self.size})"

    @property
    def size(self) -> int:
        return len(self.carrier)

    def elements(self) -> range:
        return range(self.size)

    def label(self, i) -> str:
        return self.carrier[int(i)]

    def el(self, label) -> int:
        """Index of an element given either its identifier or its index."""
        if isinstance(label, (int, np.integer)):
            return int(label)
        return self.index[str(label)]

    # lattice structure -------------------------------------------------

    def le(self, x, y) -> bool:
        return bool(self.leq[x, y])

    @cached_property
    def join_table(self) -> np.ndarray:
        """Binary join table."""
        return _frozen(_bound_table(self.leq, upper=True))

    @cached_property
    def meet_table(self) -> np.ndarray:
        """Binary meet table."""
        return _frozen(_bound_table(self.leq, upper=False))

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    def join(self, x, y) -> int:
        return int(self.join_table[x, y])

    def meet(self, x, y) -> int:
        return int(self.meet_table[x, y])

    def join_all(self, xs: Iterable[int]) -> int:
        return int(reduce(lambda a, b: self.join_table[a, b], xs, self.bottom))

    def meet_all(self, xs: Iterable[int]) -> int:
        return int(reduce(lambda a, b: self.meet_table[a, b], xs, self.top))

    def join_reduce(self, arr: np.ndarray, axis: int = -1) -> np.ndarray:
        return _reduce(self.join_table, self.bottom, arr, axis)

    def meet_reduce(self, arr: np.ndarray, axis: int = -1) -> np.ndarray:
        return _reduce(self.meet_table, self.top, arr, axis)

    # monoidal closed structure -----------------------------------------

    def tensor(self, x, y) -> int:
        return int(self.tensor_table[x, y])

    @cached_property
    def hom_table(self) -> np.ndarray:
        """Residuation table, ``hom_table[y, z] = hom(y, z)``."""
        if self._given_hom is not None:
            h = np.asarray(self._given_hom, dtype=np.int64)
        else:
            h = _residuate(self.leq, self.tensor_table)
        return _frozen(h.reshape(self.size, self.size))

    def hom(self, y, z) -> int:
        return int(self.hom_table[y, z])

    @cached_property
    def totally_below_table(self) -> np.ndarray:
        return totally_below(self)

    def __eq__(self, other):
        if not isinstance(other, Quantale):
            return NotImplemented
        return (self.carrier == other.carrier and self.unit == other.unit
                and np.array_equal(self.leq, other.leq)
                and np.array_equal(self.tensor_table, other.tensor_table))

    def __hash__(self):
        return hash((self.carrier, self.unit, self.tensor_table.tobytes()))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def _reduce(table, neutral, arr, axis):
    arr = np.asarray(arr)
    axis %= arr.ndim
    if arr.shape[axis] == 0:
        return np.full(arr.shape[:axis] + arr.shape[axis + 1:], neutral, dtype=np.int64)
    acc = arr.take(0, axis=axis)
    for i in range(1, arr.shape[axis]):
        acc = table[acc, arr.take(i, axis=axis)]
    return np.asarray(acc, dtype=np.int64)


def _least(leq: np.ndarray, candidates: np.ndarray) -> int | None:
    """Index of the least element among ``candidates`` (bool mask), if any."""
    idx = np.flatnonzero(candidates)
    for c in idx:
        if leq[c, idx].all():
            return int(c)
    return None


def _bound_table(leq: np.ndarray, upper: bool) -> np.ndarray:
    n = leq.shape[0]
    out = np.empty((n, n), dtype=np.int64)
    order = leq if upper else leq.T
    for x in range(n):
        for y in range(n):
            ub = order[x] & order[y]
            out[x, y] = _least(order, ub)
    return out


def _residuate(leq: np.ndarray, T: np.ndarray) -> np.ndarray:
    """hom(y, z): the element h whose down-set is exactly {x : x*y <= z}."""
    n = leq.shape[0]
    h = np.empty((n, n), dtype=np.int64)
    for y in range(n):
        for z in range(n):
            allowed = leq[T[:, y], z]
            hits = [c for c in range(n) if np.array_equal(leq[:, c], allowed)]
            if not hits:
                raise ValueError(f"no residual hom({y},{z})")
            h[y, z] = hits[0]
    return h


# validation -------------------------------------------------------------

def _subset_lub(leq, members):
    n = leq.shape[0]
    ub = np.ones(n, dtype=bool)
    for m in members:
        ub &= leq[m]
    return _least(leq, ub)


def validate(Q: Quantale) -> Report:
    """Exhaustively check every quantale law, collecting witnesses."""
    rep = Report(f"quantale {Q.name}")
    n = Q.size
    leq, T, k = Q.leq, Q.tensor_table, Q.unit
    E = range(n)

    if T.min(initial=0) < 0 or T.max(initial=0) >= n or not 0 <= k < n:
        rep.add(Check.fails("totality", "tensor table entry outside carrier"))
        return rep

    bad = next((x for x in E if not leq[x, x]), None)
    rep.add(Check.of("order-reflexive", bad is None, bad))
    bad = next(((x, y) for x in E for y in E
                if x != y and leq[x, y] and leq[y, x]), None)
    rep.add(Check.of("order-antisymmetric", bad is None, bad))
    bad = next(((x, y, z) for x, y, z in itertools.product(E, repeat=3)
                if leq[x, y] and leq[y, z] and not leq[x, z]), None)
    rep.add(Check.of("order-transitive", bad is None, bad))
    if not rep.ok:
        return rep

    subsets = [tuple(s) for r in range(n + 1)
               for s in itertools.combinations(E, r)]
    lubs = {}
    bad = None
    for s in subsets:
        lubs[s] = _subset_lub(leq, s)
        if lubs[s] is None and bad is None:
            bad = [Q.label(i) for i in s]
    rep.add(Check.of("complete-lattice", bad is None, bad))
    if not rep.ok:
        return rep

    lab = Q.label
    bad = next(((lab(x), lab(y), lab(z)) for x, y, z in
                itertools.product(E, repeat=3)
                if T[T[x, y], z] != T[x, T[y, z]]), None)
    rep.add(Check.of("tensor-associative", bad is None, bad))
    bad = next(((lab(x), lab(y)) for x in E for y in E
                if T[x, y] != T[y, x]), None)
    rep.add(Check.of("tensor-commutative", bad is None, bad))
    bad = next((lab(x) for x in E if T[x, k] != x or T[k, x] != x), None)
    rep.add(Check.of("tensor-unit", bad is None, bad))
    bad = None
    for x in E:
        for s in subsets:
            lhs = T[x, lubs[s]]
            rhs = _subset_lub(leq, sorted({int(T[x, y]) for y in s}))
            if lhs != rhs:
                bad = (lab(x), [lab(i) for i in s])
                break
        if bad:
            break
    rep.add(Check.of("tensor-preserves-joins", bad is None, bad))
    if not rep.ok:
        return rep

    try:
        H = Q.hom_table
    except ValueError as exc:
        rep.add(Check.fails("residuation", str(exc)))
        return rep
    bad = next(((lab(x), lab(y), lab(z)) for x, y, z in
                itertools.product(E, repeat=3)
                if bool(leq[T[x, y], z]) != bool(leq[x, H[y, z]])), None)
    rep.add(Check.of("residuation", bad is None, bad))
    return rep


def totally_below(Q: Quantale) -> np.ndarray:
    """``ll[u, v]`` iff every subset whose join dominates v has a member above u.

    Computed literally by quantifying over all subsets of the carrier.
    """
    n = Q.size
    leq = Q.leq
    ll = np.ones((n, n), dtype=bool)
    for r in range(n + 1):
        for s in itertools.combinations(range(n), r):
            j = Q.join_all(s)
            above = np.zeros(n, dtype=bool)
            for m in s:
                above |= leq[:, m]
            # s is a cover of every v <= j; u needs some member of s above it
            for v in np.flatnonzero(leq[:, j]):
                ll[:, v] &= above
    return _frozen(ll)


def check_frm_hypotheses(Q: Quantale) -> Report:
    """Quantale conditions under which ultrafilter suprema reduce to finite ones."""
    rep = Report(f"frm-hypotheses {Q.name}")
    rep.add(Check.of("top-equals-unit", Q.top == Q.unit,
                     (Q.label(Q.top), Q.label(Q.unit))))
    below_k = [u for u in Q.elements() if Q.totally_below_table[u, Q.unit]]
    directed = bool(below_k) and all(
        any(Q.le(u, w) and Q.le(v, w) for w in below_k)
        for u in below_k for v in below_k)
    rep.add(Check.of("totally-below-unit-directed", directed,
                     [Q.label(u) for u in below_k]))
    bad = next(((Q.label(u), Q.label(v)) for u in Q.elements()
                for v in Q.elements()
                if Q.le(Q.unit, Q.join(u, v))
                and not (Q.le(Q.unit, u) or Q.le(Q.unit, v))), None)
    rep.add(Check.of("unit-join-prime", bad is None, bad))
    return rep


# builders ---------------------------------------------------------------

def two() -> Quantale:
    leq = [[True, True], [False, True]]
    return Quantale(["0", "1"], leq, [[0, 0], [0, 1]], 1, name="two")


def goedel_chain(n: int) -> Quantale:
    if n < 2:
        raise ValueError("goedel-chain needs n >= 2")
    idx = np.arange(n)
    leq = idx[:, None] <= idx[None, :]
    tensor = np.minimum(idx[:, None], idx[None, :])
    hom = np.where(leq, n - 1, idx[None, :])
    return Quantale([str(i) for i in range(n)], leq, tensor, n - 1,
                    name=f"goedel-chain({n})", hom=hom)


def lawvere_chain(n: int) -> Quantale:
    """Distances {0, 1, ..., n-2, inf} ordered by reversed numeric order.

    Index ``i < n-1`` is the distance ``i``; index ``n-1`` is infinity.
    Addition saturates to infinity once the sum exceeds ``n-2``.
    """
    if n < 2:
        raise ValueError("lawvere-chain needs n >= 2")
    cap = n - 2
    inf = n - 1
    num = np.arange(n)
    leq = num[:, None] >= num[None, :]
    s = num[:, None] + num[None, :]
    tensor = np.where((s > cap) | (num[:, None] == inf) | (num[None, :] == inf),
                      inf, s)
    # hom(y, z): numerically least x with x + y >= z after saturation
    hom = np.empty((n, n), dtype=np.int64)
    for y in range(n):
        for z in range(n):
            hom[y, z] = min(x for x in range(n) if tensor[x, y] >= z)
    labels = [str(i) for i in range(cap + 1)] + ["inf"]
    return Quantale(labels, leq, tensor, 0, name=f"lawvere-chain({n})",
                    hom=hom)


def product(P: Quantale, Q: Quantale) -> Quantale:
    pairs = list(itertools.product(P.elements(), Q.elements()))
    m = len(pairs)
    leq = np.zeros((m, m), dtype=bool)
    tensor = np.zeros((m, m), dtype=np.int64)
    pos = {p: i for i, p in enumerate(pairs)}
    for i, (a, b) in enumerate(pairs):
        for j, (c, d) in enumerate(pairs):
            leq[i, j] = P.leq[a, c] and Q.leq[b, d]
            tensor[i, j] = pos[(P.tensor(a, c), Q.tensor(b, d))]
    labels = [f"({P.label(a)},{Q.label(b)})" for a, b in pairs]
    return Quantale(labels, leq, tensor, pos[(P.unit, Q.unit)],
                    name=f"product({P.name},{Q.name})")


def from_tables(carrier: Sequence[str], leq_pairs, tensor: dict, unit: str,
                name: str = "custom", check: bool = True) -> Quantale:
    """Build from identifier-level data.

    ``leq_pairs`` lists (x, y) with x <= y; reflexive pairs are implied but
    nothing else is inferred.  ``tensor`` maps (x, y) to x*y and must be total.
    """
    carrier = [str(c) for c in carrier]
    ix = {c: i for i, c in enumerate(carrier)}
    n = len(carrier)
    leq = np.eye(n, dtype=bool)
    for x, y in leq_pairs:
        leq[ix[str(x)], ix[str(y)]] = True
    T = np.full((n, n), -1, dtype=np.int64)
    for (x, y), z in tensor.items():
        T[ix[str(x)], ix[str(y)]] = ix[str(z)]
    missing = [(carrier[i], carrier[j]) for i in range(n) for j in range(n)
               if T[i, j] < 0]
    if missing:
        rep = Report(f"quantale {name}")
        rep.add(Check.fails("totality", missing[0]))
        raise QuantaleError(rep)
    return Quantale(carrier, leq, T, ix[str(unit)], name=name, check=check)


def make_builtin(name: str, n: int | None = None, *factors: Quantale,
                 **tables) -> Quantale:
    """Dispatch on a builder id: two, goedel-chain, lawvere-chain, product,
    custom-table."""
    if name == "two":
        return two()
    if name == "goedel-chain":
        return goedel_chain(3 if n is None else n)
    if name == "lawvere-chain":
        return lawvere_chain(4 if n is None else n)
    if name == "product":
        if len(factors) != 2:
            raise ValueError("product needs exactly two quantales")
        return product(*factors)
    if name == "custom-table":
        return from_tables(**tables)
    raise ValueError(f"unknown quantale builder {name!r}")
