"""Strict topological theories on finite sets.

A theory packages a monad ``T`` acting on finite sets (identified with
``range(n)``), a quantale ``V`` and an algebra map ``xi: T(V) -> V``.  Maps
between finite sets are tuples; ``tmap(f, n)`` returns ``Tf`` as a tuple on
``T(len(f)) -> T(n)``.  Everything else in the package (lax extension,
Kleisli convolution, T-categories) is written against this small surface.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .quantale import Quantale
from .report import Check, Report
from .vmat import VMatrix, ShapeError, compose_entries, from_function, lifting

__all__ = [
    "Theory", "TheoryError", "IdentityTheory", "FiniteUltrafilterTheory",
    "Filter", "identity_theory", "finite_ultrafilter_theory", "make_theory",
    "TMatrix", "lax_extend", "kleisli_compose", "kleisli_lifting",
    "kleisli_identity", "kleisli_operator", "validate_theory",
    "all_ultrafilters",
]


class TheoryError(ValueError):
    pass


class Theory:
    """Base class; subclasses provide ``_tsize``, ``_tmap``, ``_unit``,
    ``_mult`` and ``_xi``.  Results are memoized per finite set / map."""

    name = "abstract"

    def __init__(self, quantale: Quantale):
        self.quantale = quantale
        self._memo: dict = {}
        self.metadata: dict = {}
        if self.tsize(1) != 1:
            raise TheoryError(f"{self.name}: T1 has {self.tsize(1)} elements; "
                              "only theories with T1 = 1 are supported")
        xi = np.asarray(self._xi(), dtype=np.int64)
        xi.setflags(write=False)
        self.xi = xi

    def __repr__(self):
        return f"{type(self).__name__}({self.quantale.name})"

    def _cached(self, key, fn):
        try:
            return self._memo[key]
        except KeyError:
            val = self._memo[key] = fn()
            return val

    def tsize(self, n: int) -> int:
        return self._cached(("size", n), lambda: self._tsize(n))

    def tmap(self, f: Sequence[int], n_target: int) -> tuple:
        f = tuple(int(v) for v in f)
        return self._cached(("map", f, n_target),
                            lambda: tuple(self._tmap(f, n_target)))

    def unit(self, n: int) -> tuple:
        return self._cached(("unit", n), lambda: tuple(self._unit(n)))

    def mult(self, n: int) -> tuple:
        return self._cached(("mult", n), lambda: tuple(self._mult(n)))

    def tlabels(self, labels: Sequence[str]) -> list[str]:
        """Printable names for the elements of T applied to a labelled set."""
        return [f"T{i}" for i in range(self.tsize(len(labels)))]

    # derived helpers ------------------------------------------------------

    def projections(self, n1: int, n2: int) -> tuple[np.ndarray, np.ndarray]:
        """``(T pi1, T pi2)`` on ``T(n1 x n2)``; pairs are encoded ``i*n2 + j``."""
        def build():
            pairs = list(itertools.product(range(n1), range(n2)))
            p1 = np.array(self.tmap([p[0] for p in pairs], n1), dtype=np.int64)
            p2 = np.array(self.tmap([p[1] for p in pairs], n2), dtype=np.int64)
            return p1, p2
        return self._cached(("proj", n1, n2), build)

    def xi_hat(self, phi: Sequence[int]) -> np.ndarray:
        """``xi . T(phi)`` for a function ``phi: X -> V``."""
        return self.xi[np.asarray(self.tmap(phi, self.quantale.size),
                                  dtype=np.int64)]

    def unit_matrix(self, n: int) -> VMatrix:
        return from_function(self.unit(n), self.tsize(n), self.quantale)

    def mult_matrix(self, n: int) -> VMatrix:
        return from_function(self.mult(n), self.tsize(n), self.quantale)

    def with_xi(self, xi: Sequence[int]) -> "Theory":
        """Copy of this theory with a replaced (unvalidated) algebra map."""
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone._memo = dict(self._memo)
        clone.metadata = dict(self.metadata, xi_overridden=True)
        arr = np.asarray(xi, dtype=np.int64)
        arr.setflags(write=False)
        clone.xi = arr
        return clone


class IdentityTheory(Theory):
    name = "identity"

    def _tsize(self, n):
        return n

    def _tmap(self, f, n_target):
        return f

    def _unit(self, n):
        return range(n)

    def _mult(self, n):
        return range(n)

    def _xi(self):
        return range(self.quantale.size)

    def tlabels(self, labels):
        return list(labels)


@dataclass(frozen=True)
class Filter:
    """A filter on ``range(n)``; on a finite set every filter is the set of
    supersets of its ``core`` (a bitmask)."""

    n: int
    core: int

    def __contains__(self, mask: int) -> bool:
        return mask & self.core == self.core

    @property
    def is_ultra(self) -> bool:
        return bin(self.core).count("1") == 1

    def members(self):
        return (m for m in range(1 << self.n) if m in self)


def all_ultrafilters(n: int) -> list[frozenset]:
    """Brute-force every ultrafilter on ``range(n)`` as a family of bitmasks.

    Only usable for tiny ``n``; serves as the oracle showing that finite
    ultrafilters are exactly the principal ones.
    """
    subsets = range(1 << n)
    full = (1 << n) - 1
    found = []
    for fam_bits in range(1 << (1 << n)):
        fam = {s for s in subsets if fam_bits >> s & 1}
        if 0 in fam or full not in fam:
            continue
        if any(a & b not in fam for a in fam for b in fam):
            continue
        if any(b not in fam for a in fam for b in subsets if a & b == a):
            continue
        if any((s in fam) == ((full ^ s) in fam) for s in subsets):
            continue
        found.append(frozenset(fam))
    return found


class FiniteUltrafilterTheory(Theory):
    """The ultrafilter monad restricted to finite sets.

    Every ultrafilter on a finite set is principal, so ``U(n)`` is listed as
    the principal ultrafilters in point order and the theory is isomorphic
    to the identity theory.  The operations are nevertheless evaluated
    through filter formulas (image filters, the union formula for ``m``,
    ``xi(u) = meet over A in u of join A``) rather than short-circuited.
    """

    name = "finite-ultrafilter"

    def __init__(self, quantale: Quantale):
        if quantale.size > 12:
            raise TheoryError("xi enumerates subsets of V; carrier too large")
        super().__init__(quantale)
        self.metadata["degenerate"] = (
            "ultrafilters on finite sets are principal: U(X) is isomorphic "
            "to X and this theory is isomorphic to the identity theory")

    def ultrafilters(self, n: int) -> list[Filter]:
        return self._cached(("uf", n),
                            lambda: [Filter(n, 1 << i) for i in range(n)])

    def _locate(self, filt: Filter) -> int:
        if not filt.is_ultra:
            raise TheoryError(f"{filt} is not an ultrafilter")
        return filt.core.bit_length() - 1

    def _tsize(self, n):
        return len(self.ultrafilters(n))

    def _tmap(self, f, n_target):
        out = []
        for u in self.ultrafilters(len(f)):
            image = 0
            for x in range(len(f)):
                if u.core >> x & 1:
                    image |= 1 << f[x]
            out.append(self._locate(Filter(n_target, image)))
        return out

    def _unit(self, n):
        return [self._locate(Filter(n, 1 << x)) for x in range(n)]

    def _mult(self, n):
        inner = self.ultrafilters(n)
        out = []
        for big in self.ultrafilters(len(inner)):
            core = 0
            for i, u in enumerate(inner):
                if big.core >> i & 1:
                    core |= u.core
            out.append(self._locate(Filter(n, core)))
        return out

    def _xi(self):
        Q = self.quantale
        vals = []
        for u in self.ultrafilters(Q.size):
            joins = [Q.join_all(i for i in range(Q.size) if A >> i & 1)
                     for A in u.members()]
            vals.append(Q.meet_all(joins))
        return vals

    def tlabels(self, labels):
        return list(labels)


def identity_theory(Q: Quantale) -> IdentityTheory:
    return IdentityTheory(Q)


def finite_ultrafilter_theory(Q: Quantale) -> FiniteUltrafilterTheory:
    return FiniteUltrafilterTheory(Q)


def make_theory(name: str, Q: Quantale) -> Theory:
    if name == "identity":
        return IdentityTheory(Q)
    if name in ("finite-ultrafilter", "ultrafilter"):
        return FiniteUltrafilterTheory(Q)
    if name == "word":
        raise TheoryError("the word theory has T1 = N (lists over a point) "
                          "and infinite T(X); it is excluded")
    raise TheoryError(f"unknown theory {name!r}")


# lax extension and Kleisli convolution -------------------------------------

def lax_extend(th: Theory, r: VMatrix) -> VMatrix:
    """``T_xi r: TX -> TY``, the join of ``xi.Tr(w)`` over the fibre of ``w``
    in ``T(Y x X)`` above each pair."""
    Q = th.quantale
    ny, nx = r.shape
    p1, p2 = th.projections(ny, nx)
    vals = th.xi_hat(r.entries.ravel())
    out = np.full((th.tsize(ny), th.tsize(nx)), Q.bottom, dtype=np.int64)
    J = Q.join_table
    for w in range(len(vals)):
        i, j = p1[w], p2[w]
        out[i, j] = J[out[i, j], vals[w]]
    return VMatrix(Q, out)


class TMatrix:
    """A T-matrix ``X -|-> Y``: a V-matrix ``X -> TY`` plus the sizes of X, Y."""

    __slots__ = ("theory", "source", "target", "matrix")

    def __init__(self, theory: Theory, source: int, target: int, matrix):
        if not isinstance(matrix, VMatrix):
            matrix = VMatrix(theory.quantale, matrix)
        if matrix.shape != (theory.tsize(target), source):
            raise ShapeError(f"T-matrix {source} -|-> {target} needs shape "
                             f"{(theory.tsize(target), source)}, got {matrix.shape}")
        self.theory = theory
        self.source = source
        self.target = target
        self.matrix = matrix

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries

    def __getitem__(self, idx):
        return int(self.matrix.entries[idx])

    def __matmul__(self, other: "TMatrix") -> "TMatrix":
        return kleisli_compose(self, other)

    def __le__(self, other: "TMatrix") -> bool:
        self._check_parallel(other)
        return self.matrix <= other.matrix

    def __ge__(self, other: "TMatrix") -> bool:
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, TMatrix):
            return NotImplemented
        return (self.source, self.target) == (other.source, other.target) \
            and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def _check_parallel(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ShapeError(f"parallel T-matrices required: "
                             f"{self.source}-|->{self.target} vs "
                             f"{other.source}-|->{other.target}")

    def __repr__(self):
        return f"TMatrix({self.source}-|->{self.target}, {self.matrix.labelled()})"


def kleisli_operator(beta: TMatrix) -> VMatrix:
    """``m_Z . T_xi beta : TY -> TZ`` for ``beta: Y -|-> Z``."""
    th = beta.theory
    tb = lax_extend(th, beta.matrix)
    return th.mult_matrix(beta.target) @ tb


def kleisli_compose(beta: TMatrix, alpha: TMatrix) -> TMatrix:
    if alpha.target != beta.source:
        raise ShapeError(f"cannot compose {beta.source}-|->{beta.target} after "
                         f"{alpha.source}-|->{alpha.target}")
    th = alpha.theory
    K = kleisli_operator(beta)
    return TMatrix(th, alpha.source, beta.target, K @ alpha.matrix)


def kleisli_identity(th: Theory, n: int) -> TMatrix:
    return TMatrix(th, n, n, th.unit_matrix(n))


def kleisli_lifting(psi: TMatrix, gamma: TMatrix) -> TMatrix:
    """Right adjoint to ``psi o -``: for ``psi: Y -|-> X``, ``gamma: Z -|-> X``
    returns the largest ``delta: Z -|-> Y`` with ``psi o delta <= gamma``."""
    if psi.target != gamma.target:
        raise ShapeError("kleisli_lifting needs psi and gamma with a common target")
    K = kleisli_operator(psi)
    return TMatrix(psi.theory, gamma.source, psi.source, lifting(K, gamma.matrix))


# validation -----------------------------------------------------------------

def _all_maps(n_src: int, n_tgt: int):
    return itertools.product(range(n_tgt), repeat=n_src)


def _compose_maps(g, f):
    return tuple(g[x] for x in f)


def validate_theory(th: Theory, sample_sizes: Sequence[int] = (0, 1, 2, 3),
                    seed: int = 0, hopf_samples: int = 8) -> Report:
    """Check the monad, algebra and compatibility axioms on small sets."""
    Q = th.quantale
    V = Q.size
    rep = Report(f"theory {th.name}({Q.name})")
    sizes = sorted(set(sample_sizes))
    small = [n for n in sizes if n <= 2]

    rep.add(Check.of("T1=1", th.tsize(1) == 1, th.tsize(1)))

    bad = None
    for n in sizes:
        if th.tmap(tuple(range(n)), n) != tuple(range(th.tsize(n))):
            bad = ("identity", n)
            break
    for a, b, c in itertools.product(small, repeat=3):
        if bad:
            break
        for f in _all_maps(a, b):
            for g in _all_maps(b, c):
                if th.tmap(_compose_maps(g, f), c) != \
                        _compose_maps(th.tmap(g, c), th.tmap(f, b)):
                    bad = ("composition", f, g)
                    break
            if bad:
                break
    rep.add(Check.of("functor-laws", bad is None, bad))

    bad = None
    for n in sizes:
        e, m, tn = th.unit(n), th.mult(n), th.tsize(n)
        e_t = th.unit(tn)
        te = th.tmap(e, tn)
        if any(m[e_t[w]] != w for w in range(tn)):
            bad = ("m.eT=id", n)
        elif any(m[te[w]] != w for w in range(tn)):
            bad = ("m.Te=id", n)
        else:
            mt = th.mult(tn)
            tm = th.tmap(m, tn)
            if any(m[mt[z]] != m[tm[z]] for z in range(th.tsize(th.tsize(tn)))):
                bad = ("m.mT=m.Tm", n)
        if bad:
            break
    for a, b in itertools.product(small, repeat=2):
        if bad:
            break
        for f in _all_maps(a, b):
            tf = th.tmap(f, b)
            if any(tf[th.unit(a)[x]] != th.unit(b)[f[x]] for x in range(a)):
                bad = ("e-natural", f)
                break
            ttf = th.tmap(tf, th.tsize(b))
            ma, mb = th.mult(a), th.mult(b)
            if any(tf[ma[z]] != mb[ttf[z]] for z in range(len(ma))):
                bad = ("m-natural", f)
                break
    rep.add(Check.of("monad-laws", bad is None, bad))

    xi = th.xi
    eV = th.unit(V)
    bad = next((Q.label(v) for v in range(V) if xi[eV[v]] != v), None)
    if bad is None:
        txi = th.tmap(xi, V)
        mV = th.mult(V)
        bad = next((z for z in range(th.tsize(th.tsize(V)))
                    if xi[txi[z]] != xi[mV[z]]), None)
        bad = None if bad is None else ("xi.Txi=xi.m", bad)
    else:
        bad = ("xi.e=id", bad)
    rep.add(Check.of("em-algebra", bad is None, bad))

    pairs = list(itertools.product(range(V), range(V)))
    p1, p2 = th.projections(V, V)
    t_tensor = th.tmap([Q.tensor(x, y) for x, y in pairs], V)
    t_hom = th.tmap([Q.hom(x, y) for x, y in pairs], V)
    bad = next((w for w in range(len(p1))
                if xi[t_tensor[w]] != Q.tensor(xi[p1[w]], xi[p2[w]])), None)
    if bad is None:
        tk = th.tmap((Q.unit,), V)
        if xi[tk[0]] != Q.unit:
            bad = "xi.T(k) != k"
    rep.add(Check.of("monoid-lifting", bad is None, bad))
    bad = next((w for w in range(len(p1))
                if not Q.le(Q.hom(xi[p1[w]], xi[p2[w]]), xi[t_hom[w]])), None)
    rep.add(Check.of("hom-oplax", bad is None, bad))

    # P_V naturality of xi_X(phi) = xi.T(phi)
    bad = None
    for a, b in itertools.product(small, repeat=2):
        for f in _all_maps(a, b):
            tf = th.tmap(f, b)
            for phi in _all_maps(a, V):
                pushed = [Q.join_all(phi[x] for x in range(a) if f[x] == y)
                          for y in range(b)]
                lhs = th.xi_hat(pushed)
                xphi = th.xi_hat(phi)
                rhs = [Q.join_all(xphi[w] for w in range(len(tf)) if tf[w] == t)
                       for t in range(th.tsize(b))]
                if list(lhs) != rhs:
                    bad = (f, phi)
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check.of("xi-natural", bad is None, bad))

    # weak pullback spot checks
    bad = None
    for a, b, c in itertools.product(small, repeat=3):
        for f in _all_maps(a, c):
            for g in _all_maps(b, c):
                pb = [(x, y) for x in range(a) for y in range(b) if f[x] == g[y]]
                tf, tg = th.tmap(f, c), th.tmap(g, c)
                t1 = th.tmap([p[0] for p in pb], a)
                t2 = th.tmap([p[1] for p in pb], b)
                covered = set(zip(t1, t2))
                need = {(u, v) for u in range(th.tsize(a))
                        for v in range(th.tsize(b)) if tf[u] == tg[v]}
                if not need <= covered:
                    bad = ("T-pullback", f, g)
                    break
            if bad:
                break
        if bad:
            break
    for a, b in itertools.product(small, repeat=2):
        if bad:
            break
        for f in _all_maps(a, b):
            tf = th.tmap(f, b)
            ttf = th.tmap(tf, th.tsize(b))
            ma, mb = th.mult(a), th.mult(b)
            covered = {(ma[z], ttf[z]) for z in range(len(ma))}
            need = {(u, Z) for u in range(th.tsize(a))
                    for Z in range(len(mb)) if tf[u] == mb[Z]}
            if not need <= covered:
                bad = ("m-square", f)
                break
    rep.add(Check.of("beck-chevalley-spot", bad is None, bad))

    rng = random.Random(seed)
    bad = None
    for _ in range(hopf_samples):
        nx, ny, nx2, ny2 = (rng.choice([n for n in sizes if n > 0] or [1])
                            for _ in range(4))
        r = VMatrix(Q, [[rng.randrange(V) for _ in range(nx)] for _ in range(nx2)])
        s = VMatrix(Q, [[rng.randrange(V) for _ in range(ny)] for _ in range(ny2)])
        if not _hopf_square(th, r, s):
            bad = (r.labelled(), s.labelled())
            break
    rep.add(Check.of("hopf-square", bad is None, bad))
    tk = lax_extend(th, VMatrix(Q, [[Q.unit]]))
    rep.add(Check.of("hopf-unit", tk.entries.tolist() == [[Q.unit]],
                     tk.entries.tolist()))

    if isinstance(th, FiniteUltrafilterTheory):
        bad = None
        for n in (0, 1, 2, 3):
            brute = {frozenset(f) for f in all_ultrafilters(n)}
            listed = {frozenset(u.members()) for u in th.ultrafilters(n)}
            if brute != listed:
                bad = n
                break
        rep.add(Check.of("ultrafilters-principal", bad is None, bad))
    return rep


def _tensor_matrix(Q: Quantale, r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """(r (x) s)((x',y'),(x,y)) = r(x',x) * s(y',y) with pairs encoded row-major."""
    out = Q.tensor_table[r[:, None, :, None], s[None, :, None, :]]
    a, b, c, d = out.shape
    return out.reshape(a * b, c * d)


def _hopf_square(th: Theory, r: VMatrix, s: VMatrix) -> bool:
    Q = th.quantale
    (nx2, nx), (ny2, ny) = r.shape, s.shape
    rs = VMatrix(Q, _tensor_matrix(Q, r.entries, s.entries))
    lhs_inner = lax_extend(th, rs)

    def tau(a, b):
        p1, p2 = th.projections(a, b)
        return [int(i) * th.tsize(b) + int(j) for i, j in zip(p1, p2)]

    tau1 = from_function(tau(nx, ny), th.tsize(nx) * th.tsize(ny), Q)
    tau2 = from_function(tau(nx2, ny2), th.tsize(nx2) * th.tsize(ny2), Q)
    lhs = tau2 @ lhs_inner
    tr, ts = lax_extend(th, r), lax_extend(th, s)
    rhs = VMatrix(Q, _tensor_matrix(Q, tr.entries, ts.entries)) @ tau1
    return lhs == rhs
