"""The quantaloid Mat(V) of quantale-valued matrices between finite sets.

A matrix ``r: X -> Y`` stores ``entries[y, x]`` (target row, source column),
so composition reads ``(s . r)(z, x) = join_y s(z, y) * r(y, x)``.
Finite sets are identified with ``range(n)``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .quantale import Quantale

__all__ = [
    "VMatrix", "ShapeError", "compose", "identity", "involution", "extension",
    "lifting", "join", "meet", "from_function", "constant",
    "compose_entries",
]


class ShapeError(ValueError):
    pass


class VMatrix:
    __slots__ = ("quantale", "entries")

    def __init__(self, quantale: Quantale, entries):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ShapeError(f"matrix entries must be 2-d, got shape {a.shape}")
        if a.size and (a.min() < 0 or a.max() >= quantale.size):
            raise ValueError("matrix entry outside the quantale carrier")
        a.setflags(write=False)
        self.quantale = quantale
        self.entries = a

    @property
    def source(self) -> int:
        return self.entries.shape[1]

    @property
    def target(self) -> int:
        return self.entries.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __getitem__(self, idx):
        return int(self.entries[idx])

    def __matmul__(self, other: "VMatrix") -> "VMatrix":
        return compose(self, other)

    @property
    def converse(self) -> "VMatrix":
        return involution(self)

    def __eq__(self, other):
        if not isinstance(other, VMatrix):
            return NotImplemented
        return (self.quantale is other.quantale or self.quantale == other.quantale) \
            and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.entries.shape, self.entries.tobytes()))

    def __le__(self, other: "VMatrix") -> bool:
        _same_shape(self, other)
        return bool(self.quantale.leq[self.entries, other.entries].all())

    def __ge__(self, other: "VMatrix") -> bool:
        return other <= self

    def __or__(self, other):
        return join(self, other)

    def __and__(self, other):
        return meet(self, other)

    def labelled(self) -> list[list[str]]:
        return [[self.quantale.label(v) for v in row] for row in self.entries]

    def __repr__(self):
        return f"VMatrix({self.source}->{self.target}, {self.labelled()})"


def _same_shape(a: VMatrix, b: VMatrix):
    if a.shape != b.shape:
        raise ShapeError(f"parallel matrices required, got {a.shape} and {b.shape}")


def compose_entries(Q: Quantale, s: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Sup-of-tensor product of entry arrays; leading dimensions broadcast."""
    prod = Q.tensor_table[s[..., :, :, None], r[..., None, :, :]]
    return Q.join_reduce(prod, axis=-2)


def compose(s: VMatrix, r: VMatrix) -> VMatrix:
    """``s . r`` for ``r: X -> Y`` and ``s: Y -> Z``."""
    if s.source != r.target:
        raise ShapeError(f"cannot compose {s.source}->{s.target} after "
                         f"{r.source}->{r.target}")
    Q = s.quantale
    return VMatrix(Q, compose_entries(Q, s.entries, r.entries))


def identity(n: int, Q: Quantale) -> VMatrix:
    e = np.full((n, n), Q.bottom, dtype=np.int64)
    np.fill_diagonal(e, Q.unit)
    return VMatrix(Q, e)


def involution(r: VMatrix) -> VMatrix:
    return VMatrix(r.quantale, r.entries.T)


def extension(t: VMatrix, r: VMatrix) -> VMatrix:
    """Right adjoint to ``- . r``: ``(t / r)(z, y) = meet_x hom(r(y,x), t(z,x))``."""
    if t.source != r.source:
        raise ShapeError(f"extension needs common source, got {t.shape} and {r.shape}")
    Q = t.quantale
    h = Q.hom_table[r.entries[None, :, :], t.entries[:, None, :]]
    return VMatrix(Q, Q.meet_reduce(h, axis=-1))


def lifting(r: VMatrix, q: VMatrix) -> VMatrix:
    """Right adjoint to ``r . -``: ``(r \\ q)(x, z) = meet_y hom(r(y,x), q(y,z))``."""
    if r.target != q.target:
        raise ShapeError(f"lifting needs common target, got {r.shape} and {q.shape}")
    Q = r.quantale
    h = Q.hom_table[r.entries.T[:, None, :], q.entries.T[None, :, :]]
    return VMatrix(Q, Q.meet_reduce(h, axis=-1))


def join(*ms: VMatrix) -> VMatrix:
    Q = ms[0].quantale
    for m in ms[1:]:
        _same_shape(ms[0], m)
    return VMatrix(Q, Q.join_reduce(np.stack([m.entries for m in ms], -1), -1))


def meet(*ms: VMatrix) -> VMatrix:
    Q = ms[0].quantale
    for m in ms[1:]:
        _same_shape(ms[0], m)
    return VMatrix(Q, Q.meet_reduce(np.stack([m.entries for m in ms], -1), -1))


def from_function(f: Sequence[int], n_target: int, Q: Quantale) -> VMatrix:
    """The graph of ``f: X -> Y``: ``k`` at ``(f(x), x)`` and bottom elsewhere."""
    e = np.full((n_target, len(f)), Q.bottom, dtype=np.int64)
    e[np.asarray(f, dtype=np.int64), np.arange(len(f))] = Q.unit
    return VMatrix(Q, e)


def constant(n_target: int, n_source: int, value: int, Q: Quantale) -> VMatrix:
    return VMatrix(Q, np.full((n_target, n_source), value, dtype=np.int64))
