"""Acyclic quivers, their representations over F_p, and morphisms.

Convention: an arrow ``a: i -> j`` carries a linear map ``R_i -> R_j``,
stored as a ``dim(j) x dim(i)`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping, Sequence

import numpy as np

from .config import LIMITS
from .errors import BoundExceeded
from .linalg import FpMat, block_diag, is_prime


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


class Quiver:
    """Finite acyclic quiver with ordered, distinct vertex labels."""

    def __init__(self, vertices: Sequence[str], arrows: Iterable[Arrow | tuple[str, str, str]] = ()):
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be distinct")
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*map(str, a))
            arrs.append(a)
        self.arrows: tuple[Arrow, ...] = tuple(arrs)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be distinct")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise ValueError(f"arrow {a.name} has an undeclared endpoint")
        ts = TopologicalSorter({v: set() for v in self.vertices})
        for a in self.arrows:
            ts.add(a.target, a.source)
        try:
            order = list(ts.static_order())
        except CycleError as exc:
            raise ValueError("quiver has an oriented cycle") from exc
        # stable topological order: repeatedly take the earliest declared available vertex
        self.topo_order: tuple[str, ...] = _stable_topo(self.vertices, self.arrows) if order else ()
        self._arrow = {a.name: a for a in self.arrows}
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def arrow(self, name: str) -> Arrow:
        return self._arrow[name]

    def index(self, v: str) -> int:
        return self._index[v]

    def out_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def in_arrows(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def subquiver(self, vertices: Iterable[str]) -> "Quiver":
        keep = set(vertices)
        return Quiver([v for v in self.vertices if v in keep],
                      [a for a in self.arrows if a.source in keep and a.target in keep])

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.name, a.target, a.source) for a in self.arrows])

    @cached_property
    def _paths(self) -> dict[tuple[str, str], list[tuple[str, ...]]]:
        out: dict[tuple[str, str], list[tuple[str, ...]]] = {}
        for v in self.vertices:
            out[(v, v)] = [()]
        for v in reversed(self.topo_order):
            for a in self.out_arrows(v):
                for w in self.vertices:
                    for rest in out.get((a.target, w), []):
                        out.setdefault((v, w), []).append((a.name,) + rest)
        return out

    def paths(self, source: str, target: str) -> list[tuple[str, ...]]:
        """All paths ``source -> target`` as arrow-name tuples in traversal order."""
        return self._paths.get((source, target), [])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self) -> int:
        return hash((self.vertices, self.arrows))

    def __repr__(self) -> str:
        arr = ", ".join(f"{a.name}:{a.source}->{a.target}" for a in self.arrows)
        return f"Quiver({list(self.vertices)}; {arr})"


def _stable_topo(vertices: Sequence[str], arrows: Sequence[Arrow]) -> tuple[str, ...]:
    indeg = {v: 0 for v in vertices}
    for a in arrows:
        indeg[a.target] += 1
    done: list[str] = []
    remaining = list(vertices)
    while remaining:
        for v in remaining:
            if indeg[v] == 0:
                break
        remaining.remove(v)
        done.append(v)
        for a in arrows:
            if a.source == v:
                indeg[a.target] -= 1
    return tuple(done)


class Rep:
    """Finite-dimensional representation of a quiver over F_p."""

    def __init__(self, quiver: Quiver, p: int, dims: Mapping[str, int], mats: Mapping[str, FpMat | Sequence] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.quiver = quiver
        self.p = p
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise ValueError("dimensions must be non-negative")
        if set(dims) - set(quiver.vertices):
            raise ValueError(f"unknown vertices {sorted(set(dims) - set(quiver.vertices))}")
        total = sum(self.dims.values())
        if total > LIMITS.max_total_dim:
            raise BoundExceeded(f"total dimension {total} exceeds bound {LIMITS.max_total_dim}")
        mats = dict(mats or {})
        if set(mats) - {a.name for a in quiver.arrows}:
            raise ValueError(f"unknown arrows {sorted(set(mats) - {a.name for a in quiver.arrows})}")
        self.mats: dict[str, FpMat] = {}
        for a in quiver.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            m = mats.get(a.name)
            if m is None:
                m = FpMat.zeros(p, *shape)
            elif not isinstance(m, FpMat):
                m = FpMat(p, m, shape=shape)
            if m.p != p:
                raise ValueError(f"arrow {a.name}: matrix over F_{m.p}, expected F_{p}")
            if m.shape != shape:
                raise ValueError(f"arrow {a.name}: shape {m.shape}, expected {shape}")
            self.mats[a.name] = m
        self._key = None

    # identity / hashing is structural (same matrices), not up to isomorphism
    def key(self) -> bytes:
        if self._key is None:
            parts = [repr((self.quiver.vertices, self.quiver.arrows, self.p)).encode()]
            parts.append(repr(self.dim_vector).encode())
            parts.extend(self.mats[a.name].a.tobytes() for a in self.quiver.arrows)
            self._key = b"|".join(parts)
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        dv = ",".join(str(self.dims[v]) for v in self.quiver.vertices)
        return f"Rep(dim=({dv}))"

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(v for v in self.quiver.vertices if self.dims[v])

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_map(self, path: Sequence[str], start: str) -> FpMat:
        m = FpMat.identity(self.p, self.dims[start])
        for name in path:
            m = self.mats[name] @ m
        return m

    # constructors
    @classmethod
    def zero(cls, quiver: Quiver, p: int) -> "Rep":
        return cls(quiver, p, {})

    @classmethod
    def simple(cls, quiver: Quiver, p: int, vertex: str) -> "Rep":
        return cls(quiver, p, {vertex: 1})

    @classmethod
    def thin(cls, quiver: Quiver, p: int, support: Iterable[str]) -> "Rep":
        """Dimension one on ``support``, identity on every arrow inside it."""
        sup = set(support)
        mats = {a.name: FpMat.identity(p, 1) for a in quiver.arrows if a.source in sup and a.target in sup}
        return cls(quiver, p, {v: 1 for v in sup}, mats)

    def restrict(self, sub: Quiver) -> "Rep":
        return Rep(sub, self.p, {v: self.dims[v] for v in sub.vertices},
                   {a.name: self.mats[a.name] for a in sub.arrows})

    def extend_by_zero(self, ambient: Quiver) -> "Rep":
        return Rep(ambient, self.p, dict(self.dims), dict(self.mats))

    def dual(self) -> "Rep":
        """Transpose to a representation of the opposite quiver."""
        return Rep(self.quiver.opposite(), self.p, dict(self.dims), {n: m.T for n, m in self.mats.items()})

    def to_json(self) -> dict:
        return {
            "dims": {v: self.dims[v] for v in self.quiver.vertices},
            "mats": {n: m.tolist() for n, m in self.mats.items() if m.rows and m.cols},
        }


class RepMor:
    """Morphism of representations; commuting squares are validated on construction."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Rep, target: Rep, comps: Mapping[str, FpMat], *, check: bool = True):
        if source.quiver != target.quiver or source.p != target.p:
            raise ValueError("morphism between representations of different quivers/fields")
        self.source = source
        self.target = target
        p = source.p
        full = {}
        for v in source.quiver.vertices:
            shape = (target.dims[v], source.dims[v])
            c = comps.get(v)
            if c is None:
                c = FpMat.zeros(p, *shape)
            elif not isinstance(c, FpMat):
                c = FpMat(p, c, shape=shape)
            if c.shape != shape:
                raise ValueError(f"component at {v}: shape {c.shape}, expected {shape}")
            full[v] = c
        self.comps: dict[str, FpMat] = full
        if check:
            for a in source.quiver.arrows:
                lhs = full[a.target] @ source.mats[a.name]
                rhs = target.mats[a.name] @ full[a.source]
                if lhs != rhs:
                    raise ValueError(f"square at arrow {a.name} does not commute")

    @classmethod
    def identity(cls, m: Rep) -> "RepMor":
        return cls(m, m, {v: FpMat.identity(m.p, m.dims[v]) for v in m.quiver.vertices}, check=False)

    @classmethod
    def zero(cls, m: Rep, n: Rep) -> "RepMor":
        return cls(m, n, {}, check=False)

    def __matmul__(self, other: "RepMor") -> "RepMor":
        """``g @ f`` is the composite ``g o f``."""
        if other.target != self.source:
            raise ValueError("composition of non-composable morphisms")
        return RepMor(other.source, self.target,
                      {v: self.comps[v] @ other.comps[v] for v in self.comps}, check=False)

    def __add__(self, other: "RepMor") -> "RepMor":
        if other.source != self.source or other.target != self.target:
            raise ValueError("sum of morphisms with different endpoints")
        return RepMor(self.source, self.target, {v: self.comps[v] + other.comps[v] for v in self.comps}, check=False)

    def __sub__(self, other: "RepMor") -> "RepMor":
        return self + other.scale(-1)

    def scale(self, c: int) -> "RepMor":
        return RepMor(self.source, self.target, {v: m.scale(c) for v, m in self.comps.items()}, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RepMor):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.comps == other.comps

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RepMor({self.source!r} -> {self.target!r})"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps.values())

    def is_mono(self) -> bool:
        return all(c.rank() == c.cols for c in self.comps.values())

    def is_epi(self) -> bool:
        return all(c.rank() == c.rows for c in self.comps.values())

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()

    def flat(self) -> np.ndarray:
        vs = self.source.quiver.vertices
        if not vs:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([self.comps[v].a.ravel() for v in vs])

    def dual(self) -> "RepMor":
        """Transposed morphism ``D(target) -> D(source)``."""
        return RepMor(self.target.dual(), self.source.dual(), {v: c.T for v, c in self.comps.items()}, check=False)


@dataclass(frozen=True)
class ShortExact:
    """``0 -> M --mono--> N --epi--> P -> 0``, checked vertexwise."""

    mono: RepMor
    epi: RepMor

    def __post_init__(self):
        from .linalg import kernel_basis, image_basis
        if self.mono.target != self.epi.source:
            raise ValueError("mono and epi are not composable")
        if not self.mono.is_mono():
            raise ValueError("first map is not injective")
        if not self.epi.is_epi():
            raise ValueError("second map is not surjective")
        for v, f in self.mono.comps.items():
            g = self.epi.comps[v]
            if not (g @ f).is_zero() or image_basis(f).cols != kernel_basis(g).cols:
                raise ValueError(f"not exact in the middle at vertex {v}")


def flat_layout(source: Rep, target: Rep) -> np.ndarray:
    """Block table ``(offset, rows, cols)`` for flattened morphisms ``source -> target``."""
    out = []
    off = 0
    for v in source.quiver.vertices:
        r, c = target.dims[v], source.dims[v]
        out.append((off, r, c))
        off += r * c
    return np.array(out, dtype=np.int64).reshape(-1, 3)


def unflatten(source: Rep, target: Rep, vec: np.ndarray, *, check: bool = False) -> RepMor:
    comps = {}
    off = 0
    p = source.p
    for v in source.quiver.vertices:
        r, c = target.dims[v], source.dims[v]
        comps[v] = FpMat._wrap(p, np.ascontiguousarray(vec[off:off + r * c]).reshape(r, c))
        off += r * c
    return RepMor(source, target, comps, check=check)


def direct_sum(ms: Sequence[Rep], quiver: Quiver | None = None, p: int | None = None) -> Rep:
    """Block-diagonal direct sum; the empty sum is the zero representation."""
    ms = list(ms)
    if not ms:
        if quiver is None or p is None:
            raise ValueError("empty direct sum needs a quiver and a field")
        return Rep.zero(quiver, p)
    q, pp = ms[0].quiver, ms[0].p
    if any(m.quiver != q or m.p != pp for m in ms):
        raise ValueError("direct sum of representations of different quivers")
    if len(ms) == 1:
        return ms[0]
    dims = {v: sum(m.dims[v] for m in ms) for v in q.vertices}
    mats = {a.name: block_diag([m.mats[a.name] for m in ms], pp) for a in q.arrows}
    return Rep(q, pp, dims, mats)


def sum_injections(ms: Sequence[Rep]) -> tuple[Rep, list[RepMor], list[RepMor]]:
    """Direct sum together with its canonical injections and projections."""
    total = direct_sum(ms)
    incs, projs = [], []
    offs = {v: 0 for v in total.quiver.vertices}
    p = total.p
    for m in ms:
        ic, pc = {}, {}
        for v in total.quiver.vertices:
            e = np.zeros((total.dims[v], m.dims[v]), dtype=np.int64)
            e[offs[v]:offs[v] + m.dims[v], :] = np.eye(m.dims[v], dtype=np.int64)
            ic[v] = FpMat._wrap(p, e)
            pc[v] = FpMat._wrap(p, e.T.copy())
            offs[v] += m.dims[v]
        incs.append(RepMor(m, total, ic, check=False))
        projs.append(RepMor(total, m, pc, check=False))
    return total, incs, projs
