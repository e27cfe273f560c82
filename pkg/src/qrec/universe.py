"""Finite universes of indecomposables and identification of objects up to isomorphism."""

from __future__ import annotations

import logging
from typing import Iterable, Sequence

import numpy as np

from .config import LIMITS
from .errors import UniverseIncomplete
from .homology import (decompose, ext_classes, ext_dim, extension, hom_dim,
                       is_isomorphic)
from .quiver import Quiver, Rep, direct_sum

log = logging.getLogger(__name__)


def stacked_name(m: Rep) -> str:
    """``"4/1/2"`` for a thin module with connected support (top first), else the dimension vector."""
    sup = m.support
    if not sup:
        return "0"
    thin = all(m.dims[v] <= 1 for v in sup)
    connected = thin and all(
        not m.mats[a.name].is_zero()
        for a in m.quiver.arrows if a.source in sup and a.target in sup
    ) and _connected(m.quiver, sup)
    if thin and connected:
        return "/".join(v for v in m.quiver.topo_order if v in sup)
    return "(" + ",".join(str(d) for d in m.dim_vector) + ")"


def _connected(q: Quiver, sup: Sequence[str]) -> bool:
    sup = set(sup)
    start = next(iter(sup))
    seen, stack = set(), [start]
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        for a in q.arrows:
            if a.source == x and a.target in sup:
                stack.append(a.target)
            if a.target == x and a.source in sup:
                stack.append(a.source)
    return seen == sup


def canonical_key(m: Rep, created: int) -> tuple:
    # total dimension, then dimension vectors with earlier vertices first, then discovery order
    return (m.total_dim, tuple(-d for d in m.dim_vector), created)


class Universe:
    """Pairwise non-isomorphic indecomposables of one module category, canonically ordered.

    ``complete`` records whether generation reached a fixpoint without
    discarding anything above the dimension bound; only complete universes
    identify objects through Hom-dimension signatures.
    """

    def __init__(self, quiver: Quiver, p: int, reps: Iterable[Rep], *, complete: bool = True,
                 validate: bool = True, label: str = ""):
        reps = list(reps)
        for r in reps:
            if r.quiver != quiver or r.p != p:
                raise ValueError("universe member over the wrong quiver or field")
        order = sorted(range(len(reps)), key=lambda i: canonical_key(reps[i], i))
        self.quiver = quiver
        self.p = p
        self.label = label
        self.reps: tuple[Rep, ...] = tuple(reps[i] for i in order)
        self.complete = complete
        if validate:
            for i, a in enumerate(self.reps):
                for b in self.reps[i + 1:]:
                    if is_isomorphic(a, b):
                        raise ValueError(f"universe members {a!r} and {b!r} are isomorphic")
        n = len(self.reps)
        self.hom_table = np.array([[hom_dim(a, b) for b in self.reps] for a in self.reps],
                                  dtype=np.int64).reshape(n, n)
        self.ext_table = np.array([[ext_dim(a, b) for b in self.reps] for a in self.reps],
                                  dtype=np.int64).reshape(n, n)
        names = [stacked_name(r) for r in self.reps]
        seen: dict[str, int] = {}
        self.names: list[str] = []
        for nm in names:
            k = seen.get(nm, 0) + 1
            seen[nm] = k
            self.names.append(nm if k == 1 else f"{nm}#{k}")
        self._by_name = {nm: i for i, nm in enumerate(self.names)}
        self._ident: dict[bytes, tuple[int, ...]] = {}
        self._hinv = None
        if complete and n:
            try:
                self._hinv = np.linalg.inv(self.hom_table.astype(float))
            except np.linalg.LinAlgError:
                self._hinv = None

    def __len__(self) -> int:
        return len(self.reps)

    def __getitem__(self, i: int) -> Rep:
        return self.reps[i]

    def __iter__(self):
        return iter(self.reps)

    def __repr__(self) -> str:
        return f"Universe({self.label or self.quiver!r}: {', '.join(self.names)})"

    def name(self, i: int) -> str:
        return self.names[i]

    def index_of_name(self, name: str) -> int:
        return self._by_name[name]

    def resolve(self, name: str) -> int:
        """Universe index for a stacked name; tolerant of member order inside the name."""
        if name in self._by_name:
            return self._by_name[name]
        parts = [x.strip() for x in name.split("/") if x.strip()]
        target = set(parts)
        hits = [i for i, r in enumerate(self.reps)
                if set(r.support) == target and all(r.dims[v] == 1 for v in r.support)]
        if len(hits) != 1:
            raise KeyError(f"{name!r} does not resolve to a unique member of {self!r}")
        return hits[0]

    def resolve_dims(self, dims: dict[str, int]) -> int:
        dv = tuple(int(dims.get(v, 0)) for v in self.quiver.vertices)
        hits = [i for i, r in enumerate(self.reps) if r.dim_vector == dv]
        if len(hits) != 1:
            raise KeyError(f"dimension vector {dv} does not resolve to a unique member")
        return hits[0]

    # --- identification --------------------------------------------------
    def locate(self, m: Rep) -> int:
        """Index of the member isomorphic to the indecomposable ``m``."""
        for i, r in enumerate(self.reps):
            if r.dim_vector == m.dim_vector and is_isomorphic(r, m):
                return i
        raise UniverseIncomplete(f"{stacked_name(m)} {m!r} is not in {self!r}", m)

    def identify(self, m: Rep) -> tuple[int, ...]:
        """Sorted multiset of universe indices of the indecomposable summands of ``m``."""
        if m.quiver != self.quiver:
            raise ValueError("object lives over a different quiver")
        key = m.key()
        hit = self._ident.get(key)
        if hit is not None:
            return hit
        res = None
        if m.is_zero():
            res = ()
        elif self._hinv is not None:
            res = self._by_signature(m)
        if res is None:
            res = tuple(sorted(self.locate(x) for x in decompose(m)))
        self._ident[key] = res
        return res

    def _by_signature(self, m: Rep) -> tuple[int, ...] | None:
        # multiplicities solve H m = (dim Hom(U_k, M))_k
        sig = np.array([hom_dim(u, m) for u in self.reps], dtype=np.int64)
        mult = self._hinv @ sig
        rounded = np.rint(mult).astype(np.int64)
        if np.any(np.abs(mult - rounded) > 1e-6) or np.any(rounded < 0):
            return None
        if not np.array_equal(self.hom_table @ rounded, sig):
            return None
        dv = np.zeros(len(self.quiver.vertices), dtype=np.int64)
        for i, k in enumerate(rounded):
            dv += k * np.array(self.reps[i].dim_vector, dtype=np.int64)
        if tuple(dv) != m.dim_vector:
            return None
        if int(rounded @ self.hom_table @ rounded) != hom_dim(m, m):
            return None
        return tuple(i for i, k in enumerate(rounded) for _ in range(int(k)))

    def obj(self, idx: Sequence[int]) -> Rep:
        """Direct sum of the listed members."""
        return direct_sum([self.reps[i] for i in idx], self.quiver, self.p)

    def to_json(self) -> list[dict]:
        return [{"name": self.names[i], "dim": list(r.dim_vector), **r.to_json()}
                for i, r in enumerate(self.reps)]


def simples(q: Quiver, p: int) -> list[Rep]:
    return [Rep.simple(q, p, v) for v in q.vertices]


def all_indecomposables(q: Quiver, p: int = 2, dim_bound: int = 30, *, label: str = "") -> Universe:
    """Indecomposables of total dimension <= ``dim_bound``, by extension closure from the simples.

    Middle terms of non-split extensions between current members (and between
    a member and a sum of two members) are split into indecomposables until
    nothing new appears. Summands above the bound are dropped and the universe
    is flagged incomplete.
    """
    members: list[Rep] = simples(q, p)
    complete = True

    def known(x: Rep) -> bool:
        return any(m.dim_vector == x.dim_vector and is_isomorphic(m, x) for m in members)

    def absorb(mid: Rep) -> bool:
        nonlocal complete
        grew = False
        for x in decompose(mid):
            if x.total_dim > dim_bound:
                complete = False
                continue
            if not known(x):
                members.append(x)
                grew = True
        return grew

    def sweep(ends: list[tuple[Rep, Rep]]) -> bool:
        nonlocal complete
        grew = False
        for pp, mm in ends:
            if pp.total_dim + mm.total_dim > LIMITS.max_total_dim:
                complete = False
                continue
            classes = ext_classes(pp, mm)
            for eps in classes[1:]:
                mid, _, _ = extension(pp, mm, eps)
                grew |= absorb(mid)
        return grew

    done_pairs: set[tuple[int, int]] = set()
    while True:
        pairs = [(i, j) for i in range(len(members)) for j in range(len(members)) if (i, j) not in done_pairs]
        done_pairs.update(pairs)
        grew = sweep([(members[i], members[j]) for i, j in pairs])
        if grew:
            continue
        # second stage: one end a sum of two members
        n = len(members)
        ends = []
        for i in range(n):
            for j in range(n):
                for k in range(j, n):
                    s = (members[j], members[k])
                    if sum(x.total_dim for x in s) + members[i].total_dim > 2 * dim_bound:
                        continue
                    two = direct_sum(list(s))
                    ends.append((members[i], two))
                    ends.append((two, members[i]))
        if not sweep(ends):
            break
    if not complete:
        log.warning("universe generation hit the dimension bound %d; result may be partial", dim_bound)
    return Universe(q, p, members, complete=complete, validate=False, label=label)
