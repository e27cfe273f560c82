"""Additively closed subcategories of a finite universe, closure operators and predicates."""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import LIMITS
from .errors import (BoundExceeded, ClosureInconclusive, Inconclusive,
                     UniverseIncomplete)
from .homology import (_hom_flat, all_nonzero_homs, ext_classes, extension,
                       is_brick, quotient, subrep)
from .linalg import FpMat, kernel_basis, rref
from .quiver import Rep
from .universe import Universe

OPERATIONS = ("extensions", "images", "cokernels", "kernels", "quotients")

KIND_OPS: dict[str, frozenset[str]] = {
    "ice": frozenset({"images", "cokernels", "extensions"}),
    "torsion": frozenset({"quotients", "extensions"}),
    "wide": frozenset({"kernels", "cokernels", "extensions"}),
}
KINDS = ("ice", "torsion", "wide", "epibrick", "monobrick")


class Subcat:
    """``add`` of a set of universe members; the zero object is always implicit."""

    __slots__ = ("universe", "members", "kind")

    def __init__(self, universe: Universe, members: Iterable[int] = (), kind: str = "plain"):
        ms = frozenset(int(i) for i in members)
        if any(not 0 <= i < len(universe) for i in ms):
            raise ValueError("member index outside the universe")
        self.universe = universe
        self.members = ms
        self.kind = kind

    @classmethod
    def from_names(cls, universe: Universe, names: Iterable[str]) -> "Subcat":
        return cls(universe, [universe.resolve(n) for n in names if n != "0"])

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    @property
    def names(self) -> list[str]:
        return [self.universe.names[i] for i in self.indices]

    def reps(self) -> list[Rep]:
        return [self.universe[i] for i in self.indices]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __le__(self, other: "Subcat") -> bool:
        return self.universe is other.universe and self.members <= other.members

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subcat) and self.universe is other.universe and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.universe), self.members))

    def __str__(self) -> str:
        return "add{" + (",".join(self.names) or "0") + "}"

    def __repr__(self) -> str:
        tag = "" if self.kind == "plain" else f" [{self.kind}]"
        return f"Subcat({self}{tag})"

    def with_kind(self, kind: str) -> "Subcat":
        return Subcat(self.universe, self.members, kind)

    def union(self, other: Iterable[int]) -> "Subcat":
        return Subcat(self.universe, self.members | set(other))


@dataclass(frozen=True)
class Violation:
    """``op`` applied to the test object ``source`` produced summands ``escaped`` outside the subcategory."""

    op: str
    source: tuple[int, ...]
    escaped: tuple[int, ...]

    def describe(self, u: Universe) -> str:
        nm = lambda t: "+".join(u.names[i] for i in t) or "0"  # noqa: E731
        return f"{self.op}: from {nm(self.source)} escapes {nm(self.escaped)}"


# --- subspace families ------------------------------------------------------
# A family is a tuple of canonical column bases, one per vertex in vertex order.

def _canon(p: int, b: np.ndarray) -> np.ndarray:
    if b.shape[1] == 0 or b.shape[0] == 0:
        return np.zeros((b.shape[0], 0), dtype=np.int64)
    r, _, rk = rref(FpMat._wrap(p, b.T))
    out = np.ascontiguousarray(r.a[:rk].T)
    out.setflags(write=False)
    return out


def _fam_key(fam: tuple[np.ndarray, ...]) -> bytes:
    return b"|".join(repr(f.shape).encode() + f.tobytes() for f in fam)


def _fam_sum(p: int, a: tuple[np.ndarray, ...], b: tuple[np.ndarray, ...]) -> tuple[np.ndarray, ...]:
    return tuple(_canon(p, np.concatenate([x, y], axis=1)) for x, y in zip(a, b))


class _Engine:
    """Closure bookkeeping shared by every subset of one universe at one multiplicity cap."""

    def __init__(self, u: Universe, cap: int):
        self.u = u
        self.cap = cap
        self.p = u.p
        self._obj: dict[tuple[int, ...], Rep] = {}
        self._single: dict[tuple, dict[bytes, tuple]] = {}
        self._sums: dict[tuple, dict[bytes, tuple]] = {}
        self._sub: dict[tuple, tuple[int, ...]] = {}
        self._quo: dict[tuple, tuple[int, ...]] = {}
        self._ext: dict[tuple[int, int], tuple[tuple[int, ...], ...]] = {}

    def obj(self, t: tuple[int, ...]) -> Rep:
        r = self._obj.get(t)
        if r is None:
            r = self._obj[t] = self.u.obj(t)
        return r

    def tests(self, s: frozenset[int]) -> Iterator[tuple[int, ...]]:
        ms = sorted(s)
        for k in range(1, self.cap + 1):
            yield from itertools.combinations_with_replacement(ms, k)

    def _maps(self, src: Rep, tgt: Rep) -> Iterator[list[np.ndarray]]:
        """Nonzero morphisms up to nonzero scalars, as per-vertex matrices."""
        basis = _hom_flat(src, tgt)
        d = basis.shape[0]
        if d == 0:
            return
        p = self.p
        if p ** d > LIMITS.enum_threshold:
            raise Inconclusive(f"Hom space of size {p}^{d} exceeds the enumeration threshold")
        shapes = [(tgt.dims[v], src.dims[v]) for v in src.quiver.vertices]
        for coeffs in itertools.product(range(p), repeat=d):
            lead = next((c for c in coeffs if c), 0)
            if lead != 1:
                continue
            vec = (np.array(coeffs, dtype=np.int64) @ basis) % p
            out, off = [], 0
            for r, c in shapes:
                out.append(vec[off:off + r * c].reshape(r, c))
                off += r * c
            yield out

    def _singles(self, kind: str, x: int, t: tuple[int, ...]) -> dict[bytes, tuple]:
        """Images of maps x -> obj(t) (``img``), or defining equations of kernels of obj(t) -> x (``ker``)."""
        key = (kind, x, t)
        hit = self._single.get(key)
        if hit is not None:
            return hit
        p = self.p
        out: dict[bytes, tuple] = {}
        if kind == "img":
            for comps in self._maps(self.u[x], self.obj(t)):
                fam = tuple(_canon(p, c) for c in comps)
                out.setdefault(_fam_key(fam), fam)
        else:
            # kernels of X -> x, stored through the row spaces of the components
            for comps in self._maps(self.obj(t), self.u[x]):
                fam = tuple(_canon(p, np.ascontiguousarray(c.T)) for c in comps)
                out.setdefault(_fam_key(fam), fam)
        self._single[key] = out
        return out

    def sums(self, kind: str, s: frozenset[int], t: tuple[int, ...]) -> dict[bytes, tuple]:
        """All sums of at most ``cap`` single families coming from members of ``s``."""
        u = self.u
        if kind == "img":
            srcs = tuple(x for x in sorted(s) if sum(int(u.hom_table[x, k]) for k in t))
        else:
            srcs = tuple(x for x in sorted(s) if sum(int(u.hom_table[k, x]) for k in t))
        key = (kind, t, srcs)
        hit = self._sums.get(key)
        if hit is not None:
            return hit
        singles: dict[bytes, tuple] = {}
        for x in srcs:
            singles.update(self._singles(kind, x, t))
        level = dict(singles)
        found = dict(singles)
        for _ in range(self.cap - 1):
            nxt: dict[bytes, tuple] = {}
            for fam in level.values():
                for other in singles.values():
                    sm = _fam_sum(self.p, fam, other)
                    k = _fam_key(sm)
                    if k not in found:
                        found[k] = sm
                        nxt[k] = sm
            if not nxt:
                break
            level = nxt
        self._sums[key] = found
        return found

    def _spaces(self, kind: str, t: tuple[int, ...], fam: tuple) -> dict[str, FpMat]:
        y = self.obj(t)
        p = self.p
        out = {}
        for v, f in zip(y.quiver.vertices, fam):
            if kind == "img":
                out[v] = FpMat._wrap(p, f)
            else:
                eq = FpMat._wrap(p, np.ascontiguousarray(f.T)) if f.shape[1] else FpMat.zeros(p, 0, y.dims[v])
                out[v] = kernel_basis(eq)
        return out

    def sub_ident(self, kind: str, t: tuple[int, ...], k: bytes, fam: tuple) -> tuple[int, ...]:
        key = (kind, t, k)
        hit = self._sub.get(key)
        if hit is None:
            sub, _ = subrep(self.obj(t), self._spaces(kind, t, fam))
            hit = self._sub[key] = self.u.identify(sub)
        return hit

    def quo_ident(self, kind: str, t: tuple[int, ...], k: bytes, fam: tuple) -> tuple[int, ...]:
        key = (kind, t, k)
        hit = self._quo.get(key)
        if hit is None:
            quo, _ = quotient(self.obj(t), self._spaces(kind, t, fam))
            hit = self._quo[key] = self.u.identify(quo)
        return hit

    def ext_terms(self, a: int, b: int) -> tuple[tuple[int, ...], ...]:
        """Identified middle terms of the non-split extensions 0 -> b -> E -> a -> 0."""
        hit = self._ext.get((a, b))
        if hit is None:
            if self.u.ext_table[a, b] == 0:
                hit = ()
            else:
                pa, mb = self.u[a], self.u[b]
                terms = {self.u.identify(extension(pa, mb, eps)[0]) for eps in ext_classes(pa, mb)[1:]}
                hit = tuple(sorted(terms))
            self._ext[(a, b)] = hit
        return hit

    def full_key(self, t: tuple[int, ...]) -> bytes:
        y = self.obj(t)
        return _fam_key(tuple(_canon(self.p, np.eye(y.dims[v], dtype=np.int64)) for v in y.quiver.vertices))

    def violations(self, s: frozenset[int], ops: frozenset[str]) -> Iterator[Violation]:
        def esc(ident: tuple[int, ...]) -> tuple[int, ...]:
            return tuple(sorted({i for i in ident if i not in s}))

        if "extensions" in ops:
            for a in sorted(s):
                for b in sorted(s):
                    for ident in self.ext_terms(a, b):
                        e = esc(ident)
                        if e:
                            yield Violation("extensions", (a, b), e)
        if "images" in ops or "cokernels" in ops:
            for t in self.tests(s):
                for k, fam in self.sums("img", s, t).items():
                    if "images" in ops:
                        e = esc(self.sub_ident("img", t, k, fam))
                        if e:
                            yield Violation("images", t, e)
                    if "cokernels" in ops:
                        e = esc(self.quo_ident("img", t, k, fam))
                        if e:
                            yield Violation("cokernels", t, e)
        if "kernels" in ops:
            for t in self.tests(s):
                for k, fam in self.sums("ker", s, t).items():
                    e = esc(self.sub_ident("ker", t, k, fam))
                    if e:
                        yield Violation("kernels", t, e)
        if "quotients" in ops:
            for n in range(len(self.u)):
                if n in s:
                    continue
                if self.full_key((n,)) in self.sums("img", s, (n,)):
                    yield Violation("quotients", (n,), (n,))


_ENGINES: "weakref.WeakKeyDictionary[Universe, dict[int, _Engine]]" = weakref.WeakKeyDictionary()


def _engine(u: Universe, mult_cap: int) -> _Engine:
    if mult_cap < 1:
        raise ValueError("mult_cap must be at least 1")
    per = _ENGINES.setdefault(u, {})
    eng = per.get(mult_cap)
    if eng is None:
        eng = per[mult_cap] = _Engine(u, mult_cap)
    return eng


def _ops(under: Iterable[str]) -> frozenset[str]:
    ops = frozenset(under)
    bad = ops - set(OPERATIONS)
    if bad:
        raise ValueError(f"unknown closure operations: {sorted(bad)}")
    return ops


def find_violation(s: Subcat, under: Iterable[str], mult_cap: int = 2) -> Violation | None:
    """First witness that ``s`` is not stable under ``under``, or None."""
    eng = _engine(s.universe, mult_cap)
    try:
        return next(eng.violations(s.members, _ops(under)), None)
    except (Inconclusive, BoundExceeded, UniverseIncomplete) as exc:
        raise ClosureInconclusive(str(exc), partial=s) from exc


def close(s: Subcat, under: Iterable[str], mult_cap: int = 2) -> Subcat:
    """Least superset of ``s`` inside the universe stable under the operations ``under``."""
    ops = _ops(under)
    eng = _engine(s.universe, mult_cap)
    cur = frozenset(s.members)
    try:
        while True:
            new: set[int] = set()
            for v in eng.violations(cur, ops):
                new.update(v.escaped)
            if not new:
                return Subcat(s.universe, cur)
            cur = cur | new
    except (Inconclusive, BoundExceeded, UniverseIncomplete) as exc:
        raise ClosureInconclusive(str(exc), partial=Subcat(s.universe, cur)) from exc


def is_closed(s: Subcat, kind: str, mult_cap: int = 2) -> bool:
    return find_violation(s, KIND_OPS[kind], mult_cap) is None


def is_ice(s: Subcat, mult_cap: int = 2) -> bool:
    return is_closed(s, "ice", mult_cap)


def is_torsion(s: Subcat, mult_cap: int = 2) -> bool:
    return is_closed(s, "torsion", mult_cap)


def is_wide(s: Subcat, mult_cap: int = 2) -> bool:
    return is_closed(s, "wide", mult_cap)


# --- bricks -------------------------------------------------------------------

_BRICKS: "weakref.WeakKeyDictionary[Universe, dict]" = weakref.WeakKeyDictionary()


def _brick_tables(u: Universe) -> dict:
    tab = _BRICKS.get(u)
    if tab is None:
        tab = _BRICKS[u] = {"brick": {}, "epi": {}, "mono": {}}
    return tab


def _member_is_brick(u: Universe, i: int) -> bool:
    tab = _brick_tables(u)["brick"]
    if i not in tab:
        tab[i] = is_brick(u[i])
    return tab[i]


def _pair_ok(u: Universe, i: int, j: int, epi: bool) -> bool:
    tab = _brick_tables(u)["epi" if epi else "mono"]
    if (i, j) not in tab:
        tab[(i, j)] = all_nonzero_homs(u[i], u[j], epi)
    return tab[(i, j)]


def _brick_family(reps: Sequence[Rep], epi: bool) -> bool:
    if not all(is_brick(r) for r in reps):
        return False
    return all(all_nonzero_homs(a, b, epi) for a in reps for b in reps if a is not b)


def is_epibrick(s: Subcat) -> bool:
    """Members are bricks and every nonzero map between members is surjective."""
    u = s.universe
    ms = s.indices
    return all(_member_is_brick(u, i) for i in ms) and all(
        _pair_ok(u, i, j, True) for i in ms for j in ms if i != j)


def is_monobrick(s: Subcat) -> bool:
    """Members are bricks and every nonzero map between members is injective."""
    u = s.universe
    ms = s.indices
    return all(_member_is_brick(u, i) for i in ms) and all(
        _pair_ok(u, i, j, False) for i in ms for j in ms if i != j)


def is_epibrick_family(reps: Sequence[Rep]) -> bool:
    """Epibrick test on explicit representations (no universe needed)."""
    return _brick_family(reps, True)


def is_monobrick_family(reps: Sequence[Rep]) -> bool:
    return _brick_family(reps, False)


def satisfies(s: Subcat, kind: str, mult_cap: int = 2) -> bool:
    if kind == "epibrick":
        return is_epibrick(s)
    if kind == "monobrick":
        return is_monobrick(s)
    if kind in KIND_OPS:
        return is_closed(s, kind, mult_cap)
    raise ValueError(f"unknown kind {kind!r}")


# --- enumeration ----------------------------------------------------------------

def subsets(u: Universe, include_empty: bool = False, within: Iterable[int] | None = None,
            containing: Iterable[int] = ()) -> Iterator[frozenset[int]]:
    """Subsets of universe indices by cardinality, then lexicographically."""
    pool = sorted(range(len(u)) if within is None else set(within))
    base = frozenset(containing)
    free = [i for i in pool if i not in base]
    for k in range(0, len(free) + 1):
        for combo in itertools.combinations(free, k):
            s = base | frozenset(combo)
            if s or include_empty:
                yield s


def canonical_sort(cats: Iterable[Subcat]) -> list[Subcat]:
    return sorted(cats, key=lambda c: (len(c), c.indices))


def enumerate_subcats(u: Universe, kind: str, mult_cap: int = 2, include_empty: bool = False,
                      containing: Iterable[int] = (), inconclusive: list[Subcat] | None = None) -> list[Subcat]:
    """Every subcategory of the given kind, in canonical order.

    For the closure kinds the zero subcategory ``add{0}`` is always reported.
    The brick kinds report the empty family only with ``include_empty``.
    If ``inconclusive`` is a list, subsets whose test hit a threshold are
    appended to it instead of aborting the enumeration.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if len(u) > LIMITS.enumeration_cap:
        raise BoundExceeded(f"universe of size {len(u)} exceeds the enumeration cap {LIMITS.enumeration_cap}")
    out = []
    for s in subsets(u, include_empty=True, containing=containing):
        cat = Subcat(u, s)
        if not s and kind not in KIND_OPS and not include_empty:
            continue
        try:
            good = satisfies(cat, kind, mult_cap)
        except Inconclusive:
            if inconclusive is None:
                raise
            inconclusive.append(cat)
            continue
        if good:
            out.append(cat.with_kind(kind))
    return canonical_sort(out)


def hasse_edges(cats: Sequence[Subcat]) -> list[tuple[int, int]]:
    """Covering pairs (i, j) with cats[i] strictly inside cats[j] and nothing in between."""
    n = len(cats)
    below = [[i != j and cats[i].members < cats[j].members for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if below[i][j] and not any(below[i][k] and below[k][j] for k in range(n)):
                edges.append((i, j))
    return edges


def to_dot(cats: Sequence[Subcat], name: str = "subcats") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, c in enumerate(cats):
        label = str(c).replace('"', '\\"')
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in hasse_edges(cats):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
