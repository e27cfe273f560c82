"""The recollement attached to a vertex split of an acyclic quiver.

Vertices are split into an i-side ``V'`` and a j-side ``V''`` (the quotient
part). With covariant representations, ``j^*`` restricts to ``V''``,
``i_*`` extends by zero, ``j_!`` is the left Kan extension along the
inclusion of ``V''`` (a coequalizer over paths leaving ``V''``), and
``j_*`` is obtained from ``j_!`` on the opposite quiver by transposition.
``i^*`` and ``i^!`` are the cokernel of the counit of ``(j_!, j^*)`` and the
kernel of the unit of ``(j^*, j_*)``, restricted to ``V'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import QrecError
from .homology import hom_dim, image, kernel, quotient
from .linalg import (FpMat, image_basis, inverse, left_annihilator,
                     right_inverse, solve)
from .quiver import Quiver, Rep, RepMor

FUNCTORS = ("i_upper", "i_lower", "i_shriek", "j_lower_shriek", "j_upper", "j_lower_star")
SYMBOLS = {
    "i_upper": "i^*", "i_lower": "i_*", "i_shriek": "i^!",
    "j_lower_shriek": "j_!", "j_upper": "j^*", "j_lower_star": "j_*",
}
# (left adjoint, right adjoint)
PAIRS = {
    "i": ("i_upper", "i_lower"),
    "i_shriek": ("i_lower", "i_shriek"),
    "j_shriek": ("j_lower_shriek", "j_upper"),
    "j": ("j_upper", "j_lower_star"),
}

INTO_J = "crossing-into-V''"
INTO_I = "crossing-into-V'"
NO_CROSSING = "no-crossing"


class SplitError(QrecError, ValueError):
    """The vertex split does not define a triangular recollement."""


class _LeftKan:
    """Left Kan extension of representations of a full subquiver to the ambient quiver."""

    def __init__(self, ambient: Quiver, part: Iterable[str]):
        self.q = ambient
        keep = set(part)
        self.part = tuple(v for v in ambient.vertices if v in keep)
        self.sub = ambient.subquiver(self.part)
        self._cache: dict[bytes, tuple] = {}

    def _gens(self, v: str) -> list[tuple[str, tuple[str, ...]]]:
        return [(w, pth) for w in self.part for pth in self.q.paths(w, v)]

    def _build(self, y: Rep):
        hit = self._cache.get(y.key())
        if hit is not None:
            return hit
        q, p = self.q, y.p
        gens, offs, qs, ss = {}, {}, {}, {}
        for v in q.vertices:
            g = self._gens(v)
            gens[v] = g
            o, off = {}, 0
            for w, pth in g:
                o[(w, pth)] = off
                off += y.dims[w]
            offs[v] = (o, off)
            # relations (b.pi, y) ~ (pi, Y_b y) for arrows b of the subquiver
            cols = []
            for b in self.sub.arrows:
                for pth in q.paths(b.target, v):
                    blockc = np.zeros((off, y.dims[b.source]), dtype=np.int64)
                    r0 = o[(b.source, (b.name,) + pth)]
                    blockc[r0:r0 + y.dims[b.source]] += np.eye(y.dims[b.source], dtype=np.int64)
                    r1 = o[(b.target, pth)]
                    blockc[r1:r1 + y.dims[b.target]] -= y.mats[b.name].a
                    cols.append(blockc)
            rel = FpMat(p, np.concatenate(cols, axis=1) if cols else np.zeros((off, 0), dtype=np.int64),
                        shape=None) if off else FpMat.zeros(p, 0, 0)
            qv = left_annihilator(image_basis(rel)) if off else FpMat.zeros(p, 0, 0)
            qs[v] = qv
            ss[v] = right_inverse(qv)
        mats = {}
        for a in q.arrows:
            (osrc, nsrc), (otgt, ntgt) = offs[a.source], offs[a.target]
            g = np.zeros((ntgt, nsrc), dtype=np.int64)
            for (w, pth), c in osrc.items():
                r = otgt[(w, pth + (a.name,))]
                g[r:r + y.dims[w], c:c + y.dims[w]] = np.eye(y.dims[w], dtype=np.int64)
            mats[a.name] = qs[a.target] @ FpMat._wrap(p, g) @ ss[a.source]
        rep = Rep(q, p, {v: qs[v].rows for v in q.vertices}, mats)
        hit = (rep, offs, qs, ss)
        self._cache[y.key()] = hit
        return hit

    def obj(self, y: Rep) -> Rep:
        return self._build(y)[0]

    def mor(self, f: RepMor) -> RepMor:
        src, osrc, qsrc, ssrc = self._build(f.source)
        tgt, otgt, qtgt, _ = self._build(f.target)
        p = f.source.p
        comps = {}
        for v in self.q.vertices:
            (o1, n1), (o2, n2) = osrc[v], otgt[v]
            g = np.zeros((n2, n1), dtype=np.int64)
            for (w, pth), c in o1.items():
                r = o2[(w, pth)]
                g[r:r + f.target.dims[w], c:c + f.source.dims[w]] = f.comps[w].a
            comps[v] = qtgt[v] @ FpMat._wrap(p, g) @ ssrc[v]
        return RepMor(src, tgt, comps, check=False)

    def unit(self, y: Rep) -> RepMor:
        """``Y -> (j_! Y)|_part``, sending y to the class of (trivial path, y)."""
        rep, offs, qs, _ = self._build(y)
        p = y.p
        comps = {}
        for w in self.part:
            o, n = offs[w]
            inc = np.zeros((n, y.dims[w]), dtype=np.int64)
            r = o[(w, ())]
            inc[r:r + y.dims[w]] = np.eye(y.dims[w], dtype=np.int64)
            comps[w] = qs[w] @ FpMat._wrap(p, inc)
        return RepMor(y, rep.restrict(self.sub), comps, check=False)

    def counit(self, m: Rep) -> RepMor:
        """``j_!(M|_part) -> M``, sending (pi, y) to M_pi(y)."""
        y = m.restrict(self.sub)
        rep, offs, _, ss = self._build(y)
        p = m.p
        comps = {}
        for v in self.q.vertices:
            o, n = offs[v]
            e = np.zeros((m.dims[v], n), dtype=np.int64)
            for (w, pth), c in o.items():
                e[:, c:c + m.dims[w]] = m.path_map(pth, w).a
            comps[v] = FpMat._wrap(p, e) @ ss[v]
        return RepMor(rep, m, comps, check=False)


def projective(q: Quiver, p: int, v: str) -> Rep:
    """Indecomposable projective at ``v``: paths starting at ``v``."""
    dims = {w: len(q.paths(v, w)) for w in q.vertices}
    mats = {}
    for a in q.arrows:
        src = q.paths(v, a.source)
        tgt = {pth: k for k, pth in enumerate(q.paths(v, a.target))}
        m = np.zeros((dims[a.target], dims[a.source]), dtype=np.int64)
        for k, pth in enumerate(src):
            m[tgt[pth + (a.name,)], k] = 1
        mats[a.name] = FpMat._wrap(p, m)
    return Rep(q, p, dims, mats)


def injective(q: Quiver, p: int, v: str) -> Rep:
    """Indecomposable injective at ``v``, the transpose of a projective of the opposite quiver."""
    return projective(q.opposite(), p, v).dual()


def exactness_witness(fn_obj, q: Quiver, p: int) -> str | None:
    """Decide exactness of a left or right exact functor on representations of ``q``.

    Over a hereditary path algebra the derived functors L_1 and R^1 vanish as
    soon as they vanish on simples, so it is enough to test the projective
    presentation and the injective copresentation of every simple.
    """
    for v in q.vertices:
        s = Rep.simple(q, p, v)
        pv = projective(q, p, v)
        epi = RepMor(pv, s, {v: FpMat._wrap(p, np.eye(1, pv.dims[v], dtype=np.int64))}, check=False)
        omega = kernel(epi)[0]
        if fn_obj(omega).total_dim + fn_obj(s).total_dim != fn_obj(pv).total_dim:
            return f"0 -> rad P({v}) -> P({v}) -> S({v}) -> 0 is not kept exact"
        iv = injective(q, p, v)
        mono = RepMor(s, iv, {v: FpMat._wrap(p, np.eye(iv.dims[v], 1, dtype=np.int64))}, check=False)
        cok = quotient(iv, {w: image_basis(c) for w, c in mono.comps.items()})[0]
        if fn_obj(s).total_dim + fn_obj(cok).total_dim != fn_obj(iv).total_dim:
            return f"0 -> S({v}) -> I({v}) -> I({v})/S({v}) -> 0 is not kept exact"
    return None


def _extend_mor(f: RepMor, ambient: Quiver, src: Rep, tgt: Rep) -> RepMor:
    return RepMor(src, tgt, {v: f.comps[v] for v in f.source.quiver.vertices}, check=False)


def _restrict_mor(f: RepMor, sub: Quiver) -> RepMor:
    return RepMor(f.source.restrict(sub), f.target.restrict(sub),
                  {v: f.comps[v] for v in sub.vertices}, check=False)


def _inverse_mor(f: RepMor) -> RepMor:
    return RepMor(f.target, f.source, {v: inverse(c) for v, c in f.comps.items()}, check=False)


@dataclass(frozen=True)
class VertexSplit:
    quiver: Quiver
    i_side: tuple[str, ...]
    j_side: tuple[str, ...]
    orientation: str

    @classmethod
    def of(cls, q: Quiver, quotient_part: Iterable[str]) -> "VertexSplit":
        qp = set(map(str, quotient_part))
        unknown = qp - set(q.vertices)
        if unknown:
            raise SplitError(f"unknown vertices in quotient part: {sorted(unknown)}")
        if not qp or qp == set(q.vertices):
            raise SplitError("quotient part must be a nonempty proper subset of the vertices")
        into_j = [a for a in q.arrows if a.source not in qp and a.target in qp]
        into_i = [a for a in q.arrows if a.source in qp and a.target not in qp]
        if into_j and into_i:
            raise SplitError(
                "crossing arrows run in both directions: "
                + ", ".join(f"{a.name}:{a.source}->{a.target}" for a in into_j + into_i))
        orient = INTO_J if into_j else INTO_I if into_i else NO_CROSSING
        return cls(q, tuple(v for v in q.vertices if v not in qp), tuple(v for v in q.vertices if v in qp), orient)


@dataclass
class Recollement:
    """Six functors between mod A (i-side), mod Lambda (ambient) and mod B (j-side)."""

    split: VertexSplit
    p: int = 2
    flipped_table: bool = False
    qa: Quiver = field(init=False)
    qb: Quiver = field(init=False)

    def __post_init__(self):
        q = self.split.quiver
        self.qa = q.subquiver(self.split.i_side)
        self.qb = q.subquiver(self.split.j_side)
        self._kan = _LeftKan(q, self.split.j_side)
        self._kan_op = _LeftKan(q.opposite(), self.split.j_side)
        self._coker: dict[bytes, tuple[Rep, RepMor]] = {}
        self._ker: dict[bytes, tuple[Rep, RepMor]] = {}
        self._exact: dict[str, bool] | None = None

    @property
    def quiver(self) -> Quiver:
        return self.split.quiver

    @property
    def exactness(self) -> dict[str, bool]:
        """Which of the six functors are exact (computed, see :func:`exactness_witness`)."""
        if self._exact is None:
            self._exact = {fn: self.exactness_witness(fn) is None for fn in FUNCTORS}
        return dict(self._exact)

    def exactness_witness(self, fn: str) -> str | None:
        """A short exact sequence that ``fn`` does not keep exact, or None if ``fn`` is exact."""
        w = exactness_witness(lambda x: self.apply(fn, x), self.source_quiver(fn), self.p)
        return None if w is None else f"{SYMBOLS[fn]}: {w}"

    def flipped(self) -> "Recollement":
        """Copy with the left and right adjoints exchanged (i^* <-> i^!, j_! <-> j_*); not a recollement."""
        return Recollement(self.split, self.p, not self.flipped_table)

    # --- raw constructions ------------------------------------------------
    def _check(self, m: Rep, q: Quiver, fn: str) -> None:
        if m.quiver != q or m.p != self.p:
            raise ValueError(f"{SYMBOLS[fn]} expects a representation of {q!r} over F_{self.p}")

    def _eta(self, m: Rep) -> RepMor:
        """Unit M -> j_* j^* M."""
        e = self._kan_op.counit(m.dual())
        return e.dual()

    def _coker_data(self, m: Rep) -> tuple[Rep, RepMor]:
        hit = self._coker.get(m.key())
        if hit is None:
            eps = self._kan.counit(m)
            hit = quotient(m, {v: image_basis(c) for v, c in eps.comps.items()})
            assert all(hit[0].dims[v] == 0 for v in self.split.j_side)
            self._coker[m.key()] = hit
        return hit

    def _ker_data(self, m: Rep) -> tuple[Rep, RepMor]:
        hit = self._ker.get(m.key())
        if hit is None:
            hit = kernel(self._eta(m))
            assert all(hit[0].dims[v] == 0 for v in self.split.j_side)
            self._ker[m.key()] = hit
        return hit

    def _i_upper(self, m: Rep) -> Rep:
        return self._coker_data(m)[0].restrict(self.qa)

    def _i_upper_mor(self, f: RepMor) -> RepMor:
        cm, pm = self._coker_data(f.source)
        cn, pn = self._coker_data(f.target)
        comps = {v: pn.comps[v] @ f.comps[v] @ right_inverse(pm.comps[v]) for v in self.split.i_side}
        return RepMor(cm.restrict(self.qa), cn.restrict(self.qa), comps, check=False)

    def _i_shriek(self, m: Rep) -> Rep:
        return self._ker_data(m)[0].restrict(self.qa)

    def _i_shriek_mor(self, f: RepMor) -> RepMor:
        km, im = self._ker_data(f.source)
        kn, inn = self._ker_data(f.target)
        comps = {}
        for v in self.split.i_side:
            x = solve(inn.comps[v], f.comps[v] @ im.comps[v])
            assert x is not None
            comps[v] = x
        return RepMor(km.restrict(self.qa), kn.restrict(self.qa), comps, check=False)

    def _j_star(self, y: Rep) -> Rep:
        return self._kan_op.obj(y.dual()).dual()

    def _j_star_mor(self, f: RepMor) -> RepMor:
        return self._kan_op.mor(f.dual()).dual()

    # --- public functor interface -------------------------------------------
    def source_quiver(self, fn: str) -> Quiver:
        if fn == "i_lower":
            return self.qa
        if fn in ("j_lower_shriek", "j_lower_star", "j_intermediate"):
            return self.qb
        return self.quiver

    def target_quiver(self, fn: str) -> Quiver:
        if fn in ("i_upper", "i_shriek"):
            return self.qa
        if fn == "j_upper":
            return self.qb
        return self.quiver

    def _resolve(self, fn: str) -> str:
        if fn not in FUNCTORS:
            raise ValueError(f"unknown functor {fn!r}")
        if self.flipped_table:
            swap = {"i_upper": "i_shriek", "i_shriek": "i_upper",
                    "j_lower_shriek": "j_lower_star", "j_lower_star": "j_lower_shriek"}
            return swap.get(fn, fn)
        return fn

    def apply(self, fn: str, x: Rep | RepMor) -> Rep | RepMor:
        """Apply one of the six functors to a representation or a morphism."""
        impl = self._resolve(fn)
        src = self.source_quiver(fn)
        if isinstance(x, RepMor):
            self._check(x.source, src, fn)
            self._check(x.target, src, fn)
            if impl == "i_lower":
                return _extend_mor(x, self.quiver, x.source.extend_by_zero(self.quiver),
                                   x.target.extend_by_zero(self.quiver))
            if impl == "j_upper":
                return _restrict_mor(x, self.qb)
            if impl == "j_lower_shriek":
                return self._kan.mor(x)
            if impl == "j_lower_star":
                return self._j_star_mor(x)
            if impl == "i_upper":
                return self._i_upper_mor(x)
            return self._i_shriek_mor(x)
        self._check(x, src, fn)
        if impl == "i_lower":
            return x.extend_by_zero(self.quiver)
        if impl == "j_upper":
            return x.restrict(self.qb)
        if impl == "j_lower_shriek":
            return self._kan.obj(x)
        if impl == "j_lower_star":
            return self._j_star(x)
        if impl == "i_upper":
            return self._i_upper(x)
        return self._i_shriek(x)

    # shorthands
    def i_upper(self, x):
        return self.apply("i_upper", x)

    def i_lower(self, x):
        return self.apply("i_lower", x)

    def i_shriek(self, x):
        return self.apply("i_shriek", x)

    def j_lower_shriek(self, x):
        return self.apply("j_lower_shriek", x)

    def j_upper(self, x):
        return self.apply("j_upper", x)

    def j_lower_star(self, x):
        return self.apply("j_lower_star", x)

    # --- units and counits ----------------------------------------------------
    def unit(self, pair: str, x: Rep) -> RepMor:
        """Unit ``x -> G F x`` of the adjoint pair ``F -| G`` named by ``pair`` (see ``PAIRS``)."""
        if pair == "i":
            self._check(x, self.quiver, "i_upper")
            c, proj = self._coker_data(x)
            return proj
        if pair == "i_shriek":
            self._check(x, self.qa, "i_lower")
            m = x.extend_by_zero(self.quiver)
            k, inc = self._ker_data(m)
            inv = _inverse_mor(_restrict_mor(inc, self.qa))
            return RepMor(x, k.restrict(self.qa), inv.comps, check=False)
        if pair == "j_shriek":
            self._check(x, self.qb, "j_lower_shriek")
            return self._kan.unit(x)
        if pair == "j":
            self._check(x, self.quiver, "j_upper")
            return self._eta(x)
        raise ValueError(f"unknown adjoint pair {pair!r}")

    def counit(self, pair: str, x: Rep) -> RepMor:
        """Counit ``F G x -> x`` of the adjoint pair named by ``pair``."""
        if pair == "i":
            self._check(x, self.qa, "i_lower")
            m = x.extend_by_zero(self.quiver)
            c, proj = self._coker_data(m)
            inv = _inverse_mor(_restrict_mor(proj, self.qa))
            return RepMor(c.restrict(self.qa), x, inv.comps, check=False)
        if pair == "i_shriek":
            self._check(x, self.quiver, "i_shriek")
            return self._ker_data(x)[1]
        if pair == "j_shriek":
            self._check(x, self.quiver, "j_upper")
            return self._kan.counit(x)
        if pair == "j":
            self._check(x, self.qb, "j_lower_star")
            return self._kan_op.unit(x.dual()).dual()
        raise ValueError(f"unknown adjoint pair {pair!r}")

    def unit_counit(self, pair: str, x: Rep, which: str = "unit") -> RepMor:
        return self.unit(pair, x) if which == "unit" else self.counit(pair, x)

    # --- intermediate extension ---------------------------------------------------
    def gamma(self, y: Rep) -> RepMor:
        """The map j_! Y -> j_* Y adjoint to the identity of Y."""
        self._check(y, self.qb, "j_lower_shriek")
        u = self._kan.unit(y)
        jy = self._kan.obj(y)
        back = self._j_star_mor(_inverse_mor(u))
        return back @ self._eta(jy)

    def intermediate_extension(self, y: Rep) -> Rep:
        """``j_!* Y``, the image of ``j_! Y -> j_* Y``."""
        return image(self.gamma(y))[0]

    def j_intermediate(self, y: Rep) -> Rep:
        return self.intermediate_extension(y)

    def describe(self) -> dict:
        ex = self.exactness
        return {
            "i_side": list(self.split.i_side),
            "j_side": list(self.split.j_side),
            "orientation": self.split.orientation,
            "exact": [SYMBOLS[f] for f in FUNCTORS if ex[f]],
        }


def build(q: Quiver, quotient_part: Iterable[str], p: int = 2, *, spot_check: bool = True) -> Recollement:
    """Recollement of the vertex split with j-side ``quotient_part``."""
    r = Recollement(VertexSplit.of(q, quotient_part), p)
    if spot_check:
        for v in q.vertices:
            s = Rep.simple(q, p, v)
            for w in r.split.j_side:
                y = Rep.simple(r.qb, p, w)
                if hom_dim(r.j_lower_shriek(y), s) != hom_dim(y, r.j_upper(s)):
                    raise SplitError("left Kan extension failed its adjunction spot check")
                if hom_dim(s, r.j_lower_star(y)) != hom_dim(r.j_upper(s), y):
                    raise SplitError("right Kan extension failed its adjunction spot check")
    return r
