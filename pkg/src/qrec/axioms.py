"""Randomised verification that the six functors form a recollement."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import LIMITS
from .homology import _hom_flat, hom_dim, is_isomorphic
from .linalg import image_basis, kernel_basis
from .quiver import Quiver, Rep, RepMor, direct_sum, unflatten
from .recollement import SYMBOLS, Recollement


def default_seed() -> int:
    env = os.environ.get("QREC_SEED")
    return int(env) if env else LIMITS.seed


@dataclass
class Check:
    name: str
    passed: int = 0
    failed: int = 0
    witnesses: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, good: bool, witness: Callable[[], dict]) -> None:
        if good:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.witnesses) < 3:
                self.witnesses.append(witness())


@dataclass
class AxiomReport:
    samples: int
    seed: int
    checks: dict[str, Check] = field(default_factory=dict)

    def check(self, name: str) -> Check:
        if name not in self.checks:
            self.checks[name] = Check(name)
        return self.checks[name]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [n for n, c in self.checks.items() if not c.ok]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "samples": self.samples,
            "seed": self.seed,
            "checks": {n: {"ok": c.ok, "passed": c.passed, "failed": c.failed, "witnesses": c.witnesses}
                       for n, c in self.checks.items()},
        }

    def summary(self) -> str:
        lines = []
        for n, c in self.checks.items():
            lines.append(f"{'PASS' if c.ok else 'FAIL'} {n}: {c.passed} passed, {c.failed} failed")
        return "\n".join(lines)


def random_rep(q: Quiver, p: int, rng: np.random.Generator, max_dim: int = 2) -> Rep:
    dims = {v: int(rng.integers(0, max_dim + 1)) for v in q.vertices}
    mats = {a.name: rng.integers(0, p, size=(dims[a.target], dims[a.source])) for a in q.arrows}
    return Rep(q, p, dims, mats)


def random_mor(m: Rep, n: Rep, rng: np.random.Generator) -> RepMor:
    basis = _hom_flat(m, n)
    if basis.shape[0] == 0:
        return RepMor.zero(m, n)
    coeffs = rng.integers(0, m.p, size=basis.shape[0])
    return unflatten(m, n, (coeffs @ basis) % m.p)


def _w(**objs) -> dict:
    out = {}
    for k, v in objs.items():
        out[k] = v.to_json() if isinstance(v, Rep) else v
    return out


def _exact_at(f: RepMor, g: RepMor) -> bool:
    """Image of f equals kernel of g at every vertex."""
    for v in f.source.quiver.vertices:
        if not (g.comps[v] @ f.comps[v]).is_zero():
            return False
        if image_basis(f.comps[v]).cols != kernel_basis(g.comps[v]).cols:
            return False
    return True


def _on_side(m: Rep, side: tuple[str, ...]) -> bool:
    return all(v in side for v in m.support)


def _sample_composable(q: Quiver, p: int, rng, max_dim) -> tuple[RepMor, RepMor]:
    m = random_rep(q, p, rng, max_dim)
    x = random_rep(q, p, rng, max_dim)
    n = direct_sum([m, x])
    f = random_mor(m, n, rng)
    g = random_mor(n, n, rng)
    return f, g


def verify_axioms(r: Recollement, samples: int = 50, seed: int | None = None, max_dim: int = 2) -> AxiomReport:
    """Check the recollement axioms on ``samples`` random objects and morphisms per category.

    Failures are recorded with witnesses rather than raised.
    """
    seed = default_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    rep = AxiomReport(samples, seed)
    q, qa, qb, p = r.quiver, r.qa, r.qb, r.p
    i_side, j_side = r.split.i_side, r.split.j_side

    for _ in range(samples):
        m = random_rep(q, p, rng, max_dim)
        x = random_rep(qa, p, rng, max_dim)
        y = random_rep(qb, p, rng, max_dim)

        # adjunctions, by dimension
        c = rep.check("adjunction i^* -| i_*")
        c.record(hom_dim(r.i_upper(m), x) == hom_dim(m, r.i_lower(x)), lambda: _w(M=m, X=x))
        c = rep.check("adjunction i_* -| i^!")
        c.record(hom_dim(r.i_lower(x), m) == hom_dim(x, r.i_shriek(m)), lambda: _w(M=m, X=x))
        c = rep.check("adjunction j_! -| j^*")
        c.record(hom_dim(r.j_lower_shriek(y), m) == hom_dim(y, r.j_upper(m)), lambda: _w(M=m, Y=y))
        c = rep.check("adjunction j^* -| j_*")
        c.record(hom_dim(m, r.j_lower_star(y)) == hom_dim(r.j_upper(m), y), lambda: _w(M=m, Y=y))

        # full faithfulness
        x2 = random_rep(qa, p, rng, max_dim)
        y2 = random_rep(qb, p, rng, max_dim)
        c = rep.check("fully faithful i_*")
        c.record(hom_dim(x, x2) == hom_dim(r.i_lower(x), r.i_lower(x2)), lambda: _w(X=x, X2=x2))
        c = rep.check("fully faithful j_!")
        c.record(hom_dim(y, y2) == hom_dim(r.j_lower_shriek(y), r.j_lower_shriek(y2)), lambda: _w(Y=y, Y2=y2))
        c = rep.check("fully faithful j_*")
        c.record(hom_dim(y, y2) == hom_dim(r.j_lower_star(y), r.j_lower_star(y2)), lambda: _w(Y=y, Y2=y2))

        # Ker j^* = Im i_*
        c = rep.check("Ker j^* = Im i_*")
        good = r.j_upper(r.i_lower(x)).is_zero()
        if r.j_upper(m).is_zero() != _on_side(m, i_side):
            good = False
        if r.j_upper(m).is_zero():
            try:
                good = good and r.unit("i", m).is_iso()
            except Exception:
                good = False
        mi = Rep(q, p, {v: m.dims[v] for v in i_side},
                 {a.name: m.mats[a.name] for a in q.arrows if a.source in i_side and a.target in i_side})
        good = good and r.j_upper(mi).is_zero() and r.unit("i", mi).is_iso()
        c.record(good, lambda: _w(M=m, X=x))

        # unit/counit isomorphisms
        if not r.flipped_table:
            c = rep.check("i^* i_* = id")
            c.record(r.counit("i", x).is_iso(), lambda: _w(X=x))
            c = rep.check("i^! i_* = id")
            c.record(r.unit("i_shriek", x).is_iso(), lambda: _w(X=x))
            c = rep.check("j^* j_! = id")
            c.record(r.unit("j_shriek", y).is_iso(), lambda: _w(Y=y))
            c = rep.check("j^* j_* = id")
            c.record(r.counit("j", y).is_iso(), lambda: _w(Y=y))

            # 0 -> i_* i^! M -> M -> j_* j^* M -> i_* M' -> 0
            c = rep.check("four-term sequence (i^!, j_*)")
            k = r.counit("i_shriek", m)
            eta = r.unit("j", m)
            good = k.is_mono() and _exact_at(k, eta) and _on_side(k.source, i_side)
            cok = [eta.target.dims[v] - image_basis(eta.comps[v]).cols for v in q.vertices]
            good = good and all(d == 0 for v, d in zip(q.vertices, cok) if v in j_side)
            c.record(good, lambda: _w(M=m))

            # 0 -> i_* M'' -> j_! j^* M -> M -> i_* i^* M -> 0
            c = rep.check("four-term sequence (j_!, i^*)")
            eps = r.counit("j_shriek", m)
            u = r.unit("i", m)
            good = u.is_epi() and _exact_at(eps, u) and _on_side(u.target, i_side)
            ker = [eps.source.dims[v] - image_basis(eps.comps[v]).cols for v in q.vertices]
            good = good and all(d == 0 for v, d in zip(q.vertices, ker) if v in j_side)
            c.record(good, lambda: _w(M=m))

        # functoriality and naturality on sampled composable pairs
        for cat_q, fns in ((q, ("i_upper", "i_shriek", "j_upper")), (qa, ("i_lower",)),
                           (qb, ("j_lower_shriek", "j_lower_star"))):
            f, g = _sample_composable(cat_q, p, rng, max_dim)
            for fn in fns:
                c = rep.check(f"functoriality {SYMBOLS[fn]}")
                try:
                    ff, fg, fgf = r.apply(fn, f), r.apply(fn, g), r.apply(fn, g @ f)
                    ident = r.apply(fn, RepMor.identity(f.source))
                    good = (fg @ ff) == fgf and ident == RepMor.identity(r.apply(fn, f.source))
                    good = good and _commutes(ff) and _commutes(fg)
                except Exception:
                    good = False
                c.record(good, lambda: _w(M=f.source, N=f.target))
        if not r.flipped_table:
            f, _ = _sample_composable(q, p, rng, max_dim)
            c = rep.check("naturality of units and counits")
            good = (r.unit("j", f.target) @ f == r.apply("j_lower_star", r.apply("j_upper", f)) @ r.unit("j", f.source)
                    and f @ r.counit("j_shriek", f.source)
                    == r.counit("j_shriek", f.target) @ r.apply("j_lower_shriek", r.apply("j_upper", f))
                    and r.unit("i", f.target) @ f == r.apply("i_lower", r.apply("i_upper", f)) @ r.unit("i", f.source)
                    and f @ r.counit("i_shriek", f.source)
                    == r.counit("i_shriek", f.target) @ r.apply("i_lower", r.apply("i_shriek", f)))
            c.record(good, lambda: _w(M=f.source, N=f.target))
    return rep


def _commutes(f: RepMor) -> bool:
    try:
        RepMor(f.source, f.target, f.comps, check=True)
    except ValueError:
        return False
    return True


def lemma_checks(r: Recollement, ys) -> list[dict]:
    """For each B-side object: i^* j_!* Y = 0, i^! j_!* Y = 0 and j^* j_!* Y is isomorphic to Y."""
    out = []
    for y in ys:
        mid = r.intermediate_extension(y)
        out.append({
            "Y": y,
            "i_upper_zero": r.i_upper(mid).is_zero(),
            "i_shriek_zero": r.i_shriek(mid).is_zero(),
            "restricts_back": is_isomorphic(r.j_upper(mid), y),
        })
    return out

