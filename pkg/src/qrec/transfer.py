"""Moving ICE-closed subcategories, torsion classes and bricks across a recollement.

Every map re-verifies its conclusion: the output comes with a certificate
that is computed, not assumed. Violated hypotheses raise
:class:`~qrec.errors.HypothesisFailed` with a witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import HypothesisFailed
from .homology import ext_classes, extension, hom_dim
from .quiver import Quiver
from .recollement import SYMBOLS, Recollement, build
from .subcat import (KIND_OPS, Subcat, canonical_sort, enumerate_subcats,
                     find_violation, is_epibrick, is_ice, is_monobrick,
                     satisfies, subsets)
from .universe import Universe, all_indecomposables

DIRECTIONS = (
    "from_i_side", "from_j_side_star", "from_j_side_shriek", "restrict_j",
    "restrict_i_upper", "restrict_i_shriek", "preimage_j", "preimage_i_upper", "preimage_i_shriek",
)


@dataclass
class Setting:
    """A recollement together with the universes of its three categories."""

    r: Recollement
    ua: Universe
    ul: Universe
    ub: Universe
    mult_cap: int = 2

    @classmethod
    def of(cls, q: Quiver, quotient_part: Iterable[str], p: int = 2, dim_bound: int = 30,
           mult_cap: int = 2) -> "Setting":
        r = build(q, quotient_part, p)
        return cls(r,
                   all_indecomposables(r.qa, p, dim_bound, label="A"),
                   all_indecomposables(q, p, dim_bound, label="Lambda"),
                   all_indecomposables(r.qb, p, dim_bound, label="B"),
                   mult_cap)

    def universe_of(self, side: str) -> Universe:
        return {"i": self.ua, "ambient": self.ul, "j": self.ub}[side]

    def push(self, fn: str, c: Subcat | Iterable[int], target: Universe) -> Subcat:
        """``add F(c)`` identified in ``target``; ``fn`` may also be ``j_intermediate``."""
        src_u = c.universe if isinstance(c, Subcat) else None
        idx = c.indices if isinstance(c, Subcat) else tuple(c)
        out: set[int] = set()
        for i in idx:
            x = (src_u or self._source_universe(fn))[i]
            y = self.r.intermediate_extension(x) if fn == "j_intermediate" else self.r.apply(fn, x)
            out.update(target.identify(y))
        return Subcat(target, out)

    def _source_universe(self, fn: str) -> Universe:
        if fn == "i_lower":
            return self.ua
        if fn in ("j_lower_shriek", "j_lower_star", "j_intermediate"):
            return self.ub
        return self.ul

    def exactness_witness(self, fn: str) -> str | None:
        """A short exact sequence that ``fn`` fails to keep exact, or None."""
        return self.r.exactness_witness(fn)


@dataclass
class Certificate:
    kind: str
    ok: bool
    hypotheses: list[str] = field(default_factory=list)
    violation: str | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "ok": self.ok, "hypotheses": self.hypotheses, "violation": self.violation}


def _certify(out: Subcat, kind: str, mult_cap: int, hyps: list[str]) -> Certificate:
    if kind in KIND_OPS:
        v = find_violation(out, KIND_OPS[kind], mult_cap)
        return Certificate(kind, v is None, hyps, None if v is None else v.describe(out.universe))
    ok = satisfies(out, kind, mult_cap)
    return Certificate(kind, ok, hyps, None if ok else f"{out} is not {kind}")


def _require_exact(st: Setting, fn: str, hyps: list[str]) -> None:
    w = st.exactness_witness(fn)
    if w is not None:
        raise HypothesisFailed(f"{SYMBOLS[fn]} is not exact", witness=w)
    hyps.append(f"{SYMBOLS[fn]} exact")


def _require_inside(part: Subcat, whole: Subcat, label: str, hyps: list[str]) -> None:
    extra = part.members - whole.members
    if extra:
        names = [part.universe.names[i] for i in sorted(extra)]
        raise HypothesisFailed(f"{label} fails: {', '.join(names)} not in {whole}", witness=names[0])
    hyps.append(label)


def preimage(st: Setting, fn: str, w: Subcat) -> Subcat:
    """Members M of the ambient universe with F(M) in add W."""
    ok = [i for i, m in enumerate(st.ul) if set(w.universe.identify(st.r.apply(fn, m))) <= w.members]
    return Subcat(st.ul, ok)


def transfer(st: Setting, kind: str, direction: str, c: Subcat, mult_cap: int | None = None
             ) -> tuple[Subcat, Certificate]:
    """Apply one of the transfer maps to ``c`` and certify the result."""
    if kind not in ("ice", "torsion"):
        raise ValueError(f"transfer kind must be ice or torsion, not {kind!r}")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    cap = st.mult_cap if mult_cap is None else mult_cap
    expected = {"from_i_side": st.ua, "from_j_side_star": st.ub, "from_j_side_shriek": st.ub,
                "preimage_j": st.ub, "preimage_i_upper": st.ua, "preimage_i_shriek": st.ua}.get(direction, st.ul)
    if c.universe is not expected:
        raise ValueError(f"{direction} expects a subcategory of {expected.label or 'the matching universe'}")
    hyps: list[str] = []
    r = st.r
    if direction == "from_i_side":
        out = st.push("i_lower", c, st.ul)
    elif direction in ("from_j_side_star", "from_j_side_shriek"):
        fn = "j_lower_star" if direction.endswith("star") else "j_lower_shriek"
        if kind == "ice":
            _require_exact(st, fn, hyps)
        else:
            _require_exact(st, "i_shriek" if fn == "j_lower_star" else "i_upper", hyps)
        out = st.push(fn, c, st.ul)
    elif direction == "restrict_j":
        base = st.push("i_lower", Subcat(st.ua, range(len(st.ua))), st.ul)
        _require_inside(base, c, "i_*(mod A) inside C", hyps)
        back = st.push("j_lower_shriek", st.push("j_upper", c, st.ub), st.ul)
        if back.members <= c.members:
            hyps.append("j_! j^*(C) inside C")
        elif r.exactness["j_lower_star"]:
            hyps.append("j_* exact")
        else:
            _require_inside(back, c, "j_! j^*(C) inside C (and j_* is not exact)", hyps)
        out = st.push("j_upper", c, st.ub)
    elif direction in ("restrict_i_upper", "restrict_i_shriek"):
        fn = "i_upper" if direction == "restrict_i_upper" else "i_shriek"
        image_a = st.push(fn, c, st.ua)
        _require_inside(st.push("i_lower", image_a, st.ul), c, f"i_* {SYMBOLS[fn]}(C) inside C", hyps)
        out = image_a
    elif direction == "preimage_j":
        out = preimage(st, "j_upper", c)
    else:
        fn = "i_upper" if direction == "preimage_i_upper" else "i_shriek"
        _require_exact(st, fn, hyps)
        out = preimage(st, fn, c)
    return out, _certify(out, kind, cap, hyps)


# --- the bijection ------------------------------------------------------------------

@dataclass
class BijectionReport:
    ambient: list[Subcat]
    quotient: list[Subcat]
    forward: list[int | None]
    backward: list[int | None]
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "ambient": [str(c) for c in self.ambient],
            "quotient": [str(c) for c in self.quotient],
            "matching": [[str(self.ambient[i]), str(self.quotient[j]) if j is not None else None]
                         for i, j in enumerate(self.forward)],
            "problems": self.problems,
        }


def verify_bijection(st: Setting, mult_cap: int | None = None, use_filter: bool = True) -> BijectionReport:
    """Check that C -> j^*(C) and W -> preimage of W are inverse bijections.

    Ambient side: ICE-closed C containing i_*(mod A) with j_! j^*(C) inside C.
    With ``use_filter=False`` the last condition is dropped (negative control).
    """
    cap = st.mult_cap if mult_cap is None else mult_cap
    base = st.push("i_lower", Subcat(st.ua, range(len(st.ua))), st.ul)
    amb = []
    for s in subsets(st.ul, include_empty=True, containing=base.members):
        c = Subcat(st.ul, s)
        if not is_ice(c, cap):
            continue
        if use_filter:
            back = st.push("j_lower_shriek", st.push("j_upper", c, st.ub), st.ul)
            if not back.members <= c.members:
                continue
        amb.append(c.with_kind("ice"))
    amb = canonical_sort(amb)
    quo = enumerate_subcats(st.ub, "ice", cap)
    problems = []
    fwd: list[int | None] = []
    for c in amb:
        w = st.push("j_upper", c, st.ub)
        j = quo.index(w) if w in quo else None
        if j is None:
            problems.append(f"j^*({c}) = {w} is not ICE-closed in mod B")
        fwd.append(j)
    bwd: list[int | None] = []
    for w in quo:
        c = preimage(st, "j_upper", w)
        i = amb.index(c) if c in amb else None
        if i is None:
            problems.append(f"preimage of {w} = {c} is not among the ambient subcategories")
        bwd.append(i)
    for i, j in enumerate(fwd):
        if j is not None and bwd[j] != i:
            problems.append(f"{amb[i]} -> {quo[j]} -> {amb[bwd[j]] if bwd[j] is not None else None} is not the identity")
    for j, i in enumerate(bwd):
        if i is not None and fwd[i] != j:
            problems.append(f"{quo[j]} -> {amb[i]} -> back is not the identity")
    hit = [j for j in fwd if j is not None]
    if len(set(hit)) != len(hit):
        problems.append("forward map is not injective")
    if len(amb) != len(quo):
        problems.append(f"{len(amb)} ambient subcategories against {len(quo)} in mod B")
    return BijectionReport(amb, quo, fwd, bwd, problems)


def verify_sub_recollement(st: Setting, c: Subcat, mult_cap: int | None = None) -> dict:
    """Check that the six functors restrict to ``mod A``, ``c`` and ``add j^*(c)``."""
    cap = st.mult_cap if mult_cap is None else mult_cap
    hyps: list[str] = []
    if not is_ice(c, cap):
        raise HypothesisFailed(f"{c} is not ICE-closed", witness=find_violation(c, KIND_OPS["ice"], cap))
    hyps.append("C ICE-closed")
    full_a = Subcat(st.ua, range(len(st.ua)))
    _require_inside(st.push("i_lower", full_a, st.ul), c, "i_*(mod A) inside C", hyps)
    cq = st.push("j_upper", c, st.ub)
    _require_inside(st.push("j_lower_shriek", cq, st.ul), c, "j_! j^*(C) inside C", hyps)
    checks = {
        "i_* maps mod A into C": st.push("i_lower", full_a, st.ul) <= c,
        "j^* maps C onto add j^*(C)": st.push("j_upper", c, st.ub) == cq,
        "j_! maps add j^*(C) into C": st.push("j_lower_shriek", cq, st.ul) <= c,
        "j_* maps add j^*(C) into C": st.push("j_lower_star", cq, st.ul) <= c,
        "i^* maps C into mod A": st.push("i_upper", c, st.ua) <= full_a,
        "i^! maps C into mod A": st.push("i_shriek", c, st.ua) <= full_a,
    }
    r = st.r
    adj = True
    for m in c.reps():
        for x in st.ua:
            adj &= hom_dim(r.i_upper(m), x) == hom_dim(m, r.i_lower(x))
            adj &= hom_dim(r.i_lower(x), m) == hom_dim(x, r.i_shriek(m))
        for y in cq.reps():
            adj &= hom_dim(r.j_lower_shriek(y), m) == hom_dim(y, r.j_upper(m))
            adj &= hom_dim(m, r.j_lower_star(y)) == hom_dim(r.j_upper(m), y)
    checks["adjunction identities on C"] = adj
    return {"subcat": str(c), "quotient_part": str(cq), "hypotheses": hyps, "checks": checks,
            "ok": all(checks.values())}


# --- gluing bricks ---------------------------------------------------------------------

VIA = {"intermediate": "j_intermediate", "shriek": "j_lower_shriek", "star": "j_lower_star"}


def glue_bricks(st: Setting, s_i: Subcat, s_j: Subcat, kind: str, via: str) -> tuple[Subcat, Certificate, dict]:
    """``i_*(s_i)`` together with ``F(s_j)``, F one of j_!*, j_!, j_*; certified and with its Hom table."""
    if kind not in ("epibrick", "monobrick"):
        raise ValueError("kind must be epibrick or monobrick")
    if via not in VIA:
        raise ValueError(f"via must be one of {sorted(VIA)}")
    pred = is_epibrick if kind == "epibrick" else is_monobrick
    hyps: list[str] = []
    if not pred(s_i):
        raise HypothesisFailed(f"{s_i} is not an {kind} in mod A", witness=str(s_i))
    if not pred(s_j):
        raise HypothesisFailed(f"{s_j} is not an {kind} in mod B", witness=str(s_j))
    hyps.append(f"inputs are {kind}s")
    if via == "shriek":
        _require_exact(st, "i_upper", hyps)
    elif via == "star":
        _require_exact(st, "i_shriek", hyps)
    left = st.push("i_lower", s_i, st.ul)
    right = st.push(VIA[via], s_j, st.ul)
    out = Subcat(st.ul, left.members | right.members)
    ok = pred(out)
    table = {f"{st.ul.names[a]}->{st.ul.names[b]}": hom_dim(st.ul[a], st.ul[b])
             for a in out.indices for b in out.indices}
    cert = Certificate(kind, ok, hyps, None if ok else f"{out} is not an {kind}")
    return out, cert, table

