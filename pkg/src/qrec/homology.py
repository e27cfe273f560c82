"""Hom spaces, (co)kernels, Ext^1, isomorphism tests and Krull-Schmidt splitting."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from . import backend
from .backend import kernels
from .config import LIMITS
from .errors import DecomposeInconclusive, Inconclusive, IsoTestInconclusive
from .linalg import (FpMat, image_basis, kernel_basis, left_annihilator, rref,
                     right_inverse, solve)
from .quiver import Quiver, Rep, RepMor, direct_sum, flat_layout, unflatten


def _same_category(m: Rep, n: Rep) -> None:
    if m.quiver != n.quiver or m.p != n.p:
        raise ValueError("representations live over different quivers or fields")


def _hom_system(m: Rep, n: Rep) -> np.ndarray:
    """Matrix of the commuting-square equations on flattened morphisms ``m -> n``."""
    q = m.quiver
    offs, off = {}, 0
    for v in q.vertices:
        offs[v] = off
        off += n.dims[v] * m.dims[v]
    rows = sum(n.dims[a.target] * m.dims[a.source] for a in q.arrows)
    sysm = np.zeros((rows, off), dtype=np.int64)
    r = 0
    p = m.p
    for a in q.arrows:
        i, j = a.source, a.target
        h = n.dims[j] * m.dims[i]
        if h == 0:
            continue
        # vec(f_j M_a) = (I (x) M_a^T) vec(f_j);  vec(N_a f_i) = (N_a (x) I) vec(f_i)
        if m.dims[j]:
            sysm[r:r + h, offs[j]:offs[j] + n.dims[j] * m.dims[j]] += np.kron(
                np.eye(n.dims[j], dtype=np.int64), m.mats[a.name].a.T)
        if n.dims[i]:
            sysm[r:r + h, offs[i]:offs[i] + n.dims[i] * m.dims[i]] -= np.kron(
                n.mats[a.name].a, np.eye(m.dims[i], dtype=np.int64))
        r += h
    return sysm % p


@lru_cache(maxsize=50000)
def _hom_flat(m: Rep, n: Rep) -> np.ndarray:
    """Rows are a basis of Hom(m, n) in flattened vertex order."""
    sysm = _hom_system(m, n)
    if sysm.shape[1] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    k = kernel_basis(FpMat._wrap(m.p, sysm))
    out = np.ascontiguousarray(k.a.T)
    out.setflags(write=False)
    return out


def hom_basis(m: Rep, n: Rep) -> list[RepMor]:
    """A basis of Hom(m, n); deterministic order."""
    _same_category(m, n)
    return [unflatten(m, n, row) for row in _hom_flat(m, n)]


def hom_dim(m: Rep, n: Rep) -> int:
    _same_category(m, n)
    return int(_hom_flat(m, n).shape[0])


def ext_dim(p_: Rep, m: Rep) -> int:
    """dim Ext^1(p_, m)."""
    _same_category(p_, m)
    delta = _ext_delta(p_, m)
    return delta.shape[0] - (FpMat._wrap(m.p, delta).rank() if delta.size else 0)


def euler_pairing(q: Quiver, dm: Sequence[int], dn: Sequence[int]) -> int:
    """Sum_v d_v e_v - Sum_{a: i -> j} d_i e_j, dimension vectors in vertex order."""
    d = dict(zip(q.vertices, dm))
    e = dict(zip(q.vertices, dn))
    return sum(d[v] * e[v] for v in q.vertices) - sum(d[a.source] * e[a.target] for a in q.arrows)


# --- kernels, cokernels, images -------------------------------------------

def subrep(n: Rep, spaces: dict[str, FpMat]) -> tuple[Rep, RepMor]:
    """Subrepresentation spanned by the column bases ``spaces`` (assumed arrow-stable)."""
    p = n.p
    mats = {}
    for a in n.quiver.arrows:
        src, tgt = spaces[a.source], spaces[a.target]
        x = solve(tgt, n.mats[a.name] @ src)
        if x is None:
            raise ValueError(f"subspace family is not stable under arrow {a.name}")
        mats[a.name] = x
    sub = Rep(n.quiver, p, {v: spaces[v].cols for v in n.quiver.vertices}, mats)
    return sub, RepMor(sub, n, spaces, check=False)


def quotient(n: Rep, spaces: dict[str, FpMat]) -> tuple[Rep, RepMor]:
    """Quotient of ``n`` by the arrow-stable subspaces ``spaces`` with its projection."""
    p = n.p
    qs = {v: left_annihilator(spaces[v]) if spaces[v].cols else FpMat.identity(p, n.dims[v])
          for v in n.quiver.vertices}
    mats = {}
    for a in n.quiver.arrows:
        qi = qs[a.source]
        s = right_inverse(qi) if qi.rows else FpMat.zeros(p, qi.cols, 0)
        mats[a.name] = qs[a.target] @ n.mats[a.name] @ s
    quo = Rep(n.quiver, p, {v: qs[v].rows for v in n.quiver.vertices}, mats)
    return quo, RepMor(n, quo, qs, check=False)


def kernel(f: RepMor) -> tuple[Rep, RepMor]:
    return subrep(f.source, {v: kernel_basis(c) for v, c in f.comps.items()})


def cokernel(f: RepMor) -> tuple[Rep, RepMor]:
    return quotient(f.target, {v: image_basis(c) for v, c in f.comps.items()})


def image(f: RepMor) -> tuple[Rep, RepMor, RepMor]:
    """``Im f`` with ``f = mono o epi``."""
    spaces = {v: image_basis(c) for v, c in f.comps.items()}
    im, mono = subrep(f.target, spaces)
    epi_c = {}
    for v, c in f.comps.items():
        x = solve(spaces[v], c)
        assert x is not None
        epi_c[v] = x
    epi = RepMor(f.source, im, epi_c, check=False)
    return im, mono, epi


# --- searching Hom spaces -------------------------------------------------

def search_hom(m: Rep, n: Rep, mode: int, what: str = "Hom search") -> RepMor | None:
    """First element of Hom(m, n) passing ``mode`` (see ``qrec.backend``), or None.

    Exhaustive when p^dim <= ``LIMITS.enum_threshold``; otherwise a seeded
    random search that raises :class:`Inconclusive` when it finds nothing.
    """
    basis = _hom_flat(m, n)
    layout = flat_layout(m, n)
    d = basis.shape[0]
    p = m.p
    if p ** d <= LIMITS.enum_threshold:
        coeffs = kernels.span_search(basis, layout, p, mode)
        if coeffs is None:
            return None
        vec = (np.asarray(coeffs, dtype=np.int64) @ basis) % p if d else np.zeros(layout[:, 1] @ layout[:, 2], dtype=np.int64)
        return unflatten(m, n, vec)
    rng = np.random.default_rng(LIMITS.seed)
    for _ in range(LIMITS.random_trials):
        coeffs = rng.integers(0, p, d)
        vec = (coeffs @ basis) % p
        if kernels.check_element(vec, layout, p, mode):
            return unflatten(m, n, vec)
    raise Inconclusive(f"{what}: p^{d} exceeds enumeration threshold and random search found nothing")


def _cheap_invariants(m: Rep) -> tuple:
    return (m.dim_vector, tuple(m.mats[a.name].rank() for a in m.quiver.arrows))


def is_isomorphic(m: Rep, n: Rep) -> bool:
    _same_category(m, n)
    if m.dim_vector != n.dim_vector:
        return False
    if m == n:
        return True
    if _cheap_invariants(m) != _cheap_invariants(n):
        return False
    if hom_dim(m, n) != hom_dim(m, m):
        return False
    try:
        return search_hom(m, n, backend.ISO, "isomorphism test") is not None
    except Inconclusive as exc:
        raise IsoTestInconclusive(str(exc)) from None


def is_brick(m: Rep) -> bool:
    """End(m) is a division ring: every nonzero endomorphism is invertible."""
    if m.is_zero():
        return False
    if hom_dim(m, m) == 1:
        return True
    return search_hom(m, m, backend.NONZERO_NOT_ISO, "brick test") is None


def all_nonzero_homs(m: Rep, n: Rep, epi: bool) -> bool:
    """Every nonzero morphism m -> n is surjective (``epi``) or injective."""
    mode = backend.NONZERO_NOT_SURJ if epi else backend.NONZERO_NOT_INJ
    if hom_dim(m, n) == 0:
        return True
    return search_hom(m, n, mode, "epi/mono test") is None


def exists_surjection(m: Rep, n: Rep) -> bool:
    if hom_dim(m, n) == 0:
        return n.is_zero()
    return search_hom(m, n, backend.SURJ, "surjection search") is not None


# --- Krull-Schmidt ----------------------------------------------------------

def _split_support(n: Rep) -> list[Rep] | None:
    """Split along connected components of the support, if there is more than one."""
    sup = set(n.support)
    if not sup:
        return []
    adj = {v: set() for v in sup}
    for a in n.quiver.arrows:
        if a.source in sup and a.target in sup:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
    comps = []
    seen: set[str] = set()
    for v in n.quiver.vertices:
        if v in sup and v not in seen:
            stack, comp = [v], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            comps.append(comp)
    if len(comps) < 2:
        return None
    return [Rep(n.quiver, n.p, {v: n.dims[v] for v in c},
                {a.name: n.mats[a.name] for a in n.quiver.arrows if a.source in c and a.target in c})
            for c in comps]


def fitting_idempotent(phi: RepMor) -> RepMor:
    """Idempotent projecting onto ``Im phi^m`` along ``Ker phi^m`` (m = total dim)."""
    n = phi.source
    power = RepMor.identity(n)
    for _ in range(max(n.total_dim, 1)):
        power = phi @ power
    im_sp = {v: image_basis(c) for v, c in power.comps.items()}
    ker_sp = {v: kernel_basis(c) for v, c in power.comps.items()}
    comps = {}
    p = n.p
    for v in n.quiver.vertices:
        i, k = im_sp[v], ker_sp[v]
        basis = FpMat._wrap(p, np.concatenate([i.a, k.a], axis=1)) if n.dims[v] else FpMat.zeros(p, 0, 0)
        # coordinates in (image | kernel) basis, keep the image part
        coords = solve(basis, FpMat.identity(p, n.dims[v]))
        assert coords is not None
        keep = FpMat._wrap(p, coords.a[:i.cols]) if i.cols else FpMat.zeros(p, 0, n.dims[v])
        comps[v] = i @ keep
    return RepMor(n, n, comps)


@lru_cache(maxsize=20000)
def _decompose(n: Rep) -> tuple[Rep, ...]:
    if n.is_zero():
        return ()
    parts = _split_support(n)
    if parts is not None:
        return tuple(x for part in parts for x in _decompose(part))
    if hom_dim(n, n) == 1:
        return (n,)
    try:
        phi = search_hom(n, n, backend.FITTING, "decomposition")
    except Inconclusive as exc:
        raise DecomposeInconclusive(str(exc)) from None
    if phi is None:
        return (n,)
    e = fitting_idempotent(phi)
    a, _ = subrep(n, {v: image_basis(c) for v, c in e.comps.items()})
    b, _ = subrep(n, {v: kernel_basis(c) for v, c in e.comps.items()})
    return _decompose(a) + _decompose(b)


def decompose(n: Rep) -> list[Rep]:
    """Indecomposable summands of ``n`` (as a list; order follows the splitting)."""
    return list(_decompose(n))


def is_indecomposable(n: Rep) -> bool:
    return len(_decompose(n)) == 1


# --- Ext^1 and middle terms -------------------------------------------------

def _ext_delta(p_: Rep, m: Rep) -> np.ndarray:
    """Matrix of delta: (+)_v Hom(P_v, M_v) -> (+)_a Hom(P_i, M_j), delta(f)_a = f_j P_a - M_a f_i."""
    q = p_.quiver
    offs, off = {}, 0
    for v in q.vertices:
        offs[v] = off
        off += m.dims[v] * p_.dims[v]
    rows = sum(m.dims[a.target] * p_.dims[a.source] for a in q.arrows)
    d = np.zeros((rows, off), dtype=np.int64)
    r = 0
    for a in q.arrows:
        i, j = a.source, a.target
        h = m.dims[j] * p_.dims[i]
        if h == 0:
            continue
        if p_.dims[j]:
            d[r:r + h, offs[j]:offs[j] + m.dims[j] * p_.dims[j]] += np.kron(
                np.eye(m.dims[j], dtype=np.int64), p_.mats[a.name].a.T)
        if m.dims[i]:
            d[r:r + h, offs[i]:offs[i] + m.dims[i] * p_.dims[i]] -= np.kron(
                m.mats[a.name].a, np.eye(p_.dims[i], dtype=np.int64))
        r += h
    return d % m.p


def ext_complement(p_: Rep, m: Rep) -> list[dict[str, FpMat]]:
    """Arrow-indexed cocycles whose classes form a basis of Ext^1(p_, m)."""
    q = p_.quiver
    pp = m.p
    delta = _ext_delta(p_, m)
    total = delta.shape[0]
    if total == 0:
        return []
    img = FpMat._wrap(pp, np.ascontiguousarray(delta.T))
    _, piv, _ = rref(img)
    free = [c for c in range(total) if c not in set(piv)]
    out = []
    for c in free:
        eps, r = {}, 0
        for a in q.arrows:
            h, w = m.dims[a.target], p_.dims[a.source]
            block_ = np.zeros((h, w), dtype=np.int64)
            if r <= c < r + h * w:
                block_.flat[c - r] = 1
            eps[a.name] = FpMat._wrap(pp, block_)
            r += h * w
        out.append(eps)
    return out


def extension(p_: Rep, m: Rep, eps: dict[str, FpMat]) -> tuple[Rep, RepMor, RepMor]:
    """Middle term with arrows [[M_a, eps_a], [0, P_a]], with its mono and epi."""
    q, pp = m.quiver, m.p
    dims = {v: m.dims[v] + p_.dims[v] for v in q.vertices}
    mats = {}
    for a in q.arrows:
        i, j = a.source, a.target
        top = np.concatenate([m.mats[a.name].a, eps[a.name].a], axis=1)
        bot = np.concatenate([np.zeros((p_.dims[j], m.dims[i]), dtype=np.int64), p_.mats[a.name].a], axis=1)
        mats[a.name] = FpMat._wrap(pp, np.ascontiguousarray(np.concatenate([top, bot], axis=0)))
    mid = Rep(q, pp, dims, mats)
    inc = {v: FpMat._wrap(pp, np.eye(dims[v], m.dims[v], dtype=np.int64)) for v in q.vertices}
    prj = {v: FpMat._wrap(pp, np.ascontiguousarray(np.eye(dims[v], dtype=np.int64)[m.dims[v]:]))
           for v in q.vertices}
    return mid, RepMor(m, mid, inc, check=False), RepMor(mid, p_, prj, check=False)


def ext_classes(p_: Rep, m: Rep) -> list[dict[str, FpMat]]:
    """One cocycle per element of Ext^1(p_, m) (enumerated, threshold-guarded)."""
    basis = ext_complement(p_, m)
    d = len(basis)
    pp = m.p
    if pp ** d > LIMITS.enum_threshold:
        raise Inconclusive(f"Ext^1 has {pp}^{d} elements, above the enumeration threshold")
    out = []
    names = [a.name for a in m.quiver.arrows]
    for idx in range(pp ** d):
        coeffs, x = [], idx
        for _ in range(d):
            coeffs.append(x % pp)
            x //= pp
        eps = {}
        for nm in names:
            acc = np.zeros((m.dims[m.quiver.arrow(nm).target], p_.dims[m.quiver.arrow(nm).source]), dtype=np.int64)
            for c, b in zip(coeffs, basis):
                if c:
                    acc = acc + c * b[nm].a
            eps[nm] = FpMat._wrap(pp, acc % pp)
        out.append(eps)
    return out


def ext_middle_terms(p_: Rep, m: Rep) -> list[Rep]:
    """Iso-classes of middle terms N of 0 -> m -> N -> p_ -> 0; the split one comes first."""
    _same_category(p_, m)
    found: list[Rep] = []
    for eps in ext_classes(p_, m):
        mid, _, _ = extension(p_, m, eps)
        if not any(is_isomorphic(mid, f) for f in found):
            found.append(mid)
    return found
