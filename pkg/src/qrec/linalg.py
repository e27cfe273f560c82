"""Exact dense linear algebra over a prime field F_p."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .backend import kernels


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class FpMat:
    """Immutable dense matrix over F_p.

    Entries are stored row-major as an ``int64`` array of residues in
    ``[0, p)``. Zero-sized shapes (``0 x n``, ``n x 0``) are allowed and act
    as zero maps.
    """

    __slots__ = ("p", "a", "_hash")

    def __init__(self, p: int, data, shape: tuple[int, int] | None = None, *, _trusted: bool = False):
        if not _trusted:
            if not (2 <= p < 2**16) or not is_prime(p):
                raise ValueError(f"modulus must be a prime in [2, 2^16), got {p}")
            arr = np.array(data, dtype=np.int64)
            if shape is not None:
                arr = arr.reshape(shape)
            elif arr.ndim != 2:
                if arr.size == 0:
                    arr = arr.reshape(0, 0)
                else:
                    raise ValueError("matrix data must be two-dimensional")
            arr = np.ascontiguousarray(arr % p)
        else:
            arr = data
        arr.setflags(write=False)
        self.p = p
        self.a = arr
        self._hash = None

    # construction helpers
    @classmethod
    def _wrap(cls, p: int, arr: np.ndarray) -> "FpMat":
        return cls(p, np.ascontiguousarray(arr, dtype=np.int64), _trusted=True)

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMat":
        return cls._wrap(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMat":
        return cls._wrap(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape  # type: ignore[return-value]

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def is_zero(self) -> bool:
        return not self.a.any()

    def _same_field(self, other: "FpMat") -> None:
        if other.p != self.p:
            raise ValueError(f"field mismatch: F_{self.p} vs F_{other.p}")

    def __matmul__(self, other: "FpMat") -> "FpMat":
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return FpMat._wrap(self.p, (self.a @ other.a) % self.p)

    def __add__(self, other: "FpMat") -> "FpMat":
        self._same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return FpMat._wrap(self.p, (self.a + other.a) % self.p)

    def __sub__(self, other: "FpMat") -> "FpMat":
        self._same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return FpMat._wrap(self.p, (self.a - other.a) % self.p)

    def __neg__(self) -> "FpMat":
        return FpMat._wrap(self.p, (-self.a) % self.p)

    def scale(self, c: int) -> "FpMat":
        return FpMat._wrap(self.p, (self.a * (c % self.p)) % self.p)

    @property
    def T(self) -> "FpMat":
        return FpMat._wrap(self.p, self.a.T.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMat):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self.a, other.a)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.shape, self.a.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"FpMat(p={self.p}, {self.a.tolist()})"

    def key(self) -> bytes:
        return self.shape[0].to_bytes(2, "little") + self.shape[1].to_bytes(2, "little") + self.a.tobytes()

    def rank(self) -> int:
        if self.a.size == 0:
            return 0
        return int(kernels.rank_mod(self.a, self.p))


def rref(m: FpMat) -> tuple[FpMat, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    work = np.array(m.a, dtype=np.int64, copy=True)
    pivots = kernels.rref_inplace(work, m.p) if work.size else []
    return FpMat._wrap(m.p, work), list(pivots), len(pivots)


def rank(m: FpMat) -> int:
    return m.rank()


def kernel_basis(m: FpMat) -> FpMat:
    """Columns form a basis of the right null space of ``m``."""
    p, n = m.p, m.cols
    red, piv, r = rref(m)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, pc in enumerate(piv):
            out[pc, k] = (-red.a[i, f]) % p
    return FpMat._wrap(p, out)


def image_basis(m: FpMat) -> FpMat:
    """Columns form a basis of the column space of ``m``."""
    _, piv, _ = rref(m)
    return FpMat._wrap(m.p, m.a[:, piv].copy())


def row_space(m: FpMat) -> FpMat:
    """Canonical basis (nonzero rows of the rref) of the row space."""
    red, _, r = rref(m)
    return FpMat._wrap(m.p, red.a[:r].copy())


def solve(a: FpMat, b: FpMat) -> FpMat | None:
    """Return ``x`` with ``a @ x == b``, free variables set to zero; None if inconsistent."""
    if a.rows != b.rows:
        raise ValueError(f"solve: row mismatch {a.shape} vs {b.shape}")
    a._same_field(b)
    p, n = a.p, a.cols
    aug = np.concatenate([a.a, b.a], axis=1) if a.rows else np.zeros((0, n + b.cols), dtype=np.int64)
    red, piv, _ = rref(FpMat._wrap(p, aug))
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, b.cols), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = red.a[i, n:]
    return FpMat._wrap(p, x)


def inverse(m: FpMat) -> FpMat:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    x = solve(m, FpMat.identity(m.p, m.rows))
    if x is None:
        raise ValueError("matrix is singular")
    return x


def left_annihilator(m: FpMat) -> FpMat:
    """Full-row-rank ``q`` whose kernel is exactly the column space of ``m``."""
    return kernel_basis(m.T).T


def right_inverse(q: FpMat) -> FpMat:
    """``s`` with ``q @ s == I`` for a full-row-rank ``q``."""
    s = solve(q, FpMat.identity(q.p, q.rows))
    if s is None:
        raise ValueError("matrix does not have full row rank")
    return s


def kron(a: FpMat, b: FpMat) -> FpMat:
    a._same_field(b)
    return FpMat._wrap(a.p, np.kron(a.a, b.a) % a.p)


def block(blocks: Sequence[Sequence[FpMat]]) -> FpMat:
    """Assemble a block matrix; row heights and column widths must agree."""
    if not blocks or not blocks[0]:
        raise ValueError("block: empty grid")
    p = blocks[0][0].p
    ncols = len(blocks[0])
    if any(len(r) != ncols for r in blocks):
        raise ValueError("block: ragged grid")
    heights = [r[0].rows for r in blocks]
    widths = [b.cols for b in blocks[0]]
    for i, r in enumerate(blocks):
        for j, b in enumerate(r):
            if b.p != p:
                raise ValueError("block: field mismatch")
            if b.rows != heights[i] or b.cols != widths[j]:
                raise ValueError(f"block: inconsistent block ({i},{j}) of shape {b.shape}")
    out = np.zeros((sum(heights), sum(widths)), dtype=np.int64)
    r0 = 0
    for i, r in enumerate(blocks):
        c0 = 0
        for j, b in enumerate(r):
            out[r0:r0 + heights[i], c0:c0 + widths[j]] = b.a
            c0 += widths[j]
        r0 += heights[i]
    return FpMat._wrap(p, out)


def block_diag(ms: Iterable[FpMat], p: int) -> FpMat:
    ms = list(ms)
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in ms:
        out[r:r + m.rows, c:c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FpMat._wrap(p, out)


def hstack(ms: Sequence[FpMat], p: int, rows: int) -> FpMat:
    if not ms:
        return FpMat.zeros(p, rows, 0)
    return FpMat._wrap(p, np.concatenate([m.a for m in ms], axis=1))


def vstack(ms: Sequence[FpMat], p: int, cols: int) -> FpMat:
    if not ms:
        return FpMat.zeros(p, 0, cols)
    return FpMat._wrap(p, np.concatenate([m.a for m in ms], axis=0))
