"""Pure-Python kernels; same contracts as the compiled ``qrec._kernels``."""

from __future__ import annotations

import itertools

import numpy as np

ISO = 0
SURJ = 1
INJ = 2
NONZERO_NOT_ISO = 3
NONZERO_NOT_SURJ = 4
NONZERO_NOT_INJ = 5
FITTING = 6


def _rref(a: np.ndarray, p: int, full: bool) -> list[int]:
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        if not full:
            col[:r] = 0
        if col.any():
            a -= np.outer(col, a[r])
            a %= p
        pivots.append(c)
        r += 1
    return pivots


def rref_inplace(a: np.ndarray, p: int) -> list[int]:
    return _rref(a, p, True)


def rank_mod(a: np.ndarray, p: int) -> int:
    return len(_rref(np.array(a, dtype=np.int64, copy=True), p, False))


def _check(elem: np.ndarray, blocks: np.ndarray, p: int, mode: int) -> bool:
    any_bad = any_nonnil = any_noninv = False
    for off, rows, cols in blocks:
        m = elem[off:off + rows * cols].reshape(rows, cols)
        rk = rank_mod(m, p)
        if mode == ISO:
            if rows != cols or rk != rows:
                return False
        elif mode == SURJ:
            if rk != rows:
                return False
        elif mode == INJ:
            if rk != cols:
                return False
        elif mode == NONZERO_NOT_ISO:
            any_bad |= rows != cols or rk != rows
        elif mode == NONZERO_NOT_SURJ:
            any_bad |= rk != rows
        elif mode == NONZERO_NOT_INJ:
            any_bad |= rk != cols
        elif mode == FITTING:
            any_noninv |= rk != rows
            if rows and not any_nonnil:
                power = m.copy()
                for _ in range(rows - 1):
                    power = (power @ m) % p
                any_nonnil = bool(power.any())
    if mode <= INJ:
        return True
    if mode == FITTING:
        return any_nonnil and any_noninv
    return any_bad


def check_element(elem, blocks, p: int, mode: int) -> bool:
    elem = np.asarray(elem, dtype=np.int64)
    blocks = np.asarray(blocks, dtype=np.int64).reshape(-1, 3)
    if mode >= NONZERO_NOT_ISO and not elem.any():
        return False
    return _check(elem, blocks, p, mode)


def span_search(basis, blocks, p: int, mode: int):
    basis = np.asarray(basis, dtype=np.int64)
    blocks = np.asarray(blocks, dtype=np.int64).reshape(-1, 3)
    d = basis.shape[0]
    skip_zero = mode >= NONZERO_NOT_ISO
    # odometer order: first coordinate varies fastest
    for rev in itertools.product(range(p), repeat=d):
        coeffs = np.array(rev[::-1], dtype=np.int64)
        if skip_zero and not coeffs.any():
            continue
        elem = (coeffs @ basis) % p if d else np.zeros(basis.shape[1], dtype=np.int64)
        if _check(elem, blocks, p, mode):
            return coeffs
    return None
