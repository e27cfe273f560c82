# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for modular row reduction and Hom-space search.

Every function here has a pure-Python twin in ``qrec._fallback`` with the
same signature and semantics.
"""

import numpy as np

ctypedef long long i64

# search modes; keep in sync with qrec._fallback
cdef enum:
    ISO = 0
    SURJ = 1
    INJ = 2
    NONZERO_NOT_ISO = 3
    NONZERO_NOT_SURJ = 4
    NONZERO_NOT_INJ = 5
    FITTING = 6


cdef inline i64 _inv(i64 a, i64 p) noexcept nogil:
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef int _rref(i64[:, ::1] a, i64 p, Py_ssize_t rows, Py_ssize_t cols,
               Py_ssize_t[::1] piv, bint full) noexcept nogil:
    cdef Py_ssize_t r = 0, c, k, j
    cdef i64 f, tmp, inv
    for c in range(cols):
        if r >= rows:
            break
        k = r
        while k < rows and a[k, c] == 0:
            k += 1
        if k == rows:
            continue
        if k != r:
            for j in range(c, cols):
                tmp = a[k, j]
                a[k, j] = a[r, j]
                a[r, j] = tmp
        inv = _inv(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
        for k in range(rows):
            if k == r or (not full and k < r):
                continue
            f = a[k, c]
            if f != 0:
                for j in range(c, cols):
                    a[k, j] = (a[k, j] - f * a[r, j]) % p
                    if a[k, j] < 0:
                        a[k, j] += p
        piv[r] = c
        r += 1
    return <int>r


def rref_inplace(i64[:, ::1] a, i64 p):
    """Reduce ``a`` to reduced row-echelon form over F_p in place; return pivot columns."""
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef Py_ssize_t[::1] piv = np.zeros(max(rows, 1), dtype=np.intp)
    cdef int r = _rref(a, p, rows, cols, piv, True)
    return [int(piv[i]) for i in range(r)]


def rank_mod(const i64[:, ::1] a, i64 p):
    cdef Py_ssize_t rows = a.shape[0], cols = a.shape[1]
    cdef i64[:, ::1] work = np.array(a, dtype=np.int64, copy=True)
    cdef Py_ssize_t[::1] piv = np.zeros(max(rows, 1), dtype=np.intp)
    return _rref(work, p, rows, cols, piv, False)


cdef inline bint _all_zero(i64[::1] v, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(n):
        if v[i] != 0:
            return False
    return True


cdef bint _check(i64[::1] elem, const i64[:, ::1] blocks, i64 p, int mode,
                 i64[:, ::1] scratch, i64[:, ::1] scratch2, Py_ssize_t[::1] piv) noexcept nogil:
    cdef Py_ssize_t nb = blocks.shape[0], b, i, j, k, off, rows, cols, step
    cdef int rk
    cdef bint any_bad = False, any_nonnil = False, any_noninv = False
    cdef i64 acc
    for b in range(nb):
        off = blocks[b, 0]
        rows = blocks[b, 1]
        cols = blocks[b, 2]
        for i in range(rows):
            for j in range(cols):
                scratch[i, j] = elem[off + i * cols + j]
        rk = _rref(scratch, p, rows, cols, piv, False)
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
            if rows != cols or rk != rows:
                any_bad = True
        elif mode == NONZERO_NOT_SURJ:
            if rk != rows:
                any_bad = True
        elif mode == NONZERO_NOT_INJ:
            if rk != cols:
                any_bad = True
        elif mode == FITTING:
            if rk != rows:
                any_noninv = True
            if rows > 0 and not any_nonnil:
                # power the block up to its size; nonzero result means non-nilpotent
                for i in range(rows):
                    for j in range(cols):
                        scratch[i, j] = elem[off + i * cols + j]
                for step in range(rows - 1):
                    for i in range(rows):
                        for j in range(cols):
                            acc = 0
                            for k in range(rows):
                                acc = (acc + scratch[i, k] * elem[off + k * cols + j]) % p
                            scratch2[i, j] = acc
                    for i in range(rows):
                        for j in range(cols):
                            scratch[i, j] = scratch2[i, j]
                for i in range(rows):
                    for j in range(cols):
                        if scratch[i, j] != 0:
                            any_nonnil = True
    if mode <= INJ:
        return True
    if mode == FITTING:
        return any_nonnil and any_noninv
    return any_bad


def check_element(elem, blocks, i64 p, int mode):
    """Test one flattened Hom element against ``mode``."""
    cdef i64[::1] e = np.array(elem, dtype=np.int64, copy=True)
    cdef const i64[:, ::1] bl = np.ascontiguousarray(blocks, dtype=np.int64).reshape(-1, 3)
    cdef Py_ssize_t side = 1, b
    for b in range(bl.shape[0]):
        side = max(side, bl[b, 1], bl[b, 2])
    cdef i64[:, ::1] s1 = np.zeros((side, side), dtype=np.int64)
    cdef i64[:, ::1] s2 = np.zeros((side, side), dtype=np.int64)
    cdef Py_ssize_t[::1] piv = np.zeros(side, dtype=np.intp)
    cdef Py_ssize_t i
    if mode >= NONZERO_NOT_ISO:
        for i in range(e.shape[0]):
            if e[i] != 0:
                break
        else:
            return False
    return bool(_check(e, bl, p, mode, s1, s2, piv))


def span_search(basis, blocks, i64 p, int mode):
    """Search the F_p-span of the rows of ``basis`` for an element passing ``mode``.

    Coefficient vectors are visited in odometer order; the zero vector is
    skipped for the ``NONZERO_*`` and ``FITTING`` modes. Returns the first
    coefficient vector found, or None.
    """
    cdef const i64[:, ::1] B = np.ascontiguousarray(basis, dtype=np.int64)
    cdef const i64[:, ::1] bl = np.ascontiguousarray(blocks, dtype=np.int64).reshape(-1, 3)
    cdef Py_ssize_t d = B.shape[0], E = B.shape[1], i, k, side = 1, b
    for b in range(bl.shape[0]):
        side = max(side, bl[b, 1], bl[b, 2])
    cdef i64[:, ::1] s1 = np.zeros((side, side), dtype=np.int64)
    cdef i64[:, ::1] s2 = np.zeros((side, side), dtype=np.int64)
    cdef Py_ssize_t[::1] piv = np.zeros(side, dtype=np.intp)
    cdef i64[::1] elem = np.zeros(E, dtype=np.int64)
    cdef i64[::1] digits = np.zeros(max(d, 1), dtype=np.int64)
    cdef bint skip_zero = mode >= NONZERO_NOT_ISO
    with nogil:
        while True:
            if not (skip_zero and _all_zero(digits, d)):
                if _check(elem, bl, p, mode, s1, s2, piv):
                    break
            # odometer increment
            i = 0
            while i < d:
                digits[i] += 1
                for k in range(E):
                    elem[k] = (elem[k] + B[i, k]) % p
                if digits[i] < p:
                    break
                digits[i] = 0
                i += 1
            if i == d:
                d = -1
                break
    if d < 0:
        return None
    return np.asarray(digits[:d]).copy()
