# cython: boundscheck=False, wraparound=False, cdivision=True
"""Hot kernels: single cut evaluation over a CSR adjacency, and exhaustive
cut scans used by the ground-truth checkers (min cut, separation, isolating
cuts, relative expansion, conductance).

Enumeration convention shared with the numpy fallback: subsets are encoded
as bitmasks over vertices 0..n-2 with vertex n-1 pinned to the complement,
scanned in ascending mask order, so every unordered cut is visited exactly
once and ties resolve to the lowest mask.
"""

import numpy as np

cimport numpy as cnp

ctypedef cnp.int64_t i64


def cut_value(cnp.ndarray[cnp.int64_t, ndim=1] indptr,
              cnp.ndarray[cnp.int64_t, ndim=1] indices,
              cnp.ndarray[cnp.int64_t, ndim=1] weights,
              cnp.ndarray[cnp.uint8_t, ndim=1] mask):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t u, j
    cdef i64 total = 0
    for u in range(n):
        if mask[u]:
            for j in range(indptr[u], indptr[u + 1]):
                if not mask[indices[j]]:
                    total += weights[j]
    return int(total)


def min_cut_scan(int n,
                 cnp.ndarray[cnp.int64_t, ndim=1] eu,
                 cnp.ndarray[cnp.int64_t, ndim=1] ev,
                 cnp.ndarray[cnp.int64_t, ndim=1] ew):
    cdef i64 top = (<i64>1) << (n - 1)
    cdef Py_ssize_t m = eu.shape[0]
    cdef i64 mask, best = -1, best_mask = 0, cut
    cdef Py_ssize_t j
    for mask in range(1, top):
        cut = 0
        for j in range(m):
            if ((mask >> eu[j]) ^ (mask >> ev[j])) & 1:
                cut += ew[j]
        if best < 0 or cut < best:
            best = cut
            best_mask = mask
    return int(best), int(best_mask)


def separation_violation(int n,
                         cnp.ndarray[cnp.int64_t, ndim=1] eu,
                         cnp.ndarray[cnp.int64_t, ndim=1] ev,
                         cnp.ndarray[cnp.int64_t, ndim=1] ew,
                         i64 r_mask, i64 c):
    """First cut of size <= c with all of R on one side, or -1."""
    cdef i64 top = (<i64>1) << (n - 1)
    cdef i64 full = ((<i64>1) << n) - 1
    cdef Py_ssize_t m = eu.shape[0]
    cdef i64 mask, cut, inter
    cdef Py_ssize_t j
    for mask in range(1, top):
        cut = 0
        for j in range(m):
            if ((mask >> eu[j]) ^ (mask >> ev[j])) & 1:
                cut += ew[j]
            if cut > c:
                break
        if cut > c:
            continue
        inter = mask & r_mask
        if inter == 0 or inter == r_mask:
            return int(mask)
    return -1


def min_isolating(int n,
                  cnp.ndarray[cnp.int64_t, ndim=1] eu,
                  cnp.ndarray[cnp.int64_t, ndim=1] ev,
                  cnp.ndarray[cnp.int64_t, ndim=1] ew,
                  int r, i64 forbidden_mask):
    """Minimum cut over sides containing r and avoiding forbidden vertices."""
    cdef int free[64]
    cdef int nfree = 0
    cdef int v
    for v in range(n):
        if v != r and not ((forbidden_mask >> v) & 1):
            free[nfree] = v
            nfree += 1
    cdef i64 top = (<i64>1) << nfree
    cdef Py_ssize_t m = eu.shape[0]
    cdef i64 sub, mask, cut, best = -1, best_mask = 0
    cdef Py_ssize_t j
    cdef int b
    for sub in range(top):
        mask = (<i64>1) << r
        for b in range(nfree):
            if (sub >> b) & 1:
                mask |= (<i64>1) << free[b]
        cut = 0
        for j in range(m):
            if ((mask >> eu[j]) ^ (mask >> ev[j])) & 1:
                cut += ew[j]
        if best < 0 or cut < best:
            best = cut
            best_mask = mask
    return int(best), int(best_mask)


def expansion_violation(int n,
                        cnp.ndarray[cnp.int64_t, ndim=1] eu,
                        cnp.ndarray[cnp.int64_t, ndim=1] ev,
                        cnp.ndarray[cnp.int64_t, ndim=1] ew,
                        i64 core_mask, i64 num, i64 den):
    """First cut with den*|boundary| < num*min(core inside, core outside), or -1."""
    cdef i64 top = (<i64>1) << (n - 1)
    cdef Py_ssize_t m = eu.shape[0]
    cdef i64 mask, cut, a, b, small
    cdef Py_ssize_t j
    cdef int v
    for mask in range(1, top):
        a = 0
        b = 0
        for v in range(n):
            if (core_mask >> v) & 1:
                if (mask >> v) & 1:
                    a += 1
                else:
                    b += 1
        small = a if a < b else b
        if small == 0:
            continue
        cut = 0
        for j in range(m):
            if ((mask >> eu[j]) ^ (mask >> ev[j])) & 1:
                cut += ew[j]
        if den * cut < num * small:
            return int(mask)
    return -1


def best_conductance_cut(int n,
                         cnp.ndarray[cnp.int64_t, ndim=1] eu,
                         cnp.ndarray[cnp.int64_t, ndim=1] ev,
                         cnp.ndarray[cnp.int64_t, ndim=1] ew):
    """Cut minimising boundary/min(vol, vol'); sides of zero volume are
    skipped. Returns (cross, min_vol, mask) or (-1, -1, 0) if no valid cut."""
    cdef i64 deg[64]
    cdef int v
    for v in range(n):
        deg[v] = 0
    cdef Py_ssize_t m = eu.shape[0]
    cdef Py_ssize_t j
    for j in range(m):
        deg[eu[j]] += ew[j]
        deg[ev[j]] += ew[j]
    cdef i64 top = (<i64>1) << (n - 1)
    cdef i64 mask, cut, vol_in, vol_out, small
    cdef i64 best_cross = -1, best_vol = 1, best_mask = 0
    for mask in range(1, top):
        vol_in = 0
        vol_out = 0
        for v in range(n):
            if (mask >> v) & 1:
                vol_in += deg[v]
            else:
                vol_out += deg[v]
        small = vol_in if vol_in < vol_out else vol_out
        if small == 0:
            continue
        cut = 0
        for j in range(m):
            if ((mask >> eu[j]) ^ (mask >> ev[j])) & 1:
                cut += ew[j]
        if best_cross < 0 or cut * best_vol < best_cross * small:
            best_cross = cut
            best_vol = small
            best_mask = mask
    return int(best_cross), int(best_vol), int(best_mask)
