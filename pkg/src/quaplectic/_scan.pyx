# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled Jacobi scan over integer structure-constant tables.

Same contract as ``_scan_py.scan_jacobi``; see that module for the table
layout.  Coefficient arithmetic stays in 64-bit integers, which is exact
for every table built in this package (small numerators over one shared
denominator).
"""

import numpy as np


def scan_jacobi(indptr, gen_idx, num_re, num_im, n):
    """Scan all ``n**3`` ordered basis triples for Jacobi failures.

    Returns ``(checked, violations)`` with violations as flattened triple
    indices ``(a * n + b) * n + c``.
    """
    cdef long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef long long[::1] gen = np.ascontiguousarray(gen_idx, dtype=np.int64)
    cdef long long[::1] cre = np.ascontiguousarray(num_re, dtype=np.int64)
    cdef long long[::1] cim = np.ascontiguousarray(num_im, dtype=np.int64)
    cdef Py_ssize_t nb = n

    # widest row of the table bounds how many accumulator slots one triple
    # can touch (a slot may be pushed again after cancelling back to zero)
    cdef Py_ssize_t mt = 0, row
    for row in range(nb * nb):
        if ptr[row + 1] - ptr[row] > mt:
            mt = ptr[row + 1] - ptr[row]
    cdef long long[::1] acc_re = np.zeros(nb, dtype=np.int64)
    cdef long long[::1] acc_im = np.zeros(nb, dtype=np.int64)
    cdef long long[::1] touched = np.zeros(3 * mt * mt + 8, dtype=np.int64)

    cdef Py_ssize_t a, b, c, i, j, k, t, m, p, q, ntouched, perm
    cdef long long tre, tim
    cdef bint ok
    violations = []
    for a in range(nb):
        for b in range(nb):
            for c in range(nb):
                ntouched = 0
                for perm in range(3):
                    if perm == 0:
                        i = a; j = b; k = c
                    elif perm == 1:
                        i = b; j = c; k = a
                    else:
                        i = c; j = a; k = b
                    for p in range(ptr[j * nb + k], ptr[j * nb + k + 1]):
                        t = gen[p]
                        tre = cre[p]
                        tim = cim[p]
                        for q in range(ptr[i * nb + t], ptr[i * nb + t + 1]):
                            m = gen[q]
                            if acc_re[m] == 0 and acc_im[m] == 0:
                                touched[ntouched] = m
                                ntouched += 1
                            acc_re[m] += tre * cre[q] - tim * cim[q]
                            acc_im[m] += tre * cim[q] + tim * cre[q]
                ok = True
                for p in range(ntouched):
                    m = touched[p]
                    if acc_re[m] != 0 or acc_im[m] != 0:
                        ok = False
                    acc_re[m] = 0
                    acc_im[m] = 0
                if not ok:
                    violations.append((a * nb + b) * nb + c)
    return nb * nb * nb, np.asarray(violations, dtype=np.int64)
