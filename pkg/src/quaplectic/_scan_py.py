"""Pure-Python Jacobi scan over integer structure-constant tables.

Reference implementation of the kernel in ``_scan.pyx``; both expose the
same ``scan_jacobi`` signature and are interchangeable (see
:mod:`quaplectic.kernels`).
"""

from __future__ import annotations

import numpy as np


def scan_jacobi(indptr, gen_idx, num_re, num_im, n):
    """Scan all ``n**3`` ordered basis triples for Jacobi failures.

    Parameters
    ----------
    indptr, gen_idx, num_re, num_im : int64 arrays
        CSR table over the flattened pair index ``i * n + j``: the entries
        ``indptr[p]:indptr[p + 1]`` hold the target generator indices and the
        integer numerators of ``[g_i, g_j]``.  One global denominator is
        shared by the whole table and cancels in the zero test.
    n : int
        Basis size.

    Returns
    -------
    (int, ndarray)
        Number of triples checked and the flattened indices
        ``(a * n + b) * n + c`` of every violating triple (expected empty).
    """
    ptr = [int(v) for v in indptr]
    gen = [int(v) for v in gen_idx]
    cre = [int(v) for v in num_re]
    cim = [int(v) for v in num_im]

    # per-pair term lists, so the triple loop touches plain Python objects
    terms = []
    for p in range(n * n):
        terms.append(list(zip(gen[ptr[p]:ptr[p + 1]], cre[ptr[p]:ptr[p + 1]], cim[ptr[p]:ptr[p + 1]])))

    acc_re = [0] * n
    acc_im = [0] * n
    violations = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                touched = []
                for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                    inner = terms[y * n + z]
                    if not inner:
                        continue
                    for k, tre, tim in inner:
                        outer = terms[x * n + k]
                        for m, ure, uim in outer:
                            if acc_re[m] == 0 and acc_im[m] == 0:
                                touched.append(m)
                            acc_re[m] += tre * ure - tim * uim
                            acc_im[m] += tre * uim + tim * ure
                ok = True
                for m in touched:
                    if acc_re[m] != 0 or acc_im[m] != 0:
                        ok = False
                    acc_re[m] = 0
                    acc_im[m] = 0
                if not ok:
                    violations.append((a * n + b) * n + c)
    return n ** 3, np.asarray(violations, dtype=np.int64)
