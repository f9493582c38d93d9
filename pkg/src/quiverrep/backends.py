"""Backend selection for the mod-p row reduction kernel.

The reduced row echelon form is the single hot kernel of the package:
every Hom-space, kernel, pushout and lattice computation bottoms out in
it.  Two interchangeable implementations are provided:

* a numba ``@njit`` version (default when numba imports), and
* a pure-numpy version.

Set ``QUIVERREP_BACKEND=numpy`` or ``QUIVERREP_BACKEND=numba`` in the
environment to force one; see ``benchmarks/bench_backends.py`` for a
timing comparison.  Both return bit-identical results.
"""

import os

import numpy as np


def _rref_numpy(a, p):
    """RREF of an int64 matrix over F_p.  Returns (r, pivot_columns)."""
    r = np.array(a, dtype=np.int64) % p
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            r[[row, i]] = r[[i, row]]
        inv = pow(int(r[row, col]), p - 2, p)
        r[row] = (r[row] * inv) % p
        other = np.nonzero(r[:, col])[0]
        other = other[other != row]
        if other.size:
            r[other] = (r[other] - np.outer(r[other, col], r[row])) % p
        pivots.append(col)
        row += 1
    return r, np.array(pivots, dtype=np.int64)


def _make_rref_numba():
    from numba import njit

    @njit(cache=True)
    def _rref_jit(a, p):  # pragma: no cover - exercised via wrapper
        r = a % p
        rows, cols = r.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        npiv = 0
        row = 0
        for col in range(cols):
            if row >= rows:
                break
            sel = -1
            for i in range(row, rows):
                if r[i, col] != 0:
                    sel = i
                    break
            if sel == -1:
                continue
            if sel != row:
                for j in range(cols):
                    tmp = r[row, j]
                    r[row, j] = r[sel, j]
                    r[sel, j] = tmp
            # p is a small prime, so scan for the inverse
            inv = 1
            for v in range(1, p):
                if (v * r[row, col]) % p == 1:
                    inv = v
                    break
            for j in range(cols):
                r[row, j] = (r[row, j] * inv) % p
            for i in range(rows):
                if i != row and r[i, col] != 0:
                    f = r[i, col]
                    for j in range(cols):
                        r[i, j] = (r[i, j] - f * r[row, j]) % p
            pivots[npiv] = col
            npiv += 1
            row += 1
        return r, pivots[:npiv]

    def rref(a, p):
        r = np.ascontiguousarray(a, dtype=np.int64)
        if r.size == 0:
            return r.copy() % max(p, 1), np.empty(0, dtype=np.int64)
        return _rref_jit(r.copy(), p)

    return rref


def _select_backend():
    choice = os.environ.get("QUIVERREP_BACKEND", "numba").lower()
    if choice == "numpy":
        return _rref_numpy, "numpy"
    if choice != "numba":
        raise ValueError(f"unknown QUIVERREP_BACKEND {choice!r}")
    try:
        return _make_rref_numba(), "numba"
    except ImportError:
        return _rref_numpy, "numpy"


rref, BACKEND = _select_backend()
