"""Plain-text forms of matrices, subspaces and pencils.

Matrices are written row by row, entries comma separated, rows separated by
';' (so ``1,0;0,2``).  A pencil file starts with a header line ``p r s g``
followed by g matrices, one row per line, separated by blank lines.
"""

from __future__ import annotations

import numpy as np

from heisquot.brahana import Pencil
from heisquot.linal import Subspace


def matrix_to_str(m):
    m = np.asarray(m)
    return ";".join(",".join(str(int(v)) for v in row) for row in m)


def matrix_from_str(s, p, ncols=None):
    s = s.strip()
    if not s:
        return np.zeros((0, ncols or 0), dtype=np.int64)
    rows = [[int(t) for t in r.split(",")] for r in s.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"ragged matrix {s!r}")
    m = np.array(rows, dtype=np.int64) % p
    if ncols is not None and m.shape[1] != ncols:
        raise ValueError(f"expected {ncols} columns, got {m.shape[1]}")
    return m


def subspace_from_str(s, p, n):
    """Row span of the matrix ``s``; an empty string is the zero subspace."""
    return Subspace.from_rows(matrix_from_str(s, p, n).reshape(-1, n), p, n)


def pencil_to_text(P):
    lines = [f"{P.p} {P.r} {P.s} {P.g}"]
    for L in P.mats:
        lines.append("")
        lines.extend(" ".join(str(int(v)) for v in row) for row in L)
    return "\n".join(lines) + "\n"


def pencil_from_text(text):
    blocks = [b for b in text.strip().split("\n\n")]
    head = blocks[0].split()
    if len(head) != 4:
        raise ValueError("pencil header must be 'p r s g'")
    p, r, s, g = (int(t) for t in head)
    if r * s == 0:
        # empty matrices leave no blocks behind
        return Pencil(np.zeros((g, r, s), dtype=np.int64), p, r=r, s=s)
    mats = []
    for b in blocks[1:]:
        rows = [[int(t) for t in line.split()] for line in b.strip().splitlines()]
        mats.append(np.array(rows, dtype=np.int64).reshape(r, s))
    if len(mats) != g:
        raise ValueError(f"header says {g} matrices, found {len(mats)}")
    return Pencil(np.array(mats, dtype=np.int64).reshape(g, r, s), p, r=r, s=s)


def adj_to_records(alg):
    return [{"F": matrix_to_str(F), "G": matrix_to_str(G)} for F, G in alg.basis]
