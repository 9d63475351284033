"""Row-reduction helpers over an exact field.

Vectors are column ``DomainMatrix`` objects; bases are lists of such columns so
that empty bases never turn into zero-width matrices.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from .field import Field
from .graded import dm_entries, dm_from_dok, dm_is_zero

Column = DomainMatrix


def column(values: Dict[int, object], n: int, field: Field) -> Column:
    return dm_from_dok({(i, 0): v for i, v in values.items()}, (n, 1), field)


def hstack(cols: Sequence[Column], nrows: int, field: Field) -> DomainMatrix:
    dok = {}
    for j, c in enumerate(cols):
        for i, _, v in dm_entries(c):
            dok[(i, j)] = v
    return dm_from_dok(dok, (nrows, len(cols)), field)


def columns_of(M: DomainMatrix, field: Field) -> List[Column]:
    rows, ncols = M.shape
    per: Dict[int, Dict[int, object]] = {j: {} for j in range(ncols)}
    for i, j, v in dm_entries(M):
        per[j][i] = v
    return [column(per[j], rows, field) for j in range(ncols)]


def rref(M: DomainMatrix) -> Tuple[Dict[int, Dict[int, object]], Tuple[int, ...]]:
    """Reduced row echelon form as a dict of rows, plus pivot columns."""
    if 0 in M.shape or dm_is_zero(M):
        return {}, ()
    R, pivots = M.to_sparse().rref()
    rows: Dict[int, Dict[int, object]] = {}
    for i, j, v in dm_entries(R):
        rows.setdefault(i, {})[j] = v
    return rows, tuple(pivots)


def rank(M: DomainMatrix) -> int:
    return len(rref(M)[1])


def _null_rows(M: DomainMatrix) -> List[Dict[int, object]]:
    """Rows of sympy's null space basis as sparse dicts."""
    N = M.to_sparse().nullspace()
    rows: List[Dict[int, object]] = [{} for _ in range(N.shape[0])]
    for i, j, v in dm_entries(N):
        rows[i][j] = v
    return rows


def kernel(M: DomainMatrix, field: Field) -> List[Column]:
    """Basis of the null space, one vector per free column."""
    nrows, ncols = M.shape
    if ncols == 0:
        return []
    if nrows == 0 or dm_is_zero(M):
        return identity_columns(ncols, field)
    return [column(row, ncols, field) for row in _null_rows(M)]


def solve(M: DomainMatrix, b: Column, field: Field) -> Optional[Column]:
    """Some x with M x = b, or None when b is not in the image."""
    nrows, ncols = M.shape
    if dm_is_zero(b):
        return column({}, ncols, field)
    if ncols == 0:
        return None
    # b lies in the image iff the null space of [M | b] reaches the last coordinate
    aug = hstack(columns_of(M, field) + [b], nrows, field)
    for row in _null_rows(aug):
        c = row.get(ncols)
        if c is not None:
            return column({j: -v / c for j, v in row.items() if j != ncols}, ncols, field)
    return None


def extend_basis(independent: Sequence[Column], candidates: Sequence[Column],
                 nrows: int, field: Field) -> List[Column]:
    """Candidates that, appended to ``independent``, complete a basis of their joint span."""
    if not candidates:
        return []
    M = hstack(list(independent) + list(candidates), nrows, field)
    _, pivots = rref(M)
    k = len(independent)
    return [candidates[p - k] for p in pivots if p >= k]


def identity_columns(n: int, field: Field) -> List[Column]:
    return [column({i: field.one}, n, field) for i in range(n)]
