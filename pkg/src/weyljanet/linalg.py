"""Sparse exact linear algebra over Q.

Vectors are dicts ``{column: Fraction}`` with integer column labels; the pivot
of a row is its smallest column. Everything degreewise in the package
(graded pieces, kernels, particular solutions) bottoms out here.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

try:
    import flint
except ImportError:  # pragma: no cover
    flint = None

# systems with more entries than this go to flint when it is installed
DENSE_THRESHOLD = 40_000
DENSE_FILL = 8
# sparse elimination of a large system gives up once its rows hold this many times the input entries
FILL_BUDGET = 4
_backend = {"dense": flint is not None}


def use_dense_backend(flag: bool) -> None:
    """Switch the flint path on or off (it is on when flint imports)."""
    _backend["dense"] = bool(flag) and flint is not None


def _budget(rows: list[Mapping], ncols: int) -> int | None:
    """Entry budget for sparse elimination of a large system; None when unlimited."""
    if not _backend["dense"] or len(rows) * ncols <= DENSE_THRESHOLD:
        return None
    return FILL_BUDGET * sum(map(len, rows)) + ncols


def _dense(rows: list[Mapping], ncols: int) -> bool:
    """Large, with enough entries per line that sparse elimination would fill in."""
    size = len(rows) * ncols
    if not _backend["dense"] or size <= DENSE_THRESHOLD:
        return False
    return sum(map(len, rows)) > DENSE_FILL * max(len(rows), ncols)

Vec = dict


def axpy(y: Vec, a, x: Mapping) -> None:
    """In place ``y += a * x`` dropping zeros."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class FillExceeded(Exception):
    pass


class Echelon:
    """Incrementally built semi-echelon basis (each pivot row is monic).

    With ``budget`` set, ``insert`` raises FillExceeded once the stored rows
    hold more entries than the budget.
    """

    def __init__(self, budget: int | None = None):
        self.rows: dict[int, Vec] = {}
        self.budget = budget
        self.entries = 0

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping, *, full: bool = False) -> Vec:
        """Remainder of ``vec``; with ``full`` every pivot column is cleared."""
        v = dict(vec)
        if not v:
            return v
        rows = self.rows
        heap = list(v)
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if a is None:
                continue
            row = rows.get(c)
            if row is None:
                if not full:
                    return v
                continue
            for k, x in row.items():
                s = v.get(k, 0) - a * x
                if s:
                    v[k] = s
                    if k not in seen:
                        seen.add(k)
                        heapq.heappush(heap, k)
                else:
                    v.pop(k, None)
        return v

    def insert(self, vec: Mapping) -> bool:
        """Add ``vec`` to the span; return False if it was already in it."""
        r = self.reduce(vec)
        if not r:
            return False
        p = min(r)
        a = r[p]
        if a != 1:
            r = {k: x / a for k, x in r.items()}
        self.rows[p] = r
        self.entries += len(r)
        if self.budget is not None and self.entries > self.budget:
            raise FillExceeded
        return True

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def rref(self) -> dict[int, Vec]:
        """Reduced rows: each pivot column is zero in every other row."""
        out: dict[int, Vec] = {}
        for p in sorted(self.rows, reverse=True):
            row = dict(self.rows[p])
            for q in [k for k in row if k != p and k in out]:
                a = row.get(q)
                if a:
                    axpy(row, -a, out[q])
            out[p] = row
        self.rows = out
        return out


def rank(vectors: Iterable[Mapping]) -> int:
    e = Echelon()
    for v in vectors:
        e.insert(v)
    return e.dim


def _int_matrix(rows: list[Mapping], ncols: int, extra: list | None = None):
    """Rows scaled to integers as a flint matrix (``extra`` is an appended column)."""
    width = ncols + (extra is not None)
    data = []
    for i, r in enumerate(rows):
        vals = dict(r)
        if extra is not None and extra[i]:
            vals[ncols] = Fraction(extra[i])
        den = lcm(*(Fraction(v).denominator for v in vals.values())) if vals else 1
        line = [0] * width
        for k, v in vals.items():
            v = Fraction(v) * den
            line[k] = v.numerator
        data.extend(line)
    return flint.fmpz_mat(len(rows), width, data)


def _dense_rows(red, rk: int, width: int) -> list[dict[int, Fraction]]:
    """Nonzero rows of a flint rref result as sparse dicts."""
    flat = red.entries()
    out = []
    for i in range(rk):
        row = {}
        for c, a in enumerate(flat[i * width:(i + 1) * width]):
            if a != 0:
                row[c] = Fraction(int(a.p), int(a.q))
        out.append(row)
    return out


def _dense_nullspace(rows: list[Mapping], ncols: int) -> list[Vec]:
    red, rk = flint.fmpq_mat(_int_matrix(rows, ncols)).rref()
    reduced = {min(r): r for r in _dense_rows(red, rk, ncols)}
    return _basis_from_rref(reduced, ncols)


def _basis_from_rref(red: Mapping[int, Vec], ncols: int) -> list[Vec]:
    basis = {f: {f: Fraction(1)} for f in range(ncols) if f not in red}
    for p, row in red.items():
        for f, a in row.items():
            if f != p:
                basis[f][p] = -a
    return [basis[f] for f in sorted(basis)]


def _to_fast(rows: Iterable[Mapping]) -> list[Vec]:
    """Entries as flint rationals, which keep sparse elimination in C arithmetic."""
    if not _backend["dense"]:
        return [dict(r) for r in rows]
    q = flint.fmpq
    return [{k: q(v.numerator, v.denominator) if isinstance(v, Fraction) else q(v) for k, v in r.items()}
            for r in rows]


def _from_fast(vec: Mapping) -> Vec:
    if not _backend["dense"]:
        return dict(vec)
    return {k: Fraction(int(v.p), int(v.q)) if isinstance(v, flint.fmpq) else Fraction(v) for k, v in vec.items()}


def nullspace(rows: Iterable[Mapping], ncols: int) -> list[Vec]:
    """Basis of ``{x in Q^ncols : r . x = 0 for every row r}``.

    The basis is the one read off the reduced row echelon form, so both
    backends return the same vectors.
    """
    rows = [r for r in rows if r]
    if rows and _dense(rows, ncols):
        return _dense_nullspace(rows, ncols)
    e = Echelon(_budget(rows, ncols))
    try:
        for r in _to_fast(rows):
            e.insert(r)
    except FillExceeded:
        return _dense_nullspace(rows, ncols)
    red = {p: _from_fast(r) for p, r in e.rref().items()}
    return _basis_from_rref(red, ncols)


def _dense_solve(rows: list[Mapping], rhs: list, ncols: int) -> Vec | None:
    red, rk = flint.fmpq_mat(_int_matrix(rows, ncols, list(rhs))).rref()
    x = {}
    for row in _dense_rows(red, rk, ncols + 1):
        p = min(row)
        if p == ncols:
            return None
        if ncols in row:
            x[p] = row[ncols]
    return x


def solve(rows: list[Mapping], rhs: list, ncols: int) -> Vec | None:
    """One solution of ``rows . x = rhs`` or None if inconsistent."""
    aug = ncols
    if rows and _dense(rows, ncols + 1):
        return _dense_solve(rows, rhs, ncols)
    e = Echelon(_budget(rows, ncols + 1))
    try:
        for r, b in zip(rows, rhs):
            v = dict(r)
            if b:
                v[aug] = Fraction(b)
            if v:
                e.insert(_to_fast([v])[0])
    except FillExceeded:
        return _dense_solve(rows, rhs, ncols)
    if aug in e.rows:
        return None
    red = e.rref()
    x = {}
    for p, row in red.items():
        b = row.get(aug)
        if b:
            x[p] = _from_fast({0: b})[0]
    return x


def transpose(images: Mapping[int, Mapping]) -> dict[int, Vec]:
    """Turn ``{unknown: {equation: coeff}}`` into ``{equation: {unknown: coeff}}``."""
    out: dict[int, Vec] = {}
    for u, img in images.items():
        for eq, c in img.items():
            out.setdefault(eq, {})[u] = c
    return out
