"""Monomial bases, evaluation matrices and exact elimination over GF(q).

Matrices are numpy int64 arrays of canonical element indices; all row
operations go through the field's vectorized arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .ff import Field, FieldElement
from .geom import AffinePoint, ProjPoint


def _exponents(nvars: int, deg: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree ``deg``, lex order with x_0 highest first."""
    if nvars == 1:
        return [(deg,)]
    out = []
    for e0 in range(deg, -1, -1):
        out += [(e0,) + rest for rest in _exponents(nvars - 1, deg - e0)]
    return out


@dataclass(frozen=True)
class MonomialBasis:
    nvars: int
    degree: int
    homogeneous: bool
    monomials: tuple[tuple[int, ...], ...]

    @classmethod
    def forms(cls, degree: int, nvars: int = 3) -> "MonomialBasis":
        """Homogeneous forms of one degree (projective evaluation)."""
        mons = tuple(_exponents(nvars, degree))
        assert len(mons) == comb(degree + nvars - 1, nvars - 1)
        return cls(nvars, degree, True, mons)

    @classmethod
    def affine(cls, nvars: int, degree: int) -> "MonomialBasis":
        """All monomials of total degree at most ``degree``, graded by degree."""
        mons = tuple(m for d in range(degree + 1) for m in _exponents(nvars, d))
        assert len(mons) == comb(degree + nvars, nvars)
        return cls(nvars, degree, False, mons)

    def __len__(self):
        return len(self.monomials)


def coords(pt) -> tuple[int, ...]:
    """Canonical-index coordinates of a point given as ProjPoint, AffinePoint or tuple."""
    if isinstance(pt, ProjPoint):
        return pt.key
    if isinstance(pt, AffinePoint):
        return pt.key
    return tuple(c.value if isinstance(c, FieldElement) else int(c) for c in pt)


@dataclass
class EvalMatrix:
    field: Field
    points: tuple[tuple[int, ...], ...]
    basis: MonomialBasis
    entries: np.ndarray

    @property
    def shape(self):
        return self.entries.shape

    def entry(self, i: int, j: int) -> FieldElement:
        return self.field.from_index(int(self.entries[i, j]))

    def select(self, rows: Sequence[int]) -> "EvalMatrix":
        rows = list(rows)
        return EvalMatrix(self.field, tuple(self.points[i] for i in rows), self.basis, self.entries[rows])


def eval_matrix(field: Field, points, basis: MonomialBasis) -> EvalMatrix:
    pts = tuple(coords(p) for p in points)
    if any(len(p) != basis.nvars for p in pts):
        raise ValueError("point dimension does not match the basis")
    exps = np.array(basis.monomials, dtype=np.int64).reshape(len(basis), basis.nvars)
    out = np.ones((len(pts), len(basis)), dtype=np.int64)
    if not pts:
        return EvalMatrix(field, pts, basis, out.reshape(0, len(basis)))
    for c in range(basis.nvars):
        vals = np.array([p[c] for p in pts], dtype=np.int64)
        powers = np.ones((len(pts), basis.degree + 1), dtype=np.int64)
        for e in range(1, basis.degree + 1):
            powers[:, e] = field.vmul(powers[:, e - 1], vals)
        out = field.vmul(out, powers[:, exps[:, c]])
    return EvalMatrix(field, pts, basis, out)


def evaluate(field: Field, basis: MonomialBasis, coeffs: Sequence, point) -> FieldElement:
    """Scalar evaluation of a polynomial, independent of the matrix path."""
    xs = [field.from_index(v) for v in coords(point)]
    total = field.zero
    for c, mon in zip(coeffs, basis.monomials):
        c = field(c) if isinstance(c, FieldElement) else field.from_index(int(c))
        if not c:
            continue
        term = c
        for x, e in zip(xs, mon):
            term = term * x**e
        total = total + term
    return total


def row_reduce(field: Field, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; the pivot in each column is its first nonzero entry."""
    A = np.array(M, dtype=np.int64, copy=True)
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = field.vmul(A[r], field.inv(int(A[r, c])))
        f = A[:, c].copy()
        f[r] = 0
        others = np.flatnonzero(f)
        if others.size:
            A[others] = field.vsub(A[others], field.vmul(f[others, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(field: Field, M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    return len(row_reduce(field, M)[1])


def nullspace(field: Field, M: np.ndarray) -> np.ndarray:
    """Basis of {v : M v = 0} as rows, one per free column in increasing order."""
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, pivots = row_reduce(field, M)
    free = [c for c in range(ncols) if c not in set(pivots)]
    N = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(pivots):
            N[k, pc] = field.neg(int(R[i, f]))
    return N


def matmul(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if field.k == 1:
        return (A @ B) % field.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[1]):
        out = field.vadd(out, field.vmul(A[:, i : i + 1], B[i : i + 1, :]))
    return out


@dataclass
class RankNullspace:
    rank: int
    kernel: np.ndarray
    field: Field

    @property
    def nullspace(self) -> list[tuple[FieldElement, ...]]:
        return [tuple(self.field.from_index(int(v)) for v in row) for row in self.kernel]


def rank_and_nullspace(m: EvalMatrix) -> RankNullspace:
    N = nullspace(m.field, m.entries)
    return RankNullspace(m.shape[1] - N.shape[0], N, m.field)


def expand_product(field: Field, factors: Sequence[Sequence[int]], basis: MonomialBasis) -> np.ndarray:
    """Coefficients in ``basis`` of a product of linear forms given as index tuples."""
    poly = {(0,) * basis.nvars: 1}
    for lf in factors:
        nxt: dict[tuple[int, ...], int] = {}
        for mon, c in poly.items():
            for var, a in enumerate(lf):
                if a:
                    m2 = list(mon)
                    m2[var] += 1
                    m2 = tuple(m2)
                    nxt[m2] = field.add(nxt.get(m2, 0), field.mul(c, int(a)))
        poly = nxt
    index = {m: i for i, m in enumerate(basis.monomials)}
    out = np.zeros(len(basis), dtype=np.int64)
    for mon, c in poly.items():
        if c:
            out[index[mon]] = c
    return out


def all_vectors(q: int, length: int, lead: int | None = None, chunk: int = 1 << 16):
    """Chunks of coefficient vectors over {0..q-1}; with ``lead`` set, only those whose
    first nonzero entry is a 1 at position ``lead``."""
    if lead is None:
        positions, prefix = length, []
    else:
        positions, prefix = length - lead - 1, [0] * lead + [1]
    total = q**positions
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cols = []
        for _ in range(positions):
            idx, d = np.divmod(idx, q)
            cols.append(d)
        block = np.stack(cols, axis=1) if cols else np.zeros((len(idx), 0), dtype=np.int64)
        if prefix:
            head = np.tile(np.array(prefix, dtype=np.int64), (block.shape[0], 1))
            block = np.concatenate([head, block], axis=1)
        yield block

