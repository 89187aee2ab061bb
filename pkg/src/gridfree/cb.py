"""Cayley-Bacharach checks as rank statements over GF(q).

A form vanishing on all but one point of X is forced to vanish on the
last one exactly when dropping that point's row leaves the rank of the
evaluation matrix unchanged.  Every check here is phrased that way, and
every witness it returns is re-evaluated point by point before it is
reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from itertools import combinations, combinations_with_replacement, product
from math import isqrt, prod
from typing import Sequence

import numpy as np

from .errors import DegreeOutOfScope, GridTooLarge, KernelTooLarge, NoGeometry, ScenarioUnsatisfiable
from .ff import Field, FieldElement
from .geom import AffinePoint, Line, ProjPoint, intersect, line_through, on_parabola
from .hyper import LinearHypergraph
from .linalg import (
    MonomialBasis,
    all_vectors,
    eval_matrix,
    evaluate,
    expand_product,
    matmul,
    nullspace,
    rank,
)

MAX_ENUMERATION = 10**6
DEFAULT_SAMPLES = 1000
MAX_GRID_POINTS = 4096


@dataclass
class NotTransverse:
    coincidences: list[tuple[tuple[int, int], tuple[int, int], ProjPoint]]

    def __bool__(self):
        return False


def complete_intersection(rows: Sequence[Line], cols: Sequence[Line]):
    """The r*r points row_i ∩ col_j in row-major order, or NotTransverse."""
    lines = list(rows) + list(cols)
    if len(set(lines)) != len(lines):
        raise ValueError("row and column lines must be 2r distinct lines")
    pts = {}
    clashes = []
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            x = intersect(a, b)
            if x in pts:
                clashes.append((pts[x], (i, j), x))
            else:
                pts[x] = (i, j)
    if clashes:
        return NotTransverse(clashes)
    return list(pts)


def random_line(field: Field, rng: np.random.Generator) -> Line:
    # uniform over the q^2 + q affine lines
    i = int(rng.integers(field.q * field.q + field.q))
    if i < field.q:
        return Line(field.zero, field.one, field.from_index(i))
    i -= field.q
    return Line(field.one, field.from_index(i // field.q), field.from_index(i % field.q))


def random_transverse_family(field: Field, r: int, rng: np.random.Generator, tries: int = 100):
    """Random rows and columns with r^2 distinct crossings, built one line at a time."""
    for _ in range(tries):
        rows, cols = [], []
        for group in [rows] * r + [cols] * r:
            for _ in range(1000):
                cand = random_line(field, rng)
                if cand in rows or cand in cols:
                    continue
                group.append(cand)
                if not cols or complete_intersection(rows, cols):
                    break
                group.pop()
            else:
                break
        else:
            return rows, cols, complete_intersection(rows, cols)
    raise RuntimeError(f"no transverse {r}+{r} family found over {field}")


@dataclass
class Counterexample:
    point: tuple[int, ...]
    witness: tuple[int, ...]  # coefficients over ``basis`` as canonical indices
    basis: MonomialBasis

    def to_json(self) -> dict:
        return {"point": list(self.point), "witness": list(self.witness), "degree": self.basis.degree}


@dataclass
class CheckResult:
    passed: bool
    rank: int
    checked: int
    counterexample: Counterexample | None = None

    def __bool__(self):
        return self.passed


def _field_of(points) -> Field:
    p = points[0]
    if isinstance(p, (ProjPoint, AffinePoint)):
        return p.field
    return p[0].field


def _rank_equality(field: Field, points, basis: MonomialBasis) -> CheckResult:
    """For every point x: rank(M without x) == rank(M)."""
    M = eval_matrix(field, points, basis)
    full = rank(field, M.entries)
    n = len(M.points)
    for idx in range(n):
        rest = [i for i in range(n) if i != idx]
        if rank(field, M.entries[rest]) < full:
            N = nullspace(field, M.entries[rest])
            vals = matmul(field, M.entries[idx : idx + 1], N.T)[0]
            k = int(np.flatnonzero(vals)[0])
            witness = tuple(int(v) for v in N[k])
            _verify_witness(field, basis, witness, [M.points[i] for i in rest], [M.points[idx]])
            return CheckResult(False, full, idx + 1, Counterexample(M.points[idx], witness, basis))
    return CheckResult(True, full, n)


def _verify_witness(field, basis, witness, zeros, nonzeros) -> None:
    for pt in zeros:
        if evaluate(field, basis, witness, pt):
            raise AssertionError(f"witness does not vanish at {pt}")
    for pt in nonzeros:
        if not evaluate(field, basis, witness, pt):
            raise AssertionError(f"witness vanishes at {pt}")


def cb_check(X: Sequence[ProjPoint], d: int, falsify: bool = False) -> CheckResult:
    """Forms of degree d through r^2 - 1 points of a transverse X pass through the last."""
    r = isqrt(len(X))
    if r * r != len(X) or len(set(X)) != len(X):
        raise ValueError("X must consist of r^2 distinct points")
    if d > 2 * r - 3 and not falsify:
        raise DegreeOutOfScope(f"degree {d} exceeds 2r-3 = {2 * r - 3}")
    return _rank_equality(_field_of(X), X, MonomialBasis.forms(d))


@dataclass
class BudgetResult:
    passed: bool
    kernel_dim: int
    method: str  # "exhaustive" or "random"
    samples: int
    witness: tuple[int, ...] | None = None
    basis: MonomialBasis | None = None

    @property
    def probabilistic(self) -> bool:
        # a found witness is certain; only an unrefuted sampled pass is not
        return self.passed and self.method == "random"

    def __bool__(self):
        return self.passed


def degree_budget_check(
    X: Sequence[ProjPoint],
    S: Sequence[ProjPoint],
    d: int,
    falsify: bool = False,
    rng: np.random.Generator | None = None,
    samples: int = DEFAULT_SAMPLES,
    max_enumeration: int = MAX_ENUMERATION,
    allow_random: bool = True,
) -> BudgetResult:
    """No degree-d form vanishes on S while missing every point of X \\ S."""
    r = isqrt(len(X))
    Sset = set(S)
    if not Sset <= set(X):
        raise ValueError("S must be a subset of X")
    Y = [x for x in X if x not in Sset]
    t = len(Y)
    if t < 1:
        raise ValueError("at least one point of X must lie outside S")
    if d + t - 1 > 2 * r - 3 and not falsify:
        raise DegreeOutOfScope(f"d + (t - 1) = {d + t - 1} exceeds 2r-3 = {2 * r - 3}")
    field = _field_of(X)
    basis = MonomialBasis.forms(d)
    K = nullspace(field, eval_matrix(field, list(S), basis).entries)
    k = K.shape[0]
    if k == 0:
        return BudgetResult(True, 0, "exhaustive", 0, basis=basis)
    # values of the kernel generators at the missed points
    V = matmul(field, K, eval_matrix(field, Y, basis).entries.T)
    q = field.q
    if q**k <= max_enumeration:
        method, blocks = "exhaustive", (b for lead in range(k) for b in all_vectors(q, k, lead))
    elif allow_random:
        rng = rng if rng is not None else np.random.default_rng(0)
        method, blocks = "random", iter([rng.integers(0, q, size=(samples, k))])
    else:
        raise KernelTooLarge(f"kernel of dimension {k} over GF({q}) exceeds enumeration cap")
    seen = 0
    for coeffs in blocks:
        seen += coeffs.shape[0]
        vals = matmul(field, coeffs, V)
        hits = np.flatnonzero(np.all(vals != 0, axis=1))
        if hits.size:
            c = coeffs[int(hits[0])]
            witness = tuple(int(v) for v in matmul(field, c[None, :], K)[0])
            _verify_witness(field, basis, witness, list(S), Y)
            return BudgetResult(False, k, method, seen, witness, basis)
    return BudgetResult(True, k, method, seen, basis=basis)


def alon_furedi_check(field: Field, sets: Sequence[Sequence], D: int, falsify: bool = False,
                      max_points: int = MAX_GRID_POINTS) -> CheckResult:
    """A polynomial of degree <= sum(|A_i| - 1) - 1 vanishing on all but one point
    of A_1 x ... x A_n vanishes on the whole box."""
    parts = [sorted({field(a).value if isinstance(a, FieldElement) else int(a) % field.q for a in A}) for A in sets]
    if any(not A for A in parts):
        raise ValueError("all sets must be nonempty")
    npts = prod(len(A) for A in parts)
    if npts > max_points:
        raise GridTooLarge(f"{npts} grid points exceed the cap {max_points}")
    limit = sum(len(A) - 1 for A in parts) - 1
    if D > limit and not falsify:
        raise DegreeOutOfScope(f"degree {D} exceeds sum(|A_i| - 1) - 1 = {limit}")
    points = list(product(*parts))
    return _rank_equality(field, points, MonomialBasis.affine(len(parts), D))


def affine_classes(field: Field, size: int) -> list[tuple[int, ...]]:
    """One representative subset of each orbit of ``size``-subsets under x -> a x + b."""
    F = field
    reps = set()
    for sub in combinations(range(F.q), size):
        images = []
        for a in range(1, F.q):
            for b in range(F.q):
                images.append(tuple(sorted(F.add(F.mul(a, x), b) for x in sub)))
        reps.add(min(images))
    return sorted(reps)


def alon_furedi_configurations(field: Field, max_points: int = 64, sizes=(2, 3)) -> list[tuple[tuple[int, ...], ...]]:
    """Product sets up to coordinate permutation and coordinatewise affine maps,
    neither of which changes the maximal degree of a polynomial."""
    reps = [rep for s in sizes if s <= field.q for rep in affine_classes(field, s)]
    out = []
    n = 1
    while min(sizes) ** n <= max_points:
        for combo in combinations_with_replacement(reps, n):
            if prod(len(A) for A in combo) <= max_points:
                out.append(combo)
        n += 1
    return out


# --- replaying the grid-freeness argument on concrete lines -------------------

@dataclass
class RefutationTrace:
    model: str
    points: list[ProjPoint]
    special: list[ProjPoint]  # conic points (hrq) or missed points (parallel)
    witness_degree: int
    witness: tuple[int, ...]
    vanishing: int  # points of X where the witness vanishes
    misses_special: bool
    cb_pass: bool
    scenario_met: bool
    notes: list[str] = dfield(default_factory=list)

    @property
    def contradiction(self) -> bool:
        """The argument's hypotheses hold and the rank check refutes the witness."""
        return self.scenario_met and self.misses_special and self.cb_pass

    @property
    def consistent(self) -> bool:
        """What the rank check must imply: no such witness can exist."""
        return not self.contradiction

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "points": [p.to_json() for p in self.points],
            "special": [p.to_json() for p in self.special],
            "witness_degree": self.witness_degree,
            "vanishing": self.vanishing,
            "misses_special": self.misses_special,
            "cb_pass": self.cb_pass,
            "scenario_met": self.scenario_met,
            "contradiction": self.contradiction,
            "notes": self.notes,
        }


def _lf(line: Line) -> tuple[int, int, int]:
    return line.key


def grid_certificate(h: LinearHypergraph, rows: Sequence[Line], cols: Sequence[Line]) -> RefutationTrace:
    """Replay the witness-curve argument against a hypothetical grid on these lines."""
    X = complete_intersection(rows, cols)
    if not X:
        raise ScenarioUnsatisfiable(f"lines are not transverse: {X.coincidences[:3]}")
    if h.model == "hrq":
        return _hrq_trace(h, list(rows), X)
    if h.model == "parallel":
        return _parallel_trace(h, list(rows), X)
    raise NoGeometry(f"no witness-curve argument for model {h.model!r}")


def _hrq_trace(h: LinearHypergraph, rows: list[Line], X: list[ProjPoint]) -> RefutationTrace:
    F, r = h.field, len(rows)
    alphas = [F(a) for a in h.params["alphas"]]
    conic = sorted(x for x in X if not x.at_infinity and on_parabola(x.affine()))
    if len(conic) != r:
        raise ScenarioUnsatisfiable(f"{len(conic)} cross points on the parabola, the argument needs {r}")
    in_a = [x for x in X if not x.at_infinity and x.Y in alphas]
    b = [x.affine() for x in conic]
    # A (r - 1 horizontal lines) plus the chords b_1 b_2, ..., b_{r-2} b_{r-1}
    factors = [(0, 1, F.neg(a.value)) for a in alphas]
    factors += [_lf(line_through(b[i], b[i + 1])) for i in range(r - 2)]
    deg = len(factors)
    basis = MonomialBasis.forms(deg)
    witness = tuple(int(v) for v in expand_product(F, factors, basis))
    vals = [evaluate(F, basis, witness, x) for x in X]
    cb = cb_check(X, deg)
    trace = RefutationTrace(
        model="hrq",
        points=X,
        special=conic,
        witness_degree=deg,
        witness=witness,
        vanishing=sum(1 for v in vals if not v),
        misses_special=bool(evaluate(F, basis, witness, conic[-1])),
        cb_pass=cb.passed,
        scenario_met=len(in_a) == r * (r - 1),
    )
    trace.notes.append(f"{len(in_a)} of {r * (r - 1)} non-conic cross points lie on A")
    return trace


def _parallel_trace(h: LinearHypergraph, rows: list[Line], X: list[ProjPoint]) -> RefutationTrace:
    from .geom import line_from_json

    F, r = h.field, len(rows)
    layers = [line_from_json(F, l) for l in h.params["layers"]]
    basis = MonomialBasis.forms(r)
    witness = tuple(int(v) for v in expand_product(F, [_lf(l) for l in layers], basis))
    S = [x for x in X if not evaluate(F, basis, witness, x)]
    missed = [x for x in X if x not in set(S)]
    t = len(missed)
    if not 1 <= t <= r - 2:
        raise ScenarioUnsatisfiable(f"{t} cross points off the layers, the argument needs 1..{r - 2}")
    budget = degree_budget_check(X, S, r)
    return RefutationTrace(
        model="parallel",
        points=X,
        special=missed,
        witness_degree=r,
        witness=witness,
        vanishing=len(S),
        misses_special=all(evaluate(F, basis, witness, y) for y in missed),
        cb_pass=budget.passed,
        scenario_met=True,
        notes=[f"degree budget {r} + {t - 1} <= {2 * r - 3}", f"kernel dim {budget.kernel_dim}"],
    )


def synthetic_conic_family(h: LinearHypergraph, rng: np.random.Generator, tries: int = 100):
    """Nonhorizontal rows and columns with exactly r cross points on the parabola,
    row i and column i meeting at the i-th of r random conic points."""
    F, r = h.field, h.r

    def acceptable(rows, cols):
        if len(set(rows + cols)) < len(rows) + len(cols):
            return False
        if not cols:
            return True
        X = complete_intersection(rows, cols)
        if not X:
            return False
        on_conic = {x for x in X if not x.at_infinity and on_parabola(x.affine())}
        return on_conic == {intersect(rows[i], cols[i]) for i in range(len(cols))}

    for _ in range(tries):
        xs = rng.choice(F.q, size=r, replace=False)
        b = [AffinePoint(F.from_index(int(x)), F.from_index(int(x)) ** 2) for x in xs]
        rows: list[Line] = []
        cols: list[Line] = []
        ok = True
        for bi in b:
            for group in (rows, cols):
                for _ in range(1000):
                    other = AffinePoint(F.from_index(int(rng.integers(F.q))), F.from_index(int(rng.integers(F.q))))
                    if other == bi or other.y == bi.y:
                        continue
                    group.append(line_through(bi, other))
                    if acceptable(rows, cols):
                        break
                    group.pop()
                else:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return rows, cols
    raise RuntimeError("no synthetic family found")
