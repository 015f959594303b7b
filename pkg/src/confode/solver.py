"""Closed-form solutions for sequential linear conformable equations.

Everything here works in the substituted variable ``u = t**alpha / alpha``,
where the conformable derivative acts as d/du and the equation becomes a
constant-coefficient linear ODE.  The pipeline is:

  1. characteristic roots (:mod:`confode.chareq`) -> homogeneous basis,
  2. symbolic Wronskian as a Cramer denominator,
  3. variation of parameters for a particular solution,
  4. optional constant fitting against initial values.

Division never leaves the term algebra: the only divisions performed are by
the single-term Wronskian (Cramer's rule) and by scalars.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chareq import CharPoly, find_roots
from .ualgebra import (
    COS,
    SIN,
    ZERO,
    SubstMap,
    UExpr,
    UTerm,
    add,
    diff_u,
    div_by_term,
    eval_expr,
    expr,
    expr_from_records,
    format_t,
    format_u,
    integrate_u,
    mul,
    one,
    scale,
    term_records,
)


class SolverError(ArithmeticError):
    """Base class for structural failures while building a solution."""


class WronskianError(SolverError):
    """The basis determinant did not collapse to a single exponential term."""


class SingularSystemError(SolverError):
    """The constant-fitting linear system was singular or unstable."""


@dataclass(frozen=True)
class ProblemSpec:
    """An order-n equation: n-fold derivative + sum p_i * (i-fold) = forcing."""

    coeffs: tuple[float, ...]
    alpha: float
    forcing: UExpr = ZERO

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) < 1:
            raise ValueError("equation order must be at least 1")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not isinstance(self.forcing, UExpr):
            raise TypeError("forcing must be a UExpr")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def char_poly(self) -> CharPoly:
        return CharPoly(self.coeffs)


@dataclass(frozen=True)
class BasisOrigin:
    """Where a basis element came from: root, power level, trig partner."""

    root: complex
    level: int
    part: str | None  # None for a real root, COS/SIN for a conjugate pair


@dataclass(frozen=True)
class SolutionBasis:
    elements: tuple[UExpr, ...]
    origins: tuple[BasisOrigin, ...]

    def __post_init__(self):
        if not self.elements or len(self.elements) != len(self.origins):
            raise ValueError("basis needs one origin per element")

    @property
    def n(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class GeneralSolution:
    spec: ProblemSpec
    basis: SolutionBasis
    particular: UExpr | None = None
    constants: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.particular is not None and self.spec.forcing.is_zero():
            raise ValueError("particular solution present without forcing")
        if self.constants is not None and len(self.constants) != self.basis.n:
            raise ValueError("need one fitted constant per basis element")


def apply_operator(spec: ProblemSpec, y: UExpr) -> UExpr:
    """Apply the equation's left side: n-fold d/du plus lower-order terms."""
    total = ZERO
    d = y
    for p in spec.coeffs:
        total = add(total, scale(d, p))
        d = diff_u(d)
    return add(total, d)


def homogeneous_basis(spec: ProblemSpec) -> SolutionBasis:
    """n independent solutions from the characteristic roots.

    A real root r of multiplicity m contributes u^l * e^(r*u) for
    l = 0..m-1.  A conjugate pair theta +/- i*beta of multiplicity m
    contributes the real pair u^l * e^(theta*u) * cos(beta*u) and the
    matching sin element for each level; their real span equals the span
    of the complex exponentials.
    """
    roots = find_roots(spec.char_poly())
    elements: list[UExpr] = []
    origins: list[BasisOrigin] = []
    for root, mult in roots.entries:
        if root.imag < 0:
            continue  # handled via its conjugate partner
        if root.imag == 0:
            rate = Fraction(root.real)
            for level in range(mult):
                elements.append(expr(UTerm(1.0, level, rate)))
                origins.append(BasisOrigin(root, level, None))
        else:
            theta, beta = Fraction(root.real), Fraction(root.imag)
            for level in range(mult):
                elements.append(expr(UTerm(1.0, level, theta, COS, beta)))
                origins.append(BasisOrigin(root, level, COS))
                elements.append(expr(UTerm(1.0, level, theta, SIN, beta)))
                origins.append(BasisOrigin(root, level, SIN))
    if len(elements) != spec.order:
        raise SolverError(
            f"basis count {len(elements)} != order {spec.order} "
            f"for {spec.char_poly().describe()}")
    return SolutionBasis(tuple(elements), tuple(origins))


def derivative_matrix(basis: SolutionBasis) -> list[list[UExpr]]:
    """Row i holds the i-fold u-derivatives of the basis; row 0 is the basis."""
    rows = [list(basis.elements)]
    for _ in range(basis.n - 1):
        rows.append([diff_u(e) for e in rows[-1]])
    return rows


def _subset_det(matrix: list[list[UExpr]], cols: tuple[int, ...], row: int,
                memo: dict) -> UExpr:
    """Determinant of rows row..row+len(cols)-1 restricted to ``cols``.

    Laplace expansion along the top row, memoized on (row, cols): the
    minors of the full determinant and of every Cramer numerator revisit
    the same subsets.
    """
    if not cols:
        return one()
    key = (row, cols)
    cached = memo.get(key)
    if cached is not None:
        return cached
    acc = ZERO
    for pos, j in enumerate(cols):
        sub = _subset_det(matrix, cols[:pos] + cols[pos + 1:], row + 1, memo)
        piece = mul(matrix[row][j], sub)
        acc = add(acc, piece if pos % 2 == 0 else scale(piece, -1.0))
    memo[key] = acc
    return acc


def _collapse_wronskian(det: UExpr) -> UTerm:
    if len(det.terms) != 1:
        raise WronskianError(
            "basis determinant did not collapse to a single term "
            f"(got {format_u(det)}); the set is not fundamental or the "
            "algebra broke down")
    w = det.terms[0]
    if w.upow or w.trig is not None:
        raise WronskianError(
            f"basis determinant is not pure-exponential: {format_u(det)}")
    return w


def wronskian(basis: SolutionBasis) -> UTerm:
    """Determinant of the derivative matrix; always C * e^(a*u), C != 0."""
    matrix = derivative_matrix(basis)
    return _collapse_wronskian(_subset_det(matrix, tuple(range(basis.n)), 0, {}))


def particular_solution(spec: ProblemSpec, basis: SolutionBasis) -> tuple[UExpr, list[UExpr]]:
    """Variation of parameters via Cramer's rule.

    The condition system makes every row of c'(u) combinations vanish
    except the last, which equals the forcing.  Each Cramer numerator is
    the forcing times a signed (n-1)-minor of the derivative matrix, and
    the shared denominator is the single-term Wronskian, so division stays
    inside the algebra.  Returns (v, [c_1..c_n]) with v = sum c_i * y_i.

    Resonant forcing needs no special path: a forcing rate equal to a root
    cancels the exponential in a numerator/Wronskian quotient, and the
    pure-power integration branch then produces the u-growth factor.
    """
    if spec.forcing.is_zero():
        raise ValueError("particular_solution needs a non-zero forcing")
    n = basis.n
    matrix = derivative_matrix(basis)
    memo: dict = {}
    cols = tuple(range(n))
    w = _collapse_wronskian(_subset_det(matrix, cols, 0, memo))
    cfuncs: list[UExpr] = []
    for i in range(n):
        minor = _subset_det(matrix, cols[:i] + cols[i + 1:], 0, memo)
        sign = 1.0 if (n - 1 + i) % 2 == 0 else -1.0
        numer = scale(mul(spec.forcing, minor), sign)
        cfuncs.append(integrate_u(div_by_term(numer, w)))
    v = ZERO
    for c, y in zip(cfuncs, basis.elements):
        v = add(v, mul(c, y))
    return v, cfuncs


def fit_constants(sol: GeneralSolution, t0: float, targets, subst: SubstMap | None = None):
    """Solve for the c_i matching the 0..n-1-fold derivative values at t0."""
    if t0 <= 0.0:
        raise ValueError(f"initial point must be positive, got {t0}")
    if subst is None:
        subst = SubstMap(sol.spec.alpha)
    n = sol.basis.n
    targets = [float(v) for v in targets]
    if len(targets) != n:
        raise ValueError(f"need {n} target values, got {len(targets)}")
    matrix = derivative_matrix(sol.basis)
    a = np.array([[eval_expr(matrix[i][j], t0, subst) for j in range(n)]
                  for i in range(n)])
    b = np.array(targets)
    if sol.particular is not None:
        d = sol.particular
        for i in range(n):
            b[i] -= eval_expr(d, t0, subst)
            d = diff_u(d)
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as err:
        raise SingularSystemError(
            f"initial-condition system is singular at t0={t0}: {err}") from err
    defect = float(np.abs(a @ x - b).max())
    bound = 1e-8 * (float(np.abs(a).max()) * float(np.abs(x).max()) + float(np.abs(b).max()) + 1.0)
    if not np.isfinite(x).all() or defect > bound:
        raise SingularSystemError(
            f"initial-condition system is numerically singular at t0={t0} "
            f"(defect {defect:.3g})")
    return tuple(float(c) for c in x)


def solve_problem(spec: ProblemSpec, t0: float | None = None,
                  targets=None) -> GeneralSolution:
    """Full pipeline: basis, particular solution, optional constant fit."""
    basis = homogeneous_basis(spec)
    particular = None
    if not spec.forcing.is_zero():
        particular, _ = particular_solution(spec, basis)
    sol = GeneralSolution(spec, basis, particular)
    if targets is not None:
        if t0 is None:
            raise ValueError("initial conditions need a base point t0")
        sol = GeneralSolution(spec, basis, particular,
                              fit_constants(sol, t0, targets))
    return sol


def format_solution(sol: GeneralSolution) -> str:
    """Human-readable y(t) with alpha substituted into the exponents."""
    subst = SubstMap(sol.spec.alpha)
    if sol.constants is not None:
        combo = sol.particular if sol.particular is not None else ZERO
        for c, y in zip(sol.constants, sol.basis.elements):
            combo = add(combo, scale(y, c))
        return "y(t) = " + format_t(combo, subst)
    parts = [f"c{i + 1}·{format_t(e, subst)}"
             for i, e in enumerate(sol.basis.elements)]
    body = " + ".join(parts)
    if sol.particular is not None:
        ptxt = format_t(sol.particular, subst)
        if len(sol.particular.terms) > 1 or ptxt.startswith("-"):
            ptxt = f"({ptxt})"
        body += " + " + ptxt
    return "y(t) = " + body


def solution_to_doc(sol: GeneralSolution) -> dict:
    """JSON-ready document; see README for the schema."""
    return {
        "alpha": sol.spec.alpha,
        "order": sol.spec.order,
        "coeffs": list(sol.spec.coeffs),
        "forcing": term_records(sol.spec.forcing),
        "basis": [term_records(e) for e in sol.basis.elements],
        "origins": [
            {"root": [o.root.real, o.root.imag], "level": o.level, "part": o.part}
            for o in sol.basis.origins
        ],
        "particular": None if sol.particular is None else term_records(sol.particular),
        "constants": None if sol.constants is None else list(sol.constants),
    }


def solution_from_doc(doc: dict) -> GeneralSolution:
    """Rebuild a GeneralSolution from its JSON document."""
    spec = ProblemSpec(tuple(doc["coeffs"]), float(doc["alpha"]),
                       expr_from_records(doc["forcing"]))
    if int(doc["order"]) != spec.order:
        raise ValueError(
            f"order field {doc['order']} does not match {spec.order} coefficients")
    elements = tuple(expr_from_records(r) for r in doc["basis"])
    origins = tuple(
        BasisOrigin(complex(o["root"][0], o["root"][1]), int(o["level"]), o["part"])
        for o in doc["origins"])
    particular = (None if doc.get("particular") is None
                  else expr_from_records(doc["particular"]))
    constants = (None if doc.get("constants") is None
                 else tuple(float(c) for c in doc["constants"]))
    return GeneralSolution(spec, SolutionBasis(elements, origins), particular, constants)
