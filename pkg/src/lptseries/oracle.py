"""Independent numerical check of the exact series: basis diagonalization.

The Hamiltonian is projected onto a truncated oscillator eigenbasis
(hbar = 1), where the kinetic-plus-quadratic part is the diagonal
omega*(i + 1/2) and each anharmonic term is a matrix power of the
tridiagonal position operator.  Eigenvalues come from a cyclic Jacobi
sweep -- at these dimensions the O(N^3) cost is irrelevant and the
rotation scheme is trustworthy to near machine precision, which is the
point of an oracle.

Two safeguards make a reported eigenvalue trustworthy:

* the basis gate: each requested level is diagonalized at two basis
  sizes and must agree to ``gate_tol`` before it is used at all;
* the truncation policy: the hbar series is asymptotic, so it is summed
  only up to (not including) its smallest-magnitude nonzero term, and
  the comparison budget is 10x that first omitted term.

Everything in this module deliberately runs in double precision; the
exact side of every comparison lives in `engine`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import EnergySeries, PotentialSpec, evaluate_energy, validate_potential
from .polys import Scalar, _as_fraction


class OracleError(RuntimeError):
    """Base class for failures that invalidate the numerical reference."""


class BasisNotConverged(OracleError):
    """Eigenvalues moved more than the gate tolerance when the basis grew."""


class EigensolverError(OracleError):
    """The Jacobi sweep did not reach the off-diagonal threshold."""


class AsymptoticBreakdown(OracleError):
    """The series terms do not decrease, so no truncation is meaningful."""


@dataclass(frozen=True)
class OracleProblem:
    """One diagonalization job: a potential at a concrete coupling value.

    ``powers`` maps an x-exponent to its double-precision coefficient,
    mirroring the anharmonic part of a PotentialSpec with ``lam`` bound to
    ``lam_value``.  ``basis_size`` and ``check_size`` are the two basis
    dimensions of the convergence gate.
    """

    m: float
    omega: float
    lam_value: Fraction
    powers: tuple[tuple[int, float], ...]
    basis_size: int
    check_size: int
    levels: tuple[int, ...]
    gate_tol: float = 1e-10

    def validate(self) -> "OracleProblem":
        top = max(self.levels, default=0)
        degree = max((p for p, _ in self.powers), default=2)
        if self.basis_size <= 2 * top + degree:
            raise ValueError(
                f"basis size {self.basis_size} too small for level {top} "
                f"with an x^{degree} potential"
            )
        if self.check_size <= self.basis_size:
            raise ValueError("check basis must be strictly larger than the base one")
        return self


def problem_from_potential(
    spec: PotentialSpec,
    lam_value: Scalar,
    basis_size: int = 60,
    check_size: int | None = None,
    levels: tuple[int, ...] = (0, 1, 2, 3),
    gate_tol: float = 1e-10,
) -> OracleProblem:
    """Bind a symbolic potential to a concrete coupling for diagonalization."""
    spec = validate_potential(spec)
    lam = _as_fraction(lam_value)
    powers = tuple(
        (i + 2, float(poly.evaluate(0, lam))) for i, poly in spec.terms
    )
    if check_size is None:
        check_size = basis_size + max(20, basis_size // 3)
    return OracleProblem(
        m=float(spec.m),
        omega=float(spec.omega),
        lam_value=lam,
        powers=powers,
        basis_size=basis_size,
        check_size=check_size,
        levels=tuple(levels),
        gate_tol=gate_tol,
    ).validate()


def position_matrix(n_basis: int, m: float, omega: float) -> np.ndarray:
    """Position operator in the oscillator basis: tridiagonal, hbar = 1,
    <i|x|i+1> = sqrt((i+1) / (2 m omega))."""
    if n_basis < 2:
        raise ValueError(f"basis must have at least 2 states, got {n_basis}")
    x = np.zeros((n_basis, n_basis))
    off = np.sqrt((np.arange(1, n_basis)) / (2.0 * m * omega))
    idx = np.arange(n_basis - 1)
    x[idx, idx + 1] = off
    x[idx + 1, idx] = off
    return x


def build_hamiltonian(problem: OracleProblem) -> np.ndarray:
    """H = diag(omega*(i+1/2)) + sum over anharmonic terms coeff * X^power."""
    n = problem.basis_size
    return _hamiltonian_at(problem, n)


def _hamiltonian_at(problem: OracleProblem, n_basis: int) -> np.ndarray:
    h = np.diag(problem.omega * (np.arange(n_basis) + 0.5))
    if problem.powers:
        x = position_matrix(n_basis, problem.m, problem.omega)
        for power, coeff in problem.powers:
            h = h + coeff * np.linalg.matrix_power(x, power)
    # matrix powers are symmetric up to rounding; enforce it exactly
    return (h + h.T) / 2.0


def jacobi_eigenvalues(
    h: np.ndarray, rel_tol: float = 1e-13, max_sweeps: int = 40
) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row by row until the off-diagonal Frobenius norm drops below
    ``rel_tol`` times the Frobenius norm of the input; raises after
    ``max_sweeps`` full sweeps without reaching it.
    """
    a = np.array(h, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=0.0):
        raise ValueError("matrix must be symmetric")
    if n == 1:
        return a.diagonal().copy()
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return np.zeros(n)
    threshold = rel_tol * norm
    # skipping entries this small cannot push the off-norm above threshold
    skip_tol = threshold / n
    for _sweep in range(max_sweeps):
        # off-diagonal Frobenius norm, summed directly (never by subtracting
        # near-equal totals, which would drown the 1e-13 scale in rounding)
        off_part = a - np.diag(a.diagonal())
        off = float(np.linalg.norm(off_part))
        if off <= threshold:
            return np.sort(a.diagonal().copy())
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip_tol:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / apq
                if abs(theta) > 1e12:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (
                        abs(theta) + math.hypot(theta, 1.0)
                    )
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # similarity rotation in the (p, q) plane
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    raise EigensolverError(
        f"off-diagonal norm still above {threshold:.3e} after {max_sweeps} sweeps"
    )


def lowest_eigenvalues(h: np.ndarray, count: int) -> np.ndarray:
    """The ``count`` smallest eigenvalues, ascending."""
    if count > h.shape[0]:
        raise ValueError(f"asked for {count} eigenvalues of a {h.shape[0]}-dim matrix")
    return jacobi_eigenvalues(h)[:count]


def diagonal_matrix_element(
    power: int, level: int, n_basis: int, m: float = 1.0, omega: float = 1.0
) -> float:
    """<level| x^power |level> from powers of the truncated position matrix.

    Exact (up to rounding) once the basis holds level + power/2 states,
    since x only couples neighbouring basis states.
    """
    x = position_matrix(n_basis, m, omega)
    return float(np.linalg.matrix_power(x, power)[level, level])


def converged_levels(problem: OracleProblem) -> tuple[np.ndarray, float]:
    """Requested eigenvalues, gated on basis-size convergence.

    Diagonalizes at ``basis_size`` and ``check_size``; every requested
    level must shift by less than ``gate_tol`` between the two, and the
    spectrum must be strictly increasing and positive, else the result
    is rejected.
    """
    problem.validate()
    count = max(problem.levels) + 1
    base = lowest_eigenvalues(_hamiltonian_at(problem, problem.basis_size), count)
    check = lowest_eigenvalues(_hamiltonian_at(problem, problem.check_size), count)
    shift = float(np.max(np.abs(base - check)))
    if shift >= problem.gate_tol:
        raise BasisNotConverged(
            f"eigenvalues moved by {shift:.3e} between basis sizes "
            f"{problem.basis_size} and {problem.check_size} "
            f"(gate {problem.gate_tol:.1e})"
        )
    if np.any(check <= 0.0) or np.any(np.diff(check) <= 0.0):
        raise OracleError("spectrum is not strictly increasing and positive")
    return np.array([check[n] for n in problem.levels]), shift


@dataclass(frozen=True)
class LevelReport:
    """Comparison of one level: diagonalization vs truncated series."""

    level: int
    eigenvalue: float
    partial_sum: float
    truncation_order: int
    first_omitted_term: float
    discrepancy: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.discrepancy <= self.bound


@dataclass(frozen=True)
class OracleReport:
    basis_size: int
    check_size: int
    basis_shift: float
    lam_value: Fraction
    levels: tuple[LevelReport, ...]

    @property
    def passed(self) -> bool:
        return all(entry.ok for entry in self.levels)


def optimal_truncation(terms: list[Fraction]) -> tuple[int, Fraction]:
    """Truncation point of an asymptotic partial sum: (k*, first omitted).

    ``terms[k]`` is the hbar^k contribution (terms[0] ignored); the sum
    to take is ``terms[1:k*]``.  Exactly zero terms carry no information
    about where the series turns (for even potentials whole stripes of
    orders vanish identically), so the turn is located on the nonzero
    subsequence: k* is the index of its smallest-magnitude member.  A
    single nonzero term means the series terminates -- it is summed in
    full and the omitted term is zero.  Raises `AsymptoticBreakdown`
    when the first two nonzero terms fail to decrease in magnitude.
    """
    nonzero = [(k, t) for k, t in enumerate(terms) if k >= 1 and t != 0]
    if not nonzero:
        return 1, Fraction(0)
    if len(nonzero) == 1:
        return nonzero[0][0] + 1, Fraction(0)
    if abs(nonzero[1][1]) >= abs(nonzero[0][1]):
        raise AsymptoticBreakdown(
            "first two nonzero series terms do not decrease "
            f"(|{float(nonzero[0][1]):.6g}| then |{float(nonzero[1][1]):.6g}|): "
            "the coupling is too large for an asymptotic partial sum"
        )
    k_star, smallest = min(nonzero, key=lambda pair: (abs(pair[1]), pair[0]))
    return k_star, smallest


def compare_series(series: EnergySeries, problem: OracleProblem) -> OracleReport:
    """Optimally truncated partial sums vs gated diagonalization.

    For each requested level, the series is summed up to just before its
    smallest nonzero term; the discrepancy against the eigenvalue must
    stay within max(10 * |first omitted term|, 1e-10).
    """
    if series.order < 3:
        raise ValueError(f"series order {series.order} too short to truncate")
    # truncate first: an unusable series should be diagnosed as such, not
    # reported as a basis-convergence failure after a wasted diagonalization
    truncations = []
    for level in problem.levels:
        _, terms = evaluate_energy(
            series, level, problem.lam_value, 1, truncate_at=series.order
        )
        truncations.append((level, terms, *optimal_truncation(terms)))
    eigenvalues, shift = converged_levels(problem)
    entries = []
    for eig, (level, terms, k_star, omitted) in zip(eigenvalues, truncations):
        partial = float(sum(terms[1:k_star], Fraction(0)))
        discrepancy = abs(float(eig) - partial)
        bound = max(10.0 * abs(float(omitted)), 1e-10)
        entries.append(
            LevelReport(
                level=level,
                eigenvalue=float(eig),
                partial_sum=partial,
                truncation_order=k_star,
                first_omitted_term=float(omitted),
                discrepancy=discrepancy,
                bound=bound,
            )
        )
    return OracleReport(
        basis_size=problem.basis_size,
        check_size=problem.check_size,
        basis_shift=shift,
        lam_value=problem.lam_value,
        levels=tuple(entries),
    )


def report_text(report: OracleReport) -> str:
    """Human-readable rendering of an oracle comparison."""
    lines = [
        f"basis {report.basis_size} vs {report.check_size}: "
        f"max eigenvalue shift {report.basis_shift:.3e}",
        f"coupling lam = {report.lam_value} ({float(report.lam_value):.6g})",
        "level  eigenvalue            partial sum           k*  omitted     "
        "discrepancy  bound        verdict",
    ]
    for e in report.levels:
        lines.append(
            f"{e.level:>5}  {e.eigenvalue:<20.12f}  {e.partial_sum:<20.12f}  "
            f"{e.truncation_order:>2}  {e.first_omitted_term:>10.3e}  "
            f"{e.discrepancy:>11.3e}  {e.bound:>11.3e}  "
            f"{'ok' if e.ok else 'FAIL'}"
        )
    return "\n".join(lines)


def report_csv(report: OracleReport) -> str:
    """CSV rendering: one row per level."""
    lines = [
        "level,eigenvalue,partial_sum,truncation_order,"
        "first_omitted_term,discrepancy,bound,ok"
    ]
    for e in report.levels:
        lines.append(
            f"{e.level},{e.eigenvalue!r},{e.partial_sum!r},{e.truncation_order},"
            f"{e.first_omitted_term!r},{e.discrepancy!r},{e.bound!r},{e.ok}"
        )
    return "\n".join(lines) + "\n"
