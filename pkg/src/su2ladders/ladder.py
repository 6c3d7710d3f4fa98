"""Generic ladder-operator machinery.

An operator p+ is a right ladder operator (RLO) of a self-adjoint H when
[H, p+] = p+ P for some self-adjoint P commuting with H; P is the right
function.  The conjugate relation [p, H] = P p defines a left ladder
operator.  Given a family {T_k} closed under commutation with H,
[H, T_eta] = sum_mu T_mu alpha_mu_eta, candidate right functions are the
roots of det(A - P) = 0 and the combination coefficients sigma solve
(A - P) sigma = 0.  For the Casimir of the bosonic su(2) realization the
closure matrix A is tridiagonal with entries polynomial in the label symbol
j, so both certificates are carried out in exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .jpoly import JPoly, poly_matrix_det
from .operators import (ResidualReport, SparseOperator, commutator, residual,
                        zero_residual)

P_FAMILY = "p"
M_FAMILY = "m"


class PreconditionError(ValueError):
    """A ladder-check precondition (a required commutation) fails."""

    def __init__(self, message: str, report: Optional[ResidualReport] = None):
        self.report = report
        super().__init__(message)


class RightFunctionError(ValueError):
    """A right-function candidate fails its exact determinant certificate."""

    def __init__(self, theta: int, det_poly: JPoly):
        self.theta = theta
        self.det_poly = det_poly
        super().__init__(
            f"det(A - P) for theta={theta} is not the zero polynomial: {det_poly}")


class ConsistencyError(ValueError):
    """Back-substitution leaves a nonzero consistency polynomial."""

    def __init__(self, theta: int, family: str, poly: JPoly):
        self.theta = theta
        self.family = family
        self.poly = poly
        super().__init__(
            f"sigma consistency row for theta={theta} ({family} family) "
            f"is nonzero: {poly}")


class AlphaVerificationError(ValueError):
    """A closure-matrix entry disagrees with the measured commutators."""

    def __init__(self, family: str, eta: int, detail: str):
        self.family = family
        self.eta = eta
        super().__init__(
            f"closure matrix verification failed for column eta={eta} "
            f"({family} family): {detail}")


# -- residual checks ----------------------------------------------------------


def _scale_guarded(rep: ResidualReport, scale: float) -> ResidualReport:
    # Operand normalization degenerates when both sides vanish on the
    # restriction (noise over noise); fall back to the natural scale of the
    # expression whenever that gives the smaller relative residual.
    if scale > 0:
        alt = rep.frobenius_absolute / scale
        if alt < rep.frobenius_relative:
            return ResidualReport(rep.frobenius_absolute, alt,
                                  rep.interior_margin)
    return rep


def _check_commutes(h: SparseOperator, other: SparseOperator, margin: int,
                    tol: float, what: str) -> None:
    c = commutator(h, other)
    scale = h.norm() * other.norm()
    rep = residual(c, SparseOperator.zeros(h.basis), margin)
    rel = rep.frobenius_absolute / scale if scale > 0 else rep.frobenius_absolute
    if rel > tol:
        raise PreconditionError(
            f"{what} does not commute with H (relative commutator norm "
            f"{rel:.3e} > {tol:.1e})", rep)


def check_rlo(h: SparseOperator, p_dag: SparseOperator, p_fn: SparseOperator,
              margin: int, col_weight: Optional[int] = None,
              precondition_tol: float = 1e-10) -> ResidualReport:
    """Residual of the right-ladder relation [H, p+] - p+ P on the interior.

    Precondition: P commutes with H to ``precondition_tol`` (violations raise
    PreconditionError carrying the offending commutator norm).

    When the right function vanishes identically the relation degenerates to
    [H, p+] = 0 and the relative residual is normalized by ||H|| ||p+||
    instead of the (zero) operand norms.
    """
    _check_commutes(h, p_fn, margin, precondition_tol, "right function")
    lhs = commutator(h, p_dag)
    rhs = p_dag @ p_fn
    if rhs.is_zero():
        return zero_residual(lhs, margin, col_weight=col_weight,
                             scale=max(h.norm() * p_dag.norm(), 1.0))
    scale = p_dag.norm() * (2.0 * h.norm() + p_fn.norm())
    return _scale_guarded(residual(lhs, rhs, margin, col_weight=col_weight),
                          scale)


def check_llo(h: SparseOperator, p: SparseOperator, p_fn: SparseOperator,
              margin: int, col_weight: Optional[int] = None,
              precondition_tol: float = 1e-10) -> ResidualReport:
    """Residual of the left-ladder relation [p, H] - P p on the interior."""
    _check_commutes(h, p_fn, margin, precondition_tol, "left function")
    lhs = commutator(p, h)
    rhs = p_fn @ p
    if rhs.is_zero():
        return zero_residual(lhs, margin, col_weight=col_weight,
                             scale=max(h.norm() * p.norm(), 1.0))
    scale = p.norm() * (2.0 * h.norm() + p_fn.norm())
    return _scale_guarded(residual(lhs, rhs, margin, col_weight=col_weight),
                          scale)


def check_power_identity(h: SparseOperator, p_dag: SparseOperator,
                         p_fn: SparseOperator, n: int, margin: int,
                         col_weight: Optional[int] = None,
                         rlo_tol: float = 1e-8) -> ResidualReport:
    """Residual of [H^n, p+] - p+ ((H + P)^n - H^n).

    Requires the base right-ladder relation to hold at ``rlo_tol`` first.
    """
    base = check_rlo(h, p_dag, p_fn, margin, col_weight=col_weight)
    if base.frobenius_relative > rlo_tol:
        raise PreconditionError(
            f"base ladder relation fails at {base.frobenius_relative:.3e}", base)
    hn = h.power(n)
    hp = (h + p_fn).power(n)
    lhs = commutator(hn, p_dag)
    rhs = p_dag @ (hp - hn)
    scale = p_dag.norm() * (2.0 * hn.norm() + hp.norm())
    return _scale_guarded(residual(lhs, rhs, margin, col_weight=col_weight),
                          scale)


def check_rlo_compose(h: SparseOperator, p_dag: SparseOperator,
                      p_fn: SparseOperator, a: SparseOperator, margin: int,
                      col_weight: Optional[int] = None,
                      precondition_tol: float = 1e-8) -> ResidualReport:
    """Residual of [H, p+ A] - p+ A P for A commuting with H + P."""
    hp = h + p_fn
    c = commutator(hp, a)
    scale = hp.norm() * a.norm()
    rep = residual(c, SparseOperator.zeros(h.basis), margin)
    rel = rep.frobenius_absolute / scale if scale > 0 else rep.frobenius_absolute
    if rel > precondition_tol:
        raise PreconditionError(
            f"A does not commute with H + P (relative commutator norm "
            f"{rel:.3e})", rep)
    lhs = commutator(h, p_dag @ a)
    rhs = p_dag @ a @ p_fn
    scale = p_dag.norm() * a.norm() * (2.0 * h.norm() + p_fn.norm())
    return _scale_guarded(residual(lhs, rhs, margin, col_weight=col_weight),
                          scale)


# -- closure matrix -----------------------------------------------------------


@dataclass(frozen=True)
class AlphaMatrix:
    """Tridiagonal closure matrix of the p or m family for one spin.

    Rows and columns are indexed by the family index k (0..s for the
    symmetric family, 1..s for the antisymmetric one); entries are exact
    polynomials in the label symbol j.  Column eta lists the coefficients of
    [J^2, T_eta] = sum_mu T_mu alpha[mu, eta], with the coefficients standing
    to the right of the family operators.
    """
    spin: int
    family: str
    entries: dict[tuple[int, int], JPoly]

    @property
    def ks(self) -> range:
        return range(0 if self.family == P_FAMILY else 1, self.spin + 1)

    def entry(self, row_k: int, col_k: int) -> JPoly:
        return self.entries.get((row_k, col_k), JPoly.zero())

    def as_rows(self) -> list[list[JPoly]]:
        ks = list(self.ks)
        return [[self.entry(i, j) for j in ks] for i in ks]


def _diag_entry(s: int, k: int) -> JPoly:
    return JPoly.constant(s * (s + 1) - 2 * k * k)


def _sub_entry(s: int, k: int, family: str) -> JPoly:
    # Coefficient of T_{k+1} in [J^2, T_k]; the symmetric family's k = 0
    # column carries the doubled constant from T_0 = 2 a_0^dagger.
    if family == P_FAMILY and k == 0:
        return JPoly.constant(2 * s * (s + 1))
    return JPoly.constant((s + k + 1) * (s - k))


def _super_entry(k: int) -> JPoly:
    # j(j+1) - k(k-1), the coefficient of T_{k-1} in [J^2, T_k].
    return JPoly.from_coeffs([-k * (k - 1), 1, 1])


def build_alpha(s: int, family: str) -> AlphaMatrix:
    """Closure matrix assembled from the commutation relations of the family.

    The diagonal is s(s+1) - 2k^2, the sub-diagonal (s+k+1)(s-k) (doubled at
    the symmetric family's first column), the super-diagonal j(j+1) - k(k-1).
    Numerical certification against measured commutators is a separate step
    (``certify_alpha`` in the casimir module) since it needs a Fock space.
    """
    if s < 1:
        raise ValueError(f"spin must be >= 1, got {s}")
    if family not in (P_FAMILY, M_FAMILY):
        raise ValueError(f"family must be '{P_FAMILY}' or '{M_FAMILY}'")
    lo = 0 if family == P_FAMILY else 1
    entries: dict[tuple[int, int], JPoly] = {}
    for k in range(lo, s + 1):
        entries[(k, k)] = _diag_entry(s, k)
        if k + 1 <= s:
            entries[(k + 1, k)] = _sub_entry(s, k, family)
        if k - 1 >= lo:
            entries[(k - 1, k)] = _super_entry(k)
    return AlphaMatrix(spin=s, family=family, entries=entries)


def build_alpha_variant_diag4(s: int, family: str) -> AlphaMatrix:
    """Rejected alternative convention: k = 1 diagonal entry s(s+1) - 4.

    Kept only as a negative control; it fails the numerical certificate for
    every spin and is recorded as a discrepancy in verification reports.
    """
    base = build_alpha(s, family)
    entries = dict(base.entries)
    if (1, 1) in entries:
        entries[(1, 1)] = JPoly.constant(s * (s + 1) - 4)
    return AlphaMatrix(spin=s, family=family, entries=entries)


# -- right functions -----------------------------------------------------------


@dataclass(frozen=True)
class RightFunction:
    """Eigenvalue family member theta(theta + 2j + 1) with its family parity."""
    theta: int
    family: str
    poly: JPoly


def right_function_poly(theta: int) -> JPoly:
    """theta(theta + 2j + 1) as an exact polynomial in j."""
    return JPoly.from_coeffs([theta * theta + theta, 2 * theta])


def family_for_theta(s: int, theta: int) -> str:
    """Parity rule: theta with the parity of s belongs to the symmetric family."""
    return P_FAMILY if (theta - s) % 2 == 0 else M_FAMILY


def det_certificate(s: int, family: str, theta: int) -> JPoly:
    """Exact det(A - theta(theta + 2j + 1) I) for the given family."""
    alpha = build_alpha(s, family)
    f = right_function_poly(theta)
    rows = alpha.as_rows()
    ks = list(alpha.ks)
    for i in range(len(ks)):
        rows[i][i] = rows[i][i] - f
    return poly_matrix_det(rows)


def right_functions(s: int) -> list[RightFunction]:
    """All 2s+1 certified right functions, theta = -s..s.

    Each candidate's determinant certificate must be the exact zero
    polynomial in its parity-matched family; a failure aborts with the
    nonzero determinant.
    """
    if s < 1:
        raise ValueError(f"spin must be >= 1, got {s}")
    out = []
    for theta in range(-s, s + 1):
        family = family_for_theta(s, theta)
        det = det_certificate(s, family, theta)
        if not det.is_zero():
            raise RightFunctionError(theta, det)
        out.append(RightFunction(theta=theta, family=family,
                                 poly=right_function_poly(theta)))
    return out


# -- sigma coefficients ---------------------------------------------------------


@dataclass(frozen=True)
class SigmaVector:
    """Combination coefficients sigma_k (polynomials in j), sigma_s = 1.

    Solves (A - theta(theta+2j+1) I) sigma = 0 by back-substitution from the
    last row; the remaining top row is the exact consistency certificate.
    """
    spin: int
    theta: int
    family: str
    sigmas: dict[int, JPoly]

    @property
    def ks(self) -> range:
        return range(0 if self.family == P_FAMILY else 1, self.spin + 1)


def solve_sigma(alpha: AlphaMatrix, theta: int) -> SigmaVector:
    """Back-substitute the null vector of (A - P) with sigma_s normalized to 1.

    Row k expresses sigma_{k-1} through sigma_k and sigma_{k+1}; the leading
    coefficients (s+k)(s-k+1), or 2s(s+1) at the symmetric family's first
    column, are nonzero integers so every division is exact.  The unused
    lowest row must evaluate to the zero polynomial; otherwise the closure
    matrix is wrong and ConsistencyError carries the offending polynomial.
    """
    s = alpha.spin
    if family_for_theta(s, theta) != alpha.family:
        raise ValueError(
            f"theta={theta} has the wrong parity for the {alpha.family} family "
            f"at spin {s}")
    f = right_function_poly(theta)
    lo = alpha.ks.start
    sigmas: dict[int, JPoly] = {s: JPoly.one()}
    # Rows k = s down to lo+1 determine sigma_{k-1}.
    for k in range(s, lo, -1):
        sigma_k = sigmas[k]
        sigma_k1 = sigmas.get(k + 1, JPoly.zero())
        lead = alpha.entry(k, k - 1)
        if lead.degree != 0:
            raise ValueError("sub-diagonal closure entry is not a constant")
        lead_c = lead.coeffs[0]
        rhs = (f - alpha.entry(k, k)) * sigma_k - alpha.entry(k, k + 1) * sigma_k1
        sigmas[k - 1] = rhs.scalar_div(lead_c)
    # Unused row lo is the consistency certificate.
    check = ((alpha.entry(lo, lo) - f) * sigmas[lo]
             + alpha.entry(lo, lo + 1) * sigmas.get(lo + 1, JPoly.zero()))
    if not check.is_zero():
        raise ConsistencyError(theta, alpha.family, check)
    return SigmaVector(spin=s, theta=theta, family=alpha.family, sigmas=sigmas)


def sigma_closed_form_next_to_top(s: int, theta: int) -> JPoly:
    """Closed form for sigma_{s-1}: j*theta/s + (theta^2 + theta + s^2 - s)/(2s).

    Matches back-substitution for s >= 2; for s = 1 the first-column
    normalization differs by the documented factor s + 1.
    """
    return JPoly.from_coeffs([
        Fraction(theta * theta + theta + s * s - s, 2 * s),
        Fraction(theta, s),
    ])
