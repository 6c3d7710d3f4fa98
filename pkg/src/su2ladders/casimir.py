"""Casimir ladder stack: operator families, assembled ladders, lattice action.

Two families commuting with J_z are built from the bosonic modes,

    T_0 = 2 a_0^dagger,
    p_k = (a_{-k}^dagger J_+^k + a_k^dagger J_-^k) / prod_i sqrt((s+i)(s-i+1)),
    m_k = (a_{-k}^dagger J_+^k - a_k^dagger J_-^k) / prod_i sqrt((s+i)(s-i+1)),

and combined with the exact sigma coefficients into ladder operators
tau[theta] that shift the Casimir label j by theta while raising the total
particle number by one.  Everything the construction claims is certified
numerically on the zero-weight (J_z kernel) column restriction, where the
closure relations hold; the few identities that hold unrestricted are checked
on the full interior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fock import SectorBasis
from .jpoly import JPoly
from .ladder import (AlphaMatrix, M_FAMILY, P_FAMILY, SigmaVector,
                     AlphaVerificationError, build_alpha, check_llo, check_rlo,
                     right_function_poly, right_functions, solve_sigma)
from .operators import (ResidualReport, SparseOperator, commutator,
                        commutator_residual, creation_op, number_op, residual,
                        zero_residual)
from .schwinger import KernelVector, Su2Generators, jz_kernel


@dataclass(frozen=True)
class LadderFamily:
    """The symmetric (p) and antisymmetric (m) operator families for one spin.

    Both commute with J_z and raise the total particle number by one;
    ``p_ops[k]`` holds index k = 0..s, ``m_ops[k-1]`` holds index k = 1..s.
    """
    s: int
    basis: SectorBasis
    p_ops: tuple[SparseOperator, ...]
    m_ops: tuple[SparseOperator, ...]

    def ops(self, family: str) -> dict[int, SparseOperator]:
        if family == P_FAMILY:
            return {k: self.p_ops[k] for k in range(self.s + 1)}
        if family == M_FAMILY:
            return {k: self.m_ops[k - 1] for k in range(1, self.s + 1)}
        raise ValueError(f"unknown family {family!r}")


def build_families(basis: SectorBasis, generators: Su2Generators) -> LadderFamily:
    """Construct both operator families for the generators' spin."""
    s = generators.s
    adag = {mu: creation_op(basis, mu) for mu in range(-s, s + 1)}
    p_ops = [(2.0 * adag[0]).with_budget(1)]
    m_ops = []
    jp_pow = SparseOperator.identity(basis)
    jm_pow = SparseOperator.identity(basis)
    norm = 1.0
    for k in range(1, s + 1):
        jp_pow = jp_pow @ generators.Jplus
        jm_pow = jm_pow @ generators.Jminus
        norm *= math.sqrt((s + k) * (s - k + 1))
        plus = adag[-k] @ jp_pow + adag[k] @ jm_pow
        minus = adag[-k] @ jp_pow - adag[k] @ jm_pow
        p_ops.append(((1.0 / norm) * plus).with_budget(1))
        m_ops.append(((1.0 / norm) * minus).with_budget(1))
    return LadderFamily(s=s, basis=basis, p_ops=tuple(p_ops), m_ops=tuple(m_ops))


# -- numerical certification of the closure matrix ---------------------------


def certify_alpha(alpha: AlphaMatrix, generators: Su2Generators,
                  families: LadderFamily, margin: int = 1,
                  tol: float = 1e-8) -> dict[int, ResidualReport]:
    """Verify each closure-matrix column against measured commutators.

    For every family index eta the residual of [J^2, T_eta] minus
    sum_mu T_mu alpha[mu, eta](j) is computed on the zero-weight interior
    columns.  A failure aborts with the offending (mu, eta) pair, identified
    by coefficient extraction.
    """
    ops = families.ops(alpha.family)
    reports = {}
    for eta, t_eta in ops.items():
        lhs = commutator(generators.J2, t_eta)
        rhs = SparseOperator.zeros(families.basis)
        for mu, t_mu in ops.items():
            poly = alpha.entry(mu, eta)
            if poly.is_zero():
                continue
            rhs = rhs + t_mu @ generators.function_of_j(poly)
        rep = residual(lhs, rhs, margin, col_weight=0)
        if rep.frobenius_relative > tol and rep.frobenius_absolute > tol:
            mu_bad, dev = _worst_alpha_entry(alpha, eta, generators, families)
            raise AlphaVerificationError(
                alpha.family, eta,
                f"residual {rep.frobenius_relative:.3e}; worst entry mu={mu_bad} "
                f"deviates by {dev:.3e}")
        reports[eta] = rep
    return reports


def extract_alpha_column(generators: Su2Generators, families: LadderFamily,
                         family: str, eta: int, node: KernelVector
                         ) -> Optional[dict[int, float]]:
    """Measure the closure coefficients on one kernel node by least squares.

    Returns None when the family images at the node are too ill-conditioned
    to identify coefficients (e.g. several images vanish).
    """
    ops = families.ops(family)
    t_eta = ops[eta]
    lhs = commutator(generators.J2, t_eta).apply(node.vector)
    cols, mus = [], []
    for mu, t_mu in ops.items():
        img = t_mu.apply(node.vector)
        cols.append(img)
        mus.append(mu)
    m = np.array(cols).T
    if np.linalg.matrix_rank(m, tol=1e-8) < len(mus):
        return None
    coef, *_ = np.linalg.lstsq(m, lhs, rcond=None)
    fit = m @ coef
    if np.linalg.norm(fit - lhs) > 1e-6 * (1 + np.linalg.norm(lhs)):
        return None
    return {mu: float(c.real) for mu, c in zip(mus, coef)}


def _worst_alpha_entry(alpha, eta, generators, families):
    worst = (None, 0.0)
    basis = families.basis
    for n in range(0, basis.n_max):
        for node in jz_kernel(basis, generators, n):
            measured = extract_alpha_column(generators, families,
                                            alpha.family, eta, node)
            if measured is None:
                continue
            for mu, value in measured.items():
                dev = abs(value - float(alpha.entry(mu, eta)(node.j)))
                if dev > worst[1]:
                    worst = (mu, dev)
    return worst


def alpha_entry_deviation(alpha: AlphaMatrix, generators: Su2Generators,
                          families: LadderFamily) -> float:
    """Largest deviation of measured closure coefficients from the matrix."""
    dev = 0.0
    for eta in alpha.ks:
        mu, d = _worst_alpha_entry(alpha, eta, generators, families)
        dev = max(dev, d)
    return dev


def build_alpha_certified(generators: Su2Generators, families: LadderFamily,
                          family: str, margin: int = 1, tol: float = 1e-8
                          ) -> tuple[AlphaMatrix, dict[int, ResidualReport]]:
    """Assemble the closure matrix and certify it numerically in one step."""
    alpha = build_alpha(generators.s, family)
    reports = certify_alpha(alpha, generators, families, margin=margin, tol=tol)
    return alpha, reports


# -- assembled ladder operators ----------------------------------------------


class TauCertificationError(ValueError):
    """An assembled ladder operator fails its build-time certificate."""

    def __init__(self, theta, which, report):
        self.theta = theta
        self.report = report
        super().__init__(
            f"tau[{theta}] failed the {which} certificate: relative residual "
            f"{report.frobenius_relative:.3e}")


@dataclass(frozen=True)
class TauOperator:
    """Ladder operator of the Casimir: shifts j by theta, raises N by one."""
    theta: int
    family: str
    op: SparseOperator
    right_function: JPoly
    sigma: SigmaVector = field(repr=False)

    def adjoint(self) -> SparseOperator:
        return self.op.adjoint()


def assemble_tau(families: LadderFamily, sigma: SigmaVector,
                 generators: Su2Generators, certify: bool = True,
                 tol: float = 1e-8) -> TauOperator:
    """Combine a family with its sigma coefficients into a single ladder.

    op = sum_k T_k sigma_k(j), with the polynomials evaluated spectrally and
    standing to the right.  When ``certify`` is set (default), the ladder
    relation with J^2 and the unit shift of j are both verified on the
    zero-weight interior before the operator is returned.
    """
    ops = families.ops(sigma.family)
    op = SparseOperator.zeros(families.basis)
    for k, t_k in ops.items():
        poly = sigma.sigmas[k]
        if poly.is_zero():
            continue
        op = op + t_k @ generators.function_of_j(poly)
    op = op.with_budget(1)
    fpoly = right_function_poly(sigma.theta)
    tau = TauOperator(theta=sigma.theta, family=sigma.family, op=op,
                      right_function=fpoly, sigma=sigma)
    if certify:
        rep = tau_casimir_ladder_residual(tau, generators)
        if rep.frobenius_relative > tol:
            raise TauCertificationError(sigma.theta, "Casimir ladder", rep)
        rep_j = tau_shift_residual(tau, generators)
        if rep_j.frobenius_relative > tol:
            raise TauCertificationError(sigma.theta, "label shift", rep_j)
    return tau


def tau_casimir_ladder_residual(tau: TauOperator, generators: Su2Generators,
                                margin: int = 1) -> ResidualReport:
    """Residual of [J^2, tau] - tau * theta(theta + 2j + 1) on weight-0 columns."""
    rf_op = generators.function_of_j(tau.right_function)
    return check_rlo(generators.J2, tau.op, rf_op, margin, col_weight=0)


def tau_shift_residual(tau: TauOperator, generators: Su2Generators,
                       margin: int = 1) -> ResidualReport:
    """Residual of [j, tau] - theta * tau on weight-0 columns."""
    jh = generators.j_hat()
    lhs = commutator(jh, tau.op)
    if tau.theta == 0:
        return zero_residual(lhs, margin, col_weight=0,
                             scale=max(jh.norm() * tau.op.norm(), 1.0))
    rhs = float(tau.theta) * tau.op
    rep = residual(lhs, rhs, margin, col_weight=0)
    scale = tau.op.norm() * (2.0 * jh.norm() + abs(tau.theta))
    alt = rep.frobenius_absolute / scale if scale > 0 else rep.frobenius_absolute
    if alt < rep.frobenius_relative:
        return ResidualReport(rep.frobenius_absolute, alt, margin)
    return rep


def build_taus(families: LadderFamily, generators: Su2Generators,
               certify: bool = True, tol: float = 1e-8
               ) -> dict[int, TauOperator]:
    """Assemble the certified ladder operator for every theta in [-s, s]."""
    s = generators.s
    alphas = {fam: build_alpha(s, fam) for fam in (P_FAMILY, M_FAMILY)}
    out = {}
    for rf in right_functions(s):
        sigma = solve_sigma(alphas[rf.family], rf.theta)
        out[rf.theta] = assemble_tau(families, sigma, generators,
                                     certify=certify, tol=tol)
    return out


# -- resolvent ladder relations ------------------------------------------------


def resolvent_commutator_check(generators: Su2Generators, tau: TauOperator,
                               k: int, side: str, margin: int = 1
                               ) -> ResidualReport:
    """Ladder relation of tau with the resolvent 1/(2j + (2k+1)).

    side='right': [g(j), tau] = tau (g(j + theta) - g(j)),
    side='left' : [g(j), tau] = (g(j) - g(j - theta)) tau,
    both on zero-weight interior columns.  Shifted denominators vanish only
    at half-integer j, so integer spectra stay clear of the poles; an actual
    pole raises SpectralFunctionError naming the sector.
    """
    if k < 0:
        raise ValueError("resolvent index k must be non-negative")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    theta = tau.theta

    def g(j: float) -> float:
        return 1.0 / (2.0 * j + (2 * k + 1))

    g_op = generators.function_of_j(g)
    lhs = commutator(g_op, tau.op)
    if theta == 0:
        # Both sides vanish identically: tau[0] preserves j, and the
        # difference of equal resolvents is zero.
        return zero_residual(lhs, margin, col_weight=0,
                             scale=max(g_op.norm() * tau.op.norm(), 1.0))
    if side == "right":
        diff = generators.function_of_j(lambda j: g(j + theta) - g(j))
        rhs = tau.op @ diff
    else:
        diff = generators.function_of_j(lambda j: g(j) - g(j - theta))
        rhs = diff @ tau.op
    rep = residual(lhs, rhs, margin, col_weight=0)
    scale = tau.op.norm() * (2.0 * g_op.norm() + diff.norm())
    alt = rep.frobenius_absolute / scale if scale > 0 else rep.frobenius_absolute
    if alt < rep.frobenius_relative:
        return ResidualReport(rep.frobenius_absolute, alt, margin)
    return rep


# -- lattice of kernel nodes -----------------------------------------------------


class LatticeSchemeError(ValueError):
    """A ladder image lands outside its predicted (n, j) node."""


@dataclass(frozen=True)
class LatticeArrow:
    """Action of one ladder operator on one kernel node."""
    operator: str               # e.g. "tau[+1]" or "tau_dag[-1]"
    source: tuple[int, int]     # (n, j)
    target: Optional[tuple[int, int]]  # None when annihilated
    amplitude: float            # norm of the image of a unit node vector
    annihilated: bool


@dataclass
class KernelLatticeReport:
    """Where each ladder operator sends each (n, j) kernel node.

    ``node_dims`` covers source levels n <= n_limit; ``known_nodes`` extends
    one level higher (when representable) so that target existence can be
    decided for raising arrows.
    """
    spin: int
    n_limit: int
    node_dims: dict[tuple[int, int], int]
    arrows: list[LatticeArrow]
    weight0_dims: dict[int, int]
    known_nodes: dict[tuple[int, int], int]

    def node_exists(self, node: tuple[int, int]) -> bool:
        return node in self.known_nodes

    def reachable_by(self) -> dict[tuple[int, int], list[str]]:
        out: dict[tuple[int, int], list[str]] = {key: [] for key in self.node_dims}
        for arrow in self.arrows:
            if arrow.target is not None and arrow.target in out:
                if arrow.operator not in out[arrow.target]:
                    out[arrow.target].append(arrow.operator)
        return out

    def arrows_from(self, node: tuple[int, int]) -> list[LatticeArrow]:
        return [a for a in self.arrows if a.source == node]

    def annihilation_flags(self) -> dict[tuple[str, tuple[int, int]], bool]:
        return {(a.operator, a.source): a.annihilated for a in self.arrows}

    def to_json_dict(self) -> dict:
        return {
            "spin": self.spin,
            "n_limit": self.n_limit,
            "nodes": [{"n": n, "j": j, "dim": d}
                      for (n, j), d in sorted(self.node_dims.items())],
            "weight0_dims": [{"n": n, "dim": d}
                             for n, d in sorted(self.weight0_dims.items())],
            "arrows": [{
                "operator": a.operator,
                "source": list(a.source),
                "target": list(a.target) if a.target is not None else None,
                "amplitude": a.amplitude,
                "annihilated": a.annihilated,
            } for a in self.arrows],
            "reachable_by": [{"node": list(k), "operators": v}
                             for k, v in sorted(self.reachable_by().items())],
        }


def lattice_report(basis: SectorBasis, generators: Su2Generators,
                   taus: dict[int, TauOperator], n_limit: int,
                   annihilation_tol: float = 1e-8,
                   leak_tol: float = 1e-8) -> KernelLatticeReport:
    """Map the action of every tau and its adjoint on the (n, j) kernel lattice.

    Raising operators are recorded for source nodes with n <= n_max - 1 (the
    interior where truncation cannot bite); lowering operators for all nodes
    up to ``n_limit``.  A nonzero image with any component outside the
    predicted target node (n +/- 1, j +/- theta) is a hard error.
    """
    if n_limit > basis.n_max:
        raise ValueError(f"n_limit={n_limit} exceeds n_max={basis.n_max}")
    nodes: dict[int, list[KernelVector]] = {}
    for n in range(0, min(n_limit + 1, basis.n_max) + 1):
        nodes[n] = jz_kernel(basis, generators, n)
    node_dims: dict[tuple[int, int], int] = {}
    weight0_dims: dict[int, int] = {}
    known_nodes: dict[tuple[int, int], int] = {}
    for n in range(0, n_limit + 1):
        weight0_dims[n] = len(nodes[n])
        for kv in nodes[n]:
            node_dims[(n, kv.j)] = node_dims.get((n, kv.j), 0) + 1
    for n, kvs in nodes.items():
        for kv in kvs:
            known_nodes[(n, kv.j)] = known_nodes.get((n, kv.j), 0) + 1

    def node_vectors(n: int, j: int) -> list[np.ndarray]:
        return [kv.vector for kv in nodes.get(n, []) if kv.j == j]

    arrows: list[LatticeArrow] = []
    for theta in sorted(taus):
        tau = taus[theta]
        tau_dag = tau.op          # raises N by one: (n, j) -> (n+1, j+theta)
        tau_low = tau.op.adjoint()  # lowers N: (n, j) -> (n-1, j-theta)
        for n in range(0, n_limit + 1):
            for kv in nodes[n]:
                source = (n, kv.j)
                if n <= basis.n_max - 1:
                    arrows.append(_classify_image(
                        f"tau_dag[{theta:+d}]", source, (n + 1, kv.j + theta),
                        tau_dag.apply(kv.vector), node_vectors,
                        annihilation_tol, leak_tol))
                arrows.append(_classify_image(
                    f"tau[{theta:+d}]", source, (n - 1, kv.j - theta),
                    tau_low.apply(kv.vector), node_vectors,
                    annihilation_tol, leak_tol))
    return KernelLatticeReport(spin=generators.s, n_limit=n_limit,
                               node_dims=node_dims, arrows=arrows,
                               weight0_dims=weight0_dims,
                               known_nodes=known_nodes)


def _classify_image(label, source, predicted, image, node_vectors,
                    annihilation_tol, leak_tol):
    norm = float(np.linalg.norm(image))
    if norm <= annihilation_tol:
        return LatticeArrow(operator=label, source=source, target=None,
                            amplitude=0.0, annihilated=True)
    # Project out the predicted node explicitly; forming the residual vector
    # avoids the cancellation that norm^2 - |projection|^2 would suffer.
    outside = image.copy()
    for v in node_vectors(*predicted):
        outside = outside - v * np.vdot(v, image)
    leak = float(np.linalg.norm(outside))
    if leak > leak_tol * max(1.0, norm):
        raise LatticeSchemeError(
            f"{label} applied to node {source} leaks {leak:.3e} outside the "
            f"predicted node {predicted}")
    return LatticeArrow(operator=label, source=source, target=predicted,
                        amplitude=norm, annihilated=False)


# -- deformed algebra generators --------------------------------------------------


def deformed_generators(tau_minus: TauOperator
                        ) -> tuple[SparseOperator, SparseOperator]:
    """Deformation generators from a lowering pair (theta = -omega, omega >= 1).

    L_z = [tau+, tau] and L^2 = L_z^2 + (tau+ tau + tau tau+)/2, both exactly
    hermitian by construction (budget 2).
    """
    if tau_minus.theta >= 0:
        raise ValueError("deformed generators need theta = -omega with omega >= 1")
    t_dag = tau_minus.op
    t = t_dag.adjoint()
    lz = commutator(t_dag, t).hermitized()
    l2 = (lz @ lz + 0.5 * (t_dag @ t + t @ t_dag)).hermitized()
    return lz, l2


def residue_classes(report: KernelLatticeReport, omega: int
                    ) -> dict[int, list[tuple[int, int]]]:
    """Kernel nodes partitioned by the residue r = j mod omega."""
    if omega < 1:
        raise ValueError("omega must be >= 1")
    classes: dict[int, list[tuple[int, int]]] = {}
    for (n, j) in sorted(report.node_dims):
        classes.setdefault(j % omega, []).append((n, j))
    return classes


# -- commuting-set checks ------------------------------------------------------------


@dataclass
class SeparationNode:
    """Joint-eigenvalue separation outcome for one multi-dimensional node."""
    node: tuple[int, int]
    dimension: int
    separated: bool
    eigenvalue_tuples: list[tuple[float, ...]]


@dataclass
class CompleteSetReport:
    commutator_residuals: dict[tuple[int, str], ResidualReport]
    separation: list[SeparationNode]

    def all_commutators_within(self, tol: float) -> bool:
        return all(r.frobenius_relative < tol
                   for r in self.commutator_residuals.values())


def complete_set_check(basis: SectorBasis, generators: Su2Generators,
                       taus: dict[int, TauOperator], n_limit: int,
                       margin: int = 2, degeneracy_tol: float = 1e-6
                       ) -> CompleteSetReport:
    """Commutation of tau+ tau with {J^2, J_z, N}, plus a separation scan.

    The products tau+ tau conserve N and weight, so the J_z and N commutators
    are checked on the full interior; the J^2 commutator on zero-weight
    columns, where the ladder relation that implies it holds.  The scan then
    looks for kernel nodes of dimension >= 2 and reports whether the
    eigenvalues of the tau+ tau operators restricted to the node separate its
    states.
    """
    residuals: dict[tuple[int, str], ResidualReport] = {}
    for theta in sorted(taus):
        t_dag = taus[theta].op
        prod = t_dag @ t_dag.adjoint().with_budget(1)
        residuals[(theta, "J2")] = commutator_residual(
            prod, generators.J2, margin, col_weight=0)
        residuals[(theta, "Jz")] = commutator_residual(
            prod, generators.Jz, margin)
        residuals[(theta, "N")] = commutator_residual(
            prod, generators.Ntot, margin)

    separation: list[SeparationNode] = []
    for n in range(0, n_limit + 1):
        groups: dict[int, list[KernelVector]] = {}
        for kv in jz_kernel(basis, generators, n):
            groups.setdefault(kv.j, []).append(kv)
        for j, kvs in sorted(groups.items()):
            if len(kvs) < 2:
                continue
            separation.append(_separate_node(
                (n, j), kvs, taus, degeneracy_tol))
    return CompleteSetReport(commutator_residuals=residuals,
                             separation=separation)


def _separate_node(node, kvs, taus, tol):
    basis_mat = np.array([kv.vector for kv in kvs]).T
    dim = len(kvs)
    blocks = [list(range(dim))]
    tuples = [tuple() for _ in range(dim)]
    order = np.arange(dim)
    for theta in sorted(taus):
        t_dag = taus[theta].op
        prod = t_dag.matrix @ t_dag.matrix.getH()
        small = basis_mat.conj().T @ (prod @ basis_mat)
        small = 0.5 * (small + small.conj().T)
        new_blocks = []
        for block in blocks:
            if len(block) == 1:
                new_blocks.append(block)
                continue
            sub = small[np.ix_(block, block)]
            vals, vecs = np.linalg.eigh(sub)
            groups: list[list[int]] = []
            for i, v in enumerate(vals):
                if groups and abs(v - vals[groups[-1][-1]]) <= tol * (1 + abs(v)):
                    groups[-1].append(i)
                else:
                    groups.append([i])
            for g in groups:
                new_blocks.append([block[i] for i in g])
        blocks = new_blocks
        vals_full = np.diag(basis_mat.conj().T @ (prod @ basis_mat)).real
        tuples = [tuples[i] + (round(float(vals_full[i]), 8),)
                  for i in range(dim)]
    separated = all(len(b) == 1 for b in blocks)
    return SeparationNode(node=node, dimension=dim, separated=separated,
                          eigenvalue_tuples=tuples)


# -- unrestricted closure for the s = 1 symmetric family -----------------------------


def s1_full_closure_residuals(generators: Su2Generators,
                              families: LadderFamily, margin: int = 1
                              ) -> dict[str, ResidualReport]:
    """Unrestricted closure of [J^2, p_1] at spin 1, on the whole interior.

    The certified identity is

        [J^2, p_1] = p_0 (j - J_z)(j + J_z + 1) - 2 m_1 (J_z + I),

    derived by coefficient extraction and exact on the full space.  The
    variant with correction term +2 m_1 J_z is also evaluated and recorded;
    it fails off the zero-weight subspace and is kept as a falsified
    alternative in verification reports.
    """
    if generators.s != 1:
        raise ValueError("this closure check is specific to spin 1")
    p0, p1 = families.p_ops[0], families.p_ops[1]
    m1 = families.m_ops[0]
    lhs = commutator(generators.J2, p1)
    jz = generators.Jz
    ident = SparseOperator.identity(families.basis)
    # (j - J_z)(j + J_z + 1) = J^2 - J_z(J_z + 1), all factors commuting.
    fn = generators.J2 - (jz @ jz + jz)
    certified = p0 @ fn - 2.0 * (m1 @ (jz + ident))
    variant = p0 @ fn + 2.0 * (m1 @ jz)
    return {
        "certified": residual(lhs, certified, margin),
        "variant_plus_2mJz": residual(lhs, variant, margin),
        "kernel_form": residual(lhs, p0 @ fn, margin, col_weight=0),
    }


def s1_mutual_commutators(generators: Su2Generators, families: LadderFamily,
                          margin: int = 2) -> dict[str, ResidualReport]:
    """Mutual commutators of the spin-1 symmetric family.

    [p_0, p_0^+] = 4 holds on the full interior, as do the cross relations
    [p_1, p_0^+] = [p_0, p_1^+] = 2(N - N_0).  The diagonal relation
    [p_1, p_1^+] = 2j(j+1) - J_z(2J_z+1) + (N - N_0)(J_z - 2) is certified on
    zero-weight columns (it fails unrestricted, which is recorded).
    """
    if generators.s != 1:
        raise ValueError("these commutators are specific to spin 1")
    basis = families.basis
    p0d, p1d = families.p_ops[0], families.p_ops[1]
    p0, p1 = p0d.adjoint(), p1d.adjoint()
    ident = SparseOperator.identity(basis)
    n_minus_n0 = generators.Ntot - number_op(basis, 0)
    jz = generators.Jz
    two_nn0 = 2.0 * n_minus_n0
    diag_rhs = (2.0 * generators.J2 - (jz @ (2.0 * jz + ident))
                + n_minus_n0 @ (jz - 2.0 * ident))
    return {
        "p0_p0dag": residual(commutator(p0, p0d), 4.0 * ident, margin),
        "p1_p0dag": residual(commutator(p1, p0d), two_nn0, margin),
        "p0_p1dag": residual(commutator(p0, p1d), two_nn0, margin),
        "p1_p1dag_weight0": residual(commutator(p1, p1d), diag_rhs, margin,
                                     col_weight=0),
        "p1_p1dag_unrestricted": residual(commutator(p1, p1d), diag_rhs, margin),
    }


# -- the complete spin-1 walkthrough ---------------------------------------------


@dataclass
class DemoS1Operators:
    """Weyl pair and deformed su(2) generators built from the spin-1 ladders."""
    tau_plus: SparseOperator        # p_0 (j+1) + 2 p_1
    tau_minus: SparseOperator       # p_0 j - 2 p_1
    a_dag: SparseOperator
    a_op: SparseOperator
    l_plus: SparseOperator
    l_minus: SparseOperator
    l_z: SparseOperator
    l_2: SparseOperator


def s1_reference_taus(generators: Su2Generators, families: LadderFamily
                      ) -> tuple[SparseOperator, SparseOperator]:
    """The spin-1 ladder pair in its conventional normalization.

    tau[+1] = p_0 (j + 1) + 2 p_1 and tau[-1] = p_0 j - 2 p_1; these equal
    the sigma-assembled ladders up to one global rational scale per theta.
    """
    if generators.s != 1:
        raise ValueError("reference expressions are specific to spin 1")
    p0, p1 = families.p_ops[0], families.p_ops[1]
    j_plus_1 = generators.function_of_j(lambda j: j + 1.0)
    j_op = generators.j_hat()
    tau_plus = (p0 @ j_plus_1 + 2.0 * p1).with_budget(1)
    tau_minus = (p0 @ j_op - 2.0 * p1).with_budget(1)
    return tau_plus, tau_minus


def expression_match_scale(assembled: SparseOperator,
                           reference: SparseOperator) -> tuple[float, float]:
    """Global scale lambda with reference ~ lambda * assembled, and the residual.

    The scale is the ratio of the first nonzero entries (row-major); the
    returned residual is the relative Frobenius gap after scaling.
    """
    a = assembled.matrix.tocoo()
    order = np.lexsort((a.col, a.row))
    lam = None
    for k in order:
        val = a.data[k]
        if abs(val) > 1e-12:
            lam = complex(reference.matrix[a.row[k], a.col[k]]) / val
            break
    if lam is None:
        raise ValueError("assembled operator is zero; no scale to extract")
    diff = (reference.matrix - lam * assembled.matrix)
    num = math.sqrt(np.sum(np.abs(diff.data) ** 2)) if diff.nnz else 0.0
    den = reference.norm()
    return (float(lam.real) if abs(lam.imag) < 1e-12 else complex(lam),
            num / den if den > 0 else num)


def demo_s1_operators(generators: Su2Generators, families: LadderFamily
                      ) -> DemoS1Operators:
    """Build the Weyl pair (A, A+) and the deformed su(2) triple at spin 1.

    A+ multiplies tau[+1] on the right by
        1/(2 sqrt(j+1)) * 1/sqrt(N + j + 3) * sqrt(2j+3)/sqrt(2j+1),
    and L_+ multiplies tau[-1] on the LEFT by
        1/(2 sqrt(2) sqrt(j+1)) * sqrt(2j+1)/sqrt(2j+3);
    then L_z = [L_+, L_-]/2 and L^2 = L_z^2 + L_z + L_- L_+.  The L_+ factor
    placement is fixed by re-derivation: tau[-1] lowers j by one, and only
    the left placement gives |L_+|^2 = j(n-j+2)/2 on a node, hence the
    advertised L_z and L^2 spectra (as a right factor the same expression is
    off by one unit of j and fails them).  The scalar factors are evaluated
    on the commuting pair (N, j); a pole or negative radicand raises
    SpectralFunctionError naming the sector.
    """
    tau_plus, tau_minus = s1_reference_taus(generators, families)

    def a_factor(n: int, j: float) -> float:
        return (1.0 / (2.0 * math.sqrt(j + 1.0))
                / math.sqrt(n + j + 3.0)
                * math.sqrt(2.0 * j + 3.0) / math.sqrt(2.0 * j + 1.0))

    def l_factor(n: int, j: float) -> float:
        return (1.0 / (2.0 * math.sqrt(2.0) * math.sqrt(j + 1.0))
                * math.sqrt(2.0 * j + 1.0) / math.sqrt(2.0 * j + 3.0))

    a_dag = (tau_plus @ generators.function_of_nj(a_factor)).with_budget(1)
    l_plus = (generators.function_of_nj(l_factor) @ tau_minus).with_budget(1)
    a_op = a_dag.adjoint()
    l_minus = l_plus.adjoint()
    l_z = (0.5 * commutator(l_plus, l_minus)).hermitized()
    l_2 = (l_z @ l_z + l_z + l_minus @ l_plus).hermitized()
    return DemoS1Operators(tau_plus=tau_plus, tau_minus=tau_minus,
                           a_dag=a_dag, a_op=a_op, l_plus=l_plus,
                           l_minus=l_minus, l_z=l_z, l_2=l_2)


@dataclass(frozen=True)
class CanonicalVector:
    """Constructed basis vector with its (n, j, j_z) labels."""
    n: int
    j: int
    jz: int
    vector: np.ndarray = field(repr=False)


class CanonicalBasisError(ValueError):
    """A canonical-basis chain produced the zero vector."""


def canonical_basis_s1(basis: SectorBasis, generators: Su2Generators,
                       families: LadderFamily, n_limit: int
                       ) -> list[CanonicalVector]:
    """Spin-1 canonical basis from joint ladder action on the vacuum.

    |n, j, j_z> is the normalized J_+/-^|j_z| tau[-1]^((n-j)/2)
    tau[+1]^((n+j)/2) |vacuum>, for n <= n_limit, 0 <= j <= n with n = j
    (mod 2) and |j_z| <= j.  The phase makes the first nonzero coordinate
    real positive.  A zero vector before normalization is a hard error.
    """
    if generators.s != 1:
        raise ValueError("the joint-action formula is specific to spin 1")
    if n_limit > basis.n_max:
        raise ValueError(f"n_limit={n_limit} exceeds n_max={basis.n_max}")
    tau_plus, tau_minus = s1_reference_taus(generators, families)
    vacuum = basis.unit_vector((0,) * basis.modes)
    out: list[CanonicalVector] = []
    for n in range(0, n_limit + 1):
        for j in range(n % 2, n + 1, 2):
            vec = vacuum
            for _ in range((n + j) // 2):
                vec = tau_plus.apply(vec)
            for _ in range((n - j) // 2):
                vec = tau_minus.apply(vec)
            kernel_vec = vec
            for jz in range(-j, j + 1):
                vec = kernel_vec
                ladder = generators.Jplus if jz > 0 else generators.Jminus
                for _ in range(abs(jz)):
                    vec = ladder.apply(vec)
                norm = np.linalg.norm(vec)
                if norm < 1e-12:
                    raise CanonicalBasisError(
                        f"canonical chain for (n={n}, j={j}, j_z={jz}) "
                        "produced the zero vector")
                vec = vec / norm
                out.append(CanonicalVector(n=n, j=j, jz=jz,
                                           vector=_phase_fix(vec)))
    return out


def _phase_fix(vec: np.ndarray) -> np.ndarray:
    amax = np.max(np.abs(vec))
    nz = np.flatnonzero(np.abs(vec) > 1e-8 * amax)
    lead = vec[nz[0]]
    return vec / (lead / abs(lead))


# -- alternative single-mode ladder forms -------------------------------------------


@dataclass
class TauBarReport:
    """Certificates for the ladders built from the zero-mode alone."""
    double_commutator: ResidualReport
    rlo_plus: ResidualReport
    rlo_minus: ResidualReport
    llo_plus: ResidualReport
    llo_minus: ResidualReport
    node_ratios: list[tuple[int, int, float, float]]  # (n, j, measured, expected)

    def max_ratio_deviation(self) -> float:
        return max((abs(m - e) for _, _, m, e in self.node_ratios), default=0.0)


def tau_bar_forms(basis: SectorBasis, generators: Su2Generators,
                  families: LadderFamily, margin: int = 1) -> TauBarReport:
    """Single-mode ladder forms tbar[+/-1] = +/-[j, a_0^dagger] + a_0^dagger.

    Verifies on zero-weight interior columns that each is a ladder operator
    of J^2 with the same right functions as tau[+/-1] (they differ from the
    reference ladders by the right factor 1/(2j+1), confirmed per node), and
    that the double commutator [j, [j, a_0^dagger]] returns a_0^dagger.
    """
    if generators.s != 1:
        raise ValueError("single-mode ladder forms are specific to spin 1")
    jh = generators.j_hat()
    ad0 = creation_op(basis, 0)
    bracket = commutator(jh, ad0)
    tbar_plus = (bracket + ad0).with_budget(1)
    tbar_minus = (-1.0 * bracket + ad0).with_budget(1)

    double = residual(commutator(jh, bracket), ad0, margin, col_weight=0)
    f_plus = generators.function_of_j(lambda j: 2.0 * (j + 1.0))
    f_minus = generators.function_of_j(lambda j: -2.0 * j)
    rlo_plus = check_rlo(generators.J2, tbar_plus, f_plus, margin, col_weight=0)
    rlo_minus = check_rlo(generators.J2, tbar_minus, f_minus, margin, col_weight=0)
    # Conjugate (left-ladder) relations for the lowering partners.
    llo_plus = check_llo(generators.J2, tbar_plus.adjoint(), f_plus, margin)
    llo_minus = check_llo(generators.J2, tbar_minus.adjoint(), f_minus, margin)

    tau_plus, tau_minus = s1_reference_taus(generators, families)
    ratios: list[tuple[int, int, float, float]] = []
    for n in range(0, basis.n_max):
        for kv in jz_kernel(basis, generators, n):
            for tbar, tau in ((tbar_plus, tau_plus), (tbar_minus, tau_minus)):
                ref = tau.apply(kv.vector)
                img = tbar.apply(kv.vector)
                ref_norm = np.linalg.norm(ref)
                if ref_norm < 1e-10:
                    continue
                measured = float(np.vdot(ref, img).real) / ref_norm ** 2
                ratios.append((n, kv.j, measured, 1.0 / (2.0 * kv.j + 1.0)))
    return TauBarReport(double_commutator=double, rlo_plus=rlo_plus,
                        rlo_minus=rlo_minus, llo_plus=llo_plus,
                        llo_minus=llo_minus, node_ratios=ratios)


# -- spin-1 inverse and label-commutator expressions --------------------------------


def s1_inverse_expressions(generators: Su2Generators, families: LadderFamily,
                           margin: int = 1) -> dict[str, ResidualReport]:
    """Recover the family operators from the ladder pair (zero-weight columns).

    p_0 = (tau[+1] + tau[-1]) / (2j+1) and
    p_1 = ((tau[+1] - tau[-1]) - (tau[+1] + tau[-1])/(2j+1)) / 4,
    plus the label-commutator forms
    [j, p_0] = (p_0 + 4 p_1)/(2j+1) and [j, p_1] = (p_0 J^2 - p_1)/(2j+1).
    """
    if generators.s != 1:
        raise ValueError("inverse expressions are specific to spin 1")
    tau_plus, tau_minus = s1_reference_taus(generators, families)
    p0, p1 = families.p_ops[0], families.p_ops[1]
    inv = generators.function_of_j(lambda j: 1.0 / (2.0 * j + 1.0))
    jh = generators.j_hat()
    p0_expr = (tau_plus + tau_minus) @ inv
    p1_expr = 0.25 * ((tau_plus - tau_minus) - (tau_plus + tau_minus) @ inv)
    comm_p0 = commutator(jh, p0)
    comm_p1 = commutator(jh, p1)
    rhs_p0 = (p0 + 4.0 * p1) @ inv
    rhs_p1 = (p0 @ generators.J2 - p1) @ inv
    return {
        "p0_from_taus": residual(p0_expr, p0, margin, col_weight=0),
        "p1_from_taus": residual(p1_expr, p1, margin, col_weight=0),
        "label_comm_p0": residual(comm_p0, rhs_p0, margin, col_weight=0),
        "label_comm_p1": residual(comm_p1, rhs_p1, margin, col_weight=0),
    }


def s1_tau_bracket_ladder(generators: Su2Generators, families: LadderFamily,
                          margin: int = 2) -> dict[str, ResidualReport]:
    """Commutator of the ladder pair as a ladder of the label operator.

    The bracket of the raising ladder with the lowering partner of tau[-1]
    shifts j by two: [j, [tau[+1], tau[-1]-lowering]] = 2 [tau[+1], ...].
    The bracket of the two raising ladders instead commutes with j (their
    shifts +1 and -1 cancel, as the Jacobi identity forces); that variant is
    evaluated and recorded as well.
    """
    tau_plus, tau_minus = s1_reference_taus(generators, families)
    jh = generators.j_hat()
    mixed = commutator(tau_plus, tau_minus.adjoint())
    both_raising = commutator(tau_plus, tau_minus)
    shift_gap = commutator(jh, mixed) - 2.0 * mixed
    return {
        "mixed_pair_shift2": zero_residual(
            shift_gap, margin, col_weight=0,
            scale=max(jh.norm() * mixed.norm(), 1.0)),
        "raising_pair_commutes": zero_residual(
            commutator(jh, both_raising), margin, col_weight=0,
            scale=max(both_raising.norm(), 1.0)),
    }
