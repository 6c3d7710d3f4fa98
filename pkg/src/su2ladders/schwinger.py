"""Bosonic realization of su(2): generator construction and spectral calculus.

The map X = (x_ij) -> sum_ij x_ij a_i^dagger a_j sends matrices on the 2s+1
mode space to number-conserving bilinear operators and preserves commutators.
Applied to the spin-s generator matrices it yields J_z, J_+, J_-, from which
the Casimir J^2 and the label operator j (with J^2 = j(j+1)) are built.
All of these conserve both total particle number and J_z weight, so they are
block diagonal over (n, weight) sectors; functions of them are evaluated
sector by sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import sparse

from .fock import SectorBasis
from .operators import BasisMismatchError, SparseOperator, creation_op


class NonHermitianError(ValueError):
    """Spectral calculus requires a hermitian operator."""


class SectorStructureError(ValueError):
    """Operator is not block diagonal over (n, weight) sectors."""


class SpectralFunctionError(ValueError):
    """The scalar function is undefined at an eigenvalue of some sector."""

    def __init__(self, sector, eigenvalue, message=""):
        self.sector = sector
        self.eigenvalue = eigenvalue
        super().__init__(
            f"scalar function undefined at eigenvalue {eigenvalue!r} "
            f"in sector (n, weight)={sector}" + (f": {message}" if message else ""))


class SpectrumSnapError(ValueError):
    """An eigenvalue of the label operator is not close to an admissible integer."""


def jordan_schwinger(basis: SectorBasis, x: np.ndarray) -> SparseOperator:
    """Image of a (2s+1) x (2s+1) matrix under the bosonic bilinear map.

    Returns sum_ij x_ij a_i^dagger a_j with modes ordered mu = -s..s.  The
    image conserves total particle number, so it is exact on the whole
    truncated space (budget 0).
    """
    x = np.asarray(x, dtype=complex)
    m = basis.modes
    if x.shape != (m, m):
        raise ValueError(f"matrix shape {x.shape} does not match {m} modes")
    adag = [creation_op(basis, mu) for mu in range(-basis.spin, basis.spin + 1)]
    a = [op.adjoint() for op in adag]
    dim = len(basis)
    acc = sparse.csr_matrix((dim, dim), dtype=complex)
    for i in range(m):
        for j in range(m):
            if x[i, j] != 0:
                acc = acc + x[i, j] * (adag[i].matrix @ a[j].matrix)
    acc = acc.tocsr()
    acc.eliminate_zeros()
    return SparseOperator(basis, acc, 0)


def _j_from_casimir(value: float) -> float:
    # Inverse of j(j+1); tiny negative eigenvalues from roundoff are tolerated.
    radicand = 1.0 + 4.0 * value
    if radicand < 0:
        radicand = 0.0
    return 0.5 * (math.sqrt(radicand) - 1.0)


@dataclass
class SpectralDecomposition:
    """Per-(n, weight)-sector eigendecomposition of a hermitian operator."""
    basis: SectorBasis
    sectors: list  # list of (key, indices, eigenvalues, eigenvectors)

    @staticmethod
    def of(op: SparseOperator, hermitian_tol: float = 1e-10
           ) -> "SpectralDecomposition":
        basis = op.basis
        herm_gap = (op.matrix - op.matrix.getH()).tocsr()
        scale = op.norm() + 1.0
        gap = math.sqrt(np.sum(np.abs(herm_gap.data) ** 2)) if herm_gap.nnz else 0.0
        if gap > hermitian_tol * scale:
            raise NonHermitianError(
                f"operator deviates from hermiticity by {gap:.3e}")

        rows, cols = op.matrix.nonzero()
        if len(rows) and (np.any(basis.totals[rows] != basis.totals[cols])
                          or np.any(basis.weights[rows] != basis.weights[cols])):
            bad = np.flatnonzero((basis.totals[rows] != basis.totals[cols])
                                 | (basis.weights[rows] != basis.weights[cols]))[0]
            raise SectorStructureError(
                "operator couples distinct (n, weight) sectors, e.g. states "
                f"{basis.states[rows[bad]]} and {basis.states[cols[bad]]}")

        keys = {}
        for i in range(len(basis)):
            keys.setdefault((int(basis.totals[i]), int(basis.weights[i])), []).append(i)
        sectors = []
        for key in sorted(keys):
            idx = np.array(keys[key], dtype=np.int64)
            block = op.matrix[idx][:, idx].toarray()
            vals, vecs = np.linalg.eigh(block)
            sectors.append((key, idx, vals, vecs))
        return SpectralDecomposition(basis, sectors)

    def apply(self, f: Callable[[float], float]) -> SparseOperator:
        """Apply a scalar function to each sector's eigenvalues and reassemble."""
        return self.apply_keyed(lambda key, x: f(x))

    def apply_keyed(self, f: Callable[[tuple, float], float]) -> SparseOperator:
        """Like ``apply`` but the function also receives the (n, weight) key."""
        dim = len(self.basis)
        acc = sparse.lil_matrix((dim, dim), dtype=complex)
        for key, idx, vals, vecs in self.sectors:
            fvals = np.empty(len(vals), dtype=complex)
            for k, lam in enumerate(vals):
                try:
                    y = f(key, float(lam))
                except ZeroDivisionError as exc:
                    raise SpectralFunctionError(key, float(lam), str(exc)) from exc
                except (ValueError, ArithmeticError) as exc:
                    raise SpectralFunctionError(key, float(lam), str(exc)) from exc
                if y is None or not np.isfinite(y):
                    raise SpectralFunctionError(key, float(lam),
                                                f"non-finite value {y!r}")
                fvals[k] = y
            block = (vecs * fvals) @ vecs.conj().T
            acc[np.ix_(idx, idx)] = block
        out = acc.tocsr()
        out.eliminate_zeros()
        return SparseOperator(self.basis, out, 0).hermitized()

    def reassemble(self) -> SparseOperator:
        return self.apply(lambda x: x)

    def eigenvalues_by_sector(self) -> dict:
        return {key: vals.copy() for key, idx, vals, vecs in self.sectors}


def spectral_function(op: SparseOperator, f: Callable[[float], float]
                      ) -> SparseOperator:
    """Sector-wise spectral image f(H) of a hermitian block-diagonal operator."""
    return SpectralDecomposition.of(op).apply(f)


class Su2Generators:
    """su(2) generators on a truncated Fock space, plus spectral helpers.

    All five operators conserve total particle number (budget 0).  The
    decomposition of J^2 is computed once and reused for every function of
    the label operator j.
    """

    def __init__(self, basis: SectorBasis):
        if basis.spin < 1:
            raise ValueError("su(2) construction needs integer spin >= 1 "
                             f"(got {basis.spin}); s = 0 is degenerate")
        self.basis = basis
        self.s = basis.spin
        m = basis.modes
        xp = np.zeros((m, m))
        for mu in range(-self.s, self.s):
            xp[mu + self.s + 1, mu + self.s] = math.sqrt(
                (self.s + mu + 1) * (self.s - mu))
        # The diagonal generators are images of diag(mu) and the identity;
        # building them from the exact integer weight/total arrays (instead
        # of sums of a+a products) keeps their entries exact, which makes
        # the centrality commutators vanish identically.
        self.Jz = SparseOperator.diagonal(basis, basis.weights.astype(float))
        self.Jplus = jordan_schwinger(basis, xp)
        self.Jminus = self.Jplus.adjoint()
        j2 = (self.Jz @ self.Jz
              + 0.5 * (self.Jplus @ self.Jminus + self.Jminus @ self.Jplus))
        self.J2 = j2.hermitized().with_budget(0)
        self.Ntot = SparseOperator.diagonal(basis, basis.totals.astype(float))
        self._j2_decomp: Optional[SpectralDecomposition] = None
        self._j_hat: Optional[SparseOperator] = None

    def j2_decomposition(self) -> SpectralDecomposition:
        if self._j2_decomp is None:
            self._j2_decomp = SpectralDecomposition.of(self.J2)
        return self._j2_decomp

    def j_values_by_sector(self) -> dict:
        return {key: np.array([_j_from_casimir(float(v)) for v in vals])
                for key, idx, vals, vecs in self.j2_decomposition().sectors}

    def j_hat(self, snap_tol: float = 1e-6) -> SparseOperator:
        """The label operator: spectral image of (sqrt(1 + 4 J^2) - 1)/2.

        Every eigenvalue is checked to lie within ``snap_tol`` of an integer
        in [0, n*s] for its sector; a violation signals truncation damage or
        a wrong spin and raises SpectrumSnapError.
        """
        if self._j_hat is None:
            decomp = self.j2_decomposition()
            for key, idx, vals, vecs in decomp.sectors:
                n = key[0]
                for lam in vals:
                    j = _j_from_casimir(float(lam))
                    r = round(j)
                    if abs(j - r) > snap_tol or not 0 <= r <= n * self.s:
                        raise SpectrumSnapError(
                            f"j eigenvalue {j!r} in sector (n, weight)={key} is "
                            f"not within {snap_tol} of an integer in [0, {n * self.s}]")
            self._j_hat = decomp.apply(_j_from_casimir)
        return self._j_hat

    def function_of_j(self, f: Callable[[float], float]) -> SparseOperator:
        """Spectral image of f(j), evaluated through the J^2 decomposition."""
        return self.j2_decomposition().apply(lambda lam: f(_j_from_casimir(lam)))

    def function_of_nj(self, f: Callable[[int, float], float]) -> SparseOperator:
        """Spectral image of f(n, j) for the commuting pair (N, j)."""
        return self.j2_decomposition().apply_keyed(
            lambda key, lam: f(key[0], _j_from_casimir(lam)))


def su2_generators(basis: SectorBasis) -> Su2Generators:
    """Construct J_z, J_+/-, J^2 and N for integer spin s >= 1."""
    return Su2Generators(basis)


def j_hat(generators: Su2Generators, snap_tol: float = 1e-6) -> SparseOperator:
    """Label operator of the Casimir; see ``Su2Generators.j_hat``."""
    return generators.j_hat(snap_tol=snap_tol)


@dataclass(frozen=True)
class KernelVector:
    """Zero-weight eigenvector of J^2 with integer label j in the n-particle sector."""
    n: int
    j: int
    vector: np.ndarray = field(repr=False)


def _phase_fixed(vec: np.ndarray) -> np.ndarray:
    amax = np.max(np.abs(vec))
    if amax == 0:
        return vec
    nz = np.flatnonzero(np.abs(vec) > 1e-8 * amax)
    lead = vec[nz[0]]
    phase = lead / abs(lead)
    return vec / phase


def jz_kernel(basis: SectorBasis, generators: Su2Generators, n: int,
              snap_tol: float = 1e-6) -> list[KernelVector]:
    """Orthonormal basis of the weight-0, n-particle subspace, labeled by j.

    Vectors are obtained by diagonalizing J^2 on the sector, so J_z is zero
    on each by construction.  Ordering is deterministic: ascending j label,
    then lexicographic on the (phase-fixed) coordinate tuple.  The list may
    be empty.
    """
    if basis is not generators.basis and basis != generators.basis:
        raise BasisMismatchError("basis does not match the generators")
    if n > basis.n_max:
        raise ValueError(f"n={n} exceeds n_max={basis.n_max}")
    idx = np.flatnonzero((basis.totals == n) & (basis.weights == 0))
    if len(idx) == 0:
        return []
    block = generators.J2.matrix[idx][:, idx].toarray()
    vals, vecs = np.linalg.eigh(block)
    out = []
    for k, lam in enumerate(vals):
        j = _j_from_casimir(float(lam))
        r = round(j)
        if abs(j - r) > snap_tol:
            raise SpectrumSnapError(
                f"kernel eigenvalue {lam} (j={j}) in sector n={n} is not within "
                f"{snap_tol} of an integer label")
        full = np.zeros(len(basis), dtype=complex)
        full[idx] = vecs[:, k]
        out.append(KernelVector(n=n, j=int(r), vector=_phase_fixed(full)))
    out.sort(key=lambda kv: (kv.j, tuple(np.round(kv.vector.real, 10))
                             + tuple(np.round(kv.vector.imag, 10))))
    return out


def kernel_nodes(basis: SectorBasis, generators: Su2Generators, n: int
                 ) -> dict[int, list[KernelVector]]:
    """Kernel vectors of the n-particle sector grouped by j label."""
    nodes: dict[int, list[KernelVector]] = {}
    for kv in jz_kernel(basis, generators, n):
        nodes.setdefault(kv.j, []).append(kv)
    return nodes
