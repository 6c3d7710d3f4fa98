"""Shared fixtures: expensive per-(spin, n_max) contexts are built once."""

from dataclasses import dataclass
from functools import lru_cache

import pytest

from su2ladders.casimir import LadderFamily, build_families, build_taus
from su2ladders.fock import SectorBasis, enumerate_sector
from su2ladders.schwinger import Su2Generators, su2_generators


@dataclass
class Context:
    basis: SectorBasis
    gens: Su2Generators
    families: LadderFamily
    _taus: dict | None = None

    @property
    def taus(self):
        if self._taus is None:
            self._taus = build_taus(self.families, self.gens, certify=False)
        return self._taus


@lru_cache(maxsize=None)
def _context(spin: int, n_max: int) -> Context:
    basis = enumerate_sector(spin, n_max)
    gens = su2_generators(basis)
    families = build_families(basis, gens)
    return Context(basis=basis, gens=gens, families=families)


@pytest.fixture
def ctx():
    """Factory: ctx(spin, n_max) -> cached Context."""
    return _context
