"""Dense Hamiltonian of the periodic J-J2 Heisenberg ring."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, TextIO

import numpy as np

from .basis import MAX_SITES, SzSector, check_capacity, spin_dot_kernel


@dataclass(frozen=True)
class RingCouplings:
    n_sites: int
    J: float
    J2: float

    def __post_init__(self):
        if self.n_sites < 4 or self.n_sites % 2:
            raise ValueError(f"n_sites must be even and >= 4, got {self.n_sites}")
        if not (np.isfinite(self.J) and np.isfinite(self.J2)):
            raise ValueError("couplings must be finite")
        if self.J2 < 0:
            raise ValueError(f"J2 must be >= 0, got {self.J2}")

    @classmethod
    def from_alpha(cls, n_sites: int, alpha: float, J_sign: Optional[int] = None, J_abs: float = 1.0):
        """Couplings with J2 = |alpha| |J| and sign(J) = sign(alpha).

        ``J_sign`` is only needed at alpha = 0; elsewhere it must agree
        with the sign of alpha.
        """
        if alpha != 0:
            sign = 1 if alpha > 0 else -1
            if J_sign is not None and J_sign != sign:
                raise ValueError(
                    f"alpha={alpha} has the opposite sign to J; J2 >= 0 forces sign(alpha) = sign(J)"
                )
        else:
            sign = 1 if J_sign is None else J_sign
        if sign not in (1, -1):
            raise ValueError(f"J_sign must be +1 or -1, got {J_sign}")
        return cls(n_sites, sign * J_abs, abs(alpha) * J_abs)

    @property
    def alpha(self) -> float:
        return self.J2 / self.J if self.J else float("inf")

    def bonds(self):
        """``(i, j, coupling)`` for every term, 1-based sites.

        Both sums run over i = 1..N, so on four sites each second-neighbor
        pair appears twice.
        """
        N = self.n_sites
        for r, c in ((1, self.J), (2, self.J2)):
            for i in range(N):
                yield i + 1, (i + r) % N + 1, c


@dataclass(frozen=True)
class SymMatrix:
    matrix: np.ndarray
    states: np.ndarray
    couplings: Optional[RingCouplings] = None
    two_M: Optional[int] = None

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _assemble(bond_list, states: np.ndarray, n_sites: int) -> np.ndarray:
    dim = len(states)
    h = np.zeros((dim, dim))
    rows = np.arange(dim)
    for i, j, c in bond_list:
        if c == 0:
            continue
        diag, anti, flipped = spin_dot_kernel(states, i, j, n_sites)
        h[rows, rows] += c * diag
        # exchanged kets stay in the same sector and the list is sorted
        cols = np.searchsorted(states, flipped)
        h[cols, rows[anti]] += 0.5 * c
    return h


def build_dense(c: RingCouplings, sector: Optional[SzSector] = None, max_sites: int = MAX_SITES) -> SymMatrix:
    """H = J sum_i S_i.S_{i+1} + J2 sum_i S_i.S_{i+2} on the full space or one sector."""
    check_capacity(c.n_sites, max_sites)
    if sector is None:
        states = np.arange(1 << c.n_sites, dtype=np.int64)
        two_M = None
    else:
        if sector.n_sites != c.n_sites:
            raise ValueError(f"sector belongs to {sector.n_sites} sites, couplings to {c.n_sites}")
        states, two_M = sector.states, sector.two_M
    return SymMatrix(_assemble(c.bonds(), states, c.n_sites), states, c, two_M)


def bond_operator(n_sites: int, pairs, states: Optional[np.ndarray] = None) -> np.ndarray:
    """Sum of S_i.S_j over ``pairs`` (1-based), on ``states`` or the full space."""
    if states is None:
        states = np.arange(1 << n_sites, dtype=np.int64)
    return _assemble(((i, j, 1.0) for i, j in pairs), states, n_sites)


def neighbor_sum(n_sites: int, r: int, states: Optional[np.ndarray] = None) -> np.ndarray:
    """K_r = sum_{i=1..N} S_i.S_{i+r}; K_0 is (3/4) N times the identity."""
    dim = (1 << n_sites) if states is None else len(states)
    if r % n_sites == 0:
        return 0.75 * n_sites * np.eye(dim)
    return bond_operator(n_sites, [(i + 1, (i + r) % n_sites + 1) for i in range(n_sites)], states)


def total_spin_squared(n_sites: int, states: Optional[np.ndarray] = None) -> np.ndarray:
    """S_T^2 = sum_i S_i^2 + 2 sum_{i<j} S_i.S_j."""
    dim = (1 << n_sites) if states is None else len(states)
    pairs = [(i, j) for i in range(1, n_sites + 1) for j in range(i + 1, n_sites + 1)]
    return 0.75 * n_sites * np.eye(dim) + 2 * bond_operator(n_sites, pairs, states)


def total_sz(n_sites: int, states: Optional[np.ndarray] = None) -> np.ndarray:
    if states is None:
        states = np.arange(1 << n_sites, dtype=np.int64)
    ups = np.array([bin(int(b)).count("1") for b in states])
    return np.diag(ups - n_sites / 2)


def export_matrix(m: SymMatrix, fh: TextIO) -> None:
    """Row-major text dump with header ``dim J J2 two_M`` (two_M = ``full`` when unrestricted)."""
    J = m.couplings.J if m.couplings else float("nan")
    J2 = m.couplings.J2 if m.couplings else float("nan")
    two_M = "full" if m.two_M is None else str(m.two_M)
    fh.write(f"{m.dimension} {J:.17g} {J2:.17g} {two_M}\n")
    for row in m.matrix:
        fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


# --- six sites at alpha = 1 ------------------------------------------------

def _couple(a: int, b: int) -> range:
    return range(abs(a - b), a + b + 1)


def six_site_quantum_numbers() -> list[tuple[int, int, int, int]]:
    """Valid ``(S_T, s14, s25, s36)``, one entry per distinct combination.

    s25 and s36 couple to an intermediate spin which then couples to s14;
    the energy does not depend on the intermediate value.
    """
    found = set()
    for s14, s25, s36 in product((0, 1), repeat=3):
        for mid in _couple(s25, s36):
            for S in _couple(mid, s14):
                found.add((S, s14, s25, s36))
    return sorted(found)


def six_site_energy_alpha1(S_T: int, s14: int, s25: int, s36: int, J: float) -> float:
    """Six-site ring energy at J2 = J: (J/2)[S_T(S_T+1) - sum of s(s+1) over the three pairs]."""
    if (S_T, s14, s25, s36) not in six_site_quantum_numbers():
        raise ValueError(f"incompatible quantum numbers S_T={S_T}, s=({s14}, {s25}, {s36})")
    ss = lambda s: s * (s + 1)
    return 0.5 * J * (ss(S_T) - ss(s14) - ss(s25) - ss(s36))

