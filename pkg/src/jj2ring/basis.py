"""Product basis of N spin-1/2 sites and its Sz-sector decomposition.

A basis ket |m_1 ... m_N> is stored as an integer bit pattern.  Site 1 is
the least-significant bit; a set bit means spin up.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError

MAX_SITES = 14


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class ProductState:
    bits: int
    n_sites: int

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        if not 0 <= self.bits < (1 << self.n_sites):
            raise ValueError(f"bits={self.bits} out of range for {self.n_sites} sites")

    @property
    def two_M(self) -> int:
        return 2 * popcount(self.bits) - self.n_sites

    @property
    def magnetization(self) -> float:
        return self.two_M / 2

    def spin(self, site: int) -> int:
        """+1 for up, -1 for down at 1-based ``site``."""
        return 1 if (self.bits >> (site - 1)) & 1 else -1

    def flipped(self) -> "ProductState":
        return ProductState(self.bits ^ ((1 << self.n_sites) - 1), self.n_sites)

    @classmethod
    def from_arrows(cls, arrows: str) -> "ProductState":
        """Parse ``"udud"`` or ``"↑↓↑↓"``; the first character is site 1."""
        bits = 0
        for k, ch in enumerate(arrows):
            if ch in "u↑+":
                bits |= 1 << k
            elif ch not in "d↓-":
                raise ValueError(f"unrecognized spin symbol {ch!r}")
        return cls(bits, len(arrows))

    def arrows(self) -> str:
        return "".join("↑" if self.spin(i) > 0 else "↓" for i in range(1, self.n_sites + 1))


@dataclass(frozen=True)
class SzSector:
    n_sites: int
    two_M: int
    states: np.ndarray  # ascending bit patterns

    def __len__(self) -> int:
        return len(self.states)

    def index(self, bits) -> np.ndarray:
        """Positions of ``bits`` (scalar or array) within ``states``."""
        idx = np.searchsorted(self.states, bits)
        return idx


def check_capacity(n_sites: int, max_sites: int = MAX_SITES) -> None:
    if n_sites < 2 or n_sites > max_sites:
        raise CapacityError(f"n_sites={n_sites} outside supported range [2, {max_sites}]")


def sector_states(n_sites: int, n_up: int) -> np.ndarray:
    if not 0 <= n_up <= n_sites:
        return np.zeros(0, dtype=np.int64)
    states = [sum(1 << k for k in c) for c in combinations(range(n_sites), n_up)]
    return np.array(sorted(states), dtype=np.int64)


def enumerate_sectors(n_sites: int, max_sites: int = MAX_SITES) -> list[SzSector]:
    """All N+1 magnetization sectors, ordered by 2M = -N, -N+2, ..., N."""
    check_capacity(n_sites, max_sites)
    return [
        SzSector(n_sites, 2 * n_up - n_sites, sector_states(n_sites, n_up))
        for n_up in range(n_sites + 1)
    ]


def get_sector(n_sites: int, two_M: int, max_sites: int = MAX_SITES) -> SzSector:
    check_capacity(n_sites, max_sites)
    if (two_M + n_sites) % 2 or abs(two_M) > n_sites:
        raise ValueError(f"two_M={two_M} impossible for {n_sites} sites")
    n_up = (two_M + n_sites) // 2
    return SzSector(n_sites, two_M, sector_states(n_sites, n_up))


def _check_pair(n_sites: int, i: int, j: int) -> None:
    if i == j:
        raise ValueError("spin dot product needs two distinct sites")
    for s in (i, j):
        if not 1 <= s <= n_sites:
            raise ValueError(f"site {s} out of range [1, {n_sites}]")


def apply_spin_dot(state: ProductState, i: int, j: int) -> list[tuple[ProductState, float]]:
    """Action of S_i . S_j (hbar = 1) on a product ket.

    Returns the diagonal term first, then the exchanged ket when the two
    spins are antiparallel.
    """
    _check_pair(state.n_sites, i, j)
    bi = (state.bits >> (i - 1)) & 1
    bj = (state.bits >> (j - 1)) & 1
    if bi == bj:
        return [(state, 0.25)]
    swapped = state.bits ^ (1 << (i - 1)) ^ (1 << (j - 1))
    return [(state, -0.25), (ProductState(swapped, state.n_sites), 0.5)]


def spin_dot_kernel(bits: np.ndarray, i: int, j: int, n_sites: int):
    """Vectorized ``apply_spin_dot`` over an array of kets.

    Returns ``(diag, flip_mask, flipped)``: the diagonal amplitude for every
    input ket, a mask of kets with antiparallel spins at (i, j), and the
    exchanged bit patterns for those kets (amplitude 1/2 each).
    """
    _check_pair(n_sites, i, j)
    bi = (bits >> (i - 1)) & 1
    bj = (bits >> (j - 1)) & 1
    anti = bi != bj
    diag = np.where(anti, -0.25, 0.25)
    flipped = bits[anti] ^ ((1 << (i - 1)) | (1 << (j - 1)))
    return diag, anti, flipped


def spin_flip_permutation(n_sites: int) -> np.ndarray:
    """Index map of the global spin flip on the full 2^N basis."""
    full = (1 << n_sites) - 1
    return np.arange(1 << n_sites) ^ full


def translation_permutation(n_sites: int, shift: int = 1) -> np.ndarray:
    """``perm[b]`` is the pattern of ket ``b`` after moving site k to k+shift."""
    b = np.arange(1 << n_sites)
    out = np.zeros_like(b)
    for k in range(n_sites):
        dest = (k + shift) % n_sites
        out |= ((b >> k) & 1) << dest
    return out
