"""Density matrices, partial traces and von Neumann entropies.

Local basis convention: in a matrix over ``sites = (k_1 < k_2 < ...)``
bit ``b`` of the row index carries the spin of site ``k_{b+1}``, exactly
as in the ring's product basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupled import coupled_to_product
from .errors import NumericalValidityError
from .observables import check_normalized, n_sites_of

TRACE_TOL = 1e-12
CLIP_TOL = 1e-12
NEGATIVE_TOL = 1e-9

#: The three inequivalent four-site bipartitions, keyed by the kept block.
PARTITIONS = {"13": (1, 3), "12": (1, 2), "1": (1,)}


@dataclass(frozen=True)
class DensityMatrix:
    sites: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        if list(sites) != sorted(set(sites)) or not sites:
            raise ValueError(f"sites must be a nonempty ascending set, got {self.sites}")
        object.__setattr__(self, "sites", sites)
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (1 << len(sites),) * 2:
            raise ValueError(f"matrix shape {m.shape} does not match {len(sites)} sites")
        if not np.array_equal(m, m.T):
            if not np.allclose(m, m.T, rtol=0, atol=1e-14):
                raise NumericalValidityError("density matrix is not symmetric")
            m = 0.5 * (m + m.T)
        if abs(np.trace(m) - 1) > TRACE_TOL:
            raise NumericalValidityError(f"density matrix trace {np.trace(m):.15g} != 1")
        object.__setattr__(self, "matrix", m)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def density_from_state(state) -> DensityMatrix:
    """Pure-state projector |psi><psi| over all ring sites."""
    psi = check_normalized(state)
    psi = psi / np.linalg.norm(psi)
    n = n_sites_of(psi)
    return DensityMatrix(tuple(range(1, n + 1)), np.outer(psi, psi))


def _split_indices(n: int, keep_pos: list[int]) -> np.ndarray:
    """``idx[a, t]``: full local index for kept index ``a`` and traced index ``t``."""
    rest = [p for p in range(n) if p not in keep_pos]
    a = np.arange(1 << len(keep_pos))[:, None]
    t = np.arange(1 << len(rest))[None, :]
    idx = np.zeros((a.shape[0], t.shape[1]), dtype=np.int64)
    for b, p in enumerate(keep_pos):
        idx |= ((a >> b) & 1) << p
    for b, p in enumerate(rest):
        idx |= ((t >> b) & 1) << p
    return idx


def _keep_positions(sites: tuple[int, ...], keep) -> tuple[tuple[int, ...], list[int]]:
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep:
        raise ValueError("keep must be nonempty")
    missing = [k for k in keep if k not in sites]
    if missing:
        raise ValueError(f"sites {missing} are not part of {sites}")
    if len(keep) == len(sites):
        raise ValueError("keep must be a proper subset of the sites")
    return keep, [sites.index(k) for k in keep]


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix on ``keep`` (ring site labels)."""
    keep, pos = _keep_positions(rho.sites, keep)
    idx = _split_indices(len(rho.sites), pos)
    reduced = rho.matrix[idx[:, None, :], idx[None, :, :]].sum(axis=2)
    return DensityMatrix(keep, reduced)


def state_matrix(state, keep) -> np.ndarray:
    """Amplitudes arranged as psi[a, t] (kept index, traced index)."""
    psi = check_normalized(state)
    n = n_sites_of(psi)
    _, pos = _keep_positions(tuple(range(1, n + 1)), keep)
    return psi[_split_indices(n, pos)]


def reduced_from_state(state, keep) -> DensityMatrix:
    """Same as ``partial_trace(density_from_state(state), keep)`` without the 2^N x 2^N projector."""
    psi = np.asarray(state, dtype=float)
    psi = psi / np.linalg.norm(check_normalized(psi))
    m = state_matrix(psi, keep)
    return DensityMatrix(tuple(sorted(set(keep))), m @ m.T)


def _entropy_of(weights: np.ndarray) -> float:
    w = weights[weights > 0]
    return float(-np.sum(w * np.log(w))) + 0.0


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-sum lambda ln lambda in nats."""
    lam = np.linalg.eigvalsh(rho.matrix)
    if lam.min() < -NEGATIVE_TOL:
        raise NumericalValidityError(f"negative eigenvalue {lam.min():.3g} in density matrix")
    lam = np.where(lam < CLIP_TOL, 0.0, np.minimum(lam, 1.0))
    return _entropy_of(lam)


def schmidt_entropy(state, keep) -> float:
    """Entanglement entropy from the singular values of psi[a, t]."""
    s = np.linalg.svd(state_matrix(state, keep), compute_uv=False)
    return _entropy_of(s * s)


def is_pure(rho: DensityMatrix, tol: float = 1e-10) -> bool:
    m = rho.matrix
    return bool(np.max(np.abs(m @ m - m)) <= tol)


def entropy_profile(label) -> dict[str, float]:
    """Entropies of a coupled four-site state for the (13), (12) and (1) partitions."""
    psi = coupled_to_product(label)
    return {name: von_neumann_entropy(reduced_from_state(psi, keep)) for name, keep in PARTITIONS.items()}


def ring_partitions(n_sites: int) -> dict[str, tuple[int, ...]]:
    """Generalized partitions: odd sublattice, contiguous half, single site."""
    if n_sites == 4:
        return dict(PARTITIONS)
    half = n_sites // 2
    return {
        "sublattice": tuple(range(1, n_sites + 1, 2)),
        "half": tuple(range(1, half + 1)),
        "1": (1,),
    }


def max_entropy(n_kept: int) -> float:
    return n_kept * math.log(2)
