"""Spin-spin correlation functions S(r) = <S_i . S_{i+r}> on the ring."""

from __future__ import annotations

import math

import numpy as np

from .basis import spin_dot_kernel
from .coupled import validate_label

#: Norm deviation tolerated on input states.
NORM_TOL = 1e-8


def n_sites_of(state: np.ndarray) -> int:
    dim = len(state)
    n = dim.bit_length() - 1
    if n < 2 or dim != 1 << n:
        raise ValueError(f"state length {dim} is not 2^N with N >= 2")
    return n


def check_normalized(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=float)
    if state.ndim != 1:
        raise ValueError("state must be a 1-d amplitude vector")
    nrm = float(np.linalg.norm(state))
    if abs(nrm - 1) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm = {nrm:.12g})")
    return state


def bond_expectation(state: np.ndarray, i: int, j: int) -> float:
    """<psi| S_i . S_j |psi> for a real full-space vector."""
    n = n_sites_of(state)
    bits = np.arange(len(state))
    diag, anti, flipped = spin_dot_kernel(bits, i, j, n)
    return float(np.dot(diag, state * state) + 0.5 * np.dot(state[anti], state[flipped]))


def corr_bruteforce(state, r: int) -> float:
    """Translation-averaged (1/N) sum_i <S_i . S_{i+r}> (units of hbar^2)."""
    state = check_normalized(state)
    n = n_sites_of(state)
    if not 0 <= r <= n // 2:
        raise ValueError(f"distance r={r} outside [0, {n // 2}]")
    if r == 0:
        return 0.75
    return sum(bond_expectation(state, i + 1, (i + r) % n + 1) for i in range(n)) / n


def correlation_profile(state) -> dict[int, float]:
    state = check_normalized(state)
    n = n_sites_of(state)
    return {r: corr_bruteforce(state, r) for r in range(n // 2 + 1)}


def manifold_correlations(vectors: np.ndarray) -> dict[int, float]:
    """S(r) averaged over an orthonormal set of degenerate states (columns)."""
    profiles = [correlation_profile(vectors[:, k]) for k in range(vectors.shape[1])]
    return {r: float(np.mean([p[r] for p in profiles])) for r in profiles[0]}


def _ss(s: float) -> float:
    return s * (s + 1)


def corr_closed_form(label, r: int) -> float:
    """S(r) of a four-site coupled eigenstate, r = 0, 1, 2.

    S(1) = [S_T(S_T+1) - s13(s13+1) - s24(s24+1)] / 8,
    S(2) = [s13(s13+1) + s24(s24+1) - 3] / 4.
    """
    S, _, a, b = validate_label(label)
    if r == 0:
        return 0.75
    if r == 1:
        return (_ss(S) - _ss(a) - _ss(b)) / 8
    if r == 2:
        return (_ss(a) + _ss(b) - 3) / 4
    raise ValueError(f"distance r={r} outside [0, 2]")


def corr_as_printed(label, r: int) -> float:
    """The same quantities with the single-spin s(s+1) in place of
    S_T(S_T+1) for r = 1 and s24(s24-1) in place of s24(s24+1) for r = 2.

    Kept only so ``verify`` can show that these variants fail the
    brute-force check.
    """
    S, _, a, b = validate_label(label)
    s = 0.5
    if r == 0:
        return _ss(s)
    if r == 1:
        return (_ss(s) - _ss(a) - _ss(b)) / 8
    if r == 2:
        return (_ss(a) + b * (b - 1) - 4 * _ss(s)) / 4
    raise ValueError(f"distance r={r} outside [0, 2]")


def energy_from_correlations(profile: dict[int, float], J: float, J2: float) -> float:
    """E = N [J S(1) + J2 S(2)], valid for the four-site ring's double-counted J2 bonds too."""
    n = 2 * max(profile)
    return n * (J * profile[1] + J2 * profile[2])


def spin_from_correlations(profile: dict[int, float], n_sites: int) -> float:
    """<S_T^2> from the pair correlations of a translation-invariant state."""
    total = 0.0
    for d in range(n_sites):
        r = min(d, n_sites - d)
        total += profile[r]
    return n_sites * total


def spin_quantum_number(s_squared: float) -> float:
    return (-1 + math.sqrt(1 + 4 * max(s_squared, 0.0))) / 2
