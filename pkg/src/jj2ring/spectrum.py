"""Eigensolver, degeneracy grouping, alpha sweeps and level-crossing search."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import coupled
from .basis import MAX_SITES, check_capacity, enumerate_sectors
from .errors import NumericalValidityError
from .hamiltonian import RingCouplings, SymMatrix, build_dense, total_spin_squared

#: Coarse scan density for crossings, grid points per unit alpha.
GRID_PER_UNIT_ALPHA = 64
#: Ground subspaces further apart than this (largest principal angle) differ.
IDENTITY_ANGLE = 0.1


@dataclass(frozen=True)
class SymSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_array(m: Union[SymMatrix, np.ndarray]) -> np.ndarray:
    a = m.matrix if isinstance(m, SymMatrix) else np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * scale):
        raise ValueError("matrix is not symmetric")
    return a


def _canonical_signs(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude component of every column made positive
    if vecs.size == 0:
        return vecs
    pivots = np.argmax(np.abs(vecs) > np.max(np.abs(vecs), axis=0) * (1 - 1e-9), axis=0)
    signs = np.sign(vecs[pivots, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1
    return vecs * signs


def jacobi_eigh(a: np.ndarray, rel_tol: float = 1e-12, max_sweeps: int = 100):
    """Cyclic Jacobi rotations; stops when the off-diagonal Frobenius norm
    drops to ``rel_tol * ||a||_F``.  Meant for small matrices."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    target = rel_tol * np.linalg.norm(a)
    for _ in range(max_sweeps):
        if np.linalg.norm(a - np.diag(np.diag(a))) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = float(a[p, q])
                app, aqq = float(a[p, p]), float(a[q, q])
                if abs(apq) <= 1e-30 * (abs(app) + abs(aqq)) or apq == 0.0:
                    continue
                theta = (aqq - app) / (2 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise NumericalValidityError("Jacobi iteration did not converge")
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigh(m: Union[SymMatrix, np.ndarray], method: str = "lapack") -> SymSpectrum:
    """Full spectral decomposition of a real symmetric matrix.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"``
    runs the cyclic Jacobi solver.  Eigenvalues ascend; each eigenvector's
    largest component is positive so repeated calls agree exactly.
    """
    a = _as_array(m)
    if method == "lapack":
        w, v = np.linalg.eigh(a)
    elif method == "jacobi":
        w, v = jacobi_eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SymSpectrum(w, _canonical_signs(v))


def degeneracy_groups(eigenvalues: Sequence[float], tol: float) -> list[tuple[float, int]]:
    """Greedy clustering of an ascending list into ``(mean, multiplicity)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    vals = np.asarray(eigenvalues, dtype=float)
    if np.any(np.diff(vals) < 0):
        raise ValueError("eigenvalues must be in ascending order")
    groups: list[list[float]] = []
    for x in vals:
        if groups and x - groups[-1][0] <= tol:
            groups[-1].append(x)
        else:
            groups.append([x])
    return [(float(np.mean(g)), len(g)) for g in groups]


def default_tol(max_abs_entry: float) -> float:
    return 1e-9 * max(1.0, max_abs_entry)


# --- single coupling point -------------------------------------------------

@dataclass
class GroundState:
    """Ground manifold at one coupling point.

    ``vectors`` holds the ground states of the zero-magnetization sector
    (every spin multiplet has exactly one member there), in sector
    coordinates over ``states``.
    """

    couplings: RingCouplings
    energy: float
    degeneracy: int
    vectors: np.ndarray
    states: np.ndarray
    spins: tuple[int, ...]
    labels: tuple = ()
    name: str = ""
    sector_spectra: dict = field(default_factory=dict)
    matrix_norm: float = 0.0

    def full_vectors(self) -> np.ndarray:
        """Ground vectors embedded in the full 2^N product space."""
        out = np.zeros((1 << self.couplings.n_sites, self.vectors.shape[1]))
        out[self.states] = self.vectors
        return out


def analyze_point(c: RingCouplings, tol: Optional[float] = None, max_sites: int = MAX_SITES) -> GroundState:
    zero = 0 if c.n_sites % 2 == 0 else 1
    spectra = {}
    norm = 0.0
    vecs = states = None
    for sec in enumerate_sectors(c.n_sites, max_sites):
        h = build_dense(c, sec, max_sites)
        norm = max(norm, float(np.max(np.abs(h.matrix))))
        if sec.two_M == zero:
            sp = eigh(h)
            spectra[sec.two_M] = sp.eigenvalues
            vecs, states, w0 = sp.eigenvectors, sec.states, sp.eigenvalues
        else:
            spectra[sec.two_M] = np.linalg.eigvalsh(h.matrix)
    tol = default_tol(norm) if tol is None else tol
    e0 = min(float(w[0]) for w in spectra.values())
    degeneracy = int(sum(np.count_nonzero(w - e0 <= tol) for w in spectra.values()))
    ground = vecs[:, w0 - e0 <= tol]
    s2 = ground.T @ total_spin_squared(c.n_sites, states) @ ground
    spins = tuple(sorted(int(round((-1 + math.sqrt(1 + 4 * max(x, 0.0))) / 2)) for x in np.linalg.eigvalsh(s2)))
    if sum(2 * s + 1 for s in spins) != degeneracy:
        raise NumericalValidityError(
            f"ground degeneracy {degeneracy} inconsistent with spins {spins} at J={c.J}, J2={c.J2}"
        )
    info = GroundState(c, e0, degeneracy, ground, states, spins, sector_spectra=spectra, matrix_norm=norm)
    if c.n_sites == 4:
        labels, g = coupled.ground_state_regime(c.J, c.J2, abs_tol=tol)
        if g != degeneracy:
            raise NumericalValidityError(
                f"closed-form ground degeneracy {g} disagrees with brute force {degeneracy}"
            )
        info.labels = tuple(labels)
        info.name = coupled.manifold_name(labels)
    else:
        info.name = "+".join(f"S={s}" for s in spins)
    return info


def max_principal_angle(a: np.ndarray, b: np.ndarray) -> float:
    """Largest principal angle between two column spaces of equal dimension."""
    s = np.linalg.svd(a.T @ b, compute_uv=False)
    return float(np.arccos(np.clip(s.min(), -1.0, 1.0)))


def same_identity(a: GroundState, b: GroundState) -> bool:
    if a.degeneracy != b.degeneracy or a.vectors.shape[1] != b.vectors.shape[1]:
        return False
    if a.couplings.n_sites == 4 and a.name != b.name:
        return False
    return max_principal_angle(a.vectors, b.vectors) <= IDENTITY_ANGLE


# --- sweeps ----------------------------------------------------------------

@dataclass
class SweepRow:
    alpha: float
    J: float
    J2: float
    ground_energy: float
    degeneracy: int
    label: str
    energies: np.ndarray
    sectors: dict

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "J": self.J,
            "J2": self.J2,
            "ground_energy": self.ground_energy,
            "degeneracy": self.degeneracy,
            "label": self.label,
            "energies": self.energies.tolist(),
            "sectors": {str(k): v.tolist() for k, v in sorted(self.sectors.items())},
        }


def _workers(threads: Optional[int]) -> int:
    return max(1, threads if threads else (os.cpu_count() or 1))


def _check_alpha_sign(alpha: float, J_sign: Optional[int]) -> None:
    if J_sign is not None and alpha * J_sign < 0:
        raise ValueError(f"alpha={alpha} disagrees with J sign {J_sign:+d}")


def _row(n_sites: int, alpha: float, J_sign: Optional[int], J_abs: float, max_sites: int) -> SweepRow:
    c = RingCouplings.from_alpha(n_sites, alpha, J_sign, J_abs)
    g = analyze_point(c, max_sites=max_sites)
    energies = np.sort(np.concatenate(list(g.sector_spectra.values())))
    return SweepRow(float(alpha), c.J, c.J2, g.energy, g.degeneracy, g.name, energies, g.sector_spectra)


def sweep(
    n_sites: int,
    J_sign: Optional[int],
    alpha_from: float,
    alpha_to: float,
    steps: int,
    *,
    J_abs: float = 1.0,
    threads: Optional[int] = None,
    max_sites: int = MAX_SITES,
) -> list[SweepRow]:
    """Spectrum on an evenly spaced alpha grid, rows in ascending alpha.

    J takes the sign of alpha; ``J_sign`` fixes it at alpha = 0 and, when
    given, every alpha in the range must agree with it.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not (math.isfinite(alpha_from) and math.isfinite(alpha_to)) or alpha_from >= alpha_to:
        raise ValueError(f"invalid alpha range [{alpha_from}, {alpha_to}]")
    alphas = np.linspace(alpha_from, alpha_to, steps)
    for a in (alphas[0], alphas[-1]):
        _check_alpha_sign(a, J_sign)
    RingCouplings(n_sites, 1.0, 0.0)
    check_capacity(n_sites, max_sites)
    with ThreadPoolExecutor(_workers(threads)) as pool:
        return list(pool.map(lambda a: _row(n_sites, float(a), J_sign, J_abs, max_sites), alphas))


# --- crossings -------------------------------------------------------------

@dataclass(frozen=True)
class CrossingReport:
    alpha_star: float
    interval: tuple[float, float]
    left: str
    right: str
    degeneracy: int
    ground_energy: float

    def to_dict(self) -> dict:
        return {
            "alpha_star": self.alpha_star,
            "interval": list(self.interval),
            "left": self.left,
            "right": self.right,
            "degeneracy": self.degeneracy,
            "ground_energy": self.ground_energy,
        }


def _bisect(n_sites, J_sign, J_abs, lo, hi, lo_info, hi_info, tol, max_sites):
    left, right = lo_info, hi_info
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        info = analyze_point(RingCouplings.from_alpha(n_sites, mid, J_sign, J_abs), max_sites=max_sites)
        if same_identity(info, lo_info):
            lo, lo_info = mid, info
        elif same_identity(info, hi_info):
            hi, hi_info = mid, info
        else:
            # neither neighbor: keep narrowing onto the first change after lo
            hi, hi_info = mid, info
    return lo, hi, left, right


def find_crossings(
    n_sites: int,
    J_sign: int,
    alpha_lo: float,
    alpha_hi: float,
    tol: float = 1e-8,
    *,
    J_abs: float = 1.0,
    threads: Optional[int] = None,
    max_sites: int = MAX_SITES,
) -> list[CrossingReport]:
    """Locate every change of ground-manifold identity in [alpha_lo, alpha_hi].

    A coarse grid flags neighboring points whose ground manifolds differ
    (degeneracy, closed-form label on four sites, or a principal angle
    above ``IDENTITY_ANGLE`` between the zero-magnetization ground
    subspaces); each bracket is then bisected to width <= ``tol``.
    """
    if J_sign not in (1, -1):
        raise ValueError(f"J_sign must be +1 or -1, got {J_sign}")
    if not (math.isfinite(alpha_lo) and math.isfinite(alpha_hi)) or alpha_lo >= alpha_hi:
        raise ValueError(f"empty alpha range [{alpha_lo}, {alpha_hi}]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    for a in (alpha_lo, alpha_hi):
        _check_alpha_sign(a, J_sign)
    n_grid = max(2, math.ceil(GRID_PER_UNIT_ALPHA * (alpha_hi - alpha_lo)) + 1)
    grid = np.linspace(alpha_lo, alpha_hi, n_grid)

    def point(a):
        return analyze_point(RingCouplings.from_alpha(n_sites, float(a), J_sign, J_abs), max_sites=max_sites)

    with ThreadPoolExecutor(_workers(threads)) as pool:
        infos = list(pool.map(point, grid))
        brackets = [k for k in range(n_grid - 1) if not same_identity(infos[k], infos[k + 1])]
        results = list(
            pool.map(
                lambda k: _bisect(
                    n_sites, J_sign, J_abs, float(grid[k]), float(grid[k + 1]),
                    infos[k], infos[k + 1], tol, max_sites,
                ),
                brackets,
            )
        )

    merged: list[list] = []
    for k, (lo, hi, left, right) in zip(brackets, results):
        prev = merged[-1] if merged else None
        # a crossing sitting exactly on a grid point shows up in both adjacent brackets
        if prev and prev[0] == k - 1 and abs(0.5 * (lo + hi) - 0.5 * (prev[1] + prev[2])) <= 2 * tol:
            prev[0], prev[2], prev[4] = k, hi, right
            prev[5] = float(grid[k])
            continue
        merged.append([k, lo, hi, left, right, None])

    reports = []
    for _, lo, hi, left, right, on_grid in merged:
        if on_grid is None:
            star = 0.5 * (lo + hi)
        else:
            star = on_grid
            lo, hi = max(lo, star - 0.5 * tol), min(hi, star + 0.5 * tol)
            while hi - lo > tol:
                hi = float(np.nextafter(hi, star))
        e = point(star).energy
        reports.append(
            CrossingReport(star, (lo, hi), left.name, right.name, left.degeneracy + right.degeneracy, e)
        )
    return reports
