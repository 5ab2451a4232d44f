"""Closed-form solution of the four-site ring in the coupled basis.

Sites 1 and 3 form one sublattice pair, sites 2 and 4 the other.  The
eigenstates are |S_T M s13 s24>, obtained by coupling the two pair spins
with ladder operators and Gram-Schmidt orthogonalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping, NamedTuple, Optional

import numpy as np

N_SITES = 4

#: Table of (s13, s24, S_T) in the order the multiplets are usually listed.
MULTIPLET_ORDER = ((0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0), (1, 1, 1), (1, 1, 2))


class CoupledLabel(NamedTuple):
    S_T: int
    M: int
    s13: int
    s24: int

    def __str__(self) -> str:
        return f"{self.S_T},{self.M},{self.s13},{self.s24}"

    @property
    def multiplet(self) -> str:
        """Short multiplet name, ``"0011"`` or ``"2M11"`` style."""
        return multiplet_name(self.S_T, self.s13, self.s24)


def multiplet_name(S_T: int, s13: int, s24: int) -> str:
    return f"{S_T}{'M' if S_T else 0}{s13}{s24}"


def validate_label(label) -> CoupledLabel:
    try:
        label = CoupledLabel(*(int(x) for x in label))
    except (TypeError, ValueError):
        raise ValueError(f"not a coupled label: {label!r}") from None
    S, M, a, b = label
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError(f"pair spins must be 0 or 1: {label}")
    if not abs(a - b) <= S <= a + b:
        raise ValueError(f"S_T={S} violates the triangle rule for ({a}, {b})")
    if abs(M) > S:
        raise ValueError(f"|M|={abs(M)} exceeds S_T={S}")
    return label


def parse_label(text: str) -> CoupledLabel:
    """Parse ``"0,0,1,1"``, ``"0 0 1 1"`` or the compact ``"0011"``."""
    parts = text.replace(",", " ").split()
    if len(parts) == 1 and len(parts[0]) == 4:
        parts = list(parts[0])
    if len(parts) != 4:
        raise ValueError(f"cannot parse coupled label {text!r}")
    return validate_label(parts)


def all_labels() -> list[CoupledLabel]:
    """The 16 labels, multiplet by multiplet, M descending."""
    return [
        CoupledLabel(S, M, a, b)
        for a, b, S in MULTIPLET_ORDER
        for M in range(S, -S - 1, -1)
    ]


def enumerate_multiplets() -> list[tuple[int, int, int, int]]:
    """Rows ``(s13, s24, S_T, g)`` with g = 2 S_T + 1."""
    return [(a, b, S, 2 * S + 1) for a, b, S in MULTIPLET_ORDER]


# --- split basis -----------------------------------------------------------

@dataclass(frozen=True)
class SplitBasisVector:
    """Clebsch-Gordan expansion over |s13 m13> (x) |s24 m24>."""

    label: CoupledLabel
    coefficients: Mapping[tuple[int, int], float]

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coefficients.values()))


def _lowering(s: int, m: int) -> float:
    return math.sqrt(s * (s + 1) - m * (m - 1))


def _lower(vec: dict, s13: int, s24: int) -> dict:
    out: dict[tuple[int, int], float] = {}
    for (m13, m24), c in vec.items():
        if m13 > -s13:
            key = (m13 - 1, m24)
            out[key] = out.get(key, 0.0) + c * _lowering(s13, m13)
        if m24 > -s24:
            key = (m13, m24 - 1)
            out[key] = out.get(key, 0.0) + c * _lowering(s24, m24)
    return {k: v for k, v in out.items() if abs(v) > 1e-15}


def _normalized(vec: dict) -> dict:
    nrm = math.sqrt(sum(c * c for c in vec.values()))
    return {k: c / nrm for k, c in vec.items()}


def _fix_sign(vec: dict) -> dict:
    for key in sorted(vec):
        if abs(vec[key]) > 1e-12:
            if vec[key] < 0:
                return {k: -c for k, c in vec.items()}
            return vec
    return vec


def _dot(u: dict, v: dict) -> float:
    return sum(c * v.get(k, 0.0) for k, c in u.items())


def _build_pair_block(s13: int, s24: int) -> dict[CoupledLabel, dict]:
    built: dict[CoupledLabel, dict] = {}
    for S in range(s13 + s24, abs(s13 - s24) - 1, -1):
        if S == s13 + s24:
            top = {(s13, s24): 1.0}
        else:
            same_m = [v for lab, v in built.items() if lab.M == S]
            keys = sorted((m, S - m) for m in range(-s13, s13 + 1) if abs(S - m) <= s24)
            top = None
            for key in keys:
                trial = {k: (1.0 if k == key else 0.0) for k in keys}
                for u in same_m:
                    overlap = _dot(u, trial)
                    trial = {k: trial.get(k, 0.0) - overlap * u.get(k, 0.0) for k in keys}
                if math.sqrt(_dot(trial, trial)) > 1e-10:
                    top = {k: c for k, c in trial.items() if abs(c) > 1e-15}
                    break
            assert top is not None, "orthogonal complement unexpectedly empty"
        vec = _fix_sign(_normalized(top))
        built[CoupledLabel(S, S, s13, s24)] = vec
        for M in range(S - 1, -S - 1, -1):
            vec = _fix_sign(_normalized(_lower(vec, s13, s24)))
            built[CoupledLabel(S, M, s13, s24)] = vec
    return built


@lru_cache(maxsize=1)
def _split_table() -> Mapping[CoupledLabel, SplitBasisVector]:
    table = {}
    for a, b in ((1, 1), (1, 0), (0, 1), (0, 0)):
        for lab, vec in _build_pair_block(a, b).items():
            table[lab] = SplitBasisVector(lab, MappingProxyType(dict(sorted(vec.items()))))
    return MappingProxyType({lab: table[lab] for lab in all_labels()})


def build_split_basis() -> Mapping[CoupledLabel, SplitBasisVector]:
    """All 16 coupled states expanded in the split (pair) basis.

    Each multiplet is seeded at its highest weight and lowered with
    S_T^- = S_13^- + S_24^-; the highest weight of a lower S_T is the
    orthogonal complement of the states already built in the same
    (M, s13, s24) slice.  The overall sign makes the first nonzero
    coefficient, in ascending (m13, m24) order, positive.
    """
    return _split_table()


# --- product basis ---------------------------------------------------------

_R2 = 1 / math.sqrt(2)

# Pair kets over the 2-site index p = b_first + 2 * b_second (bit set = up).
PAIR_STATES = {
    (1, 1): np.array([0.0, 0.0, 0.0, 1.0]),
    (1, 0): np.array([0.0, _R2, _R2, 0.0]),
    (1, -1): np.array([1.0, 0.0, 0.0, 0.0]),
    (0, 0): np.array([0.0, _R2, -_R2, 0.0]),
}


def _pair_product(v13: np.ndarray, v24: np.ndarray) -> np.ndarray:
    out = np.zeros(16)
    for bits in range(16):
        b1, b2, b3, b4 = ((bits >> k) & 1 for k in range(4))
        out[bits] = v13[b1 + 2 * b3] * v24[b2 + 2 * b4]
    return out


@lru_cache(maxsize=None)
def _product_cached(label: CoupledLabel) -> np.ndarray:
    vec = np.zeros(16)
    for (m13, m24), c in build_split_basis()[label].coefficients.items():
        vec += c * _pair_product(PAIR_STATES[(label.s13, m13)], PAIR_STATES[(label.s24, m24)])
    vec.setflags(write=False)
    return vec


def coupled_to_product(label) -> np.ndarray:
    """16 amplitudes of |S_T M s13 s24> over the product kets (site 1 = LSB)."""
    return _product_cached(validate_label(label)).copy()


def coupled_matrix() -> np.ndarray:
    """Columns are the 16 coupled states in ``all_labels()`` order."""
    return np.column_stack([coupled_to_product(lab) for lab in all_labels()])


# --- energies --------------------------------------------------------------

def _ss(s: int) -> int:
    return s * (s + 1)


def energy_closed_form(label, J: float, J2: float) -> float:
    """E = J <K1> + J2 <K2>, in units of hbar^2.

    <K1> = [S_T(S_T+1) - s13(s13+1) - s24(s24+1)] / 2 and
    <K2> = s13(s13+1) + s24(s24+1) - 3.  M does not enter.
    """
    if J2 < 0:
        raise ValueError(f"J2 must be >= 0, got {J2}")
    S, _, a, b = validate_label(label)
    return J * 0.5 * (_ss(S) - _ss(a) - _ss(b)) + J2 * (_ss(a) + _ss(b) - 3)


def ground_state_regime(J: float, J2: float, rel_tol: float = 1e-9, abs_tol: Optional[float] = None):
    """Ground manifold of the four-site ring.

    Returns ``(labels, degeneracy)`` where ``labels`` lists every coupled
    label (all M) whose energy lies within ``rel_tol * max(|J|, J2)`` of
    the minimum, or within ``abs_tol`` when given.
    """
    if J == 0 and J2 == 0:
        raise ValueError("at least one coupling must be nonzero")
    if J2 < 0:
        raise ValueError(f"J2 must be >= 0, got {J2}")
    tol = rel_tol * max(abs(J), J2) if abs_tol is None else abs_tol
    energies = {lab: energy_closed_form(lab, J, J2) for lab in all_labels()}
    e0 = min(energies.values())
    ground = [lab for lab, e in energies.items() if e - e0 <= tol]
    return ground, len(ground)


def manifold_name(labels) -> str:
    """``"0011"``, ``"2M11"`` or ``"0000+0011"`` for a ground manifold."""
    names = []
    for lab in labels:
        name = lab.multiplet
        if name not in names:
            names.append(name)
    return "+".join(sorted(names))


def coupled_table() -> list[dict]:
    """JSON-ready table of all coupled states."""
    rows = []
    for lab, sv in build_split_basis().items():
        rows.append(
            {
                "label": list(lab),
                "split": [
                    {"m13": m13, "m24": m24, "coeff": c}
                    for (m13, m24), c in sv.coefficients.items()
                ],
                "product": coupled_to_product(lab).tolist(),
            }
        )
    return rows
