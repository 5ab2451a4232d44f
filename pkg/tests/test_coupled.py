import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import S as Sym
from sympy.physics.quantum.cg import CG

from jj2ring.basis import ProductState, spin_flip_permutation
from jj2ring.coupled import (
    CoupledLabel,
    all_labels,
    build_split_basis,
    coupled_matrix,
    coupled_table,
    coupled_to_product,
    energy_closed_form,
    enumerate_multiplets,
    ground_state_regime,
    manifold_name,
    parse_label,
    validate_label,
)
from jj2ring.hamiltonian import RingCouplings, build_dense

from conftest import kron_hamiltonian

R2, R3, R6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)


def ket(terms):
    """Product vector from ``{arrows: amplitude}`` with arrows listed site 1 first."""
    v = np.zeros(16)
    for arrows, amp in terms.items():
        v[ProductState.from_arrows(arrows).bits] += amp
    return v


# Golden expansions in the individual-spin basis.
GOLDEN_PRODUCT = {
    (2, 2, 1, 1): {"uuuu": 1},
    (2, 1, 1, 1): {"duuu": 0.5, "uduu": 0.5, "uudu": 0.5, "uuud": 0.5},
    (2, 0, 1, 1): {k: 1 / R6 for k in ("uudd", "uddu", "dduu", "duud", "udud", "dudu")},
    (2, -1, 1, 1): {"uddd": 0.5, "dudd": 0.5, "ddud": 0.5, "dddu": 0.5},
    (2, -2, 1, 1): {"dddd": 1},
    (1, 1, 1, 1): {"uudu": 0.5, "duuu": 0.5, "uuud": -0.5, "uduu": -0.5},
    (1, 0, 1, 1): {"dudu": 1 / R2, "udud": -1 / R2},
    (1, -1, 1, 1): {"ddud": 0.5, "uddd": 0.5, "dddu": -0.5, "dudd": -0.5},
    (0, 0, 1, 1): {
        "udud": 1 / R3, "dudu": 1 / R3,
        "uudd": -0.5 / R3, "uddu": -0.5 / R3, "duud": -0.5 / R3, "dduu": -0.5 / R3,
    },
    (1, 1, 1, 0): {"uuud": 1 / R2, "uduu": -1 / R2},
    (1, 0, 1, 0): {"uudd": 0.5, "uddu": -0.5, "duud": 0.5, "dduu": -0.5},
    (1, -1, 1, 0): {"dddu": 1 / R2, "dudd": -1 / R2},
    (1, 1, 0, 1): {"uudu": 1 / R2, "duuu": -1 / R2},
    (1, 0, 0, 1): {"uudd": 0.5, "uddu": 0.5, "duud": -0.5, "dduu": -0.5},
    (1, -1, 0, 1): {"ddud": 1 / R2, "uddd": -1 / R2},
    (0, 0, 0, 0): {"dduu": 0.5, "uddu": -0.5, "uudd": 0.5, "duud": -0.5},
}

# These three M = -1 expansions carry the opposite overall phase to the
# split-basis forms they are derived from (e.g. |1 -1> (x) |00> expands to
# (|dudd> - |dddu>)/sqrt2); the sign-free content is identical.
PHASE_FLIPPED = {(1, -1, 1, 1), (1, -1, 1, 0), (1, -1, 0, 1)}


def test_sixteen_labels():
    labels = all_labels()
    assert len(labels) == len(set(labels)) == 16
    assert set(labels) == set(GOLDEN_PRODUCT)


def test_table_of_multiplets():
    rows = enumerate_multiplets()
    assert len(rows) == 6
    assert (1, 1, 2, 5) in rows and (0, 0, 0, 1) in rows
    assert sorted(g for *_, g in rows) == [1, 1, 3, 3, 3, 5]
    assert sum(g for *_, g in rows) == 16


@pytest.mark.parametrize("bad", [(3, 0, 1, 1), (1, 0, 0, 0), (2, 0, 1, 0), (1, 2, 1, 1), (0, 0, 2, 1), "xyz"])
def test_invalid_labels(bad):
    with pytest.raises(ValueError):
        validate_label(bad)
    with pytest.raises(ValueError):
        coupled_to_product(bad)


def test_parse_label_forms():
    assert parse_label("0,0,1,1") == parse_label("0 0 1 1") == parse_label("0011") == (0, 0, 1, 1)
    assert parse_label("2,-1,1,1") == CoupledLabel(2, -1, 1, 1)
    assert str(CoupledLabel(2, -1, 1, 1)) == "2,-1,1,1"
    assert CoupledLabel(2, -1, 1, 1).multiplet == "2M11"


def test_split_basis_examples():
    split = build_split_basis()
    assert dict(split[(2, 1, 1, 1)].coefficients) == pytest.approx({(0, 1): 1 / R2, (1, 0): 1 / R2})
    assert dict(split[(0, 0, 1, 1)].coefficients) == pytest.approx(
        {(-1, 1): 1 / R3, (0, 0): -1 / R3, (1, -1): 1 / R3}
    )
    assert dict(split[(0, 0, 0, 0)].coefficients) == {(0, 0): 1.0}


def test_split_basis_invariants():
    for lab, sv in build_split_basis().items():
        assert sv.norm() == pytest.approx(1.0, abs=1e-14)
        assert all(m13 + m24 == lab.M for m13, m24 in sv.coefficients)
        first = sv.coefficients[min(sv.coefficients)]
        assert first > 0


def _cg(j1, m1, j2, m2, j, m):
    return float(CG(Sym(j1), Sym(m1), Sym(j2), Sym(m2), Sym(j), Sym(m)).doit())


@pytest.mark.parametrize("a,b,S", [(a, b, S) for a, b, S, _ in enumerate_multiplets()])
def test_split_basis_matches_sympy_clebsch_gordan(a, b, S):
    # phase conventions may differ by one sign per multiplet, never within it
    split = build_split_basis()
    signs = set()
    for M in range(-S, S + 1):
        coeffs = split[(S, M, a, b)].coefficients
        for m13 in range(-a, a + 1):
            m24 = M - m13
            if abs(m24) > b:
                continue
            ref = _cg(a, m13, b, m24, S, M)
            ours = coeffs.get((m13, m24), 0.0)
            assert abs(abs(ours) - abs(ref)) <= 1e-14
            if abs(ref) > 1e-12:
                signs.add(round(ours / ref))
    assert len(signs) == 1


@pytest.mark.parametrize("label", sorted(GOLDEN_PRODUCT))
def test_product_expansion_golden(label):
    expected = ket(GOLDEN_PRODUCT[label])
    if label in PHASE_FLIPPED:
        expected = -expected
    assert np.allclose(coupled_to_product(label), expected, atol=1e-15)


def test_product_expansion_lies_in_one_sector():
    for lab in all_labels():
        v = coupled_to_product(lab)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-14)
        for bits in np.flatnonzero(np.abs(v) > 1e-15):
            assert ProductState(int(bits), 4).two_M == 2 * lab.M


def test_product_expansion_is_a_copy():
    v = coupled_to_product((2, 2, 1, 1))
    v[:] = 0
    assert coupled_to_product((2, 2, 1, 1))[15] == 1.0


def test_gram_matrix_is_identity():
    U = coupled_matrix()
    assert np.max(np.abs(U.T @ U - np.eye(16))) <= 1e-12


def test_spin_flip_symmetry():
    perm = spin_flip_permutation(4)
    for lab in all_labels():
        flipped = coupled_to_product(lab)[perm]
        partner = coupled_to_product(lab._replace(M=-lab.M))
        assert min(np.max(np.abs(flipped - partner)), np.max(np.abs(flipped + partner))) <= 1e-12


@pytest.mark.parametrize(
    "label,J,J2,expected",
    [
        ((2, 0, 1, 1), 1.0, 0.1, 1.1),
        ((2, -2, 1, 1), 1.0, 0.1, 1.1),
        ((0, 0, 0, 0), 1.0, 0.3, -0.9),
        ((0, 0, 1, 1), 1.0, 0.5, -1.5),
        ((0, 0, 0, 0), 1.0, 0.5, -1.5),
    ],
)
def test_energy_examples(label, J, J2, expected):
    assert energy_closed_form(label, J, J2) == pytest.approx(expected, abs=1e-14)
    oracle = np.linalg.eigvalsh(kron_hamiltonian(4, J, J2))
    assert np.min(np.abs(oracle - expected)) <= 1e-12


def test_quintuplet_level_has_five_states_in_oracle():
    oracle = np.linalg.eigvalsh(kron_hamiltonian(4, 1.0, 0.1))
    assert np.sum(np.abs(oracle - 1.1) <= 1e-10) == 5


def test_negative_j2_rejected():
    with pytest.raises(ValueError):
        energy_closed_form((0, 0, 0, 0), 1.0, -0.1)
    with pytest.raises(ValueError):
        ground_state_regime(1.0, -0.1)
    with pytest.raises(ValueError):
        ground_state_regime(0.0, 0.0)


@given(J=st.floats(-3, 3), J2=st.floats(0, 3))
def test_energy_independent_of_m(J, J2):
    for a, b, S, _ in enumerate_multiplets():
        values = {energy_closed_form((S, M, a, b), J, J2) for M in range(-S, S + 1)}
        assert len(values) == 1


@given(J=st.sampled_from([-1.0, 1.0]), J2=st.floats(0, 1.5))
def test_closed_form_matches_kronecker_spectrum(J, J2):
    closed = np.sort([energy_closed_form(lab, J, J2) for lab in all_labels()])
    assert np.max(np.abs(closed - np.linalg.eigvalsh(kron_hamiltonian(4, J, J2)))) <= 1e-10


@given(J=st.floats(-2, 2), J2=st.floats(0, 2))
def test_coupled_states_are_eigenvectors(J, J2):
    h = build_dense(RingCouplings(4, J, J2)).matrix
    for lab in all_labels():
        v = coupled_to_product(lab)
        assert np.linalg.norm(h @ v - energy_closed_form(lab, J, J2) * v) <= 1e-10


@pytest.mark.parametrize(
    "J,J2,names,deg",
    [
        (-1.0, 0.1, "2M11", 5),
        (-1.0, 0.25, "0000+2M11", 6),
        (-1.0, 0.4, "0000", 1),
        (1.0, 0.3, "0011", 1),
        (1.0, 0.5, "0000+0011", 2),
        (1.0, 0.8, "0000", 1),
    ],
)
def test_ground_state_regimes(J, J2, names, deg):
    labels, g = ground_state_regime(J, J2)
    assert g == deg == len(labels)
    assert manifold_name(labels) == names


def test_coupled_table_json_rows():
    rows = coupled_table()
    assert len(rows) == 16
    row = rows[0]
    assert set(row) == {"label", "split", "product"}
    assert len(row["product"]) == 16
    assert all(set(t) == {"m13", "m24", "coeff"} for r in rows for t in r["split"])
