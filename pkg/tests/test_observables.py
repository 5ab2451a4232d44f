import numpy as np
import pytest
from hypothesis import given, strategies as st

from jj2ring.coupled import all_labels, coupled_to_product, energy_closed_form
from jj2ring.hamiltonian import RingCouplings, build_dense, neighbor_sum
from jj2ring.observables import (
    corr_as_printed,
    corr_bruteforce,
    corr_closed_form,
    correlation_profile,
    energy_from_correlations,
    manifold_correlations,
    spin_from_correlations,
    spin_quantum_number,
)
from jj2ring.spectrum import analyze_point

GOLDEN = {
    (0, 0, 0, 0): {1: 0.0, 2: -0.75},
    (0, 0, 1, 1): {1: -0.5, 2: 0.25},
    **{(2, M, 1, 1): {1: 0.25, 2: 0.25} for M in range(-2, 3)},
}


@pytest.mark.parametrize("label", sorted(GOLDEN))
def test_golden_values(label):
    v = coupled_to_product(label)
    for r, ref in GOLDEN[label].items():
        assert corr_bruteforce(v, r) == pytest.approx(ref, abs=1e-12)
        assert corr_closed_form(label, r) == pytest.approx(ref, abs=1e-15)


@pytest.mark.parametrize("label", all_labels(), ids=str)
def test_closed_form_matches_bruteforce(label):
    v = coupled_to_product(label)
    for r in (0, 1, 2):
        assert abs(corr_closed_form(label, r) - corr_bruteforce(v, r)) <= 1e-12


def test_quintuplet_independent_of_m():
    for r in (1, 2):
        vals = [corr_bruteforce(coupled_to_product((2, M, 1, 1)), r) for M in range(-2, 3)]
        assert max(vals) - min(vals) <= 1e-12


def test_printed_forms_disagree():
    # any s24 = 1 state shows the second-neighbor discrepancy
    for label in all_labels():
        if label.s24 == 1:
            brute = corr_bruteforce(coupled_to_product(label), 2)
            assert abs(corr_as_printed(label, 2) - brute) > 1e-3
    lab = (2, 0, 1, 1)
    assert abs(corr_as_printed(lab, 1) - corr_bruteforce(coupled_to_product(lab), 1)) > 1e-3


@pytest.mark.parametrize("label", all_labels(), ids=str)
def test_sum_rule(label):
    v = coupled_to_product(label)
    s = {r: corr_bruteforce(v, r) for r in (0, 1, 2)}
    S = label.S_T
    assert 4 * s[0] + 8 * s[1] + 4 * s[2] == pytest.approx(S * (S + 1), abs=1e-12)
    assert spin_from_correlations(s, 4) == pytest.approx(S * (S + 1), abs=1e-12)
    assert spin_quantum_number(S * (S + 1)) == pytest.approx(S)


@given(J=st.floats(-2, 2), J2=st.floats(0, 2))
def test_energy_consistency(J, J2):
    for label in all_labels():
        prof = correlation_profile(coupled_to_product(label))
        assert energy_from_correlations(prof, J, J2) == pytest.approx(energy_closed_form(label, J, J2), abs=1e-10)


@pytest.mark.parametrize("n,J,J2", [(6, 1.0, 0.2), (8, 1.0, 0.5), (6, -1.0, 0.1)])
def test_energy_consistency_larger_rings(n, J, J2):
    g = analyze_point(RingCouplings(n, J, J2))
    prof = manifold_correlations(g.full_vectors())
    assert energy_from_correlations(prof, J, J2) == pytest.approx(g.energy, abs=1e-10)


def test_kr_expectation_is_n_times_correlation():
    v = coupled_to_product((0, 0, 1, 1))
    for r in (1, 2):
        assert v @ neighbor_sum(4, r) @ v == pytest.approx(4 * corr_bruteforce(v, r), abs=1e-12)


@given(data=st.data(), n=st.sampled_from([4, 6]))
def test_bounds_on_random_states(data, n):
    seed = data.draw(st.integers(0, 2**32 - 1))
    v = np.random.default_rng(seed).normal(size=2**n)
    v /= np.linalg.norm(v)
    prof = correlation_profile(v)
    assert prof[0] == 0.75
    assert all(abs(x) <= 0.75 + 1e-12 for x in prof.values())


def test_input_validation():
    v = coupled_to_product((0, 0, 1, 1))
    with pytest.raises(ValueError):
        corr_bruteforce(2 * v, 1)
    with pytest.raises(ValueError):
        corr_bruteforce(v, 3)
    with pytest.raises(ValueError):
        corr_bruteforce(np.ones(5) / np.sqrt(5), 1)
    with pytest.raises(ValueError):
        corr_closed_form((0, 0, 1, 1), 3)
    with pytest.raises(ValueError):
        corr_closed_form((1, 0, 0, 0), 1)
