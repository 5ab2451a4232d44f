import numpy as np
import pytest
from hypothesis import given, strategies as st
from math import comb

from jj2ring.basis import (
    CapacityError,
    ProductState,
    apply_spin_dot,
    enumerate_sectors,
    spin_dot_kernel,
    translation_permutation,
)
from jj2ring.errors import CapacityError as CapErr

from conftest import kron_dot


def test_two_site_sector_sizes():
    assert [len(s) for s in enumerate_sectors(2)] == [1, 2, 1]


def test_four_site_sectors():
    sectors = enumerate_sectors(4)
    assert [s.two_M for s in sectors] == [-4, -2, 0, 2, 4]
    assert len(sectors[2]) == 6
    assert sum(len(s) for s in sectors) == 16


@pytest.mark.parametrize("n", range(2, 11))
def test_sectors_partition_the_basis(n):
    sectors = enumerate_sectors(n)
    allstates = np.concatenate([s.states for s in sectors])
    assert sorted(allstates.tolist()) == list(range(2**n))
    for s in sectors:
        assert len(s) == comb(n, (s.two_M + n) // 2)
        assert np.all(np.diff(s.states) > 0)
        assert all(ProductState(int(b), n).two_M == s.two_M for b in s.states)


@pytest.mark.parametrize("n", [0, 1, 15, 20])
def test_capacity(n):
    with pytest.raises(CapErr):
        enumerate_sectors(n)
    assert CapacityError is CapErr


def test_aligned_pair():
    up = ProductState.from_arrows("uu")
    assert apply_spin_dot(up, 1, 2) == [(up, 0.25)]


def test_antiparallel_pair():
    ud = ProductState.from_arrows("ud")
    assert apply_spin_dot(ud, 1, 2) == [(ud, -0.25), (ProductState.from_arrows("du"), 0.5)]


def _pair_matrix(n, i, j):
    m = np.zeros((2**n, 2**n))
    for b in range(2**n):
        for out, amp in apply_spin_dot(ProductState(b, n), i, j):
            m[out.bits, b] += amp
    return m


def test_singlet_expectation():
    singlet = np.zeros(4)
    singlet[ProductState.from_arrows("ud").bits] = 1 / np.sqrt(2)
    singlet[ProductState.from_arrows("du").bits] = -1 / np.sqrt(2)
    assert singlet @ _pair_matrix(2, 1, 2) @ singlet == pytest.approx(-0.75, abs=1e-15)


def test_two_site_eigenvalues():
    m = _pair_matrix(2, 1, 2)
    assert np.array_equal(m, m.T)
    assert np.allclose(np.linalg.eigvalsh(m), [-0.75, 0.25, 0.25, 0.25], atol=1e-15)


@pytest.mark.parametrize("n,i,j", [(2, 1, 2), (3, 1, 3), (4, 2, 4), (5, 5, 1)])
def test_matches_kronecker_oracle(n, i, j):
    assert np.allclose(_pair_matrix(n, i, j), kron_dot(i, j, n), atol=1e-15)


def test_argument_errors():
    s = ProductState(0, 4)
    with pytest.raises(ValueError):
        apply_spin_dot(s, 2, 2)
    with pytest.raises(ValueError):
        apply_spin_dot(s, 0, 1)
    with pytest.raises(ValueError):
        apply_spin_dot(s, 1, 5)
    with pytest.raises(ValueError):
        ProductState(16, 4)


@given(n=st.integers(2, 12), data=st.data())
def test_spin_dot_conserves_magnetization(n, data):
    bits = data.draw(st.integers(0, 2**n - 1))
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n).filter(lambda x: x != i))
    state = ProductState(bits, n)
    terms = apply_spin_dot(state, i, j)
    assert 1 <= len(terms) <= 2
    assert all(out.two_M == state.two_M for out, _ in terms)


@given(n=st.integers(2, 10), data=st.data())
def test_kernel_matches_scalar_action(n, data):
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n).filter(lambda x: x != i))
    bits = np.arange(2**n)
    diag, anti, flipped = spin_dot_kernel(bits, i, j, n)
    flips = iter(flipped)
    for b in bits:
        terms = apply_spin_dot(ProductState(int(b), n), i, j)
        assert terms[0][1] == diag[b]
        if anti[b]:
            assert terms[1][0].bits == next(flips)
        else:
            assert len(terms) == 1


def test_arrows_roundtrip_and_translation():
    s = ProductState.from_arrows("↑↓↓↑")
    assert s.bits == 0b1001 and s.arrows() == "↑↓↓↑"
    perm = translation_permutation(4)
    # site k moves to k+1: up at sites 1,4 -> up at sites 2,1
    assert ProductState(int(perm[s.bits]), 4).arrows() == "↑↑↓↓"
