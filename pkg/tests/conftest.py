"""Shared oracles.

``kron_hamiltonian`` builds the ring Hamiltonian from Kronecker products
of single-site spin matrices, independently of the bit-pattern kernels in
the package.  Basis ordering matches the package: site 1 is the least
significant bit, bit set = spin up.
"""

import numpy as np
import pytest

SZ = np.diag([-0.5, 0.5])  # index 0 = down, 1 = up
SP = np.array([[0.0, 0.0], [1.0, 0.0]])  # |up><down|
SM = SP.T
ID = np.eye(2)


def site_op(op, site, n):
    mats = [op if k == site else ID for k in range(n, 0, -1)]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def kron_dot(i, j, n):
    """S_i . S_j = Sz Sz + (S+ S- + S- S+) / 2, kept real."""
    return (
        site_op(SZ, i, n) @ site_op(SZ, j, n)
        + 0.5 * (site_op(SP, i, n) @ site_op(SM, j, n) + site_op(SM, i, n) @ site_op(SP, j, n))
    )


def kron_hamiltonian(n, J, J2):
    h = np.zeros((2**n, 2**n))
    for i in range(1, n + 1):
        h += J * kron_dot(i, (i % n) + 1, n)
        h += J2 * kron_dot(i, ((i + 1) % n) + 1, n)
    return h


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
