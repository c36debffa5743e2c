import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghz_teleport.bases import BasisLabel, basis_element, basis_matrix, basis_table, labels
from ghz_teleport.linalg import DensityOperator, QubitMap, partial_trace

R = 1 / math.sqrt(2)
open_angle = st.floats(1e-3, math.pi / 2 - 1e-3)


def ket(n, terms):
    v = np.zeros(2**n)
    for bits, amp in terms.items():
        v[int(bits, 2)] = amp
    return v


# Table layouts: rows (mu, lambda...) -> expected ket at phi = pi/4
BELL_TABLE = {
    (0, (0,)): {"00": R, "11": R},
    (0, (1,)): {"01": R, "10": R},
    (1, (0,)): {"00": R, "11": -R},
    (1, (1,)): {"01": R, "10": -R},
}
GHZ_TABLE = {
    (0, (0, 0)): {"000": R, "111": R},
    (0, (0, 1)): {"001": R, "110": R},
    (0, (1, 0)): {"010": R, "101": R},
    (0, (1, 1)): {"011": R, "100": R},
    (1, (0, 0)): {"000": R, "111": -R},
    (1, (0, 1)): {"001": R, "110": -R},
    (1, (1, 0)): {"010": R, "101": -R},
    (1, (1, 1)): {"011": R, "100": -R},
}


@pytest.mark.parametrize("table,n", [(BELL_TABLE, 2), (GHZ_TABLE, 3)])
def test_maximal_tables(table, n):
    for (mu, lam), terms in table.items():
        got = basis_element(BasisLabel(mu, lam, n, math.pi / 4)).amplitudes
        np.testing.assert_allclose(got, ket(n, terms), atol=1e-15)


def test_table_row_order_matches_enumeration():
    order = [(lab.mu, lab.lambda_vec) for lab in labels(3, math.pi / 4)]
    assert order == list(GHZ_TABLE)
    assert [lab.index for lab in labels(3, 0.3)] == list(range(8))


def test_sine_lands_on_zero_branch_for_mu_one():
    phi = math.pi / 6
    got = basis_element(BasisLabel(1, (0, 0), 3, phi)).amplitudes
    expected = ket(3, {"000": math.sin(phi), "111": -math.cos(phi)})
    np.testing.assert_allclose(got, expected, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 4), phi=open_angle)
def test_orthonormal_and_complete(n, phi):
    m = basis_matrix(n, phi)
    np.testing.assert_allclose(m.conj().T @ m, np.eye(2**n), atol=1e-12)
    np.testing.assert_allclose(m @ m.conj().T, np.eye(2**n), atol=1e-12)


def test_four_qubits_at_0_3():
    m = basis_matrix(4, 0.3)
    assert m.shape == (16, 16)
    np.testing.assert_allclose(m.T @ m, np.eye(16), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_maximal_angle_single_qubit_marginals(n):
    qmap = QubitMap(tuple(range(1, n + 1)))
    for lab in labels(n, math.pi / 4):
        rho = basis_element(lab).density()
        for q in range(1, n + 1):
            red = partial_trace(rho, [q], qmap).matrix
            np.testing.assert_allclose(red, np.eye(2) / 2, atol=1e-12)


@pytest.mark.parametrize("phi", [0.0, math.pi / 2, -0.1, 2.0])
def test_endpoint_angles_rejected(phi):
    with pytest.raises(ValueError, match="strictly"):
        BasisLabel(0, (0,), 2, phi)


@pytest.mark.parametrize(
    "mu,lam,n",
    [(2, (0,), 2), (0, (0, 0), 2), (0, (2,), 2), (0, (), 1)],
)
def test_bad_labels(mu, lam, n):
    with pytest.raises(ValueError):
        BasisLabel(mu, lam, n, 0.3)


def test_basis_table_rows():
    rows = basis_table(2, math.pi / 4, digits=4)
    assert [r["mu"] for r in rows] == [0, 0, 1, 1]
    assert rows[2]["lambda_2"] == 0
    assert rows[2]["ket"] == "+0.7071|00> -0.7071|11>"
    assert set(basis_table(3, 0.3)[0]) == {"mu", "lambda_2", "lambda_3", "ket"}
