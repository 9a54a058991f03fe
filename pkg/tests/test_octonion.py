import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nklab.errors import DegenerateInputError
from nklab.octonion import (PHI0, PSI0, AltForm, coassociative_residual, complement_basis, cross,
                            cross_from_product, dump_multiplication_table, find_coassociative_plane,
                            g2_gram, is_associative_plane, multiplication_table, octonion_multiply,
                            orthonormalize, phi0)

vec7 = arrays(np.float64, 7, elements=st.floats(-10, 10, allow_nan=False))
vec8 = arrays(np.float64, 8, elements=st.floats(-10, 10, allow_nan=False))


@given(vec7, vec7)
def test_cross_norm_identity(x, y):
    lhs = np.dot(cross(x, y), cross(x, y))
    rhs = np.dot(x, x) * np.dot(y, y) - np.dot(x, y) ** 2
    assert abs(lhs - rhs) <= 1e-10 * (1 + np.dot(x, x) * np.dot(y, y))


@given(vec7, vec7)
def test_cross_antisymmetric_and_orthogonal(x, y):
    c = cross(x, y)
    scale = 1 + np.linalg.norm(x) * np.linalg.norm(y)
    assert np.allclose(c, -cross(y, x), atol=1e-12 * scale)
    assert abs(np.dot(c, x)) <= 1e-9 * scale * (1 + np.linalg.norm(x))


@given(vec8, vec8)
@settings(max_examples=50)
def test_octonion_norm_multiplicative(a, b):
    na = np.linalg.norm(a) * np.linalg.norm(b)
    assert abs(np.linalg.norm(octonion_multiply(a, b)) - na) <= 1e-10 * (1 + na)


@given(vec7, vec7)
def test_cross_is_imaginary_part_of_product(x, y):
    assert np.allclose(cross_from_product(x, y), cross(x, y), atol=1e-9)


def test_phi0_terms():
    E = np.eye(7)
    assert phi0(E[0], E[1], E[2]) == 1.0
    assert phi0(E[1], E[4], E[6]) == -1.0
    assert phi0(E[0], E[0], E[2]) == 0.0


def test_forms_alternating_exhaustively():
    for T in (PHI0.tensor, PSI0.tensor):
        for idx in itertools.product(range(7), repeat=T.ndim):
            for perm in itertools.permutations(range(T.ndim)):
                sign = np.linalg.det(np.eye(T.ndim)[list(perm)])
                assert T[tuple(idx[p] for p in perm)] == pytest.approx(sign * T[idx])
            if len(set(idx)) < T.ndim:
                assert T[idx] == 0.0


def test_gram_is_identity():
    assert np.allclose(g2_gram(PHI0), np.eye(7), atol=1e-14)


def test_psi_is_hodge_dual():
    E = np.eye(7)
    assert PSI0(E[3], E[4], E[5], E[6]) == pytest.approx(1.0)
    assert PHI0.wedge(PSI0).top_coefficient() == pytest.approx(7.0)


def test_wedge_and_interior():
    a = AltForm.from_terms([(1, 1.0)], 1)
    b = AltForm.from_terms([(2, 1.0)], 1)
    ab = a.wedge(b)
    E = np.eye(7)
    assert ab(E[0], E[1]) == 1.0 and ab(E[1], E[0]) == -1.0
    assert np.allclose(PHI0.interior(E[0]).tensor, PHI0.tensor[0])


def test_multiplication_table_dump():
    table = multiplication_table()
    assert len(table) == 7 and all(len(r) == 7 for r in table)
    assert all(table[i][i] == "-1" for i in range(7))
    text = dump_multiplication_table()
    assert len(text.splitlines()) == 8 and "e7" in text


def test_orthonormalize_rejects_dependent():
    with pytest.raises(DegenerateInputError):
        orthonormalize([[1, 0, 0, 0, 0, 0, 0], [2, 0, 0, 0, 0, 0, 0]])


def test_coassociative_search():
    E = np.eye(7)
    V = find_coassociative_plane(E[0], E[1])
    assert coassociative_residual(V) < 1e-10
    assert np.allclose(V @ V.T, np.eye(4), atol=1e-12)
    A = complement_basis(V)
    assert is_associative_plane(*A)


def test_coassociative_search_rejects_degenerate_pair():
    E = np.eye(7)
    with pytest.raises(DegenerateInputError):
        find_coassociative_plane(E[0], E[0])
