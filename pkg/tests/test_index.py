import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nklab import catalog
from nklab.errors import PreconditionError
from nklab.index import (IndexConfig, admissible_basis, basis_from_fields, dbar_kernel, index_verdict,
                         negative_count, positive_subbasis, quadratic_form_matrix, verify_index_bound)
from nklab.variation import NKSecondVariation


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 2 ** 31))
@settings(max_examples=30)
def test_negative_count_of_congruent_diagonal(neg, pos, seed):
    rng = np.random.default_rng(seed)
    n = neg + pos + 1
    d = np.concatenate([-rng.uniform(0.5, 2, neg), rng.uniform(0.5, 2, pos), [0.0]])
    A = rng.standard_normal((n, n)) + n * np.eye(n)
    Gram = A.T @ A
    Q = A.T @ np.diag(d) @ A
    assert negative_count(Q, Gram)[0] == neg


def test_non_positive_gram_rejected():
    with pytest.raises(PreconditionError):
        negative_count(np.eye(2), np.diag([1.0, -1.0]))


def test_verdict_logic():
    assert index_verdict(0, 0) == (True, "bound vacuous")
    assert index_verdict(3, -2) == (True, "bound vacuous")
    assert index_verdict(3, 2) == (True, "bound satisfied")
    assert index_verdict(1, 2) == (False, "basis insufficient")


@pytest.fixture(scope="module")
def setup():
    e = catalog.get("halfsphere-lag")
    return e, NKSecondVariation(e.patch, e.lagrangian, 16)


def test_nested_bases_monotone(setup):
    e, sv = setup
    counts = []
    for d in (0, 1):
        b = admissible_basis(sv, d)
        assert b.admissibility < 1e-10
        Q, G = quadratic_form_matrix(sv, b)
        assert np.allclose(G, np.eye(len(b)), atol=1e-10)
        assert np.allclose(Q, Q.T)
        counts.append(negative_count(Q, G)[0])
    assert counts == sorted(counts) and counts[0] == 2


def test_kernel_negativity(setup):
    e, sv = setup
    b = admissible_basis(sv, 1)
    ker = dbar_kernel(sv, b)
    assert ker["dimension"] == 2
    assert np.allclose(ker["quotients"], ker["expected_quotient"], rtol=1e-3)


def test_explicit_basis_requires_admissible_fields(setup):
    e, sv = setup
    b = basis_from_fields(sv, e.fields[:3])
    assert len(b) == 3
    from nklab.catalog import monomial_field, split_normal_bundle

    with pytest.raises(PreconditionError):
        basis_from_fields(sv, [monomial_field("g1", (0, 0, 0), split_normal_bundle()[1][0])])


def test_positive_subbasis_reports_insufficiency(setup):
    e, sv = setup
    b = admissible_basis(sv, 1)
    Q, G = quadratic_form_matrix(sv, b)
    pb = positive_subbasis(b, Q, G, 1e-6)
    n, ev = negative_count(*quadratic_form_matrix(sv, pb))
    assert n == 0 and ev[0] > 0


def test_verify_index_bound(setup):
    e, sv = setup
    r = verify_index_bound(e, IndexConfig(degree=1, nodes=16, maslov_samples=128, maslov_steps=32), sv=sv)
    assert r.maslov_tangent == 2 and r.maslov_additive
    assert r.verdict == "bound vacuous" and r.bound_satisfied
    assert r.negative_count == 2
    assert r.kernel_dimension >= r.riemann_roch_index


def test_index_needs_lagrangian():
    with pytest.raises(PreconditionError):
        verify_index_bound(catalog.get("boruvka-s2"))
