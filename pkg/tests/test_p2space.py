import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ntlimits.errors import DomainError
from ntlimits.measure import atom, bergman, measure
from ntlimits.p2space import (InnerProductTarget, bpe_classify, distance_to_cyclic, gram,
                              point_eval_norm, sub_gram, subspace_basis, wandering_dim)


def test_gram_identity(m):
    gb = gram(m, 10)
    assert np.allclose(gb.G, np.eye(11), atol=1e-15)
    assert gb.rank == 11


def test_point_eval_circle(m):
    gb = gram(m, 20)
    assert point_eval_norm(gb, 0.5) ** 2 == pytest.approx(sum(0.25 ** k for k in range(21)))
    assert point_eval_norm(gb, 1.0) == pytest.approx(np.sqrt(21))


def test_atom_rank_one():
    gb = gram(atom(0.3), 5)
    assert gb.rank == 1


def test_classify(m):
    assert bpe_classify(m, 0.5, [30, 40, 50])[0] == "bounded"
    assert bpe_classify(m, 1.0, [10, 20, 40])[0] == "divergent"
    assert bpe_classify(m, 1.1, [10, 20, 40])[0] == "divergent"


def test_classify_needs_three():
    with pytest.raises(DomainError):
        bpe_classify(measure(), 0.5, [1, 2])


def test_wandering_circle(m):
    res = wandering_dim(gram(m, 8), 0.0)
    assert res.dim == 1
    # (z - 0) is itself wandering for the circle
    v = res.vector / res.vector[1]
    assert np.allclose(v, np.eye(9)[1], atol=1e-12)


def test_subspace_dimension(a5):
    sub = subspace_basis(gram(a5, 6), 0.4)
    assert sub.dim == 6


def test_subspace_warns_outside_disk(m):
    with pytest.warns(UserWarning):
        subspace_basis(gram(m, 4), 1.5)


def test_distance_circle(m):
    gb = gram(m, 6)
    # dist(1, z P) = 1 in H^2
    assert distance_to_cyclic(gb, [1.0], [0.0, 1.0]) == pytest.approx(1.0)
    # 1 is in the span of 1
    assert distance_to_cyclic(gb, [1.0], [1.0]) == pytest.approx(0.0, abs=1e-12)


def test_distance_target_matches_vector(a5):
    gb = gram(a5, 8)
    f = np.array([1.0, 0.3, 0, 0.2])
    t = np.array([gb.inner(np.eye(9)[k], f) for k in range(9)])
    tgt = InnerProductTarget(t, gb.norm_sq(f))
    h = [-0.5, 1.0]
    assert distance_to_cyclic(gb, tgt, h) == pytest.approx(distance_to_cyclic(gb, f, h), abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=0.95), st.integers(3, 12))
def test_kernel_grows_with_degree(lam, n):
    gb = gram(bergman(1), n)
    assert point_eval_norm(sub_gram(gb, n - 1), lam) <= point_eval_norm(gb, lam) * (1 + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=0.9))
def test_wandering_dim_one_bergman(a):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert wandering_dim(gram(bergman(2), 10), a).dim == 1
