import numpy as np
import pytest
from hypothesis import given

from catmeas.errors import DimMismatch, NotAnEffect, NotHermitian, NotPSD, NotSquare, TraceNotOne
from catmeas.instances import random_density, random_effect
from catmeas.operators import (
    as_density,
    as_effect,
    identity_op,
    make_hermitian,
    positive_projector,
    spectral,
    trace_pair,
    zero_op,
)

from conftest import diag, rng_for, seeds


def test_make_hermitian_examples():
    assert np.array_equal(make_hermitian(np.eye(2)).matrix, np.eye(2))
    make_hermitian(np.diag([0.75, 0.25]))
    with pytest.raises(NotHermitian):
        make_hermitian([[0, 1j], [1j, 0]])
    with pytest.raises(NotSquare):
        make_hermitian([[1, 0, 0], [0, 1, 0]])


def test_near_hermitian_input_is_symmetrized():
    m = np.array([[1.0, 0.5 + 1e-11], [0.5, 0.0]])
    op = make_hermitian(m)
    assert np.array_equal(op.matrix, op.matrix.conj().T)


def test_effect_examples():
    as_effect(identity_op(2))
    as_effect(diag(0.5, 0.5))
    with pytest.raises(NotAnEffect, match="1.5"):
        as_effect(diag(1.5, 0))


def test_density_examples():
    as_density(diag(0.5, 0.5))
    as_density(diag(0.75, 0.25))
    with pytest.raises(TraceNotOne):
        as_density(diag(1, 1))
    with pytest.raises(NotPSD):
        as_density(diag(1.5, -0.5))


def test_spectral_diagonal():
    dec = spectral(diag(0.5, -0.5))
    assert dec.levels == (0.5, -0.5)
    assert np.allclose(dec.eigenprojectors[0].matrix, np.diag([1, 0]), atol=1e-15)
    assert np.allclose(dec.eigenprojectors[1].matrix, np.diag([0, 1]), atol=1e-15)


@pytest.mark.parametrize("op,level", [(identity_op(3), 1.0), (zero_op(3), 0.0)])
def test_spectral_fully_degenerate(op, level):
    dec = spectral(op)
    assert dec.levels == (level,)
    assert np.allclose(dec.eigenprojectors[0].matrix, np.eye(3))


def test_spectral_groups_near_degenerate():
    dec = spectral(diag(0.3, 0.3 + 1e-10, -0.6))
    assert len(dec.eigenprojectors) == 2
    assert abs(dec.eigenprojectors[0].trace() - 2) < 1e-12


def test_positive_projector_examples():
    assert np.allclose(positive_projector(diag(0.5, -0.5), 0.25).matrix, np.diag([1, 0]))
    assert np.allclose(positive_projector(diag(0.1, 0.05, 0.0), 0.2).matrix, 0)
    assert np.allclose(positive_projector(identity_op(2), 0.5).matrix, np.eye(2))


def test_trace_pair_examples():
    assert trace_pair(diag(0.75, 0.25), diag(1, 0)) == pytest.approx(0.75, abs=1e-15)
    assert trace_pair(zero_op(2), diag(0.3, 0.7)) == 0.0
    with pytest.raises(DimMismatch):
        trace_pair(identity_op(2), identity_op(3))


@given(seeds)
def test_spectral_invariants(seed):
    rng = rng_for(seed)
    d = int(rng.integers(2, 7))
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    op = make_hermitian(a + a.conj().T)
    dec = spectral(op)
    ps = [p.matrix for p in dec.eigenprojectors]
    assert np.max(np.abs(dec.reconstruct().matrix - op.matrix)) <= 1e-9
    assert np.max(np.abs(sum(ps) - np.eye(d))) <= 1e-9
    for j, p in enumerate(ps):
        assert np.max(np.abs(p @ p - p)) <= 1e-9
        for q in ps[j + 1 :]:
            assert np.max(np.abs(p @ q)) <= 1e-9
    assert list(dec.eigenvalues) == sorted(dec.eigenvalues, reverse=True)


@given(seeds)
def test_effect_complement_is_effect(seed):
    rng = rng_for(seed)
    m = random_effect(rng, int(rng.integers(2, 6)))
    as_effect(identity_op(m.dim) - m)


@given(seeds)
def test_trace_pair_symmetric_bilinear(seed):
    rng = rng_for(seed)
    d = int(rng.integers(2, 6))
    a, b, c = (random_density(rng, d) for _ in range(3))
    x, y = rng.standard_normal(2)
    assert abs(trace_pair(a, b) - trace_pair(b, a)) <= 1e-10
    lhs = trace_pair(a * x + b * y, c)
    rhs = x * trace_pair(a, c) + y * trace_pair(b, c)
    assert abs(lhs - rhs) <= 1e-10
    # independent route: elementwise sum of a * b^T
    assert abs(trace_pair(a, b) - np.sum(a.matrix * b.matrix.T).real) <= 1e-12


@given(seeds)
def test_positive_part_of_state_difference(seed):
    rng = rng_for(seed)
    d = int(rng.integers(2, 6))
    delta = random_density(rng, d) - random_density(rng, d)
    top = np.linalg.eigvalsh(delta.matrix)[-1]
    p = positive_projector(delta, top / 2)
    assert np.max(np.abs(p.matrix @ p.matrix - p.matrix)) <= 1e-9
    assert trace_pair(delta, p) > 0
