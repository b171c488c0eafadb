import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from catmeas.born import (
    born_measure,
    born_transformation,
    gell_mann_basis,
    ic_effect_basis,
    injectivity_witness,
    reconstruct,
    reconstruct_report,
)
from catmeas.errors import NotAState, StatesEqual
from catmeas.functors import make_povm
from catmeas.instances import random_density, random_effect, random_pure, random_unitary
from catmeas.measurable import discrete_space
from catmeas.naturality import EffectFunctional, effectwise, extract_xi
from catmeas.operators import HermitianOperator, as_density, as_effect, identity_op

from conftest import diag, rng_for, seeds

RHO = as_density(diag(0.75, 0.25))
SIGMA = as_density(diag(0.25, 0.75))


def test_born_measure_examples(rng):
    mu = make_povm(discrete_space(["0", "1"]), [diag(1, 0), diag(0, 1)])
    assert born_measure(RHO, mu).atom_probs == (0.75, 0.25)
    one = make_povm(discrete_space(["*"]), [identity_op(3)])
    assert born_measure(random_density(rng, 3), one).atom_probs == pytest.approx((1.0,), abs=1e-12)
    m = random_effect(rng, 2)
    p = born_measure(as_density(diag(0.5, 0.5)), make_povm(discrete_space("ab"), [m, identity_op(2) - m]))
    assert p[0] == pytest.approx(np.trace(m.matrix).real / 2, abs=1e-15)


def test_uniform_state_on_projective_povm(rng):
    d = 4
    u = random_unitary(rng, d)
    projectors = [HermitianOperator(np.outer(u[:, k], u[:, k].conj())) for k in range(d)]
    mu = make_povm(discrete_space([str(k) for k in range(d)]), projectors)
    p = born_measure(as_density(identity_op(d) / d), mu)
    assert np.allclose(p.atom_probs, 1 / d, atol=1e-12)


def test_witness_hand_example():
    w = injectivity_witness(RHO, SIGMA)
    assert np.max(np.abs(w.projector.matrix - np.diag([1, 0]))) <= 1e-14
    assert abs(w.gap - 0.5) <= 1e-14
    assert w.projector_rank == 1
    assert w.eps == 0.25


def test_witness_equal_states():
    with pytest.raises(StatesEqual):
        injectivity_witness(RHO, RHO)


@given(seeds)
def test_witness_qutrit_trace_distance_bound(seed):
    rng = rng_for(seed)
    rho, sigma = random_density(rng, 3), random_density(rng, 3)
    w = injectivity_witness(rho, sigma)
    eig = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    trace_distance = 0.5 * np.sum(np.abs(eig))
    assert 0 < w.gap <= trace_distance + 1e-12
    assert w.gap == pytest.approx(eig[eig > eig.max() / 2].sum(), abs=1e-10)
    pr, ps = born_measure(rho, w.povm), born_measure(sigma, w.povm)
    assert abs((pr[0] - ps[0]) - w.gap) <= 1e-12


def test_gell_mann_orthogonality():
    for d in (2, 3, 5):
        ops = gell_mann_basis(d)
        assert len(ops) == d * d
        gram = np.array([[np.trace(a @ b).real for b in ops] for a in ops])
        assert np.allclose(gram, np.diag([d] + [2] * (d * d - 1)))


def test_ic_basis_qubit_gram_determinant():
    basis = ic_effect_basis(2)
    assert len(basis.effects) == 4
    # Tr[1 1] = 2 and Tr[s_i s_j] = 2 delta_ij for the Pauli-type generators: det = 2^4
    assert np.linalg.det(basis.gram) == pytest.approx(16.0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_ic_basis_effects_valid(d):
    basis = ic_effect_basis(d)
    assert len(basis.effects) == d * d
    for m in basis.effects:
        as_effect(m)
    for b, c, s, m in zip(basis.frame_operators, basis.offsets, basis.scales, basis.effects):
        assert np.allclose((b.matrix + c * np.eye(d)) / s, m.matrix)
        assert s >= 1 and c >= 0
    assert basis.condition_number < 1e8


def test_reconstruct_hand_example():
    assert reconstruct(born_transformation(RHO), 2).frobenius_distance(RHO) <= 1e-10


@given(seeds)
def test_reconstruct_pure_qutrit(seed):
    rho = random_pure(rng_for(seed), 3)
    assert reconstruct(born_transformation(rho), 3).frobenius_distance(rho) <= 1e-8


@given(seeds, st.integers(2, 4))
def test_power_candidate_never_reconstructs(seed, d):
    rho = random_density(rng_for(seed), d)
    with pytest.raises(NotAState):
        reconstruct(effectwise(EffectFunctional("power", rho, k=2)), d)


def test_power_candidate_residual_directly():
    # xi(1/2) = 1/4 but any linear functional with xi(1) = 1 gives 1/2 there
    t = effectwise(EffectFunctional("power", identity_op(2) / 2, k=2))
    assert extract_xi(t, identity_op(2) * 0.5, validate=False) == pytest.approx(0.25)
    with pytest.raises(NotAState, match="residual"):
        reconstruct(t, 2)


def test_linear_with_non_state_payload_is_not_a_state():
    t = effectwise(EffectFunctional("linear", diag(1.5, -0.5)))
    with pytest.raises(NotAState):
        reconstruct(t, 2)


@given(seeds)
def test_linear_with_state_payload_reconstructs(seed):
    rho = random_density(rng_for(seed), 3)
    rec = reconstruct_report(effectwise(EffectFunctional("linear", rho)), 3)
    assert rec.residual <= 1e-10
    assert rec.state.frobenius_distance(rho) <= 1e-8


@given(seeds)
def test_bijection_both_ways(seed):
    rng = rng_for(seed)
    d = int(rng.integers(2, 5))
    rho = random_density(rng, d)
    t = born_transformation(rho)
    back = reconstruct(t, d)
    assert back.frobenius_distance(rho) <= 1e-8
    for _ in range(3):
        m = random_effect(rng, d)
        assert abs(extract_xi(born_transformation(back), m) - extract_xi(t, m)) <= 1e-8


@given(seeds)
def test_extract_xi_is_born_probability(seed):
    rng = rng_for(seed)
    rho = random_density(rng, 3)
    m = random_effect(rng, 3)
    oracle = np.einsum("ij,ji->", rho.matrix, m.matrix).real
    assert extract_xi(born_transformation(rho), m) == pytest.approx(oracle, abs=1e-12)
