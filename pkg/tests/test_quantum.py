import math

import numpy as np
import pytest

import oracles
from bellscope import kernels, npa, quantum
from bellscope.correlations import Behavior, chsh_value, local_box, white_noise
from bellscope.geometry import S1, void_edges
from bellscope.principles import ml_value
from bellscope.quantum import (
    DIMWITNESS_ZEROS,
    QubitConfig,
    QutritConfig,
    behavior_from_model,
    behavior_from_qubit,
    behavior_from_qutrit,
    i3322_value,
    max_chsh_qubits,
    max_i3322,
    max_i3322_qutrits,
)

TSIRELSON = math.sqrt(2) - 1


def random_unit(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_qubit_config(rng):
    return QubitConfig(random_unit(rng, 4), rng.uniform(0, 2 * math.pi, (4, 2)))


def test_born_matches_kronecker_oracle(rng):
    for d in (2, 3):
        for _ in range(20):
            psi = random_unit(rng, d * d)
            u = np.array([random_unit(rng, d) for _ in range(3)])
            w = np.array([random_unit(rng, d) for _ in range(3)])
            beh = behavior_from_model(psi.reshape(d, d), u, w)
            assert np.abs(beh.p - oracles.born(psi, u, w)).max() <= 1e-12


def test_product_state_is_local(rng):
    for _ in range(20):
        a, b = random_unit(rng, 2), random_unit(rng, 2)
        cfg = QubitConfig(np.kron(a, b), rng.uniform(0, 2 * math.pi, (4, 2)))
        assert chsh_value(behavior_from_qubit(cfg)) <= 1e-9


def test_singlet_type_state_reaches_tsirelson():
    # |phi+> measured in the x-z plane has E(x, y) = cos(tA - tB); signed
    # angles 0, pi/2 for A and pi/4, -pi/4 for B give E00+E01+E10-E11 = 2 sqrt2
    state = np.array([1, 0, 0, 1]) / math.sqrt(2)
    axes = np.array([[0.0, 0.0], [math.pi / 2, 0.0], [math.pi / 4, 0.0], [math.pi / 4, math.pi]])
    value = chsh_value(behavior_from_qubit(QubitConfig(state, axes)))
    assert value == pytest.approx(TSIRELSON, abs=1e-9)


def test_born_outputs_are_valid_behaviors(rng):
    for _ in range(50):
        beh = behavior_from_qubit(random_qubit_config(rng))
        assert beh.violations(tol=1e-12) == []


def test_local_unitary_invariance(rng):
    for _ in range(20):
        cfg = random_qubit_config(rng)
        psi, u, w = cfg.vectors()
        q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        before = behavior_from_model(psi, u, w).p
        after = behavior_from_model(q @ psi, (q @ u.T).T, w).p
        assert np.abs(before - after).max() <= 1e-12


def test_qubit_behaviors_are_almost_quantum_and_ml(rng):
    for _ in range(10):
        beh = behavior_from_qubit(random_qubit_config(rng))
        assert npa.contains(beh, "1+ab")
        verdict = ml_value(beh)
        assert verdict.degenerate or verdict.value <= math.pi + 1e-9


def test_config_validation():
    with pytest.raises(ValueError):
        QubitConfig(np.ones(4), np.zeros((4, 2)))
    with pytest.raises(ValueError):
        QutritConfig(np.eye(9)[0], np.ones((6, 3)))


def test_config_json_round_trip(rng):
    cfg = random_qubit_config(rng)
    back = QubitConfig.from_json(cfg.to_json())
    assert np.array_equal(back.state, cfg.state) and np.array_equal(back.axes, cfg.axes)
    dirs = np.array([random_unit(rng, 3) for _ in range(6)])
    tcfg = QutritConfig(random_unit(rng, 9), dirs)
    back = QutritConfig.from_json(tcfg.to_json())
    assert np.array_equal(back.state, tcfg.state) and np.array_equal(back.directions, tcfg.directions)


def test_axis_vector_round_trip(rng):
    for _ in range(20):
        v = random_unit(rng, 2)
        t, p = quantum.vector_axis(v)
        w = quantum.axis_vector(t, p)
        assert abs(abs(np.vdot(v, w)) - 1) <= 1e-12


def test_max_chsh_unconstrained():
    value, cfg = max_chsh_qubits(restarts=10, seed=1)
    assert value == pytest.approx(TSIRELSON, abs=1e-6)
    assert chsh_value(behavior_from_qubit(cfg)) == pytest.approx(value, abs=1e-12)


def test_max_chsh_on_s1_is_zero():
    value, cfg = max_chsh_qubits(S1, restarts=10, seed=0)
    assert value <= 1e-6
    assert behavior_from_qubit(cfg).free()[[i - 1 for i in S1]].max() <= 1e-8


def test_max_chsh_on_hardy_face_is_positive():
    value, cfg = max_chsh_qubits({3, 6, 7}, restarts=10, seed=0)
    # at least the value at the optimal Hardy point
    assert value >= 2 * (5 * math.sqrt(5) - 11) / 2 - 1e-9
    assert behavior_from_qubit(cfg).free()[[2, 5, 6]].max() <= 1e-8


@pytest.mark.parametrize("edge", sorted(tuple(sorted(e)) for e in void_edges()))
def test_void_edges_admit_no_qubit_violation(edge):
    value, cfg = max_chsh_qubits(set(edge), restarts=10, seed=0)
    assert value <= 1e-6
    assert behavior_from_qubit(cfg).free()[[i - 1 for i in edge]].max() <= 1e-8


def test_zero_rank():
    assert quantum.zero_rank(2, quantum.zeros_from_indices(S1)) == 4
    assert quantum.zero_rank(3, DIMWITNESS_ZEROS) == 3


def test_i3322_examples():
    assert i3322_value(local_box(0, 0, 0, 0, n_inputs=3)) == 0.0
    assert i3322_value(white_noise(3, 3)) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        i3322_value(white_noise())


def test_i3322_matches_direct_form_and_local_bound():
    values = []
    for p in oracles.deterministic_boxes_3():
        beh = Behavior(p)
        assert i3322_value(beh) == oracles.i3322_direct(p)
        values.append(i3322_value(beh))
    assert len(values) == 64 and max(values) == 0.0


def test_dimension_witness_qutrit_beats_qubit():
    qutrit, cfg = max_i3322_qutrits(restarts=30, seed=0)
    assert qutrit >= 0.20
    beh = behavior_from_qutrit(cfg)
    assert beh.p[1, 1, 0, 0] <= 1e-8 and beh.p[1, 0, 0, 1] <= 1e-8
    assert i3322_value(beh) == pytest.approx(qutrit, abs=1e-12)
    qubit, _ = max_i3322(2, restarts=30, seed=0)
    assert qubit <= 1e-6
    free, _ = max_i3322(3, zeros=(), restarts=30, seed=0)
    assert free >= qutrit - 1e-9


def test_search_is_seed_deterministic():
    a, _ = max_chsh_qubits({1, 2, 7}, restarts=3, seed=5)
    b, _ = max_chsh_qubits({1, 2, 7}, restarts=3, seed=5)
    assert a == b


def test_stop_above_ends_early():
    res = quantum.search(2, 2, 2, quantum.chsh_functional(), (), restarts=50, seed=0, stop_above=0.1)
    assert res.restarts < 50 and res.value > 0.1


def test_unpack_gives_unit_vectors(rng):
    x = rng.uniform(0, 2 * math.pi, kernels.n_params(3, 3, 3))
    psi, u, w = kernels.unpack_model(x, 3, 3, 3)
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-12)
    assert np.allclose(np.linalg.norm(w, axis=1), 1.0, atol=1e-12)
