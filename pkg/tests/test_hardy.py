import itertools
import math

import numpy as np
import pytest

import oracles
from bellscope import npa
from bellscope.correlations import Behavior, chsh_value, index_of, local_box, pr_box
from bellscope.errors import ConditionsViolated
from bellscope.geometry import local_vertex, void_edges
from bellscope.hardy import (
    CANONICAL,
    HARDY_SUCCESS,
    HardyArgument,
    config_for,
    enumerate_arguments,
    hardy_config,
    hardy_max_point,
    hardy_point,
    hardy_segment,
    hardy_success,
    l_h_point,
    l_h_weights,
    pr_symmetries,
    table1,
)
from bellscope.quantum import behavior_from_qubit

SQRT5 = math.sqrt(5)

EXPECTED_ZEROS = {
    (0, 0, 0): {3, 6, 7},
    (0, 0, 1): {1, 6, 7},
    (0, 1, 0): {2, 3, 7},
    (0, 1, 1): {2, 3, 5},
    (1, 0, 0): {4, 5, 8},
    (1, 0, 1): {2, 5, 8},
    (1, 1, 0): {1, 4, 8},
    (1, 1, 1): {1, 4, 6},
}


def test_canonical_argument():
    assert CANONICAL.zero_indices == {6, 3, 7}
    assert set(CANONICAL.zero_entries) == {(1, 0, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1)}
    assert CANONICAL.success_entry == (0, 0, 0, 0)


def test_enumeration_and_indices():
    args = enumerate_arguments()
    assert len(args) == 8
    for arg in args:
        assert set(arg.zero_indices) == EXPECTED_ZEROS[(arg.a, arg.x, arg.y)]
        assert all(index_of(*e) <= 8 for e in arg.zero_entries)
        assert index_of(*arg.success_entry) > 8
        assert arg.face.dim == 5


def test_hardy_faces_contain_no_void_edge():
    for arg in enumerate_arguments():
        assert not any(e <= arg.zero_indices for e in void_edges())


def test_pr_box_satisfies_every_argument():
    for arg in enumerate_arguments():
        assert hardy_success(pr_box(), arg) == 0.5


def test_local_boxes_never_succeed():
    # the content of the argument: no deterministic strategy meets the zeros and succeeds
    for arg in enumerate_arguments():
        for bits in itertools.product((0, 1), repeat=4):
            try:
                assert hardy_success(local_box(*bits), arg) == 0.0
            except ConditionsViolated:
                pass


def test_table1_matches_born_rule():
    beh = hardy_max_point()
    for (x, y), row in table1().items():
        for (a, b), value in row.items():
            assert beh.prob(a, b, x, y) == pytest.approx(value, abs=1e-12)
    assert beh.prob(0, 0, 0, 0) == pytest.approx(0.0901699, abs=1e-7)
    assert beh.prob(1, 1, 1, 1) == pytest.approx(0.2360680, abs=1e-7)
    for e in CANONICAL.zero_entries:
        assert beh.prob(*e) <= 1e-12


def test_hardy_state_is_normalized():
    assert np.linalg.norm(hardy_config().state) == pytest.approx(1.0, abs=1e-12)


def test_success_examples():
    assert hardy_success(hardy_max_point()) == pytest.approx(HARDY_SUCCESS, abs=1e-12)
    assert hardy_success(l_h_point()) == 0.0
    with pytest.raises(ConditionsViolated):
        hardy_success(local_box(1, 1, 0, 0))


def test_l_h_weights():
    w = l_h_weights()
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    assert w[0] == pytest.approx((9 - SQRT5) / 38, abs=1e-15)
    assert w[7] == pytest.approx((1 + 2 * SQRT5) / 19, abs=1e-15)
    assert set(np.flatnonzero(w) + 1) == {1, 2, 4, 5, 8}


def test_hardy_point_lies_on_segment_to_l_h():
    seg = hardy_segment()
    mu = 2 * HARDY_SUCCESS
    assert np.abs(seg.point(mu).p - hardy_max_point().p).max() < 1e-10
    assert chsh_value(hardy_max_point()) == pytest.approx(mu, abs=1e-12)


def test_success_linear_along_segment():
    seg = hardy_segment()
    for mu in np.linspace(0, 1, 11):
        assert hardy_success(seg.point(mu)) == pytest.approx(mu / 2, abs=1e-14)


def test_satisfying_points_are_nonlocal(rng):
    for arg in enumerate_arguments():
        verts = [local_vertex(i) for i in arg.face.local_vertices]
        for _ in range(50):
            w = rng.dirichlet(np.ones(len(verts) + 1))
            p = w[0] * pr_box().p + sum(wi * v.p for wi, v in zip(w[1:], verts))
            beh = Behavior(p)
            if hardy_success(beh, arg) > 0:
                assert chsh_value(beh) > 0


def test_relabelings_preserve_pr():
    syms = pr_symmetries()
    assert len(syms) == 16
    for r in syms:
        assert np.array_equal(r.apply(pr_box()).p, pr_box().p)


def test_relabeling_on_configs_matches_behaviors():
    cfg = hardy_config()
    for r in pr_symmetries():
        direct = r.apply(behavior_from_qubit(cfg)).p
        realised = behavior_from_qubit(r.apply_config(cfg)).p
        assert np.abs(direct - realised).max() <= 1e-12


@pytest.mark.parametrize("arg", enumerate_arguments(), ids=str)
def test_every_argument_has_optimal_quantum_point(arg):
    beh = hardy_point(arg)
    assert hardy_success(beh, arg) == pytest.approx(HARDY_SUCCESS, abs=1e-12)
    assert arg.face.contains(beh, 1e-12)
    assert chsh_value(beh) > 0.18
    assert np.linalg.norm(config_for(arg).state) == pytest.approx(1.0, abs=1e-12)


def test_hardy_point_is_almost_quantum_and_valid():
    beh = hardy_max_point()
    assert beh.violations() == []
    assert npa.contains(beh, "1+ab")


def test_exact_almost_quantum_value_from_oracle():
    # an external solver puts the 1+ab Hardy maximum at the quantum value itself
    exact = oracles.npa_max_mu(l_h_point().p, "1+ab") / 2
    assert exact == pytest.approx(HARDY_SUCCESS, abs=2e-5)
    assert npa.hardy_almost_quantum() >= exact - 1e-6


def test_arguments_are_distinct():
    assert len({a.zero_indices for a in enumerate_arguments()}) == 8
    assert HardyArgument(1, 1, 1).i == 1 and HardyArgument(1, 1, 1).j == 0
