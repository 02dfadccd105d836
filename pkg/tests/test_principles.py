import math

import numpy as np
import pytest

from bellscope.correlations import Behavior, local_box, mixture, pr_box, white_noise
from bellscope.errors import DomainError, PredicateInconsistent
from bellscope.geometry import Face, Segment, center_segment
from bellscope.principles import (
    boundary_mu,
    grid_scan,
    ml_value,
    satisfies_ml,
    satisfies_uffink,
    uffink_value,
    void_principle_report,
)

TSIRELSON_MU = math.sqrt(2) - 1


def isotropic(v):
    return mixture([pr_box(), white_noise()], [v, 1 - v])


def test_uffink_values():
    assert uffink_value(pr_box()) == pytest.approx(8.0)
    assert uffink_value(white_noise()) == 0.0
    assert uffink_value(local_box(0, 0, 0, 0)) == pytest.approx(4.0)
    assert not satisfies_uffink(pr_box())


def test_uffink_boundary_on_isotropic_line():
    # C_xy = v (+1,+1,+1,-1): statistic 8 v^2, so the boundary is v = 1/sqrt(2)
    v = 1 / math.sqrt(2)
    assert satisfies_uffink(isotropic(v - 1e-9))
    assert not satisfies_uffink(isotropic(v + 1e-9))


def test_ml_on_isotropic_line():
    # D_xy = C_xy, so the statistic is 4 asin(v), equal to pi at v = 1/sqrt(2)
    v = 1 / math.sqrt(2)
    assert ml_value(isotropic(0.5)).value == pytest.approx(4 * math.asin(0.5))
    assert satisfies_ml(isotropic(v - 1e-9))
    assert not satisfies_ml(isotropic(v + 1e-9))


def test_ml_degenerate_marginals():
    verdict = ml_value(local_box(0, 0, 0, 0))
    assert verdict.degenerate and verdict.satisfied and math.isnan(verdict.value)
    # C_x = -1 is degenerate as well
    assert ml_value(local_box(0, 1, 0, 1)).degenerate


def test_ml_domain_error():
    # |D| is a Pearson correlation, bounded for any genuine table; only a
    # table with negative entries (built here without validation) exceeds 1
    q = np.zeros((2, 2, 2, 2))
    q[:, :, 0, 0] = q[:, :, 1, 1] = 0.6
    q[:, :, 0, 1] = q[:, :, 1, 0] = -0.1
    fake = object.__new__(Behavior)
    object.__setattr__(fake, "p", q)
    with pytest.raises(DomainError):
        ml_value(fake)


def test_boundary_mu_examples():
    assert boundary_mu(center_segment(Face({2, 3, 4, 7, 8})), satisfies_uffink) <= 1e-5
    assert boundary_mu(center_segment(Face({2, 3, 4, 7, 8})), satisfies_ml) <= 1e-5
    assert boundary_mu(center_segment(Face({2, 5, 6, 7, 8})), satisfies_ml) <= 1e-5
    assert boundary_mu(center_segment(Face({2, 5, 6, 7, 8})), satisfies_uffink) > 1e-5
    assert boundary_mu(center_segment(Face({2, 3, 6, 7, 8})), satisfies_ml) > 1e-5
    assert boundary_mu(center_segment(Face({2, 3, 6, 7, 8})), satisfies_uffink) > 1e-5


def test_boundary_on_full_local_face_hits_tsirelson_line():
    # on the segment to the uniform mixture of L1..L8 both tests stop at sqrt(2) - 1
    seg = Segment(np.full(8, 1 / 8))
    assert boundary_mu(seg, satisfies_ml) == pytest.approx(TSIRELSON_MU, abs=1e-9)


def test_boundary_requires_accepted_local_end():
    with pytest.raises(PredicateInconsistent):
        boundary_mu(center_segment(Face({8})), lambda beh: False)
    assert boundary_mu(center_segment(Face({8})), lambda beh: True) == 1.0


def test_grid_scan_is_an_initial_interval(rng):
    for _ in range(5):
        seg = Segment(rng.dirichlet(np.ones(8)))
        for check in (satisfies_ml, satisfies_uffink):
            grid = grid_scan(seg, check, n=400)
            k = int(np.argmin(grid)) if not grid.all() else len(grid)
            assert grid[:k].all() and not grid[k:].any()
            mu = boundary_mu(seg, check)
            assert (k - 1) / 400 <= mu + 1e-12 and mu <= k / 400 + 1e-12


def test_void_principle_report_categories():
    both = void_principle_report(Face({2, 3, 4, 7, 8}))
    ml_only = void_principle_report(Face({2, 5, 6, 7, 8}))
    neither = void_principle_report(Face({2, 3, 6, 7, 8}))
    assert both["uffink"]["reproducible"] and both["ml"]["reproducible"]
    assert ml_only["ml"]["reproducible"] and not ml_only["uffink"]["reproducible"]
    assert not neither["ml"]["reproducible"] and not neither["uffink"]["reproducible"]
