from math import comb

import pytest

from quartic_chow.pipeline.donaldson import DonaldsonQuery, conjecture_values, euler_P2
from quartic_chow.pipeline.stages import DEPENDENCIES, STAGE_ORDER, Pipeline, StageError
from quartic_chow.pipeline.weyl import anti_invariants, weyl_data


def test_stage_order_respects_dependencies():
    seen = set()
    for name in STAGE_ORDER:
        assert set(DEPENDENCIES.get(name, ())) <= seen
        seen.add(name)


def test_unknown_stage():
    with pytest.raises((StageError, KeyError)):
        Pipeline().run("nonsense")


def test_every_stage_passes(pipeline):
    for name in STAGE_ORDER:
        rep = pipeline.reports[name]
        failed = [c.name for c in rep.checks if not c.passed]
        assert not failed, (name, failed)


def test_anti_invariants_are_alternating():
    w = weyl_data()
    gens = anti_invariants(w)
    assert len(gens) == 7
    for g in gens:
        for element in w.group:
            assert w.act(element, g) == g * element[2]


def test_discovery_mode_regenerates_the_presentation():
    p = Pipeline(mode="discovery")
    rep = p.run("M")
    assert rep.passed
    assert any("regenerated" in c.name and c.passed for c in rep.checks)


def test_vanishing_annotation():
    assert DonaldsonQuery(3, 6, 0).vanishing
    assert not DonaldsonQuery(3, 5, 0).vanishing
    assert DonaldsonQuery(0, 0, 1).vanishing
    assert not DonaldsonQuery(-1, -4, 0).vanishing
    assert DonaldsonQuery(8, 5, 0).bogomolov and not DonaldsonQuery(9, 5, 0).bogomolov


@pytest.mark.parametrize("m", range(-3, 8))
def test_plane_euler(m):
    assert euler_P2(m) == (m + 1) * (m + 2) // 2


def test_chi_is_polynomial_in_the_class(pipeline):
    calc = pipeline.donaldson()
    # chi(O) = 1 on a rational variety; Serre duality with K = -12 alpha
    assert calc.chi(0, 0) == 1
    for p in range(-3, 4):
        for q in range(-2, 3):
            assert calc.chi(p, q) == -calc.chi(-12 - p, -q)


def test_conjecture_values_for_the_first_curve_class(pipeline):
    values = conjecture_values(pipeline, 1, 6)
    assert [(m, chi) for m, chi, _ in values] == [(m, comb(m + 2, m)) for m in range(7)]
