"""Harness-level tests: each property check passes at desk scale and is
reproducible from (property_id, seed, trials)."""

import pytest

from greenpoles.properties import (
    PROPERTY_IDS,
    PropertyReport,
    Violation,
    check_axiom_E,
    check_inf_family_subharmonic,
    check_log_psh_slices,
    check_monotone_convergence,
    check_twin_pole_gap,
    run_property,
)


SMALL = {
    "axiom_E": (60, 0),
    "axiom_H": (60, 0),
    "axiom_M": (60, 0),
    "chain": (60, 0),
    "product_dmax": (60, 0),
    "product_m_single_factor": (60, 0),
    "log_psh_slices": (40, 0),
}


@pytest.mark.parametrize("pid", sorted(SMALL))
def test_checks_pass_at_small_scale(pid):
    trials, seed = SMALL[pid]
    rep = run_property(pid, trials, seed)
    assert rep.ok, rep.violations[:3]
    assert rep.property_id == pid
    assert rep.max_gap <= rep.tolerance


def test_seed_only_checks_pass():
    assert check_monotone_convergence(0, instances=12).ok
    assert check_inf_family_subharmonic(0, circles=40).ok
    assert check_twin_pole_gap(0).ok


def test_reports_are_reproducible():
    a = check_axiom_E(50, 123)
    b = check_axiom_E(50, 123)
    assert a == b
    c = check_log_psh_slices(20, 9)
    d = check_log_psh_slices(20, 9)
    assert c == d


def test_different_seeds_draw_different_instances():
    a = check_axiom_E(50, 1)
    b = check_axiom_E(50, 2)
    assert a.max_gap != b.max_gap or a is not b


def test_record_shape():
    rep = check_axiom_E(10, 0)
    rec = rep.to_record()
    assert rec["property_id"] == "axiom_E"
    assert rec["ok"] is True
    assert rec["trials"] == 10
    assert isinstance(rec["violations"], list)


def test_violations_carry_reproducer():
    rep = PropertyReport(
        "demo", 1, 1e-10, (Violation("trial=3 kind=x", 0.5, 0.4, 0.1),), 0.1
    )
    assert not rep.ok
    assert rep.to_record()["violations"][0]["instance"] == "trial=3 kind=x"


def test_registry_covers_the_suite():
    assert set(PROPERTY_IDS) == {
        "axiom_E", "axiom_H", "axiom_M", "chain", "monotone_convergence",
        "product_dmax", "product_m_single_factor", "log_psh_slices",
        "inf_family_subharmonic", "twin_pole_gap",
    }


def test_twin_pole_report_details():
    rep = check_twin_pole_gap(0)
    text = "\n".join(rep.details)
    assert "reference_only" in text
    assert "identity" in text  # the recorded transfer constraint
