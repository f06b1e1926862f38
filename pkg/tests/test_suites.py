import json

import pytest

from fraisse_rank.errors import InputError
from fraisse_rank.suites import ACCEPTANCE, SUITES, Checker, run_suite, run_suites

SUPPORTING = sorted(set(SUITES) - set(ACCEPTANCE.values()))


def test_checker_keeps_first_failure():
    c = Checker()
    c.check(True, step=0)
    c.check(False, step=1, where={3, 1})
    c.check(False, step=2)
    assert c.count == 3 and c.failure == {"step": 1, "where": [1, 3]}


def test_checker_fault_inverts_first_check():
    c = Checker(fault=True)
    c.check(True, step=0)
    c.check(True, step=1)
    assert c.failure == {"injected_fault": True, "step": 0}


def test_unknown_suite():
    with pytest.raises(InputError, match="unknown suite"):
        run_suite("no-such-suite")


def test_suites_run_in_sorted_order():
    names = [r.name for r in run_suites(["tournament-hn", "graph-hn"])]
    assert names == ["graph-hn", "tournament-hn"]


def test_results_serialize_to_json():
    r = run_suite("tournament-hn", seed=3)
    data = json.loads(json.dumps(r.to_dict()))
    assert set(data) == {"suite", "passed", "checks", "seconds", "seed", "counterexample", "details"}
    assert data["seed"] == 3 and data["passed"] and data["counterexample"] is None


def test_fault_injection_fails_any_suite():
    r = run_suite("rank-property", fault=True)
    assert not r.passed and r.counterexample["injected_fault"] is True


@pytest.mark.parametrize("name", SUPPORTING)
def test_supporting_suites_pass(name):
    r = run_suite(name)
    assert r.passed, r.counterexample
    assert r.checks > 0


def test_scoped_kernel_suite_passes():
    r = run_suite("kernel-bounds-scoped")
    assert r.passed, r.counterexample


def test_suites_are_deterministic():
    a = run_suite("monotonicity", seed=5).to_dict()
    b = run_suite("monotonicity", seed=5).to_dict()
    a.pop("seconds"), b.pop("seconds")
    assert a == b
