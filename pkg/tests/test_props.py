import json

import pytest
from exceptiongroup import ExceptionGroup

from gasket.exceptions import PropertyViolation
from gasket.props import (
    SUITES,
    SuiteContext,
    check_distortion_floor,
    check_equivalence_relation,
    check_shortness_transfer,
    check_tensor_prefix_stability,
    run_props,
    run_suite,
)
from gasket.types.main import Suite
from gasket.types.reports import CheckResult


def _always_fails(ctx: SuiteContext) -> CheckResult:
    return CheckResult(name="always_fails", passed=False, witnesses=["d(x, y) = 2"])


@pytest.mark.parametrize("suite", [s for s in Suite if s != Suite.all])
def test_suite_passes(suite: Suite):
    result = run_suite(suite, seed=0, samples=10)
    failed = [check for check in result.checks if not check.passed]
    assert not failed, failed
    assert len(result.checks) == len(SUITES[suite])


def test_every_suite_is_registered():
    assert set(str(s) for s in SUITES) == {str(s) for s in Suite} - {"all"}


def test_run_suite_needs_a_single_suite():
    with pytest.raises(ValueError):
        run_suite("all")


def test_report_schema():
    report = run_props("completion", seed=3, samples=5)
    payload = json.loads(report.to_json())
    assert payload["schema"] == 1
    assert payload["seed"] == 3
    assert payload["passed"] is True
    assert payload["suites"][0]["suite"] == "completion"


def test_same_seed_same_report():
    first = run_props("functor", seed=1, samples=5)
    second = run_props("functor", seed=1, samples=5)
    assert first.to_json() == second.to_json()


def test_failures_are_reported(mocker):
    mocker.patch.dict(SUITES, {Suite.metric: [_always_fails]})
    report = run_props("metric", samples=5)
    assert not report.passed
    assert report.suites[0].checks[0].witnesses == ["d(x, y) = 2"]


def test_strict_raises_every_failure(mocker):
    mocker.patch.dict(SUITES, {Suite.metric: [_always_fails, _always_fails]})
    with pytest.raises(ExceptionGroup) as excinfo:
        run_props("metric", samples=5, strict=True)
    violations = excinfo.value.exceptions
    assert len(violations) == 2
    assert all(isinstance(v, PropertyViolation) for v in violations)
    assert str(violations[0]) == "metric.always_fails: d(x, y) = 2"


def test_scaled_sample_counts():
    ctx = SuiteContext(seed=0, samples=10, tol=2**-10)
    assert ctx.scaled(0.5) == 5
    assert ctx.scaled(0.01, minimum=3) == 3


def test_distortion_floor_is_a_half():
    result = check_distortion_floor(SuiteContext(seed=0, samples=10, tol=2**-10), depth=5)
    assert result.passed
    assert 0.5 - 1e-12 <= result.details["min_ratio"] <= 1


@pytest.mark.parametrize("check", [check_equivalence_relation, check_tensor_prefix_stability])
def test_address_checks_pass(check):
    assert check(SuiteContext(seed=2, samples=50, tol=2**-10)).passed


def test_shortness_transfer_covers_a_non_discrete_carrier():
    result = check_shortness_transfer(SuiteContext(seed=0, samples=20, tol=2**-10))
    assert result.passed, result.witnesses
    assert result.details["statuses"]["address"] == "pass"
    assert result.details["statuses"]["gasket"] == "precondition unmet"
