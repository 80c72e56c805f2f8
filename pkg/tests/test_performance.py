import pytest

from stochastic_polytope.enumeration import latin_count_backtrack
from stochastic_polytope.performance import PerformanceMonitor, get_performance_monitor, monitor_performance


def test_start_and_end_operation():
    monitor = PerformanceMonitor()
    metrics = monitor.start_operation("count", n=3)
    monitor.end_operation(metrics, success=True, result=12)
    summary = monitor.get_operation_summary()
    assert summary["total_operations"] == 1
    assert summary["successful_operations"] == 1
    assert summary["operations"][0]["details"] == {"n": 3, "result": 12}
    assert summary["operations"][0]["duration"] >= 0


def test_empty_summary():
    assert PerformanceMonitor().get_operation_summary() == {}


def test_decorator_records_success_and_failure():
    @monitor_performance("flaky")
    def flaky(fail):
        if fail:
            raise ValueError("no")
        return "ok"

    assert flaky(False) == "ok"
    with pytest.raises(ValueError):
        flaky(True)

    summary = get_performance_monitor().get_operation_summary()
    assert summary["successful_operations"] == 1
    assert summary["failed_operations"] == 1
    assert summary["operations"][1]["error"] == "no"


def test_library_operations_are_monitored():
    latin_count_backtrack(3)
    names = [op["operation"] for op in get_performance_monitor().get_operation_summary()["operations"]]
    assert names == ["latin_count_backtrack"]
