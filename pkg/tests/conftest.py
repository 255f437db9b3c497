"""Suite-wide pytest configuration.

Registers the ``acceptance`` marker and collects per-criterion verdicts from
the acceptance tests so the terminal summary ends with one PASS/FAIL line
per criterion, independent of how many test functions feed each one.
"""

from collections import OrderedDict

import pytest

_CRITERIA: "OrderedDict[str, list[tuple[str, bool, str]]]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance: full-budget acceptance criteria "
        "(campaign runs are cached under tests/_cache)",
    )


@pytest.fixture
def record_criterion():
    """Record one named part of an acceptance criterion.

    Usage: ``record_criterion("A3", "F2 psl vs sobol", passed, detail)``.
    A criterion passes when every recorded part passed.
    """

    def _record(criterion: str, label: str, passed: bool, detail: str) -> None:
        _CRITERIA.setdefault(criterion, []).append((label, bool(passed), detail))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for criterion in sorted(_CRITERIA):
        parts = _CRITERIA[criterion]
        ok = all(passed for _, passed, _ in parts)
        verdict = "PASS" if ok else "FAIL"
        markup = {"green": True} if ok else {"red": True}
        tr.write(f"{criterion} {verdict}", bold=True, **markup)
        if len(parts) == 1:
            tr.write_line(f" — {parts[0][0]}: {parts[0][2]}")
        else:
            tr.write_line("")
            for label, passed, detail in parts:
                mark = "ok " if passed else "FAIL"
                tr.write_line(f"    [{mark}] {label}: {detail}")
