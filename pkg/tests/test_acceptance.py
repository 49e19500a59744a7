"""One test per reproduction criterion; each prints a single PASS/FAIL line."""
import json

import pytest

from liesym import verify


@pytest.mark.parametrize("check", verify.CHECKS, ids=[c.check_id for c in verify.CHECKS])
def test_criterion(check, capsys):
    rec = verify.run_check(check)
    with capsys.disabled():
        print(f"\n{rec['check_id']} {rec['status'].upper()} {rec['ref']} :: {json.dumps(rec['measured'])}")
    assert rec["status"] == "pass", json.dumps(rec, indent=2)


def test_report_lists_each_criterion_once():
    ids = [c.check_id for c in verify.CHECKS]
    assert ids == [f"AC{i:02d}" for i in range(1, 11)]
