import math

import numpy as np

from qutrit_teleport import checks
from qutrit_teleport.channels import ad_pair_kraus, fcad_kraus
from qutrit_teleport.linalg import KrausSet


def _corrupted_fcad(d, weight=1.0):
    """FCAD set with a wrong constant: sqrt(1 - d) replaced by (1 - d) on |11>."""
    good = fcad_kraus(d, weight)
    a00 = good.operators[0].copy()
    a00[4, 4] = 1.0 - d.d1
    return KrausSet((a00,) + good.operators[1:], label="FCAD-corrupted", weight=weight)


def test_cptp_check_catches_corrupted_constant():
    results = checks.criterion_cptp(np.random.default_rng(1), n=50, fcad=_corrupted_fcad)
    completeness = results[0]
    assert completeness.status == checks.FAIL
    assert completeness.residual > 1e-6


def test_cptp_check_passes_for_real_builders():
    results = checks.criterion_cptp(np.random.default_rng(1), n=50, ad_pair=ad_pair_kraus)
    assert all(r.status == checks.PASS for r in results)


def test_result_line_format():
    r = checks.CheckResult(3, "thing", checks.PASS, 1e-14, 1e-12, "note")
    assert r.line().startswith("[PASS] C03 thing: residual=1.000e-14 tol=1e-12")
    r = checks.CheckResult(10, "finding", checks.INFO, 0.5)
    assert "tol" not in r.line()


def test_report_status():
    ok = checks.VerifyReport([checks.CheckResult(1, "a", checks.PASS, 0.0), checks.CheckResult(2, "b", checks.INFO, 1.0)])
    assert ok.ok and "0 failed" in ok.render()
    bad = checks.VerifyReport(ok.results + [checks.CheckResult(3, "c", checks.FAIL, 1.0)])
    assert not bad.ok and bad.failures[0].name == "c"


def test_consistency_report_names_matching_variant():
    results = checks.criterion_consistency()
    assert all(r.status == checks.INFO for r in results)
    (match,) = [r for r in results if "match the" in r.name]
    assert "printed element table" in match.name and match.residual < 1e-12
