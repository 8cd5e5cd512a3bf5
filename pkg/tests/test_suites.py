import pytest

from gptentropy import models
from gptentropy.entropy import EvalConfig
from gptentropy.suites import SUITES, Check, SuiteReport, k_sensitivity, run_suite


def test_report_passes_iff_all_checks_pass():
    good = Check("a", "x", 0.0, 1.0, True)
    bad = Check("b", "x", 2.0, 1.0, False)
    assert SuiteReport("s", [good, good]).passed
    assert not SuiteReport("s", [good, bad]).passed
    assert SuiteReport("s", [good, bad]).to_dict()["pass"] is False


@pytest.mark.parametrize("name", ["pure-restriction", "concavity", "classical-invariance"])
def test_small_suites_pass(name):
    name = "footnote-pure" if name == "pure-restriction" else name
    report = run_suite(name, EvalConfig.quick())
    assert report.passed, report.checks
    assert report.config["seed"] == 0


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_suite_names_cover_the_cli_contract():
    for name in ("squared-chain", "squared-holevo", "classical-invariance",
                 "qubit-invariance", "qubit-holevo", "footnote-pure"):
        assert name in SUITES


def test_k_sensitivity_report():
    report = k_sensitivity(EvalConfig.quick())
    s = tuple(report["state"])
    assert set(report["values"]["S2'"]) == {"2", "3", "4", "5", "6"}
    for v in report["values"]["S2'"].values():
        assert v == pytest.approx(models.squared_s2prime_closed(s), abs=5e-3)
