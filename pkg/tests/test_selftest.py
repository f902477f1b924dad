import io

from releq import selftest


def test_every_module_has_checks():
    modules = {m for m, _, _ in selftest.CHECKS}
    assert modules == {"matcore", "classical_info", "qstate", "qchannel", "qentropy", "entanglement", "protocols", "qalgo"}


def test_run_reports_all_pass():
    buf = io.StringIO()
    assert selftest.run(out=buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == len(selftest.CHECKS) + 1
    assert all(line.startswith("PASS") for line in lines[:-1])


def test_failing_check_is_reported(monkeypatch):
    monkeypatch.setattr(selftest, "CHECKS", [("demo", "always fails", lambda: (False, "nope"))])
    buf = io.StringIO()
    assert not selftest.run(out=buf)
    assert buf.getvalue().startswith("FAIL")
