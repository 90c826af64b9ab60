from fractions import Fraction

import pytest

from rforms.cli import main
from rforms.rmatrix import build_rmatrix
from rforms.verify import RunConfig, parse_report, report_diff, run, serialize


def records(text):
    return parse_report(text)[1]


def cli(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out.read_text() if out.exists() else None


def test_exit_codes(tmp_path, capsys):
    assert cli(tmp_path, "gl.jsonl", "--series", "gl", "--n", "2", "--suites", "axioms,modular")[0] == 0
    # O3 fails the span target of the classification
    assert cli(tmp_path, "o.jsonl", "--series", "o", "--n", "3", "--suites", "classify")[0] == 1
    assert main(["--series", "sl", "--n", "2", "--z", "q"]) == 2
    assert main(["--series", "o", "--n", "1"]) == 2
    assert main(["--series", "gl"]) == 2
    assert main(["--series", "gl", "--n", "2", "--degree", "4"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["--series", "gl", "--n", "2", "--suites", "nonsense"])
    assert exc.value.code == 2
    assert main(["--series", "sp", "--n", "6", "--degree", "3", "--suites", "axioms"]) == 3
    capsys.readouterr()


def test_report_shape(tmp_path):
    _, text = cli(tmp_path, "r.jsonl", "--series", "gl", "--n", "2", "--suites", "toy,modular")
    header, recs = parse_report(text)
    assert header["schema"] == "rforms-report" and header["config"]["N"] == 2
    for r in recs.values():
        assert set(r) == {"check", "anchor", "status", "witness", "values"}
        assert r["status"] in ("pass", "fail", "skipped")
        assert (r["status"] == "fail") <= bool(r["witness"])


def test_deterministic_across_threads():
    texts = set()
    for threads in (1, 4):
        cfg = RunConfig("o", 3, suites=("axioms", "bwm", "modular"), threads=threads)
        texts.add(serialize(run(cfg), cfg))
    assert len(texts) == 1


def test_timings_only_on_request():
    cfg = RunConfig("gl", 2, suites=("toy",))
    reps = run(cfg)
    assert "wall_time_ms" not in serialize(reps, cfg)
    assert "wall_time_ms" in serialize(reps, cfg, timing=True)


def test_diff(tmp_path):
    _, a = cli(tmp_path, "a.jsonl", "--series", "o", "--n", "3", "--suites", "modular")
    _, b = cli(tmp_path, "b.jsonl", "--series", "o", "--n", "3", "--suites", "modular", "--z", "-1")
    assert report_diff(a, a) == ""
    # the modular records do not see the scale of r_z
    assert report_diff(a, b, only=["modular"]) == ""
    _, c = cli(tmp_path, "c.jsonl", "--series", "o", "--n", "3", "--suites", "classify", "--invert-q")
    _, d = cli(tmp_path, "d.jsonl", "--series", "o", "--n", "3", "--suites", "classify")
    assert report_diff(c, d, only=["classify.solution_set"]) == ""
    assert main(["--diff", str(tmp_path / "a.jsonl"), str(tmp_path / "a.jsonl")]) == 0
    bumped = a.replace('"version": 1', '"version": 2')
    with pytest.raises(ValueError):
        report_diff(a, bumped)


def test_toy_suite_does_not_touch_quantum_groups():
    build_rmatrix.cache_clear()
    reps = run(RunConfig("sp", 6, suites=("toy",)))
    assert all(r.status != "fail" for r in reps)
    assert build_rmatrix.cache_info().currsize == 0


@pytest.mark.parametrize("t0", [Fraction(1), Fraction(2)])
def test_t0_precheck_never_changes_a_verdict(t0):
    suites = ("axioms", "bwm")
    plain = records(serialize(run(RunConfig("sp", 4, suites=suites)), RunConfig("sp", 4)))
    hinted = records(serialize(run(RunConfig("sp", 4, suites=suites, t0=t0)), RunConfig("sp", 4)))
    assert plain.keys() == hinted.keys()
    for k in plain:
        assert plain[k]["status"] == hinted[k]["status"]
    rank = hinted["bwm.rank"]["values"]
    assert rank["rank"] == 14 and rank["precheck"]["t0"] == str(t0)
