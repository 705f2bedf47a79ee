import json

import pytest

from mtt import cli, harness
from mtt.algebra import QQ, Polynomial
from mtt.harness import CampaignConfig, generate_random_instance, preset_instance, run_campaign
from mtt.report import compare, parse_report, render_report


def test_generation_is_deterministic():
    a = generate_random_instance(1, 4, 2, "quaternion", trace="re")
    b = generate_random_instance(1, 4, 2, "quaternion", trace="re")
    assert a == b and a.digest() == b.digest()
    assert generate_random_instance(2, 4, 2, "quaternion", trace="re") != a


@pytest.mark.parametrize("ring", ["gaussian", "quaternion"])
def test_unitary_elements_have_norm_one(ring):
    inst = generate_random_instance(3, 4, 2, ring, trace="re", unitary=True, symmetric=True)
    for (i, j), x in inst.holonomies.items():
        assert x * x.conj() == inst.ring.one
        assert inst.h(j, i) == x.conj()


def test_kirchhoff_preset():
    reports, status, _ = run_campaign(CampaignConfig("mtkz", n=4, m=3, preset="kirchhoff"))
    assert status == 0
    (r,) = reports
    assert r.lhs_terms == r.rhs_terms == 16


def test_zaslavsky_preset():
    reports, status, _ = run_campaign(CampaignConfig("mtkz", n=3, m=2, preset="zaslavsky", trials=5))
    assert status == 0 and all(r.theorem == "mtkz:zaslavsky" for r in reports)


@pytest.mark.parametrize("preset", ["forman", "chaiken:4", "kenyon"])
def test_other_presets(preset):
    reports, status, _ = run_campaign(CampaignConfig("mtkz", n=3, preset=preset))
    assert status == 0 and len(reports) == 3


def test_kenyon_coefficients_nonnegative():
    from mtt.forests import rhs_sym

    inst = preset_instance("kenyon", 0, 3, 3)
    P = rhs_sym(inst)
    assert all(c >= 0 for c in P.terms.values())


def test_group_ring_average_is_an_input_error():
    reports, status, err = run_campaign(CampaignConfig("mttnall", ring="group_ring:3"))
    assert status == 2 and reports == [] and "1/N" in err


def test_bad_config():
    with pytest.raises(Exception):
        CampaignConfig("nonsense")
    with pytest.raises(Exception):
        CampaignConfig("mtkz", trials=0)
    with pytest.raises(Exception):
        CampaignConfig("mtkz", det_cap=0)


def test_failure_exits_one(monkeypatch):
    from mtt import forests

    real = forests.rhs_mtkz

    def broken(inst, **kw):
        return real(inst, **kw) + Polynomial.var(inst.target, ("a", 1, 2))

    monkeypatch.setattr(forests, "rhs_mtkz", broken)
    reports, status, _ = run_campaign(CampaignConfig("mtkz", n=2, m=1, ring="rational"))
    assert status == 1 and not reports[0].equal
    assert "a1_2" in render_report(reports[0])


def test_report_rendering():
    P = Polynomial.var(QQ, ("a", 1, 2))
    ok = compare("mtkz", "abc", P, P)
    assert "VERIFIED" in render_report(ok)
    bad = compare("mtkz", "abc", P, P * 2)
    text = render_report(bad)
    assert "FAILED" in text and "a1_2" in text
    for r in (ok, bad):
        assert parse_report(render_report(r, "json", timings=True)) == r


def test_reports_identical_across_workers():
    outs = []
    for w in (1, 3):
        reports, status, _ = run_campaign(CampaignConfig("mtkzn", seed=5, n=2, N=2, workers=w))
        outs.append("".join(render_report(r, "json") for r in reports))
    assert outs[0] == outs[1]


def run_cli(capsys, *argv):
    status = cli.main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_cli_verify_random(capsys):
    status, out, _ = run_cli(capsys, "verify", "--theorem", "sym", "--random", "--n", "3", "--ring", "gaussian",
                             "--format", "json")
    assert status == 0
    assert all(r["equal"] for r in json.loads(out))


def test_cli_file_commands(tmp_path, capsys):
    path = tmp_path / "k4.json"
    path.write_text(json.dumps({"n": 4, "m": 3, "ring": "rational", "trace": "id", "weight_mode": "specialized"}))
    assert run_cli(capsys, "det", "--instance", str(path), "--minor", "3")[1] == "16\n"
    assert run_cli(capsys, "expand", "--theorem", "mtkz", "--instance", str(path))[1] == "16\n"
    status, out, _ = run_cli(capsys, "verify", "--theorem", "mtkz", "--instance", str(path))
    assert status == 0 and "[VERIFIED]" in out


def test_cli_lifted_det(tmp_path, capsys):
    inst = generate_random_instance(0, 2, 2, "rational", N=2)
    path = tmp_path / "lift.json"
    path.write_text(json.dumps(inst.to_document()))
    status, out, _ = run_cli(capsys, "verify", "--theorem", "mtkzn", "--instance", str(path))
    assert status == 0
    det = run_cli(capsys, "det", "--instance", str(path), "--minor", "2")[1]
    rhs = run_cli(capsys, "expand", "--theorem", "mtkzn", "--instance", str(path))[1]
    assert det == rhs


def test_cli_forests(capsys):
    status, out, _ = run_cli(capsys, "forests", "--n", "3", "--m", "3")
    assert status == 0 and out.endswith("8 forests\n")
    out = run_cli(capsys, "forests", "--n", "4", "--m", "3", "--classes")[1]
    assert "orbit=2" in out


def test_cli_errors(tmp_path, capsys):
    assert run_cli(capsys, "verify", "--theorem", "mtkz", "--instance", str(tmp_path / "none.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "m": 4, "ring": "rational", "trace": "id"}')
    status, _, err = run_cli(capsys, "verify", "--theorem", "mtkz", "--instance", str(bad))
    assert status == 2 and "m out of range" in err
    assert run_cli(capsys, "verify", "--theorem", "mttnall", "--random", "--ring", "group_ring:2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--theorem", "bogus"])
    assert exc.value.code == 2


def test_cli_det_cap(tmp_path, capsys, monkeypatch):
    path = tmp_path / "k5.json"
    path.write_text(json.dumps({"n": 5, "m": 4, "ring": "rational", "trace": "id"}))
    monkeypatch.setenv("MTT_DET_CAP", "3")
    assert run_cli(capsys, "det", "--instance", str(path), "--minor", "4")[0] == 2
    assert run_cli(capsys, "det", "--instance", str(path), "--minor", "4", "--force-large")[0] == 0


def test_cli_simplicial(tmp_path, capsys):
    path = tmp_path / "cx.json"
    path.write_text(json.dumps({"complex": {"v": 4, "d": 2}, "ring": "rational", "trace": "id",
                                "weight_mode": "specialized"}))
    assert run_cli(capsys, "det", "--instance", str(path), "--minor", "3")[1] == "4\n"
    status, out, _ = run_cli(capsys, "verify", "--theorem", "cw", "--instance", str(path))
    assert status == 0
