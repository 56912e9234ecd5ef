import csv
import io
import json
import logging

import pytest

from hurwitzred import InconsistencyError, cli, report
from hurwitzred.cache import cache_key, cache_nielsen, load_nielsen
from hurwitzred.config import RunConfig
from hurwitzred.fixtures import allowlist_keys, diff_rows, load_reference
from hurwitzred.groups import build_psl2
from hurwitzred.nielsen import enumerate_nielsen, resolve_class_vector
from hurwitzred.report import emit_report, load_report, run_table


def test_config_roundtrip():
    cfg = RunConfig("psl2:11", ["11A,11A,11B,11B"], [3, 5], "json", "/tmp/c", 2, None)
    assert RunConfig.from_json(cfg.to_json()) == cfg
    assert RunConfig("psl2:7", primes="3,7").primes == [3, 7]


@pytest.mark.parametrize("bad", [
    {"group": "psl2:7", "colour": "red"},
    {"group": "psl2:x"},
    {"group": "sl3:5"},
    {"group": "psl2:7", "format": "xml"},
    {"group": "psl2:7", "workers": 0},
])
def test_config_rejects(bad):
    with pytest.raises(ValueError):
        RunConfig.from_dict(bad)


def test_table_psl5():
    rows = run_table(RunConfig("psl2:5", ["5A,5A,5B,5B"]))
    assert [(r.deg, r.genus) for r in rows] == [(2, 0), (5, 0)]
    assert rows[0].reductions == ()
    (s,) = rows[1].reductions
    assert (s.p, s.bad_components, s.gdeg) == (3, "1× N=3", 2)


def test_table_psl11_block():
    rows = run_table(RunConfig("psl2:11", ["11A,11A,11B,11B"]))
    assert [(r.deg, r.genus, r.num) for r in rows] == [(2, 0, 1), (16, 1, 1), (33, 2, 1)]
    assert [(s.p, s.gdeg) for s in rows[2].reductions] == [(3, 21), (5, 23)]


def test_table_dihedral():
    rows = run_table(RunConfig("dihedral:4"))
    assert len(rows) == 1 and rows[0].deg == 2


def test_gdeg_consistent_with_good_counts():
    for r in run_table(RunConfig("psl2:7")):
        for s in r.reductions:
            assert s.gdeg - s.gdeg_supersingular == s.d_bad // s.p


def test_emit_formats():
    rows = run_table(RunConfig("psl2:7"))
    pretty = emit_report(rows, "pretty").decode()
    assert "4^2;-;1^4 2^2" in pretty
    assert load_report(emit_report(rows, "json")) == rows
    doc = json.loads(emit_report(rows, "json"))
    assert doc["schema"] == report.SCHEMA
    lines = list(csv.reader(io.StringIO(emit_report(rows, "csv").decode())))
    assert len({len(line) for line in lines}) == 1
    with pytest.raises(ValueError):
        emit_report(rows, "xml")


def test_output_independent_of_workers(tmp_path):
    a = emit_report(run_table(RunConfig("psl2:11", workers=1)), "json")
    b = emit_report(run_table(RunConfig("psl2:11", workers=2)), "json")
    c = emit_report(run_table(RunConfig("psl2:11", cache_dir=str(tmp_path))), "json")
    d = emit_report(run_table(RunConfig("psl2:11", cache_dir=str(tmp_path))), "json")
    assert a == b == c == d


def test_cache_roundtrip_and_corruption(tmp_path, caplog):
    G = build_psl2(7)
    cv = resolve_class_vector(G, "7A,7A,7B,7B")
    ns = enumerate_nielsen(cv)
    key = cache_key("psl2:7", cv)
    assert load_nielsen(tmp_path, key, cv) is None
    path = cache_nielsen(tmp_path, key, ns)
    assert load_nielsen(tmp_path, key, cv).tuples == ns.tuples
    assert [p.name for p in tmp_path.iterdir()] == [path.name]

    doc = json.loads(path.read_text())
    doc["tuples"][0][1] += 1
    path.write_text(json.dumps(doc))
    with caplog.at_level(logging.WARNING):
        assert load_nielsen(tmp_path, key, cv) is None
    assert "checksum" in caplog.text

    path.write_text("{not json")
    assert load_nielsen(tmp_path, key, cv) is None


def test_cache_rejects_wrong_products(tmp_path):
    from hurwitzred.cache import _checksum
    G = build_psl2(5)
    cv = resolve_class_vector(G, "5A,5A,5B,5B")
    ns = enumerate_nielsen(cv)
    key = cache_key("psl2:5", cv)
    path = cache_nielsen(tmp_path, key, ns)
    doc = json.loads(path.read_text())
    doc["tuples"] = [[t[1], t[0], t[2], t[3]] for t in doc["tuples"]]
    doc["checksum"] = _checksum(doc["tuples"])
    path.write_text(json.dumps(doc))
    assert load_nielsen(tmp_path, key, cv) is None


@pytest.mark.parametrize("cmd", ["group", "nielsen", "components", "cusps", "reduce", "table"])
@pytest.mark.parametrize("fmt", ["json", "csv", "pretty"])
def test_cli_subcommands(cmd, fmt, capsysbinary):
    assert cli.main([cmd, "--group", "psl2:5", "--classes", "5A,5A,5B,5B", "--format", fmt]) == 0
    out = capsysbinary.readouterr().out
    assert out
    if fmt == "json":
        assert json.loads(out)["schema"].startswith("hurwitzred.")


def test_cli_exit_codes(monkeypatch, capsys):
    assert cli.main(["table", "--group", "nope"]) == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["table"])
    assert exc.value.code == 1

    def boom(*args, **kwargs):
        raise InconsistencyError("forced")
    monkeypatch.setattr(cli, "run_table", boom)
    assert cli.main(["table", "--group", "psl2:5"]) == 2


def test_cli_explicit_primes_annotated(capsys):
    assert cli.main(["table", "--group", "psl2:7", "--primes", "3,5", "--format", "json"]) == 0
    rows = load_report(capsys.readouterr().out)
    assert any("p=5: condition 1 fails" in n for n in rows[0].notes)


@pytest.mark.parametrize("ell", [5, 7, 11])
def test_reference_table_small(ell):
    ref, allow = load_reference()
    found = {d.key for d in diff_rows(run_table(RunConfig(f"psl2:{ell}")), ref, ell)}
    expected = {k for k in allowlist_keys(allow) if k[0] == ell}
    assert found == expected
