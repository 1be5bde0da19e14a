import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

import netmh

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"
CLI = os.environ.get("NETMH_CLI")

SMALL = {"dynamic_max_nodes": "3", "cv_repeats": "2"}


def schema_for(path):
    kind = path.name.split("_")[0].removesuffix(".json")
    return json.loads((SCHEMAS / f"{kind}.schema.json").read_text())


@pytest.fixture(scope="module")
def bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("bundle")
    netmh.synth(out, nodes=48, weeks=8, base_prob=0.1, labeled_fraction=0.9, seed=3)
    return out


@pytest.fixture(scope="module")
def reports(bundle):
    written = netmh.run(bundle / "netmh.cfg", SMALL)
    return [pathlib.Path(p) for p in written]


def test_every_json_report_matches_its_schema(reports):
    jsons = [p for p in reports if p.suffix == ".json"]
    kinds = {p.name.split("_")[0].removesuffix(".json") for p in jsons}
    assert kinds == {"ingest", "task1", "task2", "task3"}
    for path in jsons:
        jsonschema.validate(json.loads(path.read_text()), schema_for(path), cls=jsonschema.Draft202012Validator)


def test_report_contents(reports):
    by_name = {p.name: p for p in reports}
    t1 = json.loads(by_name["task1_depressed.json"].read_text())
    assert len(t1["magnitude"]) == 8 and len(t1["fluctuation"]) == 8
    t2 = json.loads(by_name["task2_degree_anxious.json"].read_text())
    for c in t2["clusters"]:
        assert c["percent_positive"] + c["percent_negative"] == pytest.approx(100)
    assert sum(c["size"] for c in t2["clusters"]) == t2["population"]
    t3 = json.loads(by_name["task3_depressed.json"].read_text())
    assert len(t3["models"]) == 12
    assert {b["model"] for b in t3["baselines"]} == {"random_guess"}


def test_rerun_is_byte_identical(bundle, reports):
    before = {p: p.read_bytes() for p in reports}
    again = [pathlib.Path(p) for p in netmh.run(bundle / "netmh.cfg", SMALL)]
    assert {p: p.read_bytes() for p in again} == before


def test_feature_export(bundle, tmp_path):
    out = tmp_path / "stat.csv"
    netmh.export_features("stat_centrality", out, bundle / "netmh.cfg")
    header = out.read_text().splitlines()[0].split(",")
    assert header[0] == "node_id" and len(header) == 9
    with pytest.raises(ValueError):
        netmh.export_features("bogus", out, bundle / "netmh.cfg")


def test_statistics():
    assert netmh.wilcoxon_rank_sum([1, 2, 3], [4, 5, 6])["p_value"] == pytest.approx(0.1)
    assert netmh.wilcoxon_signed_rank([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])["p_value"] == pytest.approx(0.0625)
    assert netmh.hypergeom_enrichment(10, 5, 5, 5)["p_value"] == pytest.approx(1 / 252)
    assert netmh.bh_fdr([0.01, 0.02, 0.03, 0.04]) == pytest.approx([0.04] * 4)
    cols, rows = netmh.static_gdv(3, [(0, 1), (1, 2), (0, 2)])
    assert rows[0][cols.index("o3")] == 1


def test_missing_labels_raises_stage_error(bundle, tmp_path):
    with pytest.raises(netmh.StageError, match="load_labels"):
        netmh.run(bundle / "netmh.cfg", {"labels_path": str(bundle / "absent.csv"), "output_dir": str(tmp_path)})
    assert not any(tmp_path.iterdir())


@pytest.mark.skipif(not CLI, reason="NETMH_CLI not set")
def test_cli_exit_codes(bundle, tmp_path):
    def run(*args):
        return subprocess.run([CLI, *args], capture_output=True, text=True)

    ok = run("ingest", "-c", str(bundle / "netmh.cfg"), "-o", str(tmp_path / "ok"))
    assert ok.returncode == 0 and (tmp_path / "ok" / "ingest.json").exists()

    missing = run("task1", "-c", str(bundle / "netmh.cfg"), "-s", f"labels_path={bundle / 'absent.csv'}",
                  "-o", str(tmp_path / "missing"))
    assert missing.returncode == 2 and "load_labels" in missing.stderr

    assert run("ingest", "-c", str(bundle / "netmh.cfg"), "-s", "no_such_key=1").returncode == 1
    assert run().returncode == 1
