import json

from sphero.cli import main
from sphero.groups import element_to_json, identity_element, inverse

from conftest import make_x0


def run(args):
    return main(args)


def test_build_cn_json(tmp_path):
    out = tmp_path / "c5.json"
    assert run(["build-cn", "--q", "2", "--subgroup", "sym", "--n", "5",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["complex"]["vertices"]) == 10
    assert len(doc["complex"]["edges"]) == 15
    assert doc["manifest"]["command"] == "build-cn"


def test_build_cn_csv_trivial(tmp_path):
    out = tmp_path / "c3.csv"
    assert run(["build-cn", "--q", "2", "--subgroup", "triv", "--n", "3",
                "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest:")
    assert lines[1] == "vertex_i,vertex_j"
    assert len(lines) == 2  # no edges


def test_build_cn_rejects_bad_q():
    assert run(["build-cn", "--q", "1", "--subgroup", "sym", "--n", "3"]) == 2


def test_build_cn_rejects_bad_generator():
    assert run(["build-cn", "--q", "2", "--subgroup", "99", "--n", "3"]) == 2


def test_usage_error_exit_code():
    assert run(["build-cn", "--q", "2"]) == 2  # missing --n


def test_byte_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        run(["build-cn", "--q", "2", "--subgroup", "triv", "--n", "4",
             "--out", str(path)])
    assert a.read_bytes() == b.read_bytes()


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SPHERO_OUT_DIR", str(tmp_path))
    assert run(["build-cn", "--q", "2", "--n", "3", "--out", "sub/c.json"]) == 0
    assert (tmp_path / "sub" / "c.json").exists()


def test_verify_nu_small_grid(tmp_path):
    out = tmp_path / "nu.csv"
    code = run(["verify-nu", "--q", "2", "--subgroup", "sym", "--nmax", "6",
                "--pi1-budget", "2000", "--out", str(out)])
    assert code == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[2:]]
    by_n = {int(r[0]): r for r in rows}
    assert by_n[5][4] == "pass"
    assert by_n[5][1] == "0"


def test_verify_nu_resource_guard():
    assert run(["verify-nu", "--q", "2", "--nmax", "50"]) == 3
    assert run(["verify-nu", "--q", "3", "--nmax", "10"]) == 3
    assert run(["verify-nu", "--q", "3", "--nmax", "10", "--guard", "10"]) in (0, 1)


def test_verify_nu_q3(tmp_path):
    out = tmp_path / "nu3.csv"
    assert run(["verify-nu", "--q", "3", "--subgroup", "sym", "--nmax", "6",
                "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()[2:]]
    assert all(r[1] == "-1" for r in rows if int(r[0]) >= 3)  # nu = -1 from n=3 on
    assert all(r[4] == "pass" for r in rows)


def test_desclink_full_and_star(tmp_path):
    out = tmp_path / "dl.json"
    csv_out = tmp_path / "dl.csv"
    code = run(["desclink", "--q", "2", "--subgroup", "sym", "--r", "1", "--n", "3",
                "--star", "--full", "--out", str(out), "--homology-csv", str(csv_out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["full_poset"]["objects"]) == 6
    assert len(doc["star_poset"]["objects"]) == 3
    assert doc["full_components"] == 3
    assert doc["star_components"] == 3
    assert doc["homology_equal"] is True
    lines = csv_out.read_text().splitlines()
    assert lines[1] == "model,dim,betti,torsion"


def test_desclink_n1_empty(tmp_path):
    out = tmp_path / "dl1.json"
    assert run(["desclink", "--q", "2", "--n", "1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["full_poset"]["objects"] == []


def test_desclink_cap(tmp_path):
    assert run(["desclink", "--q", "2", "--n", "9", "--cap", "6"]) == 3


def test_group_compose_and_inverse(tmp_path, triv2):
    x0 = make_x0(triv2)
    lhs = tmp_path / "x0.json"
    rhs = tmp_path / "x0inv.json"
    lhs.write_text(json.dumps(element_to_json(x0)))
    rhs.write_text(json.dumps(element_to_json(inverse(x0))))
    out = tmp_path / "out.json"
    assert run(["group", "compose", "--lhs", str(lhs), "--rhs", str(rhs),
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["element"] == element_to_json(identity_element(triv2))


def test_group_stab_and_subnormal(tmp_path, sym2):
    ident = tmp_path / "id.json"
    ident.write_text(json.dumps(element_to_json(identity_element(sym2))))
    out = tmp_path / "stab.json"
    assert run(["group", "stab", "--gamma", str(ident), "--phi", str(ident),
                "--out", str(out)]) == 0
    assert json.loads(out.read_text())["stabilizes"] is True
    out2 = tmp_path / "sn.json"
    assert run(["group", "subnormal", "--phi", str(ident), "--k", "3",
                "--out", str(out2)]) == 0
    assert json.loads(out2.read_text())["kprime"] == 3


def test_group_schema_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 2}')
    assert run(["group", "canon", "--input", str(bad)]) == 2


def test_trade_pipeline(tmp_path):
    sched = tmp_path / "sched.json"
    sched.write_text(json.dumps({
        "labels": ["H"],
        "stages": [
            {"cells": [[0, "H", 1]], "connectivity": 0},
            {"cells": [[0, "H", 1], [1, "H", 1]], "connectivity": 1},
            {"cells": [[1, "H", 2]]},
        ],
    }))
    out = tmp_path / "trade.json"
    assert run(["trade", "--schedule", str(sched), "--prefix", "3",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["final_inventory"] == [[0, "H", 1], [1, "H", 1], [2, "H", 1], [3, "H", 2]]
    assert doc["chi_before"]["H"] == doc["chi_after"]["H"] == -1


def test_trade_unreachable_schedule(tmp_path):
    sched = tmp_path / "sched.json"
    sched.write_text(json.dumps({
        "labels": ["H"],
        "stages": [
            {"cells": [[0, "H", 1]], "connectivity": 0},
            {"cells": [[1, "H", 1]], "connectivity": 1},
            {"cells": [[1, "H", 1]], "connectivity": 1},
            {"cells": []},
        ],
    }))
    assert run(["trade", "--schedule", str(sched), "--prefix", "4"]) == 4


def test_trade_schema_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nope": true}')
    assert run(["trade", "--schedule", str(bad), "--prefix", "1"]) == 2
