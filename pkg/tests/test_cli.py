"""End-to-end CLI behavior: exit codes, JSON determinism, and reports."""

from __future__ import annotations

import json

import pytest

from lmuc.cli import main
from lmuc.fixtures import load_json
from lmuc.netgraph import compile_network, network_from_json


@pytest.fixture
def fixture_file(tmp_path):
    def write(name: str) -> str:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(load_json(name)))
        return str(path)

    return write


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestValidate:
    def test_valid_network_exits_zero(self, capsys, fixture_file):
        code, out = run(capsys, "validate", fixture_file("fig1_network"))
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_invalid_network_exits_one(self, capsys, tmp_path, fixture_file):
        obj = load_json("fig1_network")
        obj["edges"].append({"id": "bad", "from": "T1", "to": "S1"})
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(obj))
        code, out = run(capsys, "validate", str(path))
        assert code == 1
        assert json.loads(out)["violations"]

    def test_text_format(self, capsys, fixture_file):
        code, out = run(
            capsys, "validate", fixture_file("fig1_network"), "--format", "text"
        )
        assert code == 0
        assert out.strip() == "PASS"


class TestErrors:
    def test_malformed_json_exits_two(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["validate", str(path)]) == 2
        err = capsys.readouterr().err
        assert "line" in err

    def test_missing_file_exits_two(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "nope.json")]) == 2

    def test_unknown_class_is_usage_error(self, fixture_file):
        with pytest.raises(SystemExit) as exc:
            main(["search", fixture_file("eee1_lmuc_gf2"), "--class", "magic"])
        assert exc.value.code == 2

    def test_schema_violation_exits_two(self, capsys, tmp_path):
        path = tmp_path / "short.json"
        path.write_text(json.dumps({"field": {"p": 2, "k": 1}, "n": 1}))
        assert main(["bound", str(path)]) == 2


class TestCompileRealize:
    def test_compile_matches_library(self, capsys, fixture_file):
        code, out = run(capsys, "compile", fixture_file("fig2_network_f1"))
        assert code == 0
        assert json.loads(out)["F"] == load_json("ex4_lmuc_l1")["F"]

    def test_realize_round_trips(self, capsys, fixture_file, tmp_path):
        out_path = tmp_path / "net.json"
        code, _ = run(
            capsys, "realize", fixture_file("ex8_lmuc"), "--out", str(out_path)
        )
        assert code == 0
        net, netcode, fld = network_from_json(json.loads(out_path.read_text()))
        back = compile_network(net, netcode, fld)
        assert back.to_json()["F"] == load_json("ex8_lmuc")["F"]

    def test_compile_after_realize_cli_only(self, capsys, fixture_file, tmp_path):
        net_path = tmp_path / "net.json"
        assert (
            main(["realize", fixture_file("eee2_lmuc_gf3"), "--out", str(net_path)])
            == 0
        )
        code, out = run(capsys, "compile", str(net_path))
        assert code == 0
        assert json.loads(out)["F"] == load_json("eee2_lmuc_gf3")["F"]


class TestCheck:
    def test_unambiguous_code_exits_zero(self, capsys, fixture_file):
        code, out = run(
            capsys,
            "check",
            fixture_file("eee2_lmuc_gf3"),
            fixture_file("eee2_code_gf3"),
        )
        assert code == 0
        assert json.loads(out)["unambiguous"] is True

    def test_ambiguous_code_exits_one_with_witness(self, capsys, fixture_file):
        code, out = run(
            capsys,
            "check",
            fixture_file("eee2_lmuc_gf2"),
            fixture_file("eee2_code_gf2_ambiguous"),
        )
        assert code == 1
        payload = json.loads(out)
        assert payload["unambiguous"] is False
        assert payload["witness"]["i"] in (1, 2)


class TestBound:
    def test_eee2_bound_json(self, capsys, fixture_file):
        code, out = run(capsys, "bound", fixture_file("eee2_lmuc_gf2"))
        assert code == 0
        rows = json.loads(out)["bounds"]
        assert {"I": [1, 2], "j": 1, "rhs": 2} in rows
        assert {"I": [1, 2], "j": 2, "rhs": 2} in rows

    def test_text_table(self, capsys, fixture_file):
        code, out = run(
            capsys, "bound", fixture_file("eee1_lmuc_gf2"), "--format", "text"
        )
        assert code == 0
        assert "{1,2}\t1\t3" in out


class TestSearch:
    def test_eee2_gf2_report_misses_one_one(self, capsys, fixture_file):
        code, out = run(
            capsys,
            "search",
            fixture_file("eee2_lmuc_gf2"),
            "--m",
            "1",
            "--class",
            "all-subsets",
        )
        assert code == 0
        achieved = [tuple(a["u"]) for a in json.loads(out)["achieved"]]
        assert achieved == [(1, 4), (2, 1)]
        assert (2, 2) not in achieved

    def test_repeated_runs_are_byte_identical(self, capsys, fixture_file):
        args = ["search", fixture_file("eee1_lmuc_gf2"), "--m", "1"]
        _, first = run(capsys, *args)
        _, second = run(capsys, *args)
        assert first == second

    def test_time_share_depth(self, capsys, fixture_file):
        code, out = run(
            capsys,
            "search",
            fixture_file("eee1_lmuc_gf2"),
            "--m",
            "1",
            "--depth",
            "2",
        )
        assert code == 0
        payload = json.loads(out)
        shared = [(p["m"], tuple(p["u"])) for p in payload["time_shared"]]
        assert (2, (8, 8)) in shared

    def test_cap_refusal_exits_two(self, capsys, fixture_file):
        assert (
            main(
                [
                    "search",
                    fixture_file("eee1_lmuc_gf2"),
                    "--class",
                    "all-subsets",
                    "--cap-part",
                    "2",
                ]
            )
            == 2
        )
        assert "estimated" in capsys.readouterr().err

    def test_region_plot_written(self, fixture_file, tmp_path, capsys):
        plot = tmp_path / "region.png"
        assert (
            main(
                [
                    "search",
                    fixture_file("eee1_lmuc_gf2"),
                    "--m",
                    "1",
                    "--plot",
                    str(plot),
                    "--out",
                    str(tmp_path / "r.json"),
                ]
            )
            == 0
        )
        assert plot.stat().st_size > 0


class TestSimulate:
    def test_simulate_and_decode(self, capsys, fixture_file, tmp_path):
        inputs = tmp_path / "inputs.json"
        inputs.write_text(json.dumps({"m": 1, "x": [[1], [1, 2]]}))
        code, out = run(
            capsys,
            "simulate",
            fixture_file("eee2_lmuc_gf3"),
            str(inputs),
            "--decode-with",
            fixture_file("eee2_code_gf3"),
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["y"] == [[1], [2, 0]]
        assert payload["decoded"] == [[1], [1, 2]]


class TestCharsep:
    def test_one_shot_table(self, capsys):
        code, out = run(
            capsys, "charsep", "--fields", "2,3", "--mmax", "1", "--format", "text"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].split("\t") == [
            "q",
            "m",
            "class",
            "rate_11_achieved",
            "max_2a1_plus_a2",
        ]
        assert "2\t1\tall-subsets\tno\t2" in lines
        assert "3\t1\tall-subsets\tyes\t3" in lines

    def test_plot_written(self, tmp_path, capsys):
        plot = tmp_path / "charsep.png"
        assert (
            main(
                [
                    "charsep",
                    "--fields",
                    "2,3",
                    "--mmax",
                    "1",
                    "--plot",
                    str(plot),
                    "--out",
                    str(tmp_path / "c.json"),
                ]
            )
            == 0
        )
        assert plot.stat().st_size > 0
