# testing/test_cli.py
import json

import pytest
from pydantic import ValidationError

import cli
from cli import CommandRequest, run


def _run(command, action, **kwargs):
    lines = []
    code, report = run(CommandRequest(command=command, action=action, **kwargs), emit=lines.append)
    return code, report, lines


def test_e2_abelianization_of_integers():
    code, report, _ = _run("ab", "e2", order="Z")
    assert code == 0
    assert report == {"invariants": [12], "free_rank": 0}


def test_group_hfa():
    code, report, _ = _run("group", "hfa", group="S3")
    assert code == 0
    assert report["hfa"] is False
    assert report["forbidden_witness"] == "S3"


def test_order_units():
    code, report, _ = _run("order", "units", order="O5")
    assert code == 0
    assert report["structure"] == "C6"
    assert report["size"] == 6
    assert report["element_orders"] == {"1": 1, "2": 1, "3": 2, "6": 2}


def test_parse_errors_exit_1():
    code, report, _ = _run("order", "info", order="Iq:0")
    assert code == 1
    assert report["kind"] == "parse"
    code, report, _ = _run("ab", "e2")
    assert code == 1


def test_domain_errors_exit_2():
    code, report, _ = _run("group", "odd", group="D8")
    assert code == 2
    assert report["kind"] == "domain"
    code, _, _ = _run("group", "odd", group="D8", assert_no_type_ii=True)
    assert code == 0


def test_unknown_action():
    code, report, _ = _run("order", "nope", order="Z")
    assert code == 1
    assert "unknown command" in report["error"]


def test_reduce_with_trace():
    code, report, lines = _run("rel", "reduce", order="Z", word="E(0);E(0)", trace=True)
    assert code == 0
    assert report["terminated"] is True
    assert report["steps"] == 2
    assert [json.loads(line)["rule"] for line in lines] == ["expand", "R4"]


def test_trace_source_replays_the_word():
    code, _, lines = _run("rel", "reduce", order="Z", word="E(2);D(-1);inv(E(2))", trace=True)
    assert code == 0
    first = json.loads(lines[0])
    assert first["rule"] == "expand"
    assert first["source"] is not None
    assert "D(" in first["source"] and "inv(" in first["source"]


def test_divide_and_decompose():
    code, report, _ = _run("mat", "divide", order="I1", a="[7,3]", b="[2,1]")
    assert code == 0
    assert int(report["norm_r"]) < int(report["norm_b"]) == 5
    code, report, _ = _run("mat", "decompose", order="Z", matrix="[[2,1],[1,1]]")
    assert code == 0
    assert report["letters"] > 0


def test_exceptional():
    code, report, _ = _run("decide", "exceptional", algebra="Qi:2", n=2)
    assert code == 0
    assert report["kind"] == "TypeII" and report["in_catalog"] is True
    code, _, _ = _run("decide", "exceptional", algebra="Qi:2")
    assert code == 1


def test_group_span_and_grk():
    assert _run("group", "span", group="S3")[1] == {"span": "none"}
    code, report, _ = _run("decide", "grk", order="Z")
    assert code == 0 and report["witness"] == "none"


def test_battery_json_rows():
    code, report, _ = _run("battery", "groups", specs=["C2", "S3"], json_output=True)
    assert code == 0
    assert [row["hfa"] for row in report["rows"]] == [True, False]


def test_request_validation():
    with pytest.raises(ValidationError):
        CommandRequest(command="mat", action="divide", side="middle")
    with pytest.raises(ValidationError):
        CommandRequest(command="rel", action="verify", samples=-1)


def test_main_json_output(capsys):
    assert cli.main(["ab", "e2", "--order", "Z", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"invariants": [12], "free_rank": 0}


def test_main_plain_output(capsys):
    assert cli.main(["order", "inv", "--order", "L"]) == 0
    out = capsys.readouterr().out
    assert "inv: 4" in out


def test_main_errors_go_to_stderr(capsys):
    assert cli.main(["order", "info", "--order", "Iq:0"]) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert json.loads(captured.err)["kind"] == "parse"
    assert cli.main(["mat", "divide", "--order", "I1", "--a", "1", "--b", "1", "--side", "middle"]) == 1
