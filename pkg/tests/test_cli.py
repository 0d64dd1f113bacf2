"""CLI subcommands, output formats, and exit codes."""

import dataclasses
import json
import xml.etree.ElementTree as ET

import pytest

from lmroofline import SweepRow, parse_csv
from lmroofline.cli import main


def write_json(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def arm_scenario_doc(**overrides):
    doc = {
        "model": "llama3-8b",
        "hardware": "rtx-a6000",
        "mode": "arm",
        "batch": 1,
        "prompt_len": 64,
        "gen_len": 32,
    }
    doc.update(overrides)
    return doc


def arm_grid_doc(axes, **overrides):
    doc = arm_scenario_doc(**overrides)
    for name in axes:
        doc.pop(name, None)
    doc["axes"] = axes
    return doc


def test_analyze_prints_table_and_json(tmp_path, capsys):
    config = write_json(tmp_path, "scenario.json", arm_scenario_doc())
    assert main(["analyze", "-c", config]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    payload = json.loads(lines[-1])
    field_names = [f.name for f in dataclasses.fields(SweepRow)]
    assert list(payload.keys()) == field_names
    assert payload["mode"] == "arm"
    assert payload["B"] == 1
    assert payload["bound"] in ("memory_bound", "compute_bound")
    # aligned text block lists every field as well
    for name in field_names:
        assert any(line.startswith(name) for line in lines[:-1])


def test_analyze_oom_scenario_still_succeeds(tmp_path, capsys):
    config = write_json(
        tmp_path, "oom.json", arm_scenario_doc(batch=100000, prompt_len=2048)
    )
    assert main(["analyze", "-c", config]) == 0
    payload = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert payload["fits"] is False


def test_analyze_missing_file_exits_2(tmp_path, capsys):
    assert main(["analyze", "-c", str(tmp_path / "absent.json")]) == 2
    assert "io error" in capsys.readouterr().err


def test_analyze_invalid_scenario_exits_1(tmp_path, capsys):
    config = write_json(tmp_path, "bad.json", arm_scenario_doc(mode="quantum"))
    assert main(["analyze", "-c", config]) == 1
    assert "error" in capsys.readouterr().err


def test_sweep_writes_csv(tmp_path, capsys):
    config = write_json(tmp_path, "grid.json", arm_grid_doc({"batch": [1, 2, 4]}))
    out_csv = tmp_path / "out.csv"
    assert main(["sweep", "-c", config, "-o", str(out_csv)]) == 0
    rows = parse_csv(str(out_csv))
    assert [r.B for r in rows] == [1, 2, 4]


def test_sweep_invalid_point_exits_1_naming_it(tmp_path, capsys):
    doc = {
        "model": "llada-8b",
        "hardware": "rtx-a6000",
        "mode": "dlm_block",
        "batch": 1,
        "prompt_len": 64,
        "gen_len": 128,
        "steps": 128,
        "axes": {"block_size": [32, 256]},
    }
    config = write_json(tmp_path, "grid.json", doc)
    assert main(["sweep", "-c", config, "-o", str(tmp_path / "out.csv")]) == 1
    err = capsys.readouterr().err
    assert "grid point" in err
    assert "256" in err


def test_roofline_writes_svg(tmp_path, capsys):
    config = write_json(tmp_path, "grid.json", arm_grid_doc({"prompt_len": [512, 2048]}))
    out_svg = tmp_path / "roofline.svg"
    assert main(["roofline", "-c", config, "-o", str(out_svg)]) == 0
    root = ET.parse(str(out_svg)).getroot()
    assert root.tag.endswith("svg")


@pytest.mark.parametrize("kind", ["latency", "throughput", "ai"])
def test_plot_kinds_write_svg(tmp_path, capsys, kind):
    config = write_json(
        tmp_path, "grid.json", arm_grid_doc({"prompt_len": [128, 512], "batch": [1, 2, 4]})
    )
    out_svg = tmp_path / f"{kind}.svg"
    assert main(["plot", "--kind", kind, "-c", config, "-o", str(out_svg)]) == 0
    content = out_svg.read_text()
    assert "prompt_len=128" in content
    assert "prompt_len=512" in content


def test_plot_rejects_unknown_kind(tmp_path, capsys):
    config = write_json(tmp_path, "grid.json", arm_grid_doc({"batch": [1, 2, 4]}))
    assert main(["plot", "--kind", "vibes", "-c", config, "-o", "x.svg"]) == 1
    assert "usage" in capsys.readouterr().err


def test_hw_list_names_registry(capsys):
    assert main(["hw", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert "rtx-a6000" in names
    assert "a100-80g" in names


def test_hw_show_reports_peak_bandwidth_and_ridge(capsys):
    assert main(["hw", "show", "rtx-a6000"]) == 0
    out = capsys.readouterr().out
    assert "154.8 TFLOP/s" in out
    assert "768 GB/s" in out
    assert "201.6 FLOP/byte" in out


def test_hw_show_unknown_name_exits_1(capsys):
    assert main(["hw", "show", "abacus"]) == 1
    assert "unknown hardware" in capsys.readouterr().err


def test_model_list_names_registry(capsys):
    assert main(["model", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert "llama3-8b" in names
    assert "llada-8b" in names


def test_model_show_reports_shape_and_parameters(capsys):
    assert main(["model", "show", "llama3-8b"]) == 0
    out = capsys.readouterr().out
    assert "8029995008" in out
    assert "16059990016" in out


def test_unknown_subcommand_exits_1(capsys):
    assert main(["transmogrify"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_required_flag_exits_1(capsys):
    assert main(["analyze"]) == 1
    assert "usage" in capsys.readouterr().err


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "lmroofline" in capsys.readouterr().out
