"""Black-box tests of the command-line interface via subprocess."""

import json
import math
import subprocess
import sys

import pytest

RATE_ARGS = [
    "rate",
    "--protocol", "coherent",
    "--bound", "collective",
    "--direction", "reverse",
    "--ra", "1.0",
    "--t", "0.5",
    "--eps", "0.05",
]


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "cvkey", *args],
        capture_output=True,
        text=True,
    )


def test_version_flag():
    res = run_cli("--version")
    assert res.returncode == 0
    assert res.stdout.startswith("cvkey ")


def test_rate_text_output():
    res = run_cli(*RATE_ARGS)
    assert res.returncode == 0
    fields = {}
    for line in res.stdout.splitlines():
        name, _, value = line.partition(" = ")
        fields[name] = value
    assert fields["protocol"] == "coherent"
    assert fields["direction"] == "reverse"
    assert fields["base"] == "nats"
    assert float(fields["key_rate"]) > 0.0
    assert "version" in fields


def test_rate_json_shape():
    res = run_cli(*RATE_ARGS, "--format", "json")
    assert res.returncode == 0
    obj = json.loads(res.stdout)
    assert set(obj) == {"params", "i_ab", "eve_term", "key_rate", "base", "version"}
    assert set(obj["params"]) == {"protocol", "bound", "direction", "ra", "ta", "t", "eps"}
    assert obj["params"]["t"] == 0.5
    assert obj["key_rate"] > 0.0


def test_rate_bits_base_conversion():
    nats = json.loads(run_cli(*RATE_ARGS, "--format", "json").stdout)
    bits = json.loads(
        run_cli(*RATE_ARGS, "--base", "bits", "--format", "json").stdout
    )
    assert bits["base"] == "bits"
    assert bits["key_rate"] == pytest.approx(nats["key_rate"] / math.log(2.0), rel=1e-6)


def test_unknown_flag_exits_one():
    res = run_cli(*RATE_ARGS, "--no-such-flag")
    assert res.returncode == 1


def test_unknown_command_exits_one():
    res = run_cli("frobnicate")
    assert res.returncode == 1


def test_general_w_rejects_squeezed():
    res = run_cli(
        "rate", "--protocol", "squeezed", "--bound", "general_w",
        "--ra", "1.0", "--t", "0.9",
    )
    assert res.returncode == 1
    assert "general_w requires coherent" in res.stderr


def test_direction_rejected_for_general():
    res = run_cli(
        "rate", "--protocol", "coherent", "--bound", "general",
        "--direction", "reverse", "--ra", "1.0", "--t", "0.9",
    )
    assert res.returncode == 1


def test_collective_requires_direction():
    res = run_cli(
        "rate", "--protocol", "coherent", "--bound", "collective",
        "--ra", "1.0", "--t", "0.9",
    )
    assert res.returncode == 1
    assert "requires --direction" in res.stderr


def test_critical_loss_csv():
    res = run_cli(
        "critical-loss", "--protocol", "coherent", "--bound", "general_w",
        "--ra", "15", "--format", "csv",
    )
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert len(lines) == 2
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert 0.6469 <= float(row["t_c"]) <= 0.6509
    assert float(row["residual"]) <= 1e-7


def test_critical_noise_no_positive_region_exit_two():
    res = run_cli(
        "critical-noise", "--protocol", "coherent", "--bound", "collective",
        "--direction", "direct", "--ra", "15", "--t", "0.4",
    )
    assert res.returncode == 2
    assert "no-positive-region" in res.stderr


def test_sweep_row_count():
    res = run_cli(
        "sweep", "--x", "t", "--from", "0.2", "--to", "0.8", "--steps", "5",
        "--quantity", "rate", "--protocol", "coherent", "--bound", "collective",
        "--direction", "reverse", "--ra", "1.0",
    )
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert lines[0] == "t,key_rate"
    assert len(lines) == 6
    for line in lines[1:]:
        axis, value = line.split(",")
        assert value != ""


def test_sweep_partial_failures_leave_empty_cells():
    # no positive noise region below the direct-reconciliation loss frontier
    res = run_cli(
        "sweep", "--x", "t", "--from", "0.3", "--to", "0.7", "--steps", "5",
        "--quantity", "critical-noise", "--protocol", "coherent",
        "--bound", "collective", "--direction", "direct", "--ra", "15",
    )
    assert res.returncode == 0
    rows = dict(line.split(",") for line in res.stdout.splitlines()[1:])
    assert rows["0.3"] == ""
    assert rows["0.4"] == ""
    assert rows["0.6"] != ""
    assert rows["0.7"] != ""
    assert "warning" in res.stderr


def test_sweep_rejects_bad_grids():
    base = [
        "sweep", "--x", "t", "--quantity", "rate", "--protocol", "coherent",
        "--bound", "general", "--ra", "1.0",
    ]
    res = run_cli(*base, "--from", "0.2", "--to", "0.8", "--steps", "1")
    assert res.returncode == 1
    res = run_cli(*base, "--from", "0.5", "--to", "0.5", "--steps", "5")
    assert res.returncode == 1
    res = run_cli(*base, "--from", "nan", "--to", "0.8", "--steps", "5")
    assert res.returncode == 1


def test_sweep_rejects_invalid_axis_for_quantity():
    res = run_cli(
        "sweep", "--x", "eps", "--from", "0.0", "--to", "0.5", "--steps", "5",
        "--quantity", "critical-noise", "--protocol", "coherent",
        "--bound", "collective", "--direction", "reverse", "--ra", "1.0",
    )
    assert res.returncode == 1


def test_constants_text():
    res = run_cli("constants")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert len(lines) == 6
    assert lines[-1].startswith("version = ")
    assert sum("t_c_" in line for line in lines) == 2
    assert sum("eps_c_" in line for line in lines) == 3


def test_constants_csv():
    res = run_cli("constants", "--format", "csv")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert lines[0] == "name,analytic,numeric,abs_gap"
    assert len(lines) == 6
    for line in lines[1:]:
        assert float(line.split(",")[3]) <= 2e-3


def test_batch_mixed_lines(tmp_path):
    requests = [
        {"cmd": "rate", "protocol": "coherent", "bound": "general",
         "ra": 1.0, "t": 0.9, "eps": 0.01},
        {"cmd": "critical-loss", "protocol": "squeezed", "bound": "general",
         "ra": 1.5},
        {"cmd": "rate", "protocol": "coherent", "bound": "nonsense",
         "ra": 1.0, "t": 0.9},
    ]
    path = tmp_path / "requests.ndjson"
    path.write_text("".join(json.dumps(r) + "\n" for r in requests))
    res = run_cli("batch", "--input", str(path))
    assert res.returncode == 0
    lines = [json.loads(line) for line in res.stdout.splitlines()]
    assert len(lines) == 3
    assert lines[0]["key_rate"] > 0.0
    assert "critical_value" in lines[1]
    assert lines[2]["line"] == 3
    assert "error" in lines[2]


def test_batch_missing_file_exits_one():
    res = run_cli("batch", "--input", "/no/such/file.ndjson")
    assert res.returncode == 1
