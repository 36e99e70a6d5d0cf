import json

import numpy as np
import pandas as pd
import pytest

from cli import EXIT_INFEASIBLE, EXIT_INPUT_ERROR, EXIT_OK, main
from model.maxent.maxent_model import solve_siso_maxent


def _dump(path, payload) -> str:
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def _channel_file(tmp_path):
    return _dump(tmp_path / "channel.json", {"h": [0.4, 0.2, 0.4], "alpha": [0.8, 0.3, 0.1]})


@pytest.fixture
def _raw_channel_file(tmp_path, _raw_channel_upload):
    return _dump(tmp_path / "raw_channel.json", _raw_channel_upload)


def test_feasible(tmp_path, _channel_file):
    distribution = _dump(
        tmp_path / "dist.json",
        {"type": "discrete", "support": [0.0, 0.4, 0.6, 1.0], "masses": [0.2, 0.5, 0.2, 0.1]},
    )
    output = tmp_path / "report.json"
    assert main(["feasible", _channel_file, distribution, "--kind", "ec", "-o", str(output)]) == EXIT_OK
    report = json.loads(output.read_text())
    assert report["feasible"]
    assert len(report["slack"]) == 2


def test_infeasible(tmp_path, _channel_file):
    distribution = _dump(tmp_path / "dist.json", {"type": "discrete", "support": [0.0, 1.0], "masses": [0.58, 0.42]})
    output = tmp_path / "report.json"
    assert main(["feasible", _channel_file, distribution, "-o", str(output)]) == EXIT_INFEASIBLE
    assert not json.loads(output.read_text())["feasible"]


def test_input_errors(tmp_path, _channel_file):
    distribution = _dump(tmp_path / "dist.json", {"type": "maxent"})
    assert main(["feasible", str(tmp_path / "missing.json"), distribution]) == EXIT_INPUT_ERROR

    bad_channel = _dump(tmp_path / "bad.json", {"h": [0.5, 0.6], "alpha": [0.4, 0.1]})
    assert main(["feasible", bad_channel, distribution]) == EXIT_INPUT_ERROR

    bad_distribution = _dump(tmp_path / "bad_dist.json", {"type": "discrete", "support": [0.0, 1.0], "masses": [0.5, 0.6]})
    assert main(["feasible", _channel_file, bad_distribution]) == EXIT_INPUT_ERROR


def test_decompose_raw_channel(tmp_path, _raw_channel_file):
    """On-off keying over the bounded-cost channel drives every LED together."""
    distribution = _dump(tmp_path / "dist.json", {"type": "discrete", "support": [0.0, 1.0], "masses": [0.9, 0.1]})
    output = tmp_path / "signals.csv"
    plan_out = tmp_path / "plan.json"
    code = main([
        "decompose", _raw_channel_file, distribution, "--kind", "bc",
        "--s", "0", "1", "-o", str(output), "--plan-out", str(plan_out),
    ])
    assert code == EXIT_OK

    frame = pd.read_csv(output)
    assert list(frame.columns) == ["s", "x_1", "x_2", "x_3", "x_raw_1", "x_raw_2", "x_raw_3"]
    np.testing.assert_allclose(frame.iloc[1][["x_1", "x_2", "x_3"]], [1.0, 1.0, 1.0])
    np.testing.assert_allclose(frame.iloc[1][["x_raw_1", "x_raw_2", "x_raw_3"]], [2.0, 3.0, 2.5])
    np.testing.assert_allclose(frame.iloc[0][["x_1", "x_2", "x_3"]], [0.0, 0.0, 0.0])

    plan = json.loads(plan_out.read_text())
    assert plan["groups"] == [[0, 1, 2]]
    assert plan["allocation"]["beta"] == pytest.approx(0.1)


def test_decompose_grid(tmp_path, _channel_file):
    distribution = _dump(tmp_path / "dist.json", {"type": "maxent"})
    output = tmp_path / "signals.csv"
    assert main(["decompose", _channel_file, distribution, "--grid", "5", "--method", "iterative", "-o", str(output)]) == EXIT_OK
    frame = pd.read_csv(output)
    assert len(frame) == 5
    np.testing.assert_allclose(frame[["x_1", "x_2", "x_3"]].to_numpy() @ [0.4, 0.2, 0.4], frame["s"], atol=1e-9)


def test_bounds_csv(tmp_path, _channel_file):
    output = tmp_path / "bounds.csv"
    code = main(["bounds", _channel_file, "--sigma-min", "0.1", "--sigma-max", "1", "--points", "2", "-o", str(output)])
    assert code == EXIT_OK
    frame = pd.read_csv(output, comment="#")
    assert len(frame) == 2
    assert {"sigma", "snr_db", "lower_epi", "upper_duality", "best_lower", "best_upper", "gap"} <= set(frame.columns)
    footer = [line for line in output.read_text().splitlines() if line.startswith("#")]
    assert footer[0].startswith("# low_snr_slope,")
    assert footer[1].startswith("# high_snr_offset,")


def test_maxent_json(tmp_path, _channel_file):
    output = tmp_path / "maxent.json"
    assert main(["maxent", _channel_file, "-o", str(output)]) == EXIT_OK
    payload = json.loads(output.read_text())
    assert payload["nu0"] == pytest.approx(-0.4286, abs=2e-3)
    assert not payload["flipped"]
    assert "density" not in payload


def test_maxent_output_is_feasible_on_flipped_channel(tmp_path):
    """Coefficients written by `maxent` on a flipped channel read back as a feasible law."""
    channel = _dump(tmp_path / "channel.json", {"h": [0.3, 0.7], "alpha": [0.9, 0.7]})
    solution = tmp_path / "maxent.json"
    assert main(["maxent", channel, "--kind", "ec", "-o", str(solution)]) == EXIT_OK
    payload = json.loads(solution.read_text())
    assert payload["flipped"]

    distribution = _dump(tmp_path / "dist.json", {"type": "pwexp", "nu0": payload["nu0"], "lambdas": payload["lambdas"]})
    output = tmp_path / "report.json"
    assert main(["feasible", channel, distribution, "--kind", "ec", "-o", str(output)]) == EXIT_OK
    report = json.loads(output.read_text())
    assert abs(report["mean_residual"]) < 1e-8


def test_verify(tmp_path, _channel_file):
    output = tmp_path / "verify.csv"
    code = main(["verify", _channel_file, "--sigma-min", "0.1", "--sigma-max", "1", "--points", "2", "-o", str(output)])
    assert code == EXIT_OK
    frame = pd.read_csv(output)
    assert frame["holds"].all()


def test_point_mass_at_zero_is_bc_feasible(tmp_path, _channel_file):
    distribution = _dump(tmp_path / "dist.json", {"type": "discrete", "support": [0.0], "masses": [1.0]})
    assert main(["feasible", _channel_file, distribution, "--kind", "bc", "-o", str(tmp_path / "r.json")]) == EXIT_OK


def test_single_antenna_maxent_is_ec_infeasible(tmp_path, _channel_file):
    """The entropy maximizer under the mean constraint alone spreads too much for three antennas."""
    relaxed = solve_siso_maxent(0.42, "ec")
    distribution = _dump(tmp_path / "dist.json", {"type": "pwexp", "lambdas": [relaxed.lambdas[0], 0.0, 0.0]})
    assert main(["feasible", _channel_file, distribution, "-o", str(tmp_path / "r.json")]) == EXIT_INFEASIBLE


def test_decompose_raw_maxent(tmp_path, _raw_channel_file):
    distribution = _dump(tmp_path / "dist.json", {"type": "maxent"})
    output = tmp_path / "signals.csv"
    assert main(["decompose", _raw_channel_file, distribution, "--kind", "bc", "--s", "0", "0.5", "-o", str(output)]) == EXIT_OK
    frame = pd.read_csv(output)
    np.testing.assert_allclose(frame.iloc[0][["x_raw_1", "x_raw_2", "x_raw_3"]], [0.0, 0.0, 0.0])
    np.testing.assert_allclose(frame.iloc[1][["x_raw_1", "x_raw_2", "x_raw_3"]], [1.36, 1.14, 0.95], atol=0.02)


def test_single_antenna_footer(tmp_path):
    channel = _dump(tmp_path / "channel.json", {"h": [1.0], "alpha": [0.5]})
    output = tmp_path / "bounds.csv"
    assert main(["bounds", channel, "--sigma-min", "0.5", "--sigma-max", "1", "--points", "2", "-o", str(output)]) == EXIT_OK
    footer = dict(line[2:].split(",") for line in output.read_text().splitlines() if line.startswith("#"))
    assert float(footer["low_snr_slope"]) == pytest.approx(0.125)
    assert float(footer["high_snr_offset"]) == pytest.approx(-1.4189, abs=1e-4)
