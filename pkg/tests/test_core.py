from pathlib import Path

import pandas as pd
import pytest

from core import __version__
from core.config_loader import load_config, section
from core.errors import ConvergenceError, ParameterError
from core.utils import build_metadata, read_csv_metadata, result_filename, write_csv
from main import parse_grid


def test_result_filename_is_deterministic():
    path = result_filename("report", "synth", "ad", Path("out"), suffix=".json", t="1964-01", tf=6, seed=None)
    assert path == Path("out") / "report_SYNTH_ad_t1964-01_tf6.json"


def test_write_csv_metadata_line(tmp_path):
    path = tmp_path / "x.csv"
    write_csv(path, pd.DataFrame({"a": [0.1], "b": ["x"]}), build_metadata(command="rank", seed=None))
    meta = read_csv_metadata(path)
    assert meta == {"command": "rank", "seed": None, "tool_version": __version__}
    frame = pd.read_csv(path, skiprows=1)
    assert frame["a"].tolist() == [0.1]


def test_load_config(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("run:\n  dataset: SYNTH\nsweep:\n", encoding="utf-8")
    cfg = load_config(str(path))
    assert section(cfg, "run")["dataset"] == "SYNTH"
    assert section(cfg, "sweep") == {}
    with pytest.raises(FileNotFoundError):
        load_config(str(tmp_path / "missing.yaml"))


def test_exit_codes():
    assert ParameterError.exit_code == 2
    assert ConvergenceError.exit_code == 3
    assert isinstance(ParameterError("x"), ValueError)


def test_parse_grid():
    assert parse_grid("6,12,24") == [6.0, 12.0, 24.0]
    assert parse_grid("6:24:6") == [6.0, 12.0, 18.0, 24.0]
    assert parse_grid("0.05:0.2:0.05") == [0.05, 0.1, 0.15, 0.2]
