"""
test_resultfile.py
역할: ResultFile 헤더/본문 형식, 파싱 오류, atomic write, 앙상블 누적기 검증.
"""

import json
import math
from unittest.mock import patch

import pytest

from engine.circuits import RecordKey
from engine.entropy import LN2
from engine.errors import ArgumentError, ResultFileError
from engine.observables import EnsembleAccumulator, ObservableSeries, SeriesRecord
from engine.resultfile import (
    COLUMNS,
    FORMAT,
    atomic_write_text,
    data_block,
    parse_result,
    read_result,
    render_data_block,
    write_result,
)

VALID_HEADER = "# " + json.dumps({"format": FORMAT, "config": {}, "metadata": {}}) + "\n"


# ── 파일 형식 ─────────────────────────────────────────────────

def test_read_back_same_data_block(fffa_result):
    result = read_result(fffa_result)
    assert result.header["format"] == FORMAT
    assert result.config["layout"] == "fffa"
    assert len(result.series) == 7
    assert render_data_block(result.series) == data_block(fffa_result)


def test_nan_coordinates_are_blank(fffa_result):
    """bipartite 행에는 η 가 없으므로 eta 칸이 비어 있다."""
    lines = data_block(fffa_result).splitlines()
    assert lines[0] == ",".join(COLUMNS)
    first = dict(zip(COLUMNS, lines[1].split(",")))
    assert first["eta"] == ""
    assert math.isnan(read_result(fffa_result).series.records[0].eta)


def test_header_drops_worker_count(tmp_path):
    series = ObservableSeries({"source": "test"}, [])
    config = {"command": "simulate", "L": 8, "workers": 4, "out": "x.csv", "queue": True}
    result = write_result(tmp_path / "r.csv", series, config, created_at="2026-01-01T00:00:00+00:00")
    assert result.config == {"command": "simulate", "L": 8}
    header = read_result(tmp_path / "r.csv").header
    assert header["created_at"] == "2026-01-01T00:00:00+00:00"
    assert header["metadata"] == {"source": "test"}


@pytest.mark.parametrize(
    "text",
    [
        "t,tau\n1,2\n",
        "# {oops\n",
        "# " + json.dumps({"format": "other/9"}) + "\n",
        VALID_HEADER + "a,b,c\n",
        VALID_HEADER + ",".join(COLUMNS) + "\nx,0.1,segment_entropy,top:0-top:2,,,0.0,0.0,1,0,0\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ResultFileError):
        parse_result(text)


def test_missing_file_is_os_error(tmp_path):
    with pytest.raises(OSError):
        read_result(tmp_path / "nope.csv")


# ── atomic write ──────────────────────────────────────────────

def test_atomic_write_replaces_file(tmp_path):
    path = tmp_path / "sub" / "out.txt"
    atomic_write_text(path, "first\n")
    atomic_write_text(path, "second\n")
    assert path.read_text() == "second\n"


def test_failed_write_keeps_previous_file(tmp_path):
    path = tmp_path / "out.txt"
    path.write_text("original\n")
    with patch("engine.resultfile.os.replace", side_effect=OSError("disk full")):
        with pytest.raises(OSError):
            atomic_write_text(path, "new\n")
    assert path.read_text() == "original\n"
    assert not [p for p in tmp_path.iterdir() if p.name.endswith(".tmp")]


# ── 누적기 / 레코드 ──────────────────────────────────────────

def test_record_stderr_in_nats():
    """bits [1, 1, 3, 3]: 표본분산 4/3 → stderr = ln2·√(1/3)."""
    record = SeriesRecord(4, 0.3, "segment_entropy", "top:0-top:2", math.nan, math.nan, 4, 8, 20)
    assert record.mean_bits == 2
    assert record.mean_nats == pytest.approx(2 * LN2)
    assert record.stderr == pytest.approx(LN2 * math.sqrt(1 / 3))


def test_accumulator_merge():
    a = EnsembleAccumulator(2)
    a.add([1, 2])
    b = EnsembleAccumulator(2)
    b.add([3, 4])
    b.add([0, 1])
    a.merge(b)
    assert a.count == 3
    assert a.bits_sum.tolist() == [4, 7]
    assert a.bits_sq_sum.tolist() == [10, 21]


def test_accumulator_shape_mismatch():
    with pytest.raises(ArgumentError):
        EnsembleAccumulator(2).add([1, 2, 3])


def test_series_from_accumulator():
    acc = EnsembleAccumulator(2)
    acc.add([2, 0])
    keys = [
        RecordKey(2, 0.1, "segment_entropy", "top:0-top:2"),
        RecordKey(2, 0.1, "mutual_information", "top:0-top:1|top:2-top:3"),
    ]
    series = ObservableSeries.from_accumulator(keys, acc, {"source": "test"})
    assert series.count == 1
    assert [r.bits_sum for r in series.select("segment_entropy")] == [2]
    with pytest.raises(ArgumentError):
        ObservableSeries.from_accumulator(keys[:1], acc, {})
