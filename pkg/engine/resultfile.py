"""
resultfile.py
역할: ObservableSeries 의 파일 형식 (JSON 헤더 한 줄 + CSV 본문).

  # {"format": ..., "code_version": ..., "created_at": ..., "config": {...}, "metadata": {...}}
  t,tau,observable,segment,xi,eta,mean_nats,stderr,count,bits_sum,bits_sq_sum
  ...

  - UTF-8, LF. 실수는 repr 표기, NaN 은 빈 칸.
  - config 에는 workers/out 을 넣지 않는다 (worker 수가 달라도 본문과 헤더 config 가 같아야 함).
  - 쓰기는 같은 디렉터리의 임시 파일 → fsync → os.replace.
"""

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from engine import __version__
from engine.errors import ResultFileError
from engine.observables import ObservableSeries, SeriesRecord

FORMAT = "clifford-cft/1"
HEADER_SENTINEL = "# "
COLUMNS = (
    "t",
    "tau",
    "observable",
    "segment",
    "xi",
    "eta",
    "mean_nats",
    "stderr",
    "count",
    "bits_sum",
    "bits_sq_sum",
)
_HEADER_EXCLUDE = frozenset({"workers", "out", "queue"})


def _fmt(value: float) -> str:
    value = float(value)
    return "" if math.isnan(value) else repr(value)


def _parse_float(text: str) -> float:
    return math.nan if text == "" else float(text)


def header_config(config: dict) -> dict:
    return {k: v for k, v in config.items() if k not in _HEADER_EXCLUDE}


@dataclass
class ResultFile:
    header: dict
    series: ObservableSeries

    @property
    def config(self) -> dict:
        return self.header.get("config", {})

    def render(self) -> str:
        buf = io.StringIO()
        buf.write(HEADER_SENTINEL + json.dumps(self.header, ensure_ascii=False, sort_keys=True) + "\n")
        buf.write(render_data_block(self.series))
        return buf.getvalue()


def render_data_block(series: ObservableSeries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in series.records:
        writer.writerow(
            [
                r.t,
                _fmt(r.tau),
                r.observable,
                r.segment,
                _fmt(r.xi),
                _fmt(r.eta),
                _fmt(r.mean_nats),
                _fmt(r.stderr),
                r.count,
                r.bits_sum,
                r.bits_sq_sum,
            ]
        )
    return buf.getvalue()


def build_header(config: dict, metadata: dict, created_at: str | None = None) -> dict:
    return {
        "format": FORMAT,
        "code_version": __version__,
        "created_at": created_at or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": header_config(config),
        "metadata": metadata,
    }


def atomic_write_text(path, text: str) -> Path:
    """임시 파일에 쓰고 rename. 실패하면 기존 파일은 그대로 남는다."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def write_result(path, series: ObservableSeries, config: dict, created_at: str | None = None) -> ResultFile:
    result = ResultFile(build_header(config, series.metadata, created_at), series)
    atomic_write_text(path, result.render())
    return result


def read_result(path) -> ResultFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ResultFileError(f"{path}: UTF-8 이 아님") from e
    return parse_result(text, source=str(path))


def parse_result(text: str, source: str = "<memory>") -> ResultFile:
    first, _, body = text.partition("\n")
    if not first.startswith(HEADER_SENTINEL.strip()):
        raise ResultFileError(f"{source}: 첫 줄이 '#' 헤더가 아님")
    try:
        header = json.loads(first[1:].strip())
    except json.JSONDecodeError as e:
        raise ResultFileError(f"{source}: 헤더 JSON 파싱 실패 ({e.msg})") from e
    if not isinstance(header, dict) or header.get("format") != FORMAT:
        raise ResultFileError(f"{source}: 지원하지 않는 형식 {header.get('format') if isinstance(header, dict) else header!r}")

    reader = csv.DictReader(io.StringIO(body))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ResultFileError(f"{source}: 열 구성이 다름 {reader.fieldnames}")

    records = []
    for lineno, row in enumerate(reader, start=3):
        try:
            records.append(
                SeriesRecord(
                    t=int(row["t"]),
                    tau=_parse_float(row["tau"]),
                    observable=row["observable"],
                    segment=row["segment"],
                    xi=_parse_float(row["xi"]),
                    eta=_parse_float(row["eta"]),
                    count=int(row["count"]),
                    bits_sum=int(row["bits_sum"]),
                    bits_sq_sum=int(row["bits_sq_sum"]),
                )
            )
        except (TypeError, ValueError) as e:
            raise ResultFileError(f"{source}:{lineno}: 행 파싱 실패 ({e})") from e
    return ResultFile(header, ObservableSeries(header.get("metadata", {}), records))


def data_block(path) -> str:
    """헤더를 뺀 본문. 재현성 비교용."""
    return Path(path).read_text(encoding="utf-8").partition("\n")[2]
