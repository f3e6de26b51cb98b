"""JSON and CSV serialization.

Big integers are written as decimal strings.  Every artifact carries the
config that produced it; output is deterministic (sorted keys, no clocks).
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .errors import InvalidInputError
from .qmoments import MomentSequence

CONFIG_PREFIX = "# config: "


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def moments_to_json(seq: MomentSequence, config: dict | None = None) -> str:
    cfg = seq.config if config is None else config
    return dumps({"config": cfg, "model_tag": seq.model_tag, "values": [str(v) for v in seq.values]})


def moments_from_json(text: str) -> MomentSequence:
    try:
        data = json.loads(text)
        values = tuple(int(v) for v in data["values"])
        return MomentSequence(values, str(data["model_tag"]), data.get("config", {}))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed moment sequence JSON: {exc}") from None


def moments_to_csv(seq: MomentSequence, config: dict | None = None) -> str:
    cfg = seq.config if config is None else config
    buf = io.StringIO()
    buf.write(CONFIG_PREFIX + json.dumps({"config": cfg, "model_tag": seq.model_tag},
                                         sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "m_k"])
    for k, v in enumerate(seq.values):
        writer.writerow([k, v])
    return buf.getvalue()


def moments_from_csv(text: str) -> MomentSequence:
    lines = text.splitlines()
    header = {"config": {}, "model_tag": "csv"}
    if lines and lines[0].startswith(CONFIG_PREFIX):
        try:
            header = json.loads(lines[0][len(CONFIG_PREFIX):])
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"malformed CSV header: {exc}") from None
        lines = lines[1:]
    rows = list(csv.reader(lines))
    if not rows or rows[0] != ["k", "m_k"]:
        raise InvalidInputError("CSV moment file must have a 'k,m_k' header")
    values = []
    for i, row in enumerate(rows[1:]):
        try:
            k, v = int(row[0]), int(row[1])
        except (IndexError, ValueError):
            raise InvalidInputError(f"bad CSV row {row!r}") from None
        if k != i:
            raise InvalidInputError(f"CSV rows must list k = 0, 1, 2, ... (row {i} has k={k})")
        values.append(v)
    return MomentSequence(tuple(values), header.get("model_tag", "csv"), header.get("config", {}))


def dump_moments(seq: MomentSequence, fmt: str = "json", config: dict | None = None) -> str:
    if fmt == "json":
        return moments_to_json(seq, config)
    if fmt == "csv":
        return moments_to_csv(seq, config)
    raise InvalidInputError(f"unknown format {fmt!r}")


def load_moments(path: str | Path) -> MomentSequence:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None
    if text.lstrip().startswith("{"):
        return moments_from_json(text)
    return moments_from_csv(text)


def rows_to_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if x is None else x for x in row])
    return buf.getvalue()


def norm_table_csv(estimate, digits: int = 30) -> str:
    from .analysis import fmt_decimal

    rows = [(k, fmt_decimal(r, digits), fmt_decimal(q, digits), fmt_decimal(f, digits))
            for k, r, q, f in estimate.table()]
    return rows_to_csv(["k", "root", "ratio", "fit"], rows)
