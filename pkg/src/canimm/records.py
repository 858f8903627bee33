"""Line-delimited trace and verdict records.

One record per line, fields separated by tabs.  Integers print as
decimals, integer lists as sorted bracket lists like [1,2,3], integer
pairs inside lists as e:i.  The layout is stable so identical runs
serialize to identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constructions import ConstructionTrace, TraceRecord
from .finitesets import SetPrefix


def render_value(value) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        parts = []
        for item in value:
            if isinstance(item, tuple):
                parts.append(":".join(str(x) for x in item))
            else:
                parts.append(str(item))
        return "[" + ",".join(parts) + "]"
    raise TypeError(f"cannot render {value!r}")


def _parse_atom(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def parse_value(text: str):
    if text.startswith("[") and text.endswith("]"):
        body = text[1:-1]
        if not body:
            return []
        items = []
        for piece in body.split(","):
            if ":" in piece:
                items.append(tuple(_parse_atom(x) for x in piece.split(":")))
            else:
                items.append(_parse_atom(piece))
        return items
    return _parse_atom(text)


def render_trace(trace: ConstructionTrace, prefixes: dict[str, SetPrefix]) -> str:
    lines = [f"trace\t{trace.name}"]
    for key in sorted(trace.meta):
        lines.append(f"meta\t{key}\t{render_value(trace.meta[key])}")
    for rec in trace.records:
        fields = "\t".join(str(x) for x in rec.fields)
        line = f"rec\t{rec.stage}\t{rec.rule}"
        if fields:
            line += "\t" + fields
        lines.append(line)
    for label in sorted(prefixes):
        lines.append(f"prefix\t{label}\t{prefixes[label].bits}")
    return "\n".join(lines) + "\n"


@dataclass
class ParsedTrace:
    name: str
    meta: dict = field(default_factory=dict)
    records: list[TraceRecord] = field(default_factory=list)
    prefixes: dict[str, SetPrefix] = field(default_factory=dict)

    def trace(self) -> ConstructionTrace:
        return ConstructionTrace(self.name, dict(self.meta), list(self.records))


def parse_trace(text: str) -> ParsedTrace:
    parsed = ParsedTrace(name="")
    for line in text.splitlines():
        if not line.strip():
            continue
        kind, _, rest = line.partition("\t")
        if kind == "trace":
            parsed.name = rest
        elif kind == "meta":
            key, _, raw = rest.partition("\t")
            parsed.meta[key] = parse_value(raw)
        elif kind == "rec":
            parts = rest.split("\t")
            stage, rule = int(parts[0]), parts[1]
            fields = tuple(_parse_atom(x) for x in parts[2:])
            parsed.records.append(TraceRecord(stage, rule, fields))
        elif kind == "prefix":
            label, _, bits = rest.partition("\t")
            parsed.prefixes[label] = SetPrefix.from_bits(bits)
        else:
            raise ValueError(f"unknown record kind {kind!r}")
    if not parsed.name:
        raise ValueError("not a trace file (no trace header)")
    return parsed
