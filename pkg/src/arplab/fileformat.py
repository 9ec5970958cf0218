"""Instance files (JSON) and exact rendering of rationals."""

from __future__ import annotations

import json
import re
from decimal import Decimal
from fractions import Fraction

from .errors import ParseError
from .model import Instance, Kind, make_instance

_DECIMAL = re.compile(r"[+-]?\d+(\.\d+)?")
_RATIO = re.compile(r"([+-]?\d+)/(\d+)")


def parse_rational(text, where: str = "value") -> Fraction:
    """Parse ``"2.5"``, ``"-3"``, ``"1/3"`` (or a JSON number) exactly."""
    if isinstance(text, bool):
        raise ParseError(f"{where}: expected a number, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Decimal):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"{where}: expected a numeric string, got {type(text).__name__}")
    s = text.strip()
    if _DECIMAL.fullmatch(s):
        return Fraction(Decimal(s))
    m = _RATIO.fullmatch(s)
    if m:
        if int(m.group(2)) == 0:
            raise ParseError(f"{where}: zero denominator in {text!r}")
        return Fraction(int(m.group(1)), int(m.group(2)))
    raise ParseError(f"{where}: not a decimal literal or p/q: {text!r}")


def parse_instance_file(data: bytes | str) -> Instance:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"instance file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    kind = doc.get("kind")
    try:
        kind = Kind(kind)
    except ValueError:
        raise ParseError(f"field 'kind': expected 'arp' or 'nvep', got {kind!r}") from None
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ParseError("field 'label': expected text")
    items = doc.get("items")
    if not isinstance(items, list):
        raise ParseError("field 'items': expected a list")
    values = []
    for k, item in enumerate(items):
        if not isinstance(item, dict):
            raise ParseError(f"items[{k}]: expected an object with 'v' and 'c'")
        for name in ("v", "c"):
            if name not in item:
                raise ParseError(f"items[{k}].{name}: missing")
        values.append((parse_rational(item["v"], f"items[{k}].v"),
                       parse_rational(item["c"], f"items[{k}].c")))
    return make_instance(kind, values, label)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "kind": inst.kind.value,
        "label": inst.label,
        "items": [{"v": str(a.v), "c": str(a.c)} for a in inst.items],
    }


def dump_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def decimal_approx(x: Fraction, places: int = 12) -> str:
    """Round-half-even to ``places`` decimals using exact integer arithmetic,
    then drop trailing zeros."""
    scaled = round(x * 10**places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    whole, frac = digits[:-places], digits[-places:].rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def render_rational(x: Fraction) -> str:
    return f"{x} (~{decimal_approx(x)})"


def render_perm(order) -> str:
    return ",".join(str(p) for p in order)
