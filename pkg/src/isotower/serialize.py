"""Canonical JSON serialization for towers, elements, and certificates.

An element is a nested coefficient list bottoming out at ``"num/den"``
strings; its nesting depth determines its level.  A tower is a list of
levels ``{"label": str, "minpoly": [coeff, ...]}`` where each coefficient is
itself a nested list in the same convention.  This format is the substrate
of all certificates; serialize -> parse -> serialize is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import MalformedCertificate
from .tower import KIND_BASE, KIND_SQRT, Level, TowerElement, TowerField, _is_zero


def fraction_to_json(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def fraction_from_json(node) -> Fraction:
    if not isinstance(node, str):
        raise MalformedCertificate(f"expected 'num/den' string, got {node!r}")
    num, sep, den = node.partition("/")
    if not sep:
        raise MalformedCertificate(f"expected 'num/den' string, got {node!r}")
    try:
        n, d = int(num), int(den)
    except ValueError as exc:
        raise MalformedCertificate(f"bad rational {node!r}") from exc
    if d <= 0:
        raise MalformedCertificate(f"denominator must be positive in {node!r}")
    q = Fraction(n, d)
    if q.numerator != n or q.denominator != d:
        raise MalformedCertificate(f"rational {node!r} not in lowest terms")
    return q


def _data_to_json(data, lv):
    if lv == 0:
        return fraction_to_json(data)
    return [_data_to_json(c, lv - 1) for c in data]


def _data_from_json(node, lv, tower):
    if lv == 0:
        return fraction_from_json(node)
    if not isinstance(node, list):
        raise MalformedCertificate("element nesting shallower than its level")
    if len(node) != tower.degree_of_level(lv):
        raise MalformedCertificate(
            f"level-{lv} coefficient list has length {len(node)}, "
            f"expected {tower.degree_of_level(lv)}"
        )
    return tuple(_data_from_json(c, lv - 1, tower) for c in node)


def _json_depth(node) -> int:
    d = 0
    while isinstance(node, list):
        if not node:
            raise MalformedCertificate("empty coefficient list")
        node = node[0]
        d += 1
    return d


def element_to_json(x: TowerElement):
    return _data_to_json(x.data, x.level)


def element_from_json(tower: TowerField, node) -> TowerElement:
    lv = _json_depth(node)
    if lv > tower.height:
        raise MalformedCertificate("element deeper than the tower")
    return TowerElement(tower, lv, _data_from_json(node, lv, tower))


def tower_to_json(tower: TowerField):
    out = []
    for i, level in enumerate(tower.levels):
        out.append(
            {
                "label": level.label,
                "minpoly": [_data_to_json(c, i) for c in level.minpoly],
            }
        )
    return out


def tower_from_json(node) -> TowerField:
    if not isinstance(node, list):
        raise MalformedCertificate("tower must be a list of levels")
    levels: list[Level] = []
    partial = TowerField(())
    for i, entry in enumerate(node):
        if not isinstance(entry, dict) or set(entry) != {"label", "minpoly"}:
            raise MalformedCertificate("tower level must be {label, minpoly}")
        coeffs = entry["minpoly"]
        if not isinstance(coeffs, list) or len(coeffs) < 3:
            raise MalformedCertificate("minpoly must have degree >= 2")
        raw = tuple(_data_from_json(c, i, partial) for c in coeffs)
        if _is_zero(raw[-1], i) or raw[-1] != partial.one(i).data:
            raise MalformedCertificate("minpoly must be monic")
        kind = KIND_SQRT if (len(raw) == 3 and _is_zero(raw[1], i)) else KIND_BASE
        levels.append(Level(str(entry["label"]), raw, kind))
        partial = TowerField(levels)
    return partial


def vector_to_json(v) -> list:
    return [element_to_json(x) for x in v]


def vector_from_json(tower: TowerField, node) -> tuple[TowerElement, ...]:
    if not isinstance(node, list):
        raise MalformedCertificate("vector must be a list")
    return tuple(element_from_json(tower, x) for x in node)


def gram_to_json(gram) -> list:
    return [[element_to_json(x) for x in row] for row in gram]


def gram_from_json(tower: TowerField, node):
    if not isinstance(node, list) or any(not isinstance(r, list) for r in node):
        raise MalformedCertificate("gram matrix must be a list of rows")
    return tuple(tuple(element_from_json(tower, x) for x in row) for row in node)


def canonical_dumps(doc) -> str:
    """The one canonical text form: sorted keys, compact, newline-terminated."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def canonical_loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate(f"invalid JSON: {exc}") from exc


__all__ = [
    "fraction_to_json",
    "fraction_from_json",
    "element_to_json",
    "element_from_json",
    "tower_to_json",
    "tower_from_json",
    "vector_to_json",
    "vector_from_json",
    "gram_to_json",
    "gram_from_json",
    "canonical_dumps",
    "canonical_loads",
]
