"""Reading surfaces, seeds and arcs from files and command-line strings."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .qtorus import QTElement
from .seed import CompatiblePair, solve_lambda
from .strings import StringWord, format_word, parse_word
from .surface import Triangulation, annulus_triangulation, from_triangles, polygon_triangulation


def load_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def surface_from_data(data: dict) -> Triangulation:
    """Build a triangulation from one of three layouts.

    ``{"polygon": {"vertex_count": N, "diagonals": [[i, j], ...]}}``,
    ``{"annulus": {"outer": p, "inner": r}}`` or the explicit
    ``{"n": n, "boundary": [...], "triangles": [[s0, s1, s2], ...]}`` with
    sides listed counterclockwise (``"orientation": "cw"`` reverses them).
    """
    if "polygon" in data:
        p = data["polygon"]
        return polygon_triangulation(int(p["vertex_count"]), p.get("diagonals", []))
    if "annulus" in data:
        a = data["annulus"]
        return annulus_triangulation(int(a["outer"]), int(a["inner"]))
    tris = [list(t) for t in data["triangles"]]
    if data.get("orientation", "ccw") == "cw":
        tris = [t[::-1] for t in tris]
    return from_triangles(int(data["n"]), data["boundary"], tris)


def load_surface(path: str | Path) -> Triangulation:
    return surface_from_data(load_json(path))


def pair_from_data(data: dict) -> CompatiblePair:
    m, n = int(data["m"]), int(data["n"])
    b = np.array(data["B"], dtype=np.int64).reshape(m, n)
    lam = data.get("lambda")
    lam = solve_lambda(b) if lam is None else np.array(lam, dtype=np.int64).reshape(m, m)
    return CompatiblePair(b, lam)


def load_pair(path: str | Path) -> CompatiblePair:
    return pair_from_data(load_json(path))


def pair_to_data(pair: CompatiblePair) -> dict:
    return {"m": pair.m, "n": pair.n, "B": pair.b.tolist(), "lambda": pair.lam.tolist()}


def parse_arc(text: str, t: Triangulation) -> tuple[int, int] | StringWord:
    """``"i-j"`` is a polygon chord; anything else is a word such as ``"1 >R 2"`` or ``"@arc:0"``."""
    text = text.strip()
    if "-" in text and ">" not in text and "<" not in text and not text.startswith("@"):
        i, j = (int(x) for x in text.split("-"))
        return (i, j)
    return parse_word(text, t)


def arc_to_text(arc, t: Triangulation | None = None) -> str:
    if isinstance(arc, StringWord):
        return format_word(arc, t)
    return f"{arc[0]}-{arc[1]}"


def element_to_data(x: QTElement) -> list[dict]:
    return [{"exponent": list(g), "coeff": {str(h): v for h, v in c.items()}} for g, c in x.sorted_terms()]


def _format_coeff(c) -> str:
    parts = []
    for h, v in c.items():
        qpart = f"q^({h}/2)" if h else ""
        if not qpart:
            parts.append(str(v))
        elif v == 1:
            parts.append(qpart)
        else:
            parts.append(f"{v}{qpart}")
    return " + ".join(parts)


def format_element(x: QTElement, names: list[str] | None = None) -> str:
    """Human form, e.g. ``X0^-1 + q^(1/2) X0^-1 X1``."""
    if not x:
        return "0"
    parts = []
    for g, c in x.sorted_terms():
        factors = [(names[i] if names else f"X{i}") + ("" if e == 1 else f"^{e}") for i, e in enumerate(g) if e]
        mono = " ".join(factors)
        coeff = _format_coeff(c)
        if len(c.items()) > 1:
            coeff = f"({coeff})"
        if not mono:
            parts.append(coeff)
        elif coeff == "1":
            parts.append(mono)
        else:
            parts.append(f"{coeff} {mono}")
    return " + ".join(parts)
