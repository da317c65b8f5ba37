"""Instance families shared by the test suites, the benchmarks and the CLI.

An instance is a triangulation, an arc of the surface and the flip path
that puts the arc into a triangulation.  Polygon arcs are chords; arcs of
other surfaces are given by their strings.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import BudgetExceeded, NotAnArc
from .strings import StringWord, enumerate_strings, flip_path_to_string
from .surface import (
    FlipBFS,
    Triangulation,
    all_polygon_chords,
    all_polygon_triangulations,
    annulus_triangulation,
    bfs_from,
    fan_triangulation,
)

# full flip graphs are used up to 7 vertices; the octagon is cut at a budget
POLYGON_BUDGET = {8: 500}
# the flip graphs of these annuli are finite up to relabelling
ANNULI = ((1, 1), (2, 1))
# larger annuli, added so that every coincidence case occurs
EXTRA_ANNULI = ((2, 2), (3, 1))
EXTRA_SHAPES = 16
MAX_CROSSINGS = 6


@dataclass(frozen=True)
class Instance:
    surface: str
    triangulation: Triangulation
    arc: tuple[int, int] | StringWord

    @property
    def name(self) -> str:
        arc = self.arc if isinstance(self.arc, tuple) else str(self.arc)
        return f"{self.surface}:{self.triangulation.triangles}:{arc}"


def polygon_triangulations(vertex_count: int) -> list[Triangulation]:
    budget = POLYGON_BUDGET.get(vertex_count)
    if budget is None:
        return all_polygon_triangulations(vertex_count)
    bfs = bfs_from(fan_triangulation(vertex_count))
    out = []
    try:
        for t in bfs.iterate(budget):
            out.append(t)
    except BudgetExceeded:
        pass
    return out


def polygon_instances(vertex_count: int) -> Iterator[Instance]:
    name = f"polygon{vertex_count}"
    chords = all_polygon_chords(vertex_count)
    for t in polygon_triangulations(vertex_count):
        for ch in chords:
            yield Instance(name, t, ch)


def annulus_triangulations(outer: int, inner: int, limit: int | None = None) -> list[Triangulation]:
    """Triangulations reachable from the standard one, up to relabelling."""
    bfs = FlipBFS(annulus_triangulation(outer, inner))
    out = []
    try:
        for t in bfs.iterate(limit if limit is not None else 10**9):
            out.append(t)
    except BudgetExceeded:
        pass
    return out


def arc_strings(t: Triangulation, max_crossings: int = MAX_CROSSINGS, budget: int = 100_000) -> list[StringWord]:
    """Strings of ``t`` with at most ``max_crossings`` letters that belong to arcs.

    Other strings describe curves with self-crossings or curves parallel
    to the boundary; no flip sequence turns them into an arc.
    """
    out = []
    for w in enumerate_strings(t, max_crossings):
        try:
            flip_path_to_string(t, w, budget)
        except NotAnArc:
            continue
        out.append(w)
    return out


def annulus_instances(outer: int, inner: int, limit: int | None = None) -> Iterator[Instance]:
    name = f"annulus{outer}+{inner}"
    for t in annulus_triangulations(outer, inner, limit):
        for w in arc_strings(t):
            yield Instance(name, t, w)


def acceptance_instances(polygons=(5, 6, 7, 8)) -> Iterator[Instance]:
    for nv in polygons:
        yield from polygon_instances(nv)
    for o, i in ANNULI:
        yield from annulus_instances(o, i)


def coverage_instances() -> Iterator[Instance]:
    """Annulus instances including the larger annuli."""
    for o, i in ANNULI:
        yield from annulus_instances(o, i)
    for o, i in EXTRA_ANNULI:
        yield from annulus_instances(o, i, EXTRA_SHAPES)
