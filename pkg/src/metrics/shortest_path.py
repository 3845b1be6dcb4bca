"""
Shortest Drivable Path
======================
Visibility-graph search over the drivable region (road minus boundary
polygons, pedestrians ignored).

Nodes are the start, the goal and every reflex vertex of the region's rings;
two nodes are joined when the straight segment between them stays inside the
region. Dijkstra on segment lengths gives the shortest path.

With ``clearance > 0`` the search runs on the region eroded by ``clearance``
(mitre joins, so every point of it keeps the full clearance). A start or goal
outside the eroded region is joined to its nearest point there by a straight
stub, which must itself stay drivable.
"""

from dataclasses import dataclass
from functools import lru_cache

import networkx as nx
import numpy as np
import shapely
import structlog
from shapely.geometry import LineString, MultiPolygon, Polygon
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry.base import BaseGeometry
from shapely.geometry.polygon import orient
from shapely.ops import nearest_points

from ..sim import ScenarioConfig
from ..sim.scenario import build_geometry
from .errors import NoPathError

logger = structlog.get_logger(__name__)

Point = tuple[float, float]

# Segments may graze the region boundary by this much
VISIBILITY_TOLERANCE = 1e-7


@dataclass(frozen=True)
class ShortestPath:
    length: float
    waypoints: tuple[Point, ...]


def _polygons(geom: BaseGeometry) -> list[Polygon]:
    if isinstance(geom, Polygon):
        return [] if geom.is_empty else [geom]
    if isinstance(geom, MultiPolygon):
        return list(geom.geoms)
    return [g for g in getattr(geom, "geoms", []) if isinstance(g, Polygon)]


def reflex_vertices(region: BaseGeometry) -> np.ndarray:
    """Vertices where the free space turns concave, (N, 2)."""
    found = []
    for poly in _polygons(region):
        # Exterior CCW, holes CW: a right turn marks a reflex corner of free space
        poly = orient(poly, sign=1.0)
        for ring in [poly.exterior, *poly.interiors]:
            coords = np.asarray(ring.coords)[:-1]
            if len(coords) < 3:
                continue
            prev = np.roll(coords, 1, axis=0)
            nxt = np.roll(coords, -1, axis=0)
            a, b = coords - prev, nxt - coords
            cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
            found.append(coords[cross < 0])
    if not found:
        return np.zeros((0, 2))
    return np.unique(np.concatenate(found), axis=0)


def _visible(region: BaseGeometry, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Mask of segments a[i] -> b[i] covered by region."""
    if len(a) == 0:
        return np.zeros(0, dtype=bool)
    segments = shapely.linestrings(np.stack([a, b], axis=1))
    return shapely.covers(region, segments)


def _anchor(region: BaseGeometry, inner: BaseGeometry, full: BaseGeometry, point: Point) -> Point:
    """``point`` itself when the search region covers it, else its nearest point on the region."""
    if inner.covers(ShapelyPoint(point)):
        return point
    nearest = nearest_points(region, ShapelyPoint(point))[0]
    anchor = (float(nearest.x), float(nearest.y))
    if not full.covers(LineString([point, anchor])):
        raise NoPathError(f"{point} cannot reach the region kept clear of the edges")
    return anchor


def _length(waypoints: list[Point]) -> float:
    return float(sum(np.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(waypoints, waypoints[1:])))


@lru_cache(maxsize=256)
def _shortest_path(
    roads: tuple, boundaries: tuple, start: Point, goal: Point, clearance: float
) -> ShortestPath:
    drivable = build_geometry(roads, boundaries).drivable
    full = drivable.buffer(VISIBILITY_TOLERANCE)
    region = drivable.buffer(-clearance, join_style="mitre") if clearance > 0 else drivable
    if region.is_empty:
        raise NoPathError(f"nothing of the drivable region is {clearance} m from its edges")
    inner = region.buffer(VISIBILITY_TOLERANCE)
    for geom in (full, inner):
        shapely.prepare(geom)

    head = _anchor(region, inner, full, start)
    tail = _anchor(region, inner, full, goal)
    nodes = np.vstack([np.array([head, tail], dtype=float), reflex_vertices(region)])
    count = len(nodes)

    graph = nx.Graph()
    graph.add_nodes_from(range(count))
    i_idx, j_idx = np.triu_indices(count, k=1)
    visible = _visible(inner, nodes[i_idx], nodes[j_idx])
    for i, j in zip(i_idx[visible], j_idx[visible]):
        graph.add_edge(int(i), int(j), weight=float(np.hypot(*(nodes[i] - nodes[j]))))

    try:
        _, path = nx.single_source_dijkstra(graph, 0, 1, weight="weight")
    except nx.NetworkXNoPath:
        raise NoPathError(f"goal {goal} unreachable from {start}") from None

    waypoints = [(float(nodes[k][0]), float(nodes[k][1])) for k in path]
    if head != start:
        waypoints.insert(0, start)
    if tail != goal:
        waypoints.append(goal)
    return ShortestPath(_length(waypoints), tuple(waypoints))


def shortest_path(config: ScenarioConfig, clearance: float = 0.0) -> ShortestPath:
    """
    Shortest drivable path from the scenario start to its goal.

    When no path keeps ``clearance``, half of it is tried, then none.

    Raises:
        NoPathError: If the goal is unreachable
    """
    start = (config.start.x, config.start.y)
    goal = (float(config.goal[0]), float(config.goal[1]))
    ladder = [float(clearance), float(clearance) / 2.0, 0.0] if clearance > 0 else [0.0]
    for attempt in ladder[:-1]:
        try:
            return _shortest_path(config.roads, config.boundaries, start, goal, attempt)
        except NoPathError:
            logger.warning("route_clearance_dropped", scenario_id=config.scenario_id, clearance=attempt)
    return _shortest_path(config.roads, config.boundaries, start, goal, ladder[-1])


def shortest_path_length(config: ScenarioConfig) -> float:
    """l for SPL."""
    return shortest_path(config).length
