"""
Preset Scenarios
================
Procedural stand-ins for the two evaluation environments:

- ``s-turn``: a single S-shaped road with pedestrians crossing it; one fixed
  start/goal combination.
- ``urban-grid``: a 4 x 2 grid of intersections with sidewalks, crossing
  pedestrians, 12 seen and 4 unseen routes.
"""

import math
from typing import Callable

import numpy as np
from shapely.geometry import LineString, MultiPolygon
from shapely.geometry.base import BaseGeometry

from .errors import InvalidScenarioError
from .scenario import (
    SCHEMA_VERSION,
    PedestrianSpec,
    PolygonCoords,
    PoseSpec,
    RouteSpec,
    RouteSplit,
    ScenarioConfig,
)

ROAD_HALF_WIDTH = 4.0
SIDEWALK_WIDTH = 3.0
CROSSING_OVERHANG = 1.5  # how far crossing pedestrians walk onto the sidewalk

TRAINING_SPEED_RANGE = (0.6, 1.2)


def _polygon_coords(geom: BaseGeometry, tolerance: float = 0.02) -> list[PolygonCoords]:
    """Exterior rings of a (multi)polygon, simplified and rounded for tidy JSON."""
    polys = list(geom.geoms) if isinstance(geom, MultiPolygon) else [geom]
    result = []
    for poly in polys:
        if poly.is_empty or poly.area < 1.0:
            continue
        ring = poly.simplify(tolerance).exterior.coords[:-1]
        result.append(tuple((round(x, 4), round(y, 4)) for x, y in ring))
    return result


def _rectangle(x0: float, y0: float, x1: float, y1: float) -> PolygonCoords:
    return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))


def _crossing(ped_id: str, point: np.ndarray, normal: np.ndarray) -> PedestrianSpec:
    reach = ROAD_HALF_WIDTH + CROSSING_OVERHANG
    a = point - reach * normal
    b = point + reach * normal
    loop = 4.0 * reach
    return PedestrianSpec(
        ped_id=ped_id,
        waypoints=((round(float(a[0]), 4), round(float(a[1]), 4)),
                   (round(float(b[0]), 4), round(float(b[1]), 4))),
        speed_range=TRAINING_SPEED_RANGE,
        phase_range=(0.0, loop),
    )


# =============================================================================
# S-Turn
# =============================================================================

def _s_turn_centerline(shift: float = 12.0, bend_length: float = 40.0) -> np.ndarray:
    xs = np.arange(-15.0, 70.0 + 1e-9, 1.0)
    ys = np.where(
        xs < 0, 0.0,
        np.where(xs > bend_length, shift, 0.5 * shift * (1.0 - np.cos(np.pi * xs / bend_length))),
    )
    return np.stack([xs, ys], axis=-1)


def s_turn() -> ScenarioConfig:
    """S-shaped road, start on the left straight, goal on the right straight."""
    centerline = LineString(_s_turn_centerline())
    road = centerline.buffer(ROAD_HALF_WIDTH, cap_style="flat")
    outer = centerline.buffer(ROAD_HALF_WIDTH + SIDEWALK_WIDTH, cap_style="flat")
    sidewalks = outer.difference(road)

    pedestrians = []
    for i, arc in enumerate((22.0, 36.0, 50.0, 66.0)):
        point = np.array(centerline.interpolate(arc).coords[0])
        ahead = np.array(centerline.interpolate(arc + 0.5).coords[0])
        tangent = (ahead - point) / np.linalg.norm(ahead - point)
        normal = np.array([-tangent[1], tangent[0]])
        pedestrians.append(_crossing(f"ped-{i}", point, normal))

    return ScenarioConfig(
        schema_version=SCHEMA_VERSION,
        scenario_id="s-turn",
        roads=tuple(_polygon_coords(road)),
        boundaries=tuple(_polygon_coords(sidewalks)),
        start=PoseSpec(x=-10.0, y=0.0, heading_deg=0.0),
        goal=(65.0, 12.0),
        goal_radius=2.0,
        pedestrians=tuple(pedestrians),
        time_limit=25.0,
    )


# =============================================================================
# Urban Grid
# =============================================================================

GRID_XS = (0.0, 40.0, 80.0, 120.0)
GRID_YS = (0.0, 40.0)
GRID_MARGIN = 12.0

_SEEN_ROUTES = (
    ((0, 0), (2, 0)), ((0, 0), (1, 1)), ((1, 0), (3, 0)), ((1, 0), (2, 1)),
    ((2, 0), (0, 0)), ((2, 0), (3, 1)), ((3, 0), (1, 0)), ((0, 1), (2, 1)),
    ((1, 1), (0, 0)), ((2, 1), (3, 0)), ((3, 1), (1, 1)), ((3, 1), (2, 0)),
)
_UNSEEN_ROUTES = (
    ((0, 0), (3, 1)), ((1, 1), (3, 0)), ((0, 1), (2, 0)), ((3, 0), (0, 1)),
)


def _sidewalk_segments(lines: tuple[float, ...], lo: float, hi: float) -> list[tuple[float, float]]:
    """Spans along a street between the crossing streets at ``lines``."""
    edges = [lo] + [v for c in lines for v in (c - ROAD_HALF_WIDTH, c + ROAD_HALF_WIDTH)] + [hi]
    return [(edges[i], edges[i + 1]) for i in range(0, len(edges), 2) if edges[i + 1] > edges[i]]


def _grid_route(route_id: str, split: RouteSplit, start: tuple[int, int], goal: tuple[int, int]) -> RouteSpec:
    sx, sy = GRID_XS[start[0]], GRID_YS[start[1]]
    gx, gy = GRID_XS[goal[0]], GRID_YS[goal[1]]
    # Approach the start intersection along the first street of the route
    if gx != sx:
        direction = (math.copysign(1.0, gx - sx), 0.0)
    else:
        direction = (0.0, math.copysign(1.0, gy - sy))
    heading = math.degrees(math.atan2(direction[1], direction[0]))
    return RouteSpec(
        route_id=route_id,
        split=split,
        start=PoseSpec(x=sx - 10.0 * direction[0], y=sy - 10.0 * direction[1], heading_deg=heading),
        goal=(gx, gy),
    )


def urban_grid() -> ScenarioConfig:
    """Eight intersections, sidewalks along every block, crossings mid-block."""
    x_lo, x_hi = GRID_XS[0] - GRID_MARGIN, GRID_XS[-1] + GRID_MARGIN
    y_lo, y_hi = GRID_YS[0] - GRID_MARGIN, GRID_YS[-1] + GRID_MARGIN
    hw, sw = ROAD_HALF_WIDTH, SIDEWALK_WIDTH

    roads = [_rectangle(x_lo, y - hw, x_hi, y + hw) for y in GRID_YS]
    roads += [_rectangle(x - hw, y_lo, x + hw, y_hi) for x in GRID_XS]

    boundaries = []
    for y in GRID_YS:
        for a, b in _sidewalk_segments(GRID_XS, x_lo, x_hi):
            boundaries.append(_rectangle(a, y + hw, b, y + hw + sw))
            boundaries.append(_rectangle(a, y - hw - sw, b, y - hw))
    for x in GRID_XS:
        for a, b in _sidewalk_segments(GRID_YS, y_lo, y_hi):
            boundaries.append(_rectangle(x + hw, a, x + hw + sw, b))
            boundaries.append(_rectangle(x - hw - sw, a, x - hw, b))

    pedestrians = []
    for j, y in enumerate(GRID_YS):
        for i in range(len(GRID_XS) - 1):
            mid = 0.5 * (GRID_XS[i] + GRID_XS[i + 1])
            pedestrians.append(_crossing(f"ped-h{j}{i}", np.array([mid, y]), np.array([0.0, 1.0])))
    for i, x in enumerate(GRID_XS):
        mid = 0.5 * (GRID_YS[0] + GRID_YS[1])
        pedestrians.append(_crossing(f"ped-v{i}", np.array([x, mid]), np.array([1.0, 0.0])))

    routes = [_grid_route(f"seen-{k:02d}", RouteSplit.SEEN, s, g) for k, (s, g) in enumerate(_SEEN_ROUTES)]
    routes += [_grid_route(f"unseen-{k:02d}", RouteSplit.UNSEEN, s, g) for k, (s, g) in enumerate(_UNSEEN_ROUTES)]

    first = routes[0]
    return ScenarioConfig(
        schema_version=SCHEMA_VERSION,
        scenario_id="urban-grid",
        roads=tuple(roads),
        boundaries=tuple(boundaries),
        start=first.start,
        goal=first.goal,
        goal_radius=2.5,
        routes=tuple(routes),
        pedestrians=tuple(pedestrians),
        time_limit=45.0,
    )


PRESETS: dict[str, Callable[[], ScenarioConfig]] = {
    "s-turn": s_turn,
    "urban-grid": urban_grid,
}


def get_preset(name: str) -> ScenarioConfig:
    """Build a preset scenario by name."""
    try:
        return PRESETS[name]()
    except KeyError:
        raise InvalidScenarioError(
            f"Unknown preset '{name}'. Available: {', '.join(sorted(PRESETS))}", name
        ) from None
