"""Masked 2D lattice domains: rectangles with holes and Corbino annuli.

Sites live on a uniform nx x ny grid with spacing dx; site (ix, iy) sits at
(ix*dx, iy*dx).  Links are 4-neighbor bonds between active sites; a plaquette
is counted only when all four corner sites are active.  Each hole contributes
one homology generator loop, a closed lattice loop with winding number one
around that hole and zero around all others.

Domains are frozen after construction (arrays are read-only) and safe for
concurrent reads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DomainError(ValueError):
    """Requested domain geometry is invalid."""


@dataclass(frozen=True)
class Domain:
    nx: int
    ny: int
    dx: float
    active: np.ndarray            # bool (nx, ny), True on sites of the sample
    holes: tuple                  # per hole: (m, 2) int array of inactive cells
    generator_loops: tuple        # per hole: (L, 2) int array, closed CCW loop
    boundary_mask: np.ndarray = field(init=False)   # active sites with an inactive/out-of-frame 4-neighbor
    boundary_distance: np.ndarray = field(init=False)  # lattice BFS distance to boundary (-1 on inactive)
    h_active: np.ndarray = field(init=False)        # bool (nx-1, ny), link (x,y)->(x+1,y)
    v_active: np.ndarray = field(init=False)        # bool (nx, ny-1), link (x,y)->(x,y+1)
    plaq_active: np.ndarray = field(init=False)     # bool (nx-1, ny-1), all 4 corners active

    def __post_init__(self):
        act = self.active
        object.__setattr__(self, "h_active", act[:-1, :] & act[1:, :])
        object.__setattr__(self, "v_active", act[:, :-1] & act[:, 1:])
        object.__setattr__(
            self, "plaq_active",
            act[:-1, :-1] & act[1:, :-1] & act[:-1, 1:] & act[1:, 1:])
        object.__setattr__(self, "boundary_mask", _boundary_mask(act))
        object.__setattr__(
            self, "boundary_distance", _bfs_distance(act, self.boundary_mask))
        for name in ("active", "boundary_mask", "boundary_distance",
                     "h_active", "v_active", "plaq_active"):
            getattr(self, name).setflags(write=False)

    @property
    def g(self) -> int:
        """Genus: number of independent holes."""
        return len(self.holes)

    @property
    def boundary_sites(self) -> np.ndarray:
        """(m, 2) int array of boundary site indices."""
        return np.argwhere(self.boundary_mask)

    @property
    def n_active(self) -> int:
        return int(self.active.sum())

    @property
    def area(self) -> float:
        """Sample area: active site count times the cell area."""
        return self.n_active * self.dx ** 2

    def site_xy(self, ix, iy):
        """Physical coordinates of a site."""
        return ix * self.dx, iy * self.dx

    def hole_centroid(self, k: int) -> tuple:
        """Centroid (physical coordinates) of hole k's inactive cells."""
        cells = self.holes[k]
        return (float(cells[:, 0].mean()) * self.dx,
                float(cells[:, 1].mean()) * self.dx)


def _boundary_mask(active: np.ndarray) -> np.ndarray:
    """Active sites with at least one inactive or out-of-frame 4-neighbor."""
    nx, ny = active.shape
    pad = np.zeros((nx + 2, ny + 2), dtype=bool)
    pad[1:-1, 1:-1] = active
    interior = (pad[:-2, 1:-1] & pad[2:, 1:-1] & pad[1:-1, :-2] & pad[1:-1, 2:])
    return active & ~interior


def _bfs_distance(active: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    """Multi-source 4-neighbor BFS distance over active sites; -1 off-domain."""
    dist = np.full(active.shape, -1, dtype=np.int64)
    frontier = seeds.copy()
    k = 0
    while frontier.any():
        dist[frontier] = k
        grown = np.zeros_like(frontier)
        grown[:-1, :] |= frontier[1:, :]
        grown[1:, :] |= frontier[:-1, :]
        grown[:, :-1] |= frontier[:, 1:]
        grown[:, 1:] |= frontier[:, :-1]
        frontier = grown & active & (dist < 0)
        k += 1
    return dist


def _inactive_regions(active: np.ndarray):
    """Connected inactive regions not touching the outer frame (the holes).

    Returns a list of (m, 2) index arrays, one per enclosed region, in a
    deterministic (scan) order.
    """
    nx, ny = active.shape
    inactive = ~active
    # flood everything connected to the frame: that is "outside", not a hole
    frame = np.zeros_like(inactive)
    frame[0, :] = frame[-1, :] = True
    frame[:, 0] = frame[:, -1] = True
    outside = np.zeros_like(inactive)
    frontier = inactive & frame
    while frontier.any():
        outside |= frontier
        grown = np.zeros_like(frontier)
        grown[:-1, :] |= frontier[1:, :]
        grown[1:, :] |= frontier[:-1, :]
        grown[:, :-1] |= frontier[:, 1:]
        grown[:, 1:] |= frontier[:, :-1]
        frontier = grown & inactive & ~outside
    remaining = inactive & ~outside
    regions = []
    seen = np.zeros_like(remaining)
    for ix, iy in np.argwhere(remaining):
        if seen[ix, iy]:
            continue
        comp = np.zeros_like(remaining)
        comp[ix, iy] = True
        frontier = comp.copy()
        while frontier.any():
            grown = np.zeros_like(frontier)
            grown[:-1, :] |= frontier[1:, :]
            grown[1:, :] |= frontier[:-1, :]
            grown[:, :-1] |= frontier[:, 1:]
            grown[:, 1:] |= frontier[:, :-1]
            frontier = grown & remaining & ~comp
            comp |= frontier
        seen |= comp
        regions.append(np.argwhere(comp))
    return regions


def _rect_ring(x0: int, x1: int, y0: int, y1: int) -> np.ndarray:
    """Closed CCW site loop on the boundary of the index rectangle [x0,x1]x[y0,y1]."""
    sites = []
    for x in range(x0, x1):
        sites.append((x, y0))
    for y in range(y0, y1):
        sites.append((x1, y))
    for x in range(x1, x0, -1):
        sites.append((x, y1))
    for y in range(y1, y0, -1):
        sites.append((x0, y))
    return np.array(sites, dtype=np.int64)


def _check_loop(domain_active: np.ndarray, loop: np.ndarray) -> bool:
    """Loop sites active, consecutive sites 4-adjacent (cyclically)."""
    n = len(loop)
    if n < 4:
        return False
    for i in range(n):
        x, y = loop[i]
        if not domain_active[x, y]:
            return False
        x2, y2 = loop[(i + 1) % n]
        if abs(int(x2) - int(x)) + abs(int(y2) - int(y)) != 1:
            return False
    return True


def _validate(domain: Domain, expected_g: int):
    act = domain.active
    if not act.any():
        raise DomainError("domain has no active sites")
    nbr_count = np.zeros(act.shape, dtype=np.int64)
    nbr_count[:-1, :] += act[1:, :]
    nbr_count[1:, :] += act[:-1, :]
    nbr_count[:, :-1] += act[:, 1:]
    nbr_count[:, 1:] += act[:, :-1]
    if np.any(act & (nbr_count == 0)):
        raise DomainError("domain contains isolated active sites")
    if domain.g != expected_g:
        raise DomainError(
            f"genus mismatch: expected {expected_g}, mask yields {domain.g}")
    for k, loop in enumerate(domain.generator_loops):
        if not _check_loop(act, loop):
            raise DomainError(f"generator loop {k} is not a closed active loop")


def build_rectangle(nx: int, ny: int, dx: float, holes=()) -> Domain:
    """Rectangle domain with axis-aligned rectangular holes.

    Each hole is (x0, y0, w, h) in site indices: sites x0..x0+w-1 x
    y0..y0+h-1 become inactive.  Holes must stay clear of the outer frame
    and of each other by at least two sites so every hole keeps a fully
    active one-site rim (the rim carries that hole's generator loop).
    """
    problems = []
    if nx < 4 or ny < 4:
        problems.append(f"grid too small: need nx, ny >= 4, got {nx}x{ny}")
    if dx <= 0:
        problems.append(f"dx must be positive, got {dx}")
    rects = []
    for spec in holes:
        x0, y0, w, h = (int(v) for v in spec)
        if w < 1 or h < 1:
            problems.append(f"hole {spec}: empty extent")
            continue
        if x0 < 1 or y0 < 1 or x0 + w > nx - 1 or y0 + h > ny - 1:
            problems.append(
                f"hole {spec}: touches the outer frame (would change the genus)")
            continue
        rects.append((x0, y0, w, h))
    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            xi, yi, wi, hi = rects[i]
            xj, yj, wj, hj = rects[j]
            gap_x = max(xi - (xj + wj), xj - (xi + wi))
            gap_y = max(yi - (yj + hj), yj - (yi + hi))
            if max(gap_x, gap_y) < 2:
                problems.append(
                    f"holes {rects[i]} and {rects[j]} overlap or are closer "
                    "than two sites")
    if problems:
        raise DomainError("; ".join(problems))

    active = np.ones((nx, ny), dtype=bool)
    hole_cells = []
    loops = []
    for x0, y0, w, h in rects:
        active[x0:x0 + w, y0:y0 + h] = False
        hole_cells.append(np.array(
            [(x, y) for x in range(x0, x0 + w) for y in range(y0, y0 + h)],
            dtype=np.int64))
        loops.append(_rect_ring(x0 - 1, x0 + w, y0 - 1, y0 + h))

    d = Domain(nx, ny, dx, active, tuple(hole_cells), tuple(loops))
    _validate(d, len(rects))
    return d


def build_corbino(n: int, dx: float, r_inner: float, r_outer: float) -> Domain:
    """Annular (Corbino) domain: masked disc of genus 1.

    The disc is centered on the grid; a site at distance d from the center
    is active when r_inner <= d <= r_outer.  The inner disc must contain at
    least one inactive site, otherwise there is no hole to encircle.
    """
    problems = []
    if n < 4:
        problems.append(f"grid too small: need n >= 4, got {n}")
    if dx <= 0:
        problems.append(f"dx must be positive, got {dx}")
    if not (0 < r_inner < r_outer):
        problems.append(
            f"need 0 < r_inner < r_outer, got r_inner={r_inner}, r_outer={r_outer}")
    if r_outer > n * dx / 2:
        problems.append(
            f"r_outer={r_outer} exceeds half the grid extent {n * dx / 2}")
    if problems:
        raise DomainError("; ".join(problems))

    c = (n - 1) / 2.0  # grid center in index units
    ix = np.arange(n)[:, None]
    iy = np.arange(n)[None, :]
    r = np.hypot(ix - c, iy - c) * dx
    active = (r >= r_inner) & (r <= r_outer)
    inner = r < r_inner
    if not inner.any():
        raise DomainError(
            f"inner radius {r_inner} excludes no site at dx={dx}: the hole is "
            "empty and the domain would be simply connected")

    hole_cells = np.argwhere(inner)

    # generator loop: square ring at the mid radius (deterministic, closed)
    m_mid = (r_inner + r_outer) / (2 * dx)
    loop = None
    for m in _ring_candidates(m_mid):
        x0 = int(np.floor(c - m))
        x1 = int(np.ceil(c + m))
        if x0 < 0 or x1 > n - 1:
            continue
        cand = _rect_ring(x0, x1, x0, x1)
        if _check_loop(active, cand):
            loop = cand
            break
    if loop is None:
        raise DomainError(
            "annulus too thin to carry a rectangular mid-radius loop")

    d = Domain(n, n, dx, active, (hole_cells,), (loop,))
    _validate(d, 1)
    return d


def _ring_candidates(m_mid: float):
    base = int(round(m_mid))
    for step in range(0, max(3, base)):
        for m in (base - step, base + step) if step else (base,):
            if m >= 1:
                yield m


def homology_generators(d: Domain):
    """One closed loop per hole, winding once around it (empty for g = 0)."""
    return [loop.copy() for loop in d.generator_loops]
