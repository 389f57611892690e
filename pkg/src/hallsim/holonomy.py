"""Wilson-loop phases of the gauge potential around homology generators.

On a pure-gauge background the loop integral depends only on the loop's
homology class (lattice Stokes), so these phases are the topological
observables of the edge regime; inserting a flux through a hole shifts the
phase by e*flux/hbar, the lattice Aharonov-Bohm effect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import Domain, DomainError
from .fields import LinkField


def wrap_phase(x: float) -> float:
    """Wrap a phase to the half-open interval (-pi, pi]."""
    w = math.remainder(float(x), math.tau)
    if w <= -math.pi:
        w += math.tau
    return w


@dataclass(frozen=True)
class LoopPhase:
    loop_id: int
    raw: float      # unwrapped line integral of A (times dx) along the loop
    phase: float    # (e/hbar) * raw, wrapped to (-pi, pi]


def _loop_links(loop: np.ndarray):
    """Yield (component, x, y, sign) for each directed step of a closed loop."""
    n = len(loop)
    for i in range(n):
        x, y = int(loop[i][0]), int(loop[i][1])
        x2, y2 = int(loop[(i + 1) % n][0]), int(loop[(i + 1) % n][1])
        if x2 == x + 1 and y2 == y:
            yield 1, x, y, +1.0
        elif x2 == x - 1 and y2 == y:
            yield 1, x - 1, y, -1.0
        elif x2 == x and y2 == y + 1:
            yield 2, x, y, +1.0
        elif x2 == x and y2 == y - 1:
            yield 2, x, y - 1, -1.0
        else:
            raise DomainError(
                f"loop sites {(x, y)} and {(x2, y2)} are not 4-adjacent")


def wilson_loop(a: LinkField, loop: np.ndarray, d: Domain, p,
                loop_id: int = 0) -> LoopPhase:
    """Signed line integral of A along a closed lattice loop, and its phase.

    Rejects loops that cross inactive links.
    """
    raw = 0.0
    for comp, x, y, sign in _loop_links(loop):
        if comp == 1:
            if not d.h_active[x, y]:
                raise DomainError(f"loop crosses inactive link ({x},{y})->({x + 1},{y})")
            raw += sign * a.a1[x, y] * d.dx
        else:
            if not d.v_active[x, y]:
                raise DomainError(f"loop crosses inactive link ({x},{y})->({x},{y + 1})")
            raw += sign * a.a2[x, y] * d.dx
    return LoopPhase(loop_id, float(raw), wrap_phase(p.e * raw / p.hbar))


def holonomy_drift(states, loop: np.ndarray) -> float:
    """Max wrapped phase excursion from the first state of a recorded series."""
    states = list(states)
    if len(states) < 2:
        raise ValueError("holonomy_drift needs at least two recorded states")
    base = wilson_loop(states[0].a, loop, states[0].domain, states[0].params)
    drift = 0.0
    for s in states[1:]:
        ph = wilson_loop(s.a, loop, s.domain, s.params)
        drift = max(drift, abs(wrap_phase(ph.phase - base.phase)))
    return drift


def insert_flux(a: LinkField, d: Domain, hole: int, flux: float) -> LinkField:
    """Thread a flux through hole `hole` without touching any counted curl.

    Adds flux/dx to the vertical links crossing a horizontal cut that runs
    from the hole to the right frame; every counted plaquette gains two
    cancelling contributions (or none), so the curl is unchanged while any
    loop winding once around the hole picks up exactly `flux` in its line
    integral.
    """
    if not 0 <= hole < d.g:
        raise DomainError(f"domain has {d.g} hole(s); no hole {hole}")
    cells = d.holes[hole]
    cy = int(round(cells[:, 1].mean()))
    cy = min(max(cy, 0), d.ny - 2)          # cut between rows cy and cy+1
    hole_xmax = int(cells[cells[:, 1] == cy][:, 0].max(initial=cells[:, 0].max()))

    new = a.copy()
    started = False
    for x in range(hole_xmax + 1, d.nx):
        if d.v_active[x, cy]:
            if not started:
                # the plaquette left of the first cut link must be uncounted,
                # so the net flux lands inside the hole
                if x >= 1 and d.plaq_active[x - 1, cy]:
                    raise DomainError(
                        "flux cut does not start at the hole rim; choose a "
                        "different hole row")
                started = True
            new.a2[x, cy] += flux / d.dx
        # inactive stretches are skipped: their neighboring plaquettes are
        # uncounted, so resuming the cut beyond them keeps every counted
        # curl unchanged
    if not started:
        raise DomainError("no active links found right of the hole for the flux cut")
    return new
