"""Observables: Gauss residual, global Hall ratio, continuity, edge metrics.

Sign conventions (see fields module): the field strength reported as B is
the plaquette curl epsilon^{mn} d_m A_n itself, so consistent states carry
B = e |psi|^2 / sigma_H and the global estimator n e / B returns +sigma_H.

Missing values (0/0 ratios, B below its floor) are returned as None and
serialized as the explicit sentinel "NA"; zero is a meaningful value here
and is never used as a stand-in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Domain
from .fields import (CurrentField, LinkField, current_density,
                     density_to_plaquettes, j1_at_vlinks, j2_at_hlinks,
                     link_divergence, plaquette_curl)

FLOOR = 1e-300


def gauss_residual(s) -> tuple:
    """Residual of the Gauss constraint sigma_H curl A = e <|psi|^2>.

    Returns (field, scalar): the per-plaquette residual
    r = sigma_H curl(A) - e <|psi|^2>_plaquette and its sup norm relative to
    max(e ||rho||_inf, |sigma_H| ||curl||_inf).
    """
    d, p = s.domain, s.params
    curl = plaquette_curl(s.a, d)
    rho = np.where(d.active, s.psi.density(), 0.0)
    rho_p = density_to_plaquettes(p.e * rho, d)
    r = p.sigma_h * curl - rho_p
    scale = max(p.e * rho.max(initial=0.0),
                abs(p.sigma_h) * np.abs(curl).max(initial=0.0), FLOOR)
    return r, float(np.abs(r).max(initial=0.0) / scale)


def global_sigma(s, floor: float = 1e-12):
    """Global Hall ratio n e / B_mean, or None when |B_mean| < floor.

    n is the sample-averaged density, B_mean the mean plaquette curl over
    counted plaquettes.
    """
    d, p = s.domain, s.params
    n = norm_total(s) / d.area
    b = mean_curl(s.a, d)
    if abs(b) < floor:
        return None
    return float(n * p.e / b)


def mean_curl(a: LinkField, d: Domain) -> float:
    """Mean plaquette curl over counted plaquettes (0 if there are none)."""
    m = int(d.plaq_active.sum())
    if m == 0:
        return 0.0
    return float(plaquette_curl(a, d).sum() / m)


def norm_total(s) -> float:
    """Total squared norm of psi: sum |psi|^2 dx^2."""
    d = s.domain
    return float(np.where(d.active, s.psi.density(), 0.0).sum() * d.dx ** 2)


def continuity_residual(prev, nxt) -> float:
    """Centered continuity check between two recorded states.

    Computes || (j0(next) - j0(prev)) / (t_next - t_prev) + div j_bar ||_inf
    with j_bar the mean of the two states' link currents, normalized by the
    current scale max(|j_bar|)/dx.  Second order in the recording interval.
    """
    d, p = prev.domain, prev.params
    jp = current_density(prev.psi, prev.a, d, p)
    jn = current_density(nxt.psi, nxt.a, d, p)
    dt2 = nxt.t - prev.t
    if dt2 <= 0:
        raise ValueError("continuity_residual needs next.t > prev.t")
    j1b = 0.5 * (jp.j1 + jn.j1)
    j2b = 0.5 * (jp.j2 + jn.j2)
    resid = (jn.j0 - jp.j0) / dt2 + link_divergence(j1b, j2b, d)
    scale = max(np.abs(j1b).max(initial=0.0), np.abs(j2b).max(initial=0.0)) / d.dx
    return float(np.abs(resid[d.active]).max(initial=0.0) / max(scale, FLOOR))


def pure_gauge_residual(a: LinkField, d: Domain) -> float:
    """Sup norm of the plaquette curl: 0 exactly for pure gauge potentials."""
    return float(np.abs(plaquette_curl(a, d)).max(initial=0.0))


def edge_shell_links(d: Domain, k: int):
    """Masks of links within k cells of the boundary (h-links, v-links).

    A link belongs to the shell when either endpoint has lattice (BFS)
    distance <= k from the boundary site set; boundary sites themselves sit
    at distance 0.
    """
    if k < 1:
        raise ValueError("shell width k must be >= 1")
    near = (d.boundary_distance >= 0) & (d.boundary_distance <= k)
    h = (near[:-1, :] | near[1:, :]) & d.h_active
    v = (near[:, :-1] | near[:, 1:]) & d.v_active
    return h, v


def edge_fraction_of(j: CurrentField, d: Domain, k: int):
    """Share of total |j| carried by links within k cells of the boundary."""
    h, v = edge_shell_links(d, k)
    total = np.abs(j.j1).sum() + np.abs(j.j2).sum()
    if total <= FLOOR:
        return None
    near = np.abs(j.j1[h]).sum() + np.abs(j.j2[v]).sum()
    return float(near / total)


def edge_fraction(s, k: int):
    """edge_fraction_of for the state's own current; None when j == 0."""
    j = current_density(s.psi, s.a, s.domain, s.params)
    return edge_fraction_of(j, s.domain, k)


def interior_mean_density(s, k: int) -> float:
    """Mean |psi|^2 over sites deeper than the k-cell edge shell (0 if none)."""
    d = s.domain
    interior = d.active & (d.boundary_distance > k)
    if not interior.any():
        return 0.0
    return float(s.psi.density()[interior].mean())


def breakdown_indicator(s, rho_star: float, b_star: float, k: int = 3) -> bool:
    """Departure from the pure-gauge edge regime (diagnostic only).

    True when the interior mean density exceeds rho_star AND the curl sup
    norm exceeds b_star: the potential then carries real field strength in
    the bulk instead of being boundary-supported pure gauge.
    """
    return (interior_mean_density(s, k) > rho_star
            and pure_gauge_residual(s.a, s.domain) > b_star)


def ohm_residual(prev, cur, nxt) -> float:
    """Hall-law consistency along a run: j = -sigma_H eps dA/dt.

    Compares the transverse-interpolated current of the middle state with
    the centered time difference of the potential, component-wise on each
    link family, and returns the sup mismatch relative to the current scale.
    Second order in dt for the built-in integrator.
    """
    d, p = cur.domain, cur.params
    dt2 = nxt.t - prev.t
    j = current_density(cur.psi, cur.a, d, p)
    jt2 = j2_at_hlinks(j.j2, d)              # matches +sigma_H dA1/dt
    jt1 = j1_at_vlinks(j.j1, d)              # matches -sigma_H dA2/dt
    da1 = (nxt.a.a1 - prev.a.a1) / dt2
    da2 = (nxt.a.a2 - prev.a.a2) / dt2
    m1 = np.abs(p.sigma_h * da1 - jt2).max(initial=0.0)
    m2 = np.abs(-p.sigma_h * da2 - jt1).max(initial=0.0)
    scale = max(np.abs(jt1).max(initial=0.0), np.abs(jt2).max(initial=0.0), FLOOR)
    return float(max(m1, m2) / scale)


@dataclass
class DiagnosticsRecord:
    """Per-step scalar observables; None marks a missing value."""
    t: float
    norm: float
    gauss_rel: float
    continuity_rel: object      # float or None (needs neighbors)
    n_global: float
    b_mean: float
    sigma_est: object           # float or None
    edge_frac: object           # float or None
    pure_gauge_max: float
    holonomies: tuple           # wrapped phase per generator loop
    breakdown: bool

    @staticmethod
    def header(g: int) -> str:
        cols = ["t", "norm", "gauss_rel", "continuity_rel", "n_global",
                "B_mean", "sigma_est", "edge_fraction", "pure_gauge_max"]
        cols += [f"holonomy_{i + 1}" for i in range(g)]
        cols.append("breakdown")
        return ",".join(cols)

    def row(self) -> str:
        def fmt(v):
            if v is None:
                return "NA"
            if isinstance(v, bool):
                return "1" if v else "0"
            return repr(float(v))
        cells = [fmt(self.t), fmt(self.norm), fmt(self.gauss_rel),
                 fmt(self.continuity_rel), fmt(self.n_global),
                 fmt(self.b_mean), fmt(self.sigma_est), fmt(self.edge_frac),
                 fmt(self.pure_gauge_max)]
        cells += [fmt(h) for h in self.holonomies]
        cells.append(fmt(self.breakdown))
        return ",".join(cells)


def record_state(s, k: int, rho_star: float, b_star: float,
                 sigma_floor: float = 1e-12,
                 continuity: object = None) -> DiagnosticsRecord:
    """Assemble the scalar diagnostics of one state.

    The continuity column needs neighboring records and is passed in by the
    caller (None on the ends of a series).
    """
    from .holonomy import wilson_loop

    d = s.domain
    _, gauss_rel = gauss_residual(s)
    hol = tuple(wilson_loop(s.a, loop, d, s.params, loop_id=i).phase
                for i, loop in enumerate(d.generator_loops))
    return DiagnosticsRecord(
        t=s.t,
        norm=norm_total(s),
        gauss_rel=gauss_rel,
        continuity_rel=continuity,
        n_global=norm_total(s) / d.area,
        b_mean=mean_curl(s.a, d),
        sigma_est=global_sigma(s, sigma_floor),
        edge_frac=edge_fraction(s, k),
        pure_gauge_max=pure_gauge_residual(s.a, d),
        holonomies=hol,
        breakdown=breakdown_indicator(s, rho_star, b_star, k),
    )
