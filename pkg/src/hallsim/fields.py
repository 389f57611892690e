"""Field containers and discrete differential operators.

Conventions (fixed once, used everywhere):

* epsilon_{12} = +1 = -epsilon_{21}.
* The matter field psi is site-centered (complex, dimension 1/length so that
  |psi|^2 is an areal density); the gauge potential components a1, a2 are
  real link values on horizontal/vertical links; currents j1, j2 live on the
  same links, the charge density j0 = e |psi|^2 on sites.
* Link (x, y) -> (x+1, y) carries a1[x, y]; link (x, y) -> (x, y+1) carries
  a2[x, y].  Values on links touching inactive sites are identically zero.
* The plaquette curl is the counterclockwise circulation divided by the cell
  area, i.e. the discrete epsilon^{mn} d_m A_n:

      curl(x, y) = (a1[x,y] + a2[x+1,y] - a1[x,y+1] - a2[x,y]) / dx

* Hopping across a link attaches the Peierls phase exp(i e dx a / hbar) in
  the + orientation; the link current uses the same phase, which makes the
  discrete continuity equation exact for the semi-discrete dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Domain


@dataclass
class SiteField:
    """Complex amplitude per site; zero on inactive sites."""
    values: np.ndarray

    @classmethod
    def zeros(cls, d: Domain) -> "SiteField":
        return cls(np.zeros((d.nx, d.ny), dtype=np.complex128))

    def copy(self) -> "SiteField":
        return SiteField(self.values.copy())

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass
class LinkField:
    """Real value per link: a1 on horizontal links, a2 on vertical links."""
    a1: np.ndarray  # (nx-1, ny)
    a2: np.ndarray  # (nx, ny-1)

    @classmethod
    def zeros(cls, d: Domain) -> "LinkField":
        return cls(np.zeros((d.nx - 1, d.ny)), np.zeros((d.nx, d.ny - 1)))

    def copy(self) -> "LinkField":
        return LinkField(self.a1.copy(), self.a2.copy())


@dataclass
class CurrentField:
    """Charge current per link (j1, j2) and charge density per site (j0)."""
    j1: np.ndarray
    j2: np.ndarray
    j0: np.ndarray


@dataclass
class GaugeTransform:
    """Gauge function lambda per site (units: phase times hbar/e).

    When boundary_constrained is set, lambda must vanish on all boundary
    sites; this is the class of transformations the dynamics is insensitive
    to on a domain with boundary.
    """
    lam: np.ndarray
    boundary_constrained: bool = True

    def validate(self, d: Domain):
        if self.boundary_constrained:
            worst = np.abs(self.lam[d.boundary_mask]).max(initial=0.0)
            if worst != 0.0:
                raise ValueError(
                    f"boundary-constrained gauge function is nonzero on the "
                    f"boundary (max |lambda| = {worst})")


def plaquette_curl(a: LinkField, d: Domain) -> np.ndarray:
    """Discrete epsilon^{mn} d_m A_n per plaquette; zero on uncounted ones.

    Only plaquettes whose four links are all active are counted.
    """
    curl = (a.a1[:, :-1] + a.a2[1:, :] - a.a1[:, 1:] - a.a2[:-1, :]) / d.dx
    return np.where(d.plaq_active, curl, 0.0)


def site_gradient(lam: np.ndarray, d: Domain):
    """Forward difference of a site function onto links ((head-tail)/dx)."""
    g1 = (lam[1:, :] - lam[:-1, :]) / d.dx * d.h_active
    g2 = (lam[:, 1:] - lam[:, :-1]) / d.dx * d.v_active
    return g1, g2


def link_divergence(j1: np.ndarray, j2: np.ndarray, d: Domain) -> np.ndarray:
    """Staggered divergence of a link field, per site (adjoint of site_gradient).

    div(x) = (j1[x] - j1[x-e1] + j2[x] - j2[x-e2]) / dx with zero for links
    off the grid; identically zero on inactive sites.
    """
    nx, ny = d.nx, d.ny
    div = np.zeros((nx, ny))
    div[:-1, :] += j1
    div[1:, :] -= j1
    div[:, :-1] += j2
    div[:, 1:] -= j2
    return np.where(d.active, div / d.dx, 0.0)


def apply_gauge(a: LinkField, psi: SiteField, g: GaugeTransform, d: Domain,
                p) -> tuple:
    """Gauge transform: A -> A + grad(lambda), psi -> exp(i e lambda/hbar) psi."""
    g.validate(d)
    g1, g2 = site_gradient(g.lam, d)
    a_new = LinkField(a.a1 + g1, a.a2 + g2)
    phase = np.exp(1j * p.e * g.lam / p.hbar)
    psi_new = SiteField(np.where(d.active, psi.values * phase, 0.0))
    return a_new, psi_new


def current_density(psi: SiteField, a: LinkField, d: Domain, p) -> CurrentField:
    """Gauge-invariant link current and site charge density.

       j(link) = (e hbar / mu dx) Im[ psi*(tail) exp(-i e dx a / hbar) psi(head) ]
       j0(site) = e |psi|^2

    In the continuum limit this is (e hbar/mu) Im(psi* d_m psi)
    - (e^2/mu) A_m |psi|^2.  Because the link phase matches the hopping
    phase of the Hamiltonian, d_t j0 + div j = 0 holds exactly for the
    semi-discrete evolution.
    """
    v = psi.values
    scale = p.e * p.hbar / (p.mu * d.dx)
    w1 = np.conj(v[:-1, :]) * np.exp(-1j * p.e * d.dx * a.a1 / p.hbar) * v[1:, :]
    w2 = np.conj(v[:, :-1]) * np.exp(-1j * p.e * d.dx * a.a2 / p.hbar) * v[:, 1:]
    j1 = scale * np.imag(w1) * d.h_active
    j2 = scale * np.imag(w2) * d.v_active
    j0 = p.e * np.where(d.active, np.abs(v) ** 2, 0.0)
    return CurrentField(j1, j2, j0)


def density_to_plaquettes(rho: np.ndarray, d: Domain) -> np.ndarray:
    """Four-corner mean of a site density, per counted plaquette."""
    avg = 0.25 * (rho[:-1, :-1] + rho[1:, :-1] + rho[:-1, 1:] + rho[1:, 1:])
    return np.where(d.plaq_active, avg, 0.0)


def j2_at_hlinks(j2: np.ndarray, d: Domain) -> np.ndarray:
    """Transverse current at horizontal links: mean of the 4 nearest vertical
    links, counting missing links as zero (the weights stay 1/4)."""
    nx, ny = d.nx, d.ny
    pad = np.zeros((nx, ny + 1))
    pad[:, 1:ny] = j2
    out = 0.25 * (pad[:-1, 1:] + pad[1:, 1:] + pad[:-1, :-1] + pad[1:, :-1])
    return out * d.h_active


def j1_at_vlinks(j1: np.ndarray, d: Domain) -> np.ndarray:
    """Transverse current at vertical links: mean of the 4 nearest horizontal
    links, counting missing links as zero."""
    nx, ny = d.nx, d.ny
    pad = np.zeros((nx + 1, ny))
    pad[1:nx, :] = j1
    out = 0.25 * (pad[1:, :-1] + pad[1:, 1:] + pad[:-1, :-1] + pad[:-1, 1:])
    return out * d.v_active
