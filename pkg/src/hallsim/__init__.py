"""hallsim: lattice dynamics of a 2D electron field with Chern-Simons links.

A masked square-lattice simulator for a non-interacting electron field
minimally coupled (Peierls links) to a U(1) potential whose dynamics is the
Hall law d_t A = (Hall dual of j)/sigma_H with Gauss constraint
sigma_H curl A = e |psi|^2, on multiply-connected domains.  Includes the
zero-mode quantization chain that forces integer sigma_H, Wilson-loop
holonomies, and edge/bulk regime diagnostics.
"""

__version__ = "0.1.0"

from .domain import (Domain, DomainError, build_corbino, build_rectangle,
                     homology_generators)
from .dynamics import (Params, SimState, SolverError, advance, cayley_step,
                       default_dt, dense_hamiltonian, gauge_rate,
                       hamiltonian_apply, initialize_consistent, step_gauge,
                       step_matter)
from .fields import (CurrentField, GaugeTransform, LinkField, SiteField,
                     apply_gauge, current_density, density_to_plaquettes,
                     link_divergence, plaquette_curl, site_gradient)
from .holonomy import LoopPhase, holonomy_drift, insert_flux, wilson_loop, wrap_phase
from .initial import (band_limited, gaussian_packet, normalize,
                      rim_pair_state, uniform_state)
from .quantization import (Spectrum, WavefunctionSpec, ZeroMode,
                           commutator_check, single_valuedness_scan,
                           wavefunction_value, zero_mode)
