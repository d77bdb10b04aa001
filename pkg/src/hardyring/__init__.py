"""Hardy-type nonlocality on configurable entanglement graphs.

Statevector simulation of the post-selected Toffoli circuits, the matching
closed form, and an exhaustive local-hidden-variable check.
"""
from .analytic import (BasisCoeffs, DegeneratePostSelection, amplitudes_for_setting, coeffs_from_theta,
                       normalization_constant, p_success_analytic, sweep_theta)
from .config import (EntanglerSpec, MeasurementSetting, build_circuit, builtin_spec, interest_states_rule,
                     load_spec, make_spec, vanished_states)
from .lhv import (contradiction_chains, correlation_implications, enumerate_consistent_strategies,
                  paradox_states_oracle, quantum_supports, verify_paradox)
from .noise import NoiseModel, appendix_a_suite, run_noisy, tvd
from .sv import (Circuit, Histogram, PostSelectionError, Statevector, apply_gate, postselect_ancillas,
                 probabilities, run_circuit, sample_histogram)

__version__ = "0.1.0"
