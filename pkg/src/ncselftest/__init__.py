"""Scalable noncontextuality inequalities I_n: bounds, graph-state violations
and robust self-testing certificates."""
from ._accel import HAS_NUMBA, backend_name
from .graphs import (Graph, StabilizerGroup, graph_state_vector, stabilizer_expectation,
                     stabilizer_generators)
from .inequality import (CorrelatorTerm, Inequality, Label, build, classical_bound_bruteforce,
                         classical_bound_fast, hypergraph, lifting_decomposition, quantum_bound)
from .pauli import PauliString, commutes, embed, multiply, to_dense
from .realization import (Realization, alternative_realization_3, compatibility_report,
                          correlator, evaluate, ideal_realization)
from .robustness import (JordanBlockSpec, RobustnessReport, Statistics, actual_fidelities,
                         canonical_form_check, certify, epsilon_from_statistics,
                         fidelity_bounds, invariant_subspace, jordan_realization,
                         validate_robustness)

__version__ = "0.1.0"
