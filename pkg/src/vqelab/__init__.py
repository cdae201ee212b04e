"""vqelab: a classical simulation lab for CVaR-driven variational optimization
of random QUBO instances, with graph-structured circuits and imaginary-time
warm starts."""

__version__ = "0.1.0"

from .backend import active_backend, set_backend, use_backend
from .qubo import (MAX_QUBITS, OptimalSet, QuboInstance, brute_force_solve, energy,
                   energy_table, generate_instance, load_instance, save_instance)
from .statevector import (PauliString, State, expect_pauli, fidelity, init_plus,
                          sample_counts, shot_pauli_estimate)
from .ansatz import (Circuit, Gate, ResourceEstimate, build_hea_linear_cnot,
                     build_hea_parallel_cz, build_product_ansatz, build_sia,
                     circuit_dict, linear_swap_schedule, prepare, resource_estimate)
from .cvar import CvarEstimate, EnergyOrder, cvar_exact, cvar_sampled, cvar_std_error, tail_count
from .warmstart import (OverlapCoeffs, WarmStartConfig, WarmStartResult, maximize_overlap,
                        overlap_coeffs, plugin_coeffs, single_qubit_angle, warm_start,
                        warm_start_approx, warm_start_measuring)
from .optimizer import MinimizeResult, OptimizerOptions, minimize
from .vqe import RunConfig, RunSummary, VqeTrace, run_vqe
from .diagnostics import (DiagnosticsResult, cost_concentration, gradient_magnitude,
                          mean_square_gradient)
from .errors import (NonFiniteObjectiveError, ResourceLimitError, UndefinedEstimateError,
                     UnsupportedAnsatzError)
