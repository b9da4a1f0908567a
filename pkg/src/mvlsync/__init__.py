"""Synchronization analysis and pinning control of coupled k-valued logical networks."""

from .dsl import network_source, parse_expr, parse_network
from .dynamics import (AttractorReport, StateSet, attractor_set_of, attractors,
                       max_invariant_subset)
from .errors import (DimensionError, ExpressionError, InfeasibleError, MvlError,
                     NotSynchronousError, ParseError, SynthesisError)
from .examples import load_example
from .logic import KValue, eval_expr, logical_form, operator_matrix, structure_matrix
from .network import (AugmentedSystem, CompositeState, CoupledAlgebraic, Network, assemble,
                      augmented_from_network, build_augmented, decode_state, encode_scalars,
                      encode_state, node_structure_from_L, simulate)
from .pinning import (PinningPlan, attractors_to_perturb, perturb_transition, solve_feedback,
                      synthesize_pinning, validate_assignment, verify_plan)
from .stp import LogicMatrix, cheng_product, khatri_rao, kronecker, logic_compose
from .sync import (Basin, SyncSpec, SyncStateSet, check_global_sync, check_local_sync,
                   global_sast, masb, sast, sync_cardinality, sync_state_set)

__version__ = "0.1.0"
