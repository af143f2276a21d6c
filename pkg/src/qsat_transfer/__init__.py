"""Product-state solvers for Quantum k-SAT on k-uniform hypergraphs."""

from .blowup import Blowup, decouple, delta_lift, project_pi
from .filtration import Step, TransferFiltration, greedy_filtration, make_filtration, validate
from .hypergraph import (
    SDR,
    HallCertificate,
    Hypergraph,
    construct_sdr_deg2,
    find_sdr,
    structural_predicates,
)
from .instance import Constraint, QsatInstance, residual, sample_generic
from .oracle import dense_hamiltonian, exact_satisfiable, null_space_check
from .solver_bounded import Reject, algorithm_a, gen_pseudo_line_instance
from .solver_param import SolveReport, solve
from .transfer import MultiPoly, WPoly, build_qualifiers, build_transfer_functions

__all__ = [
    "Blowup", "decouple", "delta_lift", "project_pi",
    "Step", "TransferFiltration", "greedy_filtration", "make_filtration", "validate",
    "SDR", "HallCertificate", "Hypergraph", "construct_sdr_deg2", "find_sdr", "structural_predicates",
    "Constraint", "QsatInstance", "residual", "sample_generic",
    "dense_hamiltonian", "exact_satisfiable", "null_space_check",
    "Reject", "algorithm_a", "gen_pseudo_line_instance",
    "SolveReport", "solve",
    "MultiPoly", "WPoly", "build_qualifiers", "build_transfer_functions",
]
