"""Solvers for paradoxical one-dimensional distance geometry instances.

Three independent paths decide feasibility of the cycle instance:
exact Branch-and-Prune (:mod:`.bp`), the sign-matrix product (:mod:`.mvm`)
and a simulated two-SLM optical processor (:mod:`.optics`).
"""

from .bp import Realization, enumerate_layer, solve_bp
from .instance import (
    AugmentedInstance,
    ParadoxicalInstance,
    augment,
    generate_feasible,
    generate_random,
    parse,
    serialize,
    validate,
)
from .mvm import decode_row, encode_signs, feasible_rows, matrix_element, multiply, reconstruct_solution
from .optics import OpticalConfig, solve_optical, throughput

__all__ = [
    "AugmentedInstance",
    "OpticalConfig",
    "ParadoxicalInstance",
    "Realization",
    "augment",
    "decode_row",
    "encode_signs",
    "enumerate_layer",
    "feasible_rows",
    "generate_feasible",
    "generate_random",
    "matrix_element",
    "multiply",
    "parse",
    "reconstruct_solution",
    "serialize",
    "solve_bp",
    "solve_optical",
    "throughput",
    "validate",
]
