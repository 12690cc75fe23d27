"""Cover-modality logic for coalgebras over finite posets."""

from .calculus import (AssemblyError, Countermodel, ProofTree, TerminationError, check_proof,
                       find_invalid, format_proof, l_beta, model_redistribution, prove, r_alpha,
                       redistributions, semantic_leq)
from .functor import (Const, Dual, Exp, Id, Low, Prod, Sum, Up, apply_obj, base_bruteforce,
                      base_inductive, dual, lift_generic, lift_inductive, normalize_dual)
from .logic import Language, Sequent, language
from .model import Coalgebra, Model, enumerate_models, evaluate
from .poset import FinPoset, MonotoneMap, SubPoset, chain, discrete
from .relation import MonotoneRel, compose, converse
from .simulation import (distinguishing_formula, formula_pool, greatest_simulation,
                         is_simulation, modally_stronger_upto)

__all__ = [
    "AssemblyError", "Countermodel", "ProofTree", "TerminationError", "check_proof",
    "find_invalid", "format_proof", "l_beta", "model_redistribution", "prove", "r_alpha",
    "redistributions", "semantic_leq",
    "Const", "Dual", "Exp", "Id", "Low", "Prod", "Sum", "Up", "apply_obj", "base_bruteforce",
    "base_inductive", "dual", "lift_generic", "lift_inductive", "normalize_dual",
    "Language", "Sequent", "language",
    "Coalgebra", "Model", "enumerate_models", "evaluate",
    "FinPoset", "MonotoneMap", "SubPoset", "chain", "discrete",
    "MonotoneRel", "compose", "converse",
    "distinguishing_formula", "formula_pool", "greatest_simulation", "is_simulation",
    "modally_stronger_upto",
]
