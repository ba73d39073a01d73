"""Reasoning over DRSs: first-order translation, finite models and CSPs."""
from .csp import CspInstance, compile_csp, load_roles, parse_roles, solve_csp
from .fol import (And, Atom, Disj, Exists, Forall, Implies, MODALITY_ERASED, Neg, predicates,
                  to_fol, translate_open)
from .models import (DEFAULT_SEARCH_BOUND, Entailment, FiniteModel, answer_query, entails,
                     eval_model, load_facts, parse_facts, satisfiable)

__all__ = [
    "And", "Atom", "CspInstance", "DEFAULT_SEARCH_BOUND", "Disj", "Entailment", "Exists",
    "FiniteModel", "Forall", "Implies", "MODALITY_ERASED", "Neg", "answer_query", "compile_csp",
    "entails", "eval_model", "load_facts", "load_roles", "parse_facts", "parse_roles",
    "predicates", "satisfiable", "solve_csp", "to_fol", "translate_open",
]
