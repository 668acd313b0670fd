"""Facet reasoning for propositional abduction.

Exact answers come from an exhaustive oracle; knowledge bases in the
implication, dualHorn, 2-affine and essentially negative fragments are also
handled by polynomial algorithms, and 2-affine / essentially positive ones by
constructive maximum-diversity algorithms.
"""
from .core import (EQUALITY, FALSE, NEG_UNIT, POS_UNIT, TRUE, AbductionInstance, Atom,
                   DivInstance, FacetInstance, Formula, Kind, Relation, Resolved, app, clause,
                   clause_rel, eq, evaluate, imp, restrict, table_rel, unit, xor, xor_rel)
from .diverse import (DiversityWitness, distance, div_affine2, div_ep, div_oracle,
                      max_pair_affine2, max_pair_ep)
from .engines import (Engine, PropagationResult, SatResult, entails, sat, unit_propagate,
                      verify_explanation)
from .errors import (AbductionError, BudgetExceeded, InvalidDefinition, MissingDefinition,
                     NoEquality, NoNegUnit, NotOneValid, NotPos2CNF, NotSubsetOfH, ParseError,
                     PartialAssignment, ScopeError, UnsatStructure, WrongFragment)
from .lattice import (ComplexityVerdict, LanguageProfile, PolyOp, Problem, Verdict,
                      classify, closed_under, profile, verdict)
from .oracle import (NO_EXPLANATION, ExplanationReport, all_explanations, is_facet_oracle,
                     is_relevant_oracle, max_diverse_pair, minimal_explanations, report)
from .polyfacet import (ClusterStructure, Fragment, ImpAnalysis, Preprocessed, build_clusters,
                        isfacet_affine2, isfacet_dualhorn, isfacet_en, isfacet_imp,
                        isfacet_poly, licensed_fragment, preprocess_units, relevance_poly)
from .reduce import (EfppDefinition, abd_to_div, abd_to_isfacet, efpp_substitute,
                     elim_pos_units, neg_unit_to_facet, pos2sat_to_div)
from .syntax import parse_instance, render

__version__ = "0.1.0"
