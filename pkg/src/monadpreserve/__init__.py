"""Lifting finite algebras through monoidal monads, and checking which
equations survive the lifting."""

from .algebra import (FinAlgebra, LiftedAlgebra, enumerate_algebras, evaluate, interpret, lift, prepare,
                      projection_algebra, satisfies)
from .core import (FinFun, FinSet, MonoidTable, SemiringTable, compose, enumerate_maps, product, validate_monoid,
                   validate_semiring)
from .monads import Monad, builtin_instances, carrier, chi, chi_n, delta_n, parse_selector, psi0, psi_n
from .presentations import (MonoidPresentation, affineness_of_presented, encode_as_theory, parse_presentation,
                            t1_triviality)
from .preserve import CheckReport, alphacom_check, check_preservation, residual_commutes, verify_witness
from .props import (PropVerdict, algebraic_relevance_check, is_affine, n_relevance_check, relevance_check,
                    relevant_and_affine_implies_relevant_test, two_discerning_check)
from .terms import Equation, Signature, classify, discerning_companion, parse_equation, parse_term, parse_theory

__version__ = "0.1.0"
