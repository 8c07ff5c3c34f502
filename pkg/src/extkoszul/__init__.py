"""Exact computations in quotients of exterior and square-zero algebras.

Groebner bases, Hilbert series, truncated minimal free resolutions, and
Koszulness verdicts backed by checkable certificates.
"""

__version__ = "0.1.0"

from .fields import QQ, GF, FieldSpec
from .algebra import (CoordinateChange, Element, Mode, RingSpec, basis_monomials, elem_add,
                      elem_mul, merge_sign, scalar_mul, substitute)
from .groebner import (GroebnerBasis, Ideal, QuotientRing, TermOrder, buchberger, colon_by_linear,
                       dim_oracle, ideal_membership, max_gb_degree, normal_form, standard_monomials)
from .series import TruncSeries, froberg_obstruction, hilbert_series, poincare_truncation, series_invert
from .resolution import (BettiTable, GradedFreeModule, GradedMatrix, IncompleteColumn, Resolver,
                         betti_of_k, check_complex, check_minimal, cyclic_presentation,
                         euler_consistency, format_betti_m2, is_linear_through,
                         minimal_free_resolution, residue_field_presentation, t_degree)
from .qforms import (AlternatingMatrix, factor_reducible, is_reducible, matrix_to_qform,
                     qform_to_matrix, rank_alternating, standard_form, symplectic_normal_form)
from .koszul import (CrossValidation, Filtration, FrobergNegative, KoszulVerdict, NonlinearBetti,
                     Prediction, SearchResult, VerdictKind, check_filtration, classify_hypersurface,
                     cross_validate, find_koszul_filtration, koszul_check, verify_filtration)
from .session import SessionError, SessionSpec, format_session, parse_session
