"""Exact and approximate link invariants from braid words.

The package is organized bottom-up:

- braid: braid words, parsing, Markov moves
- garside: left-canonical normal form and the word problem
- laurent: exact Laurent arithmetic on the quarter-exponent lattice
- diagram: planar diagrams, trace and plat closures
- reidemeister: local moves on diagrams
- jones: Kauffman bracket and the Jones polynomial (two exact routes)
- su2q: quantum SU(2) representation theory and colored invariants
- qsim: state-vector simulation and sampled trace estimation
- cli: the `knit` command
"""

from .braid import BraidWord, Permutation, parse_braid, random_braid
from .diagram import LinkDiagram, closure_plat, closure_trace, plat_profile
from .errors import DomainError, KnitError, LimitError, ParseError
from .garside import NormalForm, is_trivial, normal_form, words_equal
from .jones import jones_polynomial, kauffman_bracket, markov_trace_jones
from .laurent import LaurentPoly, evaluate_at_root
from .qsim import (
    StateVector,
    TraceEstimate,
    apply_unitary,
    approx_jones,
    bend_state,
    estimate_markov_trace,
    hadamard_test_sample,
    plan_samples,
)
from .su2q import (
    BraidingOperator,
    ColorLabel,
    ColoredSpace,
    DegenerateColorError,
    braiding_operator_for_plat,
    colored_invariant,
    fusion_range,
    jones_value_from_plat,
    normalize_ambient,
    q_clebsch_gordan,
    q_integer,
    r_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "Permutation",
    "parse_braid",
    "random_braid",
    "LinkDiagram",
    "closure_plat",
    "closure_trace",
    "plat_profile",
    "DomainError",
    "KnitError",
    "LimitError",
    "ParseError",
    "NormalForm",
    "is_trivial",
    "normal_form",
    "words_equal",
    "jones_polynomial",
    "kauffman_bracket",
    "markov_trace_jones",
    "LaurentPoly",
    "evaluate_at_root",
    "StateVector",
    "TraceEstimate",
    "apply_unitary",
    "approx_jones",
    "bend_state",
    "estimate_markov_trace",
    "hadamard_test_sample",
    "plan_samples",
    "BraidingOperator",
    "ColorLabel",
    "ColoredSpace",
    "DegenerateColorError",
    "braiding_operator_for_plat",
    "colored_invariant",
    "fusion_range",
    "jones_value_from_plat",
    "normalize_ambient",
    "q_clebsch_gordan",
    "q_integer",
    "r_matrix",
    "__version__",
]
