"""Two-sorted first-order logic front end: AST, parser, axioms, macros."""

from .syntax import (  # noqa: F401
    B,
    Q,
    Formula,
    LogicError,
    SortMismatch,
    Term,
    Var,
    alpha_equal,
    bvar,
    free_vars,
    lit,
    point,
    qvar,
    substitute,
    substitute_many,
    walk,
)
from .sexpr import ParseError, parse, parse_many, print_formula, print_term  # noqa: F401
from .axioms import (  # noqa: F401
    THEORIES,
    THEORY_OF_TAG,
    UnknownAxiom,
    axiom,
    axiom_names,
    theory_axioms,
)
from .macros import expand_macros  # noqa: F401
