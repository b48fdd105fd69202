"""treefo: first-order definability analysis for regular tree languages.

Pipeline: a deterministic bottom-up tree automaton is minimized into the
reduced syntactic algebra of its language, represented as a finite clone of
operation tables; the congruence lattice and minimal-set analysis of that
algebra drive a three-valued definability verdict with witnesses.
"""

__version__ = "0.1.0"

from .errors import (
    ClassifyError,
    CloneSizeError,
    ConfigError,
    ContractError,
    InputError,
    StructureError,
    TreefoError,
)
from .trees import (
    RankedAlphabet,
    Tree,
    enumerate_trees,
    flat,
    height,
    is_linear,
    parse_tree,
    sing,
    substitute,
)
from .automata import Dfta
from .clone import (
    CloneAlgebra,
    TableAlgebra,
    build_syntactic,
    from_tables,
    is_aperiodic,
    sg,
)
from .congruence import (
    CongruenceLattice,
    Partition,
    congruence_lattice,
    is_simple,
    principal_congruence,
    quotient,
)
from .tct import (
    classify_minimal,
    idempotents,
    is_minimal_algebra,
    localise,
    min_sets,
    unary_polynomials,
)
from .definability import (
    DEFINABLE,
    NOT_DEFINABLE,
    UNKNOWN,
    check_necessary,
    check_sufficient,
    divisor_index,
    replay_witness,
    verdict,
)
from .starfree import compare_language, eval_bounded, parse_expression

__all__ = [
    "ClassifyError",
    "CloneAlgebra",
    "CloneSizeError",
    "ConfigError",
    "CongruenceLattice",
    "ContractError",
    "DEFINABLE",
    "Dfta",
    "InputError",
    "NOT_DEFINABLE",
    "Partition",
    "RankedAlphabet",
    "StructureError",
    "TableAlgebra",
    "Tree",
    "TreefoError",
    "UNKNOWN",
    "build_syntactic",
    "check_necessary",
    "check_sufficient",
    "classify_minimal",
    "compare_language",
    "congruence_lattice",
    "divisor_index",
    "enumerate_trees",
    "eval_bounded",
    "flat",
    "from_tables",
    "height",
    "idempotents",
    "is_aperiodic",
    "is_linear",
    "is_minimal_algebra",
    "is_simple",
    "localise",
    "min_sets",
    "parse_expression",
    "parse_tree",
    "principal_congruence",
    "quotient",
    "replay_witness",
    "sg",
    "sing",
    "substitute",
    "unary_polynomials",
    "verdict",
]
