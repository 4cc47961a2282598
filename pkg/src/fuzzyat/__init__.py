"""fuzzyat: quantitative attack tree metrics with fuzzy leaf attributes.

Models are rooted DAGs of AND/OR gates over basic attack steps. Each step
carries an attribute (cost, time, probability, ...) that may be uncertain,
expressed as a fuzzy number; the metric of the whole model is then itself a
fuzzy number, computed under the extension principle.
"""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .attack_tree import AttackTree, Node, DEFAULT_SUITE_CAP, suite_to_lists
from .domains import (
    AttributeDomain,
    apply_crisp,
    apply_fuzzy,
    builtin_domain,
    builtin_domain_names,
)
from .dsl import ModelFile, parse, parse_file, serialize
from .engines import (
    DEFAULT_ORACLE_CAP,
    AnalysisResult,
    buggy_bottom_up_on_dag,
    crisp_metric,
    fuzzy_bottom_up,
    fuzzy_modular,
    fuzzy_naive_suite,
    fuzzy_oracle,
    run_analysis,
    select_engine,
)
from .errors import (
    BlowupError,
    DomainViolationError,
    FuzzyatError,
    InvalidParameterError,
    InvalidSplitError,
    ModelError,
    ParseError,
    RepresentationMismatchError,
    UnknownDomainError,
    UnsupportedOperationError,
)
from .fuzzy import (
    DiscreteFuzzy,
    FuzzyElement,
    PiecewiseLinearFuzzy,
    alpha_cut,
    discretize,
    fuzzy_equal,
    make_crisp,
    make_discrete,
    make_trap,
    make_tri,
    membership_at,
    zadeh_binary_discrete,
    zadeh_binary_pl,
    zadeh_extension,
)

__version__ = "0.1.0"
