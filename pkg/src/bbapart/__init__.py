"""Apartness and bisimilarity on finite labelled transition systems, a
model checker for Hennessy-Milner logic with until, and synthesis of
distinguishing positive formulas."""

from .apartness import (
    Derivation,
    DirectedPairRelation,
    InternalInvariantError,
    PairNotHeldError,
    branching_apartness,
    directed_branching_apartness,
    directed_branching_apartness_nonreflexive,
    directed_strong_apartness,
    extract_derivation,
    strong_apartness,
)
from .bisim import (
    BisimRelation,
    bisimilarity,
    branching_bisimilarity,
    directed_branching_bisimilarity,
    directed_strong_bisimilarity,
    strong_bisimilarity,
)
from .distinguish import (
    InvalidDerivationError,
    NotDistinguishingError,
    VerifyResult,
    formula_from_derivation,
    pformula_from_hmlu,
    simplify,
    verify_distinguishes,
)
from .generate import GenParams, random_lts
from .logic import (
    And,
    Diamond,
    Formula,
    Neg,
    PAnd,
    PBot,
    PDiamond,
    PFormula,
    POr,
    PTop,
    SatEvaluator,
    Top,
    BOT,
    TOP,
    diamond,
    diamond_witness,
    enumerate_pformulas,
    f_or,
    format_formula,
    format_pformula,
    is_good,
    is_negative,
    is_positive,
    p_embed,
    p_satisfies,
    parse_formula,
    sat_set,
    satisfies,
)
from .lts import (
    TAU,
    ActionLabel,
    AutParseError,
    Lts,
    NonReflexiveLtsError,
    parse_aut,
    reflexive_closure,
    render_aut,
    tau_closure,
)
from .validate import (
    NotApartError,
    ValidationReport,
    check_pair,
    cross_validate,
    distinguish_pair,
    run_campaign,
)

__version__ = "0.1.0"
