"""Workbench for automata and transducers over lazily evaluated infinite words."""

from .words import (
    Alphabet,
    ConstantWord,
    FiniteWord,
    GeneratorWord,
    InfiniteWord,
    LassoWord,
    PAD,
    block_mirror,
    canonical_lasso,
    convolve,
    convolve_lassos,
    duplicate,
    lasso,
    letter_at,
    pi_word,
    shift,
    word,
)
from .advice import (
    AdviceLanguage,
    BuchiAutomaton,
    Dfa,
    buchi_lasso_accepts,
    dfa_boolean,
    member_nonterminating,
    member_omega,
    member_terminating,
    pref_advice_automaton,
    project_track,
)
from .mealy import (
    MealyMachine,
    compose_mealy,
    delay_mealy,
    extract_mealy_from_pref_dfa,
    mealy_image_lasso,
    pref_graph_dfa,
    run_mealy,
)
from .transducers import (
    ENDMARKER,
    LEFT,
    RIGHT,
    LookbehindTransducer,
    OneWayTransducer,
    RunOutcome,
    TwoWayTransducer,
    analyze_on_constant,
    compose_1wft,
    mirror_blocks_2wft,
    mu_transducers,
    remove_endmarker,
    run_1wft,
    run_2wft,
    run_2wft_b,
    visit_bound_check,
    writer_2wft,
)
from .pi_transforms import (
    direction_partition,
    normalize_directions_on_pi,
    one_way_simulation_on_pi,
    pi_k_expander_1wft,
)
from .sst import (
    Reg,
    SimpleSst,
    Sst,
    Substitution,
    compile_sst_to_2wftb,
    compose_substitutions,
    eliminate_lookbehind_lasso,
    run_sst,
    simplify_to_simple_sst,
    validate_copyless,
)
from .ltl import (
    Atom,
    Formula,
    Globally,
    Next,
    Not,
    Top,
    Until,
    check_finite_prefix_theorem,
    eliminate_g_subformulas,
    eval_lasso,
    finite_prefix_eval,
    nnf,
    parse_formula,
)
from .analysis import (
    ComplexityProfile,
    Diverges,
    Equal,
    Inconclusive,
    check_subword_bound,
    padding_check,
    prefix_equiv,
    subword_complexity,
)

__version__ = "0.1.0"
