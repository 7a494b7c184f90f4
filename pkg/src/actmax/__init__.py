"""Activity-benefit maximization on social graphs under lattice marketing strategies."""

from .graph import (
    GraphAggregates,
    SocialGraph,
    build_graph,
    compute_aggregates,
    load_graph,
    write_graph,
)
from .strategy import (
    ActivationCurve,
    LatticeSpec,
    StrategyFunction,
    StrategyVector,
    from_steps,
    h_value,
    increment,
    sample_seed_set,
    zero_vector,
)
from .diffusion import (
    ConstructedGraph,
    Realization,
    activity_benefit,
    build_constructed_graph,
    forward_diffuse,
    required_simulations,
    sample_realization,
    simulate_benefit,
)
from .sampling import (
    CollectionObjective,
    RESample,
    RNSample,
    SampleCollection,
    build_re_collection,
    build_rn_collection,
    draw_re_sample,
    draw_rn_sample,
    estimate_benefit,
    estimate_benefit_lower,
    estimate_benefit_upper,
    load_collection,
    marginal_gain,
    save_collection,
)
from .optimizer import (
    ImmParams,
    SandwichResult,
    baseline_im,
    baseline_max_degree,
    baseline_random,
    compute_imm_params,
    imm_lb,
    imm_ub,
    lattice_greedy,
    sampling_lb,
    sampling_ub,
    sandwich,
)
from .oracle import ExactEvaluator, GuardExceededError, TinyInstanceGuard

__version__ = "0.1.0"
