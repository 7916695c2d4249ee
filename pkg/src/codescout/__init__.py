"""codescout: detect noisy traffic from a known binary linear block code.

Given an observed bit sequence, decide between two hypotheses: the bits are
i.i.d. fair-coin noise, or they are codewords of a known (n, k) binary linear
block code corrupted by a binary symmetric channel.  The optimal test reduces
to thresholding the total Hamming distance from the observed words to their
nearest codewords; everything needed to run and calibrate it exactly — coset
weight profiles, distance pmfs, randomized thresholds, sequential boundaries,
sample-size predictions, and Monte Carlo validation — lives here.
"""

__version__ = "0.1.0"

from .errors import (
    CodescoutError,
    ConfigError,
    EnumerationLimitError,
    InvariantViolationError,
)
from .gf2 import BitWord, GF2Matrix, gf2_null_space, gf2_rank, gf2_rref
from .codes import (
    LinearCode,
    SyndromeTable,
    build_hamming,
    build_reed_muller,
    build_repetition,
    build_syndrome_table,
    codewords,
    cyclic_code_from_polynomial,
    encode,
    from_generator,
    load_code_config,
    minimum_distance,
    parse_code_spec,
    syndrome,
    weight_distribution,
)
from .coset import (
    CosetWeightProfile,
    export_profile,
    import_profile,
    krawtchouk_table,
    profile_direct,
    profile_dual_transform,
)
from .glrt import (
    BlockPmf,
    NpRule,
    WordPmf,
    block_pmf,
    detection_probability,
    inv_norm_cdf,
    norm_cdf,
    np_rule,
    required_codewords,
    word_pmf_alt,
    word_pmf_null,
)
from .sequential import (
    SprtPlan,
    SprtState,
    expected_sample_sizes,
    run_sprt,
    sprt_plan,
    sprt_step,
)
from .simulate import (
    ChannelModel,
    Hypothesis,
    TrialReport,
    generate_block,
    glrt_statistic,
    leader_weight_histogram,
    run_np_trials,
    run_sprt_trials,
    trial_rng,
)
from .detectors import NeymanPearsonDetector, SequentialDetector

__all__ = [
    "__version__",
    "CodescoutError",
    "ConfigError",
    "EnumerationLimitError",
    "InvariantViolationError",
    "BitWord",
    "GF2Matrix",
    "gf2_null_space",
    "gf2_rank",
    "gf2_rref",
    "LinearCode",
    "SyndromeTable",
    "build_hamming",
    "build_reed_muller",
    "build_repetition",
    "build_syndrome_table",
    "codewords",
    "cyclic_code_from_polynomial",
    "encode",
    "from_generator",
    "load_code_config",
    "minimum_distance",
    "parse_code_spec",
    "syndrome",
    "weight_distribution",
    "CosetWeightProfile",
    "export_profile",
    "import_profile",
    "krawtchouk_table",
    "profile_direct",
    "profile_dual_transform",
    "BlockPmf",
    "NpRule",
    "WordPmf",
    "block_pmf",
    "detection_probability",
    "inv_norm_cdf",
    "norm_cdf",
    "np_rule",
    "required_codewords",
    "word_pmf_alt",
    "word_pmf_null",
    "SprtPlan",
    "SprtState",
    "expected_sample_sizes",
    "run_sprt",
    "sprt_plan",
    "sprt_step",
    "ChannelModel",
    "Hypothesis",
    "TrialReport",
    "generate_block",
    "glrt_statistic",
    "leader_weight_histogram",
    "run_np_trials",
    "run_sprt_trials",
    "trial_rng",
    "NeymanPearsonDetector",
    "SequentialDetector",
]
