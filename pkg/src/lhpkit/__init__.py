"""Bias-tailored lifted-product quantum LDPC codes with single-shot decoding."""

from .gf2 import BinaryMatrix
from .protograph import Protograph, RingElement, lam, parse_protograph
from .products import (
    CssCode,
    bias_tailor_swap,
    compute_logicals,
    estimate_distance,
    hgp,
    lifted_product,
)
from .chain4d import (
    ChainComplex4D,
    FourSeeds,
    build_complex,
    build_preset,
    expand_seeds,
    hadamard_rotate,
    to_css,
    validate_chain,
)
from .decoder import BpConfig, BpOsdDecoder, DecodeResult, bp_decode, bp_osd, osd_postprocess
from .noise import ChannelSpec, PauliError, channel_probs, sample_measurement_error, sample_pauli_error
from .montecarlo import (
    CodeDecoders,
    ExperimentPoint,
    RunStats,
    TrialOutcome,
    run_experiment,
    run_trial,
)

__version__ = "0.1.0"
