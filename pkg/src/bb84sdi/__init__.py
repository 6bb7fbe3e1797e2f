"""Certified key rates for entanglement-based BB84 where only Alice's
measurement device is trusted to act on a qubit.

The certifier consumes two-basis correlators and returns a lower bound on
the one-way key rate against collective attacks; the rest of the package
exists to attack that bound by brute force and to re-derive every
inequality it uses on random instances.
"""

from ._kernel import available_backends, backend_name, use_backend
from .attacks import (
    AttackSample,
    ScanReport,
    SweepRecord,
    counterexample_attack,
    evaluate_model,
    noise_sweep,
    noise_threshold,
    random_attack,
    refine_attack,
    sample_condition_model,
    sample_projective_alice_model,
    soundness_scan,
    white_noise_summary,
)
from .certify import (
    CertifyOptions,
    RateCertificate,
    certified_rate,
    condition_check,
    projective_rate,
    shor_preskill,
    solve_lambda,
)
from .entropy import (
    CqStatePair,
    binary_entropy,
    conditional_entropy,
    devetak_winter,
    phi,
    shannon_conditional,
    von_neumann,
)
from .linalg import ValidationError
from .model import (
    CorrelationSummary,
    EveDecomposition,
    MeasurementModel,
    PovmDecomposition,
    ProbabilityTable,
    eve_states,
    ideal_bb84_model,
    ingest_counts,
    isotropic_model,
    povm_decompose,
    probabilities_from_model,
    summarize,
    w_basis_correlator,
)
from .oracles import (
    ConvexityReport,
    MixtureScenario,
    StateDecomposition,
    convexity_probe,
    fidelity_chain_check,
    lambda_bisection_oracle,
    lemma1_gap,
    lemma2_gap,
    lemma3_gap,
    lemma_scan,
    state_decomposition,
)

__version__ = "0.1.0"
