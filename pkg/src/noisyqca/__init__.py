"""Noisy one-dimensional partitioned quantum cellular automata in the
single-excitation sector, and the reversibility measures built on them."""

from .automaton import (
    AutomatonConfig,
    BlockUnitary,
    NoiseParams,
    Partition,
    RuleParams,
    apply_block_amplitude_damping,
    apply_block_dephasing,
    apply_block_unitary,
    build_block_unitary,
    partition_blocks,
    step_forward,
    step_inverse,
)
from .errors import (
    CapacityError,
    DegenerateParameterError,
    DegenerateProjectionError,
    DomainError,
    InvariantViolation,
)
from .metrics import (
    ContractionReport,
    EvolutionRecord,
    contraction_probe,
    fixed_point_residual,
    irreversibility_time,
    return_probability,
    reversibility_curve,
)
from .sector import (
    SectorState,
    fidelity_with_pure,
    maximally_mixed,
    pure_site_state,
    random_sector_state,
    trace_distance,
)

__version__ = "0.1.0"
