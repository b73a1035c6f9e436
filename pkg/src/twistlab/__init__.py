"""twistlab: a numerical laboratory for twisted group rings and coherent
systems -- twisted convolution, zero-divisor certificates and searches,
Folner-window kernel dimension estimates, and Gram-matrix independence
witnesses for time-frequency translate systems."""

from .cocycles import (
    BicharacterCocycle,
    Cocycle,
    CocycleCheckReport,
    CyclicRootCocycle,
    TimeFrequencyLatticeCocycle,
    TrivialCocycle,
    cocycle_check,
    cocycle_eval,
    cocycle_from_dict,
    pair_from_dict,
    pair_to_dict,
    random_point,
    random_triples,
)
from .dimension import (
    DimensionEstimate,
    RankNullityReport,
    dimension_series,
    orthonormalize,
    rank_nullity_check,
    vn_dim_estimate,
)
from .exactphase import PhaseSum
from .folner import (
    FolnerSequence,
    WindowSpec,
    folner_ratio_diagnostic,
    folner_set,
    interior,
)
from .gabor import (
    CERTIFIED_INDEPENDENT,
    DEFAULT_GRID,
    INCONCLUSIVE,
    GramResult,
    OffGridShiftError,
    SampleGrid,
    SampledSignal,
    TFPoint,
    UnitGaussian,
    ambiguity_gaussian,
    gram_matrix,
    independence_witness,
    inner,
    lattice_points,
    stft,
    tf_cocycle,
    tf_translate,
)
from .groups import (
    GroupDescriptor,
    GroupMismatchError,
    GroupPoint,
    compose,
    cyclic_product,
    free_abelian,
    heisenberg3,
    inverse,
)
from .ring import RingElement, ToleranceConfig, add, convolve, is_zero, power, scale
from .zerodivisor import (
    DegreeMap,
    EmptyInteriorError,
    InfiniteOrderError,
    KernelReport,
    LeadingStepReport,
    TruncatedOperator,
    ZeroDivisorSearch,
    build_truncated_operator,
    commutator_phase,
    degree_nonneg,
    element_order,
    homogeneous_decompose,
    kernel_search,
    search_zero_divisor,
    torsion_zero_divisor,
    verify_leading_step,
)

__version__ = "0.1.0"
