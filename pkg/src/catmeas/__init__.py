"""Finite-dimensional checks of POVMs, probability measures and the Born rule as functors and natural transformations."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .measurable import (  # noqa: F401
    Event,
    FiniteMeasurableSpace,
    MeasurableMap,
    compose,
    discrete_space,
    event,
    identity,
    is_event,
    make_map,
    make_space,
    preimage,
)
from .operators import (  # noqa: F401
    DensityOperator,
    Effect,
    HermitianOperator,
    SpectralDecomposition,
    as_density,
    as_effect,
    identity_op,
    make_hermitian,
    positive_projector,
    spectral,
    trace_pair,
    zero_op,
)
from .functors import (  # noqa: F401
    LawReport,
    Povm,
    ProbabilityMeasure,
    check_functor_laws,
    make_measure,
    make_povm,
    povm_value,
    pushforward_povm,
    pushforward_prob,
)
from .naturality import (  # noqa: F401
    CandidateTransformation,
    EffectFunctional,
    Perturbation,
    apply,
    check_generalized_measure,
    check_square,
    check_xi_well_defined,
    effectwise,
    extract_xi,
    faulted,
)
from .born import (  # noqa: F401
    EffectBasis,
    WitnessResult,
    born_measure,
    born_transformation,
    ic_effect_basis,
    injectivity_witness,
    reconstruct,
)
