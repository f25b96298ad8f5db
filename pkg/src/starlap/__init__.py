"""Spectral toolkit for the indefinite Kirchhoff Laplacian on a star graph."""

from .errors import (
    DomainError,
    MeshError,
    OracleFailure,
    OracleNonConvergence,
    PoleError,
    ShapeError,
    SpectralIndexError,
    StarlapError,
)
from .graph import (
    EdgeSignature,
    GridFunction,
    SmoothTestFunction,
    VertexTrace,
    apply_J,
    hilbert_inner,
    krein_inner,
    vertex_trace,
)
from .spectrum import (
    SpectralKind,
    SpectralPoint,
    asymptotic_eta,
    eta_root,
    interlacing_check,
    recover_ratio,
    spectrum_A,
    spectrum_B,
)
from .weyl import (
    SpectralParameter,
    WeylSample,
    gamma_0,
    gamma_1,
    gamma_field,
    green_identity_residual,
    weyl_m,
)
from .eigenfunctions import (
    EigenfunctionSpec,
    eigenbasis_A,
    eigenbasis_B,
    krein_gram,
    riesz_condition_report,
)
from .oracle import (
    DiscreteOperator,
    discrete_spectrum,
    discretize_B,
    krein_resolvent_check,
    positivity_check,
    resolvent_A,
)
from .similarity import (
    SimilarityConfig,
    apply_W,
    apply_X,
    apply_Y,
    apply_Ystar,
    form_domain_member,
)

__version__ = "0.1.0"
