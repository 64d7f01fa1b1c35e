"""Prediction model, stimulus renderer, and verification-experiment
service for negative afterimage colors."""

from .colors import (
    InducingClass,
    NamedColor,
    Rgb,
    classify_inducing,
    clamp,
    color_name,
    format_color,
    mix,
    opposite,
    parse_color,
    scale,
)
from .experiment import (
    ExperimentStore,
    InvalidTransitionError,
    Placement,
    ScoreCell,
    ScoreTable,
    Session,
    SubjectMetadata,
    Trial,
    TrialChoice,
    TrialOutcome,
    TrialPhase,
    TrialSpec,
    UnknownSessionError,
    UnknownTrialError,
    aggregate_scores,
    build_battery,
)
from .model import (
    AfterimagePrediction,
    BaselineScheme,
    ModelParams,
    ParamProvenance,
    StimulusSpec,
    UnpairedColorError,
    afterimage_inducing_color,
    afterimage_test_color,
    complement,
    complementary_baseline,
    modified_test_color,
    predict,
    select_params,
)
from .reference import evaluate_references, reference_case, reference_cases
from .render import (
    BlurSettings,
    FigurePanels,
    Geometry,
    RasterImage,
    decode_png,
    encode_png,
    gaussian_blur,
    render_afterimage_panel,
    render_figure,
    render_stimulus,
    render_uniform,
)
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "AfterimagePrediction",
    "BaselineScheme",
    "BlurSettings",
    "ExperimentStore",
    "FigurePanels",
    "Geometry",
    "InducingClass",
    "InvalidTransitionError",
    "ModelParams",
    "NamedColor",
    "ParamProvenance",
    "Placement",
    "RasterImage",
    "Rgb",
    "ScoreCell",
    "ScoreTable",
    "Session",
    "StimulusSpec",
    "SubjectMetadata",
    "Trial",
    "TrialChoice",
    "TrialOutcome",
    "TrialPhase",
    "TrialSpec",
    "UnknownSessionError",
    "UnknownTrialError",
    "UnpairedColorError",
    "aggregate_scores",
    "afterimage_inducing_color",
    "afterimage_test_color",
    "build_battery",
    "clamp",
    "classify_inducing",
    "color_name",
    "complement",
    "complementary_baseline",
    "create_app",
    "decode_png",
    "encode_png",
    "evaluate_references",
    "format_color",
    "gaussian_blur",
    "mix",
    "modified_test_color",
    "opposite",
    "parse_color",
    "predict",
    "reference_case",
    "reference_cases",
    "render_afterimage_panel",
    "render_figure",
    "render_stimulus",
    "render_uniform",
    "scale",
    "select_params",
    "__version__",
]
