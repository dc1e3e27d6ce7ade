"""A 3D continuous emotion representation unifying categorical emotions,
compound emotions, facial action units, and arousal-valence coordinates,
together with its pseudo-labeling pipeline, supervision losses, number
encoder, and evaluation metrics.
"""

from c2a2._kernels import backend_name
from c2a2.aus import (
    AU_CATALOGUE,
    AU_TABLE,
    EPSILON,
    RELEVANT_AUS,
    category_to_aus,
    make_au_target,
    restrict_activation,
)
from c2a2.categories import (
    BasicEmotion,
    Category,
    CompoundEmotion,
    Space,
    display_name,
    is_representable,
    parse_category,
)
from c2a2.encoder import (
    MlpParams,
    encode_emotion,
    encoder_backward,
    fuse,
    init_params,
    load_params,
    save_params,
    train_toy_regression,
)
from c2a2.geometry import (
    AVPoint,
    AxisFrame,
    EmotionPoint,
    PolarCondition,
    SampleMode,
    calibrate_axes,
    circle_scan,
    compound_direction,
    embed_av,
    frame_from_json,
    frame_to_json,
    load_frame,
    nearest_emotion,
    polar_to_av,
    project_to_av,
    sample_conditions,
    save_frame,
)
from c2a2.losses import (
    au_kl_loss,
    au_kl_loss_batch,
    av_loss,
    av_loss_batch,
    compose_z_label,
)
from c2a2.metrics import (
    FeatureStats,
    SyntheticOracle,
    ere,
    fed,
    fit_gaussian,
    frechet_distance,
    smoothness,
)
from c2a2.regions import av_region_label, c2a2_region_label

__version__ = "0.1.0"

__all__ = [
    "AU_CATALOGUE",
    "AU_TABLE",
    "AVPoint",
    "AxisFrame",
    "BasicEmotion",
    "Category",
    "CompoundEmotion",
    "EPSILON",
    "EmotionPoint",
    "FeatureStats",
    "MlpParams",
    "PolarCondition",
    "RELEVANT_AUS",
    "SampleMode",
    "Space",
    "SyntheticOracle",
    "au_kl_loss",
    "au_kl_loss_batch",
    "av_loss",
    "av_loss_batch",
    "av_region_label",
    "backend_name",
    "c2a2_region_label",
    "calibrate_axes",
    "category_to_aus",
    "circle_scan",
    "compose_z_label",
    "compound_direction",
    "display_name",
    "embed_av",
    "encode_emotion",
    "encoder_backward",
    "ere",
    "fed",
    "fit_gaussian",
    "frame_from_json",
    "frame_to_json",
    "frechet_distance",
    "fuse",
    "init_params",
    "is_representable",
    "load_frame",
    "load_params",
    "make_au_target",
    "nearest_emotion",
    "parse_category",
    "polar_to_av",
    "project_to_av",
    "restrict_activation",
    "sample_conditions",
    "save_frame",
    "save_params",
    "smoothness",
    "train_toy_regression",
]
