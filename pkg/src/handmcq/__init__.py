"""Deterministic generation and scoring of multiple-choice spatial-reasoning
questions about 3D hand poses.

The pipeline: normalize 21-joint hand annotations, compute geometric
descriptors (bending angles, inter-joint distances, signed axis offsets),
discretize them into linguistic categories, render templated statements,
and assemble seeded multiple-choice questions. The evaluation side scores
model answers with per-kind accuracy, ordinal MAE, confusion matrices,
random baselines, and calibration analysis.
"""
from ._version import __version__
from .dataset import (
    GenerationConfig,
    GenerationSummary,
    Mcq,
    PoseRecord,
    generate_dataset,
    generate_image_mcqs,
    iter_dataset,
    label_stats,
    load_manifest,
)
from .discretize import (
    Category,
    ThresholdConfig,
    categorize_angle,
    categorize_distance,
    categorize_offset,
)
from .evaluate import (
    MetricsReport,
    PredictionRecord,
    load_predictions,
    ordinal_index,
    parse_answer,
    random_baseline,
    reliability,
    score,
)
from .geometry import (
    NormalizedPose,
    RawPose,
    joint_angle,
    joint_distance,
    normalize_pose,
    relative_offset,
)
from .oracle import ValidationReport, answer_mcq, enumerate_all_mcqs, validate_dataset
from .skeleton import (
    DescriptorTarget,
    angle_triplet,
    catalog,
    joint_display_name,
)
from .textgen import OptionSet, Statement, build_options, render_statement

__all__ = [
    "__version__",
    "GenerationConfig",
    "GenerationSummary",
    "Mcq",
    "PoseRecord",
    "generate_dataset",
    "generate_image_mcqs",
    "iter_dataset",
    "label_stats",
    "load_manifest",
    "Category",
    "ThresholdConfig",
    "categorize_angle",
    "categorize_distance",
    "categorize_offset",
    "MetricsReport",
    "PredictionRecord",
    "load_predictions",
    "ordinal_index",
    "parse_answer",
    "random_baseline",
    "reliability",
    "score",
    "NormalizedPose",
    "RawPose",
    "joint_angle",
    "joint_distance",
    "normalize_pose",
    "relative_offset",
    "ValidationReport",
    "answer_mcq",
    "enumerate_all_mcqs",
    "validate_dataset",
    "DescriptorTarget",
    "angle_triplet",
    "catalog",
    "joint_display_name",
    "OptionSet",
    "Statement",
    "build_options",
    "render_statement",
]
