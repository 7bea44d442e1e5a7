"""Ground-truth answerer and end-to-end dataset auditor.

The oracle never trusts stored continuous values or categories: it
recomputes every answer from the raw joints through normalization,
descriptor math, and categorization, then matches the resulting sentence
against the question's options. This catches serialization drift and
threshold-config mismatches, not just categorization bugs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import (
    GenerationConfig,
    Mcq,
    PoseRecord,
    SkipNote,
    assemble_mcq,
    iter_dataset,
    load_manifest,
    normalized_pose_for,
    read_header,
)
from .discretize import DEFAULT_THRESHOLDS, ThresholdConfig, categorize
from .errors import (
    AlignedTruth,
    DegenerateBone,
    DegeneratePose,
    MissingPose,
    NoMatchingOption,
)
from .geometry import NormalizedPose, descriptor_value
from .skeleton import KINDS, catalog
from .textgen import decode_statement, render_statement


def answer_mcq(
    pose: NormalizedPose, mcq: Mcq, thresholds: ThresholdConfig = DEFAULT_THRESHOLDS
) -> int:
    """Answer a question directly from the joints.

    Recomputes the continuous value, categorizes it, and returns the index
    of the option stating that category. Raises AlignedTruth when a
    relative-position truth falls inside the aligned band, NoMatchingOption
    when no option states the recomputed category (a corrupted option set),
    and DegenerateBone when the geometry is unmeasurable.
    """
    value = descriptor_value(pose, mcq.target)
    category = categorize(mcq.kind, value, thresholds)
    if category.is_aligned:
        raise AlignedTruth(f"{mcq.question_id}: truth is aligned")
    truth_text = render_statement(mcq.target, category).text
    for i, option in enumerate(mcq.options):
        if option == truth_text:
            return i
    raise NoMatchingOption(f"{mcq.question_id}: no option states {category.label!r}")


def enumerate_all_mcqs(
    record: PoseRecord, cfg: GenerationConfig
) -> tuple[list[Mcq], list[SkipNote]]:
    """One MCQ per catalog target, in catalog order; at most 107 per pose.

    Aligned relative-position truths and degenerate targets are skipped
    with notes, so len(mcqs) + len(skips) always covers the full catalog.
    """
    mcqs: list[Mcq] = []
    skips: list[SkipNote] = []
    try:
        pose = normalized_pose_for(record, cfg)
    except DegeneratePose as e:
        for kind in KINDS:
            for target in catalog(kind):
                skips.append(SkipNote(record.image_id, kind, target.key(),
                                      "degenerate_pose", str(e)))
        return mcqs, skips
    threshold_id = cfg.thresholds.config_id()
    for kind in KINDS:
        for target in catalog(kind):
            try:
                value = descriptor_value(pose, target)
            except DegenerateBone as e:
                skips.append(SkipNote(record.image_id, kind, target.key(),
                                      "degenerate_bone", str(e)))
                continue
            category = categorize(kind, value, cfg.thresholds)
            if category.is_aligned:
                skips.append(SkipNote(record.image_id, kind, target.key(), "aligned"))
                continue
            mcqs.append(
                assemble_mcq(record.image_id, target, value, category.label,
                             cfg, pose.mode, threshold_id)
            )
    return mcqs, skips


@dataclass
class ValidationReport:
    total: int = 0
    mismatches: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "mismatch_count": len(self.mismatches),
            "mismatches": self.mismatches,
            "skipped": self.skipped,
        }


def validate_dataset(
    manifest_path, dataset_path, thresholds: ThresholdConfig | None = None
) -> ValidationReport:
    """Replay every question against the manifest poses.

    Thresholds default to the ones recorded in the dataset header; passing
    a different config reveals how many questions the change would flip. A
    question whose stored answer disagrees with the oracle becomes a
    mismatch entry; aligned or degenerate recomputations land in skipped.
    """
    header = read_header(dataset_path) or {}
    cfg = GenerationConfig.from_dict(header.get("config", {}))
    if thresholds is None:
        thresholds = cfg.thresholds
    records = {rec.image_id: rec for rec in load_manifest(manifest_path)}
    report = ValidationReport()
    cached_id: str | None = None
    cached_pose: NormalizedPose | None = None
    cached_err = ""
    for mcq in iter_dataset(dataset_path):
        report.total += 1
        if mcq.image_id != cached_id:
            record = records.get(mcq.image_id)
            if record is None:
                raise MissingPose(f"image_id {mcq.image_id!r} not in manifest")
            try:
                cached_pose = normalized_pose_for(record, cfg)
            except DegeneratePose as e:
                cached_pose = None
                cached_err = str(e)
            cached_id = mcq.image_id
        if cached_pose is None:
            report.skipped.append({"question_id": mcq.question_id,
                                   "reason": "degenerate_pose", "detail": cached_err})
            continue
        expected = decode_statement(mcq.target, mcq.options[mcq.correct_index])
        expected_label = expected.label if expected else None
        try:
            oracle_index = answer_mcq(cached_pose, mcq, thresholds)
        except AlignedTruth:
            report.skipped.append({"question_id": mcq.question_id, "reason": "aligned_truth"})
            continue
        except DegenerateBone as e:
            report.skipped.append({"question_id": mcq.question_id,
                                   "reason": "degenerate_bone", "detail": str(e)})
            continue
        except NoMatchingOption:
            oracle_label = categorize(
                mcq.kind, descriptor_value(cached_pose, mcq.target), thresholds
            ).label
            report.mismatches.append({
                "question_id": mcq.question_id,
                "expected_category": expected_label,
                "oracle_category": oracle_label,
            })
            continue
        if oracle_index != mcq.correct_index:
            oracle = decode_statement(mcq.target, mcq.options[oracle_index])
            report.mismatches.append({
                "question_id": mcq.question_id,
                "expected_category": expected_label,
                "oracle_category": oracle.label if oracle else None,
            })
    return report
