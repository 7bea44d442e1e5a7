"""Manifest ingestion, per-image target sampling, MCQ assembly, and
dataset serialization.

File formats (all JSONL, one record per line):

Manifest record:
    {"image_id": str, "image_path": str?, "joints": [[x,y,z] * 21],
     "mesh_vertices": [[x,y,z] * M]?, "axis_flips": [sx,sy,sz]?}

Dataset: a header line {"__header__": {...generation config, tool version}}
followed by one MCQ per line:
    {"question_id": str, "image_id": str, "kind": str,
     "target": {"subject": int, "object": int|null}, "prompt": str,
     "options": [str], "correct_index": int, "provenance": {...}}

Generation is deterministic for a fixed (manifest, config): every random
choice is seeded by a stable hash of (seed, image_id, ...), so inserting or
removing one image never perturbs another image's questions, and the output
bytes are independent of the parallelism degree.
"""
from __future__ import annotations

import hashlib
import json
import multiprocessing
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ._version import __version__
from .discretize import (
    DEFAULT_THRESHOLDS,
    LABELS_BY_KIND,
    Category,
    ThresholdConfig,
    categorize,
)
from .errors import DegenerateBone, DegeneratePose, DuplicateImageId, ParseError
from .geometry import NormalizedPose, RawPose, descriptor_value, normalize_pose
from .skeleton import KINDS, DescriptorTarget, catalog, target_from_fields
from .textgen import build_options, decode_statement

PROMPT_QUESTION = "Which of the following statements about the hand in the image is correct?"
OPTION_LETTERS = "abcd"

_SEP = "\x1f"


def _stable_u64(*parts) -> int:
    """Platform-stable 64-bit seed from heterogeneous parts."""
    payload = _SEP.join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "big")


def question_id(image_id: str, target: DescriptorTarget) -> str:
    digest = hashlib.blake2b(
        f"{image_id}{_SEP}{target.key()}".encode(), digest_size=8
    )
    return digest.hexdigest()


@dataclass(frozen=True)
class PoseRecord:
    """One manifest entry: an image id and its raw pose annotation."""

    image_id: str
    raw_pose: RawPose
    image_path: str | None = None
    axis_flips: tuple[int, int, int] | None = None


@dataclass(frozen=True)
class GenerationConfig:
    """Knobs controlling dataset generation.

    per_type_samples is capped per kind by that kind's catalog size, so 23
    enumerates every pair target and still yields only 15 angle questions.
    resample_on_aligned keeps the per-image budget by drawing a replacement
    target whenever one is skipped (aligned relative position or degenerate
    geometry); disabled, only the first per_type_samples draws are used.
    """

    seed: int = 0
    per_type_samples: int = 5
    thresholds: ThresholdConfig = DEFAULT_THRESHOLDS
    axis_flips: tuple[int, int, int] = (1, 1, 1)
    resample_on_aligned: bool = True

    def __post_init__(self):
        max_pool = max(len(catalog(k)) for k in KINDS)
        if not 1 <= self.per_type_samples <= max_pool:
            raise ValueError(f"per_type_samples must be in [1, {max_pool}]")
        object.__setattr__(self, "axis_flips", tuple(int(s) for s in self.axis_flips))
        if any(s not in (-1, 1) for s in self.axis_flips):
            raise ValueError("axis_flips entries must be -1 or 1")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "per_type_samples": self.per_type_samples,
            "thresholds": self.thresholds.to_dict(),
            "axis_flips": list(self.axis_flips),
            "resample_on_aligned": self.resample_on_aligned,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GenerationConfig":
        return cls(
            seed=int(d.get("seed", 0)),
            per_type_samples=int(d.get("per_type_samples", 5)),
            thresholds=ThresholdConfig.from_dict(d.get("thresholds", {})),
            axis_flips=tuple(d.get("axis_flips", (1, 1, 1))),
            resample_on_aligned=bool(d.get("resample_on_aligned", True)),
        )


@dataclass(frozen=True)
class Mcq:
    question_id: str
    image_id: str
    kind: str
    target: DescriptorTarget
    prompt: str
    options: tuple[str, ...]
    correct_index: int
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "image_id": self.image_id,
            "kind": self.kind,
            "target": {"subject": self.target.subject, "object": self.target.object},
            "prompt": self.prompt,
            "options": list(self.options),
            "correct_index": self.correct_index,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Mcq":
        target = target_from_fields(
            d["kind"], d["target"]["subject"], d["target"].get("object")
        )
        options = tuple(d["options"])
        correct_index = int(d["correct_index"])
        if not 0 <= correct_index < len(options):
            raise ValueError(f"correct_index {correct_index} out of range")
        return cls(
            question_id=d["question_id"],
            image_id=d["image_id"],
            kind=d["kind"],
            target=target,
            prompt=d["prompt"],
            options=options,
            correct_index=correct_index,
            provenance=d.get("provenance", {}),
        )


@dataclass(frozen=True)
class SkipNote:
    """Why a target (or a whole kind's budget) produced no question."""

    image_id: str
    kind: str
    target_key: str | None
    reason: str  # aligned | degenerate_bone | degenerate_pose | pool_exhausted
    detail: str = ""


@dataclass
class GenerationSummary:
    images: int = 0
    mcqs_by_kind: dict = field(default_factory=dict)
    skips: dict = field(default_factory=dict)

    @property
    def total_mcqs(self) -> int:
        return sum(self.mcqs_by_kind.values())

    def to_dict(self) -> dict:
        return {
            "images": self.images,
            "mcqs": self.total_mcqs,
            "mcqs_by_kind": dict(self.mcqs_by_kind),
            "skips": dict(self.skips),
        }


def _parse_manifest_line(line_no: int, line: str) -> PoseRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise ParseError(line_no, f"invalid JSON: {e}") from None
    if not isinstance(obj, dict):
        raise ParseError(line_no, "record must be a JSON object")
    image_id = obj.get("image_id")
    if not isinstance(image_id, str) or not image_id:
        raise ParseError(line_no, "missing or empty image_id")
    joints = obj.get("joints")
    if not isinstance(joints, list) or len(joints) != 21:
        raise ParseError(line_no, f"expected 21 joints, got {len(joints) if isinstance(joints, list) else type(joints).__name__}")
    mesh = obj.get("mesh_vertices")
    flips = obj.get("axis_flips")
    if flips is not None:
        if not (isinstance(flips, list) and len(flips) == 3 and all(s in (-1, 1) for s in flips)):
            raise ParseError(line_no, "axis_flips must be three values from {-1, 1}")
        flips = tuple(flips)
    try:
        raw = RawPose(joints=np.asarray(joints, dtype=np.float64),
                      mesh_vertices=None if mesh is None else np.asarray(mesh, dtype=np.float64))
    except (ValueError, TypeError) as e:
        raise ParseError(line_no, str(e)) from None
    return PoseRecord(
        image_id=image_id,
        raw_pose=raw,
        image_path=obj.get("image_path"),
        axis_flips=flips,
    )


def load_manifest(path) -> Iterator[PoseRecord]:
    """Stream pose records from a manifest file, validating as it goes.

    Raises ParseError on a malformed line and DuplicateImageId when two
    records share an id. Blank lines are ignored.
    """
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            record = _parse_manifest_line(line_no, line)
            if record.image_id in seen:
                raise DuplicateImageId(f"image_id {record.image_id!r} (line {line_no})")
            seen.add(record.image_id)
            yield record


def normalized_pose_for(record: PoseRecord, cfg: GenerationConfig) -> NormalizedPose:
    """Apply axis flips (record-level overrides config-level) and normalize."""
    flips = record.axis_flips if record.axis_flips is not None else cfg.axis_flips
    raw = record.raw_pose
    if flips != (1, 1, 1):
        signs = np.asarray(flips, dtype=np.float64)
        raw = RawPose(
            joints=raw.joints * signs,
            hand_side=raw.hand_side,
            mesh_vertices=None if raw.mesh_vertices is None else raw.mesh_vertices * signs,
        )
    return normalize_pose(raw)


def assemble_mcq(
    image_id: str,
    target: DescriptorTarget,
    value: float,
    category_label: str,
    cfg: GenerationConfig,
    norm_mode: str,
    threshold_config_id: str,
) -> Mcq:
    """Build one MCQ with a deterministically shuffled option set."""
    rng = random.Random(_stable_u64(cfg.seed, image_id, "options", target.key()))
    option_set = build_options(target, Category(target.kind, category_label), rng)
    lines = [PROMPT_QUESTION]
    for i, text in enumerate(option_set.options):
        lines.append(f"({OPTION_LETTERS[i]}) {text}")
    return Mcq(
        question_id=question_id(image_id, target),
        image_id=image_id,
        kind=target.kind,
        target=target,
        prompt="\n".join(lines),
        options=option_set.options,
        correct_index=option_set.correct_index,
        provenance={
            "continuous_value": value,
            "category": category_label,
            "threshold_config_id": threshold_config_id,
            "seed": cfg.seed,
            "permutation": list(option_set.permutation),
            "norm_mode": norm_mode,
        },
    )


def generate_image_mcqs(
    record: PoseRecord, cfg: GenerationConfig
) -> tuple[list[Mcq], list[SkipNote]]:
    """All MCQs for one image: per kind, a seeded uniform sample of distinct
    catalog targets.

    Aligned relative-position truths and degenerate targets never become
    questions; with resample_on_aligned they are replaced by further draws
    until the budget is met or the kind's catalog is exhausted (which adds a
    pool_exhausted note). A degenerate pose skips the whole image, one note
    per kind, without raising.
    """
    mcqs: list[Mcq] = []
    skips: list[SkipNote] = []
    try:
        pose = normalized_pose_for(record, cfg)
    except DegeneratePose as e:
        for kind in KINDS:
            skips.append(SkipNote(record.image_id, kind, None, "degenerate_pose", str(e)))
        return mcqs, skips
    threshold_id = cfg.thresholds.config_id()
    for kind in KINDS:
        pool = list(catalog(kind))
        budget = min(cfg.per_type_samples, len(pool))
        rng = random.Random(_stable_u64(cfg.seed, record.image_id, "sample", kind))
        rng.shuffle(pool)
        if not cfg.resample_on_aligned:
            pool = pool[:budget]
        emitted = 0
        for target in pool:
            if emitted == budget:
                break
            try:
                value = descriptor_value(pose, target)
            except DegenerateBone as e:
                skips.append(SkipNote(record.image_id, kind, target.key(), "degenerate_bone", str(e)))
                continue
            category = categorize(kind, value, cfg.thresholds)
            if category.is_aligned:
                skips.append(SkipNote(record.image_id, kind, target.key(), "aligned"))
                continue
            mcqs.append(
                assemble_mcq(record.image_id, target, value, category.label,
                             cfg, pose.mode, threshold_id)
            )
            emitted += 1
        if cfg.resample_on_aligned and emitted < budget:
            skips.append(
                SkipNote(record.image_id, kind, None, "pool_exhausted",
                         f"emitted {emitted} of {budget}")
            )
    return mcqs, skips


def _dump_line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


_WORKER_CFG: GenerationConfig | None = None


def _init_worker(cfg: GenerationConfig) -> None:
    global _WORKER_CFG
    _WORKER_CFG = cfg


def _generate_lines(record: PoseRecord) -> tuple[list[str], list[str], list[str]]:
    """Worker body: output lines plus the kinds emitted and skip reasons."""
    mcqs, skips = generate_image_mcqs(record, _WORKER_CFG)
    lines = [_dump_line(m.to_dict()) for m in mcqs]
    return lines, [m.kind for m in mcqs], [s.reason for s in skips]


def dataset_header(cfg: GenerationConfig) -> dict:
    return {
        "__header__": {
            "tool": "handmcq",
            "version": __version__,
            "config": cfg.to_dict(),
            "threshold_config_id": cfg.thresholds.config_id(),
        }
    }


def generate_dataset(
    manifest_path, cfg: GenerationConfig, out_path, jobs: int = 1
) -> GenerationSummary:
    """Stream a full dataset to out_path; returns reconciling counts.

    Output bytes depend only on (manifest, cfg): records appear in manifest
    order, MCQs within an image ordered by kind then sample index,
    regardless of the parallelism degree.
    """
    summary = GenerationSummary(mcqs_by_kind={k: 0 for k in KINDS})
    skip_counts: Counter = Counter()
    jobs = max(1, int(jobs))
    with open(out_path, "w", encoding="utf-8", newline="\n") as out:
        out.write(_dump_line(dataset_header(cfg)) + "\n")

        def consume(result):
            lines, kinds, skip_reasons = result
            for line in lines:
                out.write(line + "\n")
            for kind in kinds:
                summary.mcqs_by_kind[kind] += 1
            skip_counts.update(skip_reasons)
            summary.images += 1

        if jobs == 1:
            _init_worker(cfg)
            for record in load_manifest(manifest_path):
                consume(_generate_lines(record))
        else:
            with multiprocessing.Pool(jobs, initializer=_init_worker, initargs=(cfg,)) as pool:
                for result in pool.imap(
                    _generate_lines, load_manifest(manifest_path), chunksize=16
                ):
                    consume(result)
    summary.skips = dict(skip_counts)
    return summary


def read_header(path) -> dict | None:
    """The dataset's header payload, or None when the first line is not one."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip()
    if not first:
        return None
    try:
        obj = json.loads(first)
    except json.JSONDecodeError:
        return None
    if isinstance(obj, dict) and "__header__" in obj:
        return obj["__header__"]
    return None


def iter_dataset(path) -> Iterator[Mcq]:
    """Stream MCQs from a dataset file, skipping the header line."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(line_no, f"invalid JSON: {e}") from None
            if isinstance(obj, dict) and "__header__" in obj:
                continue
            try:
                yield Mcq.from_dict(obj)
            except (KeyError, ValueError, TypeError) as e:
                raise ParseError(line_no, f"bad MCQ record: {e}") from None


def label_stats(dataset_path) -> dict[str, dict[str, int]]:
    """Ground-truth category counts per kind, zero-filled over every
    non-aligned label, in value order."""
    stats: dict[str, Counter] = {k: Counter() for k in KINDS}
    for mcq in iter_dataset(dataset_path):
        label = mcq.provenance.get("category")
        if label is None:
            label = decode_statement(mcq.target, mcq.options[mcq.correct_index]).label
        stats[mcq.kind][label] += 1
    out: dict[str, dict[str, int]] = {}
    for kind in KINDS:
        out[kind] = {
            label: stats[kind].get(label, 0)
            for label in LABELS_BY_KIND[kind]
            if label != "aligned"
        }
    return out
