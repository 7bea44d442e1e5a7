"""Score model prediction files against a gold dataset.

Reports per-kind accuracy, ordinal mean absolute error for the angle and
distance kinds, gold-by-predicted confusion matrices, a random-guess
baseline, and (for confidence-tagged predictions) reliability bins with
expected calibration error.

Policy for answers that cannot be parsed to an option: they count as
incorrect for accuracy, are excluded from MAE and the confusion matrix,
and are tallied separately.
"""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .dataset import Mcq, _stable_u64, iter_dataset
from .discretize import LABELS_BY_KIND, OPTION_LABELS_BY_KIND, Category
from .errors import (
    DuplicatePrediction,
    MissingConfidence,
    NotOrdinal,
    ParseError,
    UnknownQuestionId,
)
from .skeleton import KINDS
from .textgen import decode_statement

ORDINAL_KINDS = ("angle", "distance")


def ordinal_index(category: Category) -> int:
    """Class index of an angle or distance label, ordered by magnitude.

    Angle: 0..3 from bent completely inward to straight. Distance: 0..2
    from close to spread wide. Relative-position kinds have no ordinal
    metric and raise NotOrdinal.
    """
    if category.kind not in ORDINAL_KINDS:
        raise NotOrdinal(f"{category.kind} has no ordinal index")
    return LABELS_BY_KIND[category.kind].index(category.label)


@dataclass(frozen=True)
class PredictionRecord:
    """One model answer, keyed to a gold question.

    Either a raw answer string (optionally with a scalar confidence for the
    stated answer) or per-option confidences, whose argmax defines the
    prediction after renormalizing to sum to 1.
    """

    question_id: str
    raw_answer: str = ""
    confidence: float | None = None
    option_confidences: tuple[float, ...] | None = None


def load_predictions(path) -> Iterator[PredictionRecord]:
    """Stream prediction records from a JSONL file."""
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(line_no, f"invalid JSON: {e}") from None
            if not isinstance(obj, dict) or "question_id" not in obj:
                raise ParseError(line_no, "missing question_id")
            confidence = obj.get("confidence")
            if confidence is not None:
                confidence = float(confidence)
                if not 0.0 <= confidence <= 1.0:
                    raise ParseError(line_no, f"confidence {confidence} outside [0, 1]")
            per_option = obj.get("option_confidences")
            if per_option is not None:
                per_option = tuple(float(c) for c in per_option)
                if any(c < 0 for c in per_option) or sum(per_option) <= 0:
                    raise ParseError(line_no, "option_confidences must be non-negative with positive sum")
            yield PredictionRecord(
                question_id=obj["question_id"],
                raw_answer=obj.get("raw_answer", ""),
                confidence=confidence,
                option_confidences=per_option,
            )


# Leading option letter: "(b) ...", "b) ...", "b. ...", "B: ...", or just "b".
_LEADING_LETTER = re.compile(r"^\(?([a-dA-D])(?:[\).:,]\s*|\)\s*|\s*$)")
# Parenthesized letter anywhere: "the answer is (c)".
_PAREN_LETTER = re.compile(r"\(([a-dA-D])\)")


def parse_answer(raw: str, options: Iterable[str]) -> int | None:
    """Resolve a raw answer string to an option index, or None if unparseable.

    Tries, in order: a leading option letter (with or without parentheses
    or trailing punctuation), a single unambiguous parenthesized letter
    anywhere in the text, then an exact whitespace-normalized match against
    the full option text.
    """
    options = list(options)
    normalized = " ".join(raw.split())
    if not normalized:
        return None
    m = _LEADING_LETTER.match(normalized)
    if m:
        index = "abcd".index(m.group(1).lower())
        if index < len(options):
            return index
    letters = {c.lower() for c in _PAREN_LETTER.findall(normalized)}
    if len(letters) == 1:
        index = "abcd".index(letters.pop())
        if index < len(options):
            return index
    for i, option in enumerate(options):
        if normalized == " ".join(option.split()):
            return i
    return None


def resolve_prediction(pred: PredictionRecord, options) -> tuple[int | None, float | None]:
    """(option index or None, confidence or None) for one prediction."""
    if pred.option_confidences is not None:
        confs = pred.option_confidences[: len(options)]
        total = sum(confs)
        index = max(range(len(confs)), key=lambda i: confs[i])
        return index, confs[index] / total
    return parse_answer(pred.raw_answer, options), pred.confidence


@dataclass
class KindMetrics:
    count: int = 0
    correct: int = 0
    unparseable: int = 0

    @property
    def accuracy(self) -> float:
        """Percent correct; unparseable answers count as incorrect."""
        if self.count == 0:
            return 0.0
        return 100.0 * self.correct / self.count


@dataclass
class CalibrationBin:
    lo: float
    hi: float
    count: int = 0
    confidence_sum: float = 0.0
    correct: int = 0

    @property
    def mean_confidence(self) -> float:
        return self.confidence_sum / self.count if self.count else 0.0

    @property
    def accuracy(self) -> float:
        return self.correct / self.count if self.count else 0.0

    def to_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "count": self.count,
            "mean_confidence": self.mean_confidence,
            "accuracy": self.accuracy,
        }


@dataclass
class CalibrationTable:
    bins: list[CalibrationBin]
    total: int = 0

    @property
    def ece(self) -> float:
        """Expected calibration error: count-weighted mean |accuracy - confidence|."""
        if self.total == 0:
            return 0.0
        return sum(
            b.count / self.total * abs(b.accuracy - b.mean_confidence)
            for b in self.bins
        )

    def to_dict(self) -> dict:
        return {"bins": [b.to_dict() for b in self.bins],
                "total": self.total, "ece": self.ece}


@dataclass
class MetricsReport:
    per_kind: dict[str, KindMetrics] = field(default_factory=dict)
    angle_mae: float | None = None
    distance_mae: float | None = None
    confusion: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    unparseable: int = 0
    calibration: CalibrationTable | None = None

    def to_dict(self) -> dict:
        return {
            "per_kind": {
                kind: {
                    "count": m.count,
                    "correct": m.correct,
                    "unparseable": m.unparseable,
                    "accuracy": m.accuracy,
                }
                for kind, m in self.per_kind.items()
            },
            "angle_mae": self.angle_mae,
            "distance_mae": self.distance_mae,
            "confusion": self.confusion,
            "unparseable": self.unparseable,
            "calibration": self.calibration.to_dict() if self.calibration else None,
        }

    def format_text(self) -> str:
        lines = [f"{'kind':<10} {'questions':>9} {'accuracy':>9}"]
        for kind in KINDS:
            m = self.per_kind.get(kind)
            if m is None:
                continue
            lines.append(f"{kind:<10} {m.count:>9} {m.accuracy:>8.2f}%")
        for kind, mae in (("angle", self.angle_mae), ("distance", self.distance_mae)):
            lines.append(f"{kind} MAE: {'n/a' if mae is None else f'{mae:.4f}'}")
        lines.append(f"unparseable answers: {self.unparseable:g}")
        if self.calibration is not None:
            lines.append(f"expected calibration error: {self.calibration.ece:.4f}")
        return "\n".join(lines)


def _gold_index(gold) -> dict[str, Mcq]:
    """Accept a dataset path, an iterable of Mcq, or an id-keyed dict."""
    if isinstance(gold, dict):
        return gold
    if isinstance(gold, (str, bytes)) or hasattr(gold, "__fspath__"):
        gold = iter_dataset(gold)
    return {mcq.question_id: mcq for mcq in gold}


def _gold_label(mcq: Mcq) -> str:
    category = decode_statement(mcq.target, mcq.options[mcq.correct_index])
    if category is None:
        raise ValueError(f"{mcq.question_id}: correct option is not a rendered statement")
    return category.label


def _empty_confusion(kind: str) -> dict[str, dict[str, float]]:
    labels = OPTION_LABELS_BY_KIND[kind]
    return {g: {p: 0 for p in labels} for g in labels}


def _score_resolved(
    gold: dict[str, Mcq],
    resolved: Iterable[tuple[str, int | None, float | None]],
    calibration_bins: int | None = None,
) -> MetricsReport:
    """Accumulate metrics from (question_id, option index, confidence) triples.

    Pure reduction: the result does not depend on iteration order.
    """
    report = MetricsReport()
    seen: set[str] = set()
    abs_err = {kind: 0 for kind in ORDINAL_KINDS}
    err_n = {kind: 0 for kind in ORDINAL_KINDS}
    calib: CalibrationTable | None = None
    if calibration_bins is not None:
        calib = CalibrationTable(
            bins=[CalibrationBin(lo=i / calibration_bins, hi=(i + 1) / calibration_bins)
                  for i in range(calibration_bins)]
        )
    for qid, index, confidence in resolved:
        mcq = gold.get(qid)
        if mcq is None:
            raise UnknownQuestionId(qid)
        if qid in seen:
            raise DuplicatePrediction(qid)
        seen.add(qid)
        kind = mcq.kind
        metric = report.per_kind.setdefault(kind, KindMetrics())
        metric.count += 1
        if index is None:
            metric.unparseable += 1
            report.unparseable += 1
            continue
        correct = index == mcq.correct_index
        if correct:
            metric.correct += 1
        gold_label = _gold_label(mcq)
        pred = decode_statement(mcq.target, mcq.options[index])
        pred_label = pred.label if pred else None
        if pred_label is not None:
            matrix = report.confusion.setdefault(kind, _empty_confusion(kind))
            matrix[gold_label][pred_label] += 1
            if kind in ORDINAL_KINDS:
                gold_pos = LABELS_BY_KIND[kind].index(gold_label)
                pred_pos = LABELS_BY_KIND[kind].index(pred_label)
                abs_err[kind] += abs(pred_pos - gold_pos)
                err_n[kind] += 1
        if calib is not None:
            if confidence is None:
                raise MissingConfidence(qid)
            slot = min(int(confidence * calibration_bins), calibration_bins - 1)
            b = calib.bins[slot]
            b.count += 1
            b.confidence_sum += confidence
            b.correct += int(correct)
            calib.total += 1
    if err_n["angle"]:
        report.angle_mae = abs_err["angle"] / err_n["angle"]
    if err_n["distance"]:
        report.distance_mae = abs_err["distance"] / err_n["distance"]
    report.calibration = calib
    return report


def score(
    gold, predictions: Iterable[PredictionRecord], calibration_bins: int | None = None
) -> MetricsReport:
    """Score predictions against gold questions.

    `gold` may be a dataset path, an iterable of Mcq, or a question_id to
    Mcq dict. Raises UnknownQuestionId for a prediction without a gold
    question and DuplicatePrediction for a repeated question_id. When
    calibration_bins is set, every parseable prediction must carry a
    confidence (MissingConfidence otherwise).
    """
    index = _gold_index(gold)

    def resolved():
        for pred in predictions:
            mcq = index.get(pred.question_id)
            options = mcq.options if mcq is not None else ()
            opt_index, confidence = resolve_prediction(pred, options) if mcq else (None, None)
            yield pred.question_id, opt_index, confidence

    return _score_resolved(index, resolved(), calibration_bins)


def reliability(gold, predictions: Iterable[PredictionRecord], n_bins: int = 10) -> CalibrationTable:
    """Equal-width reliability bins over [0, 1] plus expected calibration
    error, from confidence-tagged predictions."""
    report = score(gold, predictions, calibration_bins=n_bins)
    return report.calibration


def random_baseline(gold, seed: int = 0, trials: int = 1) -> MetricsReport:
    """Metrics of a uniform random guesser, averaged over trials.

    Anchors: 25% accuracy on 4-option angle questions, 33.3% on 3-option
    distance, 50% on binary relative position. With trials > 1 the
    confusion cells and unparseable counts are means, not integers.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    index = _gold_index(gold)
    reports = []
    for trial in range(trials):
        rng = random.Random(_stable_u64("baseline", seed, trial))
        resolved = (
            (qid, rng.randrange(len(mcq.options)), None)
            for qid, mcq in index.items()
        )
        reports.append(_score_resolved(index, resolved))
    return _average_reports(reports)


def _average_reports(reports: list[MetricsReport]) -> MetricsReport:
    if len(reports) == 1:
        return reports[0]
    n = len(reports)
    out = MetricsReport()
    for report in reports:
        for kind, m in report.per_kind.items():
            acc = out.per_kind.setdefault(kind, KindMetrics())
            acc.count = m.count
            acc.correct += m.correct / n
            acc.unparseable += m.unparseable / n
        for kind, matrix in report.confusion.items():
            acc_matrix = out.confusion.setdefault(kind, _empty_confusion(kind))
            for g, row in matrix.items():
                for p, v in row.items():
                    acc_matrix[g][p] += v / n
        out.unparseable += report.unparseable / n
    maes = [r.angle_mae for r in reports if r.angle_mae is not None]
    if maes:
        out.angle_mae = sum(maes) / len(maes)
    maes = [r.distance_mae for r in reports if r.distance_mae is not None]
    if maes:
        out.distance_mae = sum(maes) / len(maes)
    return out
