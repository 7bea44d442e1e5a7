"""Map continuous descriptor values onto discrete category labels.

Every kind partitions its value range into half-open intervals, lower
bound inclusive: a value exactly on a cut belongs to the upper category.
The relative-position kinds share a symmetric 'aligned' band around zero;
aligned instances are never turned into questions.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import OutOfRange

ANGLE_LABELS = (
    "bent completely inward",
    "bent inward",
    "bent slightly inward",
    "straight",
)
DISTANCE_LABELS = ("close to", "spread from", "spread wide from")
RELPOS_LABELS = {
    "relpos_x": ("at the left of", "aligned", "at the right of"),
    "relpos_y": ("below", "aligned", "above"),
    "relpos_z": ("behind", "aligned", "in front of"),
}

ALIGNED = "aligned"

# kind -> labels ordered by increasing continuous value
LABELS_BY_KIND: dict[str, tuple[str, ...]] = {
    "angle": ANGLE_LABELS,
    "distance": DISTANCE_LABELS,
    **RELPOS_LABELS,
}

# kind -> labels eligible as MCQ options (aligned excluded)
OPTION_LABELS_BY_KIND: dict[str, tuple[str, ...]] = {
    kind: tuple(lb for lb in labels if lb != ALIGNED)
    for kind, labels in LABELS_BY_KIND.items()
}


@dataclass(frozen=True)
class Category:
    """A discrete label for one descriptor kind."""

    kind: str
    label: str

    @property
    def is_aligned(self) -> bool:
        return self.label == ALIGNED

    def position(self) -> int:
        """Rank of this label in the kind's value ordering (aligned included)."""
        return LABELS_BY_KIND[self.kind].index(self.label)


@dataclass(frozen=True)
class ThresholdConfig:
    """Cut points between categories.

    Defaults: angle bins split at 105/150/170 degrees, distance bins at
    0.1/0.3, and the relative-position aligned band is (-0.15, 0.15].
    """

    angle_cuts: tuple[float, float, float] = (105.0, 150.0, 170.0)
    distance_cuts: tuple[float, float] = (0.1, 0.3)
    relpos_band: float = 0.15

    def __post_init__(self):
        object.__setattr__(self, "angle_cuts", tuple(float(c) for c in self.angle_cuts))
        object.__setattr__(self, "distance_cuts", tuple(float(c) for c in self.distance_cuts))
        object.__setattr__(self, "relpos_band", float(self.relpos_band))
        if list(self.angle_cuts) != sorted(set(self.angle_cuts)):
            raise ValueError("angle_cuts must be strictly increasing")
        if list(self.distance_cuts) != sorted(set(self.distance_cuts)):
            raise ValueError("distance_cuts must be strictly increasing")
        if self.relpos_band <= 0:
            raise ValueError("relpos_band must be positive")

    def config_id(self) -> str:
        """Short stable identifier embedded in dataset provenance."""
        payload = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.blake2b(payload.encode(), digest_size=6).hexdigest()

    def to_dict(self) -> dict:
        return {
            "angle_cuts": list(self.angle_cuts),
            "distance_cuts": list(self.distance_cuts),
            "relpos_band": self.relpos_band,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdConfig":
        return cls(
            angle_cuts=tuple(d.get("angle_cuts", (105.0, 150.0, 170.0))),
            distance_cuts=tuple(d.get("distance_cuts", (0.1, 0.3))),
            relpos_band=d.get("relpos_band", 0.15),
        )


DEFAULT_THRESHOLDS = ThresholdConfig()

# Interned instances: categorization is the hottest call in generation.
_CATEGORIES: dict[tuple[str, str], Category] = {
    (kind, label): Category(kind, label)
    for kind, labels in LABELS_BY_KIND.items()
    for label in labels
}


def categorize_angle(theta: float, cfg: ThresholdConfig = DEFAULT_THRESHOLDS) -> Category:
    """Bin a bending angle in degrees. Raises OutOfRange outside [0, 180]."""
    if not 0.0 <= theta <= 180.0:
        raise OutOfRange(f"angle {theta} outside [0, 180]")
    c1, c2, c3 = cfg.angle_cuts
    if theta < c1:
        label = ANGLE_LABELS[0]
    elif theta < c2:
        label = ANGLE_LABELS[1]
    elif theta < c3:
        label = ANGLE_LABELS[2]
    else:
        label = ANGLE_LABELS[3]
    return _CATEGORIES[("angle", label)]


def categorize_distance(d: float, cfg: ThresholdConfig = DEFAULT_THRESHOLDS) -> Category:
    """Bin an inter-joint distance. Raises OutOfRange for negative values."""
    if d < 0.0:
        raise OutOfRange(f"distance {d} is negative")
    c1, c2 = cfg.distance_cuts
    if d < c1:
        label = DISTANCE_LABELS[0]
    elif d < c2:
        label = DISTANCE_LABELS[1]
    else:
        label = DISTANCE_LABELS[2]
    return _CATEGORIES[("distance", label)]


def categorize_offset(delta: float, axis: str, cfg: ThresholdConfig = DEFAULT_THRESHOLDS) -> Category:
    """Bin a signed axis offset into negative side / aligned / positive side."""
    kind = f"relpos_{axis}"
    labels = RELPOS_LABELS[kind]
    band = cfg.relpos_band
    if delta < -band:
        label = labels[0]
    elif delta < band:
        label = labels[1]
    else:
        label = labels[2]
    return _CATEGORIES[(kind, label)]


def categorize(kind: str, value: float, cfg: ThresholdConfig = DEFAULT_THRESHOLDS) -> Category:
    """Dispatch to the kind-specific categorizer."""
    if kind == "angle":
        return categorize_angle(value, cfg)
    if kind == "distance":
        return categorize_distance(value, cfg)
    if kind in RELPOS_LABELS:
        return categorize_offset(value, kind[-1], cfg)
    raise KeyError(f"unknown descriptor kind {kind!r}")
