"""Data ingestion and the end-to-end pseudo-labeling pipeline.

All interchange is UTF-8 CSV with a header row; floats are rendered with 17
significant digits so re-running a pipeline writes byte-identical files.

Schemas:
  av_labels.csv   image_id,valence,arousal[,category]
  au_probs.csv    image_id,au1..au41        (detector catalogue order)
  zhat.csv        image_id,zhat
  features.csv    image_id,f0..f{d-1}
  labels_out.csv  image_id,a,v,z,region,t1..t15
  conditions.csv  idx,theta,a,v,z
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from c2a2.aus import AU_CATALOGUE, RELEVANT_AUS, au_table_rows, make_au_targets
from c2a2.categories import (
    CODE_TO_CATEGORY,
    BasicEmotion,
    Category,
    display_name,
    parse_category,
)
from c2a2.errors import (
    DuplicateIdError,
    EmptyJoinError,
    OutOfBallError,
    ParseError,
    RangeError,
)
from c2a2.geometry import AVPoint, AxisFrame, EmotionPoint, circle_scan, compound_direction
from c2a2.losses import compose_z_label
from c2a2.regions import c2a2_region_labels

logger = logging.getLogger(__name__)

_FMT = ".17g"


def _fmt(x: float) -> str:
    return format(float(x), _FMT)


@dataclass(frozen=True)
class AvLabelRecord:
    image_id: str
    valence: float
    arousal: float
    category: str | None = None


@dataclass(frozen=True)
class AuProbRecord:
    image_id: str
    probs: np.ndarray  # (41,)


@dataclass(frozen=True)
class ZHatRecord:
    image_id: str
    zhat: float


@dataclass(frozen=True)
class JoinedRow:
    image_id: str
    valence: float
    arousal: float
    probs: np.ndarray
    zhat: float | None


@dataclass(frozen=True)
class JoinSummary:
    matched: int
    unmatched_av: tuple[str, ...]
    unmatched_au: tuple[str, ...]
    unmatched_zhat: tuple[str, ...]


@dataclass(frozen=True)
class LabeledCondition:
    image_id: str
    point: EmotionPoint
    region: Category
    au_target: np.ndarray  # (15,)


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        rows = [(line_no, row) for line_no, row in enumerate(reader, start=2) if row]
    return header, rows


def _parse_float(path, line_no: int, name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{path}: line {line_no}: bad {name} value {text!r}") from None
    if not math.isfinite(value):
        raise RangeError(f"{path}: line {line_no}: {name} is not finite")
    return value


def load_av_csv(path) -> list[AvLabelRecord]:
    """Read AV annotations; row order is preserved. Rows labelled 'contempt'
    (not part of the category model) are dropped with a counted warning."""
    header, rows = _read_rows(path)
    if [h.strip() for h in header[:3]] != ["image_id", "valence", "arousal"] or len(header) > 4:
        raise ParseError(f"{path}: expected header image_id,valence,arousal[,category]")
    has_category = len(header) == 4
    records: list[AvLabelRecord] = []
    seen: set[str] = set()
    dropped = 0
    for line_no, row in rows:
        if len(row) != len(header):
            raise ParseError(f"{path}: line {line_no}: expected {len(header)} fields, got {len(row)}")
        image_id = row[0].strip()
        if not image_id:
            raise ParseError(f"{path}: line {line_no}: empty image_id")
        if image_id in seen:
            raise DuplicateIdError(f"{path}: line {line_no}: duplicate image_id {image_id!r}")
        seen.add(image_id)
        valence = _parse_float(path, line_no, "valence", row[1])
        arousal = _parse_float(path, line_no, "arousal", row[2])
        for name, value in (("valence", valence), ("arousal", arousal)):
            if not -1.0 <= value <= 1.0:
                raise RangeError(f"{path}: line {line_no}: {name} {value} outside [-1, 1]")
        category = row[3].strip() if has_category else None
        if category is not None and category.lower() == "contempt":
            dropped += 1
            continue
        records.append(AvLabelRecord(image_id, valence, arousal, category or None))
    if dropped:
        logger.warning("%s: dropped %d contempt row(s)", path, dropped)
    return records


def load_au_csv(path) -> list[AuProbRecord]:
    """Read 41-unit activation probabilities per image."""
    header, rows = _read_rows(path)
    if header[0].strip() != "image_id" or len(header) != 1 + len(AU_CATALOGUE):
        raise ParseError(
            f"{path}: expected header image_id,au1..au{len(AU_CATALOGUE)}, got {len(header)} fields"
        )
    records: list[AuProbRecord] = []
    seen: set[str] = set()
    for line_no, row in rows:
        if len(row) != len(header):
            raise ParseError(f"{path}: line {line_no}: expected {len(header)} fields, got {len(row)}")
        image_id = row[0].strip()
        if not image_id:
            raise ParseError(f"{path}: line {line_no}: empty image_id")
        if image_id in seen:
            raise DuplicateIdError(f"{path}: line {line_no}: duplicate image_id {image_id!r}")
        seen.add(image_id)
        probs = np.array(
            [_parse_float(path, line_no, f"au column {i + 1}", cell) for i, cell in enumerate(row[1:])]
        )
        if probs.min() < 0.0 or probs.max() > 1.0:
            raise RangeError(f"{path}: line {line_no}: activation probability outside [0, 1]")
        records.append(AuProbRecord(image_id, probs))
    return records


def load_zhat_csv(path) -> list[ZHatRecord]:
    """Read estimated lift values per image."""
    header, rows = _read_rows(path)
    if [h.strip() for h in header] != ["image_id", "zhat"]:
        raise ParseError(f"{path}: expected header image_id,zhat")
    records: list[ZHatRecord] = []
    seen: set[str] = set()
    for line_no, row in rows:
        if len(row) != 2:
            raise ParseError(f"{path}: line {line_no}: expected 2 fields, got {len(row)}")
        image_id = row[0].strip()
        if not image_id:
            raise ParseError(f"{path}: line {line_no}: empty image_id")
        if image_id in seen:
            raise DuplicateIdError(f"{path}: line {line_no}: duplicate image_id {image_id!r}")
        seen.add(image_id)
        records.append(ZHatRecord(image_id, _parse_float(path, line_no, "zhat", row[1])))
    return records


def read_features_csv(path) -> tuple[list[str], np.ndarray]:
    """Read an emotion-feature matrix: header image_id,f0..f{d-1}."""
    header, rows = _read_rows(path)
    if header[0].strip() != "image_id" or len(header) < 2:
        raise ParseError(f"{path}: expected header image_id,f0..")
    d = len(header) - 1
    ids: list[str] = []
    data = np.empty((len(rows), d))
    for r, (line_no, row) in enumerate(rows):
        if len(row) != d + 1:
            raise ParseError(f"{path}: line {line_no}: expected {d + 1} fields, got {len(row)}")
        ids.append(row[0].strip())
        for c, cell in enumerate(row[1:]):
            data[r, c] = _parse_float(path, line_no, f"f{c}", cell)
    return ids, data


def join_labels(
    av: list[AvLabelRecord],
    au: list[AuProbRecord],
    zhat: list[ZHatRecord] | None = None,
) -> tuple[list[JoinedRow], JoinSummary]:
    """Inner-join the label files on image_id, in AV row order.

    A missing zhat file selects the planar pipeline (z = 0 everywhere).
    Unmatched ids on any side are reported in the summary; raises
    EmptyJoinError when nothing matches."""
    au_by_id = {rec.image_id: rec for rec in au}
    zhat_by_id = {rec.image_id: rec for rec in zhat} if zhat is not None else None
    rows: list[JoinedRow] = []
    matched_ids: set[str] = set()
    for rec in av:
        au_rec = au_by_id.get(rec.image_id)
        if au_rec is None:
            continue
        if zhat_by_id is None:
            z: float | None = None
        else:
            zrec = zhat_by_id.get(rec.image_id)
            if zrec is None:
                continue
            z = zrec.zhat
        matched_ids.add(rec.image_id)
        rows.append(JoinedRow(rec.image_id, rec.valence, rec.arousal, au_rec.probs, z))
    if not rows:
        raise EmptyJoinError("no image ids are common to all label files")
    summary = JoinSummary(
        matched=len(rows),
        unmatched_av=tuple(r.image_id for r in av if r.image_id not in matched_ids),
        unmatched_au=tuple(r.image_id for r in au if r.image_id not in matched_ids),
        unmatched_zhat=tuple(
            r.image_id for r in (zhat or []) if r.image_id not in matched_ids
        ),
    )
    return rows, summary


def pseudolabel(rows: list[JoinedRow], frame: AxisFrame) -> list[LabeledCondition]:
    """Turn joined annotation rows into full training labels: the 3D
    condition point (lift clamped into the ball), its region category, and
    the region's AU activation target scaled by intensity."""
    points = []
    for row in rows:
        zhat = row.zhat if row.zhat is not None else 0.0
        try:
            point = compose_z_label(AVPoint(row.valence, row.arousal), zhat)
        except OutOfBallError as exc:
            raise OutOfBallError(f"image {row.image_id!r}: {exc}") from None
        points.append(point)
    a = np.array([p.a for p in points])
    v = np.array([p.v for p in points])
    z = np.array([p.z for p in points])
    codes = c2a2_region_labels(a, v, z, frame)
    intensities = np.minimum(np.sqrt(a * a + v * v + z * z), 1.0)
    targets = make_au_targets(codes, intensities)
    return [
        LabeledCondition(row.image_id, point, CODE_TO_CATEGORY[int(code)], target)
        for row, point, code, target in zip(rows, points, codes, targets)
    ]


def write_labels_csv(labels: list[LabeledCondition], path) -> None:
    header = "image_id,a,v,z,region," + ",".join(f"t{i + 1}" for i in range(len(RELEVANT_AUS)))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for rec in labels:
            p = rec.point
            cells = [rec.image_id, _fmt(p.a), _fmt(p.v), _fmt(p.z), rec.region.value]
            cells.extend(_fmt(t) for t in rec.au_target)
            fh.write(",".join(cells) + "\n")


def load_labels_csv(path) -> list[LabeledCondition]:
    """Read back a labels_out.csv produced by write_labels_csv."""
    header, rows = _read_rows(path)
    want = ["image_id", "a", "v", "z", "region"] + [f"t{i + 1}" for i in range(len(RELEVANT_AUS))]
    if [h.strip() for h in header] != want:
        raise ParseError(f"{path}: unexpected labels header")
    out: list[LabeledCondition] = []
    for line_no, row in rows:
        if len(row) != len(want):
            raise ParseError(f"{path}: line {line_no}: expected {len(want)} fields")
        point = EmotionPoint(
            _parse_float(path, line_no, "a", row[1]),
            _parse_float(path, line_no, "v", row[2]),
            _parse_float(path, line_no, "z", row[3]),
        )
        try:
            region = parse_category(row[4])
        except ValueError as exc:
            raise ParseError(f"{path}: line {line_no}: {exc}") from None
        target = np.array(
            [_parse_float(path, line_no, f"t{i + 1}", cell) for i, cell in enumerate(row[5:])]
        )
        out.append(LabeledCondition(row[0].strip(), point, region, target))
    return out


@dataclass(frozen=True)
class CircleGridSpec:
    """Rings of conditions at fixed lifts, matching circle_scan."""

    z_levels: tuple[float, ...]
    n_theta: int
    radius: float = 1.0


@dataclass(frozen=True)
class RayGridSpec:
    """Intensity ramps along category directions."""

    categories: tuple[Category, ...]
    n_steps: int
    max_rho: float = 1.0


def emit_condition_grid(spec: CircleGridSpec | RayGridSpec, frame: AxisFrame, path) -> int:
    """Write a conditions.csv conditioning grid; returns the row count."""
    lines: list[str] = []
    if isinstance(spec, CircleGridSpec):
        for z_level in spec.z_levels:
            for theta, point in circle_scan(z_level, spec.n_theta, spec.radius, frame):
                lines.append((theta, point))
    else:
        if spec.n_steps < 1:
            raise RangeError("n_steps must be >= 1")
        for cat in spec.categories:
            if isinstance(cat, BasicEmotion):
                direction = frame.axis(cat)
            else:
                direction = compound_direction(cat, frame)
            phi = math.atan2(direction[1], direction[0])
            theta = phi + 2.0 * math.pi if phi < 0.0 else phi
            for k in range(1, spec.n_steps + 1):
                rho = spec.max_rho * k / spec.n_steps
                point = EmotionPoint(
                    float(rho * direction[0]), float(rho * direction[1]), float(rho * direction[2])
                )
                lines.append((theta, point))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("idx,theta,a,v,z\n")
        for idx, (theta, point) in enumerate(lines):
            fh.write(
                f"{idx},{_fmt(theta)},{_fmt(point.a)},{_fmt(point.v)},{_fmt(point.z)}\n"
            )
    return len(lines)


def format_au_table() -> str:
    """The 23-row category/AU audit table as CSV text."""
    lines = ["category,au_ids"]
    for cat, ids in au_table_rows():
        lines.append(f"{display_name(cat)},{';'.join(str(i) for i in ids)}")
    return "\n".join(lines) + "\n"


def write_au_table_csv(path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_au_table())
