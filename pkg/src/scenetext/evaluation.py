"""OCR accuracy evaluation, detection diagnostics and runtime benchmarking.

Accuracy follows the character-level protocol: for ground truth of n
characters and e edit operations (insertions, deletions, substitutions)
needed to correct the OCR output, per-image accuracy is (n - e) / n with
e clamped to n, so a completely failed image contributes zero instead of
dragging other images negative. Dataset accuracy is character-weighted:
(sum n - sum clamped e) / sum n.
"""

from __future__ import annotations

import re
import statistics
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from scenetext import detector
from scenetext.dataset import DatasetManifest, GroundTruthAnnotation
from scenetext.detector import DetectorConfig, StageTimer, TextRegion
from scenetext.image import load_image

_WHITESPACE_RUN = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    """Collapse whitespace runs to single spaces and trim.

    Keeps line-breaking differences between OCR output and ground truth
    from dominating the edit distance; pass ``normalize=False`` to
    score_image to compare verbatim.
    """
    return _WHITESPACE_RUN.sub(" ", text).strip()


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance over Unicode code points with unit costs."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,          # deletion
                    current[j - 1] + 1,       # insertion
                    previous[j - 1] + (ca != cb),  # substitution
                )
            )
        previous = current
    return previous[-1]


@dataclass(frozen=True)
class ImageEvalResult:
    """Character counts and accuracy for one image."""

    image_id: str
    char_count: int          # n
    raw_errors: int          # e before clamping
    clamped_errors: int      # min(e, n)
    accuracy: float


def score_image(
    gt_text: str, ocr_text: str, image_id: str = "", normalize: bool = True
) -> ImageEvalResult:
    """Score one image's OCR output against its ground-truth text.

    Comparison is case-sensitive. Images without ground-truth text score
    1.0 for empty output and 0.0 otherwise.
    """
    gt = normalize_text(gt_text) if normalize else gt_text
    ocr = normalize_text(ocr_text) if normalize else ocr_text
    n = len(gt)
    e = edit_distance(gt, ocr)
    clamped = min(e, n)
    if n == 0:
        accuracy = 1.0 if e == 0 else 0.0
    else:
        accuracy = (n - clamped) / n
    return ImageEvalResult(
        image_id=image_id,
        char_count=n,
        raw_errors=e,
        clamped_errors=clamped,
        accuracy=accuracy,
    )


@dataclass
class AggregateReport:
    """Dataset-level accuracy; character-weighted, not a mean of per-image values."""

    per_image: List[ImageEvalResult]
    total_chars: int
    total_clamped_errors: int
    overall_accuracy: float


def aggregate(results: Sequence[ImageEvalResult]) -> AggregateReport:
    if not results:
        raise ValueError("cannot aggregate an empty result list")
    total_n = sum(r.char_count for r in results)
    total_e = sum(r.clamped_errors for r in results)
    if total_n == 0:
        overall = 1.0 if all(r.raw_errors == 0 for r in results) else 0.0
    else:
        overall = (total_n - total_e) / total_n
    return AggregateReport(
        per_image=list(results),
        total_chars=total_n,
        total_clamped_errors=total_e,
        overall_accuracy=overall,
    )


@dataclass(frozen=True)
class DetectionDiagnostics:
    """Box-level matching quality between predictions and ground truth."""

    precision: float
    recall: float
    matched_pairs: List[Tuple[int, int, float]]  # (pred index, gt index, IoU)


def _iou(a: TextRegion, x: int, y: int, w: int, h: int) -> float:
    ix = min(a.x2, x + w) - max(a.x, x)
    iy = min(a.y2, y + h) - max(a.y, y)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + w * h - inter)


def detection_diagnostics(
    pred: Sequence[TextRegion], gt: GroundTruthAnnotation, iou_threshold: float = 0.5
) -> DetectionDiagnostics:
    """Greedy one-to-one matching by descending IoU.

    Precision is matches over predictions (vacuously 1.0 with no
    predictions); recall is matches over ground-truth boxes (vacuously
    1.0 with no ground truth).
    """
    if not 0.0 < iou_threshold < 1.0:
        raise ValueError("iou_threshold must be in (0, 1)")
    scores = []
    for pi, region in enumerate(pred):
        for gi, box in enumerate(gt.boxes):
            iou = _iou(region, box.x, box.y, box.w, box.h)
            if iou >= iou_threshold:
                scores.append((iou, pi, gi))
    scores.sort(key=lambda s: (-s[0], s[1], s[2]))
    used_pred, used_gt = set(), set()
    matches: List[Tuple[int, int, float]] = []
    for iou, pi, gi in scores:
        if pi in used_pred or gi in used_gt:
            continue
        used_pred.add(pi)
        used_gt.add(gi)
        matches.append((pi, gi, iou))
    precision = len(matches) / len(pred) if pred else 1.0
    recall = len(matches) / len(gt.boxes) if gt.boxes else 1.0
    return DetectionDiagnostics(precision=precision, recall=recall, matched_pairs=matches)


@dataclass
class StageTimings:
    """Per-stage wall-clock milliseconds, per image and summarized."""

    per_image: Dict[str, Dict[str, float]] = field(default_factory=dict)
    summary: Dict[str, float] = field(default_factory=dict)
    repetitions: int = 1

    @staticmethod
    def summarize(per_image: Dict[str, Dict[str, float]], repetitions: int) -> "StageTimings":
        summary = {}
        for stage in detector.STAGES:
            values = [timings[stage] for timings in per_image.values()]
            summary[stage] = statistics.fmean(values) if values else 0.0
        return StageTimings(per_image=per_image, summary=summary, repetitions=repetitions)


def run_benchmark(
    manifest: DatasetManifest,
    cfg: Optional[DetectorConfig] = None,
    repetitions: int = 3,
) -> StageTimings:
    """Time detection per stage over a dataset.

    Each image gets one untimed warm-up pass, then ``repetitions`` timed
    passes whose stage times are averaged. Detection results are
    discarded; timing never alters them.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    cfg = cfg if cfg is not None else DetectorConfig()
    manifest.validate()
    per_image: Dict[str, Dict[str, float]] = {}
    for entry in manifest.entries:
        img = load_image(entry.image_file)
        detector.detect(img, cfg)  # warm-up, excluded from timing
        collected = {stage: 0.0 for stage in detector.STAGES}
        for _ in range(repetitions):
            timer = StageTimer()
            detector.detect(img, cfg, timer=timer)
            for stage in detector.STAGES:
                collected[stage] += timer.ms[stage]
        per_image[entry.image_id] = {
            stage: total / repetitions for stage, total in collected.items()
        }
    return StageTimings.summarize(per_image, repetitions)
