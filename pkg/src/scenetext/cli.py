"""Command-line interface.

Subcommands: detect, recognize, eval, bench, serve-annotate.

Exit codes: 0 success, 1 processing errors (bad files, failed engine
runs, unmet accuracy floor), 2 configuration/usage errors.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import click

from scenetext import _kernels, dataset as ds, detector, evaluation, ocr, viz
from scenetext.errors import ConfigError, OcrEngineError, SceneTextError
from scenetext.image import load_image, save_image

_PSM_FLAGS = {"block": "single_block", "line": "single_line", "word": "single_word"}


def _detector_config(edge: str, color: str, multi: bool) -> detector.DetectorConfig:
    cfg = detector.DetectorConfig(edge_method=edge, color_mode=color, multi_scale=multi)
    try:
        cfg.validate()
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    return cfg


def detector_options(fn):
    fn = click.option(
        "--edge",
        type=click.Choice(detector.EDGE_METHODS),
        default="morph",
        show_default=True,
        help="Edge/gradient method.",
    )(fn)
    fn = click.option(
        "--color",
        type=click.Choice(detector.COLOR_MODES),
        default="rgb",
        show_default=True,
        help="Compute gradients on grayscale or per RGB channel.",
    )(fn)
    fn = click.option(
        "--multi/--single",
        "multi",
        default=True,
        show_default=True,
        help="Multi-scale pyramid detection or single scale.",
    )(fn)
    return fn


def _collect_images(inputs: Sequence[Path]) -> List[Path]:
    files: List[Path] = []
    for path in inputs:
        if path.is_dir():
            files.extend(
                sorted(p for p in path.iterdir() if p.suffix.lower() in ds.IMAGE_SUFFIXES)
            )
        else:
            files.append(path)
    return files


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def _detection_record(name: str, width: int, height: int, regions) -> dict:
    return {
        "image": name,
        "imageWidth": width,
        "imageHeight": height,
        "regions": [
            {"x": r.x, "y": r.y, "w": r.w, "h": r.h, "scaleIndex": r.scale_index}
            for r in regions
        ],
    }


def _detect_worker(args: Tuple[Path, detector.DetectorConfig, Path, bool]) -> Optional[str]:
    path, cfg, out_dir, draw = args
    try:
        img = load_image(path)
        regions = detector.detect(img, cfg)
        regions = detector.sort_reading_order(regions)
        _write_json(
            out_dir / f"{path.stem}.json",
            _detection_record(path.name, img.width, img.height, regions),
        )
        if draw:
            save_image(viz.draw_regions(img, regions), out_dir / f"{path.stem}.viz.png")
        return None
    except (SceneTextError, OSError) as exc:
        return f"{path}: {exc}"


def _recognize_worker(
    args: Tuple[Path, detector.DetectorConfig, ocr.OcrEngineConfig, Path]
) -> Optional[str]:
    path, cfg, engine_cfg, out_dir = args
    try:
        img = load_image(path)
        regions = detector.sort_reading_order(detector.detect(img, cfg))
        results = ocr.recognize_regions(img, regions, engine_cfg)
        (out_dir / f"{path.stem}.txt").write_text(ocr.emit_text(results), encoding="utf-8")
        failures = [r.error for r in results if r.error]
        if failures:
            return f"{path}: {len(failures)} region(s) failed: {failures[0]}"
        return None
    except (SceneTextError, OSError) as exc:
        return f"{path}: {exc}"


def _run_batch(worker, work: list, jobs: int) -> List[str]:
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(worker, work))
    else:
        outcomes = [worker(item) for item in work]
    return [msg for msg in outcomes if msg]


@click.group()
@click.option(
    "--kernels",
    type=click.Choice(["auto", "compiled", "numpy"]),
    default="auto",
    show_default=True,
    help="Kernel backend selection.",
)
@click.version_option()
def main(kernels: str) -> None:
    """Scene-text detection, recognition, evaluation and annotation tools."""
    try:
        _kernels.select(kernels)
    except (RuntimeError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@detector_options
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("detections"),
              show_default=True, help="Output directory for detection records.")
@click.option("--viz", "draw", is_flag=True, help="Also write images with drawn boxes.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
def detect(inputs, edge, color, multi, out_dir, draw, jobs) -> None:
    """Detect text regions; one JSON record per image."""
    cfg = _detector_config(edge, color, multi)
    files = _collect_images(inputs)
    if not files:
        raise click.UsageError("no images found in the given inputs")
    out_dir.mkdir(parents=True, exist_ok=True)
    errors = _run_batch(_detect_worker, [(f, cfg, out_dir, draw) for f in files], jobs)
    for message in errors:
        click.echo(f"error: {message}", err=True)
    click.echo(f"processed {len(files) - len(errors)}/{len(files)} image(s) -> {out_dir}")
    if errors:
        sys.exit(1)


@main.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@detector_options
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("recognized"),
              show_default=True, help="Output directory for per-image text files.")
@click.option("--ocr-cmd", default=ocr.DEFAULT_ENGINE_COMMAND, show_default=True,
              help="Engine command template ({image}, {lang}, {psm}); mock:<table.json> "
                   "selects the lookup-table engine.")
@click.option("--lang", default="tur", show_default=True, help="OCR language code.")
@click.option("--psm", type=click.Choice(sorted(_PSM_FLAGS)), default="block",
              show_default=True, help="Page segmentation hint.")
@click.option("--timeout-ms", type=int, default=10_000, show_default=True,
              help="Per-region engine timeout.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
def recognize(inputs, edge, color, multi, out_dir, ocr_cmd, lang, psm, timeout_ms, jobs) -> None:
    """Detect, OCR in reading order and write one UTF-8 text file per image."""
    cfg = _detector_config(edge, color, multi)
    engine_cfg = ocr.OcrEngineConfig(
        engine_command=ocr_cmd,
        language=lang,
        page_segmentation=_PSM_FLAGS[psm],
        timeout_ms=timeout_ms,
    )
    try:
        engine_cfg.validate()
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    files = _collect_images(inputs)
    if not files:
        raise click.UsageError("no images found in the given inputs")
    out_dir.mkdir(parents=True, exist_ok=True)
    errors = _run_batch(
        _recognize_worker, [(f, cfg, engine_cfg, out_dir) for f in files], jobs
    )
    for message in errors:
        click.echo(f"error: {message}", err=True)
    click.echo(f"recognized {len(files) - len(errors)}/{len(files)} image(s) -> {out_dir}")
    if errors:
        sys.exit(1)


def _format_eval_table(report: evaluation.AggregateReport) -> str:
    rows = [("image", "chars", "errors", "accuracy")]
    for result in report.per_image:
        rows.append(
            (
                result.image_id,
                str(result.char_count),
                str(result.clamped_errors),
                f"{result.accuracy:.4f}",
            )
        )
    rows.append(
        (
            "TOTAL",
            str(report.total_chars),
            str(report.total_clamped_errors),
            f"{report.overall_accuracy:.4f}",
        )
    )
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * widths[j] for j in range(4)))
    return "\n".join(lines)


def _report_to_dict(report: evaluation.AggregateReport) -> dict:
    return {
        "perImage": [
            {
                "imageId": r.image_id,
                "chars": r.char_count,
                "rawErrors": r.raw_errors,
                "clampedErrors": r.clamped_errors,
                "accuracy": r.accuracy,
            }
            for r in report.per_image
        ],
        "totalChars": report.total_chars,
        "totalClampedErrors": report.total_clamped_errors,
        "overallAccuracy": report.overall_accuracy,
    }


@main.command("eval")
@click.option("--ocr-dir", required=True, type=click.Path(exists=True, path_type=Path),
              help="Directory of per-image OCR text files (<imageId>.txt).")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, path_type=Path), help="Dataset manifest file.")
@click.option("--report", "report_format", type=click.Choice(["table", "json"]),
              default="table", show_default=True)
@click.option("--out", "out_file", type=click.Path(path_type=Path), default=None,
              help="Also write the JSON report to this file.")
@click.option("--min-accuracy", type=float, default=None,
              help="Exit nonzero when overall accuracy falls below this floor.")
def eval_cmd(ocr_dir, manifest_path, report_format, out_file, min_accuracy) -> None:
    """Score OCR outputs against ground truth and aggregate over the dataset."""
    try:
        manifest = ds.load_manifest(manifest_path)
    except SceneTextError as exc:
        raise click.ClickException(str(exc)) from exc
    missing: List[str] = []
    results = []
    for entry in manifest.entries:
        if entry.annotation_file is None:
            missing.append(f"{entry.image_id}: no annotation in manifest")
            continue
        ocr_file = ocr_dir / f"{entry.image_id}.txt"
        if not ocr_file.exists():
            missing.append(f"{entry.image_id}: missing OCR output {ocr_file}")
            continue
        annotation = ds.load_annotation(entry.annotation_file)
        gt_text = ds.flatten_ground_truth(annotation)
        ocr_text = ocr_file.read_text(encoding="utf-8")
        results.append(evaluation.score_image(gt_text, ocr_text, image_id=entry.image_id))
    if not results:
        raise click.ClickException("no image could be scored; see missing files")
    report = evaluation.aggregate(results)
    if report_format == "json":
        click.echo(json.dumps(_report_to_dict(report), ensure_ascii=False, indent=2))
    else:
        click.echo(_format_eval_table(report))
    if out_file is not None:
        _write_json(out_file, _report_to_dict(report))
    failed = False
    for message in missing:
        click.echo(f"error: {message}", err=True)
        failed = True
    if min_accuracy is not None and report.overall_accuracy < min_accuracy:
        click.echo(
            f"error: overall accuracy {report.overall_accuracy:.4f} is below the "
            f"floor {min_accuracy:.4f}",
            err=True,
        )
        failed = True
    if failed:
        sys.exit(1)


def _format_bench_table(rows: List[Tuple[str, evaluation.StageTimings]]) -> str:
    header = ["configuration"] + list(detector.STAGES)
    table = [header]
    for name, timings in rows:
        table.append([name] + [f"{timings.summary[s]:.2f}" for s in detector.STAGES])
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * widths[j] for j in range(len(header))))
    return "\n".join(lines)


@main.command()
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, path_type=Path), help="Dataset manifest file.")
@detector_options
@click.option("--reps", type=int, default=3, show_default=True,
              help="Timed repetitions per image (after one warm-up).")
@click.option("--sweep", is_flag=True,
              help="Benchmark every edge method x color mode combination.")
@click.option("--report", "report_format", type=click.Choice(["table", "json"]),
              default="table", show_default=True)
@click.option("--out", "out_file", type=click.Path(path_type=Path), default=None,
              help="Also write the JSON timings to this file.")
def bench(manifest_path, edge, color, multi, reps, sweep, report_format, out_file) -> None:
    """Measure per-stage detection times (milliseconds) over a dataset."""
    try:
        manifest = ds.load_manifest(manifest_path)
    except SceneTextError as exc:
        raise click.ClickException(str(exc)) from exc
    combos: List[Tuple[str, Optional[detector.DetectorConfig]]]
    if sweep:
        combos = []
        for method in detector.EDGE_METHODS:
            for mode in detector.COLOR_MODES:
                name = f"{method}/{mode}/{'multi' if multi else 'single'}"
                if method == "canny" and mode == "rgb":
                    combos.append((name, None))
                else:
                    combos.append(
                        (name, detector.DetectorConfig(edge_method=method, color_mode=mode,
                                                       multi_scale=multi))
                    )
    else:
        cfg = _detector_config(edge, color, multi)
        combos = [(f"{edge}/{color}/{'multi' if multi else 'single'}", cfg)]

    click.echo(f"kernel backend: {_kernels.backend_name()}")
    rows: List[Tuple[str, evaluation.StageTimings]] = []
    payload = {"backend": _kernels.backend_name(), "repetitions": reps, "runs": {}}
    for name, cfg in combos:
        if cfg is None:
            click.echo(f"{name}: unsupported (canny runs on grayscale only)")
            payload["runs"][name] = None
            continue
        try:
            timings = evaluation.run_benchmark(manifest, cfg, repetitions=reps)
        except SceneTextError as exc:
            raise click.ClickException(str(exc)) from exc
        rows.append((name, timings))
        payload["runs"][name] = {
            "summary": timings.summary,
            "perImage": timings.per_image,
        }
    if report_format == "json":
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
    elif rows:
        click.echo(_format_bench_table(rows))
    if out_file is not None:
        _write_json(out_file, payload)


@main.command("serve-annotate")
@click.argument("dataset_root", type=click.Path(exists=True, file_okay=False, path_type=Path))
@detector_options
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--frontend", "frontend_dir", type=click.Path(path_type=Path), default=None,
              help="Directory of built UI assets (defaults to frontend/dist when present).")
def serve_annotate(dataset_root, edge, color, multi, port, host, frontend_dir) -> None:
    """Serve the annotation API and web UI for a dataset directory."""
    from scenetext import server

    cfg = _detector_config(edge, color, multi)
    server.serve_annotate(
        dataset_root, port=port, host=host, detector_config=cfg, frontend_dir=frontend_dir
    )


if __name__ == "__main__":
    main()
