"""Report emission: results.csv, results.md, run_meta.json.

The CSV and Markdown tables carry one row per strategy in grid order (plus
the baseline row) with the six scores at two decimals. Formatting is fully
deterministic so reruns with the same config and seed are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

from promptseg import __version__, kernels
from promptseg.experiment import ExperimentConfig, ExperimentResult

CSV_HEADER = "experiment,precision,recall,iou,f1,tp_iou,tp_f1"
MD_HEADER = "| Experiment | Precision | Recall | IoU | F1 | TP-IoU | TP-F1 |"


def _row_values(report) -> list[str]:
    return [
        f"{report.precision:.2f}",
        f"{report.recall:.2f}",
        f"{report.iou:.2f}",
        f"{report.f1:.2f}",
        f"{report.tp_iou:.2f}",
        f"{report.tp_f1:.2f}",
    ]


def results_csv(result: ExperimentResult) -> str:
    lines = [CSV_HEADER]
    for row in result.rows:
        lines.append(",".join([row.label] + _row_values(row.report)))
    return "\n".join(lines) + "\n"


def results_md(result: ExperimentResult) -> str:
    lines = [MD_HEADER, "|" + " --- |" * 7]
    for row in result.rows:
        lines.append("| " + " | ".join([row.label] + _row_values(row.report)) + " |")
    return "\n".join(lines) + "\n"


def _config_json(cfg: ExperimentConfig) -> dict:
    return {
        "data_root": str(cfg.data_root),
        "out_dir": str(cfg.out_dir),
        "strategies": [
            {
                "kind": s.kind.value,
                "k_points": s.k_points,
                "n_negative": s.n_negative,
                "negative_mode": s.negative_mode.value if s.negative_mode else None,
                "seed": s.seed,
            }
            for s in cfg.strategies
        ],
        "backend": cfg.backend,
        "endpoint": cfg.endpoint,
        "match_threshold": cfg.match_threshold,
        "seed": cfg.seed,
        "parallelism": cfg.parallelism,
        "emit_overlays": cfg.emit_overlays,
        "mock_radius": cfg.mock_radius,
        "include_baseline": cfg.include_baseline,
    }


def run_meta(result: ExperimentResult, cfg: ExperimentConfig) -> dict:
    return {
        "version": __version__,
        "kernel_backend": kernels.backend_name(),
        "config": _config_json(cfg),
        "n_scenes": result.n_scenes,
        "ingest_skips": [s.to_json() for s in result.ingest_skips],
        "scene_skips": [s.to_json() for s in result.scene_skips],
        "negative_fallbacks": [f.to_json() for f in result.fallbacks],
    }


def emit_reports(result: ExperimentResult, cfg: ExperimentConfig, out_dir: str | Path) -> list[Path]:
    """Write the three report files; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in (("results.csv", results_csv(result)), ("results.md", results_md(result))):
        path = out / name
        try:
            path.write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise OSError(f"cannot write report {path}: {exc}") from exc
        written.append(path)
    meta_path = out / "run_meta.json"
    try:
        meta_path.write_text(
            json.dumps(run_meta(result, cfg), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise OSError(f"cannot write report {meta_path}: {exc}") from exc
    written.append(meta_path)
    return written
