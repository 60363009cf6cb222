"""Experiment orchestration over the strategy grid.

For every strategy x scene: the CNN prediction mask is split into instances,
each instance becomes a prompt, the segmenter refines it, the refined masks
are OR-merged into a scene prediction and scored against ground truth. Scenes
run in a worker pool; aggregation folds results in scene order, so output is
identical at any parallelism level for the deterministic backends.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from promptseg import metrics, prompts, raster
from promptseg.errors import BackendUnavailable, ConfigError, ProtocolError
from promptseg.ingest import SceneRecord, SkipRecord, ingest
from promptseg.metrics import MetricsReport, SceneScore
from promptseg.prompts import BASELINE_LABEL, Prompt, StrategySpec, default_grid
from promptseg.segmenter import (
    DilatingMockSegmenter,
    OracleSegmenter,
    PassthroughSegmenter,
    Segmenter,
    SegmenterRequest,
)
from promptseg.types import BinaryMask, InstanceMask

LOGGER = logging.getLogger("promptseg.experiment")

BACKENDS = ("oracle", "dilating_mock", "passthrough", "remote")


@dataclass
class ExperimentConfig:
    data_root: str
    out_dir: str = "runs/out"
    strategies: list[StrategySpec] = field(default_factory=default_grid)
    backend: str = "oracle"
    endpoint: str | None = None
    match_threshold: float = 0.5
    seed: int = 0
    parallelism: int = 1
    emit_overlays: bool = False
    mock_radius: int = 1
    include_baseline: bool = True
    remote_timeout: float = 30.0
    remote_retries: int = 3

    def validate(self) -> None:
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}; expected one of {BACKENDS}")
        if self.backend == "remote" and not self.endpoint:
            raise ConfigError("remote backend requires an endpoint")
        if not self.strategies:
            raise ConfigError("at least one strategy is required")
        if not (0.0 < self.match_threshold <= 1.0):
            raise ConfigError(f"match_threshold must be in (0, 1], got {self.match_threshold}")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        labels = [s.label for s in self.strategies]
        if len(labels) != len(set(labels)):
            raise ConfigError("duplicate strategy rows in config")


@dataclass(frozen=True)
class FallbackRecord:
    image_id: str
    strategy: str
    instance_id: int
    reason: str

    def to_json(self) -> dict:
        return {
            "image_id": self.image_id,
            "strategy": self.strategy,
            "instance_id": self.instance_id,
            "reason": self.reason,
        }


@dataclass
class StrategyResult:
    label: str
    spec: StrategySpec | None  # None for the baseline row
    report: MetricsReport


@dataclass
class ExperimentResult:
    rows: list[StrategyResult]
    n_scenes: int
    ingest_skips: list[SkipRecord]
    scene_skips: list[SkipRecord]
    fallbacks: list[FallbackRecord]


@dataclass
class _SceneOutcome:
    """Everything one worker produced for one scene."""

    image_id: str
    scores: dict[str, SceneScore] = field(default_factory=dict)
    skips: list[SkipRecord] = field(default_factory=list)
    fallbacks: list[FallbackRecord] = field(default_factory=list)
    overlays: "list[tuple[str, list[Prompt], BinaryMask]]" = field(default_factory=list)


def _make_backend(cfg: ExperimentConfig, scene_gt: list[InstanceMask],
                  scene_pred: list[InstanceMask], remote: Segmenter | None) -> Segmenter:
    if cfg.backend == "oracle":
        return OracleSegmenter(scene_gt)
    if cfg.backend == "dilating_mock":
        return DilatingMockSegmenter(scene_gt, radius=cfg.mock_radius)
    if cfg.backend == "passthrough":
        return PassthroughSegmenter(scene_pred)
    assert remote is not None
    return remote


def _score_strategy(
    scene: SceneRecord,
    spec: StrategySpec,
    label: str,
    backend: Segmenter,
    pred_instances: list[InstanceMask],
    gt_instances: list[InstanceMask],
    threshold: float,
    outcome: _SceneOutcome,
    collect_overlay: bool,
) -> None:
    shape = scene.pred_mask.shape
    scene_prompts: list[Prompt] = []
    refined: list[InstanceMask] = []
    masks = []
    for inst in pred_instances:
        prompt = prompts.generate(inst, scene.pred_mask, spec, image_id=scene.image_id)
        if spec.wants_negatives and not prompt.negative_points:
            outcome.fallbacks.append(
                FallbackRecord(scene.image_id, label, inst.instance_id, "empty candidate region")
            )
        scene_prompts.append(prompt)
        response = backend.segment(SegmenterRequest(scene.image, prompt, scene.image_id))
        masks.append(response.mask)
        if response.mask.any():
            refined.append(InstanceMask.from_mask(response.mask, instance_id=inst.instance_id))
    merged = metrics.merge_instance_outputs(masks, shape=shape)
    outcome.scores[label] = SceneScore(
        image_id=scene.image_id,
        counts=metrics.pixel_confusion(merged, scene.gt_mask),
        matches=metrics.match_instances(refined, gt_instances, threshold),
    )
    if collect_overlay:
        outcome.overlays.append((label, scene_prompts, merged))


def _score_scene(scene: SceneRecord, cfg: ExperimentConfig, remote: Segmenter | None) -> _SceneOutcome:
    outcome = _SceneOutcome(image_id=scene.image_id)
    pred_instances = raster.label_components(scene.pred_mask)
    gt_instances = raster.label_components(scene.gt_mask)
    backend = _make_backend(cfg, gt_instances, pred_instances, remote)

    rows: list[tuple[str, StrategySpec, Segmenter]] = [
        (spec.label, spec, backend) for spec in cfg.strategies
    ]
    if cfg.include_baseline:
        baseline_spec = StrategySpec(prompts.StrategyKind.SINGLE_POINT, seed=cfg.seed)
        rows.append((BASELINE_LABEL, baseline_spec, PassthroughSegmenter(pred_instances)))

    for label, spec, row_backend in rows:
        try:
            _score_strategy(
                scene, spec, label, row_backend, pred_instances, gt_instances,
                cfg.match_threshold, outcome, cfg.emit_overlays,
            )
        except (BackendUnavailable, ProtocolError) as exc:
            LOGGER.warning("scene %s / %s aborted: %s", scene.image_id, label, exc)
            outcome.skips.append(SkipRecord(scene.image_id, f"segment:{label}", str(exc)))
    return outcome


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute the full grid. Deterministic for the oracle/mock backends."""
    cfg.validate()
    scenes, ingest_skips = ingest(cfg.data_root)

    remote = None
    if cfg.backend == "remote":
        from promptseg.remote import RemoteSegmenter

        remote = RemoteSegmenter(
            cfg.endpoint, timeout=cfg.remote_timeout, retries=cfg.remote_retries
        )
        remote.health()  # fail fast before touching any scene

    if cfg.parallelism == 1:
        outcomes = [_score_scene(s, cfg, remote) for s in scenes]
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            outcomes = list(pool.map(lambda s: _score_scene(s, cfg, remote), scenes))

    if cfg.emit_overlays:
        from promptseg.overlay import render_overlay, overlay_path

        for scene, outcome in zip(scenes, outcomes):
            for label, scene_prompts, merged in outcome.overlays:
                render_overlay(
                    scene, scene_prompts, merged,
                    overlay_path(Path(cfg.out_dir), scene.image_id, label),
                )

    labels = [spec.label for spec in cfg.strategies]
    if cfg.include_baseline:
        labels.append(BASELINE_LABEL)
    rows = []
    for label in labels:
        spec = next((s for s in cfg.strategies if s.label == label), None)
        scored = [o.scores[label] for o in outcomes if label in o.scores]
        if not scored:
            LOGGER.warning("strategy %s has no scored scenes", label)
            continue
        rows.append(StrategyResult(label, spec, metrics.build_report(scored)))

    scene_skips = [skip for o in outcomes for skip in o.skips]
    fallbacks = [fb for o in outcomes for fb in o.fallbacks]
    return ExperimentResult(
        rows=rows,
        n_scenes=len(scenes),
        ingest_skips=ingest_skips,
        scene_skips=scene_skips,
        fallbacks=fallbacks,
    )
