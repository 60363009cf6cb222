"""Command-line interface.

Subcommands:
  run            execute the experiment grid from a JSON config (plus overrides)
  validate-data  lint a dataset layout without running anything
  render         draw a single prompt overlay for one scene
  make-fixtures  write a synthetic fixture dataset

Exit codes: 0 success, 2 config error, 3 empty dataset, 4 backend unavailable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from promptseg import __version__
from promptseg.errors import BackendUnavailable, ConfigError, EmptyDataset
from promptseg.prompts import (
    LABEL_TO_KIND,
    NegativeMode,
    StrategyKind,
    StrategySpec,
    default_grid,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EMPTY = 3
EXIT_BACKEND = 4


def _parse_strategy_name(name: str, seed: int) -> StrategySpec:
    name = name.strip()
    if name in LABEL_TO_KIND:
        return StrategySpec(LABEL_TO_KIND[name], seed=seed)
    try:
        return StrategySpec(StrategyKind(name), seed=seed)
    except ValueError:
        raise ConfigError(
            f"unknown strategy {name!r}; use a grid row label or one of "
            f"{[k.value for k in StrategyKind]}"
        ) from None


def _spec_from_json(entry, seed: int) -> StrategySpec:
    if isinstance(entry, str):
        return _parse_strategy_name(entry, seed)
    if isinstance(entry, dict):
        try:
            kind = _parse_strategy_name(entry["kind"], seed).kind
            mode = entry.get("negative_mode")
            return StrategySpec(
                kind,
                k_points=int(entry.get("k_points", 5)),
                n_negative=int(entry.get("n_negative", 1)),
                negative_mode=NegativeMode(mode) if mode else None,
                seed=int(entry.get("seed", seed)),
            )
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad strategy entry {entry!r}: {exc}") from exc
    raise ConfigError(f"bad strategy entry {entry!r}")


def _load_config(args: argparse.Namespace):
    from promptseg.experiment import ExperimentConfig

    raw: dict = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")

    seed = args.seed if args.seed is not None else int(raw.get("seed", 0))
    if args.strategies:
        strategies = [_parse_strategy_name(s, seed) for s in args.strategies.split(",")]
    elif "strategies" in raw:
        strategies = [_spec_from_json(e, seed) for e in raw["strategies"]]
    else:
        strategies = default_grid(seed=seed)

    data_root = args.data_root or raw.get("data_root")
    if not data_root:
        raise ConfigError("data_root is required (config file or --data-root)")

    try:
        cfg = ExperimentConfig(
            data_root=str(data_root),
            out_dir=str(args.out or raw.get("out_dir", "runs/out")),
            strategies=strategies,
            backend=args.backend or raw.get("backend", "oracle"),
            endpoint=args.endpoint or raw.get("endpoint"),
            match_threshold=float(raw.get("match_threshold", 0.5)),
            seed=seed,
            parallelism=args.parallelism or int(raw.get("parallelism", 1)),
            emit_overlays=args.overlays or bool(raw.get("emit_overlays", False)),
            mock_radius=int(raw.get("mock_radius", 1)),
            include_baseline=bool(raw.get("include_baseline", True)),
            remote_timeout=float(raw.get("remote_timeout", 30.0)),
            remote_retries=int(raw.get("remote_retries", 3)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate()
    return cfg


def _cmd_run(args: argparse.Namespace) -> int:
    from promptseg.experiment import run_experiment
    from promptseg.reports import emit_reports

    cfg = _load_config(args)
    result = run_experiment(cfg)
    if not result.rows:
        print("no strategy produced any scored scene; see skip records", file=sys.stderr)
        return EXIT_BACKEND
    paths = emit_reports(result, cfg, cfg.out_dir)
    for row in result.rows:
        r = row.report
        print(
            f"{row.label}: precision={r.precision:.2f} recall={r.recall:.2f} "
            f"iou={r.iou:.2f} f1={r.f1:.2f} tp_iou={r.tp_iou:.2f} tp_f1={r.tp_f1:.2f}"
        )
    print(f"reports written to {paths[0].parent}")
    if result.scene_skips:
        print(f"warning: {len(result.scene_skips)} scene/strategy skips (see run_meta.json)")
    return EXIT_OK


def _cmd_validate_data(args: argparse.Namespace) -> int:
    from promptseg.ingest import ingest

    scenes, skips = ingest(args.data_root, prompt_only=args.prompt_only)
    print(f"{len(scenes)} usable scene(s), {len(skips)} skipped")
    for skip in skips:
        print(f"  skip {skip.image_id}: {skip.reason}")
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    from promptseg import prompts as prompt_mod
    from promptseg import raster
    from promptseg.ingest import ingest
    from promptseg.metrics import merge_instance_outputs
    from promptseg.overlay import overlay_path, render_overlay

    spec = _parse_strategy_name(args.strategy, args.seed or 0)
    scenes, _ = ingest(args.data_root, prompt_only=True)
    matching = [s for s in scenes if s.image_id == args.scene]
    if not matching:
        raise EmptyDataset(f"scene {args.scene!r} not found under {args.data_root}")
    scene = matching[0]
    instances = raster.label_components(scene.pred_mask)
    scene_prompts = [
        prompt_mod.generate(inst, scene.pred_mask, spec, image_id=scene.image_id)
        for inst in instances
    ]
    masks = [inst.to_mask(scene.pred_mask.shape) for inst in instances]
    merged = merge_instance_outputs(masks, shape=scene.pred_mask.shape)
    path = render_overlay(
        scene, scene_prompts, merged, overlay_path(Path(args.out), scene.image_id, spec.label)
    )
    print(f"overlay written to {path}")
    return EXIT_OK


def _cmd_make_fixtures(args: argparse.Namespace) -> int:
    from promptseg.fixtures import build_fixture_set

    ids = build_fixture_set(
        args.out, n_scenes=args.scenes, size=args.size, seed=args.seed or 7,
        perturb_pred=args.perturb_pred,
    )
    print(f"wrote {len(ids)} fixture scene(s) under {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="promptseg", description=__doc__)
    parser.add_argument("--version", action="version", version=f"promptseg {__version__}")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the experiment grid")
    run.add_argument("--config", help="JSON config file mirroring ExperimentConfig")
    run.add_argument("--data-root", help="dataset root (images/, gt/, pred/)")
    run.add_argument("--out", help="output directory for reports")
    run.add_argument("--backend", choices=["oracle", "dilating_mock", "passthrough", "remote"])
    run.add_argument("--endpoint", help="remote segmenter URL")
    run.add_argument("--seed", type=int)
    run.add_argument("--parallelism", type=int)
    run.add_argument("--strategies", help="comma-separated strategy names or row labels")
    run.add_argument("--overlays", action="store_true", help="emit per-scene overlays")
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate-data", help="lint a dataset layout")
    val.add_argument("--data-root", required=True)
    val.add_argument("--prompt-only", action="store_true", help="do not require gt/")
    val.set_defaults(func=_cmd_validate_data)

    render = sub.add_parser("render", help="render one prompt overlay")
    render.add_argument("--data-root", required=True)
    render.add_argument("--scene", required=True, help="scene stem")
    render.add_argument("--strategy", required=True, help="strategy name or row label")
    render.add_argument("--out", default="runs/out")
    render.add_argument("--seed", type=int)
    render.set_defaults(func=_cmd_render)

    fx = sub.add_parser("make-fixtures", help="write a synthetic fixture dataset")
    fx.add_argument("--out", required=True)
    fx.add_argument("--scenes", type=int, default=20)
    fx.add_argument("--size", type=int, default=96)
    fx.add_argument("--seed", type=int)
    fx.add_argument("--perturb-pred", action="store_true",
                    help="shift pred masks off ground truth")
    fx.set_defaults(func=_cmd_make_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level))
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmptyDataset as exc:
        print(f"empty dataset: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except BackendUnavailable as exc:
        print(f"backend unavailable: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
