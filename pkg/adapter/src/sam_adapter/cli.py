"""Command line: load a checkpoint and serve the wire protocol.

    sam-adapter --model vit_h --checkpoint sam_vit_h.pth --device cuda --port 8765

`--model stub` serves the box-rasterizing test model (no torch needed).
"""

from __future__ import annotations

import argparse
import logging
import sys

from sam_adapter.service import AdapterConfig, AdapterServer, build_app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sam-adapter", description=__doc__)
    parser.add_argument("--model", default="vit_h", choices=["vit_b", "vit_l", "vit_h", "stub"])
    parser.add_argument("--checkpoint", default="", help="model checkpoint path")
    parser.add_argument("--device", default="cuda")
    parser.add_argument("--port", type=int, default=8765)
    parser.add_argument("--host", default="0.0.0.0")
    parser.add_argument("--no-cache", action="store_true", help="disable the embedding cache")
    parser.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level))
    config = AdapterConfig(
        model_variant=args.model,
        checkpoint_path=args.checkpoint,
        device=args.device,
        port=args.port,
        cache_enabled=not args.no_cache,
    )
    try:
        config.validate()
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    app, loader = build_app(config)
    loader.start()
    server = AdapterServer(app, host=args.host, port=config.port)
    print(f"serving on {server.url} (503 until the model is loaded)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
