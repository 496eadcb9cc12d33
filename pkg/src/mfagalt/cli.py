"""Command line front-end: ``mfagalt analyze <config.yaml>``."""
from __future__ import annotations

import argparse
import logging
import os
import shutil
import sys
import tempfile
from pathlib import Path

import numpy as np

from .config import load_config
from .errors import GaltError
from .pipeline import run_analysis

logger = logging.getLogger("mfagalt")

EXIT_CODES = {"config": 2, "io": 3, "degenerate-data": 4, "numerical": 5}


def write_outputs(files: dict[str, str], out_dir: Path) -> None:
    """Write every file to a temporary folder first, then move them in place."""
    out_dir.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".mfagalt-", dir=out_dir))
    try:
        for name, content in files.items():
            with open(tmp / name, "w", encoding="utf-8", newline="") as fh:
                fh.write(content)
        for name in files:
            os.replace(tmp / name, out_dir / name)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def _fail(category: str, message: str) -> int:
    one_line = " ".join(str(message).split()).replace('"', "'")
    print(f'error code={category} message="{one_line}"', file=sys.stderr)
    return EXIT_CODES[category]


def analyze(args) -> int:
    try:
        cfg = load_config(args.config, dims=args.dims, seed=args.seed, output=args.out)
        logger.info("%s on %d sample(s)", cfg.mode, len(cfg.samples))
        files = run_analysis(cfg, plots_enabled=args.plots)
        write_outputs(files, cfg.output)
    except GaltError as exc:
        return _fail(exc.category, exc)
    except OSError as exc:
        return _fail("io", exc)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("numerical", exc)
    logger.info("wrote %d files to %s", len(files), cfg.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfagalt", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", help="run CA-GALT (one sample) or MFA-GALT (several samples)")
    p.add_argument("config", help="YAML run configuration")
    p.add_argument("--plots", action="store_true", help="also write SVG maps of the first plane")
    p.add_argument("--dims", type=int, default=None, help="number of axes to keep")
    p.add_argument("--seed", type=int, default=None, help="seed of the permutation tests")
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
