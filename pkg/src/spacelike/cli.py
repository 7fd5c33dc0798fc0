"""Command-line entry point: ``spacelike <command> --config <path>``."""

import argparse
import sys

from .config import COMMANDS, FORMATS, parse_config
from .errors import ConfigError
from .report import encode, make_record
from .runner import run


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spacelike", description="Numerical checks for space-like graphs.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="key=value config file")
    p.add_argument("--out", help="write records here instead of stdout")
    p.add_argument("--format", choices=FORMATS, help="record encoding (default: config or json-lines)")
    p.add_argument("--seed", type=int, help="override the config seed")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"spacelike: cannot read config: {exc}", file=sys.stderr)
        return 2
    fmt = args.format or "json-lines"
    try:
        cfg = parse_config(text)
        if args.seed is not None:
            cfg.seed = args.seed
        fmt = args.format or cfg.output_format
        status, records = run(cfg, args.command)
    except ConfigError as exc:
        print(f"spacelike: {exc}", file=sys.stderr)
        records = [make_record("config", args.command, passed=False, error=exc.kind, note=str(exc),
                               seed=args.seed or 0)]
        status = 2
    out = args.out or (cfg.output_path if status != 2 else None)
    data = encode(records, fmt)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)
    return status


if __name__ == "__main__":
    sys.exit(main())
