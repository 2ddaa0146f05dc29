#!/usr/bin/env python3
"""
Script to run one polarisation pipeline on a bundle spec file.

Example:
    python scripts/polarise.py lin --input tests/fixtures/f3.spec
"""
import argparse
import sys
from typing import List, Optional

from src.cli.commands import COMMANDS, EXIT_USAGE, run
from src.cli.config import SamplingConfig


def build_parser() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
  parser.add_argument("command", choices=list(COMMANDS))
  parser.add_argument("--input", required=True, help="Bundle spec file")
  parser.add_argument("--output", help="Write the report to this file")
  parser.add_argument("--format", choices=["text", "machine"], default="text")
  parser.add_argument("--seed", type=int)
  parser.add_argument("--samples", type=int)
  parser.add_argument("--degree-cap", type=int)
  parser.add_argument("--g", help="Permutation as a 1-based image list, e.g. 2,1,3")
  parser.add_argument("--leg", choices=["A", "B"], default="A")
  return parser


def read_input(path: str) -> str:
  """
  Read a spec file.

  Args:
      path (str): File to read

  Returns:
      str: File contents

  Raises:
      Exception: If the file cannot be read
  """
  try:
    with open(path, 'r', encoding='utf-8') as f:
      return f.read()
  except OSError as e:
    raise Exception(f"Error reading {path}: {str(e)}")


def main(argv: Optional[List[str]] = None) -> int:
  """Main function to run a command and print or save its report."""
  try:
    args = build_parser().parse_args(argv)
  except SystemExit as e:
    return EXIT_USAGE if e.code else 0

  try:
    text = read_input(args.input)
    config = SamplingConfig(args.seed, args.samples, args.degree_cap)
  except Exception as e:
    print(str(e), file=sys.stderr)
    return EXIT_USAGE

  report, code = run(args.command, text, config, g=args.g, leg=args.leg)
  rendered = report.render(args.format)

  if args.output:
    with open(args.output, 'w', encoding='utf-8') as f:
      f.write(rendered)
    failed = sum(1 for check in report.checks if not check.passed)
    print("\n" + "=" * 50)
    print(f"{args.command}: {len(report.checks) - failed} checks passed, {failed} failed")
    print(f"Report saved to {args.output}")
    print("=" * 50)
  else:
    sys.stdout.write(rendered)
  return code


if __name__ == "__main__":
  sys.exit(main())
