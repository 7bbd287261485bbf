#!/usr/bin/env python3
"""Prepend the SPDX license header to C++ sources that lack it."""
import argparse
import pathlib

DIRS = ("core", "tools", "tests", "benchmarks")
SUFFIXES = {".hpp", ".cpp", ".h", ".cc"}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("header", type=pathlib.Path)
    ap.add_argument("--root", type=pathlib.Path, default=pathlib.Path(__file__).resolve().parent.parent)
    args = ap.parse_args()
    header = args.header.read_text()
    if not header.endswith("\n"):
        header += "\n"
    marker = header.splitlines()[0]
    changed = 0
    for d in DIRS:
        for path in sorted((args.root / d).rglob("*")):
            if path.suffix not in SUFFIXES or not path.is_file():
                continue
            text = path.read_text()
            if text.startswith(marker):
                continue
            path.write_text(header + "\n" + text)
            changed += 1
    print(f"headers added: {changed}")


if __name__ == "__main__":
    main()
