#!/usr/bin/env python3
"""Download the four UCI benchmark tables and store them as CSV.

    python scripts/fetch_datasets.py [--dest data]

Breast Tissue ships as .xls; converting it needs pandas with an Excel
reader (xlrd). The other three need only the standard library.
"""

import argparse
import io
import sys
import urllib.request
from pathlib import Path

from curvsel.benchmarks import BENCHMARKS, arff_to_csv, records_to_csv


def fetch(url: str) -> bytes:
    with urllib.request.urlopen(url, timeout=60) as resp:
        return resp.read()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default="data")
    ap.add_argument("--only", nargs="*", choices=sorted(BENCHMARKS))
    args = ap.parse_args(argv)
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)

    for key in args.only or BENCHMARKS:
        info = BENCHMARKS[key]
        print(f"{key}: {info.url}", file=sys.stderr)
        payload = fetch(info.url)
        if info.url.endswith(".arff"):
            text = arff_to_csv(payload.decode("utf-8"))
        elif info.url.endswith(".xls"):
            import pandas as pd

            frame = pd.read_excel(io.BytesIO(payload), sheet_name="Data")
            text = records_to_csv(list(frame.columns), frame.itertuples(index=False), drop=("Case #",))
        else:
            text = payload.decode("utf-8")
        (dest / info.filename).write_text(text, encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
