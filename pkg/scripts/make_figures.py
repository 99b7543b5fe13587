#!/usr/bin/env python3
"""Regenerate every standard figure dataset as CSV (and the tables as JSON too).

Output lands in ./figdata by default, or in $GRATING_ORDERS_OUTDIR if set.
"""

import os
import sys
from pathlib import Path

from grating_orders.figures import FIGURE_IDS, build_figure, write_dataset


def main() -> int:
    outdir = Path(os.environ.get("GRATING_ORDERS_OUTDIR", "figdata"))
    outdir.mkdir(parents=True, exist_ok=True)
    for fid in FIGURE_IDS:
        dataset = build_figure(fid)
        path = write_dataset(dataset, outdir / f"{fid}.csv", "csv")
        print(f"{path}  ({dataset.rows.shape[0]} rows)")
        if fid == "fig8":
            path = write_dataset(dataset, outdir / f"{fid}.json", "json")
            print(f"{path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
