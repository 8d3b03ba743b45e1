"""Export the 2->4 achievable region for both kernels and report its size."""

import argparse
import csv
from dataclasses import dataclass
from pathlib import Path

from clonetrade import casestudy24 as cs


@dataclass
class Config:
    grid: int = 30
    resolution: int = 240
    out_dir: Path = Path("region_out")


def main(cfg: Config) -> dict:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    summary = {}
    for kernel in cs.KERNELS:
        rows = list(cs.region_grid(cfg.grid, kernel, cfg.resolution))
        path = cfg.out_dir / f"region_{kernel}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["F_1100", "F_1010", "F_0110", "member", "class"])
            for a, b, c, m, k in rows:
                w.writerow([a, b, c, "true" if m else "false", "" if k is None else k])
        counts = {cls: sum(1 for r in rows if r[4] == cls) for cls in (1, 2)}
        summary[kernel] = {"members": sum(r[3] for r in rows), "total": len(rows), **counts}
        print(f"{kernel}: symmetric optimum {cs.symmetric_optimum(kernel)}, {summary[kernel]} -> {path}")
    return summary


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--grid", type=int, default=Config.grid)
    p.add_argument("--out-dir", type=Path, default=Config.out_dir)
    a = p.parse_args()
    main(Config(grid=a.grid, out_dir=a.out_dir))
