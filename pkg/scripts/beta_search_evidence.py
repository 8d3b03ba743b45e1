"""Compare class-surface membership with an unrestricted search over beta.

A positive search margin exhibits a cloner the class surfaces must also reach;
a disagreement of that kind would show the two families miss part of the
boundary.  Negative margins are evidence only.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from clonetrade import casestudy24 as cs


@dataclass
class Config:
    points: int = 40
    starts: int = 12
    kernel: str = cs.DEFAULT_KERNEL
    seed: int = 7
    band: float = 1e-3


def main(cfg: Config) -> list:
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for F in rng.uniform(0.3, 0.85, size=(cfg.points, 3)):
        P = cs.PairFidelities(*F)
        member = cs.region_membership(P, kernel=cfg.kernel)
        margin = cs.beta_search(P, cfg.kernel, starts=cfg.starts)["margin"]
        rows.append((tuple(F), member, margin))
    conflicts = [r for r in rows if (r[2] > cfg.band and not r[1]) or (r[2] < -cfg.band and r[1])]
    print(f"{len(rows)} points, {sum(r[1] for r in rows)} members, {len(conflicts)} conflicts outside a {cfg.band} band")
    for F, m, g in conflicts:
        print(f"  F={np.round(F, 4)} member={m} margin={g:.2e}")
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--points", type=int, default=Config.points)
    p.add_argument("--kernel", choices=cs.KERNELS, default=Config.kernel)
    a = p.parse_args()
    main(Config(points=a.points, kernel=a.kernel))
