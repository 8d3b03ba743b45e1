"""Check dense-oracle optima of 1->N cloners against the trade-off relation."""

import argparse
from dataclasses import dataclass

from clonetrade import tradeoff
from clonetrade.acceptance import oracle_tradeoff_points


@dataclass
class Config:
    N: int = 3
    d_values: tuple = (2, 3)
    samples: int = 100


def main(cfg: Config) -> dict:
    worst = {}
    for d in cfg.d_values:
        res = [abs(tradeoff.tradeoff_relation_residual(F, d)) for F in oracle_tradeoff_points(cfg.N, d, cfg.samples, seed_offset=100 + d)]
        worst[d] = max(res)
        print(f"N={cfg.N} d={d}: {cfg.samples} oracle optima, max residual {worst[d]:.3e}")
    return worst


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--N", type=int, default=Config.N)
    p.add_argument("--samples", type=int, default=Config.samples)
    a = p.parse_args()
    main(Config(N=a.N, samples=a.samples))
