"""Compare the closed-form symmetric fidelity with the literature formula."""

import argparse
from dataclasses import dataclass

from clonetrade import tradeoff


@dataclass
class Config:
    d_values: tuple = (2, 3, 4)
    max_N: int = 6


def main(cfg: Config) -> list:
    rows = []
    for d in cfg.d_values:
        for N in range(2, cfg.max_N + 1):
            for M in range(1, N):
                for L in range(1, N + 1):
                    f = tradeoff.symmetric_fidelity(M, L, N, d)
                    w = tradeoff.wang_formula(M, L, N, d)
                    rows.append((M, L, N, d, f, w))
    bad = [r for r in rows if r[4] != r[5]]
    print(f"{len(rows)} cases, {len(bad)} disagreements")
    for M, L, N, d, f, w in bad:
        print(f"  M={M} L={L} N={N} d={d}: closed form {f}, literature {w}")
    return rows


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-N", type=int, default=Config.max_N)
    a = p.parse_args()
    main(Config(max_N=a.max_N))
