"""Growth of N(n) q^-n by residue class, comparing Picard ranks 1 and 2.

For rank r the counts grow like q^n n^(r-1) up to a periodic factor whose
period is reported by heightzeta.growth_period.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from torzeta import gfan, heightzeta


@dataclass
class Config:
    fans: list[str] = field(default_factory=lambda: ["P1", "P2", "P1xP1", "BlP2"])
    q: int = 2
    n_max: int = 18


def main(cfg: Config) -> None:
    for name in cfg.fans:
        f = gfan.builtin(name, cfg.q)
        N = heightzeta.zeta_coeffs(f, cfg.n_max, enforce_cap=False)
        r = [Fraction(x, cfg.q**n) for n, x in enumerate(N)]
        p = heightzeta.growth_period(f)
        rank = gfan.picard(f).pic_rank
        print(f"{name}: Picard rank {rank}, period {p}")
        for c in range(p):
            seq = [(n, r[n]) for n in range(p, cfg.n_max + 1) if n % p == c]
            print(f"  n = {c} mod {p}: " + "  ".join(f"{n}:{float(v):.4f}" for n, v in seq))
        print()


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fans", nargs="*", default=Config().fans)
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--nmax", type=int, default=Config.n_max)
    a = ap.parse_args()
    main(Config(a.fans, a.q, a.nmax))
