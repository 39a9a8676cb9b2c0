"""Formula against brute force for every built-in fan, with timings."""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from torzeta import gfan, heightzeta, oracle
from torzeta.cli import _oracle_counts


@dataclass
class Config:
    n_max: int = 4
    qs: tuple[int, ...] = (2, 3)


def main(cfg: Config) -> bool:
    all_ok = True
    for q in cfg.qs:
        for name in sorted(gfan.BUILTIN):
            f = gfan.builtin(name, q)
            n = cfg.n_max
            if f.e > 1:
                n = min(n, 3 if f.q ** f.e > 4 else 4)
            if f.rank == 3:
                n = min(n, 3)
            if f.q ** f.e > 16:
                continue
            t0 = time.time()
            formula = heightzeta.zeta_coeffs(f, n)
            method, batch = _oracle_counts(f, n)
            ok = formula == batch.counts
            all_ok &= ok
            print(f"F{q} {name:16s} n={n} {method:9s} {'ok ' if ok else 'BAD'} "
                  f"{formula} ({time.time() - t0:.1f}s)")
    return all_ok


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--nmax", type=int, default=Config.n_max)
    p.add_argument("--q", type=int, nargs="*", default=list(Config.qs))
    a = p.parse_args()
    raise SystemExit(0 if main(Config(a.nmax, tuple(a.q))) else 1)
