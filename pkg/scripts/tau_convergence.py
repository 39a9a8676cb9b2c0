"""Partial products of tau_H against the cutoff degree, with the tail bound."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from torzeta import gfan, heightzeta


@dataclass
class Config:
    fans: list[str] = field(default_factory=lambda: ["P1", "P2", "BlP2", "P1xP1_swap"])
    q: int = 2
    cutoffs: range = range(2, 15)


def main(cfg: Config) -> None:
    for name in cfg.fans:
        f = gfan.builtin(name, cfg.q)
        print(f"{name} over F{cfg.q}(t)")
        print(f"{'D':>3} {'tau_D':>14} {'bound':>10} {'step':>10}")
        prev = None
        for D in cfg.cutoffs:
            try:
                t = heightzeta.tau_h(f, D)
            except ArithmeticError:
                continue
            step = "" if prev is None else f"{abs(t.value - prev):.2e}"
            print(f"{D:>3} {t.value:>14.10f} {t.error_bound:>10.2e} {step:>10}")
            prev = t.value
        print()


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--fans", nargs="*", default=Config().fans)
    p.add_argument("--q", type=int, default=Config.q)
    p.add_argument("--max-cutoff", type=int, default=14)
    a = p.parse_args()
    main(Config(a.fans, a.q, range(2, a.max_cutoff + 1)))
