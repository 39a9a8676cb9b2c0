"""Command line front end.

    torzeta analyze  --fan FILE
    torzeta zeta     --fan FILE --nmax N
    torzeta constant --fan FILE --nmax N --cutoff D
    torzeta verify   --fan FILE --nmax N

Output is JSON on stdout (and in --out when given).  Exit status: 0 ok,
1 formula/oracle mismatch, 2 invalid fan or malformed JSON, 3 input outside
the supported scope (including n_max > 8).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import conegf, gcoh, gfan, heightzeta, oracle
from .gfan import FanError, ScopeError

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_SCOPE = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    fan: Path
    n_max: int
    cutoff: int
    q: int | None
    out: Path | None
    quiet: bool


def analyze(f: gfan.GFan) -> dict[str, Any]:
    pd = gfan.picard(f)
    orbs = gfan.orbits(f)
    try:
        alpha = conegf.xi_alpha(pd)
        alpha_s = f"{alpha.numerator}/{alpha.denominator}"
    except conegf.ConeError as exc:
        raise ScopeError(str(exc)) from None
    return {
        "name": f.name,
        "valid": True,
        "rank": f.rank,
        "q": f.q,
        "e": f.e,
        "orbits": [list(o.rays) for o in orbs],
        "d_alpha": [o.d_alpha for o in orbs],
        "pic_rank": pd.pic_rank,
        "anticanonical_class": list(pd.anticanonical_class),
        "effective_cone": [list(c) for c in pd.effective_cone_gens],
        "alpha_star": alpha_s,
        "beta": gcoh.beta(f),
        "h1_gxt": {"order": int(pd.h1_gxt.order), "structure": str(pd.h1_gxt)},
        "C_T_order": int(pd.ct_order),
        "torus_points": heightzeta.torus_points(f),
    }


def _oracle_counts(f: gfan.GFan, n: int) -> tuple[str, oracle.PointBatch]:
    if f.e == 1:
        return "split", oracle.enumerate_split(f, n)
    try:
        oracle.res_basis(f)
    except ScopeError:
        return "invariant", oracle.enumerate_invariant(f, n)
    return "res_torus", oracle.enumerate_res_torus(f, n)


def run(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    f = gfan.load_fan(cfg.fan)
    if cfg.q is not None:
        f = f.with_q(cfg.q)
        diags = gfan.validate(f)
        if diags:
            raise FanError(diags)
    if cfg.command == "analyze":
        return EXIT_OK, analyze(f)
    heightzeta.check_scope(f, cfg.n_max)
    if cfg.command == "zeta":
        return EXIT_OK, heightzeta.zeta_report(f, cfg.n_max).to_dict()
    if cfg.command == "constant":
        rep = heightzeta.peyre_constant(f, cfg.cutoff, n_max=cfg.n_max)
        return EXIT_OK, rep.to_dict()
    if cfg.command == "verify":
        formula = heightzeta.zeta_coeffs(f, cfg.n_max)
        method, batch = _oracle_counts(f, cfg.n_max)
        diff = next((n for n, (a, b) in enumerate(zip(formula, batch.counts)) if a != b), None)
        out = {"formula": formula, "oracle": batch.counts, "oracle_method": method,
               "degree_bound": batch.degree_bound, "agree": diff is None}
        if diff is not None:
            out["first_mismatch"] = {"n": diff, "formula": formula[diff], "oracle": batch.counts[diff]}
            return EXIT_MISMATCH, out
        return EXIT_OK, out
    raise ValueError(f"unknown command {cfg.command}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torzeta", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, nmax_default in (("analyze", 0), ("zeta", 4), ("constant", 4), ("verify", 3)):
        s = sub.add_parser(name)
        s.add_argument("--fan", required=True, type=Path)
        s.add_argument("--nmax", type=int, default=nmax_default)
        s.add_argument("--cutoff", type=int, default=10)
        s.add_argument("--q", type=int, default=None)
        s.add_argument("--out", type=Path, default=None)
        s.add_argument("--quiet", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.fan, args.nmax, args.cutoff, args.q, args.out, args.quiet)
    try:
        code, payload = run(cfg)
    except FanError as exc:
        print(f"invalid fan: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ScopeError as exc:
        print(f"out of scope: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    text = json.dumps(payload, indent=2)
    if cfg.out is not None:
        cfg.out.write_text(text + "\n")
    if not cfg.quiet:
        print(text)
    if code == EXIT_MISMATCH:
        m = payload["first_mismatch"]
        print(f"mismatch at n = {m['n']}: formula {m['formula']} vs oracle {m['oracle']}",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
