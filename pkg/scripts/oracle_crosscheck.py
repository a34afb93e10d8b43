"""Cross-check the three prime-ideal membership oracles (symbolic
evaluation at the canonical point, the polyhedral fan, v-cone search) on
random l-group terms and rational indexes.  Prints disagreements."""

from __future__ import annotations

import argparse
import time

from nonstd_cones.indexes import canonical_point
from nonstd_cones.sampling import Sampler
from nonstd_cones.spectrum import fan_vanishes_at, linearity_fan, vanishes_on_cone, vcone_in_variety
from nonstd_cones.terms import Dialect, render


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--terms", type=int, default=50)
    ap.add_argument("--indexes", type=int, default=10)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--m-max", type=int, default=12)
    args = ap.parse_args(argv)

    s = Sampler(seed=args.seed, term_depth=args.depth)
    idx = {n: [s.rational_index(n) for _ in range(args.indexes)] for n in (1, 2, 3)}
    t0 = time.perf_counter()
    stats = {"pairs": 0, "vanishing": 0, "disagreements": 0}
    for k in range(args.terms):
        n = 1 + k % 3
        t = s.term(n, Dialect.LGROUP)
        pieces = linearity_fan(t, n)
        for v in idx[n]:
            a = vanishes_on_cone(t, v, Dialect.LGROUP)
            b = fan_vanishes_at(pieces, canonical_point(v))
            c = vcone_in_variety(t, v, Dialect.LGROUP, args.m_max) is not None
            stats["pairs"] += 1
            stats["vanishing"] += a
            if not a == b == c:
                stats["disagreements"] += 1
                print(f"disagreement: t = {render(t)}, v = {v}: symbolic={a} fan={b} vcone={c}")
    print(stats, f"{time.perf_counter() - t0:.1f}s")
    return stats["disagreements"]


if __name__ == "__main__":
    raise SystemExit(1 if main() else 0)
