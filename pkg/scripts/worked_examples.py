"""Walk through the worked examples: decomposition of (1, ε), the prime
ideal of (e1, e2), the √2 point separated only in the Riesz topology, the
√2 triple and its reduction, and the appendix counterexample."""

from __future__ import annotations

import argparse

from nonstd_cones import SQRT2, Dialect, EpsSeries, Index, index_of, parse, reduce, separating_form
from nonstd_cones.appendix import appendix_suite
from nonstd_cones.indexes import lgroup_specializes, orthogonal_decomposition, rational_envelope, riesz_specializes
from nonstd_cones.spectrum import vanishes_on_cone, vcone_in_variety

E = EpsSeries.eps


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=8, help="check t_n for n = 1..n_max")
    args = ap.parse_args(argv)

    print("== (1, e)")
    for line in orthogonal_decomposition([1, E(1)]).lines():
        print("  ", line)
    v = Index.of([(1, 0), (0, 1)])
    for n in range(1, args.n_max + 1):
        t = parse(f"0 /\\ x0 /\\ x1 /\\ (x0 - {n}*x1)", 2, Dialect.LGROUP)
        cone = vcone_in_variety(t, v, Dialect.LGROUP)
        print(f"   t_{n}: member={vanishes_on_cone(t, v, Dialect.LGROUP)} v-cone radii={cone.radii if cone else None}")

    print("== (1, th + e) against (1, th) over Q(sqrt 2)")
    th = SQRT2.gen()
    x = [EpsSeries.const(1), EpsSeries.const(th) + E(1)]
    y = [1, th]
    print("   index of x:", index_of(x))
    print("   riesz closure contains x:", riesz_specializes(x, y))
    print("   l-group closure contains x:", lgroup_specializes(x, y))
    print("   riesz witness:", separating_form(x, y, Dialect.RIESZ))
    print("   env<(1, th)> dimension:", rational_envelope([(1, th)], 2).dim)

    print("== the sqrt 2 triple")
    w = Index.of([(1, th, 0), (th, -1, 1), (-th, 1, 3)])
    print("   ", w, "->", reduce(w))

    print("== appendix counterexample")
    for n in (2, 3, 4):
        rep = appendix_suite(n, 16)
        print(f"   n={n}: {'ok' if rep.ok else 'FAILED'} ({len(rep.terms)} terms)")


if __name__ == "__main__":
    main()
