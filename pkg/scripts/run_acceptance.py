"""Run the acceptance criteria and print one line per criterion."""

from __future__ import annotations

import argparse
import json

from nonstd_cones.acceptance import AcceptanceConfig, run_all


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=AcceptanceConfig.seed)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rep = run_all(AcceptanceConfig(seed=args.seed))
    if args.json:
        print(json.dumps(rep.to_json(), indent=2))
    else:
        for r in rep.results:
            print(r.line() + f" ({r.seconds:.1f}s)")
    return rep.ok


if __name__ == "__main__":
    raise SystemExit(0 if main() else 1)
