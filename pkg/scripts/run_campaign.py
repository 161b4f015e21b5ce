#!/usr/bin/env python3
"""Run the full random-LTS validation campaign and print the report.

Equivalent to `bbapart validate --campaign`, with the generator knobs
exposed; useful for longer overnight runs with larger counts.
"""

import argparse
import json
import sys

from bbapart.validate import run_campaign


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--min-states", type=int, default=2)
    parser.add_argument("--max-states", type=int, default=8)
    parser.add_argument("--actions", type=int, default=2)
    parser.add_argument("--vdensity", type=float, default=1.5)
    parser.add_argument("--tdensity", type=float, default=0.7)
    args = parser.parse_args()

    report = run_campaign(
        count=args.count, seed=args.seed,
        min_states=args.min_states, max_states=args.max_states,
        visible_actions=args.actions,
        visible_density=args.vdensity, tau_density=args.tdensity)
    json.dump(report.to_json(), sys.stdout, indent=2)
    print()
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
