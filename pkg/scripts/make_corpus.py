#!/usr/bin/env python3
"""Regenerate the shipped benchmark corpus (50 instances, 10 per problem).

Deterministic: running this twice produces byte-identical files.  Sizes
stay inside the brute-force guards so bench can always attach oracle
ratios.
"""

import argparse
from pathlib import Path

from mstage.generator import generate_instance
from mstage.instance_io import serialize_instance

SPECS = [
    # (problem, n, T, volatility)
    ("mincut", 5, 3, 0.3),
    ("mincut", 6, 2, 0.5),
    ("vertexcover", 5, 3, 0.3),
    ("vertexcover", 6, 2, 0.5),
    ("setcover", 5, 3, 0.3),
    ("setcover", 6, 2, 0.5),
    ("pcst", 5, 3, 0.3),
    ("pcst", 4, 2, 0.6),
    ("pctsp", 5, 3, 0.3),
    ("pctsp", 4, 2, 0.6),
]
SEEDS_PER_SPEC = 5


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "corpus"))
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    for problem, n, T, vol in SPECS:
        for seed in range(SEEDS_PER_SPEC):
            inst = generate_instance(problem, n, T, seed=seed, volatility=vol)
            name = f"{inst.id}-v{vol}".replace(".", "_") + ".json"
            (out / name).write_text(serialize_instance(inst) + "\n", encoding="utf-8")
            count += 1
    print(f"wrote {count} instances to {out}")


if __name__ == "__main__":
    main()
