"""Grow a wreath tower level by level and report sizes, label counts,
multiplicities and the timing of each verification."""

import argparse
import time

from wreathschemes.products import class_one
from wreathschemes.tower import Tower, limit_labels, verify_idempotent_chain, verify_projective_system


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--v", type=int, nargs="+", default=[2], help="class-one factor sizes, last one repeats")
    ap.add_argument("--depth", type=int, default=6)
    args = ap.parse_args()

    t = Tower([class_one(v) for v in args.v], repeat=True)
    print(f"{'depth':>5} {'points':>7} {'#I':>4} {'#J':>4}  multiplicities")
    for n in range(1, args.depth + 1):
        s = t.truncation(n)
        dec = t.decomposition(n)
        i_labels, j_labels = limit_labels(t, n)
        assert len(i_labels) == s.num_relations and len(j_labels) == len(dec)
        print(f"{n:>5} {s.size:>7} {s.num_relations:>4} {len(dec):>4}  {list(dec.multiplicities)}")
    print("J labels:", " ".join(map(str, limit_labels(t, args.depth)[1])))

    start = time.perf_counter()
    proj = verify_projective_system(t, args.depth)
    print(f"projective system: {proj.ok} ({time.perf_counter() - start:.2f}s)")
    start = time.perf_counter()
    chain = verify_idempotent_chain(t, args.depth)
    print(f"idempotent chain:  {chain.ok} ({time.perf_counter() - start:.2f}s)")


if __name__ == "__main__":
    main()
