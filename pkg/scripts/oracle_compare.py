"""Compare the solver with the brute-force linear-system oracle on small triples."""

from __future__ import annotations

import argparse
import sys
import time

from frobrec.orbifold import new_orbifold
from frobrec.oracle import OracleFailure, oracle_from_seed
from frobrec.reconstruct import reconstruct


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", action="append", default=None)
    ap.add_argument("--max-m", type=int, default=3)
    args = ap.parse_args(argv)
    triples = args.a or ["1,1,1", "1,1,2", "1,2,2", "2,2,2"]
    status = 0
    for s in triples:
        A = new_orbifold(*(int(x) for x in s.split(",")))
        t0 = time.perf_counter()
        try:
            Q = oracle_from_seed(A, args.max_m)
        except OracleFailure as e:
            print(f"{A}: oracle failed: {e}")
            status = 1
            continue
        dt = time.perf_counter() - t0
        P = reconstruct(A, args.max_m)
        same = P == Q
        status |= not same
        print(f"{A}: {'agree' if same else 'DIFFER'}  ({len(P.nonzero())} nonzero, oracle {dt:.1f}s)")
    return status


if __name__ == "__main__":
    sys.exit(main())
