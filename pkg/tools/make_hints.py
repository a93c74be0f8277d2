#!/usr/bin/env python3
"""Regenerate the bundled chain hint file.

Runs the chain search over a prime range with the default (rho only)
budget, hands every cofactor that blocked an unresolved prime to an
external factorizer (sympy's factorint, which includes ECM) and records
the split as an ``n factor`` line. Repeats until nothing is left or no
progress is made. sympy is only needed for this script.
"""
import argparse
import sys

import sympy

from siftbound import factor
from siftbound.application.chains import exclude_prime, verify_range


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=7)
    ap.add_argument("--hi", type=int, default=100000)
    ap.add_argument("--out", default="src/siftbound/data/chain_hints.txt")
    ap.add_argument("--rounds", type=int, default=10)
    args = ap.parse_args()

    lines = []
    try:
        factor.load_hints(args.out)
        with open(args.out) as fh:
            lines = [ln.rstrip("\n") for ln in fh if ln.strip() and not ln.startswith("#")]
    except FileNotFoundError:
        pass
    todo = verify_range(args.lo, args.hi)["unresolved"]
    for rnd in range(args.rounds):
        print(f"round {rnd}: {len(todo)} unresolved", file=sys.stderr)
        if not todo:
            break
        new = 0
        for p in todo:
            cert = exclude_prime(p)
            for st in cert.steps:
                c = st.factorization.cofactor
                if c == 1:
                    continue
                fs = sorted(sympy.factorint(c))
                if len(fs) > 1 or fs[0] != c:
                    lines.append(f"{c} {fs[0]}")
                    factor._HINTS.setdefault(c, []).append(int(fs[0]))
                    new += 1
        todo = [p for p in todo if exclude_prime(p).status != "excluded"]
        if not new:
            break
    with open(args.out, "w") as fh:
        fh.write("# n factor: splits found with an external factorizer (sympy ECM)\n")
        for ln in sorted(set(lines), key=lambda s: int(s.split()[0])):
            fh.write(ln + "\n")
    print(f"left unresolved: {todo}", file=sys.stderr)


if __name__ == "__main__":
    main()
