"""Orders of K2 for small real quadratic fields, two ways.

    python3 demos/birch_tate.py [M]

Column "exact" is w2(K) |zeta_K(-1)| from B_{2,chi}; "measure" is the
2- and 3-parts read off from the p-adic L-function at s = -1.
"""
import sys

from padic_k2.arith import is_squarefree
from padic_k2.invariants import FieldDescriptor, birch_tate_exact, k2_valuation


def main(bound):
    print(f"{'m':>5} {'#K2 exact':>10} {'v2':>3} {'v3':>3}   measure v2 v3")
    for m in range(2, bound + 1):
        if not is_squarefree(m):
            continue
        bt = birch_tate_exact(m)
        fd = FieldDescriptor.quadratic(m)
        v2, v3 = k2_valuation(fd, 2), k2_valuation(fd, 3)
        flag = "" if (v2, v3) == (bt.v2, bt.v3) else "  <-- disagree"
        print(f"{m:>5} {str(bt.value):>10} {bt.v2:>3} {bt.v3:>3}   {v2:>10} {v3:>2}{flag}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 40)
