"""Find Deng-Li moduli with n prime factors and check each one.

    python3 demos/dengli_family.py [n] [bound]
"""
import sys

from padic_k2.dengli import dengli_report, dengli_search


def main(n, bound):
    ms = dengli_search(n, bound)
    print(f"n={n}, m <= {bound}: {ms}")
    for m in ms:
        rep = dengli_report(m)
        w = rep.relation_witness
        print(f"m={m} primes={rep.primes} h={rep.h} v2(T)={rep.vT} #K2[2^oo]=2^{rep.vK2} "
              f"witness=({w.u}, {w.v}) norm={w.norm} via {w.method}")


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:]]
    main(*(args + [4, 30000][len(args):]))
