#!/usr/bin/env python3
"""Exact fields, dense matrices, and the normalized rank metric.

Everything below is exact: rationals are arbitrary-precision fractions,
Gaussian rationals are pairs of them, and prime fields reduce canonically.
Rank is computed by fraction-free elimination, so the values printed here
are theorems about the inputs, not numerical estimates.
"""

from fractions import Fraction

from rankstability import (
    GF,
    QQ,
    QQI,
    DenseMatrix,
    flexible_distance,
    modular_rank_certificate,
    strict_distance,
)


def main():
    print("== exact rank over three scalar domains ==")
    ones = DenseMatrix(QQ, [[1] * 4 for _ in range(4)])
    print("rank of the 4x4 all-ones matrix over Q:", ones.rank())

    m7 = DenseMatrix(GF(7), [[1, 2, 3], [2, 4, 6], [3, 6, 2]])
    print("rank over GF(7) (third row independent):", m7.rank())

    gm = DenseMatrix(QQI, [[(0, 1), (1, 0)], [(1, 0), (0, -1)]])
    print("rank over Q(i) of [[i, 1], [1, -i]]:", gm.rank(), "(second row = -i * first)")

    print()
    print("== modular certificates bound rational rank from below ==")
    diag = DenseMatrix.diagonal(QQ, [6, 1])
    print("diag(6, 1): true rank", diag.rank())
    print("  certificate from primes {2, 3} (both divide 6):",
          modular_rank_certificate(diag, [2, 3]))
    print("  certificate from prime {5}:", modular_rank_certificate(diag, [5]))

    print()
    print("== strict vs flexible distance ==")
    i4, i5 = DenseMatrix.identity(QQ, 4), DenseMatrix.identity(QQ, 5)
    perturbed = i4 + DenseMatrix.elementary(QQ, 4, 4, 0, 1)
    print("strict distance I_4 -> I_4 + E_12:", strict_distance(i4, perturbed))
    print("flexible distance I_4 -> I_5 (corner embedding):", flexible_distance(i4, i5))
    i2, i6 = DenseMatrix.identity(QQ, 2), DenseMatrix.identity(QQ, 6)
    d = flexible_distance(i2, i6)
    print("flexible distance I_2 -> I_6:", d,
          "(exceeds 1: the dimension gap dominates)")

    print()
    print("== the distance is exact, so hairline differences register ==")
    a = DenseMatrix(QQ, [[Fraction(1, 3), 0], [0, 1]])
    b = DenseMatrix(QQ, [[Fraction(33333, 100000), 0], [0, 1]])
    print("rk(a - b) with entries 1/3 vs 0.33333:", strict_distance(a, b))


if __name__ == "__main__":
    main()
