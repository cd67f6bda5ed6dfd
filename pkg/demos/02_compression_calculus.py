#!/usr/bin/env python3
"""Compressions of matrices onto subspaces and their certified inequalities.

A frame carries a k-dimensional subspace of F^n with a basis and a (not
necessarily orthogonal) projection.  Compressing through it loses rank in a
controlled way, multiplies almost-correctly, and any two equal-dimension
compressions agree after an explicit change of basis, up to rank 4(n-k).
"""

from rankstability import GF, XorShift64Star
from rankstability.compress import (
    align_compressions,
    compress,
    corner_frame,
    random_frame,
    verify_mult_defect,
    verify_rank_lower,
)
from rankstability.prng import random_invertible, random_matrix


def main():
    field = GF(7)
    n, k = 6, 4
    rng = XorShift64Star(2024)

    print(f"== corner frame on GF(7)^{n}, keeping the first {k} coordinates ==")
    m = random_invertible(field, rng, n)
    frame = corner_frame(field, n, k)
    rep = verify_rank_lower(m, frame)
    print(f"rank(M) = {m.rank()}, rank(compressed) = {rep.lhs} >= {rep.rhs} = rank(M) - 2(n-k)")

    m2 = random_invertible(field, rng, n)
    rep = verify_mult_defect(m, m2, frame)
    print(f"multiplicative defect rank = {rep.lhs} <= {rep.rhs} = n - k")

    print()
    print("== random non-orthogonal frames ==")
    frame1 = random_frame(field, n, k, rng)
    frame2 = random_frame(field, n, k, rng)
    p = frame1.iota * frame1.proj
    print("projector is idempotent:", p * p == p, "with image dimension", p.rank())

    mats = [random_matrix(field, rng, n, n) for _ in range(5)]
    a, report = align_compressions(frame1, frame2, mats)
    print(f"intersection of the two subspaces has dimension {report.intersection_dim}")
    print(f"alignment ranks per matrix: {list(report.per_matrix)} (bound {report.bound})")
    print("the conjugator depends only on the frames:",
          a == align_compressions(frame1, frame2, mats[:1])[0])

    print()
    print("== compression is linear ==")
    c1 = compress(mats[0], frame1) + compress(mats[1], frame1)
    c2 = compress(mats[0] + mats[1], frame1)
    print("compress(M1) + compress(M2) == compress(M1 + M2):", c1 == c2)


if __name__ == "__main__":
    main()
