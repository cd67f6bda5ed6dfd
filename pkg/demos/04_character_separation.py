#!/usr/bin/env python3
"""Central characters separate truncations from each other and from true reps.

Two truncations whose weights are not linked under the shifted Weyl action
produce near-scalar Casimir images with different scalars, which keeps them
rank-separated under every conjugation.  A weight linked to no dominant
integral weight likewise keeps its truncation away from every genuine
representation of nearby dimension, with an explicit closed-form bound.
"""

from fractions import Fraction

from rankstability import (
    build_sl,
    build_truncation,
    casimir,
    central_character_value,
    direct_sum_rep,
    rep_distance_certificate,
    separation_certificate,
)
from rankstability.verma import weyl_twist_scan


def main():
    sl2 = build_sl(2)
    omega = casimir(sl2)

    print("== linkage: chi is invariant under lambda -> -lambda - 2 ==")
    for lam in (Fraction(1, 2), Fraction(3, 7), Fraction(-5, 4)):
        a = central_character_value(sl2, omega, (lam,))
        b = central_character_value(sl2, omega, (-lam - 2,))
        print(f"chi({lam}) = {a} = chi({-lam - 2}) -> {a == b}")

    print()
    print("== separation of two unlinked truncations at degree 16 ==")
    rep_half = build_truncation(sl2, (Fraction(1, 2),), 16)
    rep_third = build_truncation(sl2, (Fraction(1, 3),), 16)
    cert = separation_certificate(rep_half, rep_third)
    print("characters:", cert.character_a, "vs", cert.character_b)
    print("rank of the Casimir-image difference:", cert.distance,
          ">=", cert.rank_lower)
    print("strict-distance lower bound against every conjugation:",
          cert.strict_distance_bound)

    linked = build_truncation(sl2, (Fraction(-5, 2),), 16)
    print("linked weight -5/2 gives:", separation_certificate(rep_half, linked).verdict)

    print()
    print("== distance from every matching true representation at degree 48 ==")
    rep = build_truncation(sl2, (Fraction(1, 2),), 48)
    for partition in ([48], [6] * 7, [1] * 24 + [0]):
        psi = direct_sum_rep(partition)
        cert = rep_distance_certificate(rep, psi)
        print(f"partition {partition if len(partition) < 9 else str(partition[:3]) + '...'}:"
              f" common eigenspace dim {cert.kernel_dim},"
              f" flexible bound {cert.flexible_bound}, verdict {cert.verdict}")

    print()
    print("== the diagram flip produces data, not a verdict ==")
    small = build_truncation(sl2, (Fraction(1, 2),), 4)
    scan = weyl_twist_scan(small, trials=4, seed=11)
    print("flexible distances to conjugated flips:", scan["samples"])
    print("empirical minimum:", scan["min"], "(nothing is claimed about the infimum)")


if __name__ == "__main__":
    main()
