#!/usr/bin/env python3
"""Truncated highest-weight modules as almost-representations of sl_2 and sl_3.

Cutting the highest-weight module of weight lambda at monomial degree n gives
finite matrices that satisfy the bracket relations except on the top layer.
The defect decays like 1/n while central elements act near-scalar, and both
facts are certified exactly at every step.
"""

from fractions import Fraction

from rankstability import build_sl, build_truncation, casimir, check_near_scalar, epsilon_bound
from rankstability.liealg import pointwise_defect
from rankstability.verma import check_highest_weight_structure, reordered_sl2_casimir


def main():
    sl2 = build_sl(2)
    lam = (Fraction(1, 2),)

    print("== defect decay for sl_2, weight 1/2 ==")
    print(f"{'n':>4} {'dim':>5} {'defect':>8} {'bound 2m^2/n':>13}")
    for n in (4, 8, 16, 32):
        rep = build_truncation(sl2, lam, n)
        defect = rep.meta["pointwise_defect"]
        print(f"{n:>4} {rep.dim:>5} {str(defect.value):>8} {str(epsilon_bound(sl2, n)):>13}")

    print()
    print("== the defect lives on the single top monomial ==")
    rep = build_truncation(sl2, lam, 4)
    f_img, h_img, e_img = rep.images
    defect_matrix = e_img * f_img - f_img * e_img - h_img
    print("rank of [e, f] - h on the truncation:", defect_matrix.rank())
    print("its only entry is at the top corner:", defect_matrix.entry(4, 4),
          "= -(n+1)(lambda - n)")

    print()
    print("== integral weight: the truncation is the simple quotient ==")
    exact = build_truncation(sl2, (Fraction(4),), 4)
    print("weight 4, degree 4: defect =", exact.meta["pointwise_defect"].value)

    print()
    print("== the quadratic central element acts near-scalar ==")
    omega = casimir(sl2)
    report = check_near_scalar(rep, omega)
    print("ordered form: deviation rank", report.deviation.numerator,
          "| character", report.character)
    report = check_near_scalar(rep, reordered_sl2_casimir())
    print("reordered word (same element of the algebra): deviation",
          report.deviation, "<=", report.bound)

    print()
    print("== sl_3 at weight (1/2, 1/3), degree 6 ==")
    sl3 = build_sl(3)
    rep3 = build_truncation(sl3, (Fraction(1, 2), Fraction(1, 3)), 6)
    structure = check_highest_weight_structure(rep3)
    print("dimension:", rep3.dim, "| defect:", rep3.meta["pointwise_defect"].value,
          "| structure pass:", structure.passed)
    print("pointwise defect report:", pointwise_defect(rep3).worst_pair,
          "is the worst basis pair")


if __name__ == "__main__":
    main()
