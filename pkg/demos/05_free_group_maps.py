#!/usr/bin/env python3
"""Free-group almost-representations far from every true representation.

A symmetric family tau: Z -> GL_n near the identity induces a map on reduced
words with multiplicative defect at most 3/n, yet the witness word
a b a b^2 ... a b^t accumulates a product at maximal rank distance from the
identity.  That forces every genuine representation at least (c - 1/n)/6
away, which the chain certificate verifies step by step.
"""

from fractions import Fraction

from rankstability import DenseMatrix, GF, QQ, exact_defect, phi_eval, preset_tau, witness_word
from rankstability.rolli import certificate_battery, pullback, word_reduce


def main():
    n = 12
    tau = preset_tau("diag_involution", n)

    print(f"== the induced map on F_2, carried by sign flips in GL_{n}(Q) ==")
    print("phi(a^5) = identity:", phi_eval(word_reduce("aaaaa"), tau) == tau.tau(0))
    print("phi(b^3) = tau(3), within rank one of the identity:",
          (tau.tau(3) - DenseMatrix.identity(QQ, n)).rank())

    result = exact_defect(tau)
    print("exact multiplicative defect:", result.defect, "=", "3/n bound:", result.bound)
    print("worst exponent pair:", result.witness_pair)

    w = witness_word(n)
    value = Fraction((phi_eval(w, tau) - DenseMatrix.identity(QQ, n)).rank(), n)
    print("witness word", str(w)[:34] + "...", "lands at distance", value, "from the identity")

    print()
    print("== the chain certificate against structured representations ==")
    for name, chain in certificate_battery(tau, seed=42, conjugates=3):
        print(f"{name:>12}: eps_lower = {chain.eps_lower}  >=  bound {chain.final_bound}"
              f"  (fixed space dim {chain.fixed_dim}/{chain.target_dim})")

    print()
    print("== characteristic 2: the permutation variant ==")
    tau2 = preset_tau("transposition", n, GF(2))
    result2 = exact_defect(tau2)
    w2 = witness_word(n - 1)
    value2 = Fraction((phi_eval(w2, tau2) - DenseMatrix.identity(GF(2), n)).rank(), n)
    print("defect:", result2.defect, "| witness value:", value2, "= 1 - 1/n")

    print()
    print("== pulling back through a surjection onto F_2 ==")
    images = {"g1": word_reduce("a"), "g2": word_reduce("b"), "g3": word_reduce("")}
    ev = pullback(images, tau)
    gamma_word = [("g1", 1), ("g3", 5), ("g2", 2)]
    print("grp word with a collapsed generator evaluates through phi:",
          ev.eval(gamma_word) == phi_eval(word_reduce("abb"), tau))


if __name__ == "__main__":
    main()
