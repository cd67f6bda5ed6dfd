"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  All comparisons are exact rational arithmetic; the only tolerances
are the closed-form bounds themselves, pinned here.
"""

import time
from fractions import Fraction

from rankstability import (
    DenseMatrix,
    GF,
    QQ,
    XorShift64Star,
    build_sl,
    build_truncation,
    casimir,
    central_character_value,
    check_highest_weight_structure,
    check_near_scalar,
    complexify,
    direct_sum_rep,
    epsilon_bound,
    exact_defect,
    phi_eval,
    pointwise_defect,
    preset_tau,
    rep_distance_certificate,
    sampled_defect,
    separation_certificate,
    witness_word,
)
from rankstability.compress import (
    align_compressions,
    random_frame,
    verify_mult_defect,
    verify_rank_lower,
)
from rankstability.liealg import AlmostRep
from rankstability.prng import random_matrix
from rankstability.rankmetric import map_distance
from rankstability.rolli import certificate_battery
from rankstability.verma import reordered_sl2_casimir

from conftest import rank_by_minors

SL2 = build_sl(2)
SL3 = build_sl(3)
HALF = (Fraction(1, 2),)
NS = (4, 8, 16, 32, 64)


def _report(num, detail):
    print(f"ACCEPTANCE {num}: PASS - {detail}")


def test_criterion_1_truncation_defect_formula():
    start = time.monotonic()
    values = []
    for n in NS:
        rep = build_truncation(SL2, HALF, n)
        defect = rep.meta["pointwise_defect"].value
        assert defect == Fraction(1, n + 1)
        assert defect <= Fraction(2, n)
        values.append((n, str(defect)))
    elapsed = time.monotonic() - start
    assert elapsed < 10.0
    _report(1, f"defect = 1/(n+1) <= 2/n for n in {list(NS)} ({elapsed:.2f}s): {values}")


def test_criterion_2_sl3_build():
    start = time.monotonic()
    rep = build_truncation(SL3, (Fraction(1, 2), Fraction(1, 3)), 6)
    assert rep.dim == 84
    defect = rep.meta["pointwise_defect"].value
    assert defect <= Fraction(2 * 9, 6)
    structure = check_highest_weight_structure(rep)
    assert structure.passed
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    _report(2, f"dim 84, exact defect {defect} <= 3, structure pass ({elapsed:.2f}s)")


def test_criterion_3_central_near_scalar():
    ordered = casimir(SL2)
    reordered = reordered_sl2_casimir()
    for n in NS:
        rep = build_truncation(SL2, HALF, n)
        chi = Fraction(1, 4) + 1
        exact = check_near_scalar(rep, ordered)
        assert exact.exact_scalar and exact.character == chi
        visible = check_near_scalar(rep, reordered)
        assert visible.deviation.value > 0
        assert visible.deviation.value <= 3 * epsilon_bound(SL2, n)
    _report(3, "ordered Casimir exactly scalar; reordered word deviation in (0, (R+1)eps_n]")


def test_criterion_4_linkage():
    omega = casimir(SL2)
    rng = XorShift64Star(101)
    for _ in range(20):
        lam = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        assert central_character_value(SL2, omega, (lam,)) == central_character_value(
            SL2, omega, (-lam - 2,)
        )
    pairs = 0
    while pairs < 20:
        lam = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        mu = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        if mu in (lam, -lam - 2):
            continue
        pairs += 1
        assert central_character_value(SL2, omega, (lam,)) != central_character_value(
            SL2, omega, (mu,)
        )
    _report(4, "chi(lam) = chi(-lam-2) on 20 weights; 20 unlinked pairs separated")


def test_criterion_5_separation_at_16():
    n = 16
    rep_a = build_truncation(SL2, HALF, n)
    rep_b = build_truncation(SL2, (Fraction(1, 3),), n)
    cert = separation_certificate(rep_a, rep_b)
    assert cert.separated
    assert cert.distance.value == 1
    eps = epsilon_bound(SL2, n)
    assert cert.rank_lower == 1 - 6 * eps == Fraction(1, 4)
    assert cert.strict_distance_bound == Fraction(1, 6) * Fraction(1, 4) == Fraction(1, 24)
    _report(5, f"rank 1 >= {cert.rank_lower}; closed-form bound {cert.strict_distance_bound}")


BATTERY_49 = [
    [48],
    [0] * 49,
    [1] * 24 + [0],
    [2] * 16 + [0],
    [6] * 7,
    [40, 7],
    [24, 23],
    [12, 12, 12, 9],
    [3] * 12 + [0],
    [16, 15, 15],
]


def test_criterion_6_distance_from_representations():
    start = time.monotonic()
    n = 48
    rep = build_truncation(SL2, HALF, n)
    target = Fraction(5, 36)
    assert Fraction(1, 6) * (1 - 4 * epsilon_bound(SL2, n)) == target
    for partition in BATTERY_49:
        assert sum(d + 1 for d in partition) == rep.dim
        psi = direct_sum_rep(partition)
        cert = rep_distance_certificate(rep, psi)
        assert cert.certified
        assert cert.kernel_dim == 0
        assert cert.flexible_bound == target
        assert cert.basis_max_distance.value * SL2.dim >= target
    elapsed = time.monotonic() - start
    assert elapsed < 300.0
    _report(6, f"10-case battery: kernel 0, flexible bound {target} certified ({elapsed:.2f}s)")


def test_criterion_7_compression_laws():
    for field in (GF(7), QQ):
        for n, k in ((6, 4), (8, 7)):
            rng = XorShift64Star(7)
            for _ in range(100):
                m1 = random_matrix(field, rng, n, n)
                m2 = random_matrix(field, rng, n, n)
                frame1 = random_frame(field, n, k, rng)
                frame2 = random_frame(field, n, k, rng)
                assert verify_rank_lower(m1, frame1).passed
                assert verify_mult_defect(m1, m2, frame1).passed
                _, rep = align_compressions(frame1, frame2, [m1, m2])
                assert max(rep.per_matrix) <= 4 * (n - k)
    _report(7, "100 trials per field/shape: all three compression inequalities hold")


def test_criterion_8_free_group_certificates():
    start = time.monotonic()
    for n in (4, 12, 48):
        tau = preset_tau("diag_involution", n)
        defect = exact_defect(tau)
        assert defect.defect.value == Fraction(3, n)
        witness = phi_eval(witness_word(n), tau)
        value = Fraction((witness - DenseMatrix.identity(QQ, n)).rank(), n)
        assert value == 1
        reports = certificate_battery(tau, seed=5, conjugates=20)
        assert len(reports) == 22
        for _, chain in reports:
            assert chain.passed
            assert chain.eps_lower >= Fraction(1, 6) - Fraction(1, 6 * n)
    n = 12
    tau2 = preset_tau("transposition", n, GF(2))
    witness = phi_eval(witness_word(n - 1), tau2)
    value = Fraction((witness - DenseMatrix.identity(GF(2), n)).rank(), n)
    assert value == 1 - Fraction(1, n)
    for _, chain in certificate_battery(tau2, seed=6, conjugates=5):
        assert chain.passed
        assert chain.eps_lower >= (1 - Fraction(2, n)) / 6
    elapsed = time.monotonic() - start
    _report(8, f"defect 3/n, witness 1 (diag) and 1-1/n (transposition/GF2), chains hold ({elapsed:.1f}s)")


def test_criterion_9_complexification():
    rep = build_truncation(SL2, HALF, 4)
    base = pointwise_defect(rep).pointwise.value
    crep = complexify(rep)
    assert pointwise_defect(crep).pointwise.value <= 4 * base
    assert sampled_defect(crep, 100, seed=3).pointwise.value <= 4 * base

    perturbed = list(rep.images)
    perturbed[2] = perturbed[2] + DenseMatrix.elementary(QQ, 5, 5, 0, 0)
    psi = AlmostRep(SL2, QQ, 5, tuple(perturbed), {"tag": "perturbed"})
    delta = map_distance(rep, psi, "strict").pointwise.value
    cpsi = complexify(psi)
    assert map_distance(crep, cpsi, "strict").pointwise.value <= 2 * delta
    # complex combinations stay within the doubled distance for this rank-one pair
    rng = XorShift64Star(9)
    for _ in range(25):
        coords = {i: (rng.randint(-3, 3), rng.randint(-3, 3)) for i in range(3)}
        diff = crep.apply_coords(coords) - cpsi.apply_coords(coords)
        assert Fraction(diff.rank(), 5) <= 2 * delta
    _report(9, f"complexified defect <= 4x{base}; distance doubling bound holds exactly")


def test_criterion_10_rank_kernel_oracle():
    start = time.monotonic()
    f2 = GF(2)
    for bits in range(2 ** 9):
        entries = [(bits >> k) & 1 for k in range(9)]
        m = DenseMatrix(f2, [entries[0:3], entries[3:6], entries[6:9]])
        assert m.rank() == rank_by_minors(m)
    rng = XorShift64Star(10)
    f3 = GF(3)
    for _ in range(500):
        m = random_matrix(f3, rng, 4, 4)
        assert m.rank() == rank_by_minors(m)
    for _ in range(500):
        n = rng.randint(2, 5)
        a = random_matrix(QQ, rng, n, n)
        b = random_matrix(QQ, rng, n, n)
        assert (a + b).rank() <= a.rank() + b.rank()
        assert (a * b).rank() <= min(a.rank(), b.rank())
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    _report(10, f"512 exhaustive + 500 sampled minor-oracle matches; 500 pairs bounded ({elapsed:.2f}s)")
