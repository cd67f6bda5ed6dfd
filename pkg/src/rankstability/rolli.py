"""Free-group almost-representations from symmetric integer families.

A reduced word in F_2 = <a, b> is an alternating product
a^{n_1} b^{m_1} ... a^{n_k} b^{m_k} (only the outermost exponents may be
zero).  Given a symmetric family tau: Z -> GL_n with tau(0) = I,
tau(-j) = tau(j)^(-1) and rank(tau(j) - I) <= 1, the map

    phi(w) = tau(m_1) tau(m_2) ... tau(m_k)

depends only on the b-exponents.  Joining two reduced words either
concatenates the tau-product or, after cancellation, replaces a middle pair
tau(m) tau(q) by tau(m+q); the multiplicative defect of phi is therefore the
exact maximum of rk(tau(m) tau(q) - tau(m+q)) over integer pairs, which a
finite membership-pattern enumeration computes.  It never exceeds 3/n.

The witness word a b a b^2 ... a b^t accumulates tau(1)...tau(t); presets are
chosen so that product is far from the identity, which pushes every true
representation at least (c - 1/n)/6 away in the flexible metric, c being the
witness value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundViolation, DimensionMismatch, FieldMismatch
from .exactfield import QQ, DenseMatrix, ExactField, vstack
from .prng import XorShift64Star, random_unimodular
from .rankmetric import RankDistance, flexible_distance

__all__ = [
    "ReducedWord",
    "word_reduce",
    "WORD_A",
    "WORD_B",
    "TauFamily",
    "preset_tau",
    "phi_eval",
    "exact_defect",
    "witness_word",
    "default_witness_exponent",
    "FreeGroupRep",
    "ExplicitRep",
    "MonomialRep",
    "ConjugatedRep",
    "trivial_rep",
    "rep_distance_certificate",
    "certificate_battery",
    "Pullback",
    "pullback",
]


# ---------------------------------------------------------------------------
# Reduced words


@dataclass(frozen=True)
class ReducedWord:
    """Alternating-exponent normal form; syllables are (generator, exponent).

    Stored as a tuple of (gen, exp) with gen in {"a", "b"}, adjacent
    generators distinct and all exponents nonzero.  The empty tuple is the
    identity.
    """

    syllables: tuple

    def __post_init__(self):
        prev = None
        for gen, exp in self.syllables:
            if gen not in ("a", "b"):
                raise ValueError(f"unknown generator {gen!r}")
            if exp == 0:
                raise ValueError("zero exponent in normal form")
            if gen == prev:
                raise ValueError("adjacent syllables share a generator")
            prev = gen

    @classmethod
    def identity(cls) -> "ReducedWord":
        return cls(())

    @classmethod
    def from_pairs(cls, pairs) -> "ReducedWord":
        """Build from an alternating exponent list [(n_1, m_1), ...]."""
        sylls = []
        for n_i, m_i in pairs:
            if n_i:
                sylls.append(("a", n_i))
            if m_i:
                sylls.append(("b", m_i))
        return _reduce_syllables(sylls)

    def pairs(self) -> tuple:
        """The alternating exponent list (n_1, m_1, ..., n_k, m_k) as pairs.

        n_1 and m_k may be zero; interior entries are nonzero.
        """
        out = []
        pending_a = None
        for gen, exp in self.syllables:
            if gen == "a":
                if pending_a is not None:
                    out.append((pending_a, 0))
                pending_a = exp
            else:
                out.append((pending_a if pending_a is not None else 0, exp))
                pending_a = None
        if pending_a is not None:
            out.append((pending_a, 0))
        return tuple(out)

    def b_exponents(self) -> tuple:
        return tuple(exp for gen, exp in self.syllables if gen == "b")

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return _reduce_syllables(list(self.syllables) + list(other.syllables))

    def inverse(self) -> "ReducedWord":
        return ReducedWord(tuple((g, -e) for g, e in reversed(self.syllables)))

    def power(self, k: int) -> "ReducedWord":
        if k < 0:
            return self.inverse().power(-k)
        out = ReducedWord.identity()
        for _ in range(k):
            out = out * self
        return out

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __str__(self):
        if not self.syllables:
            return "1"
        return " ".join(f"{g}^{e}" if e != 1 else g for g, e in self.syllables)


def _reduce_syllables(sylls) -> ReducedWord:
    stack: list = []
    for gen, exp in sylls:
        if not exp:
            continue
        while True:
            if stack and stack[-1][0] == gen:
                merged = stack[-1][1] + exp
                stack.pop()
                if merged == 0:
                    if not stack:
                        gen = None
                        break
                    gen, exp = stack.pop()
                    continue
                gen, exp = gen, merged
                continue
            break
        if gen is not None:
            stack.append((gen, exp))
    return ReducedWord(tuple(stack))


_LETTERS = {"a": ("a", 1), "A": ("a", -1), "b": ("b", 1), "B": ("b", -1)}


def word_reduce(letters) -> ReducedWord:
    """Reduce a letter sequence; accepts 'abA' strings or (gen, exp) pairs."""
    sylls = []
    for item in letters:
        if isinstance(item, str) and item in _LETTERS:
            sylls.append(_LETTERS[item])
        elif isinstance(item, tuple):
            sylls.append(item)
        else:
            raise ValueError(f"unknown letter {item!r}")
    return _reduce_syllables(sylls)


WORD_A = ReducedWord((("a", 1),))
WORD_B = ReducedWord((("b", 1),))


# ---------------------------------------------------------------------------
# Symmetric families


class TauFamily:
    """Symmetric map Z -> GL_n with identity outside a finite support.

    Required properties, validated on construction: tau(-j) is the inverse of
    tau(j), and every tau(j) sits within normalized rank 1/n of the identity.
    """

    def __init__(self, field: ExactField, n: int, mapping: dict, preset: str = "custom"):
        self.field = field
        self.n = n
        self.preset = preset
        self._map: dict[int, DenseMatrix] = {}
        for j, mat in mapping.items():
            if j == 0:
                raise ValueError("tau(0) is fixed to the identity; do not supply it")
            if mat.shape != (n, n):
                raise DimensionMismatch(f"tau({j}) has shape {mat.shape}")
            if mat.field != field:
                raise FieldMismatch("mixed fields in tau family")
            self._map[j] = mat
        ident = DenseMatrix.identity(field, n)
        self._identity = ident
        self._deltas: dict[int, dict] = {}
        for j, mat in sorted(self._map.items()):
            if -j not in self._map:
                raise ValueError(f"support is not symmetric: {j} present, {-j} missing")
            if (mat - ident).rank() > 1:
                raise ValueError(f"tau({j}) is not within rank one of the identity")
        for j in sorted(self._map):
            if j > 0 and self._map[j] * self._map[-j] != ident:
                raise ValueError(f"tau({j}) and tau({-j}) are not inverse")
        self.support = frozenset(self._map)
        self.support_bound = max((abs(j) for j in self.support), default=0)

    def tau(self, j: int) -> DenseMatrix:
        if j == 0:
            return self._identity
        return self._map.get(j, self._identity)

    def delta(self, j: int) -> dict:
        """Sparse rows of tau(j) - I, cached."""
        d = self._deltas.get(j)
        if d is None:
            d = {}
            mat = self.tau(j)
            for i in range(self.n):
                row = {}
                for c in range(self.n):
                    v = mat.entry(i, c) - (self.field.one if i == c else self.field.zero)
                    if v:
                        row[c] = v
                if row:
                    d[i] = row
            self._deltas[j] = d
        return d


def preset_tau(kind: str, n: int, field: ExactField = QQ) -> TauFamily:
    """Built-in families: diag_involution, transposition, transvection."""
    ident = DenseMatrix.identity(field, n)
    mapping: dict[int, DenseMatrix] = {}
    if kind == "diag_involution":
        if getattr(field, "characteristic", 0) == 2:
            raise ValueError("diag_involution needs characteristic != 2")
        if n < 1:
            raise ValueError("n must be positive")
        for j in range(1, n + 1):
            mat = ident - DenseMatrix.elementary(field, n, n, j - 1, j - 1, 2)
            mapping[j] = mat
            mapping[-j] = mat
    elif kind == "transposition":
        for j in range(1, n):
            rows = [[field.one if i == c else field.zero for c in range(n)] for i in range(n)]
            rows[j - 1], rows[j] = rows[j], rows[j - 1]
            mat = DenseMatrix(field, rows)
            mapping[j] = mat
            mapping[-j] = mat
    elif kind == "transvection":
        for j in range(1, n):
            mapping[j] = ident + DenseMatrix.elementary(field, n, n, j, j - 1)
            mapping[-j] = ident - DenseMatrix.elementary(field, n, n, j, j - 1)
    else:
        raise ValueError(f"unknown preset {kind!r}")
    return TauFamily(field, n, mapping, preset=kind)


def phi_eval(word: ReducedWord, tau: TauFamily) -> DenseMatrix:
    """Product of tau over the b-exponents; a-exponents are ignored by design."""
    out = tau.tau(0)
    for m in word.b_exponents():
        out = out * tau.tau(m)
    return out


# ---------------------------------------------------------------------------
# Exact defect enumeration


def _sp_add(a: dict, b: dict, negate_b: bool = False) -> dict:
    out = {i: dict(row) for i, row in a.items()}
    for i, row in b.items():
        tgt = out.setdefault(i, {})
        for j, v in row.items():
            w = -v if negate_b else v
            cur = tgt.get(j)
            s = w if cur is None else cur + w
            if s:
                tgt[j] = s
            elif cur is not None:
                del tgt[j]
        if not tgt:
            del out[i]
    return out


def _sp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, arow in a.items():
        acc: dict = {}
        for k, av in arow.items():
            brow = b.get(k)
            if brow:
                for j, bv in brow.items():
                    cur = acc.get(j)
                    s = av * bv if cur is None else cur + av * bv
                    if s:
                        acc[j] = s
                    elif cur is not None:
                        del acc[j]
        if acc:
            out[i] = acc
    return out


def _sp_rank(sp: dict, field: ExactField) -> int:
    if not sp:
        return 0
    rows = sorted(sp)
    cols = sorted({j for row in sp.values() for j in row})
    zero = field.zero
    data = [[sp[i].get(j, zero) for j in cols] for i in rows]
    return DenseMatrix(field, data).rank()


@dataclass(frozen=True)
class DefectResult:
    defect: RankDistance
    bound: Fraction
    witness_pair: tuple

    def to_json(self) -> dict:
        return {
            "defect": self.defect.to_json(),
            "bound": str(self.bound),
            "witness_pair": list(self.witness_pair),
        }


def exact_defect(tau: TauFamily) -> DefectResult:
    """The exact multiplicative defect of the induced free-group map.

    Enumerates rk(tau(m) tau(q) - tau(m+q)) over all membership patterns of
    (m, q, m+q) relative to the finite support: both inside, one inside with
    the sum escaping or landing anywhere in the support, and both outside.
    Certifies the result against 3/n.
    """
    field = tau.field
    support = sorted(tau.support)
    best = 0
    pair = (0, 0)

    for m in support:
        dm = tau.delta(m)
        for q in support:
            dq = tau.delta(q)
            prod = _sp_mul(dm, dq)
            s = _sp_add(_sp_add(dm, dq), prod)
            target = m + q
            if target in tau.support:
                s = _sp_add(s, tau.delta(target), negate_b=True)
            r = _sp_rank(s, field)
            if r > best:
                best = r
                pair = (m, q)

    # one exponent outside the support: tau(u) - tau(s) with s - u escaping,
    # and tau(u) - I; both are also what the two-outside patterns produce.
    for u in support:
        du = tau.delta(u)
        r = _sp_rank(du, field)
        if r > best:
            best = r
            pair = (u, tau.support_bound * 2 + 1)
    if best < 2:
        for u in support:
            du = tau.delta(u)
            for s in support:
                if s == u or (s - u) in tau.support:
                    continue
                r = _sp_rank(_sp_add(du, tau.delta(s), negate_b=True), field)
                if r > best:
                    best = r
                    pair = (u, s - u)

    rd = RankDistance(best, tau.n)
    bound = Fraction(3, tau.n)
    if rd.value > bound:
        raise BoundViolation(
            f"defect {rd} exceeded 3/n = {bound}", details={"preset": tau.preset}
        )
    return DefectResult(rd, bound, pair)


def witness_word(t: int) -> ReducedWord:
    """The word a b a b^2 a b^3 ... a b^t."""
    if t < 1:
        raise ValueError("witness exponent must be at least 1")
    return ReducedWord.from_pairs([(1, j) for j in range(1, t + 1)])


def default_witness_exponent(tau: TauFamily) -> int:
    """Exponent whose witness accumulates the full product of the preset."""
    if tau.preset == "diag_involution":
        return tau.n
    return tau.n - 1


# ---------------------------------------------------------------------------
# True representations of F_2 and the distance certificate


class FreeGroupRep:
    """A genuine representation of F_2 given by images of a and b."""

    dim: int
    field: ExactField

    def eval(self, word: ReducedWord) -> DenseMatrix:
        raise NotImplementedError

    def image_a(self) -> DenseMatrix:
        return self.eval(WORD_A)

    def image_b(self) -> DenseMatrix:
        return self.eval(WORD_B)


class ExplicitRep(FreeGroupRep):
    def __init__(self, a: DenseMatrix, b: DenseMatrix):
        if a.shape != b.shape or not a.is_square():
            raise DimensionMismatch("generator images must be square of equal size")
        if a.field != b.field:
            raise FieldMismatch("generator images over different fields")
        n = a.rows
        if a.rank() != n or b.rank() != n:
            raise ValueError("generator images must be invertible")
        self.dim = n
        self.field = a.field
        self._gens = {"a": a, "b": b}
        self._powers: dict = {}

    def _power(self, gen: str, k: int) -> DenseMatrix:
        key = (gen, k)
        hit = self._powers.get(key)
        if hit is not None:
            return hit
        if k == 0:
            out = DenseMatrix.identity(self.field, self.dim)
        elif k == 1:
            out = self._gens[gen]
        elif k == -1:
            out = self._gens[gen].inverse()
        elif k > 0:
            out = self._power(gen, k - 1) * self._gens[gen]
        else:
            out = self._power(gen, k + 1) * self._power(gen, -1)
        self._powers[key] = out
        return out

    def eval(self, word: ReducedWord) -> DenseMatrix:
        out = None
        for gen, exp in word.syllables:
            m = self._power(gen, exp)
            out = m if out is None else out * m
        return out if out is not None else DenseMatrix.identity(self.field, self.dim)


class MonomialRep(FreeGroupRep):
    """Images are monomial matrices, evaluated in O(n) per syllable.

    A monomial matrix is stored as (perm, scale): it sends e_j to
    scale[j] * e_perm[j].
    """

    def __init__(self, field: ExactField, perm_a, scale_a, perm_b, scale_b):
        self.field = field
        self.dim = len(perm_a)
        self._a = (tuple(perm_a), tuple(field.coerce(s) for s in scale_a))
        self._b = (tuple(perm_b), tuple(field.coerce(s) for s in scale_b))
        for perm, scale in (self._a, self._b):
            if sorted(perm) != list(range(self.dim)):
                raise ValueError("not a permutation")
            if not all(scale):
                raise ValueError("monomial scale must be invertible")

    @staticmethod
    def _compose(m1, m2):
        # first apply m2, then m1
        p1, s1 = m1
        p2, s2 = m2
        perm = tuple(p1[p2[j]] for j in range(len(p1)))
        scale = tuple(s2[j] * s1[p2[j]] for j in range(len(p1)))
        return (perm, scale)

    def _invert(self, m):
        p, s = m
        n = len(p)
        inv_p = [0] * n
        for j, pj in enumerate(p):
            inv_p[pj] = j
        one = self.field.one
        scale = tuple(one / s[inv_p[j]] for j in range(n))
        return (tuple(inv_p), scale)

    def _power(self, m, k: int):
        if k < 0:
            return self._power(self._invert(m), -k)
        acc = (tuple(range(self.dim)), tuple(self.field.one for _ in range(self.dim)))
        for _ in range(k):
            acc = self._compose(acc, m)
        return acc

    def _to_matrix(self, m) -> DenseMatrix:
        p, s = m
        zero = self.field.zero
        data = [[zero] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            data[p[j]][j] = s[j]
        return DenseMatrix(self.field, data)

    def eval(self, word: ReducedWord) -> DenseMatrix:
        acc = (tuple(range(self.dim)), tuple(self.field.one for _ in range(self.dim)))
        for gen, exp in word.syllables:
            base = self._a if gen == "a" else self._b
            acc = self._compose(acc, self._power(base, exp))
        return self._to_matrix(acc)


class ConjugatedRep(FreeGroupRep):
    """C . inner . C^-1, conjugating once per evaluated word."""

    def __init__(self, conjugator: DenseMatrix, inner: FreeGroupRep, inverse: DenseMatrix | None = None):
        if conjugator.shape != (inner.dim, inner.dim):
            raise DimensionMismatch("conjugator dimension mismatch")
        self.dim = inner.dim
        self.field = inner.field
        self._c = conjugator
        self._c_inv = inverse if inverse is not None else conjugator.inverse()
        self._inner = inner

    def eval(self, word: ReducedWord) -> DenseMatrix:
        return self._c * self._inner.eval(word) * self._c_inv


def trivial_rep(field: ExactField, n: int) -> FreeGroupRep:
    ident_perm = range(n)
    ones = [1] * n
    return MonomialRep(field, ident_perm, ones, ident_perm, ones)


@dataclass(frozen=True)
class ChainReport:
    """Every computable step of the distance argument, checked exactly."""

    n: int
    target_dim: int
    witness_exponent: int
    witness_value: Fraction
    eps_lower: Fraction
    delta: Fraction
    rank_a: int
    rank_b: int
    fixed_dim: int
    rank_witness: int
    final_bound: Fraction
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.target_dim,
            "witness_exponent": self.witness_exponent,
            "witness_value": str(self.witness_value),
            "eps_lower": str(self.eps_lower),
            "delta": str(self.delta),
            "rank_a": self.rank_a,
            "rank_b": self.rank_b,
            "fixed_dim": self.fixed_dim,
            "rank_witness": self.rank_witness,
            "final_bound": str(self.final_bound),
            "checks": [[name, ok] for name, ok in self.checks],
        }


def rep_distance_certificate(tau: TauFamily, psi, witness_exponent: int | None = None) -> ChainReport:
    """Certify the distance chain between phi and a true representation psi.

    psi may be a FreeGroupRep or a pair (A, B) of invertible matrices, which
    determine a homomorphism freely.  With c the witness value
    rk(phi(w) - I_n) and eps the maximum flexible distance over {a, b, w},
    the chain

        rank(psi(a) - I_N) <= 2 eps n
        rank(psi(b) - I_N) <= (2 eps + 1/n) n
        dim ker-intersection >= N - those ranks
        rank(psi(w) - I_N)  <= N - dim ker-intersection
        c n - 2 eps n       <= rank(psi(w) - I_N)

    forces eps >= (c - 1/n)/6.  Each step is evaluated exactly; a violation
    aborts, since every step is a theorem for a true homomorphism.
    """
    if isinstance(psi, tuple):
        psi = ExplicitRep(*psi)
    if psi.field != tau.field:
        raise FieldMismatch("representation and tau family over different fields")
    n = tau.n
    N = psi.dim
    field = tau.field
    t = witness_exponent or default_witness_exponent(tau)
    w = witness_word(t)

    phi_a = tau.tau(0)
    phi_b = tau.tau(1)
    phi_w = phi_eval(w, tau)
    psi_a = psi.image_a()
    psi_b = psi.image_b()
    psi_w = psi.eval(w)

    d_a = flexible_distance(phi_a, psi_a)
    d_b = flexible_distance(phi_b, psi_b)
    d_w = flexible_distance(phi_w, psi_w)
    eps = max(d_a.value, d_b.value, d_w.value)
    delta = Fraction(1, n)
    ident_n = DenseMatrix.identity(field, n)
    c = Fraction((phi_w - ident_n).rank(), n)

    ident_big = DenseMatrix.identity(field, N)
    rank_a = (psi_a - ident_big).rank()
    rank_b = (psi_b - ident_big).rank()
    fixed = vstack([psi_a - ident_big, psi_b - ident_big]).kernel_basis().cols
    rank_w = (psi_w - ident_big).rank()

    final = (c - delta) / 6
    checks = (
        ("rank_a <= 2*eps*n", Fraction(rank_a) <= 2 * eps * n),
        ("rank_b <= (2*eps + delta)*n", Fraction(rank_b) <= (2 * eps + delta) * n),
        ("fixed_dim >= N - rank_a - rank_b", fixed >= N - rank_a - rank_b),
        ("rank_w <= N - fixed_dim", rank_w <= N - fixed),
        ("c*n - 2*eps*n <= rank_w", c * n - 2 * eps * n <= rank_w),
        ("eps >= (c - delta)/6", eps >= final),
    )
    report = ChainReport(
        n, N, t, c, eps, delta, rank_a, rank_b, fixed, rank_w, final, checks
    )
    if not report.passed:
        failed = [name for name, ok in checks if not ok]
        raise BoundViolation(
            f"distance chain failed at: {', '.join(failed)}",
            details={"report": report.to_json()},
        )
    return report


def certificate_battery(
    tau: TauFamily, seed: int, conjugates: int = 20, witness_exponent: int | None = None
) -> list:
    """Run the chain against the trivial, monomial, and random-conjugate families."""
    field = tau.field
    n = tau.n
    rng = XorShift64Star(seed)
    reports = []
    reports.append(("trivial", rep_distance_certificate(tau, trivial_rep(field, n), witness_exponent)))

    cycle = tuple((j + 1) % n for j in range(n))
    reversal = tuple(n - 1 - j for j in range(n))
    if getattr(field, "characteristic", 0) == 2:
        scale = [1] * n
    else:
        scale = [(-1) ** j for j in range(n)]
    monomial = MonomialRep(field, cycle, scale, reversal, [1] * n)
    reports.append(("monomial", rep_distance_certificate(tau, monomial, witness_exponent)))

    for i in range(conjugates):
        conj, conj_inv = random_unimodular(field, rng, n)
        rep = ConjugatedRep(conj, monomial, conj_inv)
        reports.append((f"conjugate_{i}", rep_distance_certificate(tau, rep, witness_exponent)))
    return reports


# ---------------------------------------------------------------------------
# Pullback through a surjection onto F_2


class Pullback:
    """Evaluator for words of a group mapping onto F_2.

    Generators of the source group are named; each name carries its image as
    a reduced word.  Words are substituted, reduced, and fed through phi.
    """

    def __init__(self, images: dict, tau: TauFamily):
        self.images = {name: word for name, word in images.items()}
        self.tau = tau
        has_a = any(w == WORD_A for w in self.images.values())
        has_b = any(w == WORD_B for w in self.images.values())
        if not (has_a and has_b):
            raise ValueError(
                "surjectivity witness missing: need generators mapping onto a and b"
            )

    def substitute(self, word) -> ReducedWord:
        out = ReducedWord.identity()
        for name, exp in word:
            img = self.images.get(name)
            if img is None:
                raise ValueError(f"unknown generator {name!r}")
            out = out * img.power(exp)
        return out

    def eval(self, word) -> DenseMatrix:
        return phi_eval(self.substitute(word), self.tau)


def pullback(images: dict, tau: TauFamily) -> Pullback:
    return Pullback(images, tau)
