"""Chevalley bases of sl_r, structure constants, and almost-representation defects.

The basis of sl_r is realized concretely by elementary matrices:

    y_a = E_{ji}   (negative root vectors, one per pair i < j),
    h_t = E_{tt} - E_{t+1,t+1}   (coroots of the simple roots),
    x_a = E_{ij}   (positive root vectors),

ordered y_1..y_m, h_1..h_ell, x_1..x_m with the positive roots sorted by
(height, leftmost index).  Structure constants come from actual matrix
commutators re-read off the elementary-matrix coordinates, which eliminates
sign-convention bookkeeping and works over any field (no trace pairing).

An AlmostRep assigns one square matrix per basis element.  Its pointwise
defect is the exact maximum, over basis pairs, of the normalized rank of

    [phi(z_i), phi(z_j)] - phi([z_i, z_j]);

by linearity the defect over the whole algebra is at most dim(g)^2 times the
pointwise value, so the pair (pointwise, scaled bound) brackets the true
supremum, which no finite enumeration can reach.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import DimensionMismatch, FieldMismatch
from .exactfield import QQ, QQI, DenseMatrix, ExactField, GaussianRational
from .prng import XorShift64Star
from .rankmetric import RankDistance

__all__ = [
    "ChevalleyBasis",
    "build_sl",
    "AlmostRep",
    "DefectReport",
    "pointwise_defect",
    "sampled_defect",
    "complexify",
    "irreducible_sl2",
    "direct_sum_rep",
    "adjoint_rep",
    "almostrep_to_text",
    "almostrep_from_text",
]


def _int_matrix_mul(a, b, r):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(r)) for j in range(r))
        for i in range(r)
    )


def _int_matrix_sub(a, b, r):
    return tuple(tuple(a[i][j] - b[i][j] for j in range(r)) for i in range(r))


class ChevalleyBasis:
    """The ordered basis of sl_r together with its structure constant table."""

    def __init__(self, r: int):
        if r < 2:
            raise ValueError("sl_r needs r >= 2")
        self.r = r
        self.ell = r - 1
        # positive roots e_i - e_j (i < j), sorted by (height, leftmost index)
        self.root_pairs = sorted(
            ((i, j) for i in range(1, r + 1) for j in range(i + 1, r + 1)),
            key=lambda p: (p[1] - p[0], p[0]),
        )
        self.m = len(self.root_pairs)
        self.dim = 2 * self.m + self.ell

        def E(i, j):
            return tuple(
                tuple(1 if (a == i and b == j) else 0 for b in range(1, r + 1))
                for a in range(1, r + 1)
            )

        def H(t):
            return tuple(
                tuple(
                    (1 if (a == b == t) else -1 if (a == b == t + 1) else 0)
                    for b in range(1, r + 1)
                )
                for a in range(1, r + 1)
            )

        mats = [E(j, i) for (i, j) in self.root_pairs]
        mats += [H(t) for t in range(1, r)]
        mats += [E(i, j) for (i, j) in self.root_pairs]
        self.matrices = tuple(mats)

        labels = [f"y{a + 1}" for a in range(self.m)]
        labels += [f"h{t + 1}" for t in range(self.ell)]
        labels += [f"x{a + 1}" for a in range(self.m)]
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(labels)}
        if r == 2:  # the classical aliases
            self._index.setdefault("f", 0)
            self._index.setdefault("h", 1)
            self._index.setdefault("e", 2)

        # alpha_a(h_t) for the root of x_a / y_a evaluated on the t-th coroot
        self.root_on_coroot = tuple(
            tuple(self._root_eval(a, t) for t in range(1, r)) for a in range(self.m)
        )

        self._table: dict[tuple[int, int], dict[int, int]] = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                comm = _int_matrix_sub(
                    _int_matrix_mul(self.matrices[i], self.matrices[j], r),
                    _int_matrix_mul(self.matrices[j], self.matrices[i], r),
                    r,
                )
                coords = self._coords_int(comm)
                entry = {k: c for k, c in coords.items() if c}
                self._table[(i, j)] = entry
                self._table[(j, i)] = {k: -c for k, c in entry.items()}
            self._table[(i, i)] = {}

    def _root_eval(self, a: int, t: int) -> int:
        i, j = self.root_pairs[a]

        def delta(u, v):
            return 1 if u == v else 0

        return (delta(i, t) - delta(i, t + 1)) - (delta(j, t) - delta(j, t + 1))

    # -- index helpers -------------------------------------------------------

    def index_of(self, label: str) -> int:
        return self._index[label]

    def label(self, idx: int) -> str:
        return self.labels[idx]

    @property
    def negative_indices(self):
        return range(0, self.m)

    @property
    def cartan_indices(self):
        return range(self.m, self.m + self.ell)

    @property
    def positive_indices(self):
        return range(self.m + self.ell, self.dim)

    def classify(self, idx: int) -> tuple[str, int]:
        """('y'|'h'|'x', position within its block)."""
        if idx < self.m:
            return ("y", idx)
        if idx < self.m + self.ell:
            return ("h", idx - self.m)
        return ("x", idx - self.m - self.ell)

    # -- coordinates and brackets ---------------------------------------------

    def _coords_int(self, mat) -> dict[int, int]:
        r = self.r
        if sum(mat[i][i] for i in range(r)) != 0:
            raise ValueError("matrix has nonzero trace, not in sl_r")
        coords: dict[int, int] = {}
        pair_pos = {p: a for a, p in enumerate(self.root_pairs)}
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                v = mat[i - 1][j - 1]
                if i == j or not v:
                    continue
                if i < j:
                    coords[self.m + self.ell + pair_pos[(i, j)]] = v
                else:
                    coords[pair_pos[(j, i)]] = v
        partial = 0
        for t in range(1, r):
            partial += mat[t - 1][t - 1]
            if partial:
                coords[self.m + t - 1] = partial
        return coords

    def coordinates_of(self, matrix) -> dict[int, int]:
        """Coordinates of an integer r-by-r trace-zero matrix in the basis."""
        def as_int(x):
            fx = Fraction(x)
            if fx.denominator != 1:
                raise ValueError(f"entry {x} is not an integer")
            return fx.numerator

        if isinstance(matrix, DenseMatrix):
            rows = tuple(
                tuple(as_int(x) for x in matrix.row(i)) for i in range(matrix.rows)
            )
        else:
            rows = tuple(tuple(as_int(x) for x in row) for row in matrix)
        if len(rows) != self.r or any(len(row) != self.r for row in rows):
            raise DimensionMismatch(f"expected a {self.r}x{self.r} matrix")
        return self._coords_int(rows)

    def bracket_table(self, i: int, j: int) -> dict[int, int]:
        return self._table[(i, j)]

    def bracket_coords(self, a, b) -> dict[int, object]:
        """Commutator in basis coordinates; inputs are indices, coordinate maps,
        coordinate sequences, or raw trace-zero matrices."""
        ca = self._normalize_coords(a)
        cb = self._normalize_coords(b)
        out: dict[int, object] = {}
        for i, va in ca.items():
            if not va:
                continue
            for j, vb in cb.items():
                if not vb:
                    continue
                for k, c in self._table[(i, j)].items():
                    cur = out.get(k)
                    term = va * vb * c
                    out[k] = term if cur is None else cur + term
        return {k: v for k, v in out.items() if v}

    def _normalize_coords(self, a) -> dict[int, object]:
        if isinstance(a, int):
            return {a: 1}
        if isinstance(a, dict):
            return a
        if isinstance(a, DenseMatrix) or (
            isinstance(a, (list, tuple)) and a and isinstance(a[0], (list, tuple))
        ):
            return self.coordinates_of(a)
        return {i: v for i, v in enumerate(a) if v}

    def realization(self, idx: int, field: ExactField) -> DenseMatrix:
        return DenseMatrix(field, self.matrices[idx])

    def __repr__(self):
        return f"ChevalleyBasis(sl_{self.r})"


_SL_CACHE: dict[int, ChevalleyBasis] = {}


def build_sl(r: int) -> ChevalleyBasis:
    basis = _SL_CACHE.get(r)
    if basis is None:
        basis = ChevalleyBasis(r)
        _SL_CACHE[r] = basis
    return basis


@dataclass(eq=False)
class AlmostRep:
    """A linear map from a fixed Chevalley basis into n-by-n matrices."""

    algebra: ChevalleyBasis
    field: ExactField
    dim: int
    images: tuple
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(self.images) != self.algebra.dim:
            raise DimensionMismatch(
                f"need {self.algebra.dim} images, got {len(self.images)}"
            )
        for img in self.images:
            if img.shape != (self.dim, self.dim):
                raise DimensionMismatch("image dimensions disagree")
            if img.field != self.field:
                raise FieldMismatch("image field disagrees")
        self.images = tuple(self.images)

    def image(self, key) -> DenseMatrix:
        if isinstance(key, str):
            key = self.algebra.index_of(key)
        return self.images[key]

    def apply_coords(self, coords) -> DenseMatrix:
        """Image of a coordinate vector under the linear extension."""
        coords = self.algebra._normalize_coords(coords)
        out = DenseMatrix.zeros(self.field, self.dim, self.dim)
        for i, c in coords.items():
            if c:
                out = out + self.images[i].scale(self.field.coerce(c))
        return out


@dataclass(frozen=True)
class DefectReport:
    """Pointwise defect plus the linearity-scaled bound for the full supremum."""

    pointwise: RankDistance
    uniform_bound: Fraction
    worst_pair: tuple
    dim: int

    def to_json(self) -> dict:
        return {
            "pointwise": self.pointwise.to_json(),
            "uniform_bound": str(self.uniform_bound),
            "worst_pair": list(self.worst_pair),
        }


def pointwise_defect(rep: AlmostRep) -> DefectReport:
    """Exact max over basis pairs of rk([phi(z_i), phi(z_j)] - phi([z_i, z_j]))."""
    alg = rep.algebra
    best = 0
    worst = ("", "")
    for i in range(alg.dim):
        mi = rep.images[i]
        for j in range(i + 1, alg.dim):
            mj = rep.images[j]
            d = mi * mj - mj * mi
            for k, c in alg.bracket_table(i, j).items():
                d = d - rep.images[k].scale(rep.field.from_int(c))
            r = d.rank()
            if r > best:
                best = r
                worst = (alg.label(i), alg.label(j))
    pw = RankDistance(best, rep.dim)
    return DefectReport(pw, Fraction(alg.dim**2) * pw.value, worst, rep.dim)


def sampled_defect(rep: AlmostRep, trials: int, seed: int) -> DefectReport:
    """Defect maximized over random coordinate pairs.

    Always a lower bound for the supremum over the algebra; unlike the
    pointwise defect it carries no guarantee relative to the basis maximum.
    """
    alg = rep.algebra
    rng = XorShift64Star(seed)
    best = 0
    worst = ("sample", "sample")
    for _ in range(trials):
        x = {i: rng.randint(-3, 3) for i in range(alg.dim)}
        y = {i: rng.randint(-3, 3) for i in range(alg.dim)}
        mx = rep.apply_coords(x)
        my = rep.apply_coords(y)
        d = mx * my - my * mx - rep.apply_coords(alg.bracket_coords(x, y))
        best = max(best, d.rank())
    pw = RankDistance(best, rep.dim)
    return DefectReport(pw, Fraction(alg.dim**2) * pw.value, worst, rep.dim)


def complexify(rep: AlmostRep) -> AlmostRep:
    """Reinterpret a rational almost-representation over Q(i).

    The images are unchanged entrywise, so the basis defect is unchanged;
    over complex linear combinations the defect grows by at most a factor 4,
    and distances between extended maps grow by at most a factor 2.
    """
    if rep.field != QQ:
        raise FieldMismatch("complexify starts from a rational representation")
    images = tuple(
        img.map_entries(lambda a: GaussianRational(a), QQI) for img in rep.images
    )
    meta = dict(rep.meta)
    meta["complexified"] = True
    return AlmostRep(rep.algebra, QQI, rep.dim, images, meta)


def irreducible_sl2(d: int, field: ExactField = QQ) -> AlmostRep:
    """The (d+1)-dimensional simple highest-weight representation of sl_2.

    Weight basis v_0..v_d with h v_k = (d-2k) v_k, f v_k = v_{k+1} and
    e v_k = k(d-k+1) v_{k-1}; a true representation, so its defect is zero.
    """
    if d < 0:
        raise ValueError("the highest weight must be a nonnegative integer")
    alg = build_sl(2)
    n = d + 1
    fmat = DenseMatrix(
        field,
        [
            [field.one if i == j + 1 else field.zero for j in range(n)]
            for i in range(n)
        ],
    )
    hmat = DenseMatrix.diagonal(field, [d - 2 * k for k in range(n)])
    emat = DenseMatrix(
        field,
        [
            [
                field.from_int((j) * (d - j + 1)) if i == j - 1 else field.zero
                for j in range(n)
            ]
            for i in range(n)
        ],
    )
    return AlmostRep(alg, field, n, (fmat, hmat, emat), {"tag": "irreducible_sl2", "d": d})


def direct_sum_rep(partition, field: ExactField = QQ) -> AlmostRep:
    """Block-diagonal sum of irreducible sl_2 representations L(d_i)."""
    parts = list(partition)
    if not parts:
        raise ValueError("empty partition")
    reps = [irreducible_sl2(d, field) for d in parts]
    images = []
    for idx in range(3):
        m = reps[0].images[idx]
        for rep in reps[1:]:
            m = m.direct_sum(rep.images[idx])
        images.append(m)
    dim = sum(r.dim for r in reps)
    return AlmostRep(
        build_sl(2), field, dim, tuple(images), {"tag": "direct_sum", "partition": tuple(parts)}
    )


def adjoint_rep(algebra: ChevalleyBasis, field: ExactField = QQ) -> AlmostRep:
    """The adjoint representation assembled from the structure constants."""
    d = algebra.dim
    images = []
    for i in range(d):
        cols = []
        for j in range(d):
            tab = algebra.bracket_table(i, j)
            cols.append([field.from_int(tab.get(k, 0)) for k in range(d)])
        images.append(DenseMatrix(field, list(zip(*cols))))
    return AlmostRep(algebra, field, d, tuple(images), {"tag": "adjoint"})


# -- serialization ---------------------------------------------------------------


def almostrep_to_text(rep: AlmostRep) -> str:
    import json

    header = {
        "algebra": f"sl{rep.algebra.r}",
        "field": rep.field.tag,
        "dim": rep.dim,
        "tag": rep.meta.get("tag"),
    }
    if "weight" in rep.meta:
        header["lambda"] = [str(w) for w in rep.meta["weight"]]
    if "n" in rep.meta:
        header["n"] = rep.meta["n"]
    blocks = [json.dumps(header, sort_keys=True)]
    for img in rep.images:
        blocks.append(img.to_text().rstrip("\n"))
    return "\n\n".join(blocks) + "\n"


def almostrep_from_text(text: str) -> AlmostRep:
    import json

    blocks = [b for b in text.split("\n\n") if b.strip()]
    header = json.loads(blocks[0])
    algebra = build_sl(int(header["algebra"][2:]))
    images = tuple(DenseMatrix.from_text(b) for b in blocks[1:])
    field = images[0].field
    meta = {"tag": header.get("tag")}
    if "lambda" in header:
        meta["weight"] = tuple(field.coerce(s) for s in header["lambda"])
    if "n" in header:
        meta["n"] = header["n"]
    return AlmostRep(algebra, field, int(header["dim"]), images, meta)
