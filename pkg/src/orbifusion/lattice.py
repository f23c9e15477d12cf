"""Even positive-definite lattices with exact rational Gram matrices.

A lattice is stored by its Gram matrix; vectors are row coordinate tuples
with respect to the lattice's own basis, so the lattice itself is Z^n and
its dual sits inside Q^n.  Sublattices and overlattices remember how their
basis sits inside the lattice they were built from (``embedding`` rows).
"""

from fractions import Fraction
import json
import math

from . import exactmat as xm


class LatticeError(ValueError):
    pass


class InvalidRank(LatticeError):
    pass


class NotIntegral(LatticeError):
    pass


class NotEven(LatticeError):
    pass


class NotPositiveDefinite(LatticeError):
    pass


class ParseError(LatticeError):
    pass


def _frac(x):
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    return Fraction(x)


def _freeze(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


class Lattice:
    """A positive-definite lattice given by an exact Gram matrix."""

    __slots__ = ("gram", "name", "embedding", "_dg")

    def __init__(self, gram, name=None, embedding=None, check=True):
        self.gram = _freeze(gram)
        self.name = name
        self.embedding = _freeze(embedding) if embedding is not None else None
        self._dg = None
        if check:
            n = len(self.gram)
            if any(len(row) != n for row in self.gram):
                raise LatticeError("Gram matrix must be square")
            for i in range(n):
                for j in range(i):
                    if self.gram[i][j] != self.gram[j][i]:
                        raise LatticeError("Gram matrix must be symmetric")
            if not self._is_positive_definite():
                raise NotPositiveDefinite("Gram matrix is not positive definite")

    # -- basic invariants ---------------------------------------------------

    def _is_positive_definite(self):
        # symmetric Gaussian elimination: all pivots > 0 iff all leading
        # principal minors > 0
        n = self.rank
        M = [list(row) for row in self.gram]
        for k in range(n):
            if M[k][k] <= 0:
                return False
            for i in range(k + 1, n):
                f = M[i][k] / M[k][k]
                if f:
                    M[i] = [x - f * y for x, y in zip(M[i], M[k])]
        return True

    @property
    def rank(self):
        return len(self.gram)

    def det(self):
        return xm.det_frac(self.gram)

    @property
    def is_integral(self):
        return all(x.denominator == 1 for row in self.gram for x in row)

    @property
    def is_even(self):
        return self.is_integral and all(
            self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_doubly_even(self):
        """True iff every vector norm lies in 4Z.

        Equivalent to: basis norms in 4Z and pairings in 2Z (expand the norm
        of an integer combination).
        """
        g = self.gram
        n = self.rank
        return (self.is_integral
                and all(g[i][i] % 4 == 0 for i in range(n))
                and all(g[i][j] % 2 == 0 for i in range(n) for j in range(i)))

    def require_even(self):
        if not self.is_even:
            raise NotEven(f"lattice {self.name or ''} is not even")
        return self

    # -- vector arithmetic --------------------------------------------------

    def pairing(self, v, w):
        return sum((Fraction(a) * self.gram[i][j] * Fraction(b)
                    for i, a in enumerate(v) if a
                    for j, b in enumerate(w) if b), Fraction(0))

    def norm(self, v):
        return self.pairing(v, v)

    def contains(self, v):
        return all(Fraction(x).denominator == 1 for x in v)

    def in_dual(self, v):
        """True iff v pairs integrally with every lattice vector."""
        return all(self.pairing(v, e).denominator == 1
                   for e in xm.identity(self.rank))

    def reduce_mod(self, v):
        """Canonical coset representative: coordinates reduced into [0, 1)."""
        return tuple(Fraction(x) - math.floor(Fraction(x)) for x in v)

    # -- constructions ------------------------------------------------------

    def dual(self):
        """Dual lattice; basis rows of the dual are gram^{-1} in our coords."""
        inv = xm.rat_inverse(self.gram)
        return Lattice(inv, name=f"{self.name}*" if self.name else None,
                       embedding=inv, check=False)

    def rescale(self, c, name=None):
        c = Fraction(c)
        if c <= 0:
            raise LatticeError("scale factor must be positive")
        return Lattice([[x * c for x in row] for row in self.gram],
                       name=name, check=False)

    def sublattice(self, rows, name=None):
        """Lattice spanned by the given (independent) row vectors."""
        rows = _freeze(rows)
        gram = xm.mat_mul(xm.mat_mul(rows, self.gram),
                          xm.transpose(rows))
        return Lattice(gram, name=name, embedding=rows)

    def index_of_sublattice(self, sub_det):
        """[self : sub] from determinants: index^2 = det(sub) / det(self)."""
        ratio = Fraction(sub_det) / self.det()
        root = xm.SqrtRational.sqrt(ratio)
        if root.radicand != 1 or root.coef.denominator != 1:
            raise LatticeError("determinant ratio is not a perfect square")
        return int(root.coef)

    def overlattice(self, glue, name=None):
        """Extend by glue vectors (coordinates w.r.t. our basis).

        The glue vectors must pair integrally with the lattice and with each
        other, and have even norms, so the result is again even integral.
        """
        self.require_even()
        for v in glue:
            if not self.in_dual(v):
                raise NotIntegral("glue vector outside the dual lattice")
        for i, v in enumerate(glue):
            for w in glue[:i + 1]:
                p = self.pairing(v, w)
                if p.denominator != 1:
                    raise NotIntegral("glue vectors do not pair integrally")
            if self.norm(v) % 2 != 0:
                raise NotEven("glue vector has odd norm")
        rows = [list(map(Fraction, v)) for v in glue]
        rows += xm.identity(self.rank)
        scaled, den = xm.scale_to_int(rows)
        basis = [[Fraction(x, den) for x in row] for row in xm.hnf_basis(scaled)]
        if len(basis) != self.rank:
            raise LatticeError("glue vectors must lie in Q otimes L")
        out = self.sublattice(basis, name=name)
        out.require_even()
        return out

    def kernel_sublattice(self, functionals):
        """Sublattice pairing integrally with every functional.

        Functionals are vectors in our coordinate system.  Returns
        (sublattice, index).
        """
        n = self.rank
        if not functionals:
            return self.sublattice(xm.identity(n)), 1
        cols = []
        for f in functionals:
            col = [self.pairing(e, f) for e in xm.identity(n)]
            cols.append(col)
        A = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
        Aint, den = xm.scale_to_int(A)
        if den == 1:
            return self.sublattice(xm.identity(n)), 1
        stacked = Aint + [[den if i == j else 0 for j in range(len(cols))]
                          for i in range(len(cols))]
        kern = xm.left_kernel(stacked)
        rows = xm.hnf_basis([row[:n] for row in kern])
        if len(rows) != n:
            raise LatticeError("kernel sublattice lost rank")
        index = abs(xm.det_int(rows))
        return self.sublattice(rows), index

    # -- discriminant group -------------------------------------------------

    def discriminant_group(self):
        if self._dg is None:
            if not self.is_integral:
                raise NotIntegral("discriminant group needs an integral lattice")
            self._dg = DiscriminantGroup(self)
        return self._dg

    # -- short vectors ------------------------------------------------------

    def _cholesky(self):
        """Exact q[i][i], q[i][j] with Q(v) = sum_i q_ii (v_i + sum_j>i q_ij v_j)^2."""
        n = self.rank
        q = [list(map(Fraction, row)) for row in self.gram]
        for i in range(n):
            for j in range(i + 1, n):
                q[j][i] = q[i][j]
                q[i][j] = q[i][j] / q[i][i]
            for k in range(i + 1, n):
                for l in range(k, n):
                    q[k][l] -= q[k][i] * q[i][l]
                    if l > k:
                        q[l][k] = 0
        return q

    def short_vectors(self, max_norm, coset=None):
        """All vectors of the coset (default: the lattice) of norm <= max_norm.

        Exact enumeration: a rational Cholesky decomposition proposes integer
        windows using floating point with a safety margin, every candidate is
        kept or pruned by an exact partial-norm check.  Output is sorted by
        (norm, coordinates).
        """
        max_norm = Fraction(max_norm)
        if max_norm < 0:
            return []
        n = self.rank
        if n == 0:
            return [()] if max_norm >= 0 else []
        t = [Fraction(x) for x in (coset if coset is not None else [0] * n)]
        q = self._cholesky()
        results = []
        v = [Fraction(0)] * n

        def descend(i, remaining, shifts):
            # shifts[j] = sum_{k>j} q[j][k] * v[k], maintained incrementally
            center = -shifts[i] - t[i]
            radius2 = remaining / q[i][i]
            r = math.sqrt(float(radius2)) + 1e-9
            lo = math.ceil(float(center) - r) - 1
            hi = math.floor(float(center) + r) + 1
            for c in range(lo, hi + 1):
                vi = c + t[i]
                term = q[i][i] * (vi + shifts[i]) ** 2
                if term > remaining:
                    continue
                v[i] = vi
                if i == 0:
                    results.append(tuple(v))
                else:
                    new_shifts = list(shifts)
                    for j in range(i):
                        new_shifts[j] += q[j][i] * vi
                    descend(i - 1, remaining - term, new_shifts)

        descend(n - 1, max_norm, [Fraction(0)] * n)
        results.sort(key=lambda vec: (self.norm(vec), vec))
        return results

    def minimum(self, search_bound=None):
        """Minimal nonzero norm, searching upward from the smallest plausible bound."""
        bound = Fraction(search_bound) if search_bound else Fraction(1, 2)
        while True:
            vs = [v for v in self.short_vectors(bound) if any(v)]
            if vs:
                return min(self.norm(v) for v in vs)
            bound *= 2

    # -- serialization ------------------------------------------------------

    def to_obj(self):
        obj = {
            "format": "lattice",
            "rank": self.rank,
            "gram": [[str(x) for x in row] for row in self.gram],
        }
        if self.name:
            obj["name"] = self.name
        if self.embedding is not None:
            obj["embedding"] = [[str(x) for x in row] for row in self.embedding]
        return obj

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(canonical_json(self.to_obj()))

    @classmethod
    def from_obj(cls, obj):
        try:
            gram = [[_frac(x) for x in row] for row in obj["gram"]]
            if len(gram) != obj["rank"]:
                raise ParseError("rank field does not match the Gram matrix")
            emb = obj.get("embedding")
            if emb is not None:
                emb = [[_frac(x) for x in row] for row in emb]
            return cls(gram, name=obj.get("name"), embedding=emb)
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, LatticeError):
                raise
            raise ParseError(f"bad lattice document: {exc}") from exc

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: {exc}") from exc
        return cls.from_obj(obj)

    def __repr__(self):
        return f"Lattice(rank={self.rank}, name={self.name!r})"


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


class DiscriminantGroup:
    """The finite abelian group dual/lattice with SNF generators."""

    __slots__ = ("lattice", "orders", "gens", "_V", "_keep")

    def __init__(self, lat):
        G = [[int(x) for x in row] for row in lat.gram]
        res = xm.snf(G)
        diag = res.diagonal
        inv = xm.rat_inverse(xm.mat_mul(G, res.V))
        keep = [i for i, d in enumerate(diag) if d > 1]
        self.lattice = lat
        self.orders = tuple(diag[i] for i in keep)
        self.gens = tuple(tuple(inv[i]) for i in keep)
        self._V = res.V
        self._keep = keep

    @property
    def order(self):
        out = 1
        for d in self.orders:
            out *= d
        return out

    def coords_of(self, v):
        """Coordinates of v + L w.r.t. the SNF generators."""
        k = [self.lattice.pairing(v, e) for e in xm.identity(self.lattice.rank)]
        if any(x.denominator != 1 for x in k):
            raise NotIntegral("vector is not in the dual lattice")
        kv = xm.vec_mat([int(x) for x in k], self._V)
        return tuple(kv[i] % self.orders[j]
                     for j, i in enumerate(self._keep))

    def vector_of(self, coords):
        v = [Fraction(0)] * self.lattice.rank
        for c, gen in zip(coords, self.gens):
            for i, x in enumerate(gen):
                v[i] += c * x
        return self.lattice.reduce_mod(v)


# ---------------------------------------------------------------------------
# standard constructions

_CHAINS = {
    "E6": [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)],
    "E7": [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
    "E8": [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)],
}


def root_lattice(kind, n=None):
    """Root lattice with the standard simple-root Gram matrix (norms 2)."""
    kind = kind.upper()
    if kind.startswith("A") and kind[1:].isdigit():
        kind, n = "A", int(kind[1:])
    elif kind.startswith("D") and kind[1:].isdigit():
        kind, n = "D", int(kind[1:])
    elif kind in ("E6", "E7", "E8"):
        edges = _CHAINS[kind]
        n = int(kind[1])
        gram = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for a, b in edges:
            gram[a - 1][b - 1] = gram[b - 1][a - 1] = -1
        lat = Lattice(gram, name=kind)
        expected = {6: 3, 7: 2, 8: 1}[n]
        assert lat.det() == expected
        return lat
    if kind == "A":
        if n is None or n < 1:
            raise InvalidRank("A_n needs n >= 1")
        gram = [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
                 for j in range(n)] for i in range(n)]
        return Lattice(gram, name=f"A{n}")
    if kind == "D":
        if n is None or n < 3:
            raise InvalidRank("D_n needs n >= 3")
        gram = [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
                 for j in range(n)] for i in range(n)]
        # fork: last root e_{n-1}+e_n attaches to node n-2 instead of n-1
        gram[n - 1][n - 2] = gram[n - 2][n - 1] = 0
        gram[n - 1][n - 3] = gram[n - 3][n - 1] = -1
        return Lattice(gram, name=f"D{n}")
    raise InvalidRank(f"unknown root lattice kind {kind!r}")


def direct_sum(lats, name=None):
    """Orthogonal direct sum; block-diagonal Gram."""
    total = sum(l.rank for l in lats)
    gram = [[Fraction(0)] * total for _ in range(total)]
    ofs = 0
    for lat in lats:
        for i in range(lat.rank):
            for j in range(lat.rank):
                gram[ofs + i][ofs + j] = lat.gram[i][j]
        ofs += lat.rank
    return Lattice(gram, name=name, check=False)


def leech():
    """The Leech lattice in Golay-code coordinates.

    Entries live in (1/sqrt 8)Z: integer coordinate vectors x with all
    coordinates congruent mod 2, the mod-4 pattern on a Golay codeword, and
    coordinate sum 0 mod 8 (even type) or 4 mod 8 (odd type).  The Gram
    matrix of the integer coordinates is divided by 8, keeping everything
    rational.
    """
    from . import golay
    X = leech_coordinates()
    gram = [[Fraction(num, 8) for num in row]
            for row in xm.mat_mul(X, xm.transpose(X))]
    lat = Lattice(gram, name="leech", check=False)
    assert lat.det() == 1 and lat.is_even
    return lat


_LEECH_BASIS = None


def leech_coordinates():
    """Integer coordinate rows (scaled by sqrt 8) of a fixed Leech basis."""
    global _LEECH_BASIS
    if _LEECH_BASIS is None:
        from . import golay
        code = golay.golay()
        gens = []
        for word in code.basis:
            gens.append([2 * (word >> i & 1) for i in range(24)])
        for i in range(1, 24):
            gens.append([0] * 24)
            gens[-1][0] = 4
            gens[-1][i] = -4
        first = [0] * 24
        first[0], first[1] = 4, 4
        gens.append(first)
        odd = [1] * 24
        odd[0] = -3
        gens.append(odd)
        basis = xm.hnf_basis(gens)
        assert len(basis) == 24
        assert abs(xm.det_int(basis)) == 8 ** 12
        _LEECH_BASIS = tuple(tuple(row) for row in basis)
    return _LEECH_BASIS
