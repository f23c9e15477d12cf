"""Analysis of lattice isometries.

The matrix of an isometry uses the column convention: column j holds the
coordinates of the image of the j-th basis vector, so a coordinate row v
maps to v @ M^T.  All derived data (orders, fixed and coinvariant parts,
twisted conformal weights, lift orders, quantum dimensions) is exact.
"""

from dataclasses import dataclass
from fractions import Fraction
import json

from . import exactmat as xm
from .lattice import Lattice, LatticeError, NotIntegral, ParseError, canonical_json


class NotAnIsometry(LatticeError):
    pass


class HasFixedPoints(LatticeError):
    pass


MAX_ORDER = 10_000


class Isometry:
    __slots__ = ("lattice", "matrix", "_order")

    def __init__(self, lattice, matrix, check=True):
        self.lattice = lattice
        self.matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        self._order = None
        if check:
            n = lattice.rank
            if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
                raise NotAnIsometry("matrix size does not match the lattice rank")
            if abs(xm.det_int(self.matrix)) != 1:
                raise NotAnIsometry("matrix is not invertible over Z")
            G = lattice.gram
            MT = xm.transpose(self.matrix)
            if not xm.mat_eq(xm.mat_mul(xm.mat_mul(MT, G), self.matrix), G):
                raise NotAnIsometry("matrix does not preserve the Gram matrix")

    def apply(self, v):
        """Image of a coordinate row vector."""
        return tuple(sum(self.matrix[i][j] * Fraction(v[j])
                         for j in range(len(v))) for i in range(len(v)))

    def order(self):
        if self._order is None:
            M = self.matrix
            power = M
            k = 1
            while not xm.is_identity(power):
                power = xm.mat_mul(power, M)
                k += 1
                if k > MAX_ORDER:
                    raise NotAnIsometry("order exceeds sanity bound")
            self._order = k
        return self._order

    def power(self, k):
        k %= self.order()
        return Isometry(self.lattice, xm.mat_pow(list(map(list, self.matrix)), k),
                        check=False)

    def frame_shape(self):
        return xm.frame_shape(self.matrix, self.order())

    # -- fixed and coinvariant sublattices -----------------------------------

    def fixed_sublattice(self):
        """Primitive sublattice of g-fixed vectors."""
        MT = xm.transpose(self.matrix)
        A = [[MT[i][j] - (1 if i == j else 0) for j in range(self.lattice.rank)]
             for i in range(self.lattice.rank)]
        rows = xm.left_kernel(A)
        return self.lattice.sublattice(xm.hnf_basis(rows) if rows else [],
                                       name="fixed")

    def coinvariant(self):
        """The sublattice orthogonal to all fixed vectors, with g restricted."""
        fixed = self.fixed_sublattice()
        n = self.lattice.rank
        if fixed.rank == 0:
            return self.lattice, self
        A = xm.mat_mul(self.lattice.gram, xm.transpose(fixed.embedding))
        Aint, _ = xm.scale_to_int(A)
        rows = xm.hnf_basis(xm.left_kernel(Aint))
        sub = self.lattice.sublattice(rows, name="coinvariant")
        return sub, self.restrict_to(sub)

    def restrict_to(self, sub):
        """Restriction to a stable sublattice given by its embedding rows."""
        R = sub.embedding
        RMt = xm.mat_mul(R, xm.transpose(self.matrix))
        Rt = xm.transpose(R)
        gramR = xm.mat_mul(R, Rt)
        A = xm.mat_mul(xm.mat_mul(RMt, Rt), xm.rat_inverse(gramR))
        M = xm.transpose(A)
        for row in M:
            for x in row:
                if Fraction(x).denominator != 1:
                    raise NotAnIsometry("sublattice is not stable under the isometry")
        return Isometry(sub, [[int(x) for x in row] for row in M])

    # -- discriminant action --------------------------------------------------

    def acts_trivially_on_discriminant(self):
        """True iff (1 - g) maps the dual lattice into the lattice."""
        inv = xm.rat_inverse(self.lattice.gram)
        MT = xm.transpose(self.matrix)
        n = self.lattice.rank
        eye = xm.identity(n)
        diff = [[eye[i][j] - MT[i][j] for j in range(n)] for i in range(n)]
        img = xm.mat_mul(inv, diff)
        return all(Fraction(x).denominator == 1 for row in img for x in row)

    # -- numerical shadows of the twisted module ------------------------------

    def eigenvalue_multiplicities(self):
        """r_j = dim of the exp(2 pi i j/p)-eigenspace, from the frame shape."""
        p = self.order()
        shape = self.frame_shape()
        r = [0] * p
        for d, m in shape.items():
            step = p // d
            for k in range(d):
                r[k * step] += m
        assert all(x >= 0 for x in r)
        return r

    def rho_T(self):
        """Minimal twisted conformal weight: sum j(p-j) r_j / (4 p^2)."""
        p = self.order()
        r = self.eigenvalue_multiplicities()
        total = sum(j * (p - j) * r[j] for j in range(1, p))
        return Fraction(total, 4 * p * p)

    def det_one_minus(self):
        """|det(1-g)|, cross-checked against the index [L : (1-g)L]."""
        n = self.lattice.rank
        eye = xm.identity(n)
        MT = xm.transpose(self.matrix)
        A = [[eye[i][j] - MT[i][j] for j in range(n)] for i in range(n)]
        d = abs(xm.det_int(A))
        if d == 0:
            raise HasFixedPoints("1 - g is singular")
        index = 1
        for s in xm.snf(A).diagonal:
            index *= s
        assert index == d, "det(1-g) disagrees with the index of (1-g)L"
        return d

    def is_fixed_point_free(self):
        n = self.lattice.rank
        A = [[(1 if i == j else 0) - self.matrix[i][j] for j in range(n)]
             for i in range(n)]
        return xm.det_int(A) != 0

    # -- standard lift ---------------------------------------------------------

    def standard_lift_order(self):
        """Order of the standard lift: p, or 2p when the halfway involution
        obstructs (2 L_{g^{p/2}}^* fails to be doubly even)."""
        p = self.order()
        if p % 2:
            return p
        phi = self.power(p // 2)
        co, _ = phi.coinvariant()
        doubled_dual = co.dual().rescale(4)
        return p if doubled_dual.is_doubly_even else 2 * p

    def standard_lift(self, u_strategy="min_vector"):
        p = self.order()
        n = self.standard_lift_order()
        if n == p:
            return LiftData(p=p, n=p)
        phi = self.power(p // 2)
        h = self._solve_sigma_class(phi)
        hnorm = self.lattice.norm(h)
        if hnorm.denominator != 1:
            u = h
        else:
            u = self._select_u(h, u_strategy)
        return LiftData(p=p, n=2 * p, h=h, u=u,
                        h_norm=hnorm, u_norm=self.lattice.norm(u),
                        u_strategy=u_strategy)

    def _solve_sigma_class(self, phi):
        """The class h + L with (h|x) = (x|(phi - 1)x)/2 mod Z on the dual.

        The right side is linear mod Z because (phi - 1) maps the dual into
        the lattice; h is pinned down in L*/L by the dual-basis pairings.
        """
        L = self.lattice
        n = L.rank
        inv = xm.rat_inverse(L.gram)
        coords = []
        vals = []
        for i in range(n):
            lam = inv[i]
            diff = [a - b for a, b in zip(phi.apply(lam), lam)]
            val = L.pairing(lam, diff) / 2
            if (2 * val).denominator != 1:
                raise LatticeError("discriminant action is not trivial enough "
                                   "to define the half-integral class")
            vals.append(val)
            coords.append(val - int(val) if val >= 0 else val - (int(val) - 1))
        h = L.reduce_mod(coords)
        if not L.in_dual(h):
            raise LatticeError("half-integral class does not lie in the dual")
        # linearity spot check of the defining functional
        for i in range(n):
            for j in range(i):
                lam = [a + b for a, b in zip(inv[i], inv[j])]
                diff = [a - b for a, b in zip(phi.apply(lam), lam)]
                lhs = (L.pairing(lam, diff) / 2 - vals[i] - vals[j])
                assert lhs.denominator == 1
        assert any(h), "order-doubled lift must have a nontrivial sigma class"
        return h

    def _select_u(self, h, strategy):
        """A vector of the dual pairing non-integrally with h.

        "min_vector": the smallest such dual vector in (norm, coords) order,
        which reproduces the printed reference values; "snf_scan": first
        discriminant generator that works, used to exercise independence of
        the choice.
        """
        L = self.lattice
        if strategy == "snf_scan":
            for gen in L.discriminant_group().gens:
                if L.pairing(h, gen).denominator != 1:
                    return L.reduce_mod(gen)
            raise LatticeError("no discriminant generator pairs fractionally with h")
        if strategy != "min_vector":
            raise ValueError(f"unknown u-selection strategy {strategy!r}")
        dual = L.dual()
        bound = Fraction(1, 2)
        while bound <= 64:
            for v in dual.short_vectors(bound):
                w = xm.vec_mat(list(v), dual.embedding)
                if L.pairing(h, w).denominator != 1:
                    return tuple(w)
            bound *= 2
        raise LatticeError("no dual vector pairing fractionally with h was found")

    # -- quantum dimension ------------------------------------------------------

    def quantum_dimension(self):
        """Exact quantum dimension of the twisted sector, as a*sqrt(b).

        sqrt(|L*/L|) * sqrt([L : (1-g)L* cap L]) divided by the product of
        d^{m_d/2} over the frame shape.
        """
        if not self.is_fixed_point_free():
            raise HasFixedPoints("quantum dimension needs a fixed-point-free isometry")
        L = self.lattice
        n = L.rank
        disc_order = abs(L.det())
        assert disc_order.denominator == 1
        # R = (1-g)L* intersected with L, inside Z^n coordinates
        inv = xm.rat_inverse(L.gram)
        MT = xm.transpose(self.matrix)
        eye = xm.identity(n)
        W = xm.mat_mul(inv, [[eye[i][j] - MT[i][j] for j in range(n)]
                             for i in range(n)])
        Winv = xm.rat_inverse(W)
        Vint, den = xm.scale_to_int(Winv)
        if den == 1:
            rows = xm.identity(n)
        else:
            stacked = Vint + [[den if i == j else 0 for j in range(n)]
                              for i in range(n)]
            kern = xm.left_kernel(stacked)
            rows = xm.hnf_basis([r[:n] for r in kern])
        index = abs(xm.det_int(rows))
        value = xm.SqrtRational.sqrt(int(disc_order)) * xm.SqrtRational.sqrt(index)
        for d, m in self.frame_shape().items():
            step = xm.SqrtRational(Fraction(d) ** (m // 2))
            if m % 2:
                step = step * xm.SqrtRational.sqrt(d)
            value = value / step
        return value

    # -- serialization ------------------------------------------------------------

    def to_obj(self, lattice_ref=None, claimed_class=None):
        obj = {
            "format": "isometry",
            "matrix": [list(row) for row in self.matrix],
        }
        obj["lattice_ref"] = lattice_ref if lattice_ref else self.lattice.to_obj()
        if claimed_class:
            obj["claimed_class"] = claimed_class
        return obj

    def save(self, path, lattice_ref=None, claimed_class=None):
        with open(path, "w") as fh:
            fh.write(canonical_json(self.to_obj(lattice_ref, claimed_class)))

    @classmethod
    def from_obj(cls, obj, resolve=None):
        try:
            ref = obj["lattice_ref"]
            if isinstance(ref, str):
                if resolve is None:
                    raise ParseError(f"cannot resolve lattice name {ref!r}")
                lat = resolve(ref)
            else:
                lat = Lattice.from_obj(ref)
            return cls(lat, obj["matrix"]), obj.get("claimed_class")
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad isometry document: {exc}") from exc

    @classmethod
    def load(cls, path, resolve=None):
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: {exc}") from exc
        return cls.from_obj(obj, resolve=resolve)

    def __repr__(self):
        return f"Isometry(rank={self.lattice.rank})"


@dataclass(frozen=True)
class LiftData:
    """Order data of the standard lift, with the half-integral classes.

    n is either p or 2p.  When n = 2p, h generates the inner automorphism
    reached at the p-th power and u marks the coset of the dual on which h
    pairs half-integrally; both are canonical coset representatives.
    """
    p: int
    n: int
    h: tuple = None
    u: tuple = None
    h_norm: Fraction = None
    u_norm: Fraction = None
    u_strategy: str = "min_vector"

    @property
    def doubled(self):
        return self.n == 2 * self.p
