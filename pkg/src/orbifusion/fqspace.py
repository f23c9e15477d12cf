"""Finite quadratic spaces (A, q) with q: A -> Q/Z.

A space is a finite abelian group presented as a direct sum of cyclic
factors, with q given on the generators and the polar bilinear form
b(x, y) = q(x+y) - q(x) - q(y) given between generators.  Values of q on
arbitrary elements follow from q(sum c_i g_i) = sum c_i^2 q_i +
sum_{i<j} c_i c_j b_ij.  Everything is exact (Fraction mod 1); only the
Gauss sum is floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
import cmath
import itertools
import json
import math
import random

from . import exactmat as xm
from .lattice import ParseError, canonical_json


class NotMember(ValueError):
    pass


def _mod1(x):
    x = Fraction(x)
    return x - math.floor(x)


def _invariant_factors(orders):
    """Canonical invariant factors of a product of cyclic groups."""
    powers = {}
    for s in orders:
        rem = s
        d = 2
        while d * d <= rem:
            if rem % d == 0:
                e = 0
                while rem % d == 0:
                    rem //= d
                    e += 1
                powers.setdefault(d, []).append(d ** e)
            d += 1
        if rem > 1:
            powers.setdefault(rem, []).append(rem)
    for p in powers:
        powers[p].sort(reverse=True)
    k = max((len(v) for v in powers.values()), default=0)
    factors = []
    for i in range(k):
        f = 1
        for v in powers.values():
            if i < len(v):
                f *= v[i]
        factors.append(f)
    return tuple(sorted(factors))


class FiniteQuadraticSpace:
    __slots__ = ("orders", "q_gens", "b_matrix")

    def __init__(self, orders, q_gens, b_matrix, check=True):
        self.orders = tuple(int(s) for s in orders)
        self.q_gens = tuple(_mod1(q) for q in q_gens)
        self.b_matrix = tuple(tuple(_mod1(x) for x in row) for row in b_matrix)
        if check:
            n = len(self.orders)
            assert len(self.q_gens) == n and len(self.b_matrix) == n
            for i, s in enumerate(self.orders):
                if s < 2:
                    raise ValueError("generator orders must be >= 2")
                if (2 * s * self.q_gens[i]).denominator != 1:
                    raise ValueError("q denominator incompatible with generator order")
                if _mod1(s * s * self.q_gens[i]) != 0:
                    raise ValueError("q is not well defined on the cyclic factor")
                for j in range(n):
                    if self.b_matrix[i][j] != self.b_matrix[j][i]:
                        raise ValueError("b is not symmetric")
                    if _mod1(s * self.b_matrix[i][j]) != 0:
                        raise ValueError("b is not bilinear for the given orders")
                if _mod1(self.b_matrix[i][i] - 2 * self.q_gens[i]) != 0:
                    raise ValueError("b(x,x) must equal 2q(x)")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def trivial(cls):
        return cls((), (), ())

    @classmethod
    def from_lattice(cls, lat):
        """Discriminant group with q(x) = (x|x)/2 mod Z; lattice must be even."""
        lat.require_even()
        dg = lat.discriminant_group()
        gens = dg.gens
        q = [Fraction(lat.norm(g), 2) for g in gens]
        b = [[lat.pairing(g, h) for h in gens] for g in gens]
        return cls(dg.orders, q, b)

    def negate(self):
        return FiniteQuadraticSpace(
            self.orders, [-q for q in self.q_gens],
            [[-x for x in row] for row in self.b_matrix], check=False)

    # -- basic queries ---------------------------------------------------------

    @property
    def rank_gens(self):
        return len(self.orders)

    def order(self):
        out = 1
        for s in self.orders:
            out *= s
        return out

    def invariant_factors(self):
        return _invariant_factors(self.orders)

    def exponent(self):
        out = 1
        for s in self.orders:
            out = out * s // math.gcd(out, s)
        return out

    def reduce(self, coords):
        if len(coords) != len(self.orders):
            raise NotMember("wrong number of coordinates")
        return tuple(int(c) % s for c, s in zip(coords, self.orders))

    def q(self, coords):
        coords = self.reduce(coords)
        total = Fraction(0)
        for i, c in enumerate(coords):
            if c:
                total += c * c * self.q_gens[i]
                for j in range(i + 1, len(coords)):
                    if coords[j]:
                        total += c * coords[j] * self.b_matrix[i][j]
        return _mod1(total)

    def b(self, x, y):
        x = self.reduce(x)
        y = self.reduce(y)
        total = Fraction(0)
        for i, c in enumerate(x):
            if c:
                for j, d in enumerate(y):
                    if d:
                        total += c * d * self.b_matrix[i][j]
        return _mod1(total)

    def add(self, x, y):
        return tuple((a + b) % s for a, b, s in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % s for a, s in zip(x, self.orders))

    def zero(self):
        return (0,) * len(self.orders)

    def element_order(self, coords):
        out = 1
        for c, s in zip(self.reduce(coords), self.orders):
            if c:
                k = s // math.gcd(c, s)
                out = out * k // math.gcd(out, k)
        return out

    def elements(self):
        return itertools.product(*(range(s) for s in self.orders))

    # -- structure -----------------------------------------------------------

    def subspace(self, gens):
        """Space on the subgroup generated by the given coordinate tuples."""
        gens = [self.reduce(g) for g in gens]
        k = len(gens)
        if k == 0:
            return FiniteQuadraticSpace.trivial()
        n = len(self.orders)
        # relation lattice {c : sum c_i gens_i = 0}
        V = [list(g) for g in gens]
        stacked = V + [[self.orders[j] if i == j else 0 for j in range(n)]
                       for i in range(n)]
        kern = xm.left_kernel(stacked)
        relations = [row[:k] for row in kern]
        return _presented_subquotient(
            gens, relations,
            add=self.add, neg=self.neg, zero=self.zero(), q=self.q, b=self.b)

    def orthogonal_complement(self, gens):
        """Subspace of everything pairing to zero with the given generators."""
        gens = [self.reduce(g) for g in gens]
        n = len(self.orders)
        if not gens:
            return self.subspace([tuple(int(i == j) for j in range(n))
                                  for i in range(n)])
        B = [[self.b(tuple(int(i == l) for l in range(n)), g) for g in gens]
             for i in range(n)]
        Bint, den = xm.scale_to_int(B)
        k = len(gens)
        stacked = Bint + [[den if i == j else 0 for j in range(k)]
                          for i in range(k)]
        kern = xm.left_kernel(stacked)
        rows = [tuple(r[:n]) for r in kern]
        # add the order relations so representatives reduce correctly
        rows += [tuple(self.orders[j] if i == j else 0 for j in range(n))
                 for i in range(n)]
        sub_gens = [self.reduce(r) for r in xm.hnf_basis([list(r) for r in rows])]
        sub_gens = [g for g in sub_gens if any(g)]
        return self.subspace(sub_gens)

    def primary_part(self, p):
        """The p-Sylow subgroup with the restricted form, plus a lift map."""
        gens = []
        lifts = []
        for i, s in enumerate(self.orders):
            a = 1
            while s % p == 0:
                s //= p
                a *= p
            if a > 1:
                m = self.orders[i] // a        # prime-to-p cofactor
                lifts.append((i, m, a))
                gens.append(tuple(m if i == j else 0
                                  for j in range(len(self.orders))))
        if not gens:
            return FiniteQuadraticSpace.trivial(), []
        q = [self.q(g) for g in gens]
        b = [[self.b(g, h) for h in gens] for g in gens]
        orders = [a for (_, _, a) in lifts]
        return FiniteQuadraticSpace(orders, q, b), lifts

    # -- invariants ------------------------------------------------------------

    ENUM_LIMIT = 10 ** 6

    def q_multiset(self):
        """Sorted (element order, q value, count) triples; full when feasible."""
        counts = {}
        if self.order() <= self.ENUM_LIMIT:
            pool = self.elements()
        else:
            pool = (tuple(int(i == j) for j in range(len(self.orders)))
                    for i in range(len(self.orders)))
        for x in pool:
            key = (self.element_order(x), self.q(x))
            counts[key] = counts.get(key, 0) + 1
        return tuple(sorted((o, str(v), c) for (o, v), c in counts.items()))

    def gauss_sum(self):
        """Complex sum of e^{2 pi i q(x)} over all elements (floating point)."""
        den = 2 * self.exponent() if self.orders else 1
        table = [cmath.exp(2j * cmath.pi * k / den) for k in range(den)]
        qs = [int(q * den) % den for q in self.q_gens]
        bs = [[int(x * den) % den for x in row] for row in self.b_matrix]
        total = 0j
        n = len(self.orders)
        for x in self.elements():
            acc = 0
            for i in range(n):
                c = x[i]
                if c:
                    acc += c * c * qs[i]
                    for j in range(i + 1, n):
                        if x[j]:
                            acc += c * x[j] * bs[i][j]
            total += table[acc % den]
        return total

    def invariants(self):
        return {
            "order": self.order(),
            "invariant_factors": list(self.invariant_factors()),
            "q_multiset": self.q_multiset(),
            "gauss_sum": self.gauss_sum(),
        }

    # -- serialization -----------------------------------------------------------

    def to_obj(self):
        return {
            "format": "fqspace",
            "orders": list(self.orders),
            "q_gens": [str(q) for q in self.q_gens],
            "b_matrix": [[str(x) for x in row] for row in self.b_matrix],
        }

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(canonical_json(self.to_obj()))

    @classmethod
    def from_obj(cls, obj):
        try:
            return cls(obj["orders"],
                       [Fraction(q) for q in obj["q_gens"]],
                       [[Fraction(x) for x in row] for row in obj["b_matrix"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad quadratic space document: {exc}") from exc

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: {exc}") from exc
        return cls.from_obj(obj)

    def __repr__(self):
        return f"FiniteQuadraticSpace(orders={self.orders})"

    # -- isomorphism testing -------------------------------------------------------

    def is_isomorphic(self, other, tol=1e-9):
        """An isomorphism witness preserving q, or None.

        Splits both spaces into p-primary orthogonal components, screens each
        pair by invariants, then backtracks over generator images constrained
        by element order, q value, and pairings with the already-placed
        generators.  The returned witness is fully verified.
        """
        if self.invariant_factors() != other.invariant_factors():
            return None
        if self.order() == 1:
            return IsomWitness(self.orders, ())
        primes = sorted(set(_prime_factors(self.order())))
        maps = {}
        for p in primes:
            sp, lifts_s = self.primary_part(p)
            tp, lifts_t = other.primary_part(p)
            if sp.invariant_factors() != tp.invariant_factors():
                return None
            if sp.q_multiset() != tp.q_multiset():
                return None
            if abs(sp.gauss_sum() - tp.gauss_sum()) > tol * max(1.0, sp.order()):
                return None
            images = _backtrack_isomorphism(sp, tp)
            if images is None:
                return None
            maps[p] = (sp, lifts_s, tp, lifts_t, images)
        witness = self._combine_primary_maps(other, maps)
        if not witness.verify(self, other):
            raise AssertionError("isomorphism witness failed verification")
        return witness

    def _combine_primary_maps(self, other, maps):
        N = self.exponent()
        images = []
        for i in range(len(self.orders)):
            gen = tuple(int(i == j) for j in range(len(self.orders)))
            total = other.zero()
            for p, (sp, lifts_s, tp, lifts_t, imgs) in maps.items():
                a = 1
                while N % (a * p) == 0:
                    a *= p
                m = N // a
                cp = m * pow(m, -1, a)          # 1 mod p^v, 0 mod cofactor
                xp = tuple(c * cp % s for c, s in zip(gen, self.orders))
                # coordinates of xp w.r.t. the p-part generators of self
                pc = []
                for (idx, mult, aord) in lifts_s:
                    y = xp[idx]
                    assert y % mult == 0
                    pc.append((y // mult) % aord)
                # map through the p-part isomorphism
                timg = tp.zero()
                for c, img in zip(pc, imgs):
                    for _ in range(c):
                        timg = tp.add(timg, img)
                # lift back into the target group
                lifted = other.zero()
                for c, (idx, mult, aord) in zip(timg, lifts_t):
                    vec = tuple(mult * c if idx == j else 0
                                for j in range(len(other.orders)))
                    lifted = other.add(lifted, other.reduce(vec))
                total = other.add(total, lifted)
            images.append(total)
        return IsomWitness(self.orders, tuple(images))


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _subgroup_order(space, vectors):
    """Order of the subgroup generated by coordinate tuples."""
    n = len(space.orders)
    rows = [list(v) for v in vectors]
    rows += [[space.orders[j] if i == j else 0 for j in range(n)]
             for i in range(n)]
    quot = 1
    for s in xm.snf(rows).diagonal:
        quot *= s
    return space.order() // quot if quot else 0


def _backtrack_isomorphism(src, dst):
    """Images in dst of src's generators, or None.  Deterministic order."""
    n = len(src.orders)
    if n == 0:
        return ()
    # bucket the target elements by (order, q)
    buckets = {}
    for x in dst.elements():
        key = (dst.element_order(x), dst.q(x))
        buckets.setdefault(key, []).append(x)
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    keys = [(src.orders[i], src.q(gens[i])) for i in range(n)]
    # place rarest-first among the highest orders: maximizes early pruning
    placement = sorted(range(n), key=lambda i: (-src.orders[i],
                                                len(buckets.get(keys[i], [])),
                                                i))
    images = [None] * n

    def extend(k):
        if k == n:
            return _subgroup_order(dst, images) == src.order()
        i = placement[k]
        for cand in buckets.get(keys[i], ()):
            ok = True
            for j in placement[:k]:
                if dst.b(cand, images[j]) != src.b(gens[i], gens[j]):
                    ok = False
                    break
            if not ok:
                continue
            images[i] = cand
            placed = [images[j] for j in placement[:k + 1]]
            expected = 1
            for j in placement[:k + 1]:
                expected *= src.orders[j]
            if _subgroup_order(dst, placed) == expected and extend(k + 1):
                return True
            images[i] = None
        return False

    return tuple(images) if extend(0) else None


def orth_sum(s1, s2):
    """Orthogonal direct sum: q additive, b block diagonal."""
    n1, n2 = len(s1.orders), len(s2.orders)
    b = [[Fraction(0)] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            b[i][j] = s1.b_matrix[i][j]
    for i in range(n2):
        for j in range(n2):
            b[n1 + i][n1 + j] = s2.b_matrix[i][j]
    return FiniteQuadraticSpace(s1.orders + s2.orders,
                                s1.q_gens + s2.q_gens, b, check=False)


def _presented_subquotient(gens, relations, add, neg, zero, q, b):
    """Quadratic space on the group generated by ``gens`` modulo nothing.

    ``relations`` must span the full lattice {c : sum c_i gens_i = 0}.
    The generators are recombined through the Smith normal form of the
    relation matrix; q and b of the new generators are evaluated through
    the supplied group operations.
    """
    k = len(gens)
    rows = [list(r) for r in relations]
    if not rows:
        raise ValueError("relation lattice must have full rank for a finite group")
    res = xm.snf(rows)
    diag = res.diagonal
    if len(diag) < k or any(d == 0 for d in diag):
        raise ValueError("relations do not present a finite group")
    Vinv = xm.rat_inverse(res.V)

    def combine(coeffs):
        out = zero
        for c, g in zip(coeffs, gens):
            c = int(c)
            step = g if c >= 0 else neg(g)
            c = abs(c)
            while c:                      # binary doubling
                if c & 1:
                    out = add(out, step)
                c >>= 1
                if c:
                    step = add(step, step)
        return out

    new_gens = []
    orders = []
    for j in range(k):
        if diag[j] > 1:
            coeffs = [Vinv[j][i] for i in range(k)]
            assert all(Fraction(c).denominator == 1 for c in coeffs)
            new_gens.append(combine([int(c) for c in coeffs]))
            orders.append(diag[j])
    qv = [q(g) for g in new_gens]
    bm = [[b(g, h) for h in new_gens] for g in new_gens]
    return FiniteQuadraticSpace(orders, qv, bm)


def presentation_to_space(gens, relations, add, neg, zero, q):
    """Public wrapper computing b from q via polarization."""
    def b(x, y):
        return _mod1(q(add(x, y)) - q(x) - q(y))
    return _presented_subquotient(gens, relations, add, neg, zero, q, b)


def milgram_prediction(lat):
    """Gauss sum predicted from the lattice rank: sqrt|A| e^{2 pi i rank/8}."""
    disc = abs(lat.det())
    return math.sqrt(float(disc)) * cmath.exp(2j * cmath.pi * lat.rank / 8)


@dataclass(frozen=True)
class IsomWitness:
    """Generator-image table defining a group isomorphism preserving q."""
    source_orders: tuple
    images: tuple

    def apply(self, target, coords):
        out = target.zero()
        for c, img in zip(coords, self.images):
            step = img if c >= 0 else target.neg(img)
            for _ in range(abs(int(c))):
                out = target.add(out, step)
        return out

    def verify(self, source, target, rng=None, samples=2000):
        if source.invariant_factors() != target.invariant_factors():
            return False
        for i, img in enumerate(self.images):
            if target.element_order(img) != source.orders[i]:
                return False
        if _subgroup_order(target, self.images) != source.order():
            return False
        n = len(source.orders)
        gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        for i in range(n):
            if source.q(gens[i]) != target.q(self.images[i]):
                return False
            for j in range(i):
                if source.b(gens[i], gens[j]) != target.b(self.images[i],
                                                          self.images[j]):
                    return False
        # q on generators plus b on pairs pins q everywhere; still check
        # elementwise while that is feasible
        if source.order() <= FiniteQuadraticSpace.ENUM_LIMIT:
            seen = set()
            for x in source.elements():
                y = tuple(sum(c * img[t] for c, img in zip(x, self.images)) % s
                          for t, s in enumerate(target.orders))
                if source.q(x) != target.q(y):
                    return False
                seen.add(y)
            if len(seen) != source.order():
                return False
        else:
            rng = rng or random.Random(0)
            for _ in range(samples):
                x = tuple(rng.randrange(s) for s in source.orders)
                y = self.apply(target, x)
                if source.q(x) != target.q(y):
                    return False
        return True

    def to_obj(self):
        return {
            "format": "isom_witness",
            "source_orders": list(self.source_orders),
            "images": [list(img) for img in self.images],
        }
