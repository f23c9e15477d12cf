"""The extended binary Golay code and permutations stabilizing it.

Coordinates are the projective line over GF(23): points 0..22 plus a point
at infinity stored at index 23.  The code is the extended quadratic-residue
code of length 24; its invariants (dimension 12, weights 0/8/12/16/24 with
counts 1/759/2576/759/1, self-duality) are verified at construction.  The
stabilizer of the code in Sym(24) is the Mathieu group M24; generators are
provided and checked against the code, never trusted.
"""

from functools import lru_cache

P = 23
INF = 23
N = 24


# ---------------------------------------------------------------------------
# GF(2) polynomial arithmetic on int bitmasks (bit k = coefficient of x^k)

def _poly_mod(a, b):
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db and a:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def _qr_generator_poly():
    """Lexicographically smallest degree-11 divisor of x^23 - 1 over GF(2)."""
    target = (1 << 23) | 1
    found = []
    for cand in range(1 << 11, 1 << 12):
        if cand & 1 and _poly_mod(target, cand) == 0:
            found.append(cand)
    assert found, "no degree-11 factor of x^23 - 1"
    return min(found)


class GolayCode:
    """Extended [24,12,8] binary code; words are int bitmasks."""

    __slots__ = ("basis", "_pivots", "_echelon")

    def __init__(self):
        g = _qr_generator_poly()
        basis = []
        for i in range(12):
            word = g << i                      # cyclic code of length 23
            if (bin(word).count("1")) % 2:
                word |= 1 << INF               # overall parity extension
            basis.append(word)
        self._echelon, self._pivots = _echelonize(basis)
        self.basis = tuple(self._echelon)
        self._verify()

    def _verify(self):
        words = list(self.words())
        assert len(words) == 4096
        dist = {}
        for w in words:
            dist[bin(w).count("1")] = dist.get(bin(w).count("1"), 0) + 1
        assert dist == {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}
        for a in self.basis:
            for b in self.basis:
                assert bin(a & b).count("1") % 2 == 0     # self-dual

    def words(self):
        for mask in range(4096):
            w = 0
            m = mask
            i = 0
            while m:
                if m & 1:
                    w ^= self.basis[i]
                i += 1
                m >>= 1
            yield w

    def contains(self, word):
        return _reduce(word, self._echelon, self._pivots) == 0

    def coords(self, word):
        """Expression of a codeword over the echelon basis, or None."""
        out = 0
        for i, (b, p) in enumerate(zip(self._echelon, self._pivots)):
            if word >> p & 1:
                word ^= b
                out |= 1 << i
        return out if word == 0 else None

    def solve_parities(self, supports, parities):
        """A codeword with prescribed |word & support| parities, or None.

        The parity of the intersection with a fixed support is GF(2)-linear
        in the codeword, so this is a 12-variable linear solve.
        """
        rows = []
        rhs = []
        for s, p in zip(supports, parities):
            rows.append(sum(((bin(b & s).count("1") & 1) << j)
                            for j, b in enumerate(self.basis)))
            rhs.append(p & 1)
        sol = _solve_gf2(rows, rhs, 12)
        if sol is None:
            return None
        word = 0
        for j in range(12):
            if sol >> j & 1:
                word ^= self.basis[j]
        return word


def _echelonize(rows):
    ech, pivots = [], []
    for row in rows:
        for b, p in zip(ech, pivots):
            if row >> p & 1:
                row ^= b
        if row:
            p = row.bit_length() - 1
            ech.append(row)
            pivots.append(p)
    order = sorted(range(len(ech)), key=lambda i: -pivots[i])
    return [ech[i] for i in order], [pivots[i] for i in order]


def _reduce(word, ech, pivots):
    for b, p in zip(ech, pivots):
        if word >> p & 1:
            word ^= b
    return word


def _solve_gf2(rows, rhs, nvars):
    """Solve rows[i] . x = rhs[i] over GF(2); x packed as an int, or None."""
    aug = [(r | (b << nvars)) for r, b in zip(rows, rhs)]
    pivots = []
    ech = []
    for row in aug:
        for b, p in zip(ech, pivots):
            if row >> p & 1:
                row ^= b
        lead = row & ((1 << nvars) - 1)
        if lead:
            ech.append(row)
            pivots.append(lead.bit_length() - 1)
        elif row:
            return None                       # 0 = 1: inconsistent
    x = 0
    for row, p in sorted(zip(ech, pivots), key=lambda t: t[1]):
        val = (row >> nvars) & 1
        acc = 0
        mask = row & ((1 << nvars) - 1) & ~(1 << p)
        while mask:
            low = mask & -mask
            if x >> (low.bit_length() - 1) & 1:
                acc ^= 1
            mask ^= low
        if (acc ^ val):
            x |= 1 << p
    return x


@lru_cache(maxsize=1)
def golay():
    return GolayCode()


# ---------------------------------------------------------------------------
# permutations of the 24 points, as tuples perm[i] = image of i

def perm_compose(a, b):
    """a then b: x -> b[a[x]]."""
    return tuple(b[a[x]] for x in range(N))


def perm_inverse(a):
    out = [0] * N
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def perm_cycles(a):
    seen = [False] * N
    cycles = []
    for start in range(N):
        if not seen[start]:
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = a[x]
            cycles.append(tuple(cyc))
    return cycles


def perm_apply_mask(a, mask):
    out = 0
    for i in range(N):
        if mask >> i & 1:
            out |= 1 << a[i]
    return out


def stabilizes_code(perm, code=None):
    code = code or golay()
    return all(code.contains(perm_apply_mask(perm, b)) for b in code.basis)


def _mod_perm(fn):
    images = [fn(x) for x in range(P)] + [fn(INF)]
    assert sorted(images) == list(range(N))
    return tuple(images)


def _squares():
    return {(x * x) % P for x in range(1, P)}


@lru_cache(maxsize=1)
def m24_generators():
    """Verified generators of the code stabilizer.

    The three projective maps x+1, 2x, -1/x generate PSL(2,23); the fourth
    generator mixes cubing with multiplication by a square and extends the
    group to all of M24.  Every returned permutation is checked to stabilize
    the code; the fourth is located by a small search over the formula
    family, since its exact shape is convention-dependent.
    """
    code = golay()
    sq = _squares()

    def alpha(x):
        return INF if x == INF else (x + 1) % P

    def beta(x):
        return INF if x == INF else (2 * x) % P

    def gamma(x):
        if x == INF:
            return 0
        if x == 0:
            return INF
        return (-pow(x, P - 2, P)) % P

    gens = [_mod_perm(alpha), _mod_perm(beta), _mod_perm(gamma)]
    for g in gens:
        assert stabilizes_code(g, code)

    delta = None
    for c in range(1, P):
        for e in (3, 5):
            def cand(x, c=c, e=e):
                if x == INF:
                    return INF
                if x == 0:
                    return 0
                y = pow(x, e, P)
                return (y * pow(c, P - 2, P)) % P if x in sq else (y * c) % P
            perm = _mod_perm(cand)
            if stabilizes_code(perm, code):
                delta = perm
                break
        if delta:
            break
    assert delta is not None, "no order-extending generator found"
    gens.append(delta)
    return tuple(gens)
