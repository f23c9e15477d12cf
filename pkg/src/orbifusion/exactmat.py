"""Exact integer and rational matrix arithmetic.

Everything here is exact: integer matrices use Python's arbitrary-precision
ints, rational ones use fractions.Fraction.  Matrices are lists (or tuples)
of rows.  No floating point is used anywhere in this module.
"""

from fractions import Fraction
import math


class SingularMatrix(ValueError):
    pass


class NotFrameShaped(ValueError):
    pass


# ---------------------------------------------------------------------------
# basic helpers

def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(A):
    return [list(row) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def mat_mul(A, B):
    """Matrix product; works for int or Fraction entries."""
    if not A or not B:
        return []
    bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in A]


def mat_vec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def vec_mat(v, A):
    out = [0] * len(A[0])
    for c, row in zip(v, A):
        if c:
            for j, a in enumerate(row):
                out[j] += c * a
    return out


def mat_eq(A, B):
    return len(A) == len(B) and all(
        len(r) == len(s) and all(a == b for a, b in zip(r, s))
        for r, s in zip(A, B))


def is_identity(A):
    return all(A[i][j] == (1 if i == j else 0)
               for i in range(len(A)) for j in range(len(A[0])))


def mat_pow(A, k):
    n = len(A)
    result = identity(n)
    base = copy_matrix(A)
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def scale_to_int(A):
    """Return (B, den) with integer matrix B = den * A, den > 0 minimal."""
    den = 1
    for row in A:
        for x in row:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    B = [[int(x * den) for x in row] for row in A]
    return B, den


# ---------------------------------------------------------------------------
# Smith normal form

class SNFResult:
    """U @ A @ V = S with U, V unimodular and S in Smith normal form."""

    __slots__ = ("U", "S", "V")

    def __init__(self, U, S, V):
        self.U = U
        self.S = S
        self.V = V

    @property
    def diagonal(self):
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]

    def invariant_factors(self):
        """Diagonal entries > 1, in divisibility order."""
        return [d for d in self.diagonal if d not in (0, 1)]


def _pivot(S, t, m, n):
    # smallest nonzero absolute value in the trailing block, row-major tie-break
    best = None
    for i in range(t, m):
        for j in range(t, n):
            v = S[i][j]
            if v and (best is None or abs(v) < abs(best[2])):
                best = (i, j, v)
    return best


def snf(A):
    """Smith normal form with transforms, for any rectangular integer matrix."""
    S = copy_matrix(A)
    m = len(S)
    n = len(S[0]) if m else 0
    U = identity(m)
    V = identity(n)
    t = 0
    while t < min(m, n):
        piv = _pivot(S, t, m, n)
        if piv is None:
            break
        while True:
            i, j, _ = piv
            if i != t:
                S[t], S[i] = S[i], S[t]
                U[t], U[i] = U[i], U[t]
            if j != t:
                for row in S:
                    row[t], row[j] = row[j], row[t]
                for row in V:
                    row[t], row[j] = row[j], row[t]
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // p
                    if q:
                        for j in range(t, n):
                            S[i][j] -= q * S[t][j]
                        for j in range(m):
                            U[i][j] -= q * U[t][j]
                    if S[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // p
                    if q:
                        for i in range(t, m):
                            S[i][j] -= q * S[i][t]
                        for i in range(n):
                            V[i][j] -= q * V[i][t]
                    if S[t][j]:
                        dirty = True
            if not dirty:
                # divisibility fix: fold in any entry the pivot does not divide
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if S[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(n):
                    S[t][j] += S[bad][j]
                for j in range(m):
                    U[t][j] += U[bad][j]
            piv = _pivot(S, t, m, n)
        if S[t][t] < 0:
            for j in range(n):
                S[t][j] = -S[t][j]
            for j in range(m):
                U[t][j] = -U[t][j]
        t += 1
    return SNFResult(U, S, V)


# ---------------------------------------------------------------------------
# Hermite normal form (row style)

def hnf(A):
    """Row Hermite normal form.

    Returns (H, U) with U unimodular, U @ A = H, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    Zero rows sink to the bottom.
    """
    H = copy_matrix(A)
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for col in range(n):
        # gcd elimination below row r
        while True:
            rows = [i for i in range(r, m) if H[i][col]]
            if not rows:
                break
            piv = min(rows, key=lambda i: (abs(H[i][col]), i))
            if piv != r:
                H[r], H[piv] = H[piv], H[r]
                U[r], U[piv] = U[piv], U[r]
            p = H[r][col]
            done = True
            for i in range(r + 1, m):
                if H[i][col]:
                    q = H[i][col] // p
                    for j in range(n):
                        H[i][j] -= q * H[r][j]
                    for j in range(m):
                        U[i][j] -= q * U[r][j]
                    if H[i][col]:
                        done = False
            if done:
                break
        if r < m and H[r][col]:
            if H[r][col] < 0:
                H[r] = [-x for x in H[r]]
                U[r] = [-x for x in U[r]]
            p = H[r][col]
            for i in range(r):
                q = H[i][col] // p
                if q:
                    for j in range(n):
                        H[i][j] -= q * H[r][j]
                    for j in range(m):
                        U[i][j] -= q * U[r][j]
            r += 1
        if r == m:
            break
    return H, U


def hnf_basis(A):
    """Nonzero rows of the HNF of A: a canonical basis of the row span."""
    H, _ = hnf(A)
    return [row for row in H if any(row)]


def left_kernel(A):
    """Rows spanning {x : x @ A = 0} over the integers (saturated)."""
    H, U = hnf(A)
    return [U[i] for i in range(len(H)) if not any(H[i])]


def det_int(A):
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = copy_matrix(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# rational linear algebra

def frac_matrix(A):
    return [[Fraction(x) for x in row] for row in A]


def rat_inverse(A):
    """Exact inverse of a square rational matrix; raises SingularMatrix."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col]:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [row[n:] for row in M]


def solve_right(A, B):
    """Solve A @ X = B exactly over the rationals (A square nonsingular)."""
    return mat_mul(rat_inverse(A), B)


def det_frac(A):
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = frac_matrix(A)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for i in range(col + 1, n):
            if M[i][col]:
                f = M[i][col] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return det


# ---------------------------------------------------------------------------
# characteristic polynomials and frame shapes

def charpoly(A):
    """Coefficients of det(xI - A), highest degree first, exact integers."""
    n = len(A)
    coeffs = [1]
    B = copy_matrix(A)
    for k in range(1, n + 1):
        c = -sum(B[i][i] for i in range(n))
        assert c % k == 0
        c //= k
        coeffs.append(c)
        if k < n:
            for i in range(n):
                B[i][i] += c
            B = mat_mul(A, B)
    return coeffs


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_divmod(p, q):
    """Exact polynomial division over Z; returns (quotient, remainder)."""
    p = list(p)
    dq = len(q) - 1
    quot = []
    while len(p) - 1 >= dq and any(p):
        if p[0] % q[0]:
            return None, p
        c = p[0] // q[0]
        quot.append(c)
        for i in range(dq + 1):
            p[i] -= c * q[i]
        assert p[0] == 0
        p.pop(0)
    return quot, p


def divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def cyclotomic(e):
    """Coefficients of the e-th cyclotomic polynomial (exact division)."""
    p = [1] + [0] * (e - 1) + [-1]
    for d in divisors(e):
        if d < e:
            p, rem = poly_divmod(p, cyclotomic(d))
            assert p is not None and not any(rem)
    return p


def frame_shape(A, order):
    """Factor det(xI - A) as a product of (x^d - 1)^{m_d} with d | order.

    Returns the map {d: m_d} with integer exponents; m_d may be negative
    (the identity eigenvalue can be over-counted by longer cycles, as for
    -identity whose shape is {1: -rank, 2: rank}).  The factorization is
    unique when it exists; existence fails exactly when some cyclotomic
    factor of the characteristic polynomial does not divide x^order - 1.
    """
    p = charpoly(A)
    divs = divisors(order)
    mult = {}
    for e in divs:
        phi = cyclotomic(e)
        m = 0
        while len(p) - 1 >= len(phi) - 1:
            quot, rem = poly_divmod(p, phi)
            if quot is None or any(rem):
                break
            p = quot
            m += 1
        mult[e] = m
    if p != [1]:
        raise NotFrameShaped(
            "characteristic polynomial has roots that are not order-th roots of unity")
    # mult[e] = sum of m_d over multiples d of e; invert from the top down
    shape = {}
    for d in sorted(divs, reverse=True):
        m = mult[d] - sum(shape.get(k, 0) for k in divs if k > d and k % d == 0)
        if m:
            shape[d] = m
    return shape


def shape_poly(shape):
    """Expand a frame shape into (numerator, denominator) coefficient lists.

    The numerator collects factors with positive exponent, the denominator
    those with negative exponent, so that num/den = det(xI - A).
    """
    num, den = [1], [1]
    for d, m in sorted(shape.items()):
        factor = [1] + [0] * (d - 1) + [-1]
        for _ in range(abs(m)):
            if m > 0:
                num = poly_mul(num, factor)
            else:
                den = poly_mul(den, factor)
    return num, den


# ---------------------------------------------------------------------------
# exact values of the form  a * sqrt(b)

class SqrtRational:
    """A number a*sqrt(b) with a rational and b a positive squarefree integer."""

    __slots__ = ("coef", "radicand")

    def __init__(self, coef, radicand=1):
        coef = Fraction(coef)
        radicand = int(radicand)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        # pull square factors out of the radicand
        d = 2
        while d * d <= radicand:
            while radicand % (d * d) == 0:
                radicand //= d * d
                coef *= d
            d += 1
        self.coef = coef
        self.radicand = radicand

    @classmethod
    def sqrt(cls, n):
        n = Fraction(n)
        return cls(Fraction(1, n.denominator), n.numerator * n.denominator)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.coef * other.coef,
                                self.radicand * other.radicand)
        return SqrtRational(self.coef * Fraction(other), self.radicand)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.coef / (other.coef * other.radicand),
                                self.radicand * other.radicand)
        return SqrtRational(self.coef / Fraction(other), self.radicand)

    def __eq__(self, other):
        if isinstance(other, SqrtRational):
            return self.coef == other.coef and self.radicand == other.radicand
        return self.radicand == 1 and self.coef == other

    def __hash__(self):
        return hash((self.coef, self.radicand))

    def __repr__(self):
        if self.radicand == 1:
            return str(self.coef)
        if self.coef == 1:
            return f"sqrt({self.radicand})"
        return f"{self.coef}*sqrt({self.radicand})"
