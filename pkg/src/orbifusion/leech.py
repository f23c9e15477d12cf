"""Leech lattice isometries from signed Golay permutations.

A monomial isometry is a coordinate permutation stabilizing the Golay code
composed with sign changes on a codeword support.  Representatives of the
target conjugacy classes are found by a seeded random walk through the code
stabilizer, filtered by frame shape (computable from cycles and cycle sign
products alone) and then fully certified from scratch: frame shape, fixed
sublattice rank, discriminant invariants, lift order, and twisted weight.
Certification never trusts a claimed label.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import itertools
import json
import math
import os
import random

from . import exactmat as xm
from . import golay
from .golay import N, perm_compose, perm_cycles, perm_inverse
from .lattice import Lattice, LatticeError, leech, leech_coordinates, canonical_json
from .isometry import Isometry


class NotLeechStabilizing(LatticeError):
    pass


class CertificationFailed(LatticeError):
    pass


class BudgetExhausted(LatticeError):
    pass


@dataclass(frozen=True)
class ClassCertificate:
    label: str
    frame_shape: tuple            # sorted (d, m_d) pairs
    fixed_rank: int
    fixed_disc: tuple             # invariant factors of D(fixed sublattice)
    lift_order: int
    rho: Fraction

    def to_obj(self):
        return {
            "label": self.label,
            "frame_shape": [list(p) for p in self.frame_shape],
            "fixed_rank": self.fixed_rank,
            "fixed_disc": list(self.fixed_disc),
            "lift_order": self.lift_order,
            "rho": str(self.rho),
        }


def _shape_key(shape):
    return tuple(sorted(shape.items()))


CLASS_TARGETS = {
    "4C": ClassCertificate("4C", _shape_key({1: 4, 2: 2, 4: 4}), 10,
                           (2, 2, 4, 4, 4, 4), 4, Fraction(3, 4)),
    "6G": ClassCertificate("6G", _shape_key({2: 3, 6: 3}), 6,
                           (2, 2, 2, 6, 6, 6), 12, Fraction(11, 12)),
    "6E": ClassCertificate("6E", _shape_key({1: 2, 2: 2, 3: 2, 6: 2}), 8,
                           (6, 6, 6, 6), 6, Fraction(5, 6)),
    "8E": ClassCertificate("8E", _shape_key({1: 2, 2: 1, 4: 1, 8: 2}), 6,
                           (2, 4, 8, 8), 8, Fraction(7, 8)),
    "10F": ClassCertificate("10F", _shape_key({2: 2, 10: 2}), 4,
                            (2, 2, 10, 10), 20, Fraction(19, 20)),
}


@dataclass(frozen=True)
class MonomialIsometry:
    """Signed permutation: apply the permutation, negate on the sign word."""
    perm: tuple
    sign_word: int

    def __post_init__(self):
        code = golay.golay()
        if not code.contains(self.sign_word):
            raise NotLeechStabilizing("sign support is not a Golay codeword")
        if not golay.stabilizes_code(self.perm, code):
            raise NotLeechStabilizing("permutation does not stabilize the code")

    def coordinate_matrix(self):
        T = [[0] * N for _ in range(N)]
        for j in range(N):
            i = self.perm[j]
            T[i][j] = -1 if self.sign_word >> i & 1 else 1
        return T

    def frame_shape(self):
        """Cycle c with positive sign product gives (x^c - 1); negative gives
        (x^{2c} - 1)/(x^c - 1)."""
        shape = {}
        for cyc in perm_cycles(self.perm):
            c = len(cyc)
            minus = sum(self.sign_word >> i & 1 for i in cyc) % 2
            if minus:
                shape[2 * c] = shape.get(2 * c, 0) + 1
                shape[c] = shape.get(c, 0) - 1
            else:
                shape[c] = shape.get(c, 0) + 1
        return {d: m for d, m in shape.items() if m}

    def order(self):
        out = 1
        for d, _ in self.frame_shape().items():
            out = out * d // math.gcd(out, d)
        return out

    def to_obj(self):
        return {"perm": list(self.perm),
                "sign_word": [self.sign_word >> i & 1 for i in range(N)]}

    @classmethod
    def from_obj(cls, obj):
        word = sum((b & 1) << i for i, b in enumerate(obj["sign_word"]))
        return cls(tuple(obj["perm"]), word)


def monomial_to_isometry(mono, lat=None):
    """Express a monomial on the fixed Leech basis; errors if it leaves it."""
    lat = lat or leech()
    X = [list(r) for r in leech_coordinates()]
    Xt = xm.transpose(X)
    T = mono.coordinate_matrix()
    M = xm.mat_mul(xm.mat_mul(xm.rat_inverse(Xt), T), Xt)
    for row in M:
        for x in row:
            if Fraction(x).denominator != 1:
                raise NotLeechStabilizing("image of a basis vector leaves the lattice")
    return Isometry(lat, [[int(x) for x in row] for row in M])


# ---------------------------------------------------------------------------
# certification

def certify(iso, label):
    """Recompute every certificate field from scratch and compare.

    Raises CertificationFailed naming the first mismatching field.
    """
    target = CLASS_TARGETS[label]
    shape = _shape_key(iso.frame_shape())
    if shape != target.frame_shape:
        raise CertificationFailed(f"frame_shape: {shape} != {target.frame_shape}")
    fixed = iso.fixed_sublattice()
    if fixed.rank != target.fixed_rank:
        raise CertificationFailed(f"fixed_rank: {fixed.rank} != {target.fixed_rank}")
    disc = tuple(fixed.discriminant_group().orders)
    if disc != target.fixed_disc:
        raise CertificationFailed(f"fixed_disc: {disc} != {target.fixed_disc}")
    n = iso.standard_lift_order()
    if n != target.lift_order:
        raise CertificationFailed(f"lift_order: {n} != {target.lift_order}")
    rho = iso.rho_T()
    if rho != target.rho:
        raise CertificationFailed(f"rho: {rho} != {target.rho}")
    return ClassCertificate(label, shape, fixed.rank, disc, n, rho)


# ---------------------------------------------------------------------------
# class search

def _sign_count_assignments(cycle_lengths, target_shape):
    """Choices of how many cycles of each length carry a negative sign
    product so the combined frame shape matches the target."""
    lengths = sorted(set(cycle_lengths))
    counts = {c: cycle_lengths.count(c) for c in lengths}
    choices = [range(counts[c] + 1) for c in lengths]
    out = []
    for combo in itertools.product(*choices):
        shape = {}
        for c, a in zip(lengths, combo):
            k = counts[c]
            if k - a:
                shape[c] = shape.get(c, 0) + (k - a)
            if a:
                shape[2 * c] = shape.get(2 * c, 0) + a
                shape[c] = shape.get(c, 0) - a
        shape = {d: m for d, m in shape.items() if m}
        if shape == target_shape:
            out.append(dict(zip(lengths, combo)))
    return out


def _monomials_matching(perm, target_shape, limit=64):
    """Monomial candidates on a fixed permutation matching the target shape.

    For each admissible distribution of negative cycles, each concrete choice
    of which cycles go negative becomes a GF(2) parity constraint on the sign
    codeword; solvable systems yield candidates.
    """
    code = golay.golay()
    cycles = perm_cycles(perm)
    lengths = [len(c) for c in cycles]
    out = []
    for assign in _sign_count_assignments(lengths, target_shape):
        by_len = {}
        for idx, c in enumerate(cycles):
            by_len.setdefault(len(c), []).append(idx)
        pools = []
        for c, idxs in sorted(by_len.items()):
            pools.append(list(itertools.combinations(idxs, assign.get(c, 0))))
        for pick in itertools.product(*pools):
            negative = set(itertools.chain.from_iterable(pick))
            supports = []
            parities = []
            for idx, cyc in enumerate(cycles):
                supports.append(sum(1 << i for i in cyc))
                parities.append(1 if idx in negative else 0)
            word = code.solve_parities(supports, parities)
            if word is not None:
                out.append(MonomialIsometry(perm, word))
                if len(out) >= limit:
                    return out
    return out


def search_class(label, budget=3000, seed=0, collect=1):
    """Random-word search for certified representatives of a target class.

    Deterministic for a fixed seed.  Returns a list of (monomial, isometry)
    pairs, at most ``collect`` of them; raises BudgetExhausted if none is
    found within ``budget`` random words.
    """
    target = CLASS_TARGETS[label]
    shape = dict(target.frame_shape)
    gens = golay.m24_generators()
    rng = random.Random(seed)
    current = tuple(range(N))
    found = []
    seen_words = set()
    for step in range(budget):
        current = perm_compose(current, gens[rng.randrange(len(gens))])
        if rng.random() < 0.05:
            current = perm_compose(current, gens[rng.randrange(len(gens))])
        key = current
        if key in seen_words:
            continue
        seen_words.add(key)
        lengths = sorted(len(c) for c in perm_cycles(current))
        if not _sign_count_assignments(lengths, shape):
            continue
        for mono in _monomials_matching(current, shape):
            try:
                iso = monomial_to_isometry(mono)
                certify(iso, label)
            except (NotLeechStabilizing, CertificationFailed, xm.NotFrameShaped):
                continue
            found.append((mono, iso))
            if len(found) >= collect:
                return found
    if found:
        return found
    raise BudgetExhausted(f"no certified {label} representative in {budget} words")


# ---------------------------------------------------------------------------
# shipped representatives

def data_dir():
    override = os.environ.get("ORBIFUSION_DATA")
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "data")


def save_representative(label, mono, iso, directory=None):
    path = os.path.join(directory or data_dir(), f"{label}.json")
    obj = iso.to_obj(lattice_ref="leech", claimed_class=label)
    obj["monomial"] = mono.to_obj()
    with open(path, "w") as fh:
        fh.write(canonical_json(obj))
    return path


@lru_cache(maxsize=None)
def load_representative(label, directory=None):
    """The shipped representative, certified on load."""
    path = os.path.join(directory or data_dir(), f"{label}.json")
    with open(path) as fh:
        obj = json.load(fh)
    iso, claimed = Isometry.from_obj(obj, resolve=_resolve)
    cert = certify(iso, label)
    assert claimed is None or claimed == label
    return iso, cert


def _resolve(name):
    if name == "leech":
        return leech()
    raise LatticeError(f"unknown lattice reference {name!r}")
