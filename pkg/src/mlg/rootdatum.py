"""Root data on explicit Z^rank lattices: validation, reflections,
quadratic forms and their polarizations, lattice quotients."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import _intmat


class StructuralError(ValueError):
    """Malformed input (dimension / index mismatch), as opposed to a
    well-formed datum that fails an axiom."""


@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: tuple            # tuple of X-vectors (int tuples)
    coroots: tuple          # tuple of Y-vectors, in bijection with roots
    pairing: tuple          # rank x rank int matrix; <x, y> = x^T P y
    simple_indices: tuple   # indices into roots/coroots

    def __post_init__(self):
        if self.rank < 1:
            raise StructuralError("rank must be positive")
        if len(self.roots) != len(self.coroots):
            raise StructuralError("roots and coroots must be in bijection")
        for v in list(self.roots) + list(self.coroots):
            if len(v) != self.rank:
                raise StructuralError("root/coroot of wrong rank: %r" % (v,))
        if len(self.pairing) != self.rank or any(len(r) != self.rank for r in self.pairing):
            raise StructuralError("pairing matrix must be rank x rank")
        for i in self.simple_indices:
            if not 0 <= i < len(self.roots):
                raise StructuralError("simple index out of range: %r" % (i,))

    def pair(self, x, y):
        """<x, y> for x an X-vector, y a Y-vector."""
        if len(x) != self.rank or len(y) != self.rank:
            raise StructuralError("vector of wrong rank")
        return sum(x[i] * self.pairing[i][j] * y[j]
                   for i in range(self.rank) for j in range(self.rank))


def make_root_datum(rank, roots, coroots, pairing, simple_indices):
    return RootDatum(rank,
                     tuple(tuple(v) for v in roots),
                     tuple(tuple(v) for v in coroots),
                     tuple(tuple(r) for r in pairing),
                     tuple(simple_indices))


@dataclass(frozen=True)
class QuadraticForm:
    """Integer quadratic form on Y given by basis values and polarization
    off-diagonals: Q(y) = sum_i diag[i] y_i^2 + sum_{i<j} off[i,j] y_i y_j."""
    diag: tuple
    off: tuple = ()   # tuple of (i, j, value) with i < j

    def rank(self):
        return len(self.diag)

    def _off_map(self):
        return {(i, j): v for i, j, v in self.off}

    def value(self, y):
        if len(y) != len(self.diag):
            raise StructuralError("vector of wrong rank for Q")
        total = sum(a * yi * yi for a, yi in zip(self.diag, y))
        for i, j, v in self.off:
            total += v * y[i] * y[j]
        return total

    def gram(self):
        """Matrix of the polarization B_Q: B_Q(y1, y2) = y1^T G y2."""
        r = len(self.diag)
        g = [[0] * r for _ in range(r)]
        for i in range(r):
            g[i][i] = 2 * self.diag[i]
        for i, j, v in self.off:
            g[i][j] += v
            g[j][i] += v
        return g


def make_quadratic_form(diag, off=()):
    return QuadraticForm(tuple(diag), tuple(tuple(o) for o in off))


def bq(q, y1, y2):
    """Polarization B_Q(y1, y2) = Q(y1+y2) - Q(y1) - Q(y2)."""
    if len(y1) != len(y2) or len(y1) != q.rank():
        raise StructuralError("rank mismatch in bq")
    s = tuple(a + b for a, b in zip(y1, y2))
    return q.value(s) - q.value(y1) - q.value(y2)


@dataclass(frozen=True)
class FiniteAbelianPresentation:
    """Canonical form of a finitely generated abelian group:
    Z^free_rank x Z/d_1 x ... x Z/d_k with d_1 | d_2 | ..., all d_i >= 2."""
    free_rank: int
    invariant_factors: tuple

    def __post_init__(self):
        if self.free_rank < 0:
            raise StructuralError("free_rank must be nonnegative")
        prev = None
        for d in self.invariant_factors:
            if d < 2:
                raise StructuralError("invariant factor < 2: %r" % (d,))
            if prev is not None and d % prev != 0:
                raise StructuralError("invariant factors must form a divisor chain")
            prev = d

    def is_trivial(self):
        return self.free_rank == 0 and not self.invariant_factors

    def order(self):
        if self.free_rank > 0:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n


@dataclass
class ValidationReport:
    ok: bool
    failures: list = field(default_factory=list)  # (axiom_name, witness)

    def add(self, axiom, witness):
        self.ok = False
        self.failures.append((axiom, witness))


def reflect(rd, alpha_index, y):
    """Coroot-side simple reflection: y - <alpha, y> alpha^vee."""
    if not 0 <= alpha_index < len(rd.roots):
        raise StructuralError("invalid root index: %r" % (alpha_index,))
    if len(y) != rd.rank:
        raise StructuralError("vector of wrong rank")
    alpha = rd.roots[alpha_index]
    covee = rd.coroots[alpha_index]
    c = rd.pair(alpha, y)
    return tuple(yi - c * ai for yi, ai in zip(y, covee))


def reflect_x(rd, alpha_index, x):
    """Root-side simple reflection: x - <x, alpha^vee> alpha."""
    if not 0 <= alpha_index < len(rd.roots):
        raise StructuralError("invalid root index: %r" % (alpha_index,))
    alpha = rd.roots[alpha_index]
    covee = rd.coroots[alpha_index]
    c = rd.pair(x, covee)
    return tuple(xi - c * ai for xi, ai in zip(x, alpha))


def validate_root_datum(rd):
    """Check the root-datum axioms; report every violated axiom with a witness."""
    report = ValidationReport(ok=True)

    for idx, (a, av) in enumerate(zip(rd.roots, rd.coroots)):
        if rd.pair(a, av) != 2:
            report.add("pairing(alpha, alpha_vee) = 2",
                       {"index": idx, "value": rd.pair(a, av)})

    root_set = set(rd.roots)
    if len(root_set) != len(rd.roots):
        report.add("roots are distinct", {"roots": rd.roots})
    zero = tuple([0] * rd.rank)
    if zero in root_set:
        report.add("roots are nonzero", {"index": rd.roots.index(zero)})

    coroot_set = set(rd.coroots)
    for i in rd.simple_indices:
        for idx, beta in enumerate(rd.roots):
            if reflect_x(rd, i, beta) not in root_set:
                report.add("simple reflections permute the roots",
                           {"simple": i, "root_index": idx})
                break
        for idx, bv in enumerate(rd.coroots):
            if reflect(rd, i, bv) not in coroot_set:
                report.add("simple reflections permute the coroots",
                           {"simple": i, "coroot_index": idx})
                break

    simple = [list(rd.roots[i]) for i in rd.simple_indices]
    if simple:
        s, _, _ = _intmat.snf(simple)
        rank_s = sum(1 for i in range(min(len(s), len(s[0]))) if s[i][i] != 0)
        if rank_s != len(simple):
            report.add("simple roots are linearly independent", {})

    if abs(_intmat.det(rd.pairing)) != 1:
        report.add("pairing is perfect", {"det": _intmat.det(rd.pairing)})

    return report


def langlands_dual(rd):
    """The dual root datum: swap X <-> Y and roots <-> coroots."""
    return make_root_datum(rd.rank, rd.coroots, rd.roots,
                           _intmat.transpose(rd.pairing), rd.simple_indices)


def check_weyl_invariance(rd, q):
    """Is Q invariant under every simple reflection?  Checked on basis
    vectors and pairwise basis sums, which spans quadratic behaviour.
    Returns (ok, counterexample or None)."""
    if q.rank() != rd.rank:
        raise StructuralError("Q rank does not match root datum")
    basis = [tuple(int(i == j) for j in range(rd.rank)) for i in range(rd.rank)]
    test_set = list(basis)
    for i in range(rd.rank):
        for j in range(i + 1, rd.rank):
            test_set.append(tuple(a + b for a, b in zip(basis[i], basis[j])))
    for s in rd.simple_indices:
        for y in test_set:
            if q.value(reflect(rd, s, y)) != q.value(y):
                return False, (s, y)
    return True, None


def smith_quotient(sub_basis, ambient_rank):
    """Structure of Z^ambient_rank / colspan(sub_basis) as a canonical
    FiniteAbelianPresentation."""
    if sub_basis and len(sub_basis) != ambient_rank:
        raise StructuralError("sub_basis rows must equal ambient_rank")
    factors, free_rank = _intmat.invariant_factors(sub_basis, ambient_rank)
    return FiniteAbelianPresentation(free_rank, tuple(factors))


# -- catalogue of small root data used across tests and fixtures ----------

def sl2():
    return make_root_datum(1, [(2,), (-2,)], [(1,), (-1,)], [(1,)], [0])


def sl3():
    # simple roots a1, a2 and a1+a2, with negatives; identity pairing
    roots = [(2, -1), (-1, 2), (1, 1), (-2, 1), (1, -2), (-1, -1)]
    coroots = [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]
    return make_root_datum(2, roots, coroots, [[1, 0], [0, 1]], [0, 1])


def torus(rank=1):
    return make_root_datum(rank, [], [], _intmat.identity(rank), [])


def torus_times_sl2():
    # coordinate 0 is the torus direction, coordinate 1 carries SL2
    return make_root_datum(2, [(0, 2), (0, -2)], [(0, 1), (0, -1)],
                           [[1, 0], [0, 1]], [0])
