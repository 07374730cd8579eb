"""Central extensions of a finite group by a finite abelian kernel with
trivial action: 2-cocycles, Baer sums, pushouts, pullbacks, coboundaries,
and reconstruction of an extension from its torsor fibers."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from . import _intmat
from .rootdatum import FiniteAbelianPresentation, StructuralError


# ---------------------------------------------------------------- groups

@dataclass(frozen=True)
class FiniteGroupTable:
    order: int
    table: tuple      # table[i][j] = index of g_i * g_j
    identity: int
    inverse: tuple

    def mul(self, i, j):
        return self.table[i][j]

    def inv(self, i):
        return self.inverse[i]


class GroupTableError(ValueError):
    pass


def make_group_table(table):
    n = len(table)
    table = tuple(tuple(row) for row in table)
    for row in table:
        if len(row) != n or any(not 0 <= x < n for x in row):
            raise GroupTableError("multiplication table is not n x n over indices")
    identity = None
    for e in range(n):
        if all(table[e][g] == g and table[g][e] == g for g in range(n)):
            identity = e
            break
    if identity is None:
        raise GroupTableError("no identity element")
    inverse = []
    for g in range(n):
        invs = [h for h in range(n) if table[g][h] == identity]
        if len(invs) != 1 or table[invs[0]][g] != identity:
            raise GroupTableError("element %d has no unique inverse" % g)
        inverse.append(invs[0])
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise GroupTableError(
                        "associativity fails at (%d, %d, %d)" % (a, b, c))
    return FiniteGroupTable(n, table, identity, tuple(inverse))


def cyclic_group(m):
    return make_group_table([[(i + j) % m for j in range(m)] for i in range(m)])


def direct_product(g1, g2):
    n1, n2 = g1.order, g2.order

    def idx(a, b):
        return a * n2 + b

    table = [[0] * (n1 * n2) for _ in range(n1 * n2)]
    for a1, b1 in product(range(n1), range(n2)):
        for a2, b2 in product(range(n1), range(n2)):
            table[idx(a1, b1)][idx(a2, b2)] = idx(g1.mul(a1, a2), g2.mul(b1, b2))
    return make_group_table(table)


@dataclass(frozen=True)
class GroupHom:
    domain: FiniteGroupTable
    codomain: FiniteGroupTable
    images: tuple     # images[i] = image index of g_i

    def apply(self, i):
        return self.images[i]


def make_group_hom(domain, codomain, images):
    images = tuple(images)
    if len(images) != domain.order:
        raise GroupTableError("hom must give an image per element")
    for a in range(domain.order):
        for b in range(domain.order):
            if images[domain.mul(a, b)] != codomain.mul(images[a], images[b]):
                raise GroupTableError("not a homomorphism at (%d, %d)" % (a, b))
    return GroupHom(domain, codomain, images)


# ---------------------------------------------------------------- kernels

# Kernel elements are tuples of Fractions: one coordinate per invariant
# factor (valued in (1/d)Z/Z) followed by one per free direction (plain
# rationals, no modulus).

def kernel_width(pres):
    return len(pres.invariant_factors) + pres.free_rank


def kernel_zero(pres):
    return tuple(Fraction(0) for _ in range(kernel_width(pres)))


def kernel_reduce(pres, elt):
    k = len(pres.invariant_factors)
    out = []
    for i, x in enumerate(elt):
        x = Fraction(x)
        if i < k:
            d = pres.invariant_factors[i]
            x = x - (x.numerator // x.denominator)  # into [0, 1)
            if x < 0:
                x += 1
            if (x * d).denominator != 1:
                raise StructuralError(
                    "coordinate %d has denominator not dividing %d" % (i, d))
        out.append(x)
    return tuple(out)


def kernel_add(pres, a, b):
    return kernel_reduce(pres, tuple(x + y for x, y in zip(a, b)))


def kernel_neg(pres, a):
    return kernel_reduce(pres, tuple(-x for x in a))


def kernel_scale(pres, m, a):
    return kernel_reduce(pres, tuple(m * x for x in a))


def kernel_elements(pres):
    """All elements; finite part only (free_rank must be zero)."""
    if pres.free_rank > 0:
        raise StructuralError("cannot enumerate a kernel with free directions")
    ranges = [[Fraction(j, d) for j in range(d)] for d in pres.invariant_factors]
    return [tuple(t) for t in product(*ranges)]


def kernel_generators(pres):
    gens = []
    w = kernel_width(pres)
    k = len(pres.invariant_factors)
    for i in range(w):
        val = Fraction(1, pres.invariant_factors[i]) if i < k else Fraction(1)
        gens.append(tuple(val if j == i else Fraction(0) for j in range(w)))
    return gens


@dataclass(frozen=True)
class AbelianHom:
    """Homomorphism between presented abelian kernels, given by generator
    images.  On free directions it extends rational-linearly, mirroring the
    divisibility of the modeled multiplicative group."""
    domain: FiniteAbelianPresentation
    codomain: FiniteAbelianPresentation
    images: tuple     # one codomain element per domain generator

    def apply(self, elt):
        k = len(self.domain.invariant_factors)
        acc = kernel_zero(self.codomain)
        for i, x in enumerate(elt):
            if i < k:
                mult = x * self.domain.invariant_factors[i]
                if mult.denominator != 1:
                    raise StructuralError("bad torsion coordinate in kernel element")
                mult = int(mult)
            else:
                mult = x
            acc = kernel_add(self.codomain, acc,
                             kernel_scale(self.codomain, mult, self.images[i]))
        return acc


def make_abelian_hom(domain, codomain, images):
    images = tuple(kernel_reduce(codomain, im) for im in images)
    if len(images) != kernel_width(domain):
        raise StructuralError("hom needs an image per generator")
    for i, d in enumerate(domain.invariant_factors):
        scaled = kernel_scale(codomain, d, images[i])
        if scaled != kernel_zero(codomain):
            raise StructuralError(
                "generator %d has order dividing %d but its image does not" % (i, d))
    return AbelianHom(domain, codomain, images)


# ---------------------------------------------------------------- cocycles

@dataclass(frozen=True)
class Cocycle2:
    group: FiniteGroupTable
    kernel: FiniteAbelianPresentation
    table: tuple      # table[i][j] = kernel element c(g_i, g_j)

    def value(self, i, j):
        return self.table[i][j]


def make_cocycle(group, kernel, table):
    n = group.order
    if len(table) != n or any(len(row) != n for row in table):
        raise StructuralError("cocycle table must be order x order")
    table = tuple(tuple(kernel_reduce(kernel, v) for v in row) for row in table)
    return Cocycle2(group, kernel, table)


def zero_cocycle(group, kernel):
    z = kernel_zero(kernel)
    return Cocycle2(group, kernel,
                    tuple(tuple(z for _ in range(group.order))
                          for _ in range(group.order)))


def validate_cocycle(c):
    """Normalization plus the 2-cocycle identity.  Returns (ok, witness)."""
    g = c.group
    zero = kernel_zero(c.kernel)
    e = g.identity
    for x in range(g.order):
        if c.value(e, x) != zero:
            return False, ("normalization", (e, x))
        if c.value(x, e) != zero:
            return False, ("normalization", (x, e))
    for a in range(g.order):
        for b in range(g.order):
            for d in range(g.order):
                lhs = kernel_add(c.kernel, c.value(a, b), c.value(g.mul(a, b), d))
                rhs = kernel_add(c.kernel, c.value(b, d), c.value(a, g.mul(b, d)))
                if lhs != rhs:
                    return False, ("cocycle identity", (a, b, d))
    return True, None


@dataclass(frozen=True)
class CentralExtension:
    cocycle: Cocycle2

    @property
    def group(self):
        return self.cocycle.group

    @property
    def kernel(self):
        return self.cocycle.kernel


def make_extension(cocycle):
    ok, witness = validate_cocycle(cocycle)
    if not ok:
        raise StructuralError("invalid cocycle: %r" % (witness,))
    return CentralExtension(cocycle)


def split_extension(group, kernel):
    return CentralExtension(zero_cocycle(group, kernel))


def baer_sum(e1, e2):
    if e1.group.table != e2.group.table:
        raise StructuralError("Baer sum requires the same base group")
    if e1.kernel != e2.kernel:
        raise StructuralError("Baer sum requires the same kernel")
    k = e1.kernel
    n = e1.group.order
    table = [[kernel_add(k, e1.cocycle.value(i, j), e2.cocycle.value(i, j))
              for j in range(n)] for i in range(n)]
    return make_extension(Cocycle2(e1.group, k, tuple(tuple(r) for r in table)))


def pushout_extension(e, f):
    if f.domain != e.kernel:
        raise StructuralError("pushout hom domain must be the extension kernel")
    n = e.group.order
    table = [[f.apply(e.cocycle.value(i, j)) for j in range(n)] for i in range(n)]
    return make_extension(Cocycle2(e.group, f.codomain,
                                   tuple(tuple(r) for r in table)))


def pullback_extension(e, h):
    if h.codomain.table != e.group.table:
        raise StructuralError("pullback hom must land in the extension base")
    n = h.domain.order
    table = [[e.cocycle.value(h.apply(i), h.apply(j)) for j in range(n)]
             for i in range(n)]
    return make_extension(Cocycle2(h.domain, e.kernel,
                                   tuple(tuple(r) for r in table)))


# ------------------------------------------------------- coboundary solve

def _solve_mod(a, b, d):
    """One solution of a x = b (mod d) over the integers, or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0 or cols == 0:
        return [0] * cols if all(x % d == 0 for x in b) else None
    s, u, v = _intmat.snf(a)
    ub = _intmat.matvec(u, b)
    z = [0] * cols
    for i in range(rows):
        si = s[i][i] if i < cols else 0
        rhs = ub[i] % d
        if si == 0:
            if rhs != 0:
                return None
            continue
        g = gcd(si % d if si % d else d, d)
        if rhs % g != 0:
            return None
        dd = d // g
        z[i] = ((rhs // g) * pow((si // g) % dd, -1, dd)) % dd if dd > 1 else 0
    return [x % d for x in _intmat.matvec(v, z)]


def _solve_rational(a, b):
    """One rational solution of a x = b, or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return x


def coboundary_solve(c):
    """A normalized 1-cochain b with (db)(g, h) = b(g) + b(h) - b(gh) = c,
    or None when c is not a coboundary.  Linear solve per invariant factor
    (and rationally on free directions)."""
    g = c.group
    n = g.order
    e = g.identity
    unknowns = [x for x in range(n) if x != e]
    index = {x: i for i, x in enumerate(unknowns)}

    rows = []
    pairs = []
    for x in range(n):
        for y in range(n):
            row = [0] * len(unknowns)
            for term, sign in ((x, 1), (y, 1), (g.mul(x, y), -1)):
                if term != e:
                    row[index[term]] += sign
            rows.append(row)
            pairs.append((x, y))

    width = kernel_width(c.kernel)
    k = len(c.kernel.invariant_factors)
    coords = []   # per coordinate: list of b(g)-values for g in unknowns
    for coord in range(width):
        if coord < k:
            d = c.kernel.invariant_factors[coord]
            rhs = []
            for (x, y) in pairs:
                val = c.value(x, y)[coord] * d
                assert val.denominator == 1
                rhs.append(int(val))
            sol = _solve_mod(rows, rhs, d)
            if sol is None:
                return None
            coords.append([Fraction(s, d) for s in sol])
        else:
            rhs = [c.value(x, y)[coord] for (x, y) in pairs]
            sol = _solve_rational(rows, rhs)
            if sol is None:
                return None
            coords.append(sol)

    cochain = {e: kernel_zero(c.kernel)}
    for g_idx in unknowns:
        i = index[g_idx]
        cochain[g_idx] = kernel_reduce(
            c.kernel, tuple(coords[coord][i] for coord in range(width)))
    return cochain


def coboundary_of(group, kernel, cochain):
    n = group.order
    table = []
    for x in range(n):
        row = []
        for y in range(n):
            v = kernel_add(kernel, cochain[x], cochain[y])
            v = kernel_add(kernel, v, kernel_neg(kernel, cochain[group.mul(x, y)]))
            row.append(v)
        table.append(tuple(row))
    return Cocycle2(group, kernel, tuple(table))


def cocycle_difference(c1, c2):
    n = c1.group.order
    table = tuple(tuple(kernel_add(c1.kernel, c1.value(i, j),
                                   kernel_neg(c1.kernel, c2.value(i, j)))
                        for j in range(n)) for i in range(n))
    return Cocycle2(c1.group, c1.kernel, table)


def cohomologous(c1, c2):
    """Do c1 and c2 define the same extension class?"""
    return coboundary_solve(cocycle_difference(c1, c2)) is not None


def coboundary_solve_exhaustive(c, limit=10 ** 4):
    """Brute-force fallback: scan all normalized 1-cochains."""
    g = c.group
    elems = kernel_elements(c.kernel)
    others = [x for x in range(g.order) if x != g.identity]
    if len(elems) ** len(others) > limit:
        raise StructuralError("search space exceeds exhaustive limit")
    for combo in product(elems, repeat=len(others)):
        cochain = {g.identity: kernel_zero(c.kernel)}
        cochain.update(dict(zip(others, combo)))
        if coboundary_of(g, c.kernel, cochain).table == c.table:
            return cochain
    return None


# ------------------------------------------------ extensions from fibers

class FiberSystemError(ValueError):
    def __init__(self, kind, witness):
        super().__init__("%s: %r" % (kind, witness))
        self.kind = kind
        self.witness = witness


def extension_from_fibers(group, kernel, fibers, act, mult):
    """Assemble a central extension from torsor fibers.

    fibers[i] lists the (hashable) elements over group element i;
    act(a, i, x) is the kernel action on fiber i; mult(i, x, j, y) lands in
    fiber group.mul(i, j).  Free transitivity, equivariance and
    associativity are checked exhaustively before the cocycle is read off.
    """
    n = group.order
    if len(fibers) != n:
        raise FiberSystemError("fiber count mismatch", len(fibers))
    elems = kernel_elements(kernel)

    for i in range(n):
        fib = list(fibers[i])
        fib_set = set(fib)
        if len(fib_set) != len(fib):
            raise FiberSystemError("fiber has duplicate elements", i)
        for x in fib:
            orbit = [act(a, i, x) for a in elems]
            if set(orbit) != fib_set or len(set(orbit)) != len(elems):
                raise FiberSystemError("fiber is not a free transitive torsor",
                                       (i, x))

    for i in range(n):
        for j in range(n):
            ij = group.mul(i, j)
            targets = set(fibers[ij])
            for x in fibers[i]:
                for y in fibers[j]:
                    z = mult(i, x, j, y)
                    if z not in targets:
                        raise FiberSystemError("multiplication leaves its fiber",
                                               (i, x, j, y))
                    for a in elems:
                        if mult(i, act(a, i, x), j, y) != act(a, ij, z):
                            raise FiberSystemError("action not left-equivariant",
                                                   (a, i, x, j, y))
                        if mult(i, x, j, act(a, j, y)) != act(a, ij, z):
                            raise FiberSystemError("action not right-equivariant",
                                                   (a, i, x, j, y))

    for i in range(n):
        for j in range(n):
            for k_ in range(n):
                ij = group.mul(i, j)
                jk = group.mul(j, k_)
                for x in fibers[i]:
                    for y in fibers[j]:
                        for z in fibers[k_]:
                            lhs = mult(ij, mult(i, x, j, y), k_, z)
                            rhs = mult(i, x, jk, mult(j, y, k_, z))
                            if lhs != rhs:
                                raise FiberSystemError("multiplication not associative",
                                                       (i, x, j, y, k_, z))

    e = group.identity
    unit = next((x for x in fibers[e] if mult(e, x, e, x) == x), None)
    if unit is None:
        raise FiberSystemError("identity fiber has no idempotent", e)

    base = {e: unit}
    for i in range(n):
        if i != e:
            base[i] = fibers[i][0]

    def divide(i, x, y):
        # the unique a with x = act(a, i, y)
        for a in elems:
            if act(a, i, y) == x:
                return a
        raise FiberSystemError("division failed in fiber", (i, x, y))

    table = []
    for i in range(n):
        row = []
        for j in range(n):
            ij = group.mul(i, j)
            row.append(divide(ij, mult(i, base[i], j, base[j]), base[ij]))
        table.append(tuple(row))
    return make_extension(Cocycle2(group, kernel, tuple(table)))


def fibers_from_extension(ext):
    """Torsor fiber presentation of an extension: elements (i, a)."""
    group = ext.group
    kernel = ext.kernel
    fibers = [[(i, a) for a in kernel_elements(kernel)]
              for i in range(group.order)]

    def act(a, i, x):
        return (i, kernel_add(kernel, a, x[1]))

    def mult(i, x, j, y):
        val = kernel_add(kernel, x[1], y[1])
        val = kernel_add(kernel, val, ext.cocycle.value(i, j))
        return (group.mul(i, j), val)

    return fibers, act, mult


# ---------------------------------------------------------- serialization

def _frac_str(x):
    return "%d/%d" % (x.numerator, x.denominator)


def parse_fraction(s):
    if isinstance(s, str):
        if "/" in s:
            p, q = s.split("/")
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    if isinstance(s, int):
        return Fraction(s)
    raise StructuralError("expected an exact rational, got %r" % (s,))


def cocycle_to_dict(c):
    return {
        "group_table": [list(row) for row in c.group.table],
        "kernel": {"free_rank": c.kernel.free_rank,
                   "invariant_factors": list(c.kernel.invariant_factors)},
        "table": [[[_frac_str(x) for x in v] for v in row] for row in c.table],
    }


def cocycle_from_dict(d):
    group = make_group_table(d["group_table"])
    kernel = FiniteAbelianPresentation(
        d["kernel"].get("free_rank", 0),
        tuple(d["kernel"]["invariant_factors"]))
    table = [[tuple(parse_fraction(x) for x in v) for v in row]
             for row in d["table"]]
    return make_cocycle(group, kernel, table)
