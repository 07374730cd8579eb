"""Dual root data for degree-n covers: the lattice cut out by polarization
congruences, modified (co)roots, the sign normalization, and the center."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import _intmat
from .rootdatum import (RootDatum, QuadraticForm, StructuralError,
                        make_root_datum, smith_quotient, validate_root_datum,
                        check_weyl_invariance)


@dataclass(frozen=True)
class CoverDatum:
    rd: RootDatum
    q: QuadraticForm
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError("cover degree must be positive")
        if self.q.rank() != self.rd.rank:
            raise StructuralError("Q rank does not match root datum")


class CoverAssumptionError(ValueError):
    def __init__(self, witness):
        super().__init__("odd-degree cover requires an even-valued Q; "
                         "Q is odd at %r" % (witness,))
        self.witness = witness


class DualDatumError(ValueError):
    """Internal consistency failure while assembling the dual datum."""


def check_cover_assumption(cd):
    """For odd n, Q must take even values.  Checked on basis vectors and
    pairwise basis sums (a spanning test set for a quadratic form).
    Returns (ok, witness)."""
    if cd.n % 2 == 0 or cd.n == 1:
        return True, None
    r = cd.rd.rank
    basis = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    tests = list(basis)
    for i in range(r):
        for j in range(i + 1, r):
            tests.append(tuple(a + b for a, b in zip(basis[i], basis[j])))
    for y in tests:
        if cd.q.value(y) % 2 != 0:
            return False, y
    return True, None


def compute_n_alpha(cd, alpha_index):
    """Least m >= 1 with m * Q(alpha^vee) = 0 mod n; divides n."""
    if not 0 <= alpha_index < len(cd.rd.coroots):
        raise StructuralError("invalid root index: %r" % (alpha_index,))
    qa = cd.q.value(cd.rd.coroots[alpha_index])
    return cd.n // gcd(cd.n, qa)


def compute_r_alpha(cd, alpha_index):
    """Sign (-1)^(Q(alpha^vee) * n_alpha (n_alpha - 1) / 2)."""
    qa = cd.q.value(cd.rd.coroots[alpha_index])
    na = compute_n_alpha(cd, alpha_index)
    exponent = qa * (na * (na - 1) // 2)
    return -1 if exponent % 2 else 1


def compute_y_qn(cd):
    """Canonical (column-HNF) basis of {y : B_Q(y, y') in nZ for all y'},
    the sublattice containing nY."""
    r = cd.rd.rank
    n = cd.n
    if n == 1:
        return _intmat.identity(r)
    g = cd.q.gram()
    s, _, v = _intmat.snf(g)
    diag = [s[i][i] for i in range(r)]
    scale = [n // gcd(n, d) for d in diag]
    cols = _intmat.matmul(v, [[scale[i] if i == j else 0 for j in range(r)]
                              for i in range(r)])
    basis = _intmat.column_hnf(cols)
    # sanity: the congruence sublattice always contains nY
    for j in range(r):
        target = [n * int(i == j) for i in range(r)]
        if not _contains(basis, target):
            raise DualDatumError("computed lattice does not contain nY")
    return basis


def _contains(basis, vec):
    """Does the column span of `basis` contain `vec` over Z?"""
    inv = _intmat.rational_inverse(basis)
    coords = _intmat.matvec(inv, vec)
    return all(c.denominator == 1 for c in coords)


def _coords_in(basis_inv, vec):
    coords = _intmat.matvec(basis_inv, vec)
    out = []
    for c in coords:
        if c.denominator != 1:
            return None
        out.append(int(c))
    return out


@dataclass(frozen=True)
class MetaplecticDualDatum:
    cd: CoverDatum
    y_qn_basis: tuple          # columns: basis of Y_{Q,n} in Y-coordinates
    n_alpha: tuple             # per root
    modified_coroots: tuple    # n_alpha * alpha^vee, ambient Y-coordinates
    modified_roots: tuple      # alpha / n_alpha, Fractions in X tensor Q
    x_qn_basis: tuple          # columns: dual basis of Y_{Q,n}, Fractions
    ysc_basis: tuple           # columns, in Y_{Q,n}-coordinates
    center: object             # FiniteAbelianPresentation of Y_{Q,n}/Y^{SC}

    def modified_datum(self):
        """The dual datum as a RootDatum: lattice coordinates taken in the
        y_qn basis (roots side) and its dual basis (coroots side), where the
        pairing becomes the identity."""
        r = self.cd.rd.rank
        inv = _intmat.rational_inverse([list(row) for row in self.y_qn_basis])
        roots = []
        for mc in self.modified_coroots:
            coords = _coords_in(inv, list(mc))
            if coords is None:
                raise DualDatumError("modified coroot outside Y_{Q,n}")
            roots.append(tuple(coords))
        coroots = []
        p = self.cd.rd.pairing
        for mr in self.modified_roots:
            # coefficient on dual basis vector i is <alpha~, b_i>
            row = []
            for i in range(r):
                b = [self.y_qn_basis[t][i] for t in range(r)]
                val = sum(mr[a] * p[a][c] * b[c]
                          for a in range(r) for c in range(r))
                if val.denominator != 1:
                    raise DualDatumError("modified root not in X_{Q,n}")
                row.append(int(val))
            coroots.append(tuple(row))
        simple = tuple(i for i in self.cd.rd.simple_indices)
        return make_root_datum(r, roots, coroots, _intmat.identity(r), simple)


def compute_dual_datum(cd):
    """Assemble the full metaplectic dual root datum.  Raises
    CoverAssumptionError / DualDatumError on violated preconditions."""
    ok, witness = check_cover_assumption(cd)
    if not ok:
        raise CoverAssumptionError(witness)
    ok_w, cex = check_weyl_invariance(cd.rd, cd.q)
    if not ok_w:
        raise DualDatumError("Q is not Weyl-invariant at %r" % (cex,))

    rd = cd.rd
    r = rd.rank
    y_basis = compute_y_qn(cd)
    y_inv = _intmat.rational_inverse(y_basis)

    n_alpha = tuple(compute_n_alpha(cd, i) for i in range(len(rd.roots)))
    mod_coroots = []
    mod_roots = []
    for i, (a, av) in enumerate(zip(rd.roots, rd.coroots)):
        na = n_alpha[i]
        mc = tuple(na * c for c in av)
        if _coords_in(y_inv, list(mc)) is None:
            raise DualDatumError("modified coroot %d lies outside Y_{Q,n}" % i)
        mod_coroots.append(mc)
        mod_roots.append(tuple(Fraction(c, na) for c in a))
    mod_coroots = tuple(mod_coroots)
    mod_roots = tuple(mod_roots)

    # dual basis of Y_{Q,n} inside X tensor Q: columns x_i with <x_i, b_j> = delta
    pb = _intmat.matmul(rd.pairing, y_basis)
    x_basis = _intmat.transpose(_intmat.rational_inverse(pb))

    # modified coroots in Y_{Q,n}-coordinates; simple ones must span all
    all_coords = [_coords_in(y_inv, list(mc)) for mc in mod_coroots]
    simple_coords = [all_coords[i] for i in rd.simple_indices]
    if simple_coords:
        simple_cols = _intmat.transpose(simple_coords)
        span = _intmat.column_hnf(simple_cols)
        for i, coords in enumerate(all_coords):
            if not _contains_lat(span, coords):
                raise DualDatumError(
                    "modified simple coroots do not span modified coroot %d" % i)
        ysc = span
    else:
        ysc = []

    center = smith_quotient(ysc, r)

    dd = MetaplecticDualDatum(cd=cd,
                              y_qn_basis=_freeze(y_basis),
                              n_alpha=n_alpha,
                              modified_coroots=mod_coroots,
                              modified_roots=mod_roots,
                              x_qn_basis=_freeze(x_basis),
                              ysc_basis=_freeze(ysc),
                              center=center)
    _check_dual_invariants(dd)
    return dd


def _contains_lat(basis_cols, vec):
    if not basis_cols or not basis_cols[0]:
        return all(v == 0 for v in vec)
    cols = len(basis_cols[0])
    rows = len(basis_cols)
    if cols < rows:
        # solve exactly: vec must be an integer combination of columns
        stacked = [[basis_cols[i][j] for j in range(cols)] + [vec[i]]
                   for i in range(rows)]
        h_with = _intmat.column_hnf(stacked)
        h_without = _intmat.column_hnf(basis_cols)
        return h_with == h_without
    inv = _intmat.rational_inverse(basis_cols)
    return _coords_in(inv, vec) is not None


def _freeze(m):
    return tuple(tuple(x for x in row) for row in m)


def _check_dual_invariants(dd):
    cd = dd.cd
    r = cd.rd.rank
    basis = [list(row) for row in dd.y_qn_basis]
    # nY contained in Y_{Q,n} contained in Y (basis is integral by construction)
    for j in range(r):
        if not _contains(basis, [cd.n * int(i == j) for i in range(r)]):
            raise DualDatumError("nY not contained in Y_{Q,n}")
    # modified pairs hit 2
    for mr, mc in zip(dd.modified_roots, dd.modified_coroots):
        if cd.rd.pair(mr, mc) != 2:
            raise DualDatumError("modified root/coroot pairing != 2")
    # the modified sextuple is itself a valid root datum
    report = validate_root_datum(dd.modified_datum())
    if not report.ok:
        raise DualDatumError("modified datum fails axioms: %r" % (report.failures,))


def n_alpha_oracle(cd, alpha_index):
    """Brute-force oracle: least m <= n with n | m * Q(alpha^vee)."""
    qa = cd.q.value(cd.rd.coroots[alpha_index])
    for m in range(1, cd.n + 1):
        if (m * qa) % cd.n == 0:
            return m
    raise AssertionError("no multiplier found; unreachable since m = n works")
