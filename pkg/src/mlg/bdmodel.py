"""Finite Galois-equivariant model of the second Brylinski-Deligne
invariant restricted to the dual lattice: the abelian extension
F^x-model -> D-model -> Y_{Q,n}, its splittings, the distinguished
splitting coming from the pinning, and invariant points.

The underlying set is trivialized as Y_{Q,n} x (cyclic field model); all
twisting lives in a 1-cocycle c: Gamma -> Hom(Y_{Q,n}, field model).
Splittings are characters t, representing y -> (y, t(y)).
"""

from dataclasses import dataclass
from math import gcd

from . import _intmat
from .metaplectic import compute_r_alpha
from .rootdatum import StructuralError


class DModelError(ValueError):
    pass


# A torus character is a tuple of exponents mod N, one per vector of the
# canonical Y_{Q,n} basis.

def char_eval(char, coords, N):
    return sum(c * t for c, t in zip(coords, char)) % N


def char_mul(a, b, N):
    return tuple((x + y) % N for x, y in zip(a, b))


def char_div(a, b, N):
    return tuple((x - y) % N for x, y in zip(a, b))


def char_pow(a, m, N):
    return tuple((m * x) % N for x in a)


def char_frob(fm, a, power):
    return tuple(fm.frobenius(x, power) for x in a)


@dataclass(frozen=True)
class Splitting:
    t: tuple   # exponents per Y_{Q,n}-basis vector


@dataclass(frozen=True)
class DModel:
    dd: object            # MetaplecticDualDatum
    fm: object            # FieldModel
    c: tuple              # c[i] = torus character for Frob^i, i in [0, k)
    s_psi: tuple          # exponent per simple index, value over alpha~vee
    adapted: tuple        # unimodular matrix: columns = adapted basis u_i
    adapted_inv: tuple
    dlist: tuple          # divisor chain of Y^{SC} in the adapted basis (0 = free)
    simple_coords: tuple  # modified simple coroots in Y_{Q,n}-coordinates

    @property
    def rank(self):
        return len(self.adapted)

    def cocycle_at(self, i):
        return self.c[i % self.fm.k]

    def act_on_element(self, gamma, y_coords, u):
        """gamma . (y, u) = (y, gamma(u) * c_gamma(y))."""
        fm = self.fm
        val = (fm.act(gamma, u) +
               char_eval(self.cocycle_at(gamma.i), y_coords, fm.N)) % fm.N
        return (tuple(y_coords), val)

    def is_invariant_element(self, y_coords, u):
        for gamma in self.fm.galois_elements():
            if self.act_on_element(gamma, y_coords, u) != (tuple(y_coords), u % self.fm.N):
                return False
        return True

    def s_psi_at(self, w_coords):
        """Value of the distinguished splitting at w in Y^{SC}
        (Y_{Q,n}-coordinates); w must be an integral combination of the
        modified simple coroots."""
        if not self.simple_coords:
            raise DModelError("no simple coroots: s_psi is trivial on 0 only")
        cols = _intmat.transpose([list(sc) for sc in self.simple_coords])
        sol = _solve_integer(cols, list(w_coords))
        if sol is None:
            raise DModelError("vector %r is not in Y^{SC}" % (w_coords,))
        return sum(m * s for m, s in zip(sol, self.s_psi)) % self.fm.N

    def ysc_basis_coords(self):
        """Adapted basis vectors of Y^{SC}: w_i = d_i u_i for d_i != 0."""
        out = []
        for i, d in enumerate(self.dlist):
            if d != 0:
                out.append((i, d, tuple(d * self.adapted[t][i]
                                        for t in range(self.rank))))
        return out

    def adapted_column(self, i):
        return tuple(self.adapted[t][i] for t in range(self.rank))

    def to_adapted_coords(self, y_coords):
        v = _intmat.matvec([list(r) for r in self.adapted_inv], list(y_coords))
        return tuple(v)


def _solve_integer(a_cols, b):
    """Integer solution x of a_cols @ x = b, or None."""
    rows = len(a_cols)
    cols = len(a_cols[0]) if rows else 0
    s, u, v = _intmat.snf(a_cols)
    ub = _intmat.matvec(u, b)
    z = [0] * cols
    for i in range(rows):
        si = s[i][i] if i < cols else 0
        if si == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % si != 0:
                return None
            if i < cols:
                z[i] = ub[i] // si
    return _intmat.matvec(v, z)


def lattice_data(dd):
    """Simple-coroot coordinates and the Y^{SC}-adapted basis of Y_{Q,n}.

    Returns (simple_coords, adapted, adapted_inv, dlist)."""
    r = len(dd.y_qn_basis)
    y_inv = _intmat.rational_inverse([list(row) for row in dd.y_qn_basis])
    simple_coords = []
    for idx in dd.cd.rd.simple_indices:
        coords = _intmat.matvec(y_inv, list(dd.modified_coroots[idx]))
        simple_coords.append(tuple(int(x) for x in coords))
    sub = (_intmat.transpose([list(sc) for sc in simple_coords])
           if simple_coords else [])
    adapted, dlist = _intmat.adapted_basis(sub, r)
    adapted_inv = _intmat.integer_inverse(adapted)
    return simple_coords, adapted, adapted_inv, dlist


def build_d_model(dd, fm, c_frobenius, e_inputs, full_c_table=None):
    """Assemble and validate a DModel.

    c_frobenius: exponents of the action cocycle at the Frobenius generator,
    one per Y_{Q,n}-basis vector (ignored when full_c_table is given).
    e_inputs: per simple root index, the exponent of a Gamma-invariant
    element lying over the modified simple coroot.
    """
    r = len(dd.y_qn_basis)
    N = fm.N
    k = fm.k

    if full_c_table is not None:
        c = [tuple(x % N for x in row) for row in full_c_table]
        if len(c) != k or any(len(row) != r for row in c):
            raise DModelError("c table must be k x rank")
    else:
        if len(c_frobenius) != r:
            raise DModelError("c_frobenius must give one exponent per basis vector")
        c1 = tuple(x % N for x in c_frobenius)
        c = [tuple(0 for _ in range(r))]
        for _ in range(1, k):
            c.append(char_mul(char_frob(fm, c[-1], 1), c1, N))
        # closure: c at Frob^k must return to the trivial character
        wrap = char_mul(char_frob(fm, c[-1], 1), c1, N)
        if any(x % N != 0 for x in wrap):
            raise DModelError(
                "cocycle does not close up over Z/k (norm condition fails): %r"
                % (wrap,))

    # full cocycle identity c_{gamma delta} = gamma(c_delta) * c_gamma
    for i in range(k):
        for j in range(k):
            lhs = c[(i + j) % k]
            rhs = char_mul(char_frob(fm, c[j], i), c[i], N)
            if lhs != rhs:
                raise DModelError(
                    "action table violates the 1-cocycle identity at (%d, %d)"
                    % (i, j))

    # lattice bookkeeping
    simple_coords, adapted, adapted_inv, dlist = lattice_data(dd)

    # distinguished splitting values
    s_psi = []
    simple_list = list(dd.cd.rd.simple_indices)
    if len(e_inputs) != len(simple_list):
        raise DModelError("need one e-input per simple root")
    for pos, idx in enumerate(simple_list):
        u = e_inputs[pos] % N
        coords = simple_coords[pos]
        # the input must be a Gamma-invariant element over alpha~vee
        for gamma in fm.galois_elements():
            acted = (fm.act(gamma, u) + char_eval(c[gamma.i], coords, N)) % N
            if acted != u:
                raise DModelError(
                    "e-input for simple root %d is not Gamma-invariant" % idx)
        sign = compute_r_alpha(dd.cd, idx)
        if sign == -1:
            if N % 2 != 0:
                raise DModelError(
                    "r_alpha = -1 requires odd q so that -1 exists in the model")
            u = (u + N // 2) % N
        s_psi.append(u)

    dm = DModel(dd=dd, fm=fm, c=tuple(c), s_psi=tuple(s_psi),
                adapted=tuple(tuple(row) for row in adapted),
                adapted_inv=tuple(tuple(row) for row in adapted_inv),
                dlist=tuple(dlist),
                simple_coords=tuple(simple_coords))

    # s_psi must itself be Gamma-invariant over each modified simple coroot
    for pos, coords in enumerate(simple_coords):
        if not dm.is_invariant_element(coords, dm.s_psi[pos]):
            raise DModelError(
                "distinguished splitting is not Gamma-invariant at simple "
                "root %d" % simple_list[pos])
    return dm


# --------------------------------------------------------------- splittings

def splitting_value(dm, s, y_coords):
    return char_eval(s.t, y_coords, dm.fm.N)


def is_invariant_splitting(dm, s):
    fm = dm.fm
    for gamma in fm.galois_elements():
        for j in range(dm.rank):
            basis_vec = tuple(int(t == j) for t in range(dm.rank))
            if dm.act_on_element(gamma, basis_vec, s.t[j])[1] != s.t[j]:
                return False
    return True


def gamma_s_over_s(dm, gamma, s):
    """The character y -> gamma^{-1}(t(y)) * c_{gamma^{-1}}(y) / t(y)."""
    fm = dm.fm
    j = (-gamma.i) % fm.k
    acted = char_frob(fm, s.t, j)
    acted = char_mul(acted, dm.cocycle_at(j), fm.N)
    return char_div(acted, s.t, fm.N)


def restrict_splitting(dm, s):
    """Values of s on the modified simple coroots."""
    return tuple(splitting_value(dm, s, coords) for coords in dm.simple_coords)


def restricts_to_s_psi(dm, s):
    return restrict_splitting(dm, s) == dm.s_psi


def extend_splitting(dm, target_on_simple, free_values=None, torsion_shift=None):
    """Extend a character given on the modified simple coroots (a basis of
    Y^{SC}) to all of Y_{Q,n}.  free_values picks the unconstrained
    coordinates on adapted free directions; torsion_shift picks among the
    finitely many solutions on torsion directions.  Returns a Splitting."""
    fm = dm.fm
    N = fm.N
    r = dm.rank
    if len(target_on_simple) != len(dm.simple_coords):
        raise DModelError("need one target value per simple coroot")

    # target value on each adapted Y^{SC} basis vector w_i = d_i u_i
    x = [None] * r
    free_iter = list(free_values) if free_values is not None else []
    shift = dict(torsion_shift or {})
    fi = 0
    for i in range(r):
        d = dm.dlist[i]
        if d == 0:
            x[i] = (free_iter[fi] % N) if fi < len(free_iter) else 0
            fi += 1
            continue
        w = tuple(d * dm.adapted[t][i] for t in range(r))
        cols = _intmat.transpose([list(sc) for sc in dm.simple_coords])
        combo = _solve_integer(cols, list(w))
        if combo is None:
            raise DModelError("adapted Y^{SC} vector not in simple-coroot span")
        target = sum(m * v for m, v in zip(combo, target_on_simple)) % N
        g = gcd(d, N)
        if target % g != 0:
            raise DModelError(
                "character does not extend in the finite model at adapted "
                "direction %d (gcd obstruction)" % i)
        dd_ = N // g
        base = ((target // g) * pow((d // g) % dd_, -1, dd_)) % dd_
        x[i] = (base + shift.get(i, 0) * dd_) % N

    # convert adapted values to the standard Y_{Q,n} basis
    t = []
    for j in range(r):
        coeffs = [dm.adapted_inv[i][j] for i in range(r)]
        t.append(sum(ci * xi for ci, xi in zip(coeffs, x)) % N)
    s = Splitting(tuple(t))
    # round-trip guarantee
    for coords, want in zip(dm.simple_coords, target_on_simple):
        if splitting_value(dm, s, coords) != want % N:
            raise DModelError("extension failed to restrict correctly")
    return s


# ---------------------------------------------------------- invariant points

@dataclass(frozen=True)
class InvariantPoints:
    """Presentation of the Gamma-fixed points: one invariant lift per
    adapted basis vector of Y_{Q,n}, plus the base-field kernel."""
    basis_coords: tuple    # adapted basis vectors, Y_{Q,n}-coordinates
    lifts: tuple           # exponent of the field part of each lift
    kernel_exponent: int   # generator exponent of the base-field subgroup


def invariant_points(dm, use_adapted=True):
    """Solve gamma(u) * c_gamma(y) = u over each basis vector.  The cyclic
    model's Hilbert 90: solvability is exactly the cocycle-norm condition,
    and failure is reported as an input-model inconsistency."""
    fm = dm.fm
    N = fm.N
    r = dm.rank
    basis = []
    for j in range(r):
        if use_adapted:
            basis.append(dm.adapted_column(j))
        else:
            basis.append(tuple(int(t == j) for t in range(r)))
    lifts = []
    for coords in basis:
        a = char_eval(dm.cocycle_at(1 % fm.k), coords, N) if fm.k > 1 else 0
        if fm.k == 1:
            u = 0
        else:
            # (q - 1) u = -a mod N; gcd(q - 1, N) = q - 1
            if a % (fm.q - 1) != 0:
                raise DModelError(
                    "no invariant lift over %r: cocycle-norm condition fails"
                    % (coords,))
            # solutions of (q-1)u = -a mod N form one coset mod N/(q-1)
            mod = N // (fm.q - 1)
            u = (-(a // (fm.q - 1))) % mod
        if not dm.is_invariant_element(coords, u):
            raise DModelError("computed lift fails invariance over %r" % (coords,))
        lifts.append(u)
    return InvariantPoints(tuple(basis), tuple(lifts),
                           fm.base_subgroup_index)
