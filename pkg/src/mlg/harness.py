"""Deterministic generation of solvable verification models.

The Galois action is built as a coboundary of a randomly chosen character
w (Hilbert 90: every 1-cocycle of the cyclic model is one), and the base
splitting s is chosen so that phi := s * w takes base-field values on the
adapted directions meeting Y^{SC} and n-divisible values on free
directions.  That single choice makes everything the genuine (divisible)
setting promises hold in the finite model: s restricts Gamma-invariantly,
gamma^{-1}s/s is an n-th power inside the center dual, and the invariant
lifts over the adapted basis differ from s by n-th powers.
"""

import random
from dataclasses import dataclass

from .bdmodel import Splitting, build_d_model, char_eval, lattice_data
from .comparison import make_base_point
from .fieldmodel import build_field_model
from .metaplectic import CoverDatum, compute_dual_datum, compute_r_alpha
from .rootdatum import QuadraticForm, sl2, sl3, torus_times_sl2


@dataclass(frozen=True)
class ModelBundle:
    name: str
    dd: object
    fm: object
    dm: object
    base_points: tuple


def _adapted_to_standard(adapted_inv, values, N):
    """Character values on the adapted basis -> exponents on the standard
    Y_{Q,n} basis."""
    r = len(adapted_inv)
    return tuple(sum(adapted_inv[i][j] * values[i] for i in range(r)) % N
                 for j in range(r))


def build_model(rd, q_form, n, q, k=None, seed=0, zeta_level=None, name="",
                epsilon_unit=1):
    """A full verification model with two distinct convenient base points."""
    cd = CoverDatum(rd, q_form, n)
    dd = compute_dual_datum(cd)
    fm = build_field_model(q, n, k, epsilon_unit)
    N = fm.N
    simple_coords, adapted, adapted_inv, dlist = lattice_data(dd)
    r = len(adapted)
    rng = random.Random("%s|%d|%d|%d|%d|%d" % (name, seed, q, n, fm.k, r))

    # trivializing character w: the action cocycle is its coboundary
    w = [rng.randrange(N) for _ in range(r)]
    c1 = tuple(((fm.q - 1) * wj) % N for wj in w)

    # phi = s * w on the adapted basis: base-field on directions meeting
    # Y^{SC}, n-divisible on free directions
    phi_adapted = []
    for d in dlist:
        if d == 0:
            phi_adapted.append(n * rng.randrange(N // n))
        else:
            phi_adapted.append(fm.base_subgroup_index * rng.randrange(fm.q - 1))
    phi = _adapted_to_standard(adapted_inv, phi_adapted, N)
    t = tuple((p - wj) % N for p, wj in zip(phi, w))

    # invariant elements over the modified simple coroots, chosen so the
    # signed distinguished splitting coincides with s there
    e_inputs = []
    for pos, idx in enumerate(rd.simple_indices):
        val = char_eval(t, simple_coords[pos], N)
        if compute_r_alpha(cd, idx) == -1:
            val = (val - N // 2) % N
        e_inputs.append(val)

    dm = build_d_model(dd, fm, c1, e_inputs)
    bp1 = make_base_point(dm, Splitting(t), zeta_level)

    # second base point s2 = x^n * s: x need not be central, but n*x must
    # be trivial on Y^{SC} so that s2 still extends s_psi; on a torsion
    # direction with divisor d that means x in (N/nd)Z
    x_adapted = []
    for d in dlist:
        if d == 0:
            x_adapted.append(rng.randrange(N))
        else:
            step = N // (n * d) if N % (n * d) == 0 else N // n
            x_adapted.append(step * rng.randrange(N // step))
    # force distinct base points whenever the model admits them: a shift
    # n*x is available exactly on free directions and torsion directions
    # with divisor > 1 (d = 1 pins the splitting value via s_psi)
    if all((n * xj) % N == 0 for xj in x_adapted):
        for i, d in enumerate(dlist):
            if d == 0:
                x_adapted[i] = 1
                break
            if d > 1 and N % (n * d) == 0:
                x_adapted[i] = N // (n * d)
                break
    x = _adapted_to_standard(adapted_inv, x_adapted, N)
    t2 = tuple((tj + n * xj) % N for tj, xj in zip(t, x))
    bp2 = make_base_point(dm, Splitting(t2), zeta_level)

    return ModelBundle(name or "model", dd, fm, dm, (bp1, bp2))


# ---------------------------------------------------------------- catalogue

def q_form_for(group, n):
    """A Weyl-invariant integer form for the bundled groups; doubled for
    odd n so the evenness assumption holds."""
    double = 2 if n % 2 else 1
    if group == "sl2":
        return QuadraticForm((double,), ())
    if group == "sl3":
        return QuadraticForm((double, double), ((0, 1, -double),))
    if group == "torus_sl2":
        return QuadraticForm((double, double), ())
    raise ValueError("unknown bundled group %r" % (group,))


def bundled_datum(group):
    if group == "sl2":
        return sl2()
    if group == "sl3":
        return sl3()
    if group == "torus_sl2":
        return torus_times_sl2()
    raise ValueError("unknown bundled group %r" % (group,))


GRID_FIELDS = ((5, 2), (5, 4), (7, 3), (13, 4))
GRID_GROUPS = ("sl2", "sl3", "torus_sl2")


def grid_models(seed=0):
    """The full verification grid: bundled groups x field models."""
    out = []
    for group in GRID_GROUPS:
        for q, n in GRID_FIELDS:
            name = "%s_q%d_n%d" % (group, q, n)
            out.append(build_model(bundled_datum(group), q_form_for(group, n),
                                   n, q, seed=seed, name=name))
    return out
