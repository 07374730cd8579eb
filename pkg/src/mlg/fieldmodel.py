"""Cyclic finite-field stand-in for the algebraic closure with Frobenius.

Elements of the multiplicative group of F_{q^k} are exponents mod
N = q^k - 1 of a fixed abstract generator g; Frobenius sends e to q*e.
An eagerly sized degree-n extension registry (exponents mod q^{kn} - 1)
hosts n-th roots that do not exist downstairs.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class FieldModelError(ValueError):
    pass


def is_prime_power(q):
    if q < 2:
        return False
    p = _least_prime_factor(q)
    while q % p == 0:
        q //= p
    return q == 1


def _least_prime_factor(m):
    d = 2
    while d * d <= m:
        if m % d == 0:
            return d
        d += 1
    return m


@dataclass(frozen=True)
class GaloisElement:
    """Frob^i in the cyclic Galois group Z/k."""
    i: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "i", self.i % self.k)

    def compose(self, other):
        if self.k != other.k:
            raise FieldModelError("Galois elements from different groups")
        return GaloisElement(self.i + other.i, self.k)

    def inverse(self):
        return GaloisElement(-self.i, self.k)

    def is_identity(self):
        return self.i == 0


@dataclass(frozen=True)
class NthRoot:
    in_base: bool       # True: exponent mod N; False: registry, mod q^{kn}-1
    exponent: int


@dataclass(frozen=True)
class FieldModel:
    q: int
    n: int
    k: int
    epsilon_unit: int = 1   # epsilon sends the canonical mu_n generator to unit/n

    def __post_init__(self):
        if not is_prime_power(self.q):
            raise FieldModelError("q = %d is not a prime power" % self.q)
        if self.n < 1:
            raise FieldModelError("n must be positive")
        if (self.q - 1) % self.n != 0:
            raise FieldModelError(
                "n must divide q - 1 so that mu_n(F) has n elements "
                "(n = %d, q - 1 = %d)" % (self.n, self.q - 1))
        if ((self.q ** self.k - 1) // (self.q - 1)) % self.n != 0:
            raise FieldModelError(
                "n must divide (q^k - 1)/(q - 1) so base-field units have "
                "n-th roots in the model (k = %d)" % self.k)
        if gcd(self.epsilon_unit, self.n) != 1:
            raise FieldModelError("epsilon unit must be coprime to n")

    # -- sizes ------------------------------------------------------------

    @property
    def N(self):
        return self.q ** self.k - 1

    @property
    def registry_N(self):
        return self.q ** (self.k * self.n) - 1

    @property
    def embed_factor(self):
        """Index scaling for the inclusion into the registry."""
        return self.registry_N // self.N

    @property
    def base_subgroup_index(self):
        """Exponent of a generator of the base-field subgroup F_q^x."""
        return self.N // (self.q - 1)

    @property
    def mu_n_index(self):
        """Exponent of the canonical generator of mu_n."""
        return self.N // self.n

    def minus_one(self):
        if self.N % 2 != 0:
            raise FieldModelError("-1 requires odd q")
        return self.N // 2

    # -- structure --------------------------------------------------------

    def galois(self, i):
        return GaloisElement(i, self.k)

    def galois_elements(self):
        return [GaloisElement(i, self.k) for i in range(self.k)]

    def frobenius(self, e, power=1):
        return (e * pow(self.q, power % self.k, self.N)) % self.N

    def act(self, gamma, e):
        """gamma applied to g^e."""
        return self.frobenius(e, gamma.i)

    def frobenius_registry(self, e, power=1):
        """Frobenius lift on the degree-n registry (power taken literally:
        the registry Galois group is larger than Z/k)."""
        return (e * pow(self.q, power, self.registry_N)) % self.registry_N

    def in_base_field(self, e):
        return e % self.base_subgroup_index == 0

    def in_mu_n(self, e):
        return e % self.mu_n_index == 0

    # -- operations -------------------------------------------------------

    def nth_root(self, e):
        """Deterministic n-th root of g^e: the least nonnegative solution of
        n x = e * embed_factor mod registry_N, reported downstairs whenever
        it lies in the embedded subfield."""
        e %= self.N
        x = self.nth_root_registry(e)
        m = self.embed_factor
        if x % m == 0:
            return NthRoot(True, x // m)
        return NthRoot(False, x)

    def nth_root_registry(self, e):
        """Registry exponent of the canonical n-th root of g^e."""
        e %= self.N
        target = e * self.embed_factor
        assert target % self.n == 0, "registry root must exist by construction"
        return (target // self.n) % (self.registry_N // self.n)

    def epsilon(self, zeta):
        """The pinned injective character of mu_n, valued in (1/n)Z/Z."""
        if not self.in_mu_n(zeta % self.N):
            raise FieldModelError("element g^%d is not in mu_n" % zeta)
        j = (zeta % self.N) // self.mu_n_index
        return Fraction(self.epsilon_unit * j % self.n, self.n)

    def epsilon_registry(self, z):
        """epsilon on mu_n seen inside the registry."""
        big = self.registry_N
        z %= big
        if z % (big // self.n) != 0:
            raise FieldModelError("registry element is not in mu_n")
        j = z // (big // self.n)
        return Fraction(self.epsilon_unit * j % self.n, self.n)

    def artin_character(self, gamma, e):
        """epsilon(gamma^{-1}(v)/v) for v an n-th root of the base-field
        element g^e; independent of the choice of v."""
        e %= self.N
        if not self.in_base_field(e):
            raise FieldModelError("Artin character needs a base-field element")
        # base-field units have in-model roots: n | (q^k-1)/(q-1) | e-index
        assert e % self.n == 0
        v = (e // self.n) % (self.N // self.n)
        j = (-gamma.i) % self.k
        z = (v * (pow(self.q, j, self.N) - 1)) % self.N
        return self.epsilon(z)


def minimal_extension_degree(q, n):
    k = 1
    while ((q ** k - 1) // (q - 1)) % n != 0:
        k += 1
        if k > 4 * n * n:
            raise FieldModelError("no suitable extension degree found")
    return k


def build_field_model(q, n, k=None, epsilon_unit=1):
    """Construct the model; if k is omitted the least admissible degree is
    chosen."""
    if not is_prime_power(q):
        raise FieldModelError("q = %d is not a prime power" % q)
    if n < 1 or (q - 1) % n != 0:
        raise FieldModelError("n must divide q - 1 (n = %d, q = %d)" % (n, q))
    if k is None:
        k = minimal_extension_degree(q, n)
    return FieldModel(q, n, k, epsilon_unit)
