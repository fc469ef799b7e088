"""Diagonal symmetry groups of invertible polynomials and their scalar quotients.

A diagonal symmetry is a torus element (e^{2 pi i t_1}, ..., e^{2 pi i t_n})
scaling each coordinate; it preserves the polynomial exactly when every
exponent row pairs integrally with (t_1, ..., t_n). The full group of such
symmetries is finite abelian. The scalars it contains form a cyclic subgroup
generated by the weight phases, and the quotient by that subgroup is what the
rest of the toolkit grades by.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, lcm

from .errors import DegenerateLoopError, SingularMatrixError, UnsupportedGeometryError
from .lattice import (
    IntMatrix,
    smith_normal_form,
    splitting_coefficients,
    _solve_rational,
)
from .polynomials import InvertiblePolynomial


@dataclass(frozen=True, order=False)
class DiagonalElement:
    """Finite-order diagonal torus element, stored as phases num_i / den.

    Canonical form: den >= 1, 0 <= num_i < den, and gcd(den, num_1, ..., num_n)
    equal to 1, so den is exactly the order of the element.
    """

    num: tuple[int, ...]
    den: int

    def __post_init__(self):
        assert self.den >= 1
        assert all(0 <= x < self.den or (self.den == 1 and x == 0) for x in self.num)
        assert reduce(gcd, self.num, self.den) == 1

    @classmethod
    def of(cls, nums, den: int) -> "DiagonalElement":
        """Canonicalize arbitrary integer phase numerators over a common denominator."""
        if den < 1:
            raise ValueError("denominator must be positive")
        nums = tuple(int(x) % den for x in nums)
        g = reduce(gcd, nums, den)
        return cls(num=tuple(x // g for x in nums), den=den // g)

    @classmethod
    def from_fractions(cls, phases) -> "DiagonalElement":
        phases = [Fraction(p) for p in phases]
        den = reduce(lcm, (p.denominator for p in phases), 1)
        return cls.of([p.numerator * (den // p.denominator) for p in phases], den)

    @classmethod
    def identity(cls, n: int) -> "DiagonalElement":
        return cls(num=(0,) * n, den=1)

    @property
    def n(self) -> int:
        return len(self.num)

    @property
    def order(self) -> int:
        return self.den

    @property
    def phases(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    def is_identity(self) -> bool:
        return self.den == 1

    def residues(self, modulus: int) -> tuple[int, ...]:
        """Phase numerators rescaled to a common modulus (order must divide it)."""
        if modulus % self.den:
            raise ValueError(f"order {self.den} does not divide modulus {modulus}")
        s = modulus // self.den
        return tuple(x * s for x in self.num)

    def mul(self, other: "DiagonalElement") -> "DiagonalElement":
        d = lcm(self.den, other.den)
        sa, sb = d // self.den, d // other.den
        return DiagonalElement.of(
            [x * sa + y * sb for x, y in zip(self.num, other.num)], d
        )

    def __pow__(self, k: int) -> "DiagonalElement":
        return DiagonalElement.of([x * k for x in self.num], self.den)

    def inverse(self) -> "DiagonalElement":
        return DiagonalElement(
            num=tuple((self.den - x) % self.den for x in self.num), den=self.den
        )

    def character(self, exponents) -> int:
        """Residue of sum(e_i * num_i) mod den; zero iff the monomial is fixed."""
        return sum(e * x for e, x in zip(exponents, self.num)) % self.den

    def fixed_coordinates(self) -> tuple[int, ...]:
        """1-based indices of coordinates with phase zero."""
        return tuple(i + 1 for i, x in enumerate(self.num) if x == 0)

    def sort_key(self):
        return self.phases


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Subgroup of the diagonal torus presented by invariant factors.

    invariant_factors is ascending with each dividing the next, all > 1;
    generators[i] has exact order invariant_factors[i] and the generators
    together span the group as a direct sum.
    """

    nvars: int
    invariant_factors: tuple[int, ...]
    generators: tuple[DiagonalElement, ...]

    def __post_init__(self):
        assert len(self.invariant_factors) == len(self.generators)
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            assert b % a == 0
        for f, g in zip(self.invariant_factors, self.generators):
            assert f > 1 and g.order == f and g.n == self.nvars

    @property
    def order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def element_residues(self, modulus: int | None = None) -> frozenset[tuple[int, ...]]:
        """All elements as residue vectors mod a common modulus (default: exponent)."""
        m = modulus if modulus is not None else self.exponent
        gens = [g.residues(m) for g in self.generators]
        out = set()
        for powers in product(*(range(f) for f in self.invariant_factors)):
            vec = [0] * self.nvars
            for k, g in zip(powers, gens):
                for i in range(self.nvars):
                    vec[i] = (vec[i] + k * g[i]) % m
            out.add(tuple(vec))
        return frozenset(out)

    def elements(self) -> list[DiagonalElement]:
        m = self.exponent
        return sorted(
            (DiagonalElement.of(vec, m) for vec in self.element_residues(m)),
            key=DiagonalElement.sort_key,
        )

    def contains(self, elem: DiagonalElement) -> bool:
        if elem.n != self.nvars:
            return False
        if self.exponent % elem.order:
            return False
        return elem.residues(self.exponent) in self.element_residues()

    def same_subgroup(self, other: "FiniteAbelianGroup") -> bool:
        """Equality as subsets of the torus, independent of chosen generators."""
        if self.nvars != other.nvars or self.order != other.order:
            return False
        m = lcm(self.exponent, other.exponent)
        return self.element_residues(m) == other.element_residues(m)

    def verify_by_enumeration(self, limit: int = 10**4) -> bool:
        """Check |<generators>| equals the claimed order (skipped above limit)."""
        if self.order > limit:
            return True
        return len(self.element_residues()) == self.order


def generated_residues(
    nvars: int, generators, modulus: int
) -> frozenset[tuple[int, ...]]:
    """Element set of the subgroup generated by the given torus elements,
    as residue vectors mod the given modulus (every order must divide it).

    Breadth-first closure, capped at 10^6 elements.
    """
    vecs = [g.residues(modulus) for g in generators if not g.is_identity()]
    zero = tuple([0] * nvars)
    seen = {zero}
    frontier = [zero]
    while frontier:
        cur = frontier.pop()
        for v in vecs:
            nxt = tuple((a + b) % modulus for a, b in zip(cur, v))
            if nxt not in seen:
                if len(seen) >= 10**6:
                    raise ValueError("generated subgroup too large to enumerate")
                seen.add(nxt)
                frontier.append(nxt)
    return frozenset(seen)


def spans_group(group: FiniteAbelianGroup, generators) -> bool:
    """True when the given elements generate exactly the given group."""
    m = group.exponent
    for g in generators:
        m = lcm(m, g.order)
    return generated_residues(group.nvars, generators, m) == group.element_residues(m)


def symmetry_group_of_matrix(a: IntMatrix) -> FiniteAbelianGroup:
    """Diagonal symmetries of any nondegenerate exponent matrix, via its Smith
    form: with U A V = D, the group is generated by the columns of V divided
    by the matching diagonal entries, and the invariant factors are the
    diagonal entries larger than 1."""
    snf = smith_normal_form(a)
    n = a.rows
    if any(snf.D[i, i] == 0 for i in range(min(n, a.cols))):
        raise SingularMatrixError("exponent matrix is singular, the group is infinite")
    factors = []
    gens = []
    for i in range(n):
        d = snf.D[i, i]
        if d > 1:
            g = DiagonalElement.of([snf.V[j, i] for j in range(n)], d)
            assert g.order == d
            # membership: every exponent row must pair to an integer
            assert all(g.character(row) == 0 for row in a.entries)
            factors.append(d)
            gens.append(g)
    return FiniteAbelianGroup(
        nvars=n, invariant_factors=tuple(factors), generators=tuple(gens)
    )


def diagonal_symmetry_group(poly: InvertiblePolynomial) -> FiniteAbelianGroup:
    """The full diagonal symmetry group of a validated polynomial."""
    return symmetry_group_of_matrix(poly.matrix)


def loop_generator(exponents) -> DiagonalElement:
    """Closed-form generator of the symmetry group of a loop polynomial
    x1^a1 x2 + x2^a2 x3 + ... + xn^an x1.

    The group is cyclic of order delta = a1 a2 ... an + (-1)^{n+1}, generated by
    phases ((-1)^{n+1-j} * a1 a2 ... a_{j-1} / delta)_j. A loop with delta = 0
    has a one-parameter symmetry and is rejected as degenerate.
    """
    a = [int(x) for x in exponents]
    n = len(a)
    if n < 2 or any(x < 1 for x in a):
        raise ValueError("loop needs at least 2 exponents, all >= 1")
    prod = 1
    for x in a:
        prod *= x
    delta = prod + (-1) ** (n + 1)
    if delta == 0:
        raise DegenerateLoopError(
            "loop determinant vanishes, the symmetry group is not finite"
        )
    nums = []
    prefix = 1
    for j in range(1, n + 1):
        sign = -1 if (n + 1 - j) % 2 else 1
        nums.append(sign * prefix)
        prefix *= a[j - 1]
    return DiagonalElement.of(nums, abs(delta))


@dataclass(frozen=True)
class SymmetryQuotient:
    """Symmetry data of an invertible polynomial and its quotient by scalars.

    characters[i][j] is the grading character of x_j under the i-th quotient
    factor, valid when the scalar subgroup splits off; otherwise characters is
    None and graded computations downstream refuse the input.
    """

    poly: InvertiblePolynomial
    group: FiniteAbelianGroup
    scalar_generator: DiagonalElement
    splitting: tuple[int, ...]
    quotient_orders: tuple[int, ...]
    quotient_generators: tuple[DiagonalElement, ...]
    characters: tuple[tuple[int, ...], ...] | None

    @property
    def n(self) -> int:
        return self.poly.n

    @property
    def weights(self) -> tuple[int, ...]:
        return self.poly.weights

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def scalar_order(self) -> int:
        return self.scalar_generator.order

    @property
    def quotient_order(self) -> int:
        out = 1
        for f in self.quotient_orders:
            out *= f
        return out

    @property
    def quotient_is_cyclic(self) -> bool:
        return len(self.quotient_orders) <= 1

    def intersection_group(self) -> FiniteAbelianGroup:
        """The scalar symmetries: cyclic, generated by the weight phases."""
        if self.scalar_generator.is_identity():
            return FiniteAbelianGroup(
                nvars=self.n, invariant_factors=(), generators=()
            )
        return FiniteAbelianGroup(
            nvars=self.n,
            invariant_factors=(self.scalar_order,),
            generators=(self.scalar_generator,),
        )

    def quotient_group(self) -> FiniteAbelianGroup:
        """The quotient realized inside the torus; needs the split model."""
        if self.characters is None:
            raise UnsupportedGeometryError(
                "scalar subgroup does not split off, no torus model of the quotient"
            )
        return FiniteAbelianGroup(
            nvars=self.n,
            invariant_factors=self.quotient_orders,
            generators=self.quotient_generators,
        )

    def char_of_exponents(self, exponents) -> tuple[int, ...]:
        """Quotient character of a monomial, one residue per quotient factor."""
        if self.characters is None:
            raise UnsupportedGeometryError("quotient characters unavailable")
        return tuple(
            sum(e * c for e, c in zip(exponents, chars)) % m
            for chars, m in zip(self.characters, self.quotient_orders)
        )


def _quotient_class_reps(poly: InvertiblePolynomial):
    """Invariant factors of group/scalars and one torus representative per factor.

    The quotient of the symmetry group by the scalar subgroup is the cokernel
    of the columns of [A | 1] acting on phase space: A columns give the unit
    lattice relations, the ones column kills the scalar generator.
    """
    a = poly.matrix
    n = poly.n
    aug = IntMatrix.from_rows(
        [list(a.entries[i]) + [1] for i in range(n)]
    )
    snf = smith_normal_form(aug)
    uinv = snf.U.inverse_unimodular()
    factors = []
    reps = []
    for i in range(n):
        d = snf.D[i, i]
        if d <= 1:
            continue
        rhs = [Fraction(uinv[r, i]) for r in range(n)]
        phases = _solve_rational(a, rhs)
        factors.append(d)
        reps.append(DiagonalElement.from_fractions(phases))
    return tuple(factors), tuple(reps)


def symmetry_quotient(poly: InvertiblePolynomial) -> SymmetryQuotient:
    """Assemble the full symmetry picture for one polynomial.

    Computes the diagonal symmetry group, the scalar generator and splitting
    coefficients, the quotient's invariant factors, and canonical quotient
    generators realized inside the torus. A canonical generator is chosen per
    factor as the lexicographically smallest representative of exact order
    among all scalar translates and coprime powers; when no exact-order
    representative exists the quotient does not split and characters is None.
    """
    group = diagonal_symmetry_group(poly)
    q, d = poly.weights, poly.degree
    b = splitting_coefficients(q)
    sigma = DiagonalElement.of(q, d)
    assert all(sigma.character(row) == 0 for row in poly.matrix.entries)
    factors, raw_reps = _quotient_class_reps(poly)

    canonical = []
    characters: list[tuple[int, ...]] | None = []
    for m, rep in zip(factors, raw_reps):
        best = None
        for t in range(sigma.order):
            base = rep.mul(sigma**t)
            for k in range(1, m + 1):
                if gcd(k, m) != 1:
                    continue
                cand = base**k
                if cand.order != m:
                    continue
                if best is None or cand.sort_key() < best.sort_key():
                    best = cand
        if best is None:
            characters = None
            canonical.append(rep)
        else:
            canonical.append(best)
            if characters is not None:
                assert all(best.character(row) == 0 for row in poly.matrix.entries)
                characters.append(best.num)

    quotient_order = 1
    for m in factors:
        quotient_order *= m
    assert group.order == sigma.order * quotient_order

    return SymmetryQuotient(
        poly=poly,
        group=group,
        scalar_generator=sigma,
        splitting=b,
        quotient_orders=factors,
        quotient_generators=tuple(canonical),
        characters=tuple(characters) if characters is not None else None,
    )
