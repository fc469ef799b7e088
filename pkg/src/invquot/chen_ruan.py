"""Chen-Ruan orbifold cohomology dimension of the quotient threefold.

The quotient acts on the cubic threefold through the projectivization, so a
group class fixes points exactly where some torus lift has an eigenspace; the
fixed locus of one class decomposes by eigenvalue. Here only point-like pieces
(single coordinate axes lying inside the hypersurface) are counted; any
higher-dimensional fixed piece raises FixedLocusNotImplementedError rather
than being silently miscounted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .errors import FixedLocusNotImplementedError, UnsupportedGeometryError
from .homs import BiDegree, _require_threefold, monomial_dim
from .symmetry import DiagonalElement, SymmetryQuotient


@dataclass(frozen=True)
class Sector:
    """One (class, eigenvalue) piece of the inertia decomposition.

    element is the torus representative whose phase-zero coordinates are the
    eigenspace; class_powers gives the quotient class, one exponent per
    quotient factor; eigenphase is the eigenvalue as a fraction of a full turn.
    """

    element: DiagonalElement
    class_powers: tuple[int, ...]
    eigenphase: Fraction
    fixed_coords: tuple[int, ...]
    contribution: int


def _require_cubic_threefold(sq: SymmetryQuotient):
    _require_threefold(sq)
    if sq.degree != 3:
        raise UnsupportedGeometryError(
            f"orbifold count is implemented for cubics only, degree is {sq.degree}"
        )


def _axis_inside_hypersurface(sq: SymmetryQuotient, coord: int) -> bool:
    """True when the coordinate axis (1-based) lies inside the hypersurface,
    i.e. no monomial is supported entirely on that single coordinate."""
    for row in sq.poly.matrix.entries:
        if all(e == 0 for j, e in enumerate(row, start=1) if j != coord):
            return False
    return True


def _piece_contribution(sq: SymmetryQuotient, fixed: tuple[int, ...]) -> int:
    if not fixed:
        return 0
    if len(fixed) == 1:
        return 1 if _axis_inside_hypersurface(sq, fixed[0]) else 0
    raise FixedLocusNotImplementedError(
        f"fixed coordinate set {fixed} spans more than an axis; counting its "
        "classes would need the geometry of a positive-dimensional fixed locus"
    )


def enumerate_sectors(sq: SymmetryQuotient) -> list[Sector]:
    """All twisted sector pieces: every nonzero quotient class, decomposed by
    eigenvalue, plus the empty eigenvalue pieces of the identity class for
    completeness. Raises FixedLocusNotImplementedError on any piece whose
    fixed locus is larger than a point."""
    _require_cubic_threefold(sq)
    n = sq.n
    exponent = 1
    for m in sq.quotient_orders:
        exponent = lcm(exponent, m)
    sectors = []
    for powers in product(*(range(m) for m in sq.quotient_orders)):
        lift = DiagonalElement.identity(n)
        for k, g in zip(powers, sq.quotient_generators):
            lift = lift.mul(g**k)
        level = lcm(lift.order, exponent)
        phases = lift.residues(level)
        for j in range(level):
            if not any(powers) and j == 0:
                continue  # the untwisted main piece is counted separately
            fixed = tuple(i + 1 for i, p in enumerate(phases) if p == j)
            rep = DiagonalElement.of([p - j for p in phases], level)
            sectors.append(
                Sector(
                    element=rep,
                    class_powers=tuple(powers),
                    eigenphase=Fraction(j, level),
                    fixed_coords=fixed,
                    contribution=_piece_contribution(sq, fixed),
                )
            )
    return sectors


@dataclass(frozen=True)
class UntwistedData:
    hyperplane_classes: int   # h^{0,0} + h^{1,1} + h^{2,2} + h^{3,3}
    middle_full: int          # h^{2,1} of the hypersurface itself
    middle_invariant: int     # its invariant part under the quotient

    @property
    def total(self) -> int:
        return self.hyperplane_classes + 2 * self.middle_invariant


def untwisted_invariants(sq: SymmetryQuotient) -> UntwistedData:
    """Invariant cohomology of the cubic threefold under the quotient action.

    The middle cohomology is carried by residue forms indexed by degree-1
    monomials; the residue form of a monomial is invariant exactly when the
    monomial's character cancels the character sum of the coordinates, and
    this bookkeeping is only implemented when that character sum vanishes.
    """
    _require_cubic_threefold(sq)
    for chars, m in zip(sq.characters, sq.quotient_orders):
        if sum(chars) % m:
            raise UnsupportedGeometryError(
                "coordinate characters do not sum to zero, the residue "
                "bookkeeping for the middle cohomology is not implemented"
            )
    full = sum(
        monomial_dim(sq, BiDegree(a=1, b=b))
        for b in product(*(range(m) for m in sq.quotient_orders))
    )
    invariant = monomial_dim(
        sq, BiDegree(a=1, b=tuple(0 for _ in sq.quotient_orders))
    )
    return UntwistedData(
        hyperplane_classes=4, middle_full=full, middle_invariant=invariant
    )


def chen_ruan_dim(sq: SymmetryQuotient) -> int:
    """Total dimension of the Chen-Ruan cohomology of the quotient."""
    untwisted = untwisted_invariants(sq)
    return untwisted.total + sum(s.contribution for s in enumerate_sectors(sq))
