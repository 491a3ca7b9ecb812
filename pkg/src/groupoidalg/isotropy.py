"""Isotropy algebras of the inclusion "unit functions inside convolution algebra".

For units x, y of the groupoid let J_x be the ideal of unit functions
vanishing at x.  Out of the pair (J_y, J_x) this module builds, inside
the convolution algebra B:

    C(y, x) = {c : c J_x in J_y B  and  J_y c in B J_x}
    H(y, x) = J_y B J_x             (= C intersect L)
    L(y, x) = J_y B + B J_x
    B(y, x) = C(y, x) / H(y, x)     (the isotropy module; an algebra when y = x)

together with the projection E(y, x): B -> B(y, x) that kills L.  The
pair (J_y, J_x) is always regular here (B = C + L), which the
constructor asserts.  For y = x the quotient is a unital algebra
canonically isomorphic to the twisted group algebra of the isotropy
group at x; the isomorphism is produced as an explicit certificate.

The general ideal-pair entry points (``c_space_for_ideals`` and
``isotropy_data_for_ideals``) accept arbitrary s-unital ideals of A;
the rest of the package only exercises them at point ideals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAUnit, TheoremViolation
from .groupoid import FiniteGroupoid
from .linalg import (
    QuotientSpace,
    Subspace,
    mat_vec,
    right_kernel,
    solve_right,
)
from .steinberg import AlgebraPresentation, presentation_of_B, twisted_group_algebra
from .twist import Cocycle, restrict_to_isotropy


@dataclass
class PointIdeal:
    """The ideal of unit functions vanishing at x, with local units."""

    x: int
    basis: Subspace

    def local_unit_vector(self, vectors, inclusion):
        """Indicator of the union of supports: an idempotent u with uf = f.

        Works for any finite family inside the ideal; supports never
        contain x, so the indicator stays inside the ideal.
        """
        units = set()
        for v in vectors:
            for a, c in enumerate(v):
                if c != 0:
                    units.add(a)
        units.discard(self.x)
        return inclusion.unit_indicator_vector(sorted(units))


class IsotropyData:
    """The spaces and quotient attached to one pair of units."""

    __slots__ = ("y", "x", "C", "H", "L", "quotient", "presentation", "unit_coords")

    def __init__(self, y, x, C, H, L, quotient, presentation=None, unit_coords=None):
        self.y = y
        self.x = x
        self.C = C
        self.H = H
        self.L = L
        self.quotient = quotient
        self.presentation = presentation
        self.unit_coords = unit_coords

    @property
    def dim(self):
        return self.quotient.dim


@dataclass
class IsotropyIsomorphism:
    """Certificate matching an isotropy algebra with a twisted group algebra.

    ``members`` lists the isotropy arrows in basis order; ``matrix`` maps
    quotient section coordinates to coefficient functions on the members;
    the two presentations have identical structure constants under it.
    """

    x: int
    members: tuple
    matrix: tuple
    isotropy_presentation: AlgebraPresentation
    group_presentation: AlgebraPresentation


class Inclusion:
    """Shared context for one groupoid, twist and coefficient field.

    Caches the presentation of B, left/right multiplication matrices,
    per-pair isotropy data and projection matrices; every downstream
    construction (bimodules, induction, induced ideals) runs through it.
    """

    def __init__(self, groupoid: FiniteGroupoid, cocycle: Cocycle):
        if not cocycle.validated:
            raise ValueError("cocycle must pass validate_cocycle before use")
        self.groupoid = groupoid
        self.cocycle = cocycle
        self.field = cocycle.field
        self.B = presentation_of_B(groupoid, cocycle)
        self.m = self.B.dim
        self._left = [self.B.left_mult_matrix(self.B.basis_vector(i)) for i in range(self.m)]
        self._right = [self.B.right_mult_matrix(self.B.basis_vector(i)) for i in range(self.m)]
        self._data = {}
        self._emat = {}
        self._iso_cache = {}

    # -- elementary vectors and subspaces -------------------------------------

    def unit_indicator_vector(self, units_subset):
        v = [self.field.zero()] * self.m
        for u in units_subset:
            if not self.groupoid.is_unit(u):
                raise NotAUnit(f"arrow {u} is not a unit")
            v[u] = self.field.one()
        return tuple(v)

    def delta_vector(self, arrow):
        v = [self.field.zero()] * self.m
        v[arrow] = self.field.one()
        return tuple(v)

    def A_subspace(self) -> Subspace:
        return Subspace.span(
            [self.delta_vector(u) for u in self.groupoid.units], self.m, self.field
        )

    def full_space(self) -> Subspace:
        return Subspace.full(self.m, self.field)

    def point_ideal(self, x) -> PointIdeal:
        if not self.groupoid.is_unit(x):
            raise NotAUnit(f"arrow {x} is not a unit")
        vectors = [self.delta_vector(u) for u in self.groupoid.units if u != x]
        return PointIdeal(x, Subspace.span(vectors, self.m, self.field))

    def multiply(self, u, v):
        return self.B.multiply(u, v)

    def left_matrix(self, vec):
        """Matrix of w -> vec * w."""
        f = self.field
        out = None
        for i, c in enumerate(vec):
            if c == 0:
                continue
            term = tuple(tuple(f.mul(c, e) for e in row) for row in self._left[i])
            out = term if out is None else tuple(
                tuple(f.add(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(out, term)
            )
        if out is None:
            zero = tuple(f.zero() for _ in range(self.m))
            out = tuple(zero for _ in range(self.m))
        return out

    def right_matrix(self, vec):
        f = self.field
        out = None
        for i, c in enumerate(vec):
            if c == 0:
                continue
            term = tuple(tuple(f.mul(c, e) for e in row) for row in self._right[i])
            out = term if out is None else tuple(
                tuple(f.add(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(out, term)
            )
        if out is None:
            zero = tuple(f.zero() for _ in range(self.m))
            out = tuple(zero for _ in range(self.m))
        return out

    def subspace_product(self, S: Subspace, T: Subspace) -> Subspace:
        """span{s t} over basis pairs; bilinearity makes this the full product."""
        vectors = [self.multiply(s, t) for s in S.basis for t in T.basis]
        return Subspace.span(vectors, self.m, self.field)

    # -- the L, C, H spaces ----------------------------------------------------

    def JB(self, y) -> Subspace:
        return self.subspace_product(self.point_ideal(y).basis, self.full_space())

    def BJ(self, x) -> Subspace:
        return self.subspace_product(self.full_space(), self.point_ideal(x).basis)

    def left_right_spaces(self, y, x):
        """(J_y B, B J_x, L(y, x)) as subspaces of B."""
        jb = self.JB(y)
        bj = self.BJ(x)
        return jb, bj, jb.add(bj)

    def c_space_for_ideals(self, I: Subspace, J: Subspace) -> Subspace:
        """{c : c J in I B, I c in B J} for ideals I, J of A (general entry point)."""
        IB = self.subspace_product(I, self.full_space())
        BJ = self.subspace_product(self.full_space(), J)
        rows = []
        for a in J.basis:
            # constraint: IB.reduce(c * a) == 0, linear in c
            ra = self.right_matrix(a)
            for coord_row in _residual_rows(IB, ra, self.field):
                rows.append(coord_row)
        for a in I.basis:
            la = self.left_matrix(a)
            for coord_row in _residual_rows(BJ, la, self.field):
                rows.append(coord_row)
        basis = right_kernel(rows, self.m, self.field)
        return Subspace.span(basis, self.m, self.field)

    def isotropy_data_for_ideals(self, I: Subspace, J: Subspace) -> IsotropyData:
        """C/H data for a general s-unital ideal pair of A."""
        C = self.c_space_for_ideals(I, J)
        IB = self.subspace_product(I, self.full_space())
        BJ = self.subspace_product(self.full_space(), J)
        L = IB.add(BJ)
        H = self.subspace_product(IB, J)
        if C.intersect(L) != H:
            raise TheoremViolation("H = C intersect L failed for the given ideal pair")
        quotient = QuotientSpace(C, H)
        return IsotropyData(None, None, C, H, L, quotient)

    def compute_C(self, y, x) -> Subspace:
        return self.c_space_for_ideals(
            self.point_ideal(y).basis, self.point_ideal(x).basis
        )

    def isotropy_data(self, y, x) -> IsotropyData:
        """All spaces for the unit pair (y, x); cached; asserts regularity."""
        key = (y, x)
        if key in self._data:
            return self._data[key]
        C = self.compute_C(y, x)
        jb, bj, L = self.left_right_spaces(y, x)
        H = self.subspace_product(jb, self.point_ideal(x).basis)
        if C.intersect(L) != H:
            raise TheoremViolation(f"H({y},{x}) = C intersect L failed")
        if C.add(L).dim != self.m:
            raise TheoremViolation(f"regularity B = C + L failed at ({y}, {x})")
        quotient = QuotientSpace(C, H)
        presentation = None
        unit_coords = None
        if y == x:
            presentation, unit_coords = self._build_isotropy_presentation(x, C, H, quotient)
        data = IsotropyData(y, x, C, H, L, quotient, presentation, unit_coords)
        self._data[key] = data
        return data

    def _build_isotropy_presentation(self, x, C, H, quotient):
        # well-definedness of the product on C/H: H C + C H inside H
        for h in H.basis:
            for c in C.basis:
                if self.multiply(h, c) not in H or self.multiply(c, h) not in H:
                    raise TheoremViolation("H is not an ideal of C")
        section = quotient.section_basis
        table = []
        for s in section:
            row = []
            for t in section:
                prod = self.multiply(s, t)
                if prod not in C:
                    raise TheoremViolation("product left the C space")
                row.append(quotient.project(prod))
            table.append(row)
        unit_coords = quotient.project(self._reduce_into(C, self.delta_vector(x)))
        labels = [f"c{i}" for i in range(quotient.dim)]
        pres = AlgebraPresentation(self.field, labels, table, unit_coords)
        if not pres.check_unit():
            raise TheoremViolation("unit class of the isotropy algebra failed")
        return pres, unit_coords

    def _reduce_into(self, C: Subspace, vec):
        # delta at x lies in C(x, x); guard with an explicit membership check.
        if vec not in C:
            raise TheoremViolation("unit indicator fell outside C(x, x)")
        return vec

    def isotropy_algebra(self, x) -> IsotropyData:
        return self.isotropy_data(x, x)

    # -- the projection E(y, x) -------------------------------------------------

    def projection_matrix(self, y, x):
        """Matrix of E(y, x): rows are quotient coordinates, columns arrows.

        Built by one global solve expressing each basis arrow as c + l
        with c in C and l in L; well-definedness is guaranteed by
        H = C intersect L and double-checked on a decomposition sample.
        """
        key = (y, x)
        if key in self._emat:
            return self._emat[key]
        data = self.isotropy_data(y, x)
        stack = list(data.C.basis) + list(data.L.basis)
        cols = len(stack)
        transposed = tuple(
            tuple(stack[j][i] for j in range(cols)) for i in range(self.m)
        )
        kernel = right_kernel(transposed, cols, self.field)
        columns = []
        for arrow in range(self.m):
            target = self.delta_vector(arrow)
            sol = solve_right(transposed, target, self.field)
            if sol is None:
                raise TheoremViolation(f"decomposition b = c + l failed at arrow {arrow}")
            c_part = self._combine(data.C.basis, sol[: data.C.dim])
            coords = data.quotient.project(c_part)
            if kernel:
                alt = tuple(
                    self.field.add(a, b) for a, b in zip(sol, kernel[0])
                )
                alt_part = self._combine(data.C.basis, alt[: data.C.dim])
                if data.quotient.project(alt_part) != coords:
                    raise TheoremViolation("projection depends on the decomposition")
            columns.append(coords)
        mat = tuple(
            tuple(columns[a][r] for a in range(self.m)) for r in range(data.quotient.dim)
        )
        self._emat[key] = mat
        return mat

    def _combine(self, basis, coeffs):
        f = self.field
        out = [f.zero()] * self.m
        for c, row in zip(coeffs, basis):
            if c != 0:
                for j, a in enumerate(row):
                    if a != 0:
                        out[j] = f.add(out[j], f.mul(c, a))
        return tuple(out)

    def isotropy_projection(self, x, vec):
        """E(x, x) applied to an element or coefficient vector; quotient coords."""
        if hasattr(vec, "to_vector"):
            vec = vec.to_vector()
        return mat_vec(self.projection_matrix(x, x), vec, self.field)

    def projection(self, y, x, vec):
        return mat_vec(self.projection_matrix(y, x), vec, self.field)

    # -- bimodule products -------------------------------------------------------

    def bimodule_product(self, z, y, x, g_coords, h_coords):
        """B(z, y) x B(y, x) -> B(z, x) on quotient coordinates."""
        dzy = self.isotropy_data(z, y)
        dyx = self.isotropy_data(y, x)
        dzx = self.isotropy_data(z, x)
        g = dzy.quotient.inject(g_coords)
        h = dyx.quotient.inject(h_coords)
        prod = self.multiply(g, h)
        if prod not in dzx.C:
            raise TheoremViolation("bimodule product left the C space")
        return dzx.quotient.project(prod)

    # -- identification with the twisted group algebra ---------------------------

    def identify_with_twisted_group_algebra(self, x) -> IsotropyIsomorphism:
        """The restriction map B(x,x) -> functions on the isotropy group.

        Verifies bijectivity and multiplicativity against the twisted
        group algebra of the restricted cocycle; a mismatch is a hard
        failure since the identification holds by general theory.
        """
        if x in self._iso_cache:
            return self._iso_cache[x]
        data = self.isotropy_data(x, x)
        members = tuple(self.groupoid.isotropy_group(x))
        group_pres = twisted_group_algebra(
            self.groupoid.isotropy_table(x),
            members,
            restrict_to_isotropy(self.cocycle, x),
            self.field,
        )
        if data.dim != len(members):
            raise TheoremViolation(
                f"dim B({x},{x}) = {data.dim} but isotropy group has {len(members)} arrows"
            )
        # L(x, x) must vanish on the isotropy group (null-space description)
        for row in data.L.basis:
            if any(row[g] != 0 for g in members):
                raise TheoremViolation("L(x, x) does not vanish on the isotropy group")
        section = data.quotient.section_basis
        matrix = tuple(tuple(s[g] for g in members) for s in section)
        restriction = Subspace.span(matrix, len(members), self.field)
        if restriction.dim != len(members):
            raise TheoremViolation("restriction map is not bijective")
        for i in range(data.dim):
            for j in range(data.dim):
                prod_coords = data.presentation.table[i][j]
                lhs = self._restrict_coords(matrix, prod_coords)
                rhs = group_pres.multiply(matrix[i], matrix[j])
                if lhs != rhs:
                    raise TheoremViolation("structure constants do not match")
        cert = IsotropyIsomorphism(x, members, matrix, data.presentation, group_pres)
        self._iso_cache[x] = cert
        return cert

    def _restrict_coords(self, matrix, coords):
        f = self.field
        n = len(matrix[0]) if matrix else 0
        out = [f.zero()] * n
        for c, row in zip(coords, matrix):
            if c != 0:
                for j, a in enumerate(row):
                    if a != 0:
                        out[j] = f.add(out[j], f.mul(c, a))
        return tuple(out)


def _residual_rows(W: Subspace, action_matrix, field):
    """Rows expressing 'W.reduce(M c) = 0' as linear constraints on c.

    The reduction against an RREF basis is itself linear; composing with
    the action matrix gives one constraint row per ambient coordinate.
    """
    m = len(action_matrix)
    reducer = []
    for i in range(m):
        e = tuple(field.one() if j == i else field.zero() for j in range(m))
        reducer.append(W.reduce(e))
    # constraint rows: for each coordinate r, sum_c (reduce o M)[r][c] * v[c] = 0
    rows = []
    for r in range(m):
        row = []
        for c in range(m):
            acc = field.zero()
            for k in range(m):
                if action_matrix[k][c] != 0 and reducer[k][r] != 0:
                    acc = field.add(acc, field.mul(action_matrix[k][c], reducer[k][r]))
            row.append(acc)
        if any(v != 0 for v in row):
            rows.append(tuple(row))
    return rows
