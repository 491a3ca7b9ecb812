"""The twisted convolution algebra of a finite groupoid.

Elements are finitely supported scalar coefficient functions on arrows;
the product is convolution twisted by a validated 2-cocycle:

    (f * g)(c) = sum over ab = c of w(a, b) f(a) g(b).

The functions supported on units form the canonical abelian subalgebra A
(pointwise multiplication), and sections supported on bisections are the
prototype normalizers of A.  ``presentation_of_B`` packages the whole
algebra as structure constants, the common carrier shared with isotropy
algebras and twisted group algebras.
"""

from __future__ import annotations

from .errors import BisectionRequired, NoPartialInverse
from .groupoid import FiniteGroupoid
from .linalg import Field, Subspace
from .twist import Cocycle, bundle_inverse_coefficient


def _require_validated(cocycle: Cocycle):
    if not cocycle.validated:
        raise ValueError("cocycle must pass validate_cocycle before use")


class AlgebraElement:
    """A finitely supported coefficient function on arrows.

    Stored sparsely with zero-elision, so equality is equality of the
    normalized mappings.  All arithmetic requires identical parent
    groupoid and cocycle.
    """

    __slots__ = ("groupoid", "cocycle", "coeffs")

    def __init__(self, groupoid: FiniteGroupoid, cocycle: Cocycle, coeffs=None):
        _require_validated(cocycle)
        self.groupoid = groupoid
        self.cocycle = cocycle
        self.coeffs = {a: v for a, v in (coeffs or {}).items() if v != 0}

    @property
    def field(self) -> Field:
        return self.cocycle.field

    def support(self):
        return sorted(self.coeffs)

    def __getitem__(self, arrow):
        return self.coeffs.get(arrow, self.field.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_parent(self, other: "AlgebraElement"):
        if self.groupoid is not other.groupoid or self.cocycle is not other.cocycle:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        self._check_parent(other)
        f = self.field
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = f.add(out.get(a, f.zero()), v)
        return AlgebraElement(self.groupoid, self.cocycle, out)

    def __sub__(self, other):
        self._check_parent(other)
        f = self.field
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = f.sub(out.get(a, f.zero()), v)
        return AlgebraElement(self.groupoid, self.cocycle, out)

    def scale(self, c):
        f = self.field
        return AlgebraElement(
            self.groupoid, self.cocycle, {a: f.mul(c, v) for a, v in self.coeffs.items()}
        )

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one()))

    def __mul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.groupoid is other.groupoid
            and self.cocycle is other.cocycle
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0])))

    def to_vector(self):
        """Dense coefficient tuple in arrow-id order."""
        zero = self.field.zero()
        return tuple(self.coeffs.get(a, zero) for a in range(self.groupoid.n_arrows))

    def __repr__(self):
        names = self.groupoid.arrow_names
        terms = [f"{self.field.format(v)}*d[{names[a]}]" for a, v in sorted(self.coeffs.items())]
        return " + ".join(terms) if terms else "0"


def element_from_vector(groupoid, cocycle, vec) -> AlgebraElement:
    return AlgebraElement(
        groupoid, cocycle, {a: v for a, v in enumerate(vec) if v != 0}
    )


def delta(groupoid, cocycle, arrow, value=None) -> AlgebraElement:
    value = cocycle.field.one() if value is None else value
    return AlgebraElement(groupoid, cocycle, {arrow: value})


def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Twisted convolution; bilinear, with support inside supp(f).supp(g)."""
    f._check_parent(g)
    gpd = f.groupoid
    fld = f.field
    w = f.cocycle
    out: dict = {}
    for a, fa in f.coeffs.items():
        sa = gpd.src[a]
        for b, gb in g.coeffs.items():
            if sa != gpd.tgt[b]:
                continue
            c = gpd.comp[a][b]
            term = fld.mul(w(a, b), fld.mul(fa, gb))
            acc = fld.add(out.get(c, fld.zero()), term)
            if acc == 0:
                out.pop(c, None)
            else:
                out[c] = acc
    return AlgebraElement(gpd, w, out)


def embed_unit_function(groupoid, cocycle, values) -> AlgebraElement:
    """Embed a scalar function on units as a unit-supported element.

    The embedding is an algebra homomorphism: convolution of two
    unit-supported elements is the pointwise product of the functions.
    """
    coeffs = {}
    for u, v in values.items():
        if not groupoid.is_unit(u):
            raise ValueError(f"arrow {u} is not a unit")
        coeffs[u] = v
    return AlgebraElement(groupoid, cocycle, coeffs)


def unit_indicator(groupoid, cocycle, units_subset) -> AlgebraElement:
    one = cocycle.field.one()
    return embed_unit_function(groupoid, cocycle, {u: one for u in units_subset})


def algebra_identity(groupoid, cocycle) -> AlgebraElement:
    """The indicator of all units: the two-sided identity of the algebra."""
    return unit_indicator(groupoid, cocycle, groupoid.units)


def delta_section(groupoid, cocycle, values) -> AlgebraElement:
    """Element supported on a bisection with the given nonzero values.

    These sections are exactly the prototype normalizers of A: the support
    being a bisection makes convolution against unit functions move points
    along a partial bijection of the unit space.
    """
    support = sorted(values)
    if not groupoid.is_bisection(support):
        raise BisectionRequired(f"support {support} is not a bisection")
    for a, v in values.items():
        if v == 0:
            raise ValueError(f"zero value on arrow {a} of the bisection")
    return AlgebraElement(groupoid, cocycle, dict(values))


def partial_inverse(n: AlgebraElement) -> AlgebraElement:
    """The partial inverse of a section supported on a bisection.

    Coefficientwise n*(c) = (w(c^-1, c) n(c^-1))^(-1) on the inverted
    support; the result satisfies n n* n = n, n* n n* = n* and conjugates
    the unit-function algebra into itself.
    """
    gpd = n.groupoid
    if not gpd.is_bisection(n.support()):
        raise BisectionRequired(f"support {n.support()} is not a bisection")
    out = {}
    for a, v in n.coeffs.items():
        if v == 0:
            raise NoPartialInverse("zero coefficient inside support")
        out[gpd.inv[a]] = bundle_inverse_coefficient(n.cocycle, a, v)
    return AlgebraElement(gpd, n.cocycle, out)


def dedicated_unit(elements, groupoid=None, cocycle=None) -> AlgebraElement:
    """A unit-supported element acting as identity on the given finite set.

    Returns the indicator of the union of all sources and targets of the
    supports; for an empty family (parent supplied explicitly) the empty
    indicator, i.e. zero.
    """
    if not elements:
        if groupoid is None or cocycle is None:
            raise ValueError("an empty family needs an explicit parent algebra")
        return AlgebraElement(groupoid, cocycle, {})
    gpd = elements[0].groupoid
    coc = elements[0].cocycle
    needed = set()
    for el in elements:
        el._check_parent(elements[0])
        for a in el.coeffs:
            needed.add(gpd.src[a])
            needed.add(gpd.tgt[a])
    return unit_indicator(gpd, coc, sorted(needed))


# ---------------------------------------------------------------------------
# presentations


class AlgebraPresentation:
    """A finite-dimensional algebra as structure constants over a basis.

    ``table[i][j]`` is the dense coefficient tuple of basis_i * basis_j.
    The identity's coordinates, when present, are stored in ``unit``.
    """

    def __init__(self, field: Field, labels, table, unit=None):
        self.field = field
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.table = tuple(tuple(tuple(v) for v in row) for row in table)
        self.unit = tuple(unit) if unit is not None else None

    def multiply(self, u, v):
        """Bilinear extension of the structure constants to vectors."""
        f = self.field
        out = [f.zero()] * self.dim
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            row = self.table[i]
            for j, vj in enumerate(v):
                if vj == 0:
                    continue
                c = f.mul(ui, vj)
                prod = row[j]
                for k, pk in enumerate(prod):
                    if pk != 0:
                        out[k] = f.add(out[k], f.mul(c, pk))
        return tuple(out)

    def left_mult_matrix(self, u):
        """Matrix of v -> u * v acting on coefficient columns."""
        cols = []
        f = self.field
        basis = [tuple(f.one() if i == j else f.zero() for i in range(self.dim)) for j in range(self.dim)]
        for e in basis:
            cols.append(self.multiply(u, e))
        return tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim))

    def right_mult_matrix(self, u):
        cols = []
        f = self.field
        basis = [tuple(f.one() if i == j else f.zero() for i in range(self.dim)) for j in range(self.dim)]
        for e in basis:
            cols.append(self.multiply(e, u))
        return tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim))

    def basis_vector(self, i):
        f = self.field
        return tuple(f.one() if j == i else f.zero() for j in range(self.dim))

    def check_associativity(self):
        """None, or the first basis triple where (ij)k != i(jk)."""
        for i in range(self.dim):
            ei = self.basis_vector(i)
            for j in range(self.dim):
                ij = self.table[i][j]
                ej = self.basis_vector(j)
                for k in range(self.dim):
                    ek = self.basis_vector(k)
                    lhs = self.multiply(ij, ek)
                    rhs = self.multiply(ei, self.multiply(ej, ek))
                    if lhs != rhs:
                        return (i, j, k)
        return None

    def check_unit(self) -> bool:
        if self.unit is None:
            return False
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                return False
        return True

    def center(self) -> Subspace:
        """The subspace of vectors commuting with every basis element."""
        rows = []
        for i in range(self.dim):
            ei = self.basis_vector(i)
            left = self.left_mult_matrix(ei)
            right = self.right_mult_matrix(ei)
            for r in range(self.dim):
                rows.append(
                    tuple(
                        self.field.sub(left[r][c], right[r][c]) for c in range(self.dim)
                    )
                )
        from .linalg import right_kernel

        basis = right_kernel(rows, self.dim, self.field)
        return Subspace.span(basis, self.dim, self.field)

    def __repr__(self):
        return f"AlgebraPresentation(dim={self.dim}, {self.field})"


def twisted_product_table(groupoid: FiniteGroupoid, cocycle: Cocycle):
    """Sparse single-term products: (a, b) -> (ab, w(a, b)) for composable pairs.

    Convolution of two delta sections is always a single scaled delta,
    which makes this table the whole multiplication law of the algebra.
    """
    _require_validated(cocycle)
    out = {}
    for a, b in groupoid.composable_pairs():
        out[(a, b)] = (groupoid.comp[a][b], cocycle(a, b))
    return out


def presentation_of_B(groupoid: FiniteGroupoid, cocycle: Cocycle) -> AlgebraPresentation:
    """Structure constants of the convolution algebra on the delta basis.

    Basis i is the delta section at arrow i, so the dimension equals the
    number of arrows; the identity is the indicator of the units.
    """
    _require_validated(cocycle)
    f = cocycle.field
    m = groupoid.n_arrows
    zero_row = tuple(f.zero() for _ in range(m))
    table = [[zero_row] * m for _ in range(m)]
    for (a, b), (ab, w) in twisted_product_table(groupoid, cocycle).items():
        row = list(zero_row)
        row[ab] = w
        table[a][b] = tuple(row)
    unit = [f.zero()] * m
    for u in groupoid.units:
        unit[u] = f.one()
    return AlgebraPresentation(f, groupoid.arrow_names, table, unit)


def twisted_group_algebra(table: dict, members, cocycle_values: dict, field: Field,
                          labels=None) -> AlgebraPresentation:
    """Presentation of a twisted group algebra from a group table and cocycle.

    ``members`` fixes the basis order; ``table`` and ``cocycle_values`` are
    keyed by member pairs (as returned by ``FiniteGroupoid.isotropy_table``
    and ``restrict_to_isotropy``).
    """
    members = list(members)
    index = {g: i for i, g in enumerate(members)}
    n = len(members)
    rows = []
    for a in members:
        row = []
        for b in members:
            vec = [field.zero()] * n
            vec[index[table[(a, b)]]] = cocycle_values[(a, b)]
            row.append(tuple(vec))
        rows.append(row)
    identity = next(g for g in members if table[(g, g)] == g and all(
        table[(g, h)] == h for h in members
    ))
    unit = [field.zero()] * n
    unit[index[identity]] = field.one()
    if labels is None:
        labels = [f"t{g}" for g in members]
    return AlgebraPresentation(field, labels, rows, unit)


def check_s_unital_identity(groupoid, cocycle) -> bool:
    """Indicator of all units is a two-sided identity (finite case check)."""
    e = algebra_identity(groupoid, cocycle)
    for a in groupoid.arrows():
        d = delta(groupoid, cocycle, a)
        if convolve(e, d) != d or convolve(d, e) != d:
            return False
    return True
