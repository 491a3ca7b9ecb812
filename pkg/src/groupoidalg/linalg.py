"""Exact scalar and subspace arithmetic over the rationals and prime fields.

Every vector space computation in the package runs through this module:
row-reduced echelon bases make subspace equality a syntactic check, and
quotients come with a deterministic section (coset representatives with
zeros in the kernel's pivot columns).

Scalars are `fractions.Fraction` over the rationals and plain ints in
``[0, p)`` over GF(p).  No floating point is used anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ContainmentError, DimensionMismatch


class Field:
    """The rationals, or the prime field GF(p).

    Over GF(p) all values are ints reduced into ``[0, p)``; over the
    rationals they are `Fraction` instances (always stored reduced, with
    positive denominator, which `Fraction` guarantees).
    """

    def __init__(self, p: int | None = None):
        if p is not None:
            if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
                raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def of(self, n):
        """Coerce an int, Fraction or scalar string into this field."""
        if isinstance(n, str):
            return self.parse(n)
        if self.p is not None:
            if isinstance(n, Fraction):
                if n.denominator % self.p == 0:
                    raise ZeroDivisionError(f"denominator not invertible mod {self.p}")
                return n.numerator * pow(n.denominator, -1, self.p) % self.p
            return int(n) % self.p
        return Fraction(n)

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p) if self.p is not None else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, text: str):
        """Parse "a/b" or "a" (rationals), or a decimal residue (GF(p))."""
        text = text.strip()
        if self.p is not None:
            return int(text) % self.p
        return Fraction(text)

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"GF({self.p})"


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


# ---------------------------------------------------------------------------
# matrix helpers (rows are tuples of field scalars)


def rref(rows, field):
    """Reduced row echelon form.  Returns (rows, pivot_columns).

    Output rows are nonzero, pivot entries are 1, pivot columns strictly
    increase and are zero in every other row: the canonical basis of the
    row space.
    """
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = field.inv(mat[row][col])
        mat[row] = [field.mul(inv, v) for v in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [field.sub(mat[r][c], field.mul(f, mat[row][c])) for c in range(ncols)]
        pivots.append(col)
        row += 1
        if row == len(mat):
            break
    return [tuple(r) for r in mat[:row]], pivots


def mat_vec(mat, vec, field):
    return tuple(
        _dot(row, vec, field) for row in mat
    )


def _dot(u, v, field):
    acc = field.zero()
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            acc = field.add(acc, field.mul(a, b))
    return acc


def mat_mul(a, b, field):
    bt = list(zip(*b))
    return tuple(tuple(_dot(row, col, field) for col in bt) for row in a)


def identity_matrix(n, field):
    one, zero = field.one(), field.zero()
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zero_vector(n, field):
    return (field.zero(),) * n


def vec_add(u, v, field):
    return tuple(field.add(a, b) for a, b in zip(u, v))

def vec_sub(u, v, field):
    return tuple(field.sub(a, b) for a, b in zip(u, v))

def vec_scale(c, v, field):
    return tuple(field.mul(c, a) for a in v)


def right_kernel(rows, ncols, field):
    """Basis (RREF) of {v : M v = 0} for the matrix with the given rows."""
    reduced, pivots = rref(rows, field)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for r, pc in enumerate(pivots):
            # row r reads: v[pc] + sum_{c free} M[r][c] v[c] = 0
            v[pc] = field.neg(reduced[r][fc])
        basis.append(tuple(v))
    rows2, _ = rref(basis, field)
    return rows2


def solve_right(rows, target, field):
    """One solution x of M x = target (columns of M indexed like x), or None."""
    if not rows:
        return None if any(t != 0 for t in target) else ()
    ncols = len(rows[0])
    aug = [tuple(row) + (t,) for row, t in zip(rows, target)]
    reduced, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero()] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][ncols]
    return tuple(x)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A linear subspace of K^n held as a canonical RREF basis.

    Because the basis is canonical, two subspaces are equal as sets if and
    only if their basis tuples are identical.
    """

    __slots__ = ("ambient_dim", "field", "basis", "pivots")

    def __init__(self, ambient_dim, field, basis, pivots):
        self.ambient_dim = ambient_dim
        self.field = field
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, vectors, ambient_dim, field) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(
                    f"vector of length {len(v)} in ambient dimension {ambient_dim}"
                )
        basis, pivots = rref(vectors, field)
        return cls(ambient_dim, field, basis, pivots)

    @classmethod
    def zero(cls, ambient_dim, field) -> "Subspace":
        return cls(ambient_dim, field, (), ())

    @classmethod
    def full(cls, ambient_dim, field) -> "Subspace":
        return cls.span(identity_matrix(ambient_dim, field), ambient_dim, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check_ambient(self, other):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(
                f"ambient {self.ambient_dim} vs {other.ambient_dim}"
            )

    def reduce(self, v):
        """Residual of v after eliminating this basis (zero iff v in self)."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector length {len(v)} vs {self.ambient_dim}")
        field = self.field
        v = list(v)
        for row, pc in zip(self.basis, self.pivots):
            c = v[pc]
            if c != 0:
                for j in range(pc, self.ambient_dim):
                    if row[j] != 0:
                        v[j] = field.sub(v[j], field.mul(c, row[j]))
        return tuple(v)

    def membership(self, v):
        """Coordinates of v over the basis if v lies here, else None.

        Over an RREF basis the candidate coordinates are just the entries
        of v at the pivot columns.
        """
        residual = self.reduce(v)
        if any(c != 0 for c in residual):
            return None
        return tuple(v[pc] for pc in self.pivots)

    def __contains__(self, v):
        return self.membership(v) is not None

    def contains_subspace(self, other) -> bool:
        self._check_ambient(other)
        return all(v in self for v in other.basis)

    def from_coordinates(self, coords):
        field = self.field
        out = [field.zero()] * self.ambient_dim
        for c, row in zip(coords, self.basis):
            if c != 0:
                for j, a in enumerate(row):
                    if a != 0:
                        out[j] = field.add(out[j], field.mul(c, a))
        return tuple(out)

    def add(self, other) -> "Subspace":
        self._check_ambient(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim, self.field)

    def intersect(self, other) -> "Subspace":
        """Intersection via the Zassenhaus block trick.

        Row reduce [S | S; T | 0]: rows whose left half vanished carry the
        intersection in their right half.
        """
        self._check_ambient(other)
        n = self.ambient_dim
        field = self.field
        zero = zero_vector(n, field)
        block = [row + row for row in self.basis] + [row + zero for row in other.basis]
        reduced, _ = rref(block, field)
        inter = []
        for row in reduced:
            if all(c == 0 for c in row[:n]):
                inter.append(row[n:])
        return Subspace.span(inter, n, field)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.field == other.field
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.field, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, {self.field})"


def span(vectors, ambient_dim, field) -> Subspace:
    """RREF basis of the linear span; idempotent on existing bases."""
    return Subspace.span(vectors, ambient_dim, field)


class QuotientSpace:
    """numerator/kernel with a deterministic linear section.

    The section basis consists of the coset representatives obtained by
    clearing the kernel's pivot columns, so every vector of the numerator
    splits uniquely as (combination of section basis) + (kernel element).
    """

    __slots__ = ("ambient", "kernel", "section", "field")

    def __init__(self, numerator: Subspace, kernel: Subspace):
        if not numerator.contains_subspace(kernel):
            raise ContainmentError("kernel is not contained in the numerator")
        self.ambient = numerator
        self.kernel = kernel
        self.field = numerator.field
        reduced = [kernel.reduce(v) for v in numerator.basis]
        self.section = Subspace.span(reduced, numerator.ambient_dim, numerator.field)

    @property
    def dim(self) -> int:
        return self.section.dim

    @property
    def section_basis(self):
        return self.section.basis

    def project(self, v):
        """Coordinates over the section basis of the class of v."""
        w = self.kernel.reduce(v)
        coords = self.section.membership(w)
        if coords is None:
            raise ContainmentError("vector does not lie in the numerator space")
        return coords

    def inject(self, coords):
        """Canonical representative of the class with the given coordinates."""
        return self.section.from_coordinates(coords)

    def reduce(self, v):
        """Canonical representative of the class of v."""
        return self.inject(self.project(v))

    def __repr__(self):
        return f"QuotientSpace(dim={self.dim}, ambient_dim={self.ambient.dim})"


def quotient(numerator: Subspace, kernel: Subspace) -> QuotientSpace:
    return QuotientSpace(numerator, kernel)
