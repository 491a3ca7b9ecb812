"""The imprimitivity bimodule and the induction functor.

For a unit x, the bimodule is the quotient M_x = B / BJ_x.  It is a
left B-module, a right module over the isotropy algebra B(x, x), and
free as such with one generator per orbit point: the class zeta_y of a
chosen section n_y picked in N(y, x) (the lexicographically least arrow
of the hom-set; at y = x the unit indicator at x).  Induction takes a
unital left B(x, x)-module V to the left B-module carried by one copy
of V per orbit point, with a basis arrow acting from the source block
to the target block through the isotropy class of n_tgt* . arrow . n_src.

The constructors verify the structural facts they rely on (injectivity
and linearity of the standard inclusion, the three-case projection
formula, freeness) and the verifier functions produce certificates for
the restriction/induction roundtrip, the embedding of an induced
restriction, and the transfer of submodule lattices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TheoremViolation, UnitalityError
from .isotropy import Inclusion
from .linalg import QuotientSpace, Subspace, mat_mul, mat_vec, right_kernel
from .modrep import (
    FdModule,
    annihilator,
    check_module,
    germ_space,
    restriction,
)
from .steinberg import convolve, delta, partial_inverse, unit_indicator


class ImprimitivityBimodule:
    """M_x = B / BJ_x with both actions and the free-basis bookkeeping."""

    def __init__(self, inclusion: Inclusion, x: int):
        self.inclusion = inclusion
        self.x = x
        gpd = inclusion.groupoid
        gpd._require_unit(x)
        f = inclusion.field
        self.field = f
        bj = inclusion.BJ(x)
        self.quotient = QuotientSpace(Subspace.full(inclusion.m, f), bj)
        self.orbit = tuple(gpd.orbit(x))
        self.data = inclusion.isotropy_data(x, x)

        self.chosen = {}
        for y in self.orbit:
            if y == x:
                self.chosen[y] = unit_indicator(gpd, inclusion.cocycle, [x])
            else:
                arrow = min(gpd.hom_set(y, x))
                self.chosen[y] = delta(gpd, inclusion.cocycle, arrow)
        self.zeta = {
            y: self.quotient.project(n.to_vector()) for y, n in self.chosen.items()
        }

        self.left_action = [
            self._left_matrix_on_quotient(i) for i in range(inclusion.m)
        ]
        self.right_action = [
            self._right_matrix_on_quotient(s) for s in self.data.quotient.section_basis
        ]
        self.mu = self._standard_inclusion_matrix()
        self.nu = self._nu_matrix()
        self.pi = mat_mul(self.mu, self.nu, f)
        self._verify()

    # -- construction ---------------------------------------------------------

    def _left_matrix_on_quotient(self, i):
        f = self.field
        cols = []
        for s in self.quotient.section_basis:
            img = self.inclusion.multiply(self.inclusion.delta_vector(i), s)
            cols.append(self.quotient.project(img))
        d = self.quotient.dim
        return tuple(tuple(cols[c][r] for c in range(d)) for r in range(d))

    def _right_matrix_on_quotient(self, rep):
        f = self.field
        cols = []
        for s in self.quotient.section_basis:
            img = self.inclusion.multiply(s, rep)
            cols.append(self.quotient.project(img))
        d = self.quotient.dim
        return tuple(tuple(cols[c][r] for c in range(d)) for r in range(d))

    def _standard_inclusion_matrix(self):
        cols = [
            self.quotient.project(s) for s in self.data.quotient.section_basis
        ]
        d = self.quotient.dim
        k = self.data.quotient.dim
        return tuple(tuple(cols[c][r] for c in range(k)) for r in range(d))

    def _nu_matrix(self):
        # nu(xi) = E(x,x)(lift xi); independent of the lift since E kills BJ_x
        emat = self.inclusion.projection_matrix(self.x, self.x)
        cols = [
            mat_vec(emat, s, self.field) for s in self.quotient.section_basis
        ]
        d = self.quotient.dim
        k = self.data.quotient.dim
        return tuple(tuple(cols[c][r] for c in range(d)) for r in range(k))

    def left_apply(self, bvec, xi):
        """Action of a coefficient vector of B on quotient coordinates."""
        f = self.field
        out = (f.zero(),) * self.quotient.dim
        for i, c in enumerate(bvec):
            if c != 0:
                out = tuple(
                    f.add(o, f.mul(c, e))
                    for o, e in zip(out, mat_vec(self.left_action[i], xi, f))
                )
        return out

    def right_apply(self, xi, hcoords):
        f = self.field
        out = (f.zero(),) * self.quotient.dim
        for k, c in enumerate(hcoords):
            if c != 0:
                out = tuple(
                    f.add(o, f.mul(c, e))
                    for o, e in zip(out, mat_vec(self.right_action[k], xi, f))
                )
        return out

    # -- verification ----------------------------------------------------------

    def _verify(self):
        f = self.field
        gpd = self.inclusion.groupoid
        d = self.quotient.dim
        k = self.data.quotient.dim
        # bimodule law: left and right actions commute
        for la in self.left_action:
            for ra in self.right_action:
                if mat_mul(la, ra, f) != mat_mul(ra, la, f):
                    raise TheoremViolation("left and right actions do not commute")
        # mu is injective and right-linear
        if Subspace.span(tuple(zip(*self.mu)), d, f).dim != k:
            raise TheoremViolation("standard inclusion is not injective")
        for i, s in enumerate(self.data.quotient.section_basis):
            for j in range(k):
                h = self.data.presentation.basis_vector(j)
                lhs = self._apply(self.mu, self.data.presentation.multiply(
                    self.data.quotient.project(s), h))
                rhs = self.right_apply(self._apply(self.mu, self.data.quotient.project(s)), h)
                if lhs != rhs:
                    raise TheoremViolation("standard inclusion is not right-linear")
        # nu o mu = id, mu o nu = pi
        comp = mat_mul(self.nu, self.mu, f)
        ident = tuple(
            tuple(f.one() if i == j else f.zero() for j in range(k)) for i in range(k)
        )
        if comp != ident:
            raise TheoremViolation("nu o mu is not the identity")
        if mat_mul(self.pi, self.pi, f) != self.pi:
            raise TheoremViolation("pi is not idempotent")
        # pi is A-linear
        for u in gpd.units:
            la = self.left_action[u]
            if mat_mul(self.pi, la, f) != mat_mul(la, self.pi, f):
                raise TheoremViolation("pi is not A-linear")
        # three-case formula on arrow classes
        for gamma in gpd.arrows():
            cls = self.quotient.project(self.inclusion.delta_vector(gamma))
            img = self._apply(self.pi, cls)
            if gpd.src[gamma] == self.x and gpd.tgt[gamma] == self.x:
                if img != cls:
                    raise TheoremViolation("pi must fix isotropy classes")
            else:
                if any(c != 0 for c in img):
                    raise TheoremViolation("pi must kill non-isotropy classes")
        # range(mu) = range(pi) = the J_x-killed part of the quotient
        mu_range = Subspace.span(
            [self._apply(self.mu, self.data.presentation.basis_vector(j)) for j in range(k)],
            d, f,
        )
        pi_range = Subspace.span(
            [self._apply(self.pi, self._basis(d, j)) for j in range(d)], d, f
        )
        lx = self.left_action[self.x]
        rows = [
            tuple(f.sub(lx[r][c], f.one() if r == c else f.zero()) for c in range(d))
            for r in range(d)
        ]
        killed = Subspace.span(right_kernel(rows, d, f), d, f)
        if not (mu_range == pi_range == killed):
            raise TheoremViolation("range(mu) must equal range(pi) and the killed part")
        # vanishing of mixed products n* m across distinct orbit points
        for gamma in gpd.arrows():
            if gpd.src[gamma] != self.x:
                continue
            for eta in gpd.arrows():
                if gpd.src[eta] != self.x or gpd.tgt[eta] == gpd.tgt[gamma]:
                    continue
                n_star = partial_inverse(delta(gpd, self.inclusion.cocycle, gamma))
                prod = convolve(n_star, delta(gpd, self.inclusion.cocycle, eta))
                img = self._apply(self.pi, self.quotient.project(prod.to_vector()))
                if any(c != 0 for c in img):
                    raise TheoremViolation("pi must kill cross-orbit products")
        # freeness: (h_y)_y -> sum zeta_y h_y is bijective
        if d != len(self.orbit) * k:
            raise TheoremViolation("bimodule dimension is not orbit x isotropy")
        cols = []
        for y in self.orbit:
            for j in range(k):
                cols.append(self.right_apply(self.zeta[y], self.data.presentation.basis_vector(j)))
        if Subspace.span(cols, d, f).dim != d:
            raise TheoremViolation("the zeta coordinates are not a free basis")

    def _apply(self, matrix, vec):
        return mat_vec(matrix, vec, self.field)

    @staticmethod
    def _basis(n, j):
        return tuple(1 if i == j else 0 for i in range(n))

    def nu_of(self, xi):
        """The isotropy component of a bimodule class (coordinates in B(x,x))."""
        return self._apply(self.nu, xi)

    def free_coordinates(self, xi):
        """Coordinates of xi over the free basis, one B(x,x)-block per orbit point.

        Computed with the partial inverses of the chosen sections:
        block_y = nu(n_y* . xi).
        """
        blocks = {}
        for y in self.orbit:
            n_star = partial_inverse(self.chosen[y]).to_vector()
            lifted = self.quotient.inject(xi)
            vec = self.inclusion.multiply(n_star, lifted)
            blocks[y] = self.nu_of(self.quotient.project(vec))
        return blocks


def imprimitivity_bimodule(inclusion: Inclusion, x: int) -> ImprimitivityBimodule:
    cache = getattr(inclusion, "_bimodules", None)
    if cache is None:
        cache = inclusion._bimodules = {}
    if x not in cache:
        cache[x] = ImprimitivityBimodule(inclusion, x)
    return cache[x]


@dataclass
class InducedModule:
    """A module induced from an isotropy module, on the free-basis carrier."""

    x: int
    orbit: tuple
    inducing: FdModule
    module: FdModule  # over B
    block_index: dict

    def embed(self, y: int, v):
        """The carrier vector of (y block) tensor v."""
        f = self.module.field
        out = [f.zero()] * self.module.dim
        base = self.block_index[y]
        for i, c in enumerate(v):
            out[base + i] = c
        return tuple(out)

    def block(self, y: int, vec):
        base = self.block_index[y]
        return tuple(vec[base + i] for i in range(self.inducing.dim))


def induce(inclusion: Inclusion, x: int, V: FdModule) -> InducedModule:
    """The left B-module induced from a unital B(x, x)-module V.

    A basis arrow acts as zero unless its source indexes the block; it
    then maps to the target block through the isotropy class of
    n_target* . arrow . n_source.
    """
    bim = imprimitivity_bimodule(inclusion, x)
    data = bim.data
    if V.algebra.table != data.presentation.table:
        raise ValueError("module is not over the isotropy algebra at x")
    if check_module(V) is not None:
        raise UnitalityError("inducing module must be unital and compatible")
    f = inclusion.field
    gpd = inclusion.groupoid
    k = V.dim
    orbit = bim.orbit
    block_index = {y: i * k for i, y in enumerate(orbit)}
    dim = k * len(orbit)
    emat = inclusion.projection_matrix(x, x)

    matrices = []
    for gamma in gpd.arrows():
        mat = [[f.zero()] * dim for _ in range(dim)]
        y = gpd.src[gamma]
        z = gpd.tgt[gamma]
        if y in block_index and z in block_index:
            n_y = bim.chosen[y]
            n_z_star = partial_inverse(bim.chosen[z])
            u = convolve(n_z_star, convolve(delta(gpd, inclusion.cocycle, gamma), n_y))
            h = mat_vec(emat, u.to_vector(), f)
            act = V.action_of(h)
            rb, cb = block_index[z], block_index[y]
            for r in range(k):
                for c in range(k):
                    mat[rb + r][cb + c] = act[r][c]
        matrices.append(tuple(tuple(r) for r in mat))
    module = FdModule(inclusion.B, matrices, f"ind{x}[{V.name}]")
    violation = check_module(module)
    if violation is not None:
        raise TheoremViolation(f"induced module failed validation: {violation}")
    return InducedModule(x, orbit, V, module, block_index)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class RoundtripCertificate:
    """v -> zeta_x tensor v is a B(x,x)-isomorphism onto the restriction."""

    x: int
    module_dim: int
    induced_dim: int
    restriction_dim: int


def verify_res_ind_roundtrip(inclusion: Inclusion, x: int, V: FdModule) -> RoundtripCertificate:
    ind = induce(inclusion, x, V)
    res = restriction(inclusion, ind.module, x)
    f = inclusion.field
    if res.subspace.dim != V.dim:
        raise TheoremViolation("restriction of the induced module has the wrong size")
    for j in range(V.dim):
        image = ind.embed(x, V.basis_vector(j))
        if image not in res.subspace:
            raise TheoremViolation("embedded vector escapes the restriction")
    # bijectivity onto the restriction
    embedded = Subspace.span(
        [ind.embed(x, V.basis_vector(j)) for j in range(V.dim)], ind.module.dim, f
    )
    if embedded != res.subspace:
        raise TheoremViolation("embedding does not fill the restriction")
    # B(x,x)-linearity via the defining action (c + H) w = c w
    data = inclusion.isotropy_data(x, x)
    for kidx, s in enumerate(data.quotient.section_basis):
        act_carrier = ind.module.action_of(s)
        for j in range(V.dim):
            lhs = mat_vec(act_carrier, ind.embed(x, V.basis_vector(j)), f)
            rhs = ind.embed(
                x, mat_vec(V.matrices[kidx], V.basis_vector(j), f)
            )
            if lhs != rhs:
                raise TheoremViolation("embedding is not isotropy-linear")
    return RoundtripCertificate(x, V.dim, ind.module.dim, res.subspace.dim)


@dataclass
class EmbeddingCertificate:
    """rho: Ind(Res V) -> V is injective B-linear; onto iff image is full."""

    x: int
    induced_dim: int
    image_dim: int
    target_dim: int

    @property
    def onto(self) -> bool:
        return self.image_dim == self.target_dim


def verify_ind_res_embedding(inclusion: Inclusion, V: FdModule, x: int) -> EmbeddingCertificate:
    """Build rho((b + BJ_x) tensor v) = b v on the free carrier and check it."""
    res = restriction(inclusion, V, x)
    f = inclusion.field
    if res.subspace.dim == 0:
        return EmbeddingCertificate(x, 0, 0, V.dim)
    ind = induce(inclusion, x, res.module)
    bim = imprimitivity_bimodule(inclusion, x)
    # columns of rho: block y, basis vector j -> action(n_y) (inclusion of v_j)
    cols = []
    for y in ind.orbit:
        nvec = bim.chosen[y].to_vector()
        act = V.action_of(nvec)
        for j in range(res.subspace.dim):
            vec = res.subspace.basis[j]
            cols.append(mat_vec(act, vec, f))
    d = V.dim
    rho = tuple(tuple(cols[c][r] for c in range(len(cols))) for r in range(d))
    # injectivity
    rank = Subspace.span(cols, d, f).dim
    if rank != ind.module.dim:
        raise TheoremViolation("rho is not injective")
    # B-linearity on arrow generators
    for gamma in inclusion.groupoid.arrows():
        lhs = mat_mul(rho, ind.module.matrices[gamma], f)
        rhs = mat_mul(V.matrices[gamma], rho, f)
        if lhs != rhs:
            raise TheoremViolation("rho is not B-linear")
    return EmbeddingCertificate(x, ind.module.dim, rank, V.dim)


def submodule_transfer(inclusion: Inclusion, ind: InducedModule, Z: Subspace) -> Subspace:
    """The submodule W of the inducing module with Ind(W) = Z, by pullback.

    Z must be invariant under the induced action; W = {v : (x block of v)
    lies in Z}; the function checks Ind(W) = Z exactly before returning.
    """
    f = inclusion.field
    mod = ind.module
    for m in mod.matrices:
        for w in Z.basis:
            if mat_vec(m, w, f) not in Z:
                raise ValueError("subspace is not invariant under the induced action")
    k = ind.inducing.dim
    # membership rows: the residual of embed(x, v) against Z must vanish
    reducer_rows = []
    embeds = [ind.embed(ind.x, ind.inducing.basis_vector(j)) for j in range(k)]
    residuals = [Z.reduce(e) for e in embeds]
    for r in range(mod.dim):
        row = tuple(residuals[j][r] for j in range(k))
        if any(c != 0 for c in row):
            reducer_rows.append(row)
    W = Subspace.span(right_kernel(reducer_rows, k, f), k, f)
    # verify the forward image: Ind(W) = span of all blocks of W
    image = Subspace.span(
        [ind.embed(y, w) for y in ind.orbit for w in W.basis], mod.dim, f
    )
    if image != Z:
        raise TheoremViolation("pullback does not induce back onto Z")
    return W


@dataclass
class GermEquivalenceCertificate:
    """Ind_x(V[x]) and Ind_y(V[y]) are isomorphic along an explicit intertwiner."""

    x: int
    y: int
    dim: int


def verify_germ_induction_equivalence(inclusion: Inclusion, V: FdModule, x: int, y: int) -> GermEquivalenceCertificate:
    """Explicit isomorphism Ind_x(V[x]) -> Ind_y(V[y]) for y in the orbit of x.

    Built from a chosen section n in N(y, x): classes move by b -> b n*,
    germs by v -> n v; on the free carriers this is blockwise action of
    the isotropy class of n_z(y)* n_z(x) n* followed by the germ map.
    """
    gpd = inclusion.groupoid
    f = inclusion.field
    if y not in gpd.orbit(x):
        raise ValueError(f"{y} is not in the orbit of {x}")
    gx = germ_space(inclusion, V, x)
    gy = germ_space(inclusion, V, y)
    ind_x = induce(inclusion, x, gx.module)
    ind_y = induce(inclusion, y, gy.module)
    if annihilator(ind_x.module) != annihilator(ind_y.module):
        raise TheoremViolation("induced germ modules have different annihilators")
    if ind_x.module.dim != ind_y.module.dim:
        raise TheoremViolation("induced germ modules have different dimensions")
    bim_x = imprimitivity_bimodule(inclusion, x)
    bim_y = imprimitivity_bimodule(inclusion, y)
    n = delta(gpd, inclusion.cocycle, min(gpd.hom_set(y, x)))
    n_star = partial_inverse(n)
    emat_y = inclusion.projection_matrix(y, y)
    # psi: germ at x -> germ at y, v -> n v
    psi_cols = []
    for s in gx.quotient.section_basis:
        img = V.apply(n.to_vector(), s)
        psi_cols.append(gy.quotient.project(img))
    kx, ky = gx.quotient.dim, gy.quotient.dim
    psi = tuple(tuple(psi_cols[c][r] for c in range(kx)) for r in range(ky))

    dim = ind_x.module.dim
    cols = [None] * dim
    for z in ind_x.orbit:
        u = convolve(
            partial_inverse(bim_y.chosen[z]), convolve(bim_x.chosen[z], n_star)
        )
        h = mat_vec(emat_y, u.to_vector(), f)
        act = gy.module.action_of(h)
        block = mat_mul(act, psi, f)
        for j in range(kx):
            col = mat_vec(block, tuple(
                f.one() if i == j else f.zero() for i in range(kx)
            ), f)
            cols[ind_x.block_index[z] + j] = ind_y.embed(z, col)
    T = tuple(tuple(cols[c][r] for c in range(dim)) for r in range(dim))
    if Subspace.span(cols, dim, f).dim != dim:
        raise TheoremViolation("germ intertwiner is not bijective")
    for gamma in gpd.arrows():
        if mat_mul(T, ind_x.module.matrices[gamma], f) != mat_mul(
            ind_y.module.matrices[gamma], T, f
        ):
            raise TheoremViolation("germ intertwiner is not B-linear")
    return GermEquivalenceCertificate(x, y, dim)
