import cmath
import collections.abc
import dataclasses
import functools
import logging

import numpy as np
import numpy.typing as npt

from ok_groupoid._algebra import AlgebraElement, ComplexVector, delta
from ok_groupoid._exceptions import (
    BaseUnitMismatch,
    GroupoidMismatch,
    InvalidRep,
    NotInIsotropy,
    SupportOutsideIsotropy,
)
from ok_groupoid._groupoid import FiniteGroupoid
from ok_groupoid._representations import (
    MatrixRep,
    isotropy_left_regular,
    regular_representation,
    translation_unitary,
)
from ok_groupoid._spectral import (
    ComplexMatrix,
    block_diagonal,
    dagger,
    hermitian_eigensystem,
)

log = logging.getLogger("ok_groupoid.induction")

_GRAM_CUTOFF = 1e-10  # Gram eigenvalues below this·max span the null space
_REP_SLACK = 1e-10  # max entry error accepted in unitarity/multiplicativity


@dataclasses.dataclass(frozen=True, eq=False)
class ModuleVector:
    """
    A complex function on `G_x`, as an element of the Hilbert module
    over `C*(G(x))`. Coefficients follow the `G_x` ascending basis.
    """

    groupoid: FiniteGroupoid
    base: int
    coeffs: ComplexVector

    def __post_init__(self) -> None:
        gx = self.groupoid.fibers(self.base).source_fiber
        coeffs = np.array(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (len(gx),):
            msg = f"{coeffs.shape} coefficients for |G_{self.base}|={len(gx)}"
            raise BaseUnitMismatch(msg)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def basis(self) -> tuple[int, ...]:
        return self.groupoid.fibers(self.base).source_fiber

    def __getitem__(self, g: int) -> complex:
        return complex(self.coeffs[self.basis.index(g)])


def module_vector(
    groupoid: FiniteGroupoid, x: int, coeffs: npt.ArrayLike
) -> ModuleVector:
    return ModuleVector(groupoid, x, np.asarray(coeffs))


def basis_vector(groupoid: FiniteGroupoid, x: int, g: int) -> ModuleVector:
    """
    Returns `e_g` in the module over the unit `x`.

    Raises:
    - `BaseUnitMismatch` - `g` does not start at `x`
    """

    gx = groupoid.fibers(x).source_fiber
    if g not in gx:
        raise BaseUnitMismatch(f"Arrow {g} not in G_{x}", f"unit {x}")
    coeffs = np.zeros(len(gx), dtype=np.complex128)
    coeffs[gx.index(g)] = 1.0
    return ModuleVector(groupoid, x, coeffs)


def star_inner(phi: ModuleVector, psi: ModuleVector) -> AlgebraElement:
    """
    Returns `⟨φ,ψ⟩_*`, supported on `G(x)`, with
    `⟨φ,ψ⟩_*(ζ) = Σ_{γ₁γ₂=ζ} conj(φ(γ₁⁻¹)) ψ(γ₂)`. With `α = γ₁⁻¹` in
    `G_x` the sum runs over `α` with `γ₂ = αζ`.

    Raises:
    - `BaseUnitMismatch` - `phi` and `psi` sit over different units
    """

    groupoid, x = _check_pair(phi, psi)
    out = np.zeros(groupoid.size, dtype=np.complex128)
    for zeta, shift in _right_shifts(groupoid, x).items():
        out[zeta] = np.vdot(phi.coeffs, psi.coeffs[shift])
    return AlgebraElement(groupoid, out)


def module_norm(phi: ModuleVector) -> float:
    """Returns `‖φ‖_M = ‖⟨φ,φ⟩_*‖^½`, the norm taken through `Λ`."""
    inner = star_inner(phi, phi)
    lam = isotropy_left_regular(phi.groupoid, phi.base, inner)
    return float(np.sqrt(lam.norm()))


def embed_j(phi: ModuleVector) -> ComplexVector:
    """Returns `j(φ)` in `H_x = ℓ₂(G_x)` (the same coefficients)."""
    return np.array(phi.coeffs)


def act(a: AlgebraElement, phi: ModuleVector) -> ModuleVector:
    """Returns `a∗φ`, the left action of `C_c(G)` on the module."""
    lam = regular_representation(phi.groupoid, phi.base, a)
    return ModuleVector(phi.groupoid, phi.base, lam.matrix @ phi.coeffs)


def fourier(b: AlgebraElement, zeta: int) -> complex:
    """
    Returns `b̂(ζ)`, the evaluation functional at `ζ` in `G(x)`; on a
    finite group it reads off the coefficient.

    Raises:
    - `NotInIsotropy` - `zeta` is not a loop (source equals range)
    - `SupportOutsideIsotropy` - `b` is not supported on `G(x)`
    """

    groupoid = b.groupoid
    x = groupoid.source(zeta)
    if groupoid.ranges[zeta] != x:
        raise NotInIsotropy(f"Arrow {zeta} is not in any G(x)")
    iso = set(groupoid.fibers(x).isotropy)
    if outside := sorted(set(b.support()) - iso):
        msg = f"Support {outside} outside G({x})"
        raise SupportOutsideIsotropy(msg, f"unit {x}")
    return b[zeta]


def main_identity_residual(
    a: AlgebraElement, phi: ModuleVector, psi: ModuleVector, zeta: int
) -> float:
    """
    Returns `|⟨φ, a∗ψ⟩_*^(ζ) - ⟨λ_x(a) R_ζ j(ψ), j(φ)⟩|`, which is zero
    for every `a`, `φ`, `ψ` and `ζ ∈ G(x)` up to rounding.

    Raises:
    - `BaseUnitMismatch` - `phi` and `psi` sit over different units
    - `NotInIsotropy` - `zeta` is not in `G(x)`
    """

    groupoid, x = _check_pair(phi, psi)
    translate = translation_unitary(groupoid, x, zeta).matrix
    lam = regular_representation(groupoid, x, a).matrix
    rhs = np.vdot(embed_j(phi), lam @ translate @ embed_j(psi))
    lhs = fourier(star_inner(phi, act(a, psi)), zeta)
    return abs(lhs - rhs)


#
# Representations of the isotropy group
#


@dataclasses.dataclass(frozen=True, eq=False)
class IsotropyRep:
    """
    A finite-dimensional unitary representation `L` of `G(x)`, as one
    matrix per isotropy arrow.

    Raises:
    - `InvalidRep` - images missing, not unitary, or not multiplicative
    """

    groupoid: FiniteGroupoid
    base: int
    images: collections.abc.Mapping[int, ComplexMatrix]

    def __post_init__(self) -> None:
        _check_rep(self)

    @property
    def dim(self) -> int:
        return next(iter(self.images.values())).shape[0]

    def __call__(self, zeta: int) -> ComplexMatrix:
        return self.images[zeta]

    def apply(self, b: AlgebraElement) -> ComplexMatrix:
        """
        Returns `L(b) = Σ b(ζ) L(ζ)`.

        Raises:
        - `SupportOutsideIsotropy` - `b` is not supported on `G(x)`
        """

        if outside := sorted(set(b.support()) - set(self.images)):
            msg = f"Support {outside} outside G({self.base})"
            raise SupportOutsideIsotropy(msg, f"unit {self.base}")
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for zeta, image in self.images.items():
            out += b.coeffs[zeta] * image
        return out


@functools.lru_cache(maxsize=64)
def left_regular_rep(groupoid: FiniteGroupoid, x: int) -> IsotropyRep:
    """Returns `Λ`, the left regular representation of `G(x)`."""
    images = {
        zeta: isotropy_left_regular(groupoid, x, delta(groupoid, zeta)).matrix
        for zeta in groupoid.fibers(x).isotropy
    }
    return IsotropyRep(groupoid, x, images)


def trivial_rep(groupoid: FiniteGroupoid, x: int) -> IsotropyRep:
    one = np.ones((1, 1), dtype=np.complex128)
    images = {zeta: one for zeta in groupoid.fibers(x).isotropy}
    return IsotropyRep(groupoid, x, images)


def character_rep(
    groupoid: FiniteGroupoid, x: int, generator: int, k: int
) -> IsotropyRep:
    """
    Returns the character `ζ^j ↦ exp(2πi·jk/n)` of a cyclic `G(x)` of
    order `n` generated by `generator`.

    Raises:
    - `InvalidRep` - `generator` does not generate `G(x)`
    """

    iso = groupoid.fibers(x).isotropy
    if generator not in iso:
        raise InvalidRep(f"Arrow {generator} not in G({x})", f"unit {x}")
    powers = [x]
    while (nxt := groupoid.compose(generator, powers[-1])) != x:
        powers.append(nxt)
    n = len(powers)
    if n != len(iso):
        msg = f"Arrow {generator} has order {n}, |G({x})|={len(iso)}"
        raise InvalidRep(msg, f"unit {x}")
    images = {
        zeta: np.array([[cmath.exp(2j * cmath.pi * j * k / n)]])
        for j, zeta in enumerate(powers)
    }
    return IsotropyRep(groupoid, x, images)


def direct_sum_rep(*reps: IsotropyRep) -> IsotropyRep:
    """
    Returns `L₁ ⊕ L₂ ⊕ ...` of representations of the same `G(x)`.

    Raises:
    - `BaseUnitMismatch` - the representations sit over different units
    """

    first = reps[0]
    for rep in reps[1:]:
        if not rep.groupoid.same_as(first.groupoid) or rep.base != first.base:
            raise BaseUnitMismatch("Summands over different isotropy groups")
    images = {
        zeta: block_diagonal([rep(zeta) for rep in reps])
        for zeta in first.images
    }
    return IsotropyRep(first.groupoid, first.base, images)


def conjugated_rep(rep: IsotropyRep, u: ComplexMatrix) -> IsotropyRep:
    """
    Returns `ζ ↦ U L(ζ) U†` for a unitary `U`.

    Raises:
    - `InvalidRep` - `u` is not unitary of the right size
    """

    if u.shape != (rep.dim, rep.dim) or not np.allclose(
        u @ u.conj().T, np.eye(rep.dim), atol=_REP_SLACK
    ):
        raise InvalidRep(f"Conjugating matrix {u.shape} is not unitary")
    images = {z: u @ image @ u.conj().T for z, image in rep.images.items()}
    return IsotropyRep(rep.groupoid, rep.base, images)


def _check_rep(rep: IsotropyRep) -> None:
    groupoid, x = rep.groupoid, rep.base
    iso = groupoid.fibers(x).isotropy
    where = f"unit {x}"
    if set(rep.images) != set(iso):
        msg = f"Images for {sorted(rep.images)}, G({x}) is {list(iso)}"
        raise InvalidRep(msg, where)

    dim = rep.images[x].shape[0]
    eye = np.eye(dim)
    for zeta, image in rep.images.items():
        if image.shape != (dim, dim):
            raise InvalidRep(f"Image of {zeta} is {image.shape}", where)
        if np.max(np.abs(image @ image.conj().T - eye)) > _REP_SLACK:
            raise InvalidRep(f"Image of {zeta} is not unitary", where)
    if np.max(np.abs(rep.images[x] - eye)) > _REP_SLACK:
        raise InvalidRep("Identity does not map to the identity", where)
    for z1 in iso:
        for z2 in iso:
            prod = rep.images[groupoid.compose(z1, z2)]
            if np.max(np.abs(rep.images[z1] @ rep.images[z2] - prod)) > (
                _REP_SLACK
            ):
                msg = f"L({z1})L({z2}) != L({z1}·{z2})"
                raise InvalidRep(msg, where)


#
# Induced representations
#


class InducedSpace:
    """
    The space of `Ind L`: `C(G_x) ⊗ H_L` with the form
    `⟨φ⊗ξ, ψ⊗η⟩ = ⟨L(⟨ψ,φ⟩_*)ξ, η⟩`, divided by its null space.

    The raw basis is `e_γ ⊗ ξ_k` for `γ ∈ G_x` ascending and `k` in
    `range(L.dim)`, lexicographically. The Gram matrix is diagonalized and
    eigenvalues below 1e-10 of the largest are dropped; the survivors give
    an orthonormal basis of the quotient, in which `represent` works.
    """

    def __init__(self, groupoid: FiniteGroupoid, x: int, rep: IsotropyRep):
        if not rep.groupoid.same_as(groupoid):
            raise GroupoidMismatch("Representation over another groupoid")
        if rep.base != x:
            msg = f"Representation of G({rep.base}), not G({x})"
            raise BaseUnitMismatch(msg)

        self.groupoid = groupoid
        self.base = x
        self.rep = rep
        gx = groupoid.fibers(x).source_fiber
        d = rep.dim
        self.raw_basis = tuple((g, k) for g in gx for k in range(d))

        # gram[(γ′,k′), (γ,k)] = ⟨e_γ⊗ξ_k, e_γ′⊗ξ_k′⟩ = L(γ′⁻¹γ)[k′, k]
        n = len(self.raw_basis)
        self.gram = np.zeros((n, n), dtype=np.complex128)
        for i, g2 in enumerate(gx):
            for j, g1 in enumerate(gx):
                if groupoid.ranges[g1] == groupoid.ranges[g2]:
                    zeta = int(groupoid.table[groupoid.inverses[g2], g1])
                    block = rep(zeta)
                    self.gram[i * d : (i + 1) * d, j * d : (j + 1) * d] = block

        values, vectors = hermitian_eigensystem(self.gram)
        keep = values > _GRAM_CUTOFF * values.max()
        kept, frame = values[keep], vectors[:, keep]
        self.frame: ComplexMatrix = frame / np.sqrt(kept)
        """Raw coefficients of the orthonormal quotient basis (columns)."""

        self.coordinates: ComplexMatrix = np.sqrt(kept)[:, None] * dagger(frame)
        """Maps raw coefficients to orthonormal quotient coordinates."""

        log.debug(
            "Induced space at unit %d: raw %d, quotient %d", x, n, self.dim
        )

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def raw_vector(self, g: int, k: int) -> ComplexVector:
        out = np.zeros(len(self.raw_basis), dtype=np.complex128)
        out[self.raw_basis.index((g, k))] = 1.0
        return out

    def inner(self, u: ComplexVector, v: ComplexVector) -> complex:
        """Returns `⟨u, v⟩` for raw coefficient vectors."""
        return complex(np.vdot(v, self.gram @ u))

    def raw_operator(self, f: AlgebraElement) -> ComplexMatrix:
        """Returns `f∗(·) ⊗ 1` on raw coefficients."""
        lam = regular_representation(self.groupoid, self.base, f).matrix
        return np.kron(lam, np.eye(self.rep.dim))

    def represent(self, f: AlgebraElement) -> MatrixRep:
        """Returns `Ind L(f)` in the orthonormal quotient basis."""
        matrix = self.coordinates @ self.raw_operator(f) @ self.frame
        return MatrixRep(tuple(range(self.dim)), matrix)


@functools.lru_cache(maxsize=64)
def induced_space(
    groupoid: FiniteGroupoid, x: int, rep: IsotropyRep
) -> InducedSpace:
    return InducedSpace(groupoid, x, rep)


def induce(
    groupoid: FiniteGroupoid, x: int, rep: IsotropyRep, f: AlgebraElement
) -> MatrixRep:
    """
    Returns `Ind L(f)`, `(f∗φ)⊗ξ` on the quotient space of `InducedSpace`.

    Raises:
    - `BaseUnitMismatch` - `rep` is a representation of another `G(y)`
    """

    return induced_space(groupoid, x, rep).represent(f)


def equivalence_unitary(groupoid: FiniteGroupoid, x: int) -> MatrixRep:
    """
    Returns `U: H_x → H_{Ind Λ}`, `e_γ ↦ e_γ ⊗ δ_x`, with columns in the
    quotient basis of `induced_space(groupoid, x, left_regular_rep(...))`.
    Then `U† Ind Λ(f) U = λ_x(f)`.
    """

    space = induced_space(groupoid, x, left_regular_rep(groupoid, x))
    gx = groupoid.fibers(x).source_fiber
    k = groupoid.fibers(x).isotropy.index(x)
    columns = [space.coordinates @ space.raw_vector(g, k) for g in gx]
    matrix = np.stack(columns, axis=1)
    return MatrixRep(gx, matrix, codomain=tuple(range(space.dim)))


def comparison_check(
    groupoid: FiniteGroupoid, x: int, a: AlgebraElement
) -> bool:
    """True unless `λ_x(a)` vanishes while `Ind Λ(a)` does not."""
    if regular_representation(groupoid, x, a).norm() > 1e-10:
        return True
    ind = induce(groupoid, x, left_regular_rep(groupoid, x), a)
    return ind.norm() <= 1e-9


@functools.lru_cache(maxsize=64)
def _right_shifts(
    groupoid: FiniteGroupoid, x: int
) -> dict[int, npt.NDArray[np.intp]]:
    """For each `ζ ∈ G(x)`, the index map `i ↦ position of G_x[i]·ζ`."""
    fib = groupoid.fibers(x)
    index = {g: i for i, g in enumerate(fib.source_fiber)}
    return {
        zeta: np.array(
            [index[int(groupoid.table[g, zeta])] for g in fib.source_fiber]
        )
        for zeta in fib.isotropy
    }


def _check_pair(
    phi: ModuleVector, psi: ModuleVector
) -> tuple[FiniteGroupoid, int]:
    if not phi.groupoid.same_as(psi.groupoid):
        raise GroupoidMismatch("Module vectors over different groupoids")
    if phi.base != psi.base:
        msg = f"Module vectors over units {phi.base} and {psi.base}"
        raise BaseUnitMismatch(msg)
    return phi.groupoid, phi.base
