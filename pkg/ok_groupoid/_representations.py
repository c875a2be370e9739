import dataclasses
import logging
import typing

import numpy as np

from ok_groupoid._algebra import AlgebraElement
from ok_groupoid._exceptions import (
    GroupoidMismatch,
    NotInIsotropy,
    SupportOutsideIsotropy,
)
from ok_groupoid._groupoid import FiniteGroupoid
from ok_groupoid._spectral import (
    ComplexMatrix,
    block_diagonal,
    dagger,
    spectral_norm,
)

log = logging.getLogger("ok_groupoid.representations")

BasisLabel = typing.Hashable


@dataclasses.dataclass(frozen=True, eq=False)
class MatrixRep:
    """
    An operator as a matrix with labelled basis. Columns are inputs and
    rows outputs: entry `(row b₂, col b₁)` is `⟨T e_{b₁}, e_{b₂}⟩`.
    """

    basis: tuple[BasisLabel, ...]
    matrix: ComplexMatrix
    codomain: tuple[BasisLabel, ...] | None = None
    """Row labels, when rows and columns index different spaces."""

    def __post_init__(self) -> None:
        rows = len(self.codomain if self.codomain is not None else self.basis)
        if self.matrix.shape != (rows, len(self.basis)):
            msg = f"{self.matrix.shape} matrix for {len(self.basis)} labels"
            raise ValueError(msg)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def rows(self) -> tuple[BasisLabel, ...]:
        return self.basis if self.codomain is None else self.codomain

    def norm(self) -> float:
        return spectral_norm(self.matrix)

    def dagger(self) -> "MatrixRep":
        return MatrixRep(self.rows, dagger(self.matrix), codomain=self.basis)


def regular_representation(
    groupoid: FiniteGroupoid, x: int, f: AlgebraElement
) -> MatrixRep:
    """
    Returns `λ_x(f)` on `ℓ₂(G_x)`, basis `G_x` ascending, with entry
    `(row γ₂, col γ₁)` equal to `f(γ₂γ₁⁻¹)`. The product is always
    defined on one source fiber (both sides start at `x`'s range).

    Raises:
    - `NotAUnit` - `x` is not a unit
    - `GroupoidMismatch` - `f` is over another groupoid
    """

    _check_element(groupoid, f)
    gx = np.array(groupoid.fibers(x).source_fiber)
    inverses = np.array(groupoid.inverses)[gx]
    products = groupoid.table[gx[:, None], inverses[None, :]]
    matrix = f.coeffs[products]
    return MatrixRep(tuple(int(g) for g in gx), matrix)


def regular_representation_by_action(
    groupoid: FiniteGroupoid, x: int, f: AlgebraElement
) -> MatrixRep:
    """
    Returns `λ_x(f)` built from the defining sum
    `(λ_x(f)ξ)(γ) = Σ_{γ′γ″=γ} f(γ′) ξ(γ″)`, one basis column at a time.
    Agrees entry for entry with `regular_representation`.
    """

    _check_element(groupoid, f)
    gx = groupoid.fibers(x).source_fiber
    index = {g: i for i, g in enumerate(gx)}
    matrix = np.zeros((len(gx), len(gx)), dtype=np.complex128)
    for col, g1 in enumerate(gx):
        for g, c in enumerate(f.coeffs):
            if groupoid.sources[g] == groupoid.ranges[g1]:
                matrix[index[int(groupoid.table[g, g1])], col] += c
    return MatrixRep(gx, matrix)


def full_regular(
    groupoid: FiniteGroupoid,
    f: AlgebraElement,
    units: typing.Iterable[int] | None = None,
) -> MatrixRep:
    """
    Returns `⊕_x λ_x(f)` over `units` (default all, ascending) as a
    block-diagonal matrix with `(x, γ)` basis labels.
    """

    units = groupoid.units if units is None else tuple(units)
    blocks = [regular_representation(groupoid, x, f) for x in units]
    basis = tuple((x, g) for x, b in zip(units, blocks) for g in b.basis)
    return MatrixRep(basis, block_diagonal([b.matrix for b in blocks]))


def isotropy_left_regular(
    groupoid: FiniteGroupoid, x: int, b: AlgebraElement
) -> MatrixRep:
    """
    Returns `Λ(b)` on `ℓ₂(G(x))`, basis `G(x)` ascending, with entry
    `(row h₂, col h₁)` equal to `b(h₂h₁⁻¹)`.

    Raises:
    - `SupportOutsideIsotropy` - `b` has support outside `G(x)`
    """

    _check_element(groupoid, b)
    iso = np.array(groupoid.fibers(x).isotropy)
    if outside := sorted(set(b.support()) - set(iso.tolist())):
        msg = f"Support {outside} outside G({x})"
        raise SupportOutsideIsotropy(msg, f"unit {x}")
    inverses = np.array(groupoid.inverses)[iso]
    products = groupoid.table[iso[:, None], inverses[None, :]]
    return MatrixRep(tuple(int(h) for h in iso), b.coeffs[products])


def translation_unitary(
    groupoid: FiniteGroupoid, x: int, zeta: int
) -> MatrixRep:
    """
    Returns `R_ζ` on `ℓ₂(G_x)`, `(R_ζ ξ)(γ) = ξ(γζ)`: the permutation
    with a 1 at `(row γ, col γζ)`.

    Raises:
    - `NotInIsotropy` - `zeta` is not in `G(x)`
    """

    fib = groupoid.fibers(x)
    if zeta not in fib.isotropy:
        raise NotInIsotropy(f"Arrow {zeta} not in G({x})", f"unit {x}")
    index = {g: i for i, g in enumerate(fib.source_fiber)}
    matrix = np.zeros((len(index), len(index)), dtype=np.complex128)
    for row, g in enumerate(fib.source_fiber):
        matrix[row, index[int(groupoid.table[g, zeta])]] = 1.0
    return MatrixRep(fib.source_fiber, matrix)


def orbit_intertwiner(groupoid: FiniteGroupoid, g0: int) -> MatrixRep:
    """
    Returns the permutation unitary `V: H_x → H_y` for an arrow `g0` from
    `x` to `y`, sending `e_γ ↦ e_{γ g0⁻¹}`; then `V λ_x(f) V† = λ_y(f)`.
    """

    x, y = groupoid.source(g0), groupoid.range(g0)
    src = groupoid.fibers(x).source_fiber
    dst = groupoid.fibers(y).source_fiber
    index = {g: i for i, g in enumerate(dst)}
    back = groupoid.inverses[g0]
    matrix = np.zeros((len(dst), len(src)), dtype=np.complex128)
    for col, g in enumerate(src):
        matrix[index[int(groupoid.table[g, back])], col] = 1.0
    return MatrixRep(src, matrix, codomain=dst)


def _check_element(groupoid: FiniteGroupoid, f: AlgebraElement) -> None:
    if not groupoid.same_as(f.groupoid):
        raise GroupoidMismatch("Element is over a different groupoid")
