import collections.abc
import dataclasses
import logging
import numbers

import numpy as np
import numpy.typing as npt

from ok_groupoid._exceptions import GroupoidMismatch
from ok_groupoid._groupoid import FiniteGroupoid

log = logging.getLogger("ok_groupoid.algebra")

ComplexVector = npt.NDArray[np.complex128]


@dataclasses.dataclass(frozen=True, eq=False)
class AlgebraElement:
    """
    A complex function on the arrows of a finite groupoid, as a member of
    the convolution algebra `C_c(G) = C*(G)`. Coefficients are a dense
    read-only vector indexed by arrow id.

    Supports `+`, `-`, scalar `*`, and `@` for convolution.
    """

    groupoid: FiniteGroupoid
    coeffs: ComplexVector

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.groupoid.size,):
            msg = f"{coeffs.shape} coefficients for {self.groupoid.size} arrows"
            raise GroupoidMismatch(msg)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __repr__(self) -> str:
        terms = [f"{c:.6g}·δ{g}" for g, c in self.items()]
        return f"AlgebraElement({' + '.join(terms) or '0'})"

    def __getitem__(self, g: int) -> complex:
        self.groupoid.check_arrow(g)
        return complex(self.coeffs[g])

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        return AlgebraElement(self.groupoid, self.coeffs + other.coeffs)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_same(other)
        return AlgebraElement(self.groupoid, self.coeffs - other.coeffs)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.groupoid, -self.coeffs)

    def __mul__(self, scalar: numbers.Number) -> "AlgebraElement":
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return AlgebraElement(self.groupoid, self.coeffs * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return convolve(self, other)

    def items(self) -> list[tuple[int, complex]]:
        """Nonzero `(arrow, coefficient)` pairs in arrow order."""
        return [(g, complex(c)) for g, c in enumerate(self.coeffs) if c != 0]

    def support(self) -> tuple[int, ...]:
        return tuple(int(g) for g in np.nonzero(self.coeffs)[0])

    def adjoint(self) -> "AlgebraElement":
        return adjoint(self)

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        return (self - adjoint(self)).is_zero(tol)

    def _check_same(self, other: "AlgebraElement") -> None:
        if not self.groupoid.same_as(other.groupoid):
            raise GroupoidMismatch("Elements over different groupoids")


def element(
    groupoid: FiniteGroupoid,
    coeffs: collections.abc.Mapping[int, complex] | npt.ArrayLike,
) -> AlgebraElement:
    """
    Returns the element with the given coefficients, either a dense
    vector or an `{arrow: coefficient}` mapping (other arrows 0).

    Raises:
    - `UnknownArrow` - a mapping key is not an arrow
    """

    if isinstance(coeffs, collections.abc.Mapping):
        dense = np.zeros(groupoid.size, dtype=np.complex128)
        for g, c in coeffs.items():
            groupoid.check_arrow(g)
            dense[g] = c
        return AlgebraElement(groupoid, dense)
    return AlgebraElement(groupoid, np.asarray(coeffs))


def zero(groupoid: FiniteGroupoid) -> AlgebraElement:
    return AlgebraElement(groupoid, np.zeros(groupoid.size))


def delta(groupoid: FiniteGroupoid, g: int) -> AlgebraElement:
    """
    Returns the point mass `δ_g` (coefficient 1 at `g`, 0 elsewhere).

    Raises:
    - `UnknownArrow` - `g` is not an arrow
    """

    groupoid.check_arrow(g)
    coeffs = np.zeros(groupoid.size, dtype=np.complex128)
    coeffs[g] = 1.0
    return AlgebraElement(groupoid, coeffs)


def unit(groupoid: FiniteGroupoid) -> AlgebraElement:
    """Returns the identity `Σ δ_u` over all units `u`."""
    coeffs = np.zeros(groupoid.size, dtype=np.complex128)
    coeffs[list(groupoid.units)] = 1.0
    return AlgebraElement(groupoid, coeffs)


def convolve(f: AlgebraElement, h: AlgebraElement) -> AlgebraElement:
    """
    Returns `f∗h`, where `(f∗h)(γ) = Σ f(γ₁) h(γ₂)` over `γ₁γ₂ = γ`.

    Raises:
    - `GroupoidMismatch` - `f` and `h` live over different groupoids
    """

    f._check_same(h)
    left, right, prod = f.groupoid.composable
    out = np.zeros(f.groupoid.size, dtype=np.complex128)
    np.add.at(out, prod, f.coeffs[left] * h.coeffs[right])
    return AlgebraElement(f.groupoid, out)


def adjoint(f: AlgebraElement) -> AlgebraElement:
    """Returns `f*`, where `f*(γ) = conj(f(γ⁻¹))`."""
    inverses = np.array(f.groupoid.inverses)
    return AlgebraElement(f.groupoid, np.conj(f.coeffs[inverses]))
