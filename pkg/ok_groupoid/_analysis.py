import collections.abc
import dataclasses
import functools
import logging
import typing

import numpy as np

from ok_groupoid._algebra import AlgebraElement, adjoint, unit
from ok_groupoid._exceptions import NotSelfAdjoint
from ok_groupoid._groupoid import FiniteGroupoid
from ok_groupoid._induction import IsotropyRep, induce
from ok_groupoid._representations import full_regular, regular_representation
from ok_groupoid._spectral import (
    ComplexMatrix,
    RealVector,
    hermitian_eigenvalues,
    min_singular_value,
    spectral_norm,
)

log = logging.getLogger("ok_groupoid.analysis")

Label = typing.Hashable
Family = collections.abc.Mapping[
    Label, collections.abc.Callable[[AlgebraElement], ComplexMatrix]
]
"""Representations by label, each mapping an element to its matrix."""

_SHIFT_SLACK = 1e-9  # relative slack for "attains the norm" / "singular"


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError(f"Need tol > 0, got {tol}")


@dataclasses.dataclass(frozen=True)
class AnalysisOptions:
    """Optional parameters for norm and invertibility analysis."""

    tol: float = 1e-8
    """`σ_min` at or below this counts as singular."""

    orbit_reps: bool = False
    """Evaluate one unit per orbit and report the rest through it."""

    def __post_init__(self):
        _check_tol(self.tol)


@dataclasses.dataclass(frozen=True)
class NormProfile:
    """The norms `‖π(a)‖` across a family and where the largest occurs."""

    per_unit: dict[Label, float]
    max_unit: Label
    """The first label (least unit) attaining the maximum."""

    value: float


@dataclasses.dataclass(frozen=True)
class InvertibilityReport:
    """Per-representation smallest singular values and the verdict."""

    verdict: typing.Literal["invertible", "singular"]
    per_unit: dict[Label, float]
    witness: Label
    """The first label (least unit) with the smallest `σ_min`."""

    tol: float

    @property
    def invertible(self) -> bool:
        return self.verdict == "invertible"


@dataclasses.dataclass(frozen=True)
class NormShift:
    """
    For positive `a` with norm `N`, the element `b = a - N·1` seen through
    each `λ_x`: spectra sit in `[-N, 0]` and touch 0 exactly where
    `‖λ_x(a)‖ = N`.
    """

    norm: float
    spectra: dict[int, RealVector]
    singular_units: tuple[int, ...]
    attaining_units: tuple[int, ...]


def regular_family(
    groupoid: FiniteGroupoid, units: collections.abc.Iterable[int] | None = None
) -> dict[Label, collections.abc.Callable[[AlgebraElement], ComplexMatrix]]:
    """Returns `{x: λ_x}` over `units` (default all, ascending)."""
    units = groupoid.units if units is None else units
    return {x: functools.partial(_regular_matrix, groupoid, x) for x in units}


def induced_family(
    groupoid: FiniteGroupoid, reps: collections.abc.Iterable[IsotropyRep]
) -> dict[Label, collections.abc.Callable[[AlgebraElement], ComplexMatrix]]:
    """Returns `{(x, i): Ind L_i}` for representations `L_i` of `G(x)`."""
    return {
        (rep.base, i): functools.partial(_induced_matrix, groupoid, rep)
        for i, rep in enumerate(reps)
    }


def family_profile(family: Family, a: AlgebraElement) -> NormProfile:
    """Returns `‖π(a)‖` for each `π` in `family` and the maximum."""
    per = {label: spectral_norm(pi(a)) for label, pi in family.items()}
    top = max(per, key=per.__getitem__)
    return NormProfile(per_unit=per, max_unit=top, value=per[top])


def family_invertibility(
    family: Family, a: AlgebraElement, tol: float = 1e-8
) -> InvertibilityReport:
    """Returns `σ_min(π(a))` for each `π`; invertible if all exceed `tol`."""
    _check_tol(tol)
    per = {label: min_singular_value(pi(a)) for label, pi in family.items()}
    low = min(per, key=per.__getitem__)
    return InvertibilityReport(
        verdict="invertible" if per[low] > tol else "singular",
        per_unit=per,
        witness=low,
        tol=tol,
    )


def norm(
    a: AlgebraElement,
    opts: AnalysisOptions = AnalysisOptions(),
    **kwargs,
) -> NormProfile:
    """
    Returns the profile `x ↦ ‖λ_x(a)‖` and its maximum, which is `‖a‖`.

    Args:
    - `a` - The element to measure
    - `opts` - Analysis options (only `orbit_reps` matters here)
      - OR keywords are forwarded to `AnalysisOptions`

    With `orbit_reps`, only orbit representatives are evaluated (the
    regular representations along an orbit are unitarily equivalent).
    """

    opts = dataclasses.replace(opts, **kwargs)
    groupoid = a.groupoid
    if not opts.orbit_reps:
        return family_profile(regular_family(groupoid), a)

    orbits = groupoid.orbits()
    family = regular_family(groupoid, orbits.representatives)
    reduced = family_profile(family, a)
    log.debug("Norm over %d orbit reps", len(orbits.representatives))
    per: dict[Label, float] = {
        u: reduced.per_unit[orbits.representative_of(u)] for u in groupoid.units
    }
    top = max(per, key=per.__getitem__)
    return NormProfile(per_unit=per, max_unit=top, value=per[top])


def oracle_norm(a: AlgebraElement) -> float:
    """Returns `‖⊕_x λ_x(a)‖`, the norm of `a` in a faithful image."""
    return spectral_norm(full_regular(a.groupoid, a).matrix)


def invertible_family(
    a: AlgebraElement,
    opts: AnalysisOptions = AnalysisOptions(),
    **kwargs,
) -> InvertibilityReport:
    """
    Decides invertibility of `a` one regular representation at a time:
    `a` is invertible iff every `λ_x(a)` is.

    Args:
    - `a` - The element to test
    - `opts` - Threshold and orbit reduction
      - OR keywords are forwarded to `AnalysisOptions`
    """

    opts = dataclasses.replace(opts, **kwargs)
    groupoid = a.groupoid
    if not opts.orbit_reps:
        return family_invertibility(regular_family(groupoid), a, opts.tol)

    orbits = groupoid.orbits()
    family = regular_family(groupoid, orbits.representatives)
    reduced = family_invertibility(family, a, opts.tol)
    per: dict[Label, float] = {
        u: reduced.per_unit[orbits.representative_of(u)] for u in groupoid.units
    }
    low = min(per, key=per.__getitem__)
    return dataclasses.replace(reduced, per_unit=per, witness=low)


def invertible_oracle(a: AlgebraElement, tol: float = 1e-8) -> bool:
    """True if `σ_min(⊕_x λ_x(a)) > tol`."""
    _check_tol(tol)
    return min_singular_value(full_regular(a.groupoid, a).matrix) > tol


def roch_witness(a: AlgebraElement, tol: float = 1e-8) -> int | None:
    """
    For singular `a`, returns a unit `x` with `λ_x(a)` singular, found as
    the least unit maximizing `‖λ_x(b)‖` for `b = ‖c‖·1 - c`, `c = a*∗a`.
    Returns `None` if `a` is invertible.
    """

    if invertible_oracle(a, tol):
        return None
    c = adjoint(a) @ a
    b = oracle_norm(c) * unit(a.groupoid) - c
    witness = norm(b).max_unit
    log.debug("Witness unit %s for singular element", witness)
    return typing.cast(int, witness)


def norm_shift(a: AlgebraElement) -> NormShift:
    """
    Returns the spectra of `λ_x(a - ‖a‖·1)` for positive `a`, plus the
    units where they touch 0 and the units where `‖λ_x(a)‖ = ‖a‖`.

    Raises:
    - `NotSelfAdjoint` - `a` is not self-adjoint
    """

    _check_self_adjoint(a)
    groupoid = a.groupoid
    profile = norm(a)
    slack = _SHIFT_SLACK * max(1.0, profile.value)
    b = a - profile.value * unit(groupoid)
    spectra = {
        x: hermitian_eigenvalues(_regular_matrix(groupoid, x, b))
        for x in groupoid.units
    }
    return NormShift(
        norm=profile.value,
        spectra=spectra,
        singular_units=tuple(
            x for x, ev in spectra.items() if np.min(np.abs(ev)) <= slack
        ),
        attaining_units=tuple(
            typing.cast(int, x)
            for x, v in profile.per_unit.items()
            if v >= profile.value - slack
        ),
    )


def spectrum(a: AlgebraElement) -> RealVector:
    """
    Returns the eigenvalues of `⊕_x λ_x(a)`, ascending.

    Raises:
    - `NotSelfAdjoint` - `a` is not self-adjoint
    """

    _check_self_adjoint(a)
    return hermitian_eigenvalues(full_regular(a.groupoid, a).matrix)


def _check_self_adjoint(a: AlgebraElement) -> None:
    scale = max(1.0, float(np.max(np.abs(a.coeffs))))
    if not a.is_self_adjoint(1e-12 * scale):
        raise NotSelfAdjoint("Element is not self-adjoint (f* != f)")


def _regular_matrix(
    groupoid: FiniteGroupoid, x: int, a: AlgebraElement
) -> ComplexMatrix:
    return regular_representation(groupoid, x, a).matrix


def _induced_matrix(
    groupoid: FiniteGroupoid, rep: IsotropyRep, a: AlgebraElement
) -> ComplexMatrix:
    return induce(groupoid, rep.base, rep, a).matrix
