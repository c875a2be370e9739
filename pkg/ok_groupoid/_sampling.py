"""Seeded random and structured inputs for property checks."""

import numpy as np

from ok_groupoid._algebra import AlgebraElement, adjoint, delta, unit, zero
from ok_groupoid._groupoid import FiniteGroupoid
from ok_groupoid._induction import (
    IsotropyRep,
    ModuleVector,
    character_rep,
    conjugated_rep,
    direct_sum_rep,
    left_regular_rep,
    trivial_rep,
)
from ok_groupoid._spectral import ComplexMatrix


def gaussian(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """I.i.d. complex Gaussians with unit variance."""
    re, im = rng.standard_normal(shape), rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2)


def random_element(
    groupoid: FiniteGroupoid, rng: np.random.Generator
) -> AlgebraElement:
    return AlgebraElement(groupoid, gaussian(rng, groupoid.size))


def random_self_adjoint(
    groupoid: FiniteGroupoid, rng: np.random.Generator
) -> AlgebraElement:
    f = random_element(groupoid, rng)
    return f + adjoint(f)


def random_positive(
    groupoid: FiniteGroupoid, rng: np.random.Generator, shift: float = 0.0
) -> AlgebraElement:
    """Returns `f*∗f + shift·1` for a random `f`."""
    f = random_element(groupoid, rng)
    return adjoint(f) @ f + shift * unit(groupoid)


def random_module_vector(
    groupoid: FiniteGroupoid, x: int, rng: np.random.Generator
) -> ModuleVector:
    size = len(groupoid.fibers(x).source_fiber)
    return ModuleVector(groupoid, x, gaussian(rng, size))


def random_unitary(rng: np.random.Generator, n: int) -> ComplexMatrix:
    q, r = np.linalg.qr(gaussian(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def cyclic_generator(groupoid: FiniteGroupoid, x: int) -> int | None:
    """Returns a generator of `G(x)` if it is cyclic, else `None`."""
    iso = groupoid.fibers(x).isotropy
    for g in iso:
        power, order = g, 1
        while power != x:
            power, order = groupoid.compose(g, power), order + 1
        if order == len(iso):
            return g
    return None


def random_isotropy_rep(
    groupoid: FiniteGroupoid, x: int, rng: np.random.Generator
) -> IsotropyRep:
    """
    Returns a random direct sum of the left regular, trivial and (for
    cyclic `G(x)`) character representations, conjugated by a random
    unitary.
    """

    choices = [left_regular_rep(groupoid, x), trivial_rep(groupoid, x)]
    if (gen := cyclic_generator(groupoid, x)) is not None:
        n = len(groupoid.fibers(x).isotropy)
        choices += [character_rep(groupoid, x, gen, k) for k in range(n)]
    count = int(rng.integers(1, 4))
    picks = [choices[int(i)] for i in rng.integers(0, len(choices), count)]
    rep = direct_sum_rep(*picks)
    return conjugated_rep(rep, random_unitary(rng, rep.dim))


def off_orbit_element(
    groupoid: FiniteGroupoid, x: int, rng: np.random.Generator
) -> AlgebraElement | None:
    """
    Returns a random element supported on arrows starting outside the
    orbit of `x` (so `λ_x` kills it), or `None` with a single orbit.
    """

    orbit = set(groupoid.orbits().class_of(x))
    support = [g for g, s in enumerate(groupoid.sources) if s not in orbit]
    if not support:
        return None
    coeffs = np.zeros(groupoid.size, dtype=np.complex128)
    coeffs[support] = gaussian(rng, len(support))
    return AlgebraElement(groupoid, coeffs)


def structured_elements(
    groupoid: FiniteGroupoid, rng: np.random.Generator
) -> list[AlgebraElement]:
    """
    Returns adversarial elements: 0, 1, every point mass `δ_γ`,
    `2·1 + δ_γ` for isotropy loops, positive `f*∗f (+ shift)`, and
    elements supported on a single orbit (singular when there are more).
    """

    out = [zero(groupoid), unit(groupoid)]
    out += [delta(groupoid, g) for g in range(groupoid.size)]
    out += [
        2 * unit(groupoid) + delta(groupoid, g)
        for g in range(groupoid.size)
        if groupoid.sources[g] == groupoid.ranges[g]
        and not groupoid.is_unit(g)
    ]
    out += [random_positive(groupoid, rng, shift) for shift in (0.0, 0.5)]
    for cls in groupoid.orbits().classes:
        if (f := off_orbit_element(groupoid, cls[0], rng)) is not None:
            out.append(f)
    return out
