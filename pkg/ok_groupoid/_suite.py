"""
Seeded property checks over one groupoid: every law the library relies
on, each checked against an independent computation.
"""

import collections.abc
import dataclasses
import logging
import math

import numpy as np

from ok_groupoid._algebra import (
    AlgebraElement,
    adjoint,
    delta,
    unit,
    zero,
)
from ok_groupoid._analysis import (
    family_invertibility,
    family_profile,
    norm,
    norm_shift,
    regular_family,
    roch_witness,
    spectrum,
)
from ok_groupoid._exceptions import GroupoidException
from ok_groupoid._groupoid import FiniteGroupoid
from ok_groupoid._induction import (
    InducedSpace,
    basis_vector,
    comparison_check,
    embed_j,
    equivalence_unitary,
    induce,
    left_regular_rep,
    main_identity_residual,
    module_norm,
    star_inner,
)
from ok_groupoid._representations import (
    full_regular,
    orbit_intertwiner,
    regular_representation,
    regular_representation_by_action,
    translation_unitary,
)
from ok_groupoid._sampling import (
    off_orbit_element,
    random_element,
    random_isotropy_rep,
    random_module_vector,
    random_positive,
    random_self_adjoint,
    structured_elements,
)
from ok_groupoid._spectral import (
    block_diagonal,
    dagger,
    hermitian_eigenvalues,
    min_singular_value,
    singular_values,
    spectral_norm,
)

log = logging.getLogger("ok_groupoid.suite")

_INDUCED_REPS = 3  # random isotropy representations per unit


@dataclasses.dataclass(frozen=True)
class SuiteOptions:
    """Optional parameters for `verify_suite`."""

    trials: int = 200
    """
    Random samples per property (per unit where a unit is involved), for
    every property without its own count below.
    """

    seed: int = 0
    """Seed for every random draw; equal seeds give equal reports."""

    tol: float = 1e-8
    """Invertibility threshold, as for `invertible_family`."""

    module_vectors: int | None = None
    """Random `φ` per unit for the module norm bound."""

    identity_draws: int | None = None
    """Random `(a, φ, ψ)` per unit for the main identity."""

    induced_samples: int | None = None
    """Random elements per unit compared through `Ind Λ` and `λ_x`."""

    vanishing_samples: int | None = None
    """Elements per unit supported off its orbit, for the comparison."""

    family_samples: int | None = None
    """Random elements for sufficiency and norming."""

    structured_samples: int | None = None
    """Structured elements for sufficiency and norming (default one pass)."""

    def __post_init__(self):
        for name in _COUNTS:
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"Need {name} >= 1, got {value}")
        if not self.tol > 0:
            raise ValueError(f"Need tol > 0, got {self.tol}")

    def samples(self, name: str) -> int:
        """Returns the count `name`, or `trials` if it is unset."""
        value = getattr(self, name)
        return self.trials if value is None else value


_COUNTS = (
    "trials",
    "module_vectors",
    "identity_draws",
    "induced_samples",
    "vanishing_samples",
    "family_samples",
    "structured_samples",
)


@dataclasses.dataclass(frozen=True)
class PropertyResult:
    """The outcome of one property across all its samples."""

    name: str
    checked: int
    worst: float
    """The largest error seen (0 for exact laws that held)."""

    limit: float
    counterexample: str | None = None
    """A description of the first failing sample, if any."""

    @property
    def passed(self) -> bool:
        return self.counterexample is None


@dataclasses.dataclass(frozen=True)
class SuiteReport:
    """All property results for one groupoid, in a fixed order."""

    groupoid: str
    opts: SuiteOptions
    results: tuple[PropertyResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def format(self) -> str:
        """Returns a plain-text report, one line per property."""
        counts = "".join(
            f" {k}={v}"
            for k, v in dataclasses.asdict(self.opts).items()
            if k in _COUNTS and k != "trials" and v is not None
        )
        lines = [
            f"{self.groupoid}, trials={self.opts.trials}{counts} "
            f"seed={self.opts.seed} tol={self.opts.tol:.6g}"
        ]
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{status} {r.name}: {r.checked} checks, "
                f"worst {r.worst:.6g} (limit {r.limit:.6g})"
            )
            if r.counterexample:
                lines.extend(f"  {s}" for s in r.counterexample.splitlines())
        failed = sum(not r.passed for r in self.results)
        lines.append(
            f"{len(self.results) - failed}/{len(self.results)} properties pass"
        )
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "groupoid": self.groupoid,
            "options": dataclasses.asdict(self.opts),
            "passed": self.passed,
            "properties": [
                {**dataclasses.asdict(r), "passed": r.passed}
                for r in self.results
            ],
        }


class _Tracker:
    """Accumulates one property's worst error and first counterexample."""

    def __init__(self, name: str, limit: float):
        self.name, self.limit = name, limit
        self.checked, self.worst = 0, 0.0
        self.counterexample: str | None = None

    def check(
        self, error: float, describe: collections.abc.Callable[[], str]
    ) -> None:
        self.checked += 1
        if not error <= self.worst:
            self.worst = error
        if not error <= self.limit and self.counterexample is None:
            self.counterexample = f"error {error:.17g}\n{describe()}"

    def result(self) -> PropertyResult:
        return PropertyResult(
            name=self.name,
            checked=self.checked,
            worst=self.worst,
            limit=self.limit,
            counterexample=self.counterexample,
        )


Check = collections.abc.Callable[
    [FiniteGroupoid, np.random.Generator, SuiteOptions], list[PropertyResult]
]


def verify_suite(
    groupoid: FiniteGroupoid,
    opts: SuiteOptions = SuiteOptions(),
    **kwargs,
) -> SuiteReport:
    """
    Runs every property check on `groupoid` and returns the report.

    Args:
    - `groupoid` - The (already validated) groupoid to exercise
    - `opts` - Trial count, seed and threshold
      - OR keywords are forwarded to `SuiteOptions`

    Each check draws from its own generator seeded by `(seed, index)`,
    so reports are deterministic and checks are independent.
    """

    opts = dataclasses.replace(opts, **kwargs)
    return _run(groupoid, opts, _CHECKS)


def verify_induction(
    groupoid: FiniteGroupoid,
    opts: SuiteOptions = SuiteOptions(),
    **kwargs,
) -> SuiteReport:
    """
    Runs only the Hilbert-module and induced-representation checks,
    with the seeding `verify_suite` uses, so the results match its own.
    """

    opts = dataclasses.replace(opts, **kwargs)
    chosen = {_check_module, _check_induced, _check_induced_homomorphism}
    checks = tuple(c if c in chosen else None for c in _CHECKS)
    return _run(groupoid, opts, checks)


def _run(
    groupoid: FiniteGroupoid,
    opts: SuiteOptions,
    checks: tuple[Check | None, ...],
) -> SuiteReport:
    results: list[PropertyResult] = []
    for index, check in enumerate(checks):
        if check is None:
            continue
        rng = np.random.default_rng([opts.seed, index])
        for result in check(groupoid, rng, opts):
            log.debug(
                "%s: %s (%d checks, worst %.3g)",
                result.name,
                "pass" if result.passed else "FAIL",
                result.checked,
                result.worst,
            )
            results.append(result)

    orbits = len(groupoid.orbits().classes)
    name = (
        f"{groupoid.size} arrows, {len(groupoid.units)} units, "
        f"{orbits} orbit{'' if orbits == 1 else 's'}"
    )
    return SuiteReport(groupoid=name, opts=opts, results=tuple(results))


#
# Groupoid laws
#


def _check_laws(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    laws = _Tracker("axioms", 0.0)
    try:
        dataclasses.replace(groupoid)  # revalidates every law
        laws.check(0.0, str)
    except GroupoidException as exc:
        laws.check(1.0, lambda: str(exc))

    for x in groupoid.units:
        fib = groupoid.fibers(x)
        iso = set(fib.isotropy)
        for z1 in fib.isotropy:
            closed = groupoid.inverses[z1] in iso and all(
                groupoid.compose(z1, z2) in iso for z2 in fib.isotropy
            )
            laws.check(0.0 if closed else 1.0, lambda: f"G({x}) at {z1}")
            shifted = {groupoid.compose(g, z1) for g in fib.source_fiber}
            bijective = shifted == set(fib.source_fiber)
            laws.check(0.0 if bijective else 1.0, lambda: f"G_{x}·{z1}")

    corrupt = _Tracker("corruption-detected", 0.0)
    left, right, prods = groupoid.composable
    for _ in range(opts.trials):
        i = int(rng.integers(len(left)))
        g1, g2 = int(left[i]), int(right[i])
        wrong = int(rng.integers(-1, groupoid.size - 1))
        if wrong >= prods[i]:
            wrong += 1
        table = np.array(groupoid.table)
        table[g1, g2] = wrong
        try:
            dataclasses.replace(groupoid, table=table)
            detected = False
        except GroupoidException:
            detected = True
        corrupt.check(
            0.0 if detected else 1.0,
            lambda: f"{g1}·{g2} set to {wrong} went unnoticed",
        )
    return [laws.result(), corrupt.result()]


#
# Algebra and regular representations
#


def _check_algebra(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    one = unit(groupoid)
    unital = _Tracker("unital", 0.0)
    assoc = _Tracker("associativity", 1e-12)
    anti = _Tracker("adjoint-anti-multiplicative", 1e-12)
    for _ in range(opts.trials):
        f, h, k = (random_element(groupoid, rng) for _ in range(3))
        unital.check(
            max(_max_abs(one @ f - f), _max_abs(f @ one - f)),
            lambda: f"f = {_dump(f)}",
        )
        assoc.check(
            _max_abs((f @ h) @ k - f @ (h @ k)),
            lambda: f"f = {_dump(f)}\nh = {_dump(h)}\nk = {_dump(k)}",
        )
        anti.check(
            _max_abs(adjoint(f @ h) - adjoint(h) @ adjoint(f)),
            lambda: f"f = {_dump(f)}\nh = {_dump(h)}",
        )
    for x in groupoid.units:
        lam = regular_representation(groupoid, x, one).matrix
        unital.check(
            _gap(lam, np.eye(len(lam))),
            lambda: f"λ_{x}(1) is not the identity",
        )
    return [unital.result(), assoc.result(), anti.result()]


def _check_regular(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    entries = _Tracker("entry-formula", 1e-15)
    hom = _Tracker("homomorphism", 1e-11)
    adj = _Tracker("adjoint", 1e-12)
    for _ in range(opts.trials):
        f, h = random_element(groupoid, rng), random_element(groupoid, rng)
        fh, fa = f @ h, adjoint(f)
        for x in groupoid.units:
            lf = regular_representation(groupoid, x, f).matrix
            by_sum = regular_representation_by_action(groupoid, x, f).matrix
            entries.check(
                _gap(lf, by_sum),
                lambda: f"unit {x}, f = {_dump(f)}",
            )
            lh = regular_representation(groupoid, x, h).matrix
            lfh = regular_representation(groupoid, x, fh).matrix
            hom.check(
                _gap(lfh, lf @ lh),
                lambda: f"unit {x}, f = {_dump(f)}\nh = {_dump(h)}",
            )
            lfa = regular_representation(groupoid, x, fa).matrix
            adj.check(
                _gap(lfa, dagger(lf)),
                lambda: f"unit {x}, f = {_dump(f)}",
            )
    return [entries.result(), hom.result(), adj.result()]


def _check_orbit_equivalence(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    equiv = _Tracker("orbit-equivalence", 1e-12)
    arrows = [g for g in range(groupoid.size) if not groupoid.is_unit(g)]
    arrows = arrows or list(groupoid.units)
    for _ in range(opts.trials):
        f = random_element(groupoid, rng)
        g0 = arrows[int(rng.integers(len(arrows)))]
        v = orbit_intertwiner(groupoid, g0).matrix
        x, y = groupoid.sources[g0], groupoid.ranges[g0]
        lx = regular_representation(groupoid, x, f).matrix
        ly = regular_representation(groupoid, y, f).matrix
        equiv.check(
            _gap(v @ lx @ dagger(v), ly),
            lambda: f"arrow {g0}, f = {_dump(f)}",
        )
    return [equiv.result()]


def _check_translations(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    rep = _Tracker("translation-representation", 0.0)
    for x in groupoid.units:
        iso = groupoid.fibers(x).isotropy
        mats = {z: translation_unitary(groupoid, x, z).matrix for z in iso}
        eye = np.eye(len(groupoid.fibers(x).source_fiber))
        for z1 in iso:
            rep.check(
                _gap(mats[z1] @ dagger(mats[z1]), eye),
                lambda: f"R_{z1} at unit {x} is not unitary",
            )
            for z2 in iso:
                prod = mats[groupoid.compose(z1, z2)]
                rep.check(
                    _gap(mats[z1] @ mats[z2], prod),
                    lambda: f"R_{z1}R_{z2} != R_({z1}·{z2}) at unit {x}",
                )
    return [rep.result()]


#
# Hilbert module and induction
#


def _check_module(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    basis = _Tracker("basis-inner-product", 0.0)
    bound = _Tracker("module-norm-bound", 1e-10)
    ident = _Tracker("main-identity", 1e-10)
    for x in groupoid.units:
        fib = groupoid.fibers(x)
        for g1 in fib.source_fiber:
            for g2 in fib.source_fiber:
                got = star_inner(
                    basis_vector(groupoid, x, g1),
                    basis_vector(groupoid, x, g2),
                )
                want = zero(groupoid)
                if groupoid.ranges[g1] == groupoid.ranges[g2]:
                    g1_inv = groupoid.inverses[g1]
                    want = delta(groupoid, groupoid.compose(g1_inv, g2))
                basis.check(
                    _max_abs(got - want),
                    lambda: f"unit {x}, ⟨e_{g1}, e_{g2}⟩_* = {_dump(got)}",
                )

        for _ in range(opts.samples("module_vectors")):
            phi = random_module_vector(groupoid, x, rng)
            excess = float(np.linalg.norm(embed_j(phi))) - module_norm(phi)
            bound.check(
                max(0.0, excess), lambda: f"unit {x}, φ = {phi.coeffs!r}"
            )

        for _ in range(opts.samples("identity_draws")):
            a = random_element(groupoid, rng)
            phi = random_module_vector(groupoid, x, rng)
            psi = random_module_vector(groupoid, x, rng)
            for zeta in fib.isotropy:
                ident.check(
                    main_identity_residual(a, phi, psi, zeta),
                    lambda: (
                        f"unit {x}, ζ = {zeta}, a = {_dump(a)}\n"
                        f"φ = {phi.coeffs!r}\nψ = {psi.coeffs!r}"
                    ),
                )
    return [basis.result(), bound.result(), ident.result()]


def _check_induced(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    gram = _Tracker("induced-gram", 0.0)
    equiv = _Tracker("induced-equivalence", 1e-10)
    compare = _Tracker("comparison", 0.0)
    for x in groupoid.units:
        fib = groupoid.fibers(x)
        space = InducedSpace(groupoid, x, left_regular_rep(groupoid, x))
        for i, (g1, k1) in enumerate(space.raw_basis):
            for j, (g2, k2) in enumerate(space.raw_basis):
                h1, h2 = fib.isotropy[k1], fib.isotropy[k2]
                same = groupoid.compose(g1, h1) == groupoid.compose(g2, h2)
                gram.check(
                    abs(space.gram[j, i] - (1.0 if same else 0.0)),
                    lambda: f"unit {x}, φ_({g1},{h1}) vs φ_({g2},{h2})",
                )

        u = equivalence_unitary(groupoid, x).matrix
        lam_rep = left_regular_rep(groupoid, x)
        for _ in range(opts.samples("induced_samples")):
            f = random_element(groupoid, rng)
            ind = induce(groupoid, x, lam_rep, f).matrix
            lam = regular_representation(groupoid, x, f).matrix
            equiv.check(
                _gap(dagger(u) @ ind @ u, lam),
                lambda: f"unit {x}, f = {_dump(f)}",
            )

        vanishing = [zero(groupoid), unit(groupoid)]
        for _ in range(opts.samples("vanishing_samples")):
            if (a := off_orbit_element(groupoid, x, rng)) is None:
                break
            vanishing.append(a)
        for a in vanishing:
            compare.check(
                0.0 if comparison_check(groupoid, x, a) else 1.0,
                lambda: f"unit {x}, Ind Λ(a) ≠ 0 = λ_x(a), a = {_dump(a)}",
            )
    return [gram.result(), equiv.result(), compare.result()]


def _check_induced_homomorphism(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    hom = _Tracker("induced-homomorphism", 1e-10)
    per_rep = max(1, opts.trials // _INDUCED_REPS)
    for x in groupoid.units:
        for _ in range(_INDUCED_REPS):
            rep = random_isotropy_rep(groupoid, x, rng)
            space = InducedSpace(groupoid, x, rep)
            one = space.represent(unit(groupoid)).matrix
            hom.check(
                _gap(one, np.eye(space.dim)),
                lambda: f"unit {x}, Ind L(1) is not the identity",
            )
            for _ in range(per_rep):
                f = random_element(groupoid, rng)
                h = random_element(groupoid, rng)
                mf = space.represent(f).matrix
                mh = space.represent(h).matrix
                mfh = space.represent(f @ h).matrix
                mfa = space.represent(adjoint(f)).matrix
                err = max(_gap(mfh, mf @ mh), _gap(mfa, dagger(mf)))
                hom.check(
                    err,
                    lambda: (
                        f"unit {x}, L dim {rep.dim}\n"
                        f"f = {_dump(f)}\nh = {_dump(h)}"
                    ),
                )
    return [hom.result()]


#
# Sufficiency and norming of the regular family
#


def _check_family(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    tol = opts.tol
    sufficient = _Tracker("sufficiency", 0.0)
    norming = _Tracker("strict-norming", 1e-9)
    witness = _Tracker("roch-witness", 0.0)
    family = regular_family(groupoid)

    count = opts.samples("family_samples")
    samples = [random_element(groupoid, rng) for _ in range(count)]
    structured = structured_elements(groupoid, rng)
    if opts.structured_samples is not None:
        while len(structured) < opts.structured_samples:
            structured += structured_elements(groupoid, rng)
        structured = structured[: opts.structured_samples]
    samples += structured
    skipped = 0
    for a in samples:
        values = singular_values(full_regular(groupoid, a).matrix)
        full_norm, full_min = float(values[0]), float(values[-1])

        profile = family_profile(family, a)
        attained = profile.per_unit[profile.max_unit]
        norming.check(
            max(abs(profile.value - full_norm), abs(attained - full_norm)),
            lambda: f"a = {_dump(a)}",
        )

        # σ_min within a decade of tol could go either way
        if tol / 10 <= full_min <= 10 * tol:
            skipped += 1
            continue
        report = family_invertibility(family, a, tol)
        sufficient.check(
            0.0 if report.invertible == (full_min > tol) else 1.0,
            lambda: f"σ_min = {full_min:.17g}, a = {_dump(a)}",
        )
        if full_min < tol:
            x = roch_witness(a, tol)
            lam_min = math.inf
            if x is not None:
                lam = regular_representation(groupoid, x, a).matrix
                lam_min = min_singular_value(lam)
            witness.check(
                0.0 if lam_min <= tol else 1.0,
                lambda: f"unit {x}, σ_min {lam_min:.17g}, a = {_dump(a)}",
            )

    if skipped:
        log.debug("Sufficiency: %d samples inside the margin skipped", skipped)
    return [sufficient.result(), norming.result(), witness.result()]


def _check_positive(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    shift = _Tracker("norm-shift", 1e-9)
    cstar = _Tracker("c-star-identity", 1e-9)
    for _ in range(opts.trials):
        a = random_positive(groupoid, rng, float(rng.choice([0.0, 0.5])))
        result = norm_shift(a)
        scale = max(1.0, result.norm)
        outside = max(
            max(float(ev.max()), -result.norm - float(ev.min()), 0.0)
            for ev in result.spectra.values()
        )
        agree = set(result.singular_units) == set(result.attaining_units)
        shift.check(
            max(outside / scale, 0.0 if agree else 1.0),
            lambda: (
                f"singular at {result.singular_units}, "
                f"attained at {result.attaining_units}, a = {_dump(a)}"
            ),
        )

        f = random_element(groupoid, rng)
        n = norm(f).value
        cstar.check(
            abs(norm(adjoint(f) @ f).value - n * n) / max(1.0, n * n),
            lambda: f"f = {_dump(f)}",
        )
    return [shift.result(), cstar.result()]


def _check_spectrum(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    consistent = _Tracker("spectrum-consistency", 1e-9)
    for _ in range(opts.trials):
        a = random_self_adjoint(groupoid, rng)
        blocks = np.sort(
            np.concatenate(
                [
                    hermitian_eigenvalues(
                        regular_representation(groupoid, x, a).matrix
                    )
                    for x in groupoid.units
                ]
            )
        )
        consistent.check(
            _gap(blocks, spectrum(a)),
            lambda: f"a = {_dump(a)}",
        )
    return [consistent.result()]


def _check_norm_laws(
    groupoid: FiniteGroupoid, rng: np.random.Generator, opts: SuiteOptions
) -> list[PropertyResult]:
    laws = _Tracker("spectral-norm-laws", 1e-12)
    for _ in range(opts.trials):
        f = random_element(groupoid, rng)
        blocks = [
            regular_representation(groupoid, x, f).matrix
            for x in groupoid.units
        ]
        norms = [spectral_norm(b) for b in blocks]
        top = max(norms)
        # relative: ‖A†‖ = ‖A‖, ‖A†A‖ = ‖A‖², ‖⊕ A_x‖ = max ‖A_x‖
        whole = spectral_norm(block_diagonal(blocks))
        errors = [abs(whole - top) / max(1, top)]
        for b, n in zip(blocks, norms):
            errors.append(abs(spectral_norm(dagger(b)) - n) / max(1, n))
            errors.append(
                abs(spectral_norm(dagger(b) @ b) - n * n) / max(1, n * n)
            )
        laws.check(max(errors), lambda: f"f = {_dump(f)}")
    return [laws.result()]


_CHECKS: tuple[Check, ...] = (
    _check_laws,
    _check_algebra,
    _check_regular,
    _check_orbit_equivalence,
    _check_translations,
    _check_module,
    _check_induced,
    _check_induced_homomorphism,
    _check_family,
    _check_positive,
    _check_spectrum,
    _check_norm_laws,
)


def _max_abs(f: AlgebraElement) -> float:
    return float(np.max(np.abs(f.coeffs)))


def _gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def _dump(f: AlgebraElement) -> str:
    terms = [f"{g}:{c.real:.17g}{c.imag:+.17g}j" for g, c in f.items()]
    return " ".join(terms) or "0"
