import dataclasses
import functools
import logging
import typing

import numpy as np
import numpy.typing as npt

from ok_groupoid._exceptions import (
    AxiomViolation,
    MalformedSpec,
    NotAUnit,
    UndefinedComposition,
    UnknownArrow,
)

log = logging.getLogger("ok_groupoid.groupoid")

IntArray = npt.NDArray[np.int64]


@dataclasses.dataclass(frozen=True)
class Arrow:
    """One arrow of a `FiniteGroupoid`."""

    id: int
    source: int
    """The unit (itself an arrow id) the arrow starts from."""

    range: int
    """The unit (itself an arrow id) the arrow ends at."""


class Fibers(typing.NamedTuple):
    """The arrows leaving, entering, and looping at one unit."""

    source_fiber: tuple[int, ...]
    """`G_x`, ascending; the canonical basis order of `H_x`."""

    range_fiber: tuple[int, ...]
    """`G^x`, ascending."""

    isotropy: tuple[int, ...]
    """`G(x) = G_x ∩ G^x`, ascending."""


@dataclasses.dataclass(frozen=True)
class OrbitDecomposition:
    """Partition of the units into classes connected by arrows."""

    classes: tuple[tuple[int, ...], ...]
    """Each class ascending; classes ordered by their least unit."""

    representatives: tuple[int, ...]
    """The least unit of each class, in class order."""

    def class_of(self, unit: int) -> tuple[int, ...]:
        for cls in self.classes:
            if unit in cls:
                return cls
        raise NotAUnit("Not a unit", f"arrow {unit}")

    def representative_of(self, unit: int) -> int:
        return self.class_of(unit)[0]


@dataclasses.dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """
    A finite groupoid as explicit tables over dense arrow ids `0..m-1`.
    Units are a flagged subset of the arrows, so `source` and `range`
    map arrows to arrow ids.

    Construction checks every groupoid law exhaustively; an instance
    that exists is valid. Use `build_groupoid` for the standard shapes.

    Raises:
    - `AxiomViolation` - a law fails (the message names law and arrows)
    - `MalformedSpec` - the tables have inconsistent shapes
    """

    sources: tuple[int, ...]
    ranges: tuple[int, ...]
    units: tuple[int, ...]
    """Unit arrow ids, ascending."""

    table: IntArray
    """`table[g1, g2]` is the product `g1 g2` (first `g2`), or -1."""

    inverses: tuple[int, ...]
    names: tuple[str, ...] = ()
    """Display labels per arrow (defaults to the id)."""

    def __post_init__(self) -> None:
        table = np.array(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "units", tuple(sorted(set(self.units))))
        if not self.names:
            names = tuple(str(g) for g in range(len(self.sources)))
            object.__setattr__(self, "names", names)
        _check_axioms(self)
        log.debug(
            "Validated groupoid: %d arrows, %d units",
            self.size,
            len(self.units),
        )

    def __repr__(self) -> str:
        return f"FiniteGroupoid({self.size} arrows, {len(self.units)} units)"

    @property
    def size(self) -> int:
        """The number of arrows."""
        return len(self.sources)

    def arrow(self, g: int) -> Arrow:
        self.check_arrow(g)
        return Arrow(id=g, source=self.sources[g], range=self.ranges[g])

    def source(self, g: int) -> int:
        self.check_arrow(g)
        return self.sources[g]

    def range(self, g: int) -> int:
        self.check_arrow(g)
        return self.ranges[g]

    def inverse(self, g: int) -> int:
        self.check_arrow(g)
        return self.inverses[g]

    def is_unit(self, g: int) -> bool:
        return g in self._unit_set

    def check_arrow(self, g: int) -> None:
        """Raises `UnknownArrow` unless `g` is an arrow id."""
        if not (isinstance(g, (int, np.integer)) and 0 <= g < self.size):
            raise UnknownArrow(f"No arrow {g!r} (size {self.size})")

    def check_unit(self, x: int) -> None:
        """Raises `UnknownArrow`/`NotAUnit` unless `x` is a unit."""
        self.check_arrow(x)
        if x not in self._unit_set:
            raise NotAUnit("Not a unit", f"arrow {x}")

    def compose(self, g1: int, g2: int) -> int:
        """
        Returns the product `g1 g2` (first `g2`, then `g1`).

        Raises:
        - `UnknownArrow` - either id is out of range
        - `UndefinedComposition` - `source(g1) != range(g2)`
        """

        self.check_arrow(g1)
        self.check_arrow(g2)
        if (out := int(self.table[g1, g2])) < 0:
            msg = f"s({g1})={self.sources[g1]} != r({g2})={self.ranges[g2]}"
            raise UndefinedComposition(msg, f"arrows {g1},{g2}")
        return out

    def fibers(self, x: int) -> Fibers:
        """
        Returns `G_x`, `G^x` and `G(x)` for the unit `x`, each ascending.

        Raises:
        - `NotAUnit` - `x` is an arrow but not a unit
        """

        self.check_unit(x)
        return self._fibers[x]

    def orbits(self) -> OrbitDecomposition:
        """Returns the orbit classes of the units (least unit represents)."""
        return self._orbits

    def same_as(self, other: "FiniteGroupoid") -> bool:
        """True if `other` has identical tables (not just isomorphic)."""
        return self is other or (
            self.sources == other.sources
            and self.ranges == other.ranges
            and self.units == other.units
            and self.inverses == other.inverses
            and np.array_equal(self.table, other.table)
        )

    @functools.cached_property
    def _unit_set(self) -> frozenset[int]:
        return frozenset(self.units)

    @functools.cached_property
    def _fibers(self) -> dict[int, Fibers]:
        out = {}
        for x in self.units:
            gx = tuple(g for g, s in enumerate(self.sources) if s == x)
            g_x = tuple(g for g, r in enumerate(self.ranges) if r == x)
            iso = tuple(g for g in gx if self.ranges[g] == x)
            out[x] = Fibers(gx, g_x, iso)
        return out

    @functools.cached_property
    def _orbits(self) -> OrbitDecomposition:
        parent = {u: u for u in self.units}

        def find(u: int) -> int:
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        for s, r in zip(self.sources, self.ranges):
            a, b = find(s), find(r)
            if a != b:
                parent[max(a, b)] = min(a, b)

        groups: dict[int, list[int]] = {}
        for u in self.units:
            groups.setdefault(find(u), []).append(u)
        classes = tuple(tuple(sorted(c)) for c in groups.values())
        classes = tuple(sorted(classes))
        return OrbitDecomposition(
            classes=classes,
            representatives=tuple(c[0] for c in classes),
        )

    @functools.cached_property
    def composable(self) -> tuple[IntArray, IntArray, IntArray]:
        """All composable pairs as (left, right, product) index arrays."""
        left, right = np.nonzero(self.table >= 0)
        return left, right, self.table[left, right]


def isotropy_order(groupoid: FiniteGroupoid, x: int) -> int:
    return len(groupoid.fibers(x).isotropy)


def _check_axioms(g: FiniteGroupoid) -> None:
    m = len(g.sources)
    if m == 0:
        raise MalformedSpec("Groupoid has no arrows")
    if len(g.ranges) != m or len(g.inverses) != m or len(g.names) != m:
        raise MalformedSpec(f"Table lengths disagree with {m} arrows")
    if g.table.shape != (m, m):
        raise MalformedSpec(f"Composition table is {g.table.shape}, not {m}²")

    for name, values in (("source", g.sources), ("range", g.ranges)):
        for a, v in enumerate(values):
            if not 0 <= v < m:
                raise MalformedSpec(f"{name}({a})={v} out of range")
    for a, v in enumerate(g.inverses):
        if not 0 <= v < m:
            raise MalformedSpec(f"inverse({a})={v} out of range")
    if bad := [u for u in g.units if not 0 <= u < m]:
        raise MalformedSpec(f"Units {bad} out of range")
    if ((g.table < -1) | (g.table >= m)).any():
        g1, g2 = np.argwhere((g.table < -1) | (g.table >= m))[0]
        msg = f"product {g1}·{g2}={g.table[g1, g2]} out of range"
        raise MalformedSpec(msg)

    unit_set = set(g.units)
    for u in g.units:
        if g.sources[u] != u or g.ranges[u] != u:
            msg = f"unit law fails: s({u})={g.sources[u]}, r({u})={g.ranges[u]}"
            raise AxiomViolation(msg, f"arrow {u}")
    for a in range(m):
        if g.sources[a] not in unit_set or g.ranges[a] not in unit_set:
            msg = f"s({a})={g.sources[a]}, r({a})={g.ranges[a]} not both units"
            raise AxiomViolation(msg, f"arrow {a}")

    src = np.array(g.sources)
    rng = np.array(g.ranges)
    expect = src[:, None] == rng[None, :]
    if (wrong := np.argwhere(expect != (g.table >= 0))).size:
        g1, g2 = (int(v) for v in wrong[0])
        state = "defined" if g.table[g1, g2] >= 0 else "undefined"
        msg = (
            f"definedness fails: {g1}·{g2} {state} "
            f"with s({g1})={g.sources[g1]}, r({g2})={g.ranges[g2]}"
        )
        raise AxiomViolation(msg, f"arrows {g1},{g2}")

    left, right = np.nonzero(expect)
    prods = g.table[left, right]
    if (bad_s := np.nonzero(src[prods] != src[right])[0]).size:
        g1, g2 = int(left[bad_s[0]]), int(right[bad_s[0]])
        msg = f"source law fails: s({g1}·{g2}) != s({g2})"
        raise AxiomViolation(msg, f"arrows {g1},{g2}")
    if (bad_r := np.nonzero(rng[prods] != rng[left])[0]).size:
        g1, g2 = int(left[bad_r[0]]), int(right[bad_r[0]])
        msg = f"range law fails: r({g1}·{g2}) != r({g1})"
        raise AxiomViolation(msg, f"arrows {g1},{g2}")

    for u in g.units:
        for a in range(m):
            if g.ranges[a] == u and g.table[u, a] != a:
                msg = f"unit law fails: {u}·{a}={g.table[u, a]}"
                raise AxiomViolation(msg, f"arrows {u},{a}")
            if g.sources[a] == u and g.table[a, u] != a:
                msg = f"unit law fails: {a}·{u}={g.table[a, u]}"
                raise AxiomViolation(msg, f"arrows {a},{u}")

    for a, b in enumerate(g.inverses):
        if g.inverses[b] != a:
            msg = f"inverse law fails: ({a}⁻¹)⁻¹={g.inverses[b]}"
            raise AxiomViolation(msg, f"arrow {a}")
        if g.table[a, b] != g.ranges[a]:
            msg = f"inverse law fails: {a}·{b}={g.table[a, b]} != r({a})"
            raise AxiomViolation(msg, f"arrows {a},{b}")
        if g.table[b, a] != g.sources[a]:
            msg = f"inverse law fails: {b}·{a}={g.table[b, a]} != s({a})"
            raise AxiomViolation(msg, f"arrows {b},{a}")

    # (g1 g2) g3 == g1 (g2 g3) for every composable triple
    by_range = {u: np.nonzero(rng == u)[0] for u in g.units}
    for g1, g2, g12 in zip(left, right, prods):
        g3s = by_range[g.sources[g2]]
        lhs = g.table[g12, g3s]
        rhs = g.table[g1, g.table[g2, g3s]]
        if (bad := np.nonzero(lhs != rhs)[0]).size:
            g3 = int(g3s[bad[0]])
            msg = (
                f"associativity fails: ({g1}·{g2})·{g3}={lhs[bad[0]]} "
                f"but {g1}·({g2}·{g3})={rhs[bad[0]]}"
            )
            raise AxiomViolation(msg, f"arrows {g1},{g2},{g3}")


#
# Constructors
#


@dataclasses.dataclass(frozen=True)
class ExplicitSpec:
    """
    A groupoid given arrow by arrow. Compositions involving a unit and
    inverses of units are implied by the unit laws and may be omitted.
    """

    units: tuple[int, ...]
    arrows: tuple[tuple[int, int, int], ...] = ()
    """`(id, source, range)` for the non-unit arrows (units optional)."""

    products: tuple[tuple[int, int, int], ...] = ()
    """`(g1, g2, g1 g2)` for composable pairs."""

    inverses: tuple[tuple[int, int], ...] = ()
    """`(g, g⁻¹)` pairs; either orientation suffices."""


@dataclasses.dataclass(frozen=True)
class PairSpec:
    """The pair groupoid on `n` points: one arrow `i<-j` per pair."""

    n: int


@dataclasses.dataclass(frozen=True)
class GroupSpec:
    """A group as a one-unit groupoid, from its Cayley table."""

    table: tuple[tuple[int, ...], ...]
    """`table[g][h]` is the product `g h`."""


@dataclasses.dataclass(frozen=True)
class ActionSpec:
    """
    The transformation groupoid of a group acting on `points` points.
    `generators` gives the permutation (image of each point) for some
    group elements; the rest follow through the Cayley table.
    """

    group: GroupSpec
    points: int
    generators: tuple[tuple[int, tuple[int, ...]], ...]


@dataclasses.dataclass(frozen=True)
class UnionSpec:
    """The disjoint union of groupoids, arrow ids offset in order."""

    parts: tuple["GroupoidSpec", ...]


GroupoidSpec = ExplicitSpec | PairSpec | GroupSpec | ActionSpec | UnionSpec


def build_groupoid(spec: GroupoidSpec) -> FiniteGroupoid:
    """
    Returns a validated `FiniteGroupoid` for a constructor spec.

    Raises:
    - `MalformedSpec` - the spec is incomplete or structurally wrong
    - `AxiomViolation` - the resulting tables break a groupoid law
    """

    match spec:
        case ExplicitSpec():
            return _build_explicit(spec)
        case PairSpec(n=n):
            return _build_pair(n)
        case GroupSpec():
            return _build_group(spec)
        case ActionSpec():
            return _build_action(spec)
        case UnionSpec(parts=parts):
            return _build_union([build_groupoid(p) for p in parts])
    raise MalformedSpec(f"Unknown groupoid spec: {spec!r}")


def _build_explicit(spec: ExplicitSpec) -> FiniteGroupoid:
    ends: dict[int, tuple[int, int]] = {u: (u, u) for u in spec.units}
    for a, s, r in spec.arrows:
        if ends.setdefault(a, (s, r)) != (s, r):
            raise MalformedSpec("Conflicting endpoints", f"arrow {a}")

    m = len(ends)
    if sorted(ends) != list(range(m)):
        gaps = sorted(set(range(max(ends, default=-1) + 1)) - set(ends))
        raise MalformedSpec(f"Arrow ids must be 0..{m - 1}, missing {gaps}")

    table = np.full((m, m), -1, dtype=np.int64)
    for u in spec.units:
        for a, (s, r) in ends.items():
            if r == u:
                table[u, a] = a
            if s == u:
                table[a, u] = a
    for g1, g2, g in spec.products:
        if not (0 <= g1 < m and 0 <= g2 < m and 0 <= g < m):
            raise MalformedSpec("Unknown arrow", f"compose {g1} {g2} {g}")
        if table[g1, g2] not in (-1, g):
            msg = f"Conflicts with {g1}·{g2}={table[g1, g2]}"
            raise MalformedSpec(msg, f"compose {g1} {g2} {g}")
        table[g1, g2] = g

    inverses = {u: u for u in spec.units}
    for a, b in spec.inverses:
        for k, v in ((a, b), (b, a)):
            if not (0 <= k < m and 0 <= v < m):
                raise MalformedSpec("Unknown arrow", f"inverse {a} {b}")
            if inverses.setdefault(k, v) != v:
                raise MalformedSpec("Conflicting inverse", f"inverse {a} {b}")
    if missing := sorted(set(range(m)) - set(inverses)):
        raise MalformedSpec(f"No inverse given for arrows {missing}")

    return FiniteGroupoid(
        sources=tuple(ends[a][0] for a in range(m)),
        ranges=tuple(ends[a][1] for a in range(m)),
        units=tuple(spec.units),
        table=table,
        inverses=tuple(inverses[a] for a in range(m)),
    )


def _build_pair(n: int) -> FiniteGroupoid:
    if n < 1:
        raise MalformedSpec(f"Pair groupoid needs n >= 1, got {n}")

    # arrow i<-j has id i*n + j, range i, source j
    table = np.full((n * n, n * n), -1, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table[i * n + j, j * n + k] = i * n + k

    ids = [(i, j) for i in range(n) for j in range(n)]
    return FiniteGroupoid(
        sources=tuple(j * n + j for i, j in ids),
        ranges=tuple(i * n + i for i, j in ids),
        units=tuple(i * n + i for i in range(n)),
        table=table,
        inverses=tuple(j * n + i for i, j in ids),
        names=tuple(f"{i}<-{j}" for i, j in ids),
    )


def _group_parts(spec: GroupSpec) -> tuple[int, list[int]]:
    n = len(spec.table)
    if n < 1 or any(len(row) != n for row in spec.table):
        raise MalformedSpec(f"Cayley table must be square, got {n} rows")
    if any(not 0 <= v < n for row in spec.table for v in row):
        raise MalformedSpec("Cayley table entry out of range")

    elems = range(n)
    ident = [e for e in elems if all(spec.table[e][g] == g for g in elems)]
    if not ident:
        raise AxiomViolation("Cayley table has no identity element")
    e = ident[0]

    inverses = []
    for g in elems:
        if not (inv := [h for h in elems if spec.table[g][h] == e]):
            raise AxiomViolation("No inverse in Cayley table", f"arrow {g}")
        inverses.append(inv[0])
    return e, inverses


def _build_group(spec: GroupSpec) -> FiniteGroupoid:
    e, inverses = _group_parts(spec)
    n = len(spec.table)
    return FiniteGroupoid(
        sources=(e,) * n,
        ranges=(e,) * n,
        units=(e,),
        table=np.array(spec.table, dtype=np.int64),
        inverses=tuple(inverses),
        names=tuple(f"g{g}" for g in range(n)),
    )


def _build_action(spec: ActionSpec) -> FiniteGroupoid:
    e, inverses = _group_parts(spec.group)
    mul = spec.group.table
    n, k = len(mul), spec.points
    if k < 1:
        raise MalformedSpec(f"Action needs at least one point, got {k}")

    perms: dict[int, tuple[int, ...]] = {e: tuple(range(k))}
    for g, images in spec.generators:
        if not 0 <= g < n:
            raise MalformedSpec(f"Acting element {g} not in group of {n}")
        if sorted(images) != list(range(k)):
            raise MalformedSpec(f"Not a permutation of {k} points: {images}")
        if perms.setdefault(g, tuple(images)) != tuple(images):
            raise AxiomViolation("Action conflicts with group law", f"g{g}")

    # close under products, (g h)·p = g·(h·p), until a pass adds nothing
    while True:
        added = False
        for g, pg in list(perms.items()):
            for h, ph in list(perms.items()):
                gh_perm = tuple(pg[ph[p]] for p in range(k))
                if (known := perms.get(mul[g][h])) is None:
                    perms[mul[g][h]] = gh_perm
                    added = True
                elif known != gh_perm:
                    msg = "Action conflicts with group law"
                    raise AxiomViolation(msg, f"g{g}·g{h}")
        if not added:
            break
    if missing := sorted(set(range(n)) - set(perms)):
        raise MalformedSpec(f"Action leaves group elements {missing} unset")

    # arrow (g,p) has id g*k + p, source (e,p), range (e, g·p)
    m = n * k
    table = np.full((m, m), -1, dtype=np.int64)
    for g in range(n):
        for p in range(k):
            q = perms[g][p]
            for h in range(n):
                table[h * k + q, g * k + p] = mul[h][g] * k + p

    return FiniteGroupoid(
        sources=tuple(e * k + p for g in range(n) for p in range(k)),
        ranges=tuple(e * k + perms[g][p] for g in range(n) for p in range(k)),
        units=tuple(e * k + p for p in range(k)),
        table=table,
        inverses=tuple(
            inverses[g] * k + perms[g][p] for g in range(n) for p in range(k)
        ),
        names=tuple(f"({g},{p})" for g in range(n) for p in range(k)),
    )


def _build_union(parts: list[FiniteGroupoid]) -> FiniteGroupoid:
    if not parts:
        raise MalformedSpec("Union of no groupoids")

    m = sum(p.size for p in parts)
    table = np.full((m, m), -1, dtype=np.int64)
    sources: list[int] = []
    ranges: list[int] = []
    units: list[int] = []
    inverses: list[int] = []
    names: list[str] = []
    offset = 0
    for i, part in enumerate(parts):
        end = offset + part.size
        block = np.where(part.table >= 0, part.table + offset, -1)
        table[offset:end, offset:end] = block
        sources.extend(s + offset for s in part.sources)
        ranges.extend(r + offset for r in part.ranges)
        units.extend(u + offset for u in part.units)
        inverses.extend(v + offset for v in part.inverses)
        names.extend(f"{i}:{name}" for name in part.names)
        offset = end

    return FiniteGroupoid(
        sources=tuple(sources),
        ranges=tuple(ranges),
        units=tuple(units),
        table=table,
        inverses=tuple(inverses),
        names=tuple(names),
    )
