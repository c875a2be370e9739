"""
Line-based text formats for groupoids, algebra elements and matrices.
`#` starts a comment; blank lines are ignored.

Groupoid files start with `groupoid v1`, then either explicit tables

    unit <id>
    arrow <id> <source> <range>
    compose <g1> <g2> <g1·g2>
    inverse <g> <g⁻¹>

or a single constructor line

    pair <n>
    group <n> <n² Cayley table entries, row-major>
    action <group-file> <points> <elem>:<p0>,<p1>,... ...
    union <file> <file> ...

with files named relative to the file that names them. Compositions
with a unit and inverses of units may be omitted.

Element files start with `element v1 <groupoid-file>`, then one
`<arrow> <re> <im>` line per nonzero coefficient.
"""

import logging
import os

import numpy as np
import numpy.typing as npt

from ok_groupoid._algebra import AlgebraElement
from ok_groupoid._exceptions import GroupoidMismatch, MalformedSpec
from ok_groupoid._groupoid import (
    ActionSpec,
    ExplicitSpec,
    FiniteGroupoid,
    GroupoidSpec,
    GroupSpec,
    PairSpec,
    UnionSpec,
    build_groupoid,
)

log = logging.getLogger("ok_groupoid.formats")

_GROUPOID_HEADER = ("groupoid", "v1")
_ELEMENT_HEADER = ("element", "v1")
_EXPLICIT_ARITY = {"unit": 1, "arrow": 3, "compose": 3, "inverse": 2}


def load_groupoid(path: str) -> FiniteGroupoid:
    """
    Reads and builds the groupoid in the file at `path`.

    Raises:
    - `MalformedSpec` - unreadable file or bad syntax (names `file:line`)
    - `AxiomViolation` - the tables break a groupoid law
    """

    return build_groupoid(load_spec(path))


def load_spec(path: str) -> GroupoidSpec:
    """Reads the groupoid file at `path` as an unbuilt constructor spec."""
    return _load_spec(path, ())


def parse_groupoid(
    text: str, where: str = "<groupoid>", base_dir: str = "."
) -> FiniteGroupoid:
    """
    Parses groupoid text; `where` labels errors and `base_dir` resolves
    file names in `action` and `union` lines.

    Raises:
    - `MalformedSpec` - bad syntax or unreadable referenced files
    - `AxiomViolation` - the tables break a groupoid law
    """

    return build_groupoid(_parse_spec(text, where, base_dir, ()))


def format_groupoid(groupoid: FiniteGroupoid) -> str:
    """
    Returns the explicit-table text for `groupoid`: units, non-unit
    arrows, products of non-unit pairs by `(g1, g2)`, and inverses of
    non-unit arrows by `g`.

    Only text already in this canonical form formats back byte for byte.
    Constructor lines (`pair`, `group`, `action`, `union`), comments,
    blank lines and reordered tables all come back as explicit tables in
    this order, and arrow names are not kept.
    """

    units = set(groupoid.units)
    lines = ["groupoid v1"]
    lines += [f"unit {u}" for u in groupoid.units]
    lines += [
        f"arrow {g} {groupoid.sources[g]} {groupoid.ranges[g]}"
        for g in range(groupoid.size)
        if g not in units
    ]
    left, right, prods = groupoid.composable
    lines += [
        f"compose {g1} {g2} {g}"
        for g1, g2, g in sorted(zip(left.tolist(), right.tolist(), prods))
        if g1 not in units and g2 not in units
    ]
    lines += [
        f"inverse {g} {groupoid.inverses[g]}"
        for g in range(groupoid.size)
        if g not in units
    ]
    return "\n".join(lines) + "\n"


def load_element(path: str, groupoid: FiniteGroupoid) -> AlgebraElement:
    """
    Reads the element file at `path` as an element over `groupoid`. The
    groupoid file the element names (relative to `path`) is loaded too
    and must agree with `groupoid` in arrow count and unit set.

    Raises:
    - `MalformedSpec` - unreadable file or bad syntax (names `file:line`)
    - `GroupoidMismatch` - the element was written for another groupoid
    """

    return parse_element(_read(path), groupoid, path, os.path.dirname(path))


def parse_element(
    text: str,
    groupoid: FiniteGroupoid,
    where: str = "<element>",
    base_dir: str | None = None,
) -> AlgebraElement:
    """
    Parses element text over `groupoid`. With `base_dir`, the declared
    groupoid file is loaded from there and checked against `groupoid`.

    Raises:
    - `MalformedSpec` - bad syntax, unknown or repeated arrow ids
    - `GroupoidMismatch` - the declared groupoid disagrees with `groupoid`
    """

    lines = _content_lines(text)
    if not lines:
        raise MalformedSpec("Empty element file", where)
    lineno, header = lines[0]
    if tuple(header[:2]) != _ELEMENT_HEADER or len(header) != 3:
        msg = f"Expected 'element v1 <groupoid-file>', got {' '.join(header)!r}"
        raise MalformedSpec(msg, f"{where}:{lineno}")

    if base_dir is not None:
        declared_path = os.path.join(base_dir, header[2])
        declared = load_groupoid(declared_path)
        if declared.size != groupoid.size or declared.units != groupoid.units:
            msg = (
                f"Declared groupoid {header[2]} has {declared.size} arrows, "
                f"units {list(declared.units)}; loaded groupoid has "
                f"{groupoid.size} arrows, units {list(groupoid.units)}"
            )
            raise GroupoidMismatch(msg, f"{where}:{lineno}")

    coeffs = np.zeros(groupoid.size, dtype=np.complex128)
    seen: set[int] = set()
    for lineno, words in lines[1:]:
        at = f"{where}:{lineno}"
        if len(words) != 3:
            raise MalformedSpec("Expected '<arrow> <re> <im>'", at)
        g = _int(words[0], at)
        if not 0 <= g < groupoid.size:
            raise MalformedSpec(f"No arrow {g} (size {groupoid.size})", at)
        if g in seen:
            raise MalformedSpec(f"Arrow {g} given twice", at)
        seen.add(g)
        coeffs[g] = complex(_float(words[1], at), _float(words[2], at))
    return AlgebraElement(groupoid, coeffs)


def format_element(a: AlgebraElement, groupoid_file: str) -> str:
    """Returns element text for `a`, nonzero coefficients to 17 digits."""
    lines = [f"element v1 {groupoid_file}"]
    lines += [
        f"{g} {format_number(c.real, 17)} {format_number(c.imag, 17)}"
        for g, c in a.items()
    ]
    return "\n".join(lines) + "\n"


def format_matrix(matrix: npt.ArrayLike, digits: int = 17) -> str:
    """
    Returns a `<rows> <cols>` header line, then one line per row of
    `re im` pairs.
    """

    m = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    for row in m:
        pairs = [
            f"{format_number(c.real, digits)} {format_number(c.imag, digits)}"
            for c in row
        ]
        lines.append("  ".join(pairs))
    return "\n".join(lines) + "\n"


def format_number(value: float, digits: int) -> str:
    """Returns `value` to `digits` significant digits (no `-0`)."""
    return f"{value + 0.0:.{digits}g}"


def _load_spec(path: str, seen: tuple[str, ...]) -> GroupoidSpec:
    real = os.path.realpath(path)
    if real in seen:
        raise MalformedSpec("File includes itself", path)
    text = _read(path)
    log.debug("Read groupoid file %s", path)
    return _parse_spec(text, path, os.path.dirname(path), (*seen, real))


def _parse_spec(
    text: str, where: str, base_dir: str, seen: tuple[str, ...]
) -> GroupoidSpec:
    lines = _content_lines(text)
    if not lines:
        raise MalformedSpec("Empty groupoid file", where)
    lineno, header = lines[0]
    if tuple(header) != _GROUPOID_HEADER:
        msg = f"Expected 'groupoid v1', got {' '.join(header)!r}"
        raise MalformedSpec(msg, f"{where}:{lineno}")

    body = lines[1:]
    if not body:
        raise MalformedSpec("No arrows or constructor", where)
    lineno, (keyword, *args) = body[0]
    if keyword in _EXPLICIT_ARITY:
        return _parse_explicit(body, where)
    if len(body) > 1:
        extra = body[1][0]
        msg = f"Constructor '{keyword}' must be the only line"
        raise MalformedSpec(msg, f"{where}:{extra}")

    at = f"{where}:{lineno}"
    match keyword:
        case "pair":
            if len(args) != 1:
                raise MalformedSpec("Expected 'pair <n>'", at)
            return PairSpec(_int(args[0], at))
        case "group":
            return _parse_group(args, at)
        case "action":
            return _parse_action(args, at, base_dir, seen)
        case "union":
            if not args:
                raise MalformedSpec("Expected 'union <file> ...'", at)
            return UnionSpec(
                tuple(_load_spec(os.path.join(base_dir, a), seen) for a in args)
            )
    raise MalformedSpec(f"Unknown keyword {keyword!r}", at)


def _parse_explicit(
    body: list[tuple[int, list[str]]], where: str
) -> ExplicitSpec:
    units: list[int] = []
    arrows: list[tuple[int, int, int]] = []
    products: list[tuple[int, int, int]] = []
    inverses: list[tuple[int, int]] = []
    for lineno, (keyword, *args) in body:
        at = f"{where}:{lineno}"
        if (arity := _EXPLICIT_ARITY.get(keyword)) is None:
            msg = f"Unknown or misplaced keyword {keyword!r}"
            raise MalformedSpec(msg, at)
        if len(args) != arity:
            raise MalformedSpec(f"'{keyword}' takes {arity} ids", at)
        ids = [_int(a, at) for a in args]
        match keyword:
            case "unit":
                units.append(ids[0])
            case "arrow":
                arrows.append((ids[0], ids[1], ids[2]))
            case "compose":
                products.append((ids[0], ids[1], ids[2]))
            case "inverse":
                inverses.append((ids[0], ids[1]))
    if not units:
        raise MalformedSpec("No units declared", where)
    return ExplicitSpec(
        units=tuple(units),
        arrows=tuple(arrows),
        products=tuple(products),
        inverses=tuple(inverses),
    )


def _parse_group(args: list[str], at: str) -> GroupSpec:
    if not args:
        raise MalformedSpec("Expected 'group <n> <table>'", at)
    n = _int(args[0], at)
    if n < 1 or len(args) != 1 + n * n:
        msg = f"'group {args[0]}' needs {max(n, 0) ** 2} table entries"
        raise MalformedSpec(msg, at)
    flat = [_int(a, at) for a in args[1:]]
    return GroupSpec(tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n)))


def _parse_action(
    args: list[str], at: str, base_dir: str, seen: tuple[str, ...]
) -> ActionSpec:
    if len(args) < 2:
        raise MalformedSpec("Expected 'action <group-file> <points> ...'", at)
    group_path = os.path.join(base_dir, args[0])
    group = _as_group(_load_spec(group_path, seen), group_path)
    points = _int(args[1], at)

    generators = []
    for word in args[2:]:
        elem, sep, perm = word.partition(":")
        if not sep:
            raise MalformedSpec(f"Expected '<elem>:<p0>,<p1>,...': {word}", at)
        images = tuple(_int(p, at) for p in perm.split(","))
        if len(images) != points:
            msg = f"Permutation {word} has {len(images)} entries, not {points}"
            raise MalformedSpec(msg, at)
        generators.append((_int(elem, at), images))
    return ActionSpec(group=group, points=points, generators=tuple(generators))


def _as_group(spec: GroupoidSpec, where: str) -> GroupSpec:
    if isinstance(spec, GroupSpec):
        return spec
    groupoid = build_groupoid(spec)
    if len(groupoid.units) != 1:
        msg = f"Acting groupoid has {len(groupoid.units)} units, need a group"
        raise MalformedSpec(msg, where)
    rows = groupoid.table.tolist()
    return GroupSpec(tuple(tuple(row) for row in rows))


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if words := line.split("#", 1)[0].split():
            out.append((lineno, words))
    return out


def _read(path: str) -> str:
    try:
        with open(path) as file:
            return file.read()
    except (OSError, UnicodeDecodeError) as ex:
        raise MalformedSpec(f"Can't read file: {ex}", path) from ex


def _int(word: str, at: str) -> int:
    try:
        return int(word)
    except ValueError:
        raise MalformedSpec(f"Expected an integer, got {word!r}", at) from None


def _float(word: str, at: str) -> float:
    try:
        value = float(word)
    except ValueError:
        raise MalformedSpec(f"Expected a number, got {word!r}", at) from None
    if not np.isfinite(value):
        raise MalformedSpec(f"Non-finite number {word!r}", at)
    return value
