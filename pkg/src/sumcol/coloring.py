"""Colorings of a graph and the quantities the solver optimizes.

A coloring assigns every vertex a color in 1..k, where k counts allocated
classes; an allocated class may be empty mid-search.  The optimization
objective is the sum of assigned colors, so relabeling classes matters:
``canonical_relabel`` orders classes by decreasing size (ties by smallest
member), which both minimizes the sum for a fixed partition and gives every
partition a unique representative assignment.

Also provides the one-solution text format used for warm starts and result
dumps: a header ``s <sum> <k>`` followed by one ``v <vertex> <color>`` line
per vertex, ids and colors 1-based.
"""

from __future__ import annotations

from typing import Sequence

from .graph import Graph


class ColoringFormatError(ValueError):
    """Raised for malformed, incomplete, or improper coloring files."""


class Coloring:
    """Mutable vertex coloring with incremental bookkeeping.

    Maintains, besides the per-vertex assignment, one membership bitmask and
    one size per class plus the cached color sum, all updated in O(moved
    vertices) by the mutators.  Equality compares assignments only.
    """

    __slots__ = ("assignment", "class_masks", "class_sizes", "sum")

    def __init__(self, assignment: list[int], class_masks: list[int], class_sizes: list[int], total: int):
        self.assignment = assignment
        self.class_masks = class_masks
        self.class_sizes = class_sizes
        self.sum = total

    @classmethod
    def from_assignment(cls, colors: Sequence[int], k: int | None = None) -> "Coloring":
        """Build from 1-based per-vertex colors; k defaults to max(colors)."""
        assignment = list(colors)
        if not assignment:
            raise ValueError("empty coloring")
        top = max(assignment)
        if min(assignment) < 1:
            raise ValueError("colors must be >= 1")
        if k is None:
            k = top
        elif k < top:
            raise ValueError(f"k={k} below largest used color {top}")
        masks = [0] * k
        sizes = [0] * k
        for v, c in enumerate(assignment):
            masks[c - 1] |= 1 << v
            sizes[c - 1] += 1
        return cls(assignment, masks, sizes, sum(assignment))

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    def copy(self) -> "Coloring":
        return Coloring(self.assignment[:], self.class_masks[:], self.class_sizes[:], self.sum)

    def add_class(self) -> int:
        """Allocate one empty class; returns its (1-based) color."""
        self.class_masks.append(0)
        self.class_sizes.append(0)
        return len(self.class_sizes)

    def recolor(self, v: int, color: int) -> None:
        """Move one vertex to ``color`` (1-based, must be allocated)."""
        old = self.assignment[v]
        bit = 1 << v
        self.class_masks[old - 1] ^= bit
        self.class_sizes[old - 1] -= 1
        self.class_masks[color - 1] |= bit
        self.class_sizes[color - 1] += 1
        self.assignment[v] = color
        self.sum += color - old

    def swap_between(self, mask: int, color_a: int, color_b: int) -> None:
        """Exchange the ``mask`` vertices between classes a and b: members of
        a in the mask move to b and vice versa."""
        ma = self.class_masks[color_a - 1]
        mb = self.class_masks[color_b - 1]
        part_a = mask & ma
        part_b = mask & mb
        count_a = part_a.bit_count()
        count_b = part_b.bit_count()
        self.class_masks[color_a - 1] = (ma & ~part_a) | part_b
        self.class_masks[color_b - 1] = (mb & ~part_b) | part_a
        self.class_sizes[color_a - 1] += count_b - count_a
        self.class_sizes[color_b - 1] += count_a - count_b
        assignment = self.assignment
        m = part_a
        while m:
            low = m & -m
            assignment[low.bit_length() - 1] = color_b
            m ^= low
        m = part_b
        while m:
            low = m & -m
            assignment[low.bit_length() - 1] = color_a
            m ^= low
        self.sum += (color_b - color_a) * (count_a - count_b)

    def class_members(self, color: int) -> list[int]:
        """Members of one class (1-based color), ascending."""
        out = []
        m = self.class_masks[color - 1]
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.assignment == other.assignment

    def __hash__(self):
        return hash(tuple(self.assignment))

    def __repr__(self):
        return f"Coloring(n={self.n}, k={self.k}, sum={self.sum})"


def sum_value(coloring: Coloring) -> int:
    """Sum of assigned colors; the cached value kept current by mutators."""
    return coloring.sum


def is_proper(coloring: Coloring, graph: Graph) -> bool:
    """True iff no edge joins two vertices of the same class."""
    if coloring.n != graph.n:
        return False
    masks = coloring.class_masks
    adj = graph.adj_masks
    for v, c in enumerate(coloring.assignment):
        if adj[v] & masks[c - 1]:
            return False
    return True


def hamming_distance(a: Coloring, b: Coloring) -> int:
    """Number of vertices whose assigned colors differ."""
    if a.n != b.n:
        raise ValueError(f"colorings over different vertex sets: {a.n} != {b.n}")
    return sum(1 for x, y in zip(a.assignment, b.assignment) if x != y)


def canonical_relabel(coloring: Coloring) -> Coloring:
    """Relabel classes by decreasing size, drop empty classes.

    Size ties break on the smallest member vertex, so any two colorings with
    the same underlying partition relabel to the identical assignment.  The
    result minimizes the color sum over all relabelings of the partition and
    the map is idempotent.  Never increases the sum.
    """
    order = sorted(
        (i for i in range(coloring.k) if coloring.class_sizes[i] > 0),
        key=lambda i: (-coloring.class_sizes[i], coloring.class_masks[i] & -coloring.class_masks[i]),
    )
    relabel = {old: new for new, old in enumerate(order, start=1)}
    assignment = [relabel[c - 1] for c in coloring.assignment]
    masks = [coloring.class_masks[old] for old in order]
    sizes = [coloring.class_sizes[old] for old in order]
    return Coloring(assignment, masks, sizes, sum(assignment))


def format_coloring(coloring: Coloring) -> str:
    """Render the one-solution text format."""
    lines = [f"s {coloring.sum} {coloring.k}"]
    for v, c in enumerate(coloring.assignment):
        lines.append(f"v {v + 1} {c}")
    return "\n".join(lines) + "\n"


def parse_coloring(text: str, graph: Graph) -> Coloring:
    """Parse the one-solution text format and validate it against ``graph``.

    Rejects missing or repeated vertices, colors outside 1..k, a header sum
    that disagrees with the body, and improper colorings.
"""
    header: tuple[int, int] | None = None
    seen: dict[int, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "s":
            if header is not None:
                raise ColoringFormatError(f"line {line_no}: duplicate header")
            if len(fields) != 3:
                raise ColoringFormatError(f"line {line_no}: malformed header {line!r}")
            try:
                header = (int(fields[1]), int(fields[2]))
            except ValueError:
                raise ColoringFormatError(f"line {line_no}: non-integer header {line!r}") from None
        elif fields[0] == "v":
            if header is None:
                raise ColoringFormatError(f"line {line_no}: vertex line before header")
            if len(fields) != 3:
                raise ColoringFormatError(f"line {line_no}: malformed vertex line {line!r}")
            try:
                v, c = int(fields[1]), int(fields[2])
            except ValueError:
                raise ColoringFormatError(f"line {line_no}: non-integer vertex line {line!r}") from None
            if not 1 <= v <= graph.n:
                raise ColoringFormatError(f"line {line_no}: vertex {v} outside 1..{graph.n}")
            if v in seen:
                raise ColoringFormatError(f"line {line_no}: vertex {v} assigned twice")
            seen[v] = c
        else:
            raise ColoringFormatError(f"line {line_no}: unrecognized line {line!r}")
    if header is None:
        raise ColoringFormatError("missing header line")
    total, k = header
    missing = graph.n - len(seen)
    if missing:
        raise ColoringFormatError(f"incomplete coloring: {missing} vertices unassigned")
    colors = [seen[v] for v in range(1, graph.n + 1)]
    if min(colors) < 1 or max(colors) > k:
        raise ColoringFormatError(f"colors outside 1..{k}")
    if sum(colors) != total:
        raise ColoringFormatError(f"header sum {total} != actual {sum(colors)}")
    coloring = Coloring.from_assignment(colors, k=k)
    if not is_proper(coloring, graph):
        raise ColoringFormatError("coloring is not proper for this graph")
    return coloring


def load_coloring(path: str, graph: Graph) -> Coloring:
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        return parse_coloring(fh.read(), graph)


def save_coloring(path: str, coloring: Coloring) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_coloring(coloring))
