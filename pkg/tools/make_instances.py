"""Regenerate the constructible benchmark instances under instances/.

Two families have exact mathematical definitions, so their .col files can be
rebuilt from scratch (isomorphic to the distributed originals, possibly with
a different vertex numbering):

* mycielN: start from K2 and apply the Mycielski construction N-1 times
  (so myciel3 is the 11-vertex Grotzsch graph).
* queenN_M: one vertex per square of an N x M board, edges between squares
  sharing a row, column, or diagonal.

The remaining benchmark files are empirical graphs (book graphs, road
distances, football games, fixed random instances); they cannot be derived
and must be supplied by the user.  Run from the repository root:

    python tools/make_instances.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from sumcol.graph import Graph, to_dimacs  # noqa: E402


def mycielskian(g: Graph) -> Graph:
    """Mycielski construction: n new shadow vertices plus one apex."""
    n = g.n
    edges = list(g.edges())
    for u, v in g.edges():
        edges.append((u, n + v))
        edges.append((v, n + u))
    apex = 2 * n
    for w in range(n, 2 * n):
        edges.append((w, apex))
    return Graph.from_edges(2 * n + 1, edges)


def myciel(order: int) -> Graph:
    g = Graph.from_edges(2, [(0, 1)])
    for _ in range(order - 1):
        g = mycielskian(g)
    return g


def queens(rows: int, cols: int) -> Graph:
    edges = []
    for r1 in range(rows):
        for c1 in range(cols):
            u = r1 * cols + c1
            for r2 in range(rows):
                for c2 in range(cols):
                    v = r2 * cols + c2
                    if v <= u:
                        continue
                    if r1 == r2 or c1 == c2 or abs(r1 - r2) == abs(c1 - c2):
                        edges.append((u, v))
    return Graph.from_edges(rows * cols, edges)


# (file stem, builder, expected n, expected m)
FAMILIES = [
    ("myciel3", lambda: myciel(3), 11, 20),
    ("myciel4", lambda: myciel(4), 23, 71),
    ("myciel5", lambda: myciel(5), 47, 236),
    ("myciel6", lambda: myciel(6), 95, 755),
    ("myciel7", lambda: myciel(7), 191, 2360),
    ("queen5_5", lambda: queens(5, 5), 25, 160),
    ("queen6_6", lambda: queens(6, 6), 36, 290),
    ("queen7_7", lambda: queens(7, 7), 49, 476),
    ("queen8_8", lambda: queens(8, 8), 64, 728),
    ("queen9_9", lambda: queens(9, 9), 81, 1056),
    ("queen8_12", lambda: queens(8, 12), 96, 1368),
]


def main() -> int:
    out_dir = os.path.join(os.path.dirname(__file__), "..", "instances")
    os.makedirs(out_dir, exist_ok=True)
    for stem, build, want_n, want_m in FAMILIES:
        g = build()
        if (g.n, g.edge_count) != (want_n, want_m):
            print(f"{stem}: got n={g.n} m={g.edge_count}, expected n={want_n} m={want_m}")
            return 1
        path = os.path.join(out_dir, stem + ".col")
        with open(path, "w", encoding="ascii") as fh:
            fh.write(to_dimacs(g, comment=f"{stem}: generated by tools/make_instances.py"))
        print(f"wrote {path} (n={g.n}, m={g.edge_count})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
