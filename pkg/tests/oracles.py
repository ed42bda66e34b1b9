"""Reference computations written independently of the package internals."""
from __future__ import annotations

import itertools
import math

import numpy as np


def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def all_matchings(points: tuple) -> list[list[tuple]]:
    if not points:
        return [[]]
    first, rest = points[0], points[1:]
    out = []
    for idx, other in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1:]
        for m in all_matchings(remaining):
            out.append([(first, other)] + m)
    return out


def noncrossing(m: list[tuple]) -> bool:
    for (a, b), (c, d) in itertools.combinations(m, 2):
        a, b = sorted((a, b))
        c, d = sorted((c, d))
        if a < c < b < d or c < a < d < b:
            return False
    return True


def noncrossing_matchings(n: int) -> list[list[tuple]]:
    """Every perfect matching of n points filtered for planarity."""
    if n % 2:
        return []
    return [m for m in all_matchings(tuple(range(n))) if noncrossing(m)]


def closed_loops(m1: list[tuple], m2: list[tuple], n: int) -> int:
    """Components of the graph on n boundary points with the edges of both matchings."""
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in m1 + m2:
        parent[find(a)] = find(b)
    return len({find(i) for i in range(n)})


def diagram_gram(n: int, delta: float) -> np.ndarray:
    ms = noncrossing_matchings(n)
    return np.array([[delta ** closed_loops(a, b, n) for b in ms] for a in ms])


def _fuse(kind: str, spec: dict, a, b):
    if kind == "hilb":
        return (0,)
    if kind == "group":
        return tuple((x + y) % N for x, y, N in zip(a, b, spec["factors"]))
    if kind == "matrix":
        return (a[0], b[1]) if a[1] == b[0] else None
    raise ValueError(kind)


def path_counts(spec: dict, word: list[dict]) -> dict:
    """Multiplicity of each simple in a tensor word, by enumerating every letter sequence."""
    kind = spec["kind"]
    letters = [[s for s, m in prim.items() for _ in range(m)] for prim in word]
    counts: dict = {}
    if not word:
        units = [(0,)] if kind == "hilb" else (
            [tuple(0 for _ in spec["factors"])] if kind == "group" else [(i, i) for i in range(1, spec["r"] + 1)])
        return {u: 1 for u in units}
    for seq in itertools.product(*letters):
        cur = seq[0]
        for s in seq[1:]:
            cur = _fuse(kind, spec, cur, s)
            if cur is None:
                break
        if cur is not None:
            counts[cur] = counts.get(cur, 0) + 1
    return counts


def hom_dim(spec: dict, word_a: list[dict], word_b: list[dict]) -> int:
    ca, cb = path_counts(spec, word_a), path_counts(spec, word_b)
    return sum(m * cb.get(s, 0) for s, m in ca.items())


def matrix_spherical_weights(pi12: float) -> tuple:
    """ψ on M_2: sphericality forces ψ_1/ψ_2 = π_12 with ψ_1 + ψ_2 = 1."""
    return (pi12 / (1 + pi12), 1 / (1 + pi12))
