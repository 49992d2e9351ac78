# src/resolution.py
"""
Free complexes over Q(i)[z]: Koszul complexes, minimal free resolutions by
iterated syzygies, minimization, and the exactness and Cohen-Macaulay checks.
"""
import logging
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from groebner import in_module, module_syzygies, syzygies
from poly import MultiPoly, constant_term, exact_eval, gaussian, poly_ring

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[MultiPoly, ...], ...]


class ResolutionError(RuntimeError):
    """The syzygy iteration did not terminate within nvars + 1 steps."""


class PointOnVarietyError(ValueError):
    """A sample point lies on the common zero set of the generators."""


@dataclass(frozen=True)
class FreeComplex:
    """
    0 -> R^{r_p} -> ... -> R^{r_1} -> R^{r_0}.

    maps[k - 1] is f^k, an r_{k-1} x r_k matrix stored row-major.
    """
    nvars: int
    ranks: Tuple[int, ...]
    maps: Tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.ranks) != len(self.maps) + 1:
            raise ValueError("a complex of length p needs p + 1 ranks")
        for k, f in enumerate(self.maps, start=1):
            if len(f) != self.ranks[k - 1] or any(len(row) != self.ranks[k] for row in f):
                raise ValueError(f"f^{k} does not have shape {self.ranks[k - 1]} x {self.ranks[k]}")

    @property
    def length(self) -> int:
        return len(self.maps)

    def map(self, k: int) -> Matrix:
        """f^k, 1-based as in the complex."""
        return self.maps[k - 1]


def matmul(a: Matrix, b: Matrix, R) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new_row = []
        for c in range(cols):
            total = R.zero
            for k in range(inner):
                if row[k] and b[k][c]:
                    total += row[k] * b[k][c]
            new_row.append(total)
        out.append(tuple(new_row))
    return tuple(out)


def _columns_to_matrix(columns: Sequence[Sequence[MultiPoly]], rows: int) -> Matrix:
    return tuple(tuple(col[i] for col in columns) for i in range(rows))


def _matrix_columns(m: Matrix) -> List[Tuple[MultiPoly, ...]]:
    if not m:
        return []
    return [tuple(row[c] for row in m) for c in range(len(m[0]))]


def koszul_basis(p: int, k: int) -> List[Tuple[int, ...]]:
    """Basis of E_k: ascending index sets of size k, lexicographically ordered."""
    return list(combinations(range(p), k))


def koszul_ranks(p: int) -> List[int]:
    return [comb(p, k) for k in range(p + 1)]


def koszul_complex(f: Sequence[MultiPoly]) -> FreeComplex:
    """
    Koszul complex of f_1..f_p.

    delta(e_{l_1} ^ ... ^ e_{l_k}) = sum_j (-1)^(j+1) f_{l_j} e_{l_1} ^ ..^ (omit l_j) .. ^ e_{l_k}
    """
    f = tuple(f)
    if not f:
        raise ValueError("koszul_complex needs at least one polynomial")
    R = f[0].ring
    p = len(f)
    maps = []
    for k in range(1, p + 1):
        sources = koszul_basis(p, k)
        targets = {idx: row for row, idx in enumerate(koszul_basis(p, k - 1))}
        matrix = [[R.zero] * len(sources) for _ in targets]
        for col, index_set in enumerate(sources):
            for pos, l in enumerate(index_set):
                face = index_set[:pos] + index_set[pos + 1:]
                sign = 1 if pos % 2 == 0 else -1
                matrix[targets[face]][col] = f[l] if sign > 0 else -f[l]
        maps.append(tuple(tuple(row) for row in matrix))
    return FreeComplex(nvars=R.ngens, ranks=tuple(koszul_ranks(p)), maps=tuple(maps))


def _prune(columns: List[Tuple[MultiPoly, ...]]) -> List[Tuple[MultiPoly, ...]]:
    """Greedily drop columns lying in the module generated by the others."""
    kept = list(columns)
    idx = len(kept) - 1
    while idx >= 0:
        others = kept[:idx] + kept[idx + 1:]
        if others and in_module(kept[idx], others):
            del kept[idx]
        idx -= 1
    return kept


def free_resolution(gens: Sequence[MultiPoly]) -> FreeComplex:
    """
    Minimal free resolution of C[z]/<gens>.

    Args:
        gens: generators; f^1 is their row

    Returns:
        minimized FreeComplex whose f^(k+1) columns generate ker f^k
    """
    gens = tuple(gens)
    if not gens:
        raise ValueError("free_resolution needs at least one generator")
    R = gens[0].ring
    n = R.ngens
    maps: List[Matrix] = [(gens,)]
    ranks = [1, len(gens)]
    kernel = _prune(syzygies(gens))
    while kernel:
        if len(maps) > n:
            raise ResolutionError(f"resolution did not terminate within {n + 1} steps")
        matrix = _columns_to_matrix(kernel, ranks[-1])
        maps.append(matrix)
        ranks.append(len(kernel))
        logger.debug("resolution step %d: rank %d", len(maps), len(kernel))
        kernel = _prune(module_syzygies(_matrix_columns(matrix)))
    return minimize(FreeComplex(nvars=n, ranks=tuple(ranks), maps=tuple(maps)))


def _find_unit(maps: List[List[List[MultiPoly]]]) -> Optional[Tuple[int, int, int]]:
    """Position (map index, row, col) of a unit entry in f^k, k >= 2; constants first."""
    fallback = None
    for k in range(1, len(maps)):
        for i, row in enumerate(maps[k]):
            for j, entry in enumerate(row):
                if entry and constant_term(entry):
                    if entry.is_ground:
                        return k, i, j
                    if fallback is None:
                        fallback = (k, i, j)
    return fallback


def minimize(c: FreeComplex) -> FreeComplex:
    """
    Cancel unit entries of f^k (k >= 2) by Gaussian elimination of complexes.

    A constant pivot u at (i, j) of f^k removes row i / column j of f^k, column i
    of f^(k-1) and row j of f^(k+1). A non-constant unit is handled by scaling
    the remaining block by u, which is an isomorphism over the local ring.
    """
    maps = [[list(row) for row in f] for f in c.maps]
    ranks = list(c.ranks)
    while True:
        hit = _find_unit(maps)
        if hit is None:
            break
        k, i, j = hit
        d = maps[k]
        u = d[i][j]
        scaled = not u.is_ground
        if scaled:
            logger.warning("minimize: eliminating non-constant unit entry of f^%d", k + 1)
        inv = QQ_I.one / constant_term(u) if not scaled else None
        new = []
        for a, row in enumerate(d):
            if a == i:
                continue
            new_row = []
            for b, entry in enumerate(row):
                if b == j:
                    continue
                if scaled:
                    new_row.append(u * entry - row[j] * d[i][b])
                else:
                    new_row.append(entry - (row[j] * d[i][b]).mul_ground(inv))
            new.append(new_row)
        maps[k] = new
        maps[k - 1] = [[entry for col, entry in enumerate(row) if col != i] for row in maps[k - 1]]
        if k + 1 < len(maps):
            maps[k + 1] = [row for row_idx, row in enumerate(maps[k + 1]) if row_idx != j]
        ranks[k] -= 1
        ranks[k + 1] -= 1
        while len(maps) > 1 and ranks[-1] == 0:
            maps.pop()
            ranks.pop()
    return FreeComplex(
        nvars=c.nvars,
        ranks=tuple(ranks),
        maps=tuple(tuple(tuple(row) for row in f) for f in maps),
    )


def verify_complex(c: FreeComplex) -> bool:
    """All consecutive products f^k f^(k+1) vanish exactly."""
    R = poly_ring(c.nvars)
    for a, b in zip(c.maps, c.maps[1:]):
        if any(entry for row in matmul(a, b, R) for entry in row):
            return False
    return True


def _exact_rank(m: Matrix, point) -> int:
    if not m or not m[0]:
        return 0
    rows = [[exact_eval(entry, point) for entry in row] for row in m]
    return DomainMatrix(rows, (len(rows), len(rows[0])), QQ_I).rank()


def random_points_off_variety(gens: Sequence[MultiPoly], count: int, seed: int = 0, height: int = 3) -> List[tuple]:
    """
    Random rational points where some generator is nonzero.

    Raises:
        ValueError: every generator is zero, so no such point exists
    """
    if not any(gens):
        raise ValueError("all generators are zero; every point lies on the variety")
    rng = random.Random(seed)
    n = gens[0].ring.ngens
    points = []
    while len(points) < count:
        point = tuple(gaussian(f"{rng.randint(-height * 4, height * 4)}/{rng.randint(1, 4)}") for _ in range(n))
        if any(exact_eval(g, point) for g in gens):
            points.append(point)
    return points


def pointwise_exactness_check(
    c: FreeComplex,
    points: Optional[Sequence[Sequence]] = None,
    trials: int = 5,
    seed: int = 0,
) -> bool:
    """
    Exactness of the evaluated complex at points off Z.

    Checks rank f^1 = r_0, rank f^k + rank f^(k+1) = r_k for 0 < k < p and
    rank f^p = r_p, with exact Gaussian elimination over Q(i).

    Raises:
        PointOnVarietyError: a supplied point makes every generator vanish
    """
    gens = c.maps[0][0]
    if points is None:
        points = random_points_off_variety(gens, trials, seed)
    for point in points:
        if not any(exact_eval(g, point) for g in gens):
            raise PointOnVarietyError(f"point {tuple(str(x) for x in point)} lies on the zero set")
        ranks = [_exact_rank(f, point) for f in c.maps]
        if ranks[0] != c.ranks[0]:
            return False
        for k in range(1, c.length):
            if ranks[k - 1] + ranks[k] != c.ranks[k]:
                return False
        if ranks[-1] != c.ranks[-1]:
            return False
    return True


def cohen_macaulay_check(c: FreeComplex) -> bool:
    """Auslander-Buchsbaum: an m-primary ideal is CM iff its resolution has length nvars."""
    return c.length == c.nvars
