"""Satake diagrams, Cartan data and root-lattice helpers.

Conventions:
    * vertices are numbered from 1 exactly as in the marked diagram table;
    * ``a(i, j) = <h_i, alpha_j>``, so type B_n has a(n, n-1) = -2 and the last
      vertex short, type C_n has a(n-1, n) = -2 and the last vertex long;
    * roots are integer tuples of coordinates in the simple roots.

The whole table of marked Satake diagrams ships as data. τ on black vertices is
derived from -w_• and every entry is validated when it is built.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property

from iquantum.utils.shared import ConfigError

logger = logging.getLogger(__name__)

CartanMatrix = tuple[tuple[int, ...], ...]
Root = tuple[int, ...]
TWeight = dict[str, Fraction]

# Error messages
ERR_UNKNOWN_TYPE = "Unknown Cartan type {}{}"
ERR_UNKNOWN_FAMILY = "Unknown Satake family {!r}; known: {}"
ERR_BAD_RANK = "Invalid rank parameters for {}: {}"
ERR_INVALID_DATUM = "Satake datum {} is invalid: {}"

_E_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


@cache
def cartan_matrix(kind: str, n: int) -> CartanMatrix:
    """Cartan matrix of a simple Lie algebra.

    Args:
        kind: One of "A".."G"
        n: Rank

    Returns:
        CartanMatrix: Rows indexed by i, columns by j, entries <h_i, alpha_j>
    """
    valid = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }
    if not valid.get(kind, False):
        raise ConfigError(ERR_UNKNOWN_TYPE.format(kind, n))
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i: int, j: int, aij: int = -1, aji: int = -1) -> None:
        a[i - 1][j - 1] = aij
        a[j - 1][i - 1] = aji

    if kind in "ABC":
        for i in range(1, n):
            link(i, i + 1)
        if kind == "B":
            link(n - 1, n, -1, -2)
        elif kind == "C":
            link(n - 1, n, -2, -1)
    elif kind == "D":
        for i in range(1, n - 1):
            link(i, i + 1)
        link(n - 2, n)
    elif kind == "E":
        for i, j in _E_EDGES:
            if max(i, j) <= n:
                link(i, j)
    elif kind == "F":
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
    else:
        link(1, 2, -3, -1)
    return tuple(tuple(row) for row in a)


def block_cartan(*blocks: CartanMatrix) -> CartanMatrix:
    """Block-diagonal Cartan matrix of a semisimple algebra.

    Args:
        *blocks: Cartan matrices of the simple factors

    Returns:
        CartanMatrix: The direct sum
    """
    n = sum(len(b) for b in blocks)
    rows: list[list[int]] = [[0] * n for _ in range(n)]
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            for j, value in enumerate(row):
                rows[offset + i][offset + j] = value
        offset += len(block)
    return tuple(tuple(r) for r in rows)


def _components(cartan: CartanMatrix) -> list[list[int]]:
    n = len(cartan)
    seen: set[int] = set()
    components = []
    for start in range(n):
        if start in seen:
            continue
        stack, component = [start], []
        seen.add(start)
        while stack:
            i = stack.pop()
            component.append(i)
            for j in range(n):
                if j not in seen and cartan[i][j]:
                    seen.add(j)
                    stack.append(j)
        components.append(sorted(component))
    return components


@cache
def symmetrizer(cartan: CartanMatrix) -> tuple[int, ...]:
    """The positive integers d_i with d_i a_ij = d_j a_ji, coprime on each component.

    Args:
        cartan: A symmetrizable Cartan matrix

    Returns:
        tuple[int, ...]: The symmetrizer
    """
    d: dict[int, Fraction] = {}
    for component in _components(cartan):
        d[component[0]] = Fraction(1)
        queue = [component[0]]
        while queue:
            i = queue.pop()
            for j in component:
                if j not in d and cartan[i][j]:
                    d[j] = d[i] * cartan[i][j] / cartan[j][i]
                    queue.append(j)
        scale = math.lcm(*(d[i].denominator for i in component))
        ints = [int(d[i] * scale) for i in component]
        divisor = math.gcd(*ints)
        for i, value in zip(component, ints, strict=True):
            d[i] = Fraction(value // divisor)
    return tuple(int(d[i]) for i in range(len(cartan)))


def pairing(cartan: CartanMatrix, i: int, alpha: Sequence[int | Fraction]) -> int | Fraction:
    """<h_i, alpha> for a root-coordinate vector (i is 0-based)."""
    return sum(cartan[i][j] * alpha[j] for j in range(len(cartan)))


def inner(cartan: CartanMatrix, alpha: Sequence[int | Fraction], beta: Sequence[int | Fraction]) -> int | Fraction:
    """Symmetric form (alpha, beta) with (alpha_i, alpha_j) = d_i a_ij."""
    d = symmetrizer(cartan)
    n = len(cartan)
    return sum(alpha[i] * beta[j] * d[i] * cartan[i][j] for i in range(n) for j in range(n))


def reflect(cartan: CartanMatrix, i: int, alpha: Sequence[int]) -> Root:
    """Simple reflection s_i(alpha) = alpha - <h_i, alpha> alpha_i (i is 0-based)."""
    shift = pairing(cartan, i, alpha)
    return tuple(int(a - shift) if k == i else int(a) for k, a in enumerate(alpha))


@cache
def positive_roots(cartan: CartanMatrix) -> tuple[Root, ...]:
    """Positive roots by root strings, in order of height.

    Args:
        cartan: Cartan matrix

    Returns:
        tuple[Root, ...]: Positive roots in simple-root coordinates
    """
    n = len(cartan)
    roots: list[Root] = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    known = set(roots)
    position = 0
    while position < len(roots):
        beta = roots[position]
        position += 1
        for i in range(n):
            depth = 0
            lower = list(beta)
            while True:
                lower[i] -= 1
                if tuple(lower) not in known:
                    break
                depth += 1
            if depth - pairing(cartan, i, beta) > 0:
                raised = tuple(b + (k == i) for k, b in enumerate(beta))
                if raised not in known:
                    known.add(raised)
                    roots.append(raised)
    return tuple(roots)


def longest_word(cartan: CartanMatrix, subset: Iterable[int]) -> tuple[int, ...]:
    """Reduced word of the longest element of the parabolic subgroup on ``subset``.

    Reflections are applied to -rho of the subdiagram until it is dominant.

    Args:
        cartan: Cartan matrix
        subset: 0-based vertex indices

    Returns:
        tuple[int, ...]: 0-based indices, leftmost factor first
    """
    vertices = sorted(subset)
    weight = {i: -1 for i in vertices}
    word: list[int] = []
    while any(v < 0 for v in weight.values()):
        p = next(i for i in vertices if weight[i] < 0)
        value = weight[p]
        for j in vertices:
            weight[j] -= value * cartan[j][p]
        word.insert(0, p)
    return tuple(word)


def weyl_dimension(cartan: CartanMatrix, labels: Sequence[int]) -> int:
    """Dimension of the irreducible module with Dynkin labels <h_i, lambda>.

    Args:
        cartan: Cartan matrix of the (semisimple) algebra
        labels: Dominant integral labels

    Returns:
        int: Product over positive roots of (lambda + rho, beta) / (rho, beta)
    """
    d = symmetrizer(cartan)
    result = Fraction(1)
    for beta in positive_roots(cartan):
        numerator = sum(b * d[j] * (labels[j] + 1) for j, b in enumerate(beta))
        denominator = sum(b * d[j] for j, b in enumerate(beta))
        result *= Fraction(numerator, denominator)
    return int(result)


def character(cartan: CartanMatrix, labels: tuple[int, ...]) -> Counter[tuple[int, ...]]:
    """Weight multiplicities of the irreducible module with dominant labels (Freudenthal).

    Weights are written lambda - sum n_j alpha_j and processed by depth, so every
    higher weight is known when a lower one is computed.

    Args:
        cartan: Cartan matrix of the (semisimple) algebra
        labels: Dominant integral labels of the highest weight

    Returns:
        Counter[tuple[int, ...]]: Dynkin labels of each weight -> multiplicity
    """
    n = len(cartan)
    d = symmetrizer(cartan)
    roots = positive_roots(cartan)

    def pair(offset: Sequence[int], beta: Sequence[int]) -> int:
        # (lambda - sum n_j alpha_j, beta)
        value = sum(b * d[j] * labels[j] for j, b in enumerate(beta))
        return value - sum(offset[i] * beta[j] * d[i] * cartan[i][j] for i in range(n) for j in range(n))

    def gap(offset: Sequence[int]) -> int:
        # (lambda+rho, lambda+rho) - (mu+rho, mu+rho) for mu = lambda - beta
        linear = sum(c * d[j] * (labels[j] + 1) for j, c in enumerate(offset))
        square = sum(offset[i] * offset[j] * d[i] * cartan[i][j] for i in range(n) for j in range(n))
        return 2 * linear - square

    mult: dict[tuple[int, ...], Fraction] = {(0,) * n: Fraction(1)}
    layer = [(0,) * n]
    while layer:
        candidates = sorted({tuple(c + (k == j) for k, c in enumerate(o)) for o in layer for j in range(n)})
        layer = []
        for offset in candidates:
            total = Fraction(0)
            for beta in roots:
                k = 1
                while True:
                    upper = tuple(o - k * b for o, b in zip(offset, beta, strict=True))
                    if min(upper) < 0:
                        break
                    if upper in mult:
                        total += mult[upper] * pair(upper, beta)
                    k += 1
            if total:
                mult[offset] = 2 * total / gap(offset)
                layer.append(offset)
    result: Counter[tuple[int, ...]] = Counter()
    for offset, m in mult.items():
        weight = tuple(labels[i] - sum(cartan[i][j] * offset[j] for j in range(n)) for i in range(n))
        result[weight] = int(m)
    return result


def is_dominant(labels: Sequence[int | Fraction]) -> bool:
    """Whether all labels are non-negative integers."""
    return all(Fraction(v).denominator == 1 and v >= 0 for v in labels)


@dataclass(frozen=True)
class SatakeDatum:
    """Satake diagram (I, I_•, τ) with the marked vertices I_⊗ and Cartan data."""

    family: str
    params: tuple[tuple[str, int], ...]
    kind: str
    rank: int
    black: frozenset[int]
    tau_map: tuple[int, ...]
    marked: frozenset[int]

    @cached_property
    def cartan(self) -> CartanMatrix:
        """CartanMatrix: The Cartan matrix of the ambient algebra."""
        return cartan_matrix(self.kind, self.rank)

    @cached_property
    def d(self) -> tuple[int, ...]:
        """tuple[int, ...]: Symmetrizer, indexed from 0."""
        return symmetrizer(self.cartan)

    @property
    def vertices(self) -> tuple[int, ...]:
        """tuple[int, ...]: I = (1, ..., rank)."""
        return tuple(range(1, self.rank + 1))

    @property
    def white(self) -> tuple[int, ...]:
        """tuple[int, ...]: I_∘ = I minus I_•."""
        return tuple(i for i in self.vertices if i not in self.black)

    @property
    def is_quasi_split(self) -> bool:
        """bool: Whether I_• is empty."""
        return not self.black

    def a(self, i: int, j: int) -> int:
        """Cartan entry a_{i,j} for 1-based labels."""
        return self.cartan[i - 1][j - 1]

    def di(self, i: int) -> int:
        """d_i for a 1-based label, so q_i = q^{d_i}."""
        return self.d[i - 1]

    def tau(self, i: int) -> int:
        """τ(i)."""
        return self.tau_map[i - 1]

    def simple_root(self, i: int) -> Root:
        """alpha_i in root coordinates."""
        return tuple(int(k == i - 1) for k in range(self.rank))

    def h(self, i: int, alpha: Sequence[int | Fraction]) -> int | Fraction:
        """<h_i, alpha>."""
        return pairing(self.cartan, i - 1, alpha)

    def inner(self, alpha: Sequence[int | Fraction], beta: Sequence[int | Fraction]) -> int | Fraction:
        """(alpha, beta)."""
        return inner(self.cartan, alpha, beta)

    def reflect(self, i: int, alpha: Sequence[int]) -> Root:
        """s_i(alpha) for a 1-based label."""
        return reflect(self.cartan, i - 1, alpha)

    @cached_property
    def w_bullet(self) -> tuple[int, ...]:
        """tuple[int, ...]: Reduced word (1-based, leftmost first) of the longest element w_•."""
        return tuple(i + 1 for i in longest_word(self.cartan, (b - 1 for b in self.black)))

    def apply_w_bullet(self, alpha: Sequence[int]) -> Root:
        """w_•(alpha)."""
        result = tuple(alpha)
        for i in reversed(self.w_bullet):
            result = self.reflect(i, result)
        return result

    def h_w_tau(self, i: int) -> int:
        """<h_i, w_•(alpha_{τ(i)})>."""
        return int(self.h(i, self.apply_w_bullet(self.simple_root(self.tau(i)))))

    @cached_property
    def rho_bullet(self) -> tuple[Fraction, ...]:
        """tuple[Fraction, ...]: rho_• = half the sum of the positive roots of I_•."""
        black = sorted(self.black)
        sub = tuple(tuple(self.cartan[i - 1][j - 1] for j in black) for i in black)
        total = [Fraction(0)] * self.rank
        if black:
            for beta in positive_roots(sub):
                for k, b in zip(black, beta, strict=True):
                    total[k - 1] += Fraction(b, 2)
        return tuple(total)

    def h_rho_bullet(self, i: int) -> Fraction:
        """<h_i, rho_•>."""
        return Fraction(self.h(i, self.rho_bullet))

    def describe(self) -> dict[str, object]:
        """Explicit (I, I_•, τ, I_⊗) for reports."""
        return {
            "family": self.family,
            "params": dict(self.params),
            "type": f"{self.kind}{self.rank}",
            "I": list(self.vertices),
            "I_bullet": sorted(self.black),
            "tau": {i: self.tau(i) for i in self.vertices if self.tau(i) != i},
            "I_otimes": sorted(self.marked),
        }


def validate_datum(datum: SatakeDatum) -> list[str]:
    """Check the structural invariants of a Satake datum.

    Args:
        datum: Datum to check

    Returns:
        list[str]: Human-readable problems, empty when valid
    """
    problems: list[str] = []
    vertices = datum.vertices
    for i in vertices:
        t = datum.tau(i)
        if datum.tau(t) != i:
            problems.append(f"tau is not an involution at {i}")
        if (i in datum.black) != (t in datum.black):
            problems.append(f"tau does not preserve I_bullet at {i}")
        for j in vertices:
            if datum.a(t, datum.tau(j)) != datum.a(i, j):
                problems.append(f"tau does not preserve a({i},{j})")
            if datum.di(i) * datum.a(i, j) != datum.di(j) * datum.a(j, i):
                problems.append(f"symmetrizer fails at ({i},{j})")
    for i in datum.marked:
        if i in datum.black or datum.tau(i) != i:
            problems.append(f"marked vertex {i} is not a tau-fixed white vertex")
        for j in datum.marked:
            if i != j and datum.a(i, j):
                problems.append(f"marked vertices {i},{j} are connected")
        for j in datum.black:
            if datum.a(j, i):
                problems.append(f"marked vertex {i} is connected to black vertex {j}")
    for i in datum.black:
        image = datum.apply_w_bullet(datum.simple_root(i))
        if tuple(-c for c in image) != datum.simple_root(datum.tau(i)):
            problems.append(f"-w_bullet(alpha_{i}) != alpha_tau({i})")
    return problems


_Builder = Callable[[int, int], tuple[str, int, Iterable[int], Iterable[int], Iterable[tuple[int, int]]]]


def _odd(upto: int) -> list[int]:
    return list(range(1, upto + 1, 2))


def _even(upto: int) -> list[int]:
    return list(range(2, upto + 1, 2))


def _span(first: int, last: int) -> list[int]:
    return list(range(first, last + 1))


def _aiii(r: int, s: int) -> tuple[str, int, list[int], list[int], list[tuple[int, int]]]:
    n = r + s - 1
    return "A", n, _span(r + 1, s - 1), [], [(i, n + 1 - i) for i in range(1, r + 1) if i < n + 1 - i]


# family -> (builder(r, s), predicate on (r, s), uses s)
_FAMILIES: dict[str, tuple[_Builder, Callable[[int, int], bool], bool]] = {
    "AI-1": (lambda r, s: ("A", 2 * r, [], _odd(2 * r - 1), []), lambda r, s: r >= 1, False),
    "AI-2": (lambda r, s: ("A", 2 * r - 1, [], _odd(2 * r - 1), []), lambda r, s: r >= 1, False),
    "AII": (lambda r, s: ("A", 2 * r - 1, _odd(2 * r - 1), [], []), lambda r, s: r >= 2, False),
    "AIII": (_aiii, lambda r, s: 1 <= r < s, True),
    "AIV": (
        lambda r, s: ("A", 2 * r - 1, [], [r], [(i, 2 * r - i) for i in range(1, r)]),
        lambda r, s: r >= 2,
        False,
    ),
    "BI-1": (lambda r, s: ("B", 2 * r, [], _odd(2 * r - 1), []), lambda r, s: r >= 1, False),
    "BI-2": (lambda r, s: ("B", 2 * r - 1, [], _odd(2 * r - 1), []), lambda r, s: r >= 2, False),
    "BII-1": (
        lambda r, s: ("B", 2 * r + s, _span(2 * r + 1, 2 * r + s), _odd(2 * r - 1), []),
        lambda r, s: r >= 1 and s >= 1,
        True,
    ),
    "BII-2": (
        lambda r, s: ("B", 2 * r + s, _span(2 * r, 2 * r + s), _odd(2 * r - 3), []),
        lambda r, s: r >= 1 and s >= 0 and 2 * r + s >= 2,
        True,
    ),
    "CI": (lambda r, s: ("C", r, [], [r], []), lambda r, s: r >= 2, False),
    "CII": (
        lambda r, s: ("C", 2 * r + s, _odd(2 * r - 1) + _span(2 * r + 1, 2 * r + s), [], []),
        lambda r, s: r >= 1 and s >= 0 and 2 * r + s >= 2,
        True,
    ),
    "DI-1": (lambda r, s: ("D", 2 * r + 1, [], [*_even(2 * r), 2 * r + 1], []), lambda r, s: r >= 1, False),
    "DI-2": (lambda r, s: ("D", 2 * r, [], [*_odd(2 * r - 1), 2 * r], []), lambda r, s: r >= 2, False),
    "DI-3": (
        lambda r, s: ("D", 2 * r + s, _span(2 * r, 2 * r + s), _even(2 * r - 2), []),
        lambda r, s: r >= 1 and s >= 1 and 2 * r + s >= 3,
        True,
    ),
    "DI-4": (
        lambda r, s: ("D", 2 * r + s, _span(2 * r + 1, 2 * r + s), _odd(2 * r - 1), []),
        lambda r, s: r >= 1 and s >= 2,
        True,
    ),
    "DII-1": (lambda r, s: ("D", 2 * r, _odd(2 * r - 1), [2 * r], []), lambda r, s: r >= 2, False),
    "DII-2": (
        lambda r, s: ("D", 2 * r - 1, _odd(2 * r - 3), [], [(2 * r - 2, 2 * r - 1)]),
        lambda r, s: r >= 2,
        False,
    ),
    "DIII-1": (lambda r, s: ("D", 2 * r, [], _even(2 * r - 2), [(2 * r - 1, 2 * r)]), lambda r, s: r >= 2, False),
    "DIII-2": (
        lambda r, s: ("D", 2 * r - 1, [], _odd(2 * r - 3), [(2 * r - 2, 2 * r - 1)]),
        lambda r, s: r >= 2,
        False,
    ),
    "EI": (lambda r, s: ("E", 6, [], [2, 3, 5], []), lambda r, s: True, False),
    "EII": (lambda r, s: ("E", 6, [], [4], [(1, 6), (3, 5)]), lambda r, s: True, False),
    # the table prints I_otimes = {4} here, but 4 is black; no white tau-fixed vertex qualifies
    "EIII": (lambda r, s: ("E", 6, [3, 4, 5], [], [(1, 6)]), lambda r, s: True, False),
    "EIV": (lambda r, s: ("E", 6, [2, 3, 4, 5], [], []), lambda r, s: True, False),
    "EV": (lambda r, s: ("E", 7, [], [2, 3, 5, 7], []), lambda r, s: True, False),
    "EVI": (lambda r, s: ("E", 7, [2, 5, 7], [3], []), lambda r, s: True, False),
    "EVII": (lambda r, s: ("E", 7, [2, 3, 4, 5], [7], []), lambda r, s: True, False),
    "EVIII": (lambda r, s: ("E", 8, [], [2, 3, 5, 7], []), lambda r, s: True, False),
    "EIX": (lambda r, s: ("E", 8, [2, 3, 4, 5], [7], []), lambda r, s: True, False),
    "FI": (lambda r, s: ("F", 4, [], [2], []), lambda r, s: True, False),
    "FII": (lambda r, s: ("F", 4, [1, 2, 3], [], []), lambda r, s: True, False),
    "G": (lambda r, s: ("G", 2, [], [2], []), lambda r, s: True, False),
}

FAMILIES: tuple[str, ...] = tuple(_FAMILIES)


def family_uses_s(family: str) -> bool:
    """Whether the family takes a second rank parameter s."""
    if family not in _FAMILIES:
        raise ConfigError(ERR_UNKNOWN_FAMILY.format(family, ", ".join(FAMILIES)))
    return _FAMILIES[family][2]


@cache
def satake(family: str, r: int = 1, s: int | None = None) -> SatakeDatum:
    """Build and validate an entry of the marked Satake diagram table.

    Args:
        family: Family tag such as "AI-1", "AIII", "DIII-2" or "EII"
        r: First rank parameter (ignored by exceptional families)
        s: Second rank parameter for AIII, BII-*, CII, DI-3, DI-4

    Returns:
        SatakeDatum: The validated datum
    """
    if family not in _FAMILIES:
        raise ConfigError(ERR_UNKNOWN_FAMILY.format(family, ", ".join(FAMILIES)))
    builder, allowed, uses_s = _FAMILIES[family]
    s_value = (s if s is not None else 0) if uses_s else 0
    if not allowed(r, s_value):
        raise ConfigError(ERR_BAD_RANK.format(family, {"r": r, "s": s}))
    kind, rank, black, marked, swaps = builder(r, s_value)
    if rank < 1:
        raise ConfigError(ERR_BAD_RANK.format(family, {"r": r, "s": s}))
    try:
        cartan = cartan_matrix(kind, rank)
    except ConfigError as e:
        raise ConfigError(ERR_BAD_RANK.format(family, {"r": r, "s": s})) from e

    tau = list(range(1, rank + 1))
    for i, j in swaps:
        tau[i - 1], tau[j - 1] = j, i
    black_set = frozenset(black)
    word = [i + 1 for i in longest_word(cartan, (b - 1 for b in black_set))]
    for i in black_set:
        image: Root = tuple(int(k == i - 1) for k in range(rank))
        for w in reversed(word):
            image = reflect(cartan, w - 1, image)
        tau[i - 1] = next(k + 1 for k, c in enumerate(image) if c)

    params = (("r", r), ("s", s_value)) if uses_s else (("r", r),)
    if kind in "EFG":
        params = ()
    datum = SatakeDatum(family, params, kind, rank, black_set, tuple(tau), frozenset(marked))
    problems = validate_datum(datum)
    if problems:
        raise ConfigError(ERR_INVALID_DATUM.format(family, "; ".join(problems)))
    return datum


def table(max_r: int = 3, max_s: int = 2) -> list[SatakeDatum]:
    """Every table entry within the given rank bounds.

    Args:
        max_r: Largest r to enumerate
        max_s: Largest s to enumerate for two-parameter families

    Returns:
        list[SatakeDatum]: Valid data, in table order
    """
    data: list[SatakeDatum] = []
    for family, (_, allowed, uses_s) in _FAMILIES.items():
        if family[0] in "EFG":
            data.append(satake(family))
            continue
        for r in range(1, max_r + 1):
            s_range = range(max_r + max_s + 1) if uses_s else [0]
            for s_value in s_range:
                if allowed(r, s_value):
                    try:
                        data.append(satake(family, r, s_value if uses_s else None))
                    except ConfigError:
                        logger.debug("Skipping %s r=%d s=%d", family, r, s_value)
    return data


@dataclass(frozen=True)
class ThetaLattice:
    """Q^θ together with the (𝔱')* bookkeeping of a Satake datum.

    Attributes:
        basis: Spanning set of Q^θ in root coordinates, duplicates removed
        coroots: (name, coroot coefficients over h_1..h_n) for the part of 𝔱'
            coming from 𝔥^θ: h_i - h_{τ(i)} on I_∘ and h_i on I_•, nonzero only
        marked: The vertices j ∈ I_⊗ carrying the functionals b^j
        rho_bullet: rho_• in root coordinates
    """

    basis: tuple[Root, ...]
    coroots: tuple[tuple[str, tuple[int, ...]], ...]
    marked: tuple[int, ...]
    rho_bullet: tuple[Fraction, ...]
    cartan: CartanMatrix

    def beta(self, i: int) -> TWeight:
        """β_i: alpha_i restricted to 𝔥^θ, with <b_j, β_i> = 0.

        Args:
            i: Vertex label

        Returns:
            TWeight: Component name -> value
        """
        weight: TWeight = {}
        for name, coroot in self.coroots:
            weight[name] = Fraction(sum(c * self.cartan[k][i - 1] for k, c in enumerate(coroot)))
        for j in self.marked:
            weight[f"b{j}"] = Fraction(0)
        return weight

    def b_dual(self, j: int) -> TWeight:
        """b^j with <b_i, b^j> = δ_ij and zero on 𝔥^θ."""
        weight: TWeight = {name: Fraction(0) for name, _ in self.coroots}
        for i in self.marked:
            weight[f"b{i}"] = Fraction(int(i == j))
        return weight


def combine(*terms: tuple[int | Fraction, TWeight]) -> TWeight:
    """Linear combination of (𝔱')*-weights.

    Args:
        *terms: (coefficient, weight) pairs

    Returns:
        TWeight: Sum of coefficient * weight
    """
    result: TWeight = {}
    for coeff, weight in terms:
        for name, value in weight.items():
            result[name] = result.get(name, Fraction(0)) + Fraction(coeff) * value
    return result


def theta_lattice(datum: SatakeDatum) -> ThetaLattice:
    """Q^θ basis, β_i data, b^j functionals and rho_• of a datum.

    Args:
        datum: Valid Satake datum

    Returns:
        ThetaLattice: The lattice data
    """
    basis: list[Root] = []
    coroots: list[tuple[str, tuple[int, ...]]] = []
    for i in datum.vertices:
        alpha = datum.simple_root(i)
        if i in datum.black:
            vector, coroot = alpha, alpha
        else:
            t = datum.tau(i)
            vector = tuple(a - b for a, b in zip(alpha, datum.simple_root(t), strict=True))
            coroot = vector
        if any(vector) and vector not in basis and tuple(-v for v in vector) not in basis:
            basis.append(vector)
        if i not in datum.marked and any(coroot):
            coroots.append((f"h{i}", coroot))
    return ThetaLattice(
        basis=tuple(basis),
        coroots=tuple(coroots),
        marked=tuple(sorted(datum.marked)),
        rho_bullet=datum.rho_bullet,
        cartan=datum.cartan,
    )
