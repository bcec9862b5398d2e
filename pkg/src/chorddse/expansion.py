"""The chord diagram side: norms, weights, monomials and the series g_k, G."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Optional

from .algebra import ZERO, BiSeries, Poly, Scalar, as_fraction, gen_binomial, x_series
from .diagram import ChordDiagram, Pair, compositions, enumerate_connected
from .parallel import ordered_map
from .tree import branch_left_vector


@dataclass(frozen=True)
class Shape:
    """Decoration-independent data of an undecorated connected diagram."""

    pairs: tuple[Pair, ...]
    terminals: tuple[int, ...]
    base: int
    branch_left: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.pairs)


@lru_cache(maxsize=None)
def shape_of(pairs: tuple[Pair, ...]) -> Shape:
    C = ChordDiagram(pairs, (1,) * len(pairs))
    t = C.terminal
    return Shape(pairs, t.ter, t.base, branch_left_vector(C))


@dataclass(frozen=True)
class ChordStats:
    diagram: ChordDiagram
    norm: int
    terminals: tuple[int, ...]
    base: int
    branch_left: tuple[int, ...]
    weight: Fraction
    weight_hat: Fraction
    ahat: Poly

    @property
    def base_decoration(self) -> int:
        return self.diagram.decorations[self.base - 1]

    @property
    def base_branch_left(self) -> int:
        return self.branch_left[self.base - 1]


def _ahat_from(shape: Shape, decorations: tuple[int, ...]) -> Poly:
    factors = []
    ter = shape.terminals
    for prev, t in zip(ter, ter[1:]):
        factors.append((decorations[t - 1], t - prev))
    terminal = set(ter)
    for k in range(1, shape.size + 1):
        if k not in terminal:
            factors.append((decorations[k - 1], 0))
    return Poly.monomial(factors)


def monomial_ahat(C: ChordDiagram) -> Poly:
    """Product of a[d_t, t - t_prev] over terminal chords after the base and
    a[d_k, 0] over non-terminal chords."""
    return _ahat_from(shape_of(C.pairs), C.decorations)


def _factor(d: int, nu: int, s: Fraction) -> Fraction:
    return gen_binomial(d * s + nu - 2, nu)


def weight(C: ChordDiagram, s: Scalar) -> Fraction:
    s = as_fraction(s)
    nu = shape_of(C.pairs).branch_left
    out = Fraction(1)
    for d, v in zip(C.decorations, nu):
        out *= _factor(d, v, s)
    return out


def weight_hat(C: ChordDiagram, s: Scalar) -> Fraction:
    s = as_fraction(s)
    sh = shape_of(C.pairs)
    out = Fraction(1)
    for k, (d, v) in enumerate(zip(C.decorations, sh.branch_left), start=1):
        if k != sh.base:
            out *= _factor(d, v, s)
    return out


def chord_stats(C: ChordDiagram, s: Scalar) -> ChordStats:
    s = as_fraction(s)
    sh = shape_of(C.pairs)
    w_hat = weight_hat(C, s)
    d_base = C.decorations[sh.base - 1]
    w = w_hat * _factor(d_base, sh.branch_left[sh.base - 1], s)
    return ChordStats(C, C.norm, sh.terminals, sh.base, sh.branch_left, w, w_hat, _ahat_from(sh, C.decorations))


WeightFn = Callable[[ChordStats], Fraction]


def _stats_for_shape(args: tuple[tuple[Pair, ...], int, int, Fraction]) -> list[ChordStats]:
    pairs, max_norm, max_dec, s = args
    n = len(pairs)
    out = []
    for total in range(n, max_norm + 1):
        for d in compositions(total, n, max_dec):
            out.append(chord_stats(ChordDiagram(pairs, d), s))
    return out


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple[tuple[Pair, ...], ...]:
    return tuple(C.pairs for C in enumerate_connected(n))


def all_stats(max_norm: int, s: Scalar, max_decoration: int, threads: int | None = None) -> list[ChordStats]:
    """Stats for every decorated diagram with norm <= max_norm, in a fixed order."""
    s = as_fraction(s)
    jobs = [(p, max_norm, max_decoration, s) for n in range(1, max_norm + 1) for p in _shapes(n)]
    out: list[ChordStats] = []
    for chunk in ordered_map(_stats_for_shape, jobs, threads):
        out.extend(chunk)
    return out


def g_comb_all(
    X: int,
    s: Scalar,
    N: int,
    k_max: Optional[int] = None,
    weight_fn: Optional[WeightFn] = None,
    threads: int | None = None,
    stats: Optional[Iterable[ChordStats]] = None,
) -> dict[int, BiSeries]:
    """g_k for k = 1..k_max (default X) as x-series to order X."""
    k_max = X if k_max is None else k_max
    # grouped by (norm, base, base decoration) so each g_k reuses one pass
    groups: dict[tuple[int, int, int], Poly] = {}
    for st in stats if stats is not None else all_stats(X, s, N, threads):
        if st.norm > X or max(st.diagram.decorations) > N:
            continue
        w = weight_fn(st) if weight_fn else st.weight
        key = (st.norm, st.base, st.base_decoration)
        groups[key] = groups.get(key, ZERO) + st.ahat * w
    out = {}
    for k in range(1, k_max + 1):
        coeffs: dict[int, Poly] = {}
        for (norm, b, d), p in sorted(groups.items()):
            if b >= k:
                coeffs[norm] = coeffs.get(norm, ZERO) + p * Poly.var(d, b - k)
        out[k] = x_series(coeffs, X)
    return out


def g_comb(k: int, X: int, s: Scalar, N: int, threads: int | None = None) -> BiSeries:
    if k < 1:
        raise ValueError("k must be positive")
    return g_comb_all(X, s, N, k_max=k, threads=threads)[k]


def G_from_g(gs: dict[int, BiSeries], X: int, l_order: int) -> BiSeries:
    """1 - sum_k (-L)^k/k! g_k."""
    G = BiSeries.one(X, l_order)
    for k, g in gs.items():
        if k > l_order:
            continue
        c = -Fraction((-1) ** k, factorial(k))
        G = G + BiSeries(X, l_order, {(m, k): p * c for (m, _), p in g.coeffs.items()})
    return G


def G_comb(
    X: int,
    l_order: int,
    s: Scalar,
    N: int,
    weight_fn: Optional[WeightFn] = None,
    threads: int | None = None,
) -> BiSeries:
    gs = g_comb_all(X, s, N, k_max=min(X, l_order), weight_fn=weight_fn, threads=threads)
    return G_from_g(gs, X, l_order)
