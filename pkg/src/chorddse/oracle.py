"""The analytic side: solve the Dyson-Schwinger equation by fixed-point
iteration on truncated series and compare with the chord expansion.

The equation is

    G(x, L) = 1 - sum_k x^k G(x, d/d(-rho))^(1 - s k) (e^(-L rho) - 1) F_k(rho) |_{rho=0}

with F_k(rho) = sum_i a[k,i] rho^(i-1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional

from .algebra import BiSeries, Poly, RhoSeries, Var, apply_derivative_operator, as_fraction, x_series
from .expansion import G_comb, WeightFn


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class Primitive:
    """F_k; ``values`` is None for symbolic coefficients a[k,i]."""

    k: int
    values: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self) -> None:
        if self.k < 1:
            raise SpecError("primitive loop order k must be positive")

    @property
    def symbolic(self) -> bool:
        return self.values is None

    def coefficient(self, i: int) -> Poly:
        if self.values is None:
            return Poly.var(self.k, i)
        if i >= len(self.values):
            raise SpecError(f"primitive k={self.k} has only {len(self.values)} coefficients, a[{self.k},{i}] needed")
        return Poly.const(self.values[i])


@dataclass(frozen=True)
class DseSpec:
    s: Fraction
    primitives: tuple[Primitive, ...]
    x_order: int
    l_order: int
    name: str = field(default="custom", compare=False)

    def __post_init__(self) -> None:
        if self.x_order < 0 or self.l_order < 0:
            raise SpecError("truncation orders must be non-negative")
        ks = [p.k for p in self.primitives]
        if len(set(ks)) != len(ks):
            raise SpecError("each loop order k may appear only once")

    @property
    def max_decoration(self) -> int:
        return max((p.k for p in self.primitives), default=0)

    def with_orders(self, x_order: int, l_order: int) -> DseSpec:
        return DseSpec(self.s, self.primitives, x_order, l_order, self.name)

    def substitution(self) -> dict[Var, Fraction] | None:
        """Values for a[k,i] on the chord side: numeric coefficients, and zero
        for loop orders below N that have no primitive."""
        given = {p.k: p for p in self.primitives}
        out: dict[Var, Fraction] = {}
        for k in range(1, self.max_decoration + 1):
            prim = given.get(k)
            for i in range(self.x_order + 1):
                if prim is None:
                    out[(k, i)] = Fraction(0)
                elif not prim.symbolic and i < len(prim.values):
                    out[(k, i)] = prim.values[i]
        return out or None

    def to_json(self) -> dict:
        return {
            "s": str(self.s),
            "primitives": [
                {"k": p.k, "coeffs": "symbolic" if p.symbolic else [str(v) for v in p.values]}
                for p in self.primitives
            ],
            "x_order": self.x_order,
            "l_order": self.l_order,
        }

    @classmethod
    def from_json(cls, data: dict | str, name: str = "custom") -> DseSpec:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            s = as_fraction(str(data["s"]))
            prims = []
            for entry in data.get("primitives", []):
                coeffs = entry.get("coeffs", "symbolic")
                if coeffs == "symbolic":
                    prims.append(Primitive(int(entry["k"])))
                else:
                    prims.append(Primitive(int(entry["k"]), tuple(as_fraction(str(c)) for c in coeffs)))
            X = int(data.get("x_order", 5))
            L = int(data.get("l_order", X))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"malformed DSE spec: {exc}") from exc
        return cls(s, tuple(sorted(prims, key=lambda p: p.k)), X, L, name)


def yukawa_bk(x_order: int = 5, l_order: Optional[int] = None) -> DseSpec:
    """s = 2 with F(rho) = 1/(rho (1 - rho)), so every a[1,i] = 1."""
    L = x_order if l_order is None else l_order
    ones = tuple(Fraction(1) for _ in range(x_order + 2))
    return DseSpec(Fraction(2), (Primitive(1, ones),), x_order, L, "yukawa-bk")


def symbolic_spec(s: Fraction | int | str, N: int, x_order: int, l_order: Optional[int] = None) -> DseSpec:
    L = x_order if l_order is None else l_order
    prims = tuple(Primitive(k) for k in range(1, N + 1))
    return DseSpec(as_fraction(s), prims, x_order, L, f"symbolic-s{s}-N{N}")


PRESETS = {"yukawa-bk": yukawa_bk}


def _driving_term(prim: Primitive, x_order: int, l_order: int) -> RhoSeries:
    """(e^{-L rho} - 1) F_k(rho) through rho^(x_order - k)."""
    need = x_order - prim.k
    F = RhoSeries.primitive([prim.coefficient(i) for i in range(need + 1)], x_order, l_order)
    E = RhoSeries.exp_minus_one(need + 1, x_order, l_order)
    return E * F


def solve_dse(spec: DseSpec, derivative_sign: int = -1, iterations: Optional[int] = None) -> BiSeries:
    """Fixed-point iteration from G = 1, truncated at (X, L).

    Internally L is carried to order max(X, L): higher powers of L in G feed
    lower ones through the derivative operator, so truncating early is wrong.
    """
    X = spec.x_order
    LI = max(X, spec.l_order)
    prims = [p for p in spec.primitives if p.k <= X]
    drives = {p.k: _driving_term(p, X, LI) for p in prims}
    G = BiSeries.one(X, LI)
    for _ in range(X if iterations is None else iterations):
        new = BiSeries.one(X, LI)
        for p in prims:
            k = p.k
            power = G.truncate(X - k, LI).power(1 - spec.s * k)
            val = apply_derivative_operator(power, drives[k], derivative_sign)
            new = new - BiSeries(X, LI, {(m + k, j): c for (m, j), c in val.coeffs.items()})
        G = new
    return G.truncate(X, spec.l_order)


def g_from_G(G: BiSeries, k: int) -> BiSeries:
    """g_k = (-1)^(k+1) k! [L^k] G, as an x-series."""
    if k < 1:
        raise ValueError("k must be positive")
    return G.l_coefficient(k).scale(Fraction((-1) ** (k + 1) * factorial(k)))


def g_dif_rge(k: int, g1: BiSeries, s: Fraction | int) -> BiSeries:
    """g_k from g_1 through g_k = g_1 (s x d/dx - 1) g_{k-1}."""
    if k < 1:
        raise ValueError("k must be positive")
    s = as_fraction(s)
    g = g1
    for _ in range(2, k + 1):
        g = g1 * (g.x_theta().scale(s) - g)
    return g


def gammas(G: BiSeries) -> dict[int, BiSeries]:
    """gamma_i(x) with G = 1 + sum_i L^i gamma_i."""
    return {i: G.l_coefficient(i) for i in range(1, G.l_order + 1)}


def G_from_rge(g1: BiSeries, s: Fraction | int, l_order: int) -> BiSeries:
    X = g1.x_order
    G = BiSeries.one(X, l_order)
    g = g1
    for k in range(1, l_order + 1):
        if k > 1:
            g = g1 * (g.x_theta().scale(as_fraction(s)) - g)
        c = Fraction((-1) ** (k + 1), factorial(k))
        G = G + BiSeries(X, l_order, {(m, k): p * c for (m, _), p in g.coeffs.items()})
    return G


Diff = list[tuple[int, int, Poly]]


def compare(lhs: BiSeries, rhs: BiSeries) -> Diff:
    """(m, j, lhs - rhs) for each unequal coefficient, sorted; empty when equal."""
    if (lhs.x_order, lhs.l_order) != (rhs.x_order, rhs.l_order):
        raise ValueError(
            f"truncation mismatch: ({lhs.x_order}, {lhs.l_order}) vs ({rhs.x_order}, {rhs.l_order})"
        )
    out = []
    for key in sorted(set(lhs.coeffs) | set(rhs.coeffs)):
        d = lhs.coefficient(*key) - rhs.coefficient(*key)
        if not d.is_zero():
            out.append((key[0], key[1], d))
    return out


def lowest_mismatch_order(diff: Diff) -> Optional[int]:
    return min((m for m, _, _ in diff), default=None)


def comb_side(spec: DseSpec, weight_fn: Optional[WeightFn] = None, threads: int | None = None) -> BiSeries:
    """G from the chord expansion with the configured coefficients substituted."""
    N = spec.max_decoration
    if N == 0:
        return BiSeries.one(spec.x_order, spec.l_order)
    G = G_comb(spec.x_order, spec.l_order, spec.s, N, weight_fn=weight_fn, threads=threads)
    sub = spec.substitution()
    return G.substitute(sub) if sub else G


def dif_side(spec: DseSpec, derivative_sign: int = -1) -> BiSeries:
    return solve_dse(spec, derivative_sign)


def numeric_g1(spec: DseSpec, G: BiSeries) -> list[Poly]:
    g1 = g_from_G(G, 1) if G.l_order >= 1 else x_series({}, G.x_order)
    return [g1.coefficient(m) for m in range(G.x_order + 1)]


__all__ = [
    "DseSpec",
    "Primitive",
    "SpecError",
    "PRESETS",
    "yukawa_bk",
    "symbolic_spec",
    "solve_dse",
    "g_from_G",
    "g_dif_rge",
    "gammas",
    "G_from_rge",
    "compare",
    "lowest_mismatch_order",
    "comb_side",
    "dif_side",
    "numeric_g1",
]
