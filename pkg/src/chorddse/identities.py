"""Registry of the combinatorial identities behind the chord expansion.

Each check instantiates one identity on every decorated diagram (or pair of
diagrams) within a norm bound and compares both sides exactly.  Sums are
assembled from grouped tables of weighted monomials, so one enumeration
serves all instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Optional

from .algebra import ZERO, BiSeries, Poly, as_fraction, gen_binomial, x_series
from .compose import insert, root_share_decompose
from .diagram import ChordDiagram
from .expansion import ChordStats, all_stats, chord_stats, g_comb_all, weight
from .tree import diamond_split, threeway_cases


@dataclass
class Report:
    identity: str
    bound: int
    s: Fraction
    instances: int = 0
    holds: bool = True
    counterexample: Optional[str] = None

    def check(self, ok: bool, describe: Callable[[], str]) -> None:
        self.instances += 1
        if not ok and self.holds:
            self.holds = False
            self.counterexample = describe()

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "bound": self.bound,
            "s": str(self.s),
            "instances": self.instances,
            "holds": self.holds,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class Context:
    """Shared data for one sweep: all decorated diagrams with norm <= bound."""

    bound: int
    s: Fraction
    max_decoration: int
    threads: Optional[int] = None
    _stats: Optional[list[ChordStats]] = field(default=None, repr=False)
    _gs: Optional[dict[int, BiSeries]] = field(default=None, repr=False)

    @property
    def stats(self) -> list[ChordStats]:
        if self._stats is None:
            self._stats = all_stats(self.bound, self.s, self.max_decoration, self.threads)
        return self._stats

    @property
    def gs(self) -> dict[int, BiSeries]:
        """g_k for k = 1..bound as x-series to order bound."""
        if self._gs is None:
            self._gs = g_comb_all(self.bound, self.s, self.max_decoration, stats=self.stats)
        return self._gs

    def stats_of(self, C: ChordDiagram) -> ChordStats:
        return chord_stats(C, self.s)

    def g_coeff(self, l: int, k: int) -> Poly:
        """[x^k] g_l."""
        if l > self.bound:
            return ZERO
        return self.gs[l].coefficient(k)

    def gamma_series(self, order: int) -> BiSeries:
        """sum_l g_l t^l / l! with t stored in the second variable."""
        coeffs = {}
        for l, g in self.gs.items():
            if l <= order:
                for (m, _), p in g.coeffs.items():
                    if m <= order:
                        coeffs[(m, l)] = p * Fraction(1, factorial(l))
        return BiSeries(order, order, coeffs)


def _hat_table(ctx: Context, key: Callable[[ChordStats], tuple]) -> dict[tuple, Poly]:
    table: dict[tuple, Poly] = {}
    for st in ctx.stats:
        k = key(st)
        table[k] = table.get(k, ZERO) + st.ahat * st.weight_hat
    return table


def _pair_stats(ctx: Context) -> list[tuple[ChordStats, ChordStats]]:
    return [
        (a, b)
        for a in ctx.stats
        for b in ctx.stats
        if a.norm + b.norm <= ctx.bound
    ]


# -- individual identities -----------------------------------------------------


def check_rge_comb(ctx: Context, rep: Report) -> None:
    g1 = ctx.gs[1]
    for k in range(2, ctx.bound + 1):
        prev = ctx.gs[k - 1]
        rhs = g1 * (prev.x_theta().scale(ctx.s) - prev)
        rep.check(ctx.gs[k] == rhs, lambda: f"g_{k} differs from g_1 (s x d/dx - 1) g_{k - 1}")


def check_rsd_monomial(ctx: Context, rep: Report) -> None:
    for st in ctx.stats:
        C = st.diagram
        if C.size < 2:
            continue
        C1, C2, _ = root_share_decompose(C)
        s1, s2 = ctx.stats_of(C1), ctx.stats_of(C2)
        rep.check(st.base == s2.base + 1, lambda: f"{C}: b(C) != b(C2) + 1")
        for l in range(1, st.base + 1):
            lhs = st.ahat * Poly.var(st.base_decoration, st.base - l)
            rhs = (
                s1.ahat
                * Poly.var(s1.base_decoration, s1.base - 1)
                * s2.ahat
                * Poly.var(s2.base_decoration, s2.base - l + 1)
            )
            rep.check(lhs == rhs, lambda: f"{C} at l={l}: {lhs} != {rhs}")


def check_weight_recurrence(ctx: Context, rep: Report) -> None:
    s = ctx.s
    for a, b in _pair_stats(ctx):
        total = sum(
            (weight(insert(a.diagram, b.diagram, k), s) for k in range(1, 2 * b.diagram.size)),
            Fraction(0),
        )
        expect = a.weight * b.weight * (s * b.norm - 1)
        rep.check(total == expect, lambda: f"{a.diagram} into {b.diagram}: {total} != {expect}")


def check_diamond_monomial(ctx: Context, rep: Report) -> None:
    for st in ctx.stats:
        C = st.diagram
        if C.size < 2:
            continue
        D1, D2 = diamond_split(C)
        s1, s2 = ctx.stats_of(D1), ctx.stats_of(D2)
        lhs = st.ahat * st.weight_hat
        rhs = (
            s1.ahat
            * s2.ahat
            * (s1.weight * s2.weight_hat)
            * Poly.var(s1.base_decoration, s1.base + s2.base - st.base)
        )
        rep.check(lhs == rhs, lambda: f"{C}: {lhs} != {rhs}")


def check_decoration_bijection(ctx: Context, rep: Report) -> None:
    table = _hat_table(ctx, lambda st: (st.norm - st.base_decoration, st.base, st.base_branch_left, st.base_decoration))
    for (i, b, n, k), p in sorted(table.items()):
        if k == 1:
            continue
        ref = table.get((i, b, n, 1), ZERO)
        rep.check(p == ref, lambda: f"i={i}, b={b}, nu={n}, d={k}: {p} != {ref}")
    for (i, b, n, k), p in sorted(table.items()):
        if k == 1:
            for d in range(2, ctx.max_decoration + 1):
                if i + d <= ctx.bound:
                    other = table.get((i, b, n, d), ZERO)
                    rep.check(p == other, lambda: f"i={i}, b={b}, nu={n}: no partner with d={d}")


def _diamond_rhs(ctx: Context, i: int, j: int, right: Callable[[int, int], Poly]) -> Poly:
    total = ZERO
    for k in range(1, i + 1):
        for l in range(1, j + 1):
            g = ctx.g_coeff(l, k)
            if g.is_zero():
                continue
            r = right(i - k + 1, j - l + 1)
            if not r.is_zero():
                total = total + g * r * comb(j, l)
    return total


def check_diamond_sum(ctx: Context, rep: Report) -> None:
    table = _hat_table(ctx, lambda st: (st.norm, st.base))
    for i in range(1, ctx.bound):
        for j in range(1, i + 1):
            lhs = table.get((i + 1, j + 1), ZERO)
            rhs = _diamond_rhs(ctx, i, j, lambda a, b: table.get((a, b), ZERO))
            rep.check(lhs == rhs, lambda: f"i={i}, j={j}: {lhs} != {rhs}")


def check_diamond_sum_restricted(ctx: Context, rep: Report) -> None:
    table = _hat_table(ctx, lambda st: (st.norm, st.base, st.base_branch_left))
    for i in range(1, ctx.bound):
        for j in range(1, i + 1):
            for n in range(1, i + 1):
                lhs = table.get((i + 1, j + 1, n), ZERO)
                rhs = _diamond_rhs(ctx, i, j, lambda a, b: table.get((a, b, n - 1), ZERO))
                rep.check(lhs == rhs, lambda: f"i={i}, j={j}, nu={n}: {lhs} != {rhs}")


def _bridge_tables(ctx: Context) -> tuple[dict, BiSeries]:
    table = _hat_table(
        ctx, lambda st: (st.norm, st.base, st.base_branch_left, st.base_decoration)
    )
    return table, ctx.gamma_series(ctx.bound)


def _bridge_check(ctx: Context, rep: Report, n_range: range, min_ij: int) -> None:
    table, gamma = _bridge_tables(ctx)
    power = BiSeries.one(gamma.x_order, gamma.l_order)
    for n in range(0, n_range.stop):
        if n > 0:
            power = power * gamma
        if n not in n_range:
            continue
        for i in range(min_ij, ctx.bound):
            for j in range(min_ij, ctx.bound):
                lhs = table.get((i + 1, j + 1, n, 1), ZERO)
                rhs = power.coefficient(i, j) * factorial(j)
                rep.check(lhs == rhs, lambda: f"n={n}, i={i}, j={j}: {lhs} != {rhs}")


def check_bridge(ctx: Context, rep: Report) -> None:
    _bridge_check(ctx, rep, range(0, ctx.bound + 1), 0)


def check_bridge_base(ctx: Context, rep: Report) -> None:
    _bridge_check(ctx, rep, range(1, 2), 1)


def check_g1_recursion(ctx: Context, rep: Report) -> None:
    X = ctx.bound
    gamma = ctx.gamma_series(X)
    powers = [BiSeries.one(X, X)]
    for _ in range(X):
        powers.append(powers[-1] * gamma)
    coeffs: dict[int, Poly] = {}
    for k in range(1, min(X, ctx.max_decoration) + 1):
        for n, P in enumerate(powers):
            c = gen_binomial(n + ctx.s * k - 2, n)
            if not c:
                continue
            for (m, l), p in P.coeffs.items():
                if m + k <= X:
                    term = p * Poly.var(k, l) * (c * factorial(l))
                    coeffs[m + k] = coeffs.get(m + k, ZERO) + term
    rhs = x_series(coeffs, X)
    for m in range(X + 1):
        lhs_m, rhs_m = ctx.gs[1].coefficient(m), rhs.coefficient(m)
        rep.check(lhs_m == rhs_m, lambda: f"[x^{m}] g_1: {lhs_m} != {rhs_m}")


def check_triangle(ctx: Context, rep: Report) -> None:
    for st in ctx.stats:
        C = st.diagram
        if C.size < 2:
            continue
        D1, D2 = diamond_split(C)
        rep.check(C.base <= D1.base + D2.base, lambda: f"{C}: b={C.base} > {D1.base} + {D2.base}")


def check_threeway(ctx: Context, rep: Report) -> None:
    for a, b in _pair_stats(ctx):
        Cp, C2 = a.diagram, b.diagram
        if Cp.size + C2.size < 3:
            continue
        for k in range(1, 2 * C2.size):
            C = insert(Cp, C2, k)
            case, D1, D2 = threeway_cases(Cp, C2, k)
            got = diamond_split(C)
            rep.check(got == (D1, D2), lambda: f"{Cp} o_{k} {C2} ({case}): {got} != {(D1, D2)}")


IDENTITIES: dict[str, Callable[[Context, Report], None]] = {
    "rge_comb": check_rge_comb,
    "rsd_monomial": check_rsd_monomial,
    "weight_recurrence": check_weight_recurrence,
    "diamond_monomial": check_diamond_monomial,
    "decoration_bijection": check_decoration_bijection,
    "diamond_sum": check_diamond_sum,
    "diamond_sum_restricted": check_diamond_sum_restricted,
    "bridge": check_bridge,
    "bridge_base": check_bridge_base,
    "g1_recursion": check_g1_recursion,
    "triangle": check_triangle,
    "threeway": check_threeway,
}


class UnknownIdentity(KeyError):
    pass


def verify_identity(
    name: str,
    bound: int,
    s: Fraction | int | str = 2,
    max_decoration: Optional[int] = None,
    threads: Optional[int] = None,
    context: Optional[Context] = None,
) -> Report:
    """Check one registered identity on all diagrams with norm <= bound."""
    if name not in IDENTITIES:
        raise UnknownIdentity(name)
    s = as_fraction(s if not isinstance(s, str) else Fraction(s))
    N = bound if max_decoration is None else max_decoration
    ctx = context or Context(bound, s, N, threads)
    rep = Report(name, bound, ctx.s)
    IDENTITIES[name](ctx, rep)
    return rep


def verify_all(
    bound: int,
    s: Fraction | int | str = 2,
    max_decoration: Optional[int] = None,
    threads: Optional[int] = None,
    names: Optional[list[str]] = None,
) -> list[Report]:
    s = as_fraction(s if not isinstance(s, str) else Fraction(s))
    N = bound if max_decoration is None else max_decoration
    ctx = Context(bound, s, N, threads)
    return [verify_identity(n, bound, s, N, context=ctx) for n in (names or list(IDENTITIES))]
