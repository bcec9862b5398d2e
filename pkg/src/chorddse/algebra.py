"""Exact arithmetic: polynomials in the a[k,i], truncated series in x and L,
Laurent series in rho, and the derivative operator that links them.

Everything is exact; coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

Var = tuple[int, int]
Monomial = tuple[tuple[Var, int], ...]
Scalar = Union[int, Fraction]


class AlgebraError(ValueError):
    pass


def as_fraction(value: Scalar | str) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def gen_binomial(a: Scalar, k: int) -> Fraction:
    """a(a-1)...(a-k+1)/k! for any rational a and integer k >= 0."""
    if k < 0:
        raise AlgebraError("gen_binomial needs k >= 0")
    a = as_fraction(a)
    out = Fraction(1)
    for i in range(k):
        out = out * (a - i) / (i + 1)
    return out


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_str(m: Monomial) -> str:
    parts = []
    for (k, i), e in m:
        parts.append(f"a[{k},{i}]" + (f"^{e}" if e != 1 else ""))
    return "*".join(parts)


class Poly:
    """Polynomial in the indeterminates a[k,i] with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = as_fraction(c)

    @classmethod
    def const(cls, c: Scalar) -> Poly:
        return cls({(): c})

    @classmethod
    def var(cls, k: int, i: int) -> Poly:
        if k < 1 or i < 0:
            raise AlgebraError(f"a[{k},{i}] needs k >= 1 and i >= 0")
        return cls({(((k, i), 1),): 1})

    @classmethod
    def monomial(cls, factors: Iterable[Var], coeff: Scalar = 1) -> Poly:
        exps: dict[Var, int] = {}
        for v in factors:
            exps[v] = exps.get(v, 0) + 1
        return cls({tuple(sorted(exps.items())): coeff})

    @staticmethod
    def _coerce(other: Poly | Scalar) -> Poly:
        return other if isinstance(other, Poly) else Poly.const(other)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __add__(self, other: Poly | Scalar) -> Poly:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        p = Poly()
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self) -> Poly:
        p = Poly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other: Poly | Scalar) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> Poly:
        return self._coerce(other) - self

    def scale(self, c: Scalar) -> Poly:
        c = as_fraction(c)
        if not c:
            return Poly()
        p = Poly()
        p.terms = {m: v * c for m, v in self.terms.items()}
        return p

    def __mul__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise AlgebraError("negative powers of polynomials are not polynomials")
        out, base = Poly.const(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def substitute(self, values: Mapping[Var, Scalar] | Callable[[Var], Scalar | None]) -> Poly:
        """Replace indeterminates by rationals; unlisted ones stay symbolic."""
        look = values if callable(values) else values.get
        out = Poly()
        for m, c in self.terms.items():
            coeff = c
            rest = []
            for v, e in m:
                val = look(v)
                if val is None:
                    rest.append((v, e))
                else:
                    coeff *= as_fraction(val) ** e
            if coeff:
                out = out + Poly({tuple(rest): coeff})
        return out

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (sum(e for _, e in t[0]), t[0]))

    def to_json(self) -> list[dict]:
        return [
            {"coeff": str(c), "vars": {f"a[{k},{i}]": e for (k, i), e in m}}
            for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> Poly:
        out = cls()
        for term in data:
            factors = []
            for name, e in term.get("vars", {}).items():
                k, i = name[2:-1].split(",")
                factors += [(int(k), int(i))] * int(e)
            out = out + cls.monomial(factors, Fraction(term["coeff"]))
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(_mono_str(m))
            elif c == -1:
                parts.append("-" + _mono_str(m))
            else:
                parts.append(f"{c}*{_mono_str(m)}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self})"


ZERO = Poly()
ONE = Poly.const(1)


class BiSeries:
    """Truncated series sum_{m<=X, j<=L} c[m,j] x^m L^j with Poly coefficients."""

    __slots__ = ("x_order", "l_order", "coeffs")

    def __init__(self, x_order: int, l_order: int, coeffs: Mapping[tuple[int, int], Poly | Scalar] | None = None) -> None:
        if x_order < 0 or l_order < 0:
            raise AlgebraError("truncation orders must be non-negative")
        self.x_order = x_order
        self.l_order = l_order
        self.coeffs: dict[tuple[int, int], Poly] = {}
        for (m, j), c in (coeffs or {}).items():
            if m <= x_order and j <= l_order:
                c = Poly._coerce(c)
                if not c.is_zero():
                    self.coeffs[(m, j)] = c

    @classmethod
    def one(cls, x_order: int, l_order: int) -> BiSeries:
        return cls(x_order, l_order, {(0, 0): ONE})

    def _orders(self, other: BiSeries) -> tuple[int, int]:
        return min(self.x_order, other.x_order), min(self.l_order, other.l_order)

    def __add__(self, other: BiSeries) -> BiSeries:
        X, L = self._orders(other)
        out = BiSeries(X, L, self.coeffs)
        for key, c in other.coeffs.items():
            if key[0] <= X and key[1] <= L:
                v = out.coeffs.get(key, ZERO) + c
                if v.is_zero():
                    out.coeffs.pop(key, None)
                else:
                    out.coeffs[key] = v
        return out

    def __neg__(self) -> BiSeries:
        return BiSeries(self.x_order, self.l_order, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: BiSeries) -> BiSeries:
        return self + (-other)

    def scale(self, c: Poly | Scalar) -> BiSeries:
        c = Poly._coerce(c)
        return BiSeries(self.x_order, self.l_order, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other: BiSeries | Poly | Scalar) -> BiSeries:
        if not isinstance(other, BiSeries):
            return self.scale(other)
        X, L = self._orders(other)
        out: dict[tuple[int, int], Poly] = {}
        for (m1, j1), c1 in self.coeffs.items():
            for (m2, j2), c2 in other.coeffs.items():
                m, j = m1 + m2, j1 + j2
                if m <= X and j <= L:
                    out[(m, j)] = out.get((m, j), ZERO) + c1 * c2
        return BiSeries(X, L, out)

    __rmul__ = __mul__

    def shift(self, dx: int = 0, dl: int = 0) -> BiSeries:
        """Multiply by x^dx L^dl."""
        return BiSeries(
            self.x_order, self.l_order, {(m + dx, j + dl): c for (m, j), c in self.coeffs.items()}
        )

    def __pow__(self, exponent: Scalar) -> BiSeries:
        return self.power(exponent)

    def power(self, exponent: Scalar) -> BiSeries:
        """Generalized binomial expansion around the constant term."""
        p = as_fraction(exponent)
        c0 = self.coeffs.get((0, 0), ZERO)
        if p.denominator == 1 and p >= 0:
            out, base, e = BiSeries.one(self.x_order, self.l_order), self, int(p)
            while e:
                if e & 1:
                    out = out * base
                base = base * base
                e >>= 1
            return out
        if c0.is_zero():
            raise AlgebraError("cannot raise a series with zero constant term to a negative or fractional power")
        if not c0.is_constant():
            raise AlgebraError("constant term must be a number for negative or fractional powers")
        c = c0.constant_term()
        if c != 1 and p.denominator != 1:
            raise AlgebraError("fractional powers need constant term 1")
        rest = BiSeries(self.x_order, self.l_order, {k: v for k, v in self.coeffs.items() if k != (0, 0)})
        if c != 1:
            rest = rest.scale(1 / c)
        out = BiSeries.one(self.x_order, self.l_order)
        term = BiSeries.one(self.x_order, self.l_order)
        for n in range(1, self.x_order + self.l_order + 1):
            term = term * rest
            if not term.coeffs:
                break
            out = out + term.scale(gen_binomial(p, n))
        if c != 1:
            out = out.scale(c ** p)
        return out

    def inverse(self) -> BiSeries:
        return self.power(-1)

    def coefficient(self, m: int, j: int = 0) -> Poly:
        if m > self.x_order or j > self.l_order:
            raise AlgebraError(f"x^{m} L^{j} is beyond the truncation ({self.x_order}, {self.l_order})")
        return self.coeffs.get((m, j), ZERO)

    def l_coefficient(self, j: int) -> BiSeries:
        """The series in x multiplying L^j (returned with L-order 0)."""
        if j > self.l_order:
            raise AlgebraError(f"L^{j} is beyond the truncation {self.l_order}")
        return BiSeries(self.x_order, 0, {(m, 0): c for (m, jj), c in self.coeffs.items() if jj == j})

    def x_theta(self) -> BiSeries:
        """x d/dx."""
        return BiSeries(self.x_order, self.l_order, {(m, j): c * m for (m, j), c in self.coeffs.items()})

    def truncate(self, x_order: int, l_order: int) -> BiSeries:
        return BiSeries(min(x_order, self.x_order), min(l_order, self.l_order), self.coeffs)

    def substitute(self, values: Mapping[Var, Scalar] | Callable[[Var], Scalar | None]) -> BiSeries:
        return BiSeries(self.x_order, self.l_order, {k: c.substitute(values) for k, c in self.coeffs.items()})

    def max_l_degree(self, m: int) -> int:
        return max((j for (mm, j) in self.coeffs if mm == m), default=-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return (self.x_order, self.l_order, self.coeffs) == (other.x_order, other.l_order, other.coeffs)

    def to_json(self) -> dict:
        return {
            "x_order": self.x_order,
            "l_order": self.l_order,
            "coefficients": [
                {"m": m, "j": j, "poly": self.coeffs[(m, j)].to_json()} for m, j in sorted(self.coeffs)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> BiSeries:
        return cls(
            data["x_order"],
            data["l_order"],
            {(t["m"], t["j"]): Poly.from_json(t["poly"]) for t in data["coefficients"]},
        )

    def __repr__(self) -> str:
        body = " + ".join(f"({c})x^{m}L^{j}" for (m, j), c in sorted(self.coeffs.items()))
        return f"BiSeries[{self.x_order},{self.l_order}]({body or '0'})"


def x_series(coeffs: Mapping[int, Poly | Scalar], x_order: int) -> BiSeries:
    """A series in x alone, stored as a BiSeries of L-order 0."""
    return BiSeries(x_order, 0, {(m, 0): c for m, c in coeffs.items()})


class RhoSeries:
    """Laurent series sum_{e=low}^{cutoff} c_e rho^e with BiSeries coefficients.

    ``low`` is -1 or 0: at most a simple pole.
    """

    def __init__(self, low: int, cutoff: int, coeffs: Mapping[int, BiSeries], x_order: int, l_order: int) -> None:
        if low < -1:
            raise AlgebraError("only simple poles are supported")
        if cutoff < low:
            raise AlgebraError("cutoff below the lowest exponent")
        self.low = low
        self.cutoff = cutoff
        self.x_order = x_order
        self.l_order = l_order
        self.coeffs = {}
        for e, c in coeffs.items():
            if e < low:
                raise AlgebraError(f"rho^{e} below the lowest exponent {low}")
            if e <= cutoff and c.coeffs:
                self.coeffs[e] = c.truncate(x_order, l_order)

    @classmethod
    def primitive(cls, coeffs: list[Poly | Scalar], x_order: int = 0, l_order: int = 0) -> RhoSeries:
        """F(rho) = sum_i coeffs[i] rho^(i-1), known through rho^(len-2)."""
        if not coeffs:
            raise AlgebraError("a primitive needs at least its residue coefficient")
        terms = {i - 1: BiSeries(x_order, l_order, {(0, 0): c}) for i, c in enumerate(coeffs)}
        return cls(-1, len(coeffs) - 2, terms, x_order, l_order)

    @classmethod
    def exp_minus_one(cls, cutoff: int, x_order: int, l_order: int) -> RhoSeries:
        """e^{-L rho} - 1 through rho^cutoff."""
        terms = {}
        fact = Fraction(1)
        for e in range(1, cutoff + 1):
            fact *= e
            terms[e] = BiSeries(x_order, l_order, {(0, e): Fraction((-1) ** e) / fact})
        return cls(0, cutoff, terms, x_order, l_order)

    @classmethod
    def exp(cls, cutoff: int, x_order: int, l_order: int) -> RhoSeries:
        """e^{-L rho} through rho^cutoff."""
        out = cls.exp_minus_one(cutoff, x_order, l_order)
        out.coeffs[0] = BiSeries.one(x_order, l_order)
        return out

    def coefficient(self, e: int) -> BiSeries:
        if e > self.cutoff:
            raise AlgebraError(f"rho^{e} is beyond the cutoff {self.cutoff}")
        return self.coeffs.get(e, BiSeries(self.x_order, self.l_order))

    def __mul__(self, other: RhoSeries) -> RhoSeries:
        low = self.low + other.low
        # known up to min(cutoff_a + lowest_b, cutoff_b + lowest_a), using the
        # lowest exponents actually present
        cutoff = min(self.cutoff + other._lowest(), other.cutoff + self._lowest())
        X = min(self.x_order, other.x_order)
        L = min(self.l_order, other.l_order)
        terms: dict[int, BiSeries] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e <= cutoff:
                    prod = c1 * c2
                    terms[e] = terms[e] + prod if e in terms else prod
        if low < -1:
            if any(c.coeffs for e, c in terms.items() if e < -1):
                raise AlgebraError("product has a pole of order greater than one")
            low = -1
        if low == -1 and not terms.get(-1, BiSeries(X, L)).coeffs:
            low = 0
        terms = {e: c for e, c in terms.items() if e >= low}
        return RhoSeries(low, cutoff, terms, X, L)

    def _lowest(self) -> int:
        present = [e for e, c in self.coeffs.items() if c.coeffs]
        return min(present) if present else self.cutoff + 1

    def __add__(self, other: RhoSeries) -> RhoSeries:
        X = min(self.x_order, other.x_order)
        L = min(self.l_order, other.l_order)
        cutoff = min(self.cutoff, other.cutoff)
        keys = {e for e in set(self.coeffs) | set(other.coeffs) if e <= cutoff}
        terms = {e: self.coefficient(e) + other.coefficient(e) for e in keys}
        return RhoSeries(min(self.low, other.low), cutoff, terms, X, L)

    def regular(self) -> bool:
        return all(e >= 0 for e, c in self.coeffs.items() if c.coeffs)


def apply_derivative_operator(H: BiSeries, f: RhoSeries, sign: int = -1) -> BiSeries:
    """Replace L^j in H by (sign * d/drho)^j, apply to f and set rho = 0.

    With ``sign = -1`` this is the derivative with respect to -rho.  The L of
    the result comes from f; the x-order is that of H (capped by f's).
    """
    if sign not in (1, -1):
        raise AlgebraError("sign must be +1 or -1")
    if not f.regular():
        raise AlgebraError("the pole of f at rho = 0 is not cancelled")
    X = min(H.x_order, f.x_order)
    out = BiSeries(X, f.l_order)
    fact = [Fraction(1)]
    for j in range(1, H.l_order + 1):
        fact.append(fact[-1] * j)
    by_j: dict[int, dict[int, Poly]] = {}
    for (m, j), c in H.coeffs.items():
        if m <= X:
            by_j.setdefault(j, {})[m] = c
    for j, row in sorted(by_j.items()):
        if j > f.cutoff:
            raise AlgebraError(f"rho truncation {f.cutoff} too short for derivative order {j}")
        fj = f.coefficient(j)
        if not fj.coeffs:
            continue
        factor = fact[j] * sign ** j
        h = BiSeries(X, f.l_order, {(m, 0): c * factor for m, c in row.items()})
        out = out + h * fj
    return out
