"""Exact multivariate Laurent polynomials with graded truncation.

The coefficient field is Fraction.  A ring declares an ordered tuple of
variable names; the last variable, conventionally ``u``, stands for q^(1/2)
(so q = u^2) and may carry a truncation order, turning the ring into
Q[x..][u]/(u^(ucap+1)) on that grading.  A separate cap bounds the total
degree in a designated block of "alphabet" variables.  Exponents may be
negative (Laurent), which the truncation caps only from above.

This is deliberately minimal: +, *, integer powers, and inversion of series
that are units in the u-adic sense.  It is the carrier for coefficient-exact
symmetric-function identity checks, not a general CAS.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


class PolyRing:
    def __init__(
        self,
        xvars: Iterable[str],
        extra: Iterable[str] = ("z", "w", "u"),
        xcap: int | None = None,
        ucap: int | None = None,
    ):
        self.xvars = tuple(xvars)
        self.extra = tuple(extra)
        self.names = self.xvars + self.extra
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.nx = len(self.xvars)
        self.nv = len(self.names)
        self.xcap = xcap
        self.ucap = ucap
        self.uidx = self.names.index("u") if "u" in self.names else None
        self._zero_exp = (0,) * self.nv

    # -- element constructors -------------------------------------------------

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self._zero_exp: Fraction(1)})

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {self._zero_exp: c} if c else {})

    def var(self, name: str, power: int = 1) -> "Poly":
        i = self.names.index(name)
        e = [0] * self.nv
        e[i] = power
        return Poly(self, {tuple(e): Fraction(1)})

    def monomial(self, exps: dict[str, int], coeff=1) -> "Poly":
        e = [0] * self.nv
        for k, v in exps.items():
            e[self.names.index(k)] = v
        c = Fraction(coeff)
        return Poly(self, {tuple(e): c} if c else {})

    def q(self) -> "Poly":
        """q = u^2."""
        return self.var("u", 2)

    # -- truncation -----------------------------------------------------------

    def _keep(self, exp: tuple[int, ...]) -> bool:
        if self.xcap is not None and sum(exp[: self.nx]) > self.xcap:
            return False
        if self.ucap is not None and self.uidx is not None and exp[self.uidx] > self.ucap:
            return False
        return True


class Poly:
    __slots__ = ("ring", "c")

    def __init__(self, ring: PolyRing, coeffs: dict[tuple[int, ...], Fraction]):
        self.ring = ring
        self.c = coeffs

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring is other.ring and self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        out = dict(self.c)
        for e, v in other.c.items():
            s = out.get(e, Fraction(0)) + v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.const(other) + (-self)

    def __mul__(self, other):
        r = self.ring
        if not isinstance(other, Poly):
            q = Fraction(other)
            if not q:
                return r.zero()
            return Poly(r, {e: v * q for e, v in self.c.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if not r._keep(e):
                    continue
                s = out.get(e, Fraction(0)) + v1 * v2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(r, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers: use var(name, -1) explicitly")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def u_valuation(self) -> int:
        if not self.c:
            return 0
        ui = self.ring.uidx
        return min(e[ui] for e in self.c)

    def inv_unit(self) -> "Poly":
        """Invert an element of the form c*(1 + g) with g of positive u-valuation.

        Requires a finite ucap; the result is the truncated geometric series.
        """
        r = self.ring
        if r.ucap is None:
            raise ValueError("inversion requires a u-truncated ring")
        c0 = self.c.get(r._zero_exp)
        if not c0:
            raise ValueError("not a unit: constant term vanishes")
        g = {e: -v / c0 for e, v in self.c.items() if e != r._zero_exp}
        g = Poly(r, g)
        if g and g.u_valuation() <= 0:
            raise ValueError("not invertible as a u-adic series")
        out = r.one()
        term = r.one()
        while True:
            term = term * g
            if not term:
                break
            out = out + term
        return Poly(r, {e: v / c0 for e, v in out.c.items()})

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return self * other.inv_unit()
        return Poly(self.ring, {e: v / Fraction(other) for e, v in self.c.items()})

    def coeff(self, exps: dict[str, int]) -> Fraction:
        e = [0] * self.ring.nv
        for k, v in exps.items():
            e[self.ring.names.index(k)] = v
        return self.c.get(tuple(e), Fraction(0))

    def subs_frac(self, values: dict[str, Fraction]) -> Fraction:
        """Evaluate at rational points (all variables must be assigned)."""
        vals = [Fraction(values[n]) for n in self.ring.names]
        total = Fraction(0)
        for e, v in self.c.items():
            term = v
            for b, k in zip(vals, e):
                term *= b ** k
            total += term
        return total

    def __repr__(self):
        if not self.c:
            return "0"
        bits = []
        for e, v in sorted(self.c.items()):
            mono = "*".join(
                f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            bits.append(f"{v}{'*' + mono if mono else ''}")
        return " + ".join(bits[:12]) + (" + ..." if len(bits) > 12 else "")
