"""Exact sparse multivariate polynomial arithmetic over the rationals.

Polynomials are stored as a map from dense exponent vectors (one slot per
variable of the owning :class:`VarTable`) to nonzero ``Fraction`` coefficients.
All arithmetic is exact; no floating point enters this module.  The canonical
form (no zero coefficients, shared variable table) makes ``==`` a decision
procedure for polynomial identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

Rational = Union[Fraction, int]


class VarMismatchError(ValueError):
    """Raised when two polynomials with different variable tables are combined."""


@dataclass(frozen=True)
class VarTable:
    """Ordered, duplicate-free list of variable names."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names: {self.names}")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}; table has {self.names}") from None


EMPTY_VARS = VarTable(())


class MPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, vars: VarTable, terms: Mapping[tuple[int, ...], Rational]):
        normalized: dict[tuple[int, ...], Fraction] = {}
        nvars = len(vars)
        for expo, coeff in terms.items():
            if len(expo) != nvars:
                raise ValueError(f"exponent vector {expo} does not match {nvars} variables")
            c = Fraction(coeff)
            if c:
                normalized[tuple(expo)] = c
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "terms", normalized)

    def __setattr__(self, name: str, value) -> None:  # immutable by contract
        raise AttributeError("MPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars: VarTable) -> "MPoly":
        return cls(vars, {})

    @classmethod
    def const(cls, vars: VarTable, value: Rational) -> "MPoly":
        return cls(vars, {(0,) * len(vars): Fraction(value)})

    @classmethod
    def var(cls, vars: VarTable, name: str) -> "MPoly":
        expo = [0] * len(vars)
        expo[vars.index(name)] = 1
        return cls(vars, {tuple(expo): Fraction(1)})

    # -- basic ring structure ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def _check_same_table(self, other: "MPoly") -> None:
        if self.vars != other.vars:
            raise VarMismatchError(f"variable tables differ: {self.vars.names} vs {other.vars.names}")

    def _coerce(self, other: Union["MPoly", Rational]) -> "MPoly":
        if isinstance(other, MPoly):
            self._check_same_table(other)
            return other
        return MPoly.const(self.vars, other)

    def __add__(self, other: Union["MPoly", Rational]) -> "MPoly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for expo, coeff in other.terms.items():
            acc = terms.get(expo, Fraction(0)) + coeff
            if acc:
                terms[expo] = acc
            else:
                terms.pop(expo, None)
        return MPoly(self.vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Union["MPoly", Rational]) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Rational) -> "MPoly":
        return (-self) + other

    def __mul__(self, other: Union["MPoly", Rational]) -> "MPoly":
        if not isinstance(other, MPoly):
            c = Fraction(other)
            if not c:
                return MPoly.zero(self.vars)
            return MPoly(self.vars, {e: coeff * c for e, coeff in self.terms.items()})
        self._check_same_table(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(expo, Fraction(0)) + c1 * c2
                if acc:
                    out[expo] = acc
                else:
                    out.pop(expo, None)
        return MPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            if isinstance(other, (int, Fraction)):
                return self == MPoly.const(self.vars, other)
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({self.to_str()!r})"

    # -- structure queries ---------------------------------------------------

    def degree_in(self, name: str) -> int | None:
        """Max exponent of ``name``; ``None`` for the zero polynomial."""
        idx = self.vars.index(name)
        if not self.terms:
            return None
        return max(e[idx] for e in self.terms)

    def total_degree(self) -> int | None:
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def split_linear(self, name: str) -> tuple["MPoly", "MPoly"]:
        """Write ``p = p1*v + p0`` with ``p1``, ``p0`` free of ``v``.

        Requires degree at most 1 in ``v``.
        """
        idx = self.vars.index(name)
        p1: dict[tuple[int, ...], Fraction] = {}
        p0: dict[tuple[int, ...], Fraction] = {}
        for expo, coeff in self.terms.items():
            d = expo[idx]
            if d > 1:
                raise ValueError(f"degree {d} > 1 in {name!r}")
            stripped = expo[:idx] + (0,) + expo[idx + 1:]
            (p1 if d == 1 else p0)[stripped] = coeff
        return MPoly(self.vars, p1), MPoly(self.vars, p0)

    def substitute(self, name: str, value: Union["MPoly", Rational]) -> "MPoly":
        """Replace ``name`` by ``value`` (a rational or a polynomial on the same table)."""
        idx = self.vars.index(name)
        val = self._coerce(value) if isinstance(value, MPoly) else MPoly.const(self.vars, value)
        out = MPoly.zero(self.vars)
        powers: dict[int, MPoly] = {0: MPoly.const(self.vars, 1)}
        for expo, coeff in self.terms.items():
            d = expo[idx]
            if d not in powers:
                powers[d] = val ** d
            stripped = expo[:idx] + (0,) + expo[idx + 1:]
            out = out + powers[d] * MPoly(self.vars, {stripped: coeff})
        return out

    def eval(self, point: Mapping[str, Rational]) -> Fraction:
        """Exact value at a rational point covering all variables of ``self``."""
        values = []
        for name in self.vars.names:
            if name not in point:
                raise KeyError(f"missing assignment for variable {name!r}")
            values.append(Fraction(point[name]))
        acc = Fraction(0)
        for expo, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, expo):
                if e:
                    term *= v ** e
            acc += term
        return acc

    # -- canonical text ------------------------------------------------------

    def to_str(self) -> str:
        """Canonical rendering: graded-lex term order, explicit signs."""
        if not self.terms:
            return "0"
        def key(expo):
            return (-sum(expo), tuple(-e for e in expo))
        parts: list[str] = []
        for expo in sorted(self.terms, key=key):
            coeff = self.terms[expo]
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.vars.names, expo)
                if e
            ]
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational literal of the form ``p`` or ``p/q``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}: {exc}") from None
