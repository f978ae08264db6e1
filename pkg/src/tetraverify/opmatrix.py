"""Operators on tensor powers of the two-dimensional color space.

Matrices are dense (at most 64 x 64 here) with sparse exact-polynomial
entries.  Construction from permutation maps, slot embedding, products,
partial traces, exact rank and symbolic determinants all stay in rational
arithmetic end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .bitlinalg import PermOperator, dec_bits
from .polyring import EMPTY_VARS, MPoly, Rational, VarTable

Entry = Union[MPoly, Fraction, int]


@dataclass(frozen=True)
class SlotEmbedding:
    """Placement of a small operator inside a larger tensor product.

    Slot order matters: slot i of the embedding receives tensor factor i of
    the small operator.
    """

    total_sites: int
    slots: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.slots)) != len(self.slots):
            raise ValueError(f"duplicate slots in {self.slots}")
        for p in self.slots:
            if not 1 <= p <= self.total_sites:
                raise ValueError(f"slot {p} out of range 1..{self.total_sites}")


class OpMatrix:
    """Square matrix over MPoly acting on ``2**sites`` dimensions."""

    __slots__ = ("sites", "vars", "rows")

    def __init__(self, sites: int, vars: VarTable, rows: list[list[MPoly]]):
        dim = 1 << sites
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ValueError(f"expected {dim}x{dim} entries for {sites} sites")
        self.sites = sites
        self.vars = vars
        self.rows = rows

    @property
    def dim(self) -> int:
        return 1 << self.sites

    def _coerce_entry(self, value: Entry) -> MPoly:
        if isinstance(value, MPoly):
            if value.vars != self.vars:
                raise ValueError("entry variable table does not match matrix")
            return value
        return MPoly.const(self.vars, value)

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, sites: int, vars: VarTable = EMPTY_VARS) -> "OpMatrix":
        zero = MPoly.zero(vars)
        dim = 1 << sites
        return cls(sites, vars, [[zero] * dim for _ in range(dim)])

    @classmethod
    def identity(cls, sites: int, vars: VarTable = EMPTY_VARS) -> "OpMatrix":
        out = cls.zeros(sites, vars)
        one = MPoly.const(vars, 1)
        for i in range(out.dim):
            out.rows[i][i] = one
        return out

    @classmethod
    def from_perm(cls, op: PermOperator, vars: VarTable = EMPTY_VARS) -> "OpMatrix":
        out = cls.zeros(op.n, vars)
        one = MPoly.const(vars, 1)
        for col, row in enumerate(op.table):
            out.rows[row][col] = one
        return out

    @classmethod
    def from_entries(cls, sites: int, vars: VarTable, entries: Mapping[tuple[int, int], Entry]) -> "OpMatrix":
        out = cls.zeros(sites, vars)
        for (i, j), value in entries.items():
            out.rows[i][j] = out._coerce_entry(value)
        return out

    # -- ring operations -----------------------------------------------------

    def _check_compat(self, other: "OpMatrix") -> None:
        if self.sites != other.sites:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.vars != other.vars:
            raise ValueError("variable tables differ")

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        self._check_compat(other)
        rows = [
            [a + b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        ]
        return OpMatrix(self.sites, self.vars, rows)

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        self._check_compat(other)
        rows = [
            [a - b for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        ]
        return OpMatrix(self.sites, self.vars, rows)

    def scaled(self, coeff: Entry) -> "OpMatrix":
        c = self._coerce_entry(coeff)
        rows = [[c * p for p in row] for row in self.rows]
        return OpMatrix(self.sites, self.vars, rows)

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        self._check_compat(other)
        dim = self.dim
        out = OpMatrix.zeros(self.sites, self.vars)
        orows = other.rows
        for i in range(dim):
            srow = self.rows[i]
            acc = out.rows[i]
            for k in range(dim):
                p = srow[k]
                if p.is_zero():
                    continue
                for j, q in enumerate(orows[k]):
                    if not q.is_zero():
                        acc[j] = acc[j] + p * q
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, OpMatrix):
            return NotImplemented
        return (
            self.sites == other.sites
            and self.vars == other.vars
            and self.rows == other.rows
        )

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.rows for p in row)

    # -- tensor-structure operations ------------------------------------------

    def embed(self, e: SlotEmbedding) -> "OpMatrix":
        """Act as ``self`` on the listed factors, identity elsewhere."""
        if len(e.slots) != self.sites:
            raise ValueError(f"embedding has {len(e.slots)} slots, operator has {self.sites} sites")
        total = e.total_sites
        others = [p for p in range(1, total + 1) if p not in e.slots]
        slot_shift = [total - p for p in e.slots]
        other_shift = [total - p for p in others]
        out = OpMatrix.zeros(total, self.vars)
        small = self.dim
        for r in range(small):
            rbits = dec_bits(r, self.sites)
            row_base = sum(b << s for b, s in zip(rbits, slot_shift))
            for c in range(small):
                p = self.rows[r][c]
                if p.is_zero():
                    continue
                cbits = dec_bits(c, self.sites)
                col_base = sum(b << s for b, s in zip(cbits, slot_shift))
                for rest in range(1 << len(others)):
                    fill = 0
                    for idx, s in enumerate(other_shift):
                        fill |= ((rest >> idx) & 1) << s
                    out.rows[row_base | fill][col_base | fill] = p
        return out

    def partial_trace(self, site: int) -> "OpMatrix":
        """Trace out one tensor factor (1-based ``site``)."""
        if self.sites < 2:
            raise ValueError("need at least 2 sites to take a partial trace")
        if not 1 <= site <= self.sites:
            raise ValueError(f"site {site} out of range 1..{self.sites}")
        shift = self.sites - site
        high = ~((1 << (shift + 1)) - 1)
        low = (1 << shift) - 1
        def drop(v: int) -> int:
            return ((v & high) >> 1) | (v & low)
        out = OpMatrix.zeros(self.sites - 1, self.vars)
        for r in range(self.dim):
            for c in range(self.dim):
                if ((r >> shift) & 1) != ((c >> shift) & 1):
                    continue
                p = self.rows[r][c]
                if p.is_zero():
                    continue
                rr, cc = drop(r), drop(c)
                out.rows[rr][cc] = out.rows[rr][cc] + p
        return out

    # -- evaluation and exact linear algebra -----------------------------------

    def evaluate(self, point: Mapping[str, Rational]) -> "OpMatrix":
        """Specialize all variables to rationals; result is over the empty table."""
        out = OpMatrix.zeros(self.sites, EMPTY_VARS)
        for i, row in enumerate(self.rows):
            for j, p in enumerate(row):
                if not p.is_zero():
                    out.rows[i][j] = MPoly.const(EMPTY_VARS, p.eval(point))
        return out

    def substitute(self, name: str, value: Union[MPoly, Rational]) -> "OpMatrix":
        rows = [[p.substitute(name, value) for p in row] for row in self.rows]
        return OpMatrix(self.sites, self.vars, rows)

    def as_fractions(self) -> list[list[Fraction]]:
        """Entries as rationals; requires every entry constant."""
        out: list[list[Fraction]] = []
        for i, row in enumerate(self.rows):
            frow: list[Fraction] = []
            for j, p in enumerate(row):
                if p.total_degree() not in (None, 0):
                    raise ValueError(f"entry ({i},{j}) is not constant: {p.to_str()}")
                frow.append(p.eval({name: 0 for name in self.vars.names}))
            out.append(frow)
        return out

    def rank_rational(self) -> int:
        return _fraction_rank(self.as_fractions())

    def det_symbolic(self) -> MPoly:
        """Exact determinant polynomial via evaluation and interpolation.

        Per-variable degrees of the determinant are bounded by the sum over
        columns of the max entry degree; the determinant is reconstructed from
        exact rational determinants on an integer grid of that size.
        """
        bounds: dict[str, int] = {}
        for name in self.vars.names:
            total = 0
            for j in range(self.dim):
                col_deg = 0
                for i in range(self.dim):
                    d = self.rows[i][j].degree_in(name)
                    if d:
                        col_deg = max(col_deg, d)
                total += col_deg
            if total:
                bounds[name] = total
        return self._det_interpolate(list(bounds.items()))

    def _det_interpolate(self, bounds: list[tuple[str, int]]) -> MPoly:
        if not bounds:
            return MPoly.const(self.vars, _fraction_det(self.as_fractions()))
        name, degree = bounds[0]
        nodes = _interpolation_nodes(degree + 1)
        partials = [
            self.substitute(name, node)._det_interpolate(bounds[1:])
            for node in nodes
        ]
        v = MPoly.var(self.vars, name)
        acc = MPoly.zero(self.vars)
        for k, node_k in enumerate(nodes):
            basis = MPoly.const(self.vars, 1)
            denom = Fraction(1)
            for j, node_j in enumerate(nodes):
                if j != k:
                    basis = basis * (v - node_j)
                    denom *= node_k - node_j
            acc = acc + partials[k] * basis * (Fraction(1) / denom)
        return acc

    # -- reporting helpers -----------------------------------------------------

    def nonzero_items(self):
        for i, row in enumerate(self.rows):
            for j, p in enumerate(row):
                if not p.is_zero():
                    yield i, j, p

    def nonzero_count(self) -> int:
        return sum(1 for _ in self.nonzero_items())

    def max_degree_per_var(self) -> dict[str, int]:
        out = {name: 0 for name in self.vars.names}
        for _, _, p in self.nonzero_items():
            for name in self.vars.names:
                d = p.degree_in(name)
                if d and d > out[name]:
                    out[name] = d
        return out

    def dump(self) -> list[dict]:
        """Nonzero entries as (row multi-index, column multi-index, polynomial)."""
        return [
            {
                "row": list(dec_bits(i, self.sites)),
                "col": list(dec_bits(j, self.sites)),
                "poly": p.to_str(),
            }
            for i, j, p in self.nonzero_items()
        ]


def from_perm(op: PermOperator, vars: VarTable = EMPTY_VARS) -> OpMatrix:
    return OpMatrix.from_perm(op, vars)


def linear_comb(s: OpMatrix, t: OpMatrix, coeff: Entry) -> OpMatrix:
    """The one-parameter family ``s + coeff * t``."""
    return s + t.scaled(coeff)


def embed(m: OpMatrix, e: SlotEmbedding) -> OpMatrix:
    return m.embed(e)


def partial_trace(m: OpMatrix, site: int) -> OpMatrix:
    return m.partial_trace(site)


def _interpolation_nodes(count: int) -> list[int]:
    nodes = [0]
    k = 1
    while len(nodes) < count:
        nodes.append(k)
        if len(nodes) < count:
            nodes.append(-k)
        k += 1
    return nodes[:count]


def _fraction_rank(m: list[list[Fraction]]) -> int:
    m = [row[:] for row in m]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = Fraction(1) / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(n_rows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == n_rows:
            break
    return rank


def _fraction_det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = Fraction(1) / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det
