"""GF(2) affine maps, two-color multi-indices, and n-simplex permutation checks.

A permutation-type operator on n two-dimensional color spaces is generated by
an affine map ``x -> A.x + B (mod 2)`` on index tuples.  The n-simplex relation
is checked exhaustively on encoded states: operators become permutation tables
of size ``2**N`` (N = n(n+1)/2 spaces), never explicit matrices.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .report import Report

Bits = tuple[int, ...]


class ABParseError(ValueError):
    """Malformed [A|B] text; message names the offending line."""


def enc_bits(bits: Bits) -> int:
    """Big-endian integer encoding: first factor is the most significant bit."""
    value = 0
    for b in bits:
        value = (value << 1) | b
    return value


def dec_bits(value: int, n: int) -> Bits:
    return tuple((value >> (n - 1 - k)) & 1 for k in range(n))


@dataclass(frozen=True)
class AffineBitMap:
    """Affine map over GF(2): n x n matrix ``a`` plus offset column ``b``."""

    n: int
    a: tuple[Bits, ...]
    b: Bits

    def __post_init__(self) -> None:
        if len(self.a) != self.n or len(self.b) != self.n:
            raise ValueError("matrix/offset shape does not match arity")
        for row in self.a:
            if len(row) != self.n or any(x not in (0, 1) for x in row):
                raise ValueError("matrix entries must be bits")
        if any(x not in (0, 1) for x in self.b):
            raise ValueError("offset entries must be bits")

    def apply(self, x: Bits) -> Bits:
        if len(x) != self.n:
            raise ValueError(f"arity mismatch: map has n={self.n}, index has {len(x)}")
        return tuple(
            (sum(row[j] * x[j] for j in range(self.n)) + off) % 2
            for row, off in zip(self.a, self.b)
        )

    def is_invertible(self) -> bool:
        return _gf2_det(self.a) == 1

    def flipped(self) -> "AffineBitMap":
        """Same linear part, offset complemented (composition with flip-all)."""
        return AffineBitMap(self.n, self.a, tuple(x ^ 1 for x in self.b))

    def to_text(self) -> str:
        lines = [
            " ".join(str(x) for x in row) + "|" + str(off)
            for row, off in zip(self.a, self.b)
        ]
        return "\n".join(lines) + "\n"


def _gf2_det(rows: tuple[Bits, ...]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return 0
        m[col], m[pivot] = m[pivot], m[col]
        for r in range(col + 1, n):
            if m[r][col]:
                m[r] = [(x ^ y) for x, y in zip(m[r], m[col])]
    return 1


def parse_ab(text: str) -> AffineBitMap:
    """Parse the [A|B] text format (one ``b0 b1 ... | b`` row per output index)."""
    rows: list[Bits] = []
    offs: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.count("|") != 1:
            raise ABParseError(f"line {lineno}: expected exactly one '|'")
        left, right = line.split("|")
        try:
            row = tuple(int(tok) for tok in left.split())
            off_toks = right.split()
            if len(off_toks) != 1:
                raise ValueError
            off = int(off_toks[0])
        except ValueError:
            raise ABParseError(f"line {lineno}: non-bit symbol in {line!r}") from None
        if any(x not in (0, 1) for x in row) or off not in (0, 1):
            raise ABParseError(f"line {lineno}: entries must be 0 or 1")
        if rows and len(row) != len(rows[0]):
            raise ABParseError(f"line {lineno}: ragged row (expected {len(rows[0])} bits)")
        rows.append(row)
        offs.append(off)
    if not rows:
        raise ABParseError("no data rows found")
    if len(rows) != len(rows[0]):
        raise ABParseError(f"expected {len(rows[0])} rows for an {len(rows[0])}-ary map, got {len(rows)}")
    return AffineBitMap(len(rows), tuple(rows), tuple(offs))


def apply_map(m: AffineBitMap, x: Bits) -> Bits:
    return m.apply(x)


@dataclass(frozen=True)
class PermOperator:
    """Total index map on n color spaces, tabulated on encoded inputs."""

    n: int
    table: tuple[int, ...]

    @classmethod
    def from_affine(cls, m: AffineBitMap) -> "PermOperator":
        table = tuple(enc_bits(m.apply(dec_bits(v, m.n))) for v in range(1 << m.n))
        return cls(m.n, table)

    def is_bijection(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def __call__(self, x: Bits) -> Bits:
        return dec_bits(self.table[enc_bits(x)], self.n)


@dataclass(frozen=True)
class SimplexScheme:
    """Slot layout of the n-simplex relation.

    The N = n(n+1)/2 spaces are labeled by 2-element subsets of {1,...,n+1} in
    lexicographic order; operator k acts on the spaces whose label contains k.
    For n=3 this yields the slot quadruple (123), (145), (246), (356).
    """

    n: int
    labels: tuple[tuple[int, int], ...]
    slots: tuple[tuple[int, ...], ...]

    @classmethod
    def standard(cls, n: int) -> "SimplexScheme":
        if n < 2:
            raise ValueError("simplex order must be at least 2")
        labels = tuple(combinations(range(1, n + 2), 2))
        position = {lab: i + 1 for i, lab in enumerate(labels)}
        slots = tuple(
            tuple(position[lab] for lab in labels if k in lab)
            for k in range(1, n + 2)
        )
        return cls(n, labels, slots)

    @property
    def n_spaces(self) -> int:
        return self.n * (self.n + 1) // 2


def embed_perm_table(op: PermOperator, slots: tuple[int, ...], total: int) -> np.ndarray:
    """Permutation table of ``op`` acting on the listed slots of a ``total``-space state."""
    if len(slots) != op.n:
        raise ValueError("slot count does not match operator arity")
    states = np.arange(1 << total, dtype=np.int64)
    sub = np.zeros_like(states)
    for pos in slots:
        sub = (sub << 1) | ((states >> (total - pos)) & 1)
    image = np.asarray(op.table, dtype=np.int64)[sub]
    out = states.copy()
    for i, pos in enumerate(slots):
        bit = (image >> (op.n - 1 - i)) & 1
        shift = total - pos
        out = (out & ~(np.int64(1) << shift)) | (bit << shift)
    return out


def perm_simplex_check(scheme: SimplexScheme, op: PermOperator) -> Report:
    """Exhaustive n-simplex check for a permutation-type operator.

    Composes the n+1 embedded maps over all ``2**N`` states in both orders of
    the relation; holds iff the two composite permutations agree pointwise.
    """
    if op.n != scheme.n:
        raise ValueError(f"operator arity {op.n} does not match scheme order {scheme.n}")
    t0 = time.perf_counter()
    N = scheme.n_spaces
    tables = [embed_perm_table(op, s, N) for s in scheme.slots]
    # product O_1 O_2 ... O_{n+1} applied to a state: rightmost factor acts first
    lhs = np.arange(1 << N, dtype=np.int64)
    for t in reversed(tables):
        lhs = t[lhs]
    rhs = np.arange(1 << N, dtype=np.int64)
    for t in tables:
        rhs = t[rhs]
    diff = np.nonzero(lhs != rhs)[0]
    witnesses = []
    for state in diff[:8]:
        witnesses.append({
            "col": list(dec_bits(int(state), N)),
            "row": list(dec_bits(int(lhs[state]), N)),
            "poly": f"forward sends state to {list(dec_bits(int(rhs[state]), N))}",
        })
    return Report(
        check=f"simplex-{scheme.n}",
        status="holds" if diff.size == 0 else "fail",
        witnesses=witnesses,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


# Named maps used throughout: the 2D swap and its flip companion, their 3D
# analogues obtained by partial trace of the 4-simplex solution H4.
S2 = AffineBitMap(2, ((0, 1), (1, 0)), (0, 0))
T2 = S2.flipped()
S3 = AffineBitMap(3, ((1, 1, 1), (0, 0, 1), (0, 1, 0)), (0, 0, 0))
T3 = S3.flipped()
H4 = AffineBitMap(4, ((1, 1, 1, 1), (0, 0, 1, 1), (0, 1, 0, 1), (0, 0, 0, 1)), (0, 0, 0, 0))

BUILTIN_MAPS: dict[str, AffineBitMap] = {
    "S2": S2, "T2": T2, "S3": S3, "T3": T3, "H4": H4,
}
