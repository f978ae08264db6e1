"""Transfer matrices for the 2D model and desk-scale 3D partition functions.

The row transfer matrix traces one auxiliary two-dimensional space out of an
ordered product of R(mu) = S + mu*T factors along a periodic chain.  Its
commutation for two symbolic parameters is checked as a polynomial matrix
identity, which covers the non-invertible parameter values as well.  The 3D
sixteen-vertex partition function is exhaustive edge-coloring enumeration,
exact by construction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Union

from . import bitlinalg, kernels
from .bitlinalg import PermOperator, dec_bits
from .opmatrix import OpMatrix, SlotEmbedding, linear_comb
from .polyring import EMPTY_VARS, MPoly, Rational, VarTable
from .report import Report

TRANSFER_VARS = VarTable(("mu", "nu"))
PARTITION_VARS = VarTable(("a",))

Param = Union[str, Rational]


@dataclass(frozen=True)
class ChainSpec:
    """Periodic quantum chain for the 2D model."""

    n_sites: int

    def __post_init__(self) -> None:
        if not 1 <= self.n_sites <= 6:
            raise ValueError(f"chain length {self.n_sites} outside 1..6")


@dataclass(frozen=True)
class Lattice3D:
    """Periodic 3D lattice small enough for exhaustive enumeration."""

    dims: tuple[int, int, int]

    def __post_init__(self) -> None:
        lx, ly, lz = self.dims
        if min(self.dims) < 1:
            raise ValueError(f"bad dimensions {self.dims}")
        if lx * ly * lz > 8 or 3 * lx * ly * lz > 27:
            raise ValueError(f"lattice {self.dims} too large for exhaustive enumeration")

    @property
    def n_vertices(self) -> int:
        lx, ly, lz = self.dims
        return lx * ly * lz


def _r2_matrix(vars: VarTable, param: Param) -> OpMatrix:
    s = OpMatrix.from_perm(PermOperator.from_affine(bitlinalg.S2), vars)
    t = OpMatrix.from_perm(PermOperator.from_affine(bitlinalg.T2), vars)
    coeff = MPoly.var(vars, param) if isinstance(param, str) else MPoly.const(vars, param)
    return linear_comb(s, t, coeff)


def row_transfer(chain: ChainSpec, param: Param,
                 vars: VarTable | None = None,
                 local_op: OpMatrix | None = None) -> OpMatrix:
    """Trace of R_{aux,n}(param) ... R_{aux,1}(param) over the auxiliary space.

    The auxiliary space is site 1 of an (n+1)-site product; chain site k sits
    at tensor position k+1.  ``local_op`` overrides the local R-matrix (used
    by the perturbation control).
    """
    if vars is None:
        vars = TRANSFER_VARS if isinstance(param, str) else EMPTY_VARS
    local = local_op if local_op is not None else _r2_matrix(vars, param)
    total = chain.n_sites + 1
    product = None
    for k in range(chain.n_sites, 0, -1):
        factor = local.embed(SlotEmbedding(total, (1, k + 1)))
        product = factor if product is None else product @ factor
    return product.partial_trace(1)


def transfer_commutator(chain: ChainSpec, local_ops: tuple[OpMatrix, OpMatrix] | None = None) -> Report:
    """[T(mu), T(nu)] as a polynomial matrix; commutation iff identically zero."""
    if chain.n_sites > 4:
        raise ValueError("symbolic commutator check limited to chains of length <= 4")
    t0 = time.perf_counter()
    if local_ops is None:
        t_mu = row_transfer(chain, "mu", TRANSFER_VARS)
        t_nu = row_transfer(chain, "nu", TRANSFER_VARS)
    else:
        t_mu = row_transfer(chain, "mu", TRANSFER_VARS, local_ops[0])
        t_nu = row_transfer(chain, "nu", TRANSFER_VARS, local_ops[1])
    commutator = t_mu @ t_nu - t_nu @ t_mu
    witnesses = [
        {
            "row": list(dec_bits(i, commutator.sites)),
            "col": list(dec_bits(j, commutator.sites)),
            "poly": p.to_str(),
        }
        for i, j, p in commutator.nonzero_items()
    ][:16]
    return Report(
        check=f"transfer-commute-{chain.n_sites}",
        status="commute" if commutator.is_zero() else "fail",
        witnesses=witnesses,
        max_degree_per_var=t_mu.max_degree_per_var(),
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


def perturbed_local_ops(seed: int) -> tuple[OpMatrix, OpMatrix]:
    """Controls S + mu*T + mu^2*E with a fixed random integer matrix E."""
    rng = Random(seed)
    noise = {
        (i, j): Fraction(rng.randint(-3, 3))
        for i in range(4)
        for j in range(4)
    }
    ops = []
    for name in TRANSFER_VARS.names:
        base = _r2_matrix(TRANSFER_VARS, name)
        sq = MPoly.var(TRANSFER_VARS, name) ** 2
        noise_m = OpMatrix.from_entries(2, TRANSFER_VARS, noise).scaled(sq)
        ops.append(base + noise_m)
    return ops[0], ops[1]


def transfer_commutator_control(chain: ChainSpec, seed: int = 7) -> Report:
    """Same check with a perturbed local operator; expected not to commute."""
    report = transfer_commutator(chain, perturbed_local_ops(seed))
    report.check = f"transfer-commute-control-{chain.n_sites}"
    report.seed = seed
    return report


def rlm_check(r: OpMatrix, l: OpMatrix, m: OpMatrix) -> Report:
    """Intertwining check R_12 L_13 M_23 = M_23 L_13 R_12 on three spaces."""
    for op in (r, l, m):
        if op.sites != 2:
            raise ValueError("rlm_check expects 2-site operators")
    t0 = time.perf_counter()
    r12 = r.embed(SlotEmbedding(3, (1, 2)))
    l13 = l.embed(SlotEmbedding(3, (1, 3)))
    m23 = m.embed(SlotEmbedding(3, (2, 3)))
    diff = r12 @ l13 @ m23 - m23 @ l13 @ r12
    witnesses = [
        {
            "row": list(dec_bits(i, 3)),
            "col": list(dec_bits(j, 3)),
            "poly": p.to_str(),
        }
        for i, j, p in diff.nonzero_items()
    ][:16]
    return Report(
        check="rlm",
        status="holds" if diff.is_zero() else "fail",
        witnesses=witnesses,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


def partition_polynomial(lat: Lattice3D,
                         axis_perm: tuple[int, int, int] = (0, 1, 2),
                         force_backend: str | None = None) -> MPoly:
    """Symbolic Z(a): coefficient k counts valid colorings with k flip vertices."""
    counts = kernels.partition_counts(lat.dims, axis_perm, force_backend)
    terms = {(k,): Fraction(int(c)) for k, c in enumerate(counts)}
    return MPoly(PARTITION_VARS, terms)


def partition_3d(lat: Lattice3D, a: Rational | None = None,
                 axis_perm: tuple[int, int, int] = (0, 1, 2),
                 force_backend: str | None = None) -> Union[MPoly, Fraction]:
    """Partition function of the 3D sixteen-vertex model; symbolic when ``a`` is None."""
    poly = partition_polynomial(lat, axis_perm, force_backend)
    if a is None:
        return poly
    return poly.eval({"a": Fraction(a)})
