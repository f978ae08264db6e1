"""Symbolic residuals of the parameterized tetrahedron and Yang-Baxter
equations, with exact certification of the five parameter-variety components.

The residual LHS - RHS of either equation is multilinear in each parameter
(each factor enters once per side, linearly in its own parameter).  That makes
ideal membership decidable by linear elimination alone: a generator that is
linear in some variable either substitutes that variable away or, after
multiplying an entry through by the leading coefficient, removes it.  No
Groebner machinery is needed or used.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from random import Random

from . import bitlinalg
from .bitlinalg import PermOperator, SimplexScheme, dec_bits, embed_perm_table
from .opmatrix import OpMatrix, SlotEmbedding, linear_comb
from .polyring import MPoly, VarTable
from .report import Report

TETRA_VARS = VarTable(("a123", "a145", "a246", "a356"))
YB_VARS = VarTable(("lam", "mu", "nu"))

_MAX_WITNESSES = 32


@dataclass(frozen=True)
class CaseIdeal:
    """One component of the parameter variety: generators as printed."""

    id: int
    generators: tuple[MPoly, ...]


def _tetra_poly(build) -> MPoly:
    a123, a145, a246, a356 = (MPoly.var(TETRA_VARS, n) for n in TETRA_VARS.names)
    return build(a123, a145, a246, a356)


CASES: dict[int, CaseIdeal] = {
    1: CaseIdeal(1, (
        _tetra_poly(lambda a123, a145, a246, a356: a356 - 1),
        _tetra_poly(lambda a123, a145, a246, a356: a246 - 1),
    )),
    2: CaseIdeal(2, (
        _tetra_poly(lambda a123, a145, a246, a356: a356 + 1),
        _tetra_poly(lambda a123, a145, a246, a356: a246 + 1),
    )),
    3: CaseIdeal(3, (
        _tetra_poly(lambda a123, a145, a246, a356: a145 * a246 * a356 - a145 + a246 - a356),
        _tetra_poly(lambda a123, a145, a246, a356: a123 - 1),
    )),
    4: CaseIdeal(4, (
        _tetra_poly(lambda a123, a145, a246, a356: a145 * a246 * a356 - a145 - a246 + a356),
        _tetra_poly(lambda a123, a145, a246, a356: a123 + 1),
    )),
    5: CaseIdeal(5, (
        _tetra_poly(lambda a123, a145, a246, a356: a246 - a356),
        _tetra_poly(lambda a123, a145, a246, a356: a145),
    )),
}

YB_CONDITION = MPoly.var(YB_VARS, "lam") - MPoly.var(YB_VARS, "mu") \
    + MPoly.var(YB_VARS, "nu") \
    - MPoly.var(YB_VARS, "lam") * MPoly.var(YB_VARS, "mu") * MPoly.var(YB_VARS, "nu")


# ---------------------------------------------------------------------------
# residual construction
# ---------------------------------------------------------------------------

TETRA_SCHEME = SimplexScheme.standard(3)
YB_SCHEME = SimplexScheme.standard(2)


def _family_factor(base, step, vars: VarTable, param: str,
                   slots: tuple[int, ...], total: int) -> OpMatrix:
    """Embedded operator base + param*step on the given slots."""
    small = linear_comb(
        OpMatrix.from_perm(PermOperator.from_affine(base), vars),
        OpMatrix.from_perm(PermOperator.from_affine(step), vars),
        MPoly.var(vars, param),
    )
    return small.embed(SlotEmbedding(total, slots))


def _product_residual(factors: list[OpMatrix]) -> OpMatrix:
    lhs = factors[0]
    for f in factors[1:]:
        lhs = lhs @ f
    rhs = factors[-1]
    for f in reversed(factors[:-1]):
        rhs = rhs @ f
    return lhs - rhs


def _assert_multilinear(m: OpMatrix) -> None:
    degrees = m.max_degree_per_var()
    bad = {k: v for k, v in degrees.items() if v > 1}
    if bad:
        raise AssertionError(f"residual not multilinear: {bad}")


@lru_cache(maxsize=None)
def build_tetra_residual() -> OpMatrix:
    """LHS - RHS of the parameterized tetrahedron equation on 6 spaces."""
    factors = [
        _family_factor(bitlinalg.S3, bitlinalg.T3, TETRA_VARS, name, slots, 6)
        for name, slots in zip(TETRA_VARS.names, TETRA_SCHEME.slots)
    ]
    residual = _product_residual(factors)
    _assert_multilinear(residual)
    return residual


@lru_cache(maxsize=None)
def build_yb_residual(interpretation: str = "all-r") -> OpMatrix:
    """LHS - RHS of the non-constant Yang-Baxter relation on 3 spaces.

    interpretation "all-r": every factor is S + param*T.
    interpretation "literal": the last factor is read as a T-led family
    T + param*S instead (the middle one is S-led either way).
    """
    if interpretation not in ("all-r", "literal"):
        raise ValueError(f"unknown interpretation {interpretation!r}")
    pairs = [(bitlinalg.S2, bitlinalg.T2)] * 3
    if interpretation == "literal":
        pairs[2] = (bitlinalg.T2, bitlinalg.S2)
    factors = [
        _family_factor(base, step, YB_VARS, name, slots, 3)
        for (base, step), name, slots in zip(pairs, YB_VARS.names, YB_SCHEME.slots)
    ]
    residual = _product_residual(factors)
    _assert_multilinear(residual)
    return residual


# ---------------------------------------------------------------------------
# exact reduction modulo the case ideals
# ---------------------------------------------------------------------------

def _split_generator(gen: MPoly, var: str) -> tuple[MPoly, MPoly]:
    g1, g0 = gen.split_linear(var)
    if g1.is_zero():
        raise ValueError(f"generator {gen.to_str()} is not linear in {var}")
    return g1, g0


def _choose_reduction_var(gen: MPoly, forced: str | None) -> str:
    linear_vars = [n for n in gen.vars.names if gen.degree_in(n) == 1]
    if not linear_vars:
        raise ValueError(f"generator {gen.to_str()} is linear in no variable")
    if forced is not None and forced in linear_vars:
        return forced
    # substitution generators (constant leading coefficient) eliminate the
    # first eligible variable; multiply-through generators the last
    for var in linear_vars:
        g1, _ = gen.split_linear(var)
        if g1.total_degree() == 0:
            return var
    return linear_vars[-1]


def reduce_modulo(p: MPoly, gen: MPoly, var: str) -> MPoly:
    """Eliminate ``var`` from multilinear ``p`` using ``gen = g1*var + g0 = 0``.

    For constant g1 this is plain substitution; otherwise p is multiplied
    through by g1 first, which is harmless on an irreducible component where
    g1 does not vanish identically.
    """
    g1, g0 = _split_generator(gen, var)
    if g1.total_degree() == 0:
        value = g0 * (Fraction(-1) / g1.eval({n: 0 for n in g1.vars.names}))
        return p.substitute(var, value)
    p1, p0 = p.split_linear(var)
    return p1 * (-g0) + g1 * p0


def _reduction_plan(case: CaseIdeal, forced_var: str | None) -> list[tuple[MPoly, str]]:
    plan = [(gen, _choose_reduction_var(gen, forced_var)) for gen in case.generators]
    # apply substitutions before multiply-through reductions
    plan.sort(key=lambda item: 0 if item[0].split_linear(item[1])[0].total_degree() == 0 else 1)
    return plan


def verify_case(case: CaseIdeal, reduce_var: str | None = None) -> Report:
    """Certify that the tetrahedron residual vanishes on one case component."""
    t0 = time.perf_counter()
    residual = build_tetra_residual()
    plan = _reduction_plan(case, reduce_var)
    witnesses = []
    for i, j, p in residual.nonzero_items():
        q = p
        for gen, var in plan:
            q = reduce_modulo(q, gen, var)
        if not q.is_zero() and len(witnesses) < _MAX_WITNESSES:
            witnesses.append({
                "row": list(dec_bits(i, residual.sites)),
                "col": list(dec_bits(j, residual.sites)),
                "poly": q.to_str(),
            })
    return Report(
        check=f"tetra-case-{case.id}",
        status="certified" if not witnesses else "fail",
        witnesses=witnesses,
        max_degree_per_var=residual.max_degree_per_var(),
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


# ---------------------------------------------------------------------------
# fast exact evaluation of the residual at rational points
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _family_tables(which: str) -> tuple[list[tuple[list[int], list[int]]], int]:
    """Embedded permutation tables (base, step) per factor, plus state count."""
    if which == "tetra":
        scheme, base, step = TETRA_SCHEME, bitlinalg.S3, bitlinalg.T3
    elif which == "yb-all-r" or which == "yb-literal":
        scheme, base, step = YB_SCHEME, bitlinalg.S2, bitlinalg.T2
    else:
        raise ValueError(which)
    n_states = 1 << scheme.n_spaces
    base_op = PermOperator.from_affine(base)
    step_op = PermOperator.from_affine(step)
    tables = []
    for slots in scheme.slots:
        tables.append((
            embed_perm_table(base_op, slots, scheme.n_spaces).tolist(),
            embed_perm_table(step_op, slots, scheme.n_spaces).tolist(),
        ))
    if which == "yb-literal":
        b, s = tables[2]
        tables[2] = (s, b)
    return tables, n_states


def _residual_witness_at(which: str, params: tuple[Fraction, ...]):
    """First nonzero entry of LHS - RHS at a rational point, or None.

    Works on integer-scaled factors (den*base + num*step); both product orders
    carry the same overall denominator, so integer comparison is exact.
    """
    tables, n_states = _family_tables(which)
    scaled = []
    denom = 1
    for (base_tab, step_tab), p in zip(tables, params):
        scaled.append((base_tab, step_tab, p.numerator, p.denominator))
        denom *= p.denominator
    def apply_all(order, col):
        vec = {col: 1}
        for idx in order:
            base_tab, step_tab, num, den = scaled[idx]
            out: dict[int, int] = {}
            for state, value in vec.items():
                r = base_tab[state]
                out[r] = out.get(r, 0) + den * value
                if num:
                    r = step_tab[state]
                    out[r] = out.get(r, 0) + num * value
            vec = {k: v for k, v in out.items() if v}
        return vec
    n = len(scaled)
    for col in range(n_states):
        lhs = apply_all(range(n - 1, -1, -1), col)
        rhs = apply_all(range(n), col)
        if lhs != rhs:
            rows = set(lhs) | set(rhs)
            for row in sorted(rows):
                diff = lhs.get(row, 0) - rhs.get(row, 0)
                if diff:
                    return row, col, Fraction(diff, denom)
    return None


def tetra_residual_at(point: dict[str, Fraction]):
    params = tuple(Fraction(point[n]) for n in TETRA_VARS.names)
    return _residual_witness_at("tetra", params)


def yb_residual_at(point: dict[str, Fraction], interpretation: str = "all-r"):
    params = tuple(Fraction(point[n]) for n in YB_VARS.names)
    return _residual_witness_at(f"yb-{interpretation}", params)


# ---------------------------------------------------------------------------
# rational sampling
# ---------------------------------------------------------------------------

_NONZERO_DIGITS = [i for i in range(-9, 10) if i != 0]


def rand_rational(rng: Random) -> Fraction:
    """Random rational with numerator and denominator in [-9,9] \\ {0}."""
    return Fraction(rng.choice(_NONZERO_DIGITS), rng.choice(_NONZERO_DIGITS))


def sample_case_point(case: CaseIdeal, rng: Random) -> dict[str, Fraction]:
    """Random exact point on the case component.

    Free variables are drawn as small rationals; each generator then solves
    its reduction variable.  Points hitting a vanishing leading coefficient
    are redrawn.
    """
    plan = _reduction_plan(case, None)
    while True:
        point = {name: rand_rational(rng) for name in TETRA_VARS.names}
        ok = True
        for gen, var in plan:
            g1, g0 = _split_generator(gen, var)
            lead = g1.eval(point)
            if lead == 0:
                ok = False
                break
            point[var] = -g0.eval(point) / lead
        if ok:
            return point


def on_any_case(point: dict[str, Fraction]) -> bool:
    return any(
        all(gen.eval(point) == 0 for gen in case.generators)
        for case in CASES.values()
    )


def _point_witness(point: dict[str, Fraction], names, hit, sites: int = 6) -> dict:
    where = ", ".join(f"{n}={point[n]}" for n in names)
    if hit is not None:
        row, col, value = hit
        return {
            "row": list(dec_bits(row, sites)),
            "col": list(dec_bits(col, sites)),
            "poly": f"value {value} at {where}",
        }
    return {"row": [], "col": [], "poly": f"residual zero at {where}"}


def sample_case(case: CaseIdeal, count: int, seed: int) -> Report:
    """Evaluate the residual at ``count`` sampled on-component points."""
    t0 = time.perf_counter()
    rng = Random(seed)
    witnesses = []
    for _ in range(count):
        point = sample_case_point(case, rng)
        assert all(gen.eval(point) == 0 for gen in case.generators)
        hit = tetra_residual_at(point)
        if hit is not None and len(witnesses) < _MAX_WITNESSES:
            witnesses.append(_point_witness(point, TETRA_VARS.names, hit))
    return Report(
        check=f"tetra-sample-case-{case.id}",
        status="pass" if not witnesses else "fail",
        seed=seed,
        points=count,
        witnesses=witnesses,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


def sample_off_variety(count: int, seed: int) -> Report:
    """Necessity control: points off all five components must violate the equation."""
    t0 = time.perf_counter()
    rng = Random(seed)
    witnesses = []
    for _ in range(count):
        while True:
            point = {name: rand_rational(rng) for name in TETRA_VARS.names}
            if not on_any_case(point):
                break
        hit = tetra_residual_at(point)
        if hit is None and len(witnesses) < _MAX_WITNESSES:
            witnesses.append(_point_witness(point, TETRA_VARS.names, None))
    return Report(
        check="tetra-off-variety",
        status="pass" if not witnesses else "fail",
        seed=seed,
        points=count,
        witnesses=witnesses,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


# ---------------------------------------------------------------------------
# Yang-Baxter condition
# ---------------------------------------------------------------------------

def verify_yb_condition(interpretation: str = "all-r", points: int = 100,
                        seed: int = 42) -> Report:
    """Two-sided check of the Yang-Baxter parameter condition.

    Sufficiency: every residual entry reduces to zero modulo
    lam - mu + nu - lam*mu*nu (eliminated in lam).  Necessity, sampled:
    random points violating the condition must give a nonzero residual.
    """
    t0 = time.perf_counter()
    residual = build_yb_residual(interpretation)
    witnesses = []
    for i, j, p in residual.nonzero_items():
        q = reduce_modulo(p, YB_CONDITION, "lam")
        if not q.is_zero() and len(witnesses) < _MAX_WITNESSES:
            witnesses.append({
                "row": list(dec_bits(i, residual.sites)),
                "col": list(dec_bits(j, residual.sites)),
                "poly": q.to_str(),
            })
    sufficiency_ok = not witnesses
    rng = Random(seed)
    for _ in range(points):
        while True:
            point = {name: rand_rational(rng) for name in YB_VARS.names}
            if YB_CONDITION.eval(point) != 0:
                break
        hit = yb_residual_at(point, interpretation)
        if hit is None and len(witnesses) < _MAX_WITNESSES:
            witnesses.append(_point_witness(point, YB_VARS.names, None))
    return Report(
        check="yb-condition",
        status="certified" if sufficiency_ok and not witnesses else "fail",
        interpretation=interpretation,
        seed=seed,
        points=points,
        witnesses=witnesses,
        max_degree_per_var=residual.max_degree_per_var(),
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


# ---------------------------------------------------------------------------
# additive (atanh) form of the Case 3 relation
# ---------------------------------------------------------------------------

ATANH_TOL = 1e-12


def additive_form_poly() -> MPoly:
    """a246*(1 + a145*a356) - (a145 + a356), the tanh-addition form."""
    a145 = MPoly.var(TETRA_VARS, "a145")
    a246 = MPoly.var(TETRA_VARS, "a246")
    a356 = MPoly.var(TETRA_VARS, "a356")
    return a246 * (a145 * a356 + 1) - (a145 + a356)


def atanh_consistency(points: int = 50, seed: int = 42) -> Report:
    """Case 3 as atanh addition: symbolic equivalence plus float spot checks."""
    t0 = time.perf_counter()
    additive = additive_form_poly()
    case3 = CASES[3].generators[0]
    witnesses = []
    if additive != case3 and additive != -case3:
        witnesses.append({"row": [], "col": [], "poly": f"additive form is {additive.to_str()}"})
    rng = Random(seed)
    checked = 0
    while checked < points:
        a145 = rand_rational(rng)
        a356 = rand_rational(rng)
        if abs(a145) >= 1 or abs(a356) >= 1:
            continue
        a246 = (a145 + a356) / (1 + a145 * a356)
        point = {"a123": Fraction(1), "a145": a145, "a246": a246, "a356": a356}
        assert case3.eval(point) == 0
        gap = math.atanh(float(a246)) - math.atanh(float(a145)) - math.atanh(float(a356))
        if abs(gap) >= ATANH_TOL and len(witnesses) < _MAX_WITNESSES:
            witnesses.append({
                "row": [], "col": [],
                "poly": f"atanh gap {gap:.3e} at a145={a145}, a356={a356}",
            })
        checked += 1
    return Report(
        check="atanh-additive",
        status="certified" if not witnesses else "fail",
        seed=seed,
        points=points,
        witnesses=witnesses,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )
