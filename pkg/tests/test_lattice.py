"""Transfer matrices, intertwining checks, and the 3D partition function."""

from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from tetraverify import bitlinalg, kernels
from tetraverify.bitlinalg import PermOperator, dec_bits, enc_bits
from tetraverify.lattice import (
    ChainSpec,
    Lattice3D,
    partition_3d,
    perturbed_local_ops,
    rlm_check,
    row_transfer,
    transfer_commutator,
    transfer_commutator_control,
)
from tetraverify.opmatrix import OpMatrix, linear_comb
from tetraverify.polyring import MPoly, VarTable

F = Fraction
VA = VarTable(("a",))


def r2_at(value):
    base = OpMatrix.from_perm(PermOperator.from_affine(bitlinalg.S2), VA)
    step = OpMatrix.from_perm(PermOperator.from_affine(bitlinalg.T2), VA)
    return linear_comb(base, step, MPoly.var(VA, "a")).evaluate({"a": F(value)})


# --- row transfer matrices ------------------------------------------------------

def test_row_transfer_single_site():
    t0 = row_transfer(ChainSpec(1), F(0))
    assert t0 == OpMatrix.identity(1).evaluate({})
    t1 = row_transfer(ChainSpec(1), F(1))
    assert t1 == OpMatrix.identity(1).evaluate({}).scaled(F(2))


def test_row_transfer_at_zero_is_translation():
    # swaps only: T(0) shifts the chain content cyclically by one site
    t0 = row_transfer(ChainSpec(3), F(0))
    shift = PermOperator(3, tuple(
        enc_bits((bits[2], bits[0], bits[1]))
        for bits in (dec_bits(x, 3) for x in range(8))
    ))
    assert t0 == OpMatrix.from_perm(shift).evaluate({})


def test_row_transfer_symbolic_degree():
    t = row_transfer(ChainSpec(2), "mu")
    assert t.max_degree_per_var()["mu"] == 2
    assert t.max_degree_per_var()["nu"] == 0


def test_row_transfer_well_defined_at_singular_parameter():
    # R(1) has determinant zero, yet the traced transfer matrix exists
    t_sym = row_transfer(ChainSpec(2), "mu")
    t_one = row_transfer(ChainSpec(2), F(1))
    assert t_sym.evaluate({"mu": 1, "nu": 0}) == t_one
    assert not t_one.is_zero()


def test_transfer_matrices_commute():
    for n in (2, 3):
        report = transfer_commutator(ChainSpec(n))
        assert report.status == "commute", n


def test_transfer_commutes_with_translation():
    # [T(mu), T(nu)] = 0 includes nu = 0, the translation operator
    t_mu = row_transfer(ChainSpec(3), "mu")
    t_zero = row_transfer(ChainSpec(3), "nu").evaluate({"mu": 0, "nu": 0})
    lhs = t_mu.evaluate({"mu": F(5, 3), "nu": 0})
    assert lhs @ t_zero == t_zero @ lhs


def test_transfer_control_does_not_commute():
    report = transfer_commutator_control(ChainSpec(2), seed=7)
    assert report.status == "fail"
    assert report.witnesses


def test_perturbed_ops_reduce_to_family():
    # the perturbation enters at order mu^2 only, so mu=0 still gives the swap
    mu_op, _ = perturbed_local_ops(seed=7)
    assert mu_op.evaluate({"mu": 0, "nu": 0}) == \
        OpMatrix.from_perm(PermOperator.from_affine(bitlinalg.S2)).evaluate({})
    assert mu_op.max_degree_per_var()["mu"] == 2


def test_chain_spec_validation():
    with pytest.raises(ValueError):
        ChainSpec(0)
    with pytest.raises(ValueError):
        ChainSpec(7)
    with pytest.raises(ValueError):
        transfer_commutator(ChainSpec(5))


# --- R L M intertwining -----------------------------------------------------------

def test_rlm_swap_holds():
    s = OpMatrix.from_perm(PermOperator.from_affine(bitlinalg.S2))
    assert rlm_check(s, s, s).status == "holds"


def test_rlm_on_condition_holds():
    # lam - mu + nu - lam*mu*nu = 0 at (1/3, 1/2, 1/5)
    assert F(1, 3) - F(1, 2) + F(1, 5) - F(1, 3) * F(1, 2) * F(1, 5) == 0
    report = rlm_check(r2_at(F(1, 3)), r2_at(F(1, 2)), r2_at(F(1, 5)))
    assert report.status == "holds"


def test_rlm_off_condition_fails_with_witness():
    report = rlm_check(r2_at(1), r2_at(2), r2_at(3))
    assert report.status == "fail"
    assert report.witnesses


def test_rlm_validates_arity():
    with pytest.raises(ValueError):
        rlm_check(OpMatrix.identity(3), OpMatrix.identity(3), OpMatrix.identity(3))


# --- partition function -----------------------------------------------------------

SMALL_DIMS = [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 2, 2)]


def gf2_solution_count(dims, flip: bool) -> int:
    """Independent oracle for the extreme coefficients of Z.

    All-keep (flip=False) and all-flip (flip=True) colorings satisfy an
    affine system over GF(2): out-edges = S3(in-edges) (+1 per bit if
    flipped) at every vertex.  The count is 2**nullity when consistent.
    """
    incoming, outgoing = kernels.vertex_edge_indices(dims)
    n_edges = 3 * len(incoming)
    rows = []
    rhs = []
    for ins, outs in zip(incoming, outgoing):
        for r, row_bits in enumerate(bitlinalg.S3.a):
            coeffs = [0] * n_edges
            for c, e in enumerate(ins):
                coeffs[int(e)] ^= row_bits[c]
            coeffs[int(outs[r])] ^= 1
            rows.append(coeffs)
            rhs.append(1 if flip else 0)
    # gaussian elimination over GF(2)
    m = [row + [b] for row, b in zip(rows, rhs)]
    rank = 0
    for col in range(n_edges):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                m[r] = [x ^ y for x, y in zip(m[r], m[rank])]
        rank += 1
    for r in range(rank, len(m)):
        if m[r][n_edges]:
            return 0
    return 1 << (n_edges - rank)


@pytest.mark.parametrize("dims", SMALL_DIMS)
def test_backends_agree_with_reference(dims):
    ref = kernels.partition_counts(dims, force_backend="python")
    for backend in ("numpy", "numba"):
        got = kernels.partition_counts(dims, force_backend=backend)
        assert got.tolist() == ref.tolist(), backend


@pytest.mark.parametrize("dims", SMALL_DIMS + [(1, 2, 3)])
def test_extreme_coefficients_match_gf2_oracle(dims):
    counts = kernels.partition_counts(dims, force_backend="numpy")
    assert counts[0] == gf2_solution_count(dims, flip=False)
    assert counts[-1] == gf2_solution_count(dims, flip=True)


@pytest.mark.parametrize("dims", SMALL_DIMS + [(1, 2, 3)])
def test_counts_are_palindromic(dims):
    # complementing all y-edge colors swaps keep- and flip-type vertices
    counts = kernels.partition_counts(dims, force_backend="numpy").tolist()
    assert counts == counts[::-1]


def test_partition_111_polynomial():
    z = partition_3d(Lattice3D((1, 1, 1)))
    va = VarTable(("a",))
    assert z == MPoly.const(va, 4) + MPoly.var(va, "a") * 4
    assert z.to_str() == "4*a + 4"
    assert partition_3d(Lattice3D((1, 1, 1)), a=F(1, 2)) == F(6)


def test_partition_value_mode():
    assert partition_3d(Lattice3D((1, 1, 2)), a=F(1, 2)) == F(18)
    assert partition_3d(Lattice3D((1, 1, 2)), a=1) == 32


def test_translation_invariance():
    # shifting the periodic lattice origin leaves every count unchanged
    dims = (1, 2, 2)
    base = kernels.partition_counts(dims, force_backend="numpy").tolist()
    lx, ly, lz = dims
    def shifted_indices(dx, dy, dz):
        def edge(x, y, z, d):
            return ((((x + dx) % lx) * ly + ((y + dy) % ly)) * lz + ((z + dz) % lz)) * 3 + d
        incoming, outgoing = [], []
        for x in range(lx):
            for y in range(ly):
                for z in range(lz):
                    incoming.append((edge(x - 1, y, z, 0), edge(x, y - 1, z, 1), edge(x, y, z - 1, 2)))
                    outgoing.append((edge(x, y, z, 0), edge(x, y, z, 1), edge(x, y, z, 2)))
        return np.array(incoming), np.array(outgoing)
    table = kernels.vertex_type_table()
    for shift in [(0, 1, 0), (0, 0, 1), (0, 1, 1)]:
        incoming, outgoing = shifted_indices(*shift)
        counts = kernels._counts_numpy(incoming, outgoing, table, 3 * lx * ly * lz)
        assert counts.tolist() == base


def test_axis_relabeling_identity():
    # relabeling lattice axes while conjugating the vertex convention is a
    # pure reindexing of the same sum
    dims = (1, 2, 3)
    for sigma in permutations(range(3)):
        permuted_dims = [0, 0, 0]
        for k in range(3):
            permuted_dims[sigma[k]] = dims[k]
        relabeled = kernels.partition_counts(tuple(permuted_dims), force_backend="numpy")
        conjugated = kernels.partition_counts(dims, axis_perm=sigma, force_backend="numpy")
        assert relabeled.tolist() == conjugated.tolist()


def test_yz_swap_is_a_weight_symmetry():
    # swapping the two non-x axes conjugates the vertex table into itself
    assert kernels.vertex_type_table((0, 2, 1)).tolist() == \
        kernels.vertex_type_table().tolist()
    a = kernels.partition_counts((2, 1, 2), force_backend="numpy")
    b = kernels.partition_counts((2, 2, 1), force_backend="numpy")
    assert a.tolist() == b.tolist()


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("TETRAVERIFY_NO_NUMBA", "1")
    assert kernels.backend() == "numpy"
    monkeypatch.delenv("TETRAVERIFY_NO_NUMBA")
    assert kernels.backend() == "numba"


def test_axis_perm_validation():
    with pytest.raises(ValueError):
        kernels.vertex_type_table((0, 0, 1))
    with pytest.raises(ValueError):
        kernels.partition_counts((3, 3, 3))
    with pytest.raises(ValueError):
        Lattice3D((0, 1, 1))
    with pytest.raises(ValueError):
        Lattice3D((3, 3, 1))


def test_reference_backend_guard():
    with pytest.raises(ValueError):
        kernels.partition_counts((2, 2, 2), force_backend="python")
