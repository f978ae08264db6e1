"""Brute-force coloring enumeration kernels for the 3D sixteen-vertex model.

The only hot loop in the package: summing vertex weights over all 2**E edge
colorings of a small periodic lattice (E <= 24, so up to ~16.7M states).  The
default backend is a numba @njit kernel; setting the environment variable
``TETRAVERIFY_NO_NUMBA`` (to any non-empty value) selects a chunked
pure-numpy path instead.  Both return identical exact integer counts
``c[k] = number of valid colorings with k flip-type vertices``, so the
partition function Z(a) = sum_k c[k] a^k stays exact regardless of backend.
"""

from __future__ import annotations

import os

import numpy as np

from .bitlinalg import S3, dec_bits, enc_bits

_CHUNK = 1 << 20


def backend() -> str:
    if os.environ.get("TETRAVERIFY_NO_NUMBA"):
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def vertex_type_table(axis_perm: tuple[int, int, int] = (0, 1, 2)) -> np.ndarray:
    """64-entry lookup: type of (in, out) index pair (0 invalid, 1 keep, 2 flip).

    ``axis_perm`` conjugates the convention: slot r of each triple reads the
    lattice axis axis_perm[r].
    """
    if sorted(axis_perm) != [0, 1, 2]:
        raise ValueError(f"not an axis permutation: {axis_perm}")
    table = np.zeros(64, dtype=np.uint8)
    for i in range(8):
        in_bits = dec_bits(i, 3)
        keep = S3.apply(in_bits)
        flip = tuple(b ^ 1 for b in keep)
        i_perm = enc_bits(tuple(in_bits[axis_perm[r]] for r in range(3)))
        keep_perm = enc_bits(tuple(keep[axis_perm[r]] for r in range(3)))
        flip_perm = enc_bits(tuple(flip[axis_perm[r]] for r in range(3)))
        table[i_perm * 8 + keep_perm] = 1
        table[i_perm * 8 + flip_perm] = 2
    return table


def vertex_edge_indices(dims: tuple[int, int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Per-vertex edge indices: incoming (from -x,-y,-z) and outgoing (x,y,z)."""
    lx, ly, lz = dims
    def edge(x: int, y: int, z: int, d: int) -> int:
        return (((x % lx) * ly + (y % ly)) * lz + (z % lz)) * 3 + d
    incoming = []
    outgoing = []
    for x in range(lx):
        for y in range(ly):
            for z in range(lz):
                incoming.append((edge(x - 1, y, z, 0), edge(x, y - 1, z, 1), edge(x, y, z - 1, 2)))
                outgoing.append((edge(x, y, z, 0), edge(x, y, z, 1), edge(x, y, z, 2)))
    return np.array(incoming, dtype=np.int64), np.array(outgoing, dtype=np.int64)


def _counts_numpy(incoming: np.ndarray, outgoing: np.ndarray,
                  table: np.ndarray, n_edges: int) -> np.ndarray:
    n_vertices = incoming.shape[0]
    counts = np.zeros(n_vertices + 1, dtype=np.int64)
    total = 1 << n_edges
    for start in range(0, total, _CHUNK):
        states = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        valid = np.ones(states.shape, dtype=bool)
        flips = np.zeros(states.shape, dtype=np.int8)
        for v in range(n_vertices):
            idx = np.zeros(states.shape, dtype=np.int64)
            for e in incoming[v]:
                idx = (idx << 1) | ((states >> int(e)) & 1)
            for e in outgoing[v]:
                idx = (idx << 1) | ((states >> int(e)) & 1)
            t = table[idx]
            valid &= t > 0
            flips += (t == 2).astype(np.int8)
        counts += np.bincount(flips[valid].astype(np.int64), minlength=n_vertices + 1)
    return counts


def _counts_python(incoming: np.ndarray, outgoing: np.ndarray,
                   table: np.ndarray, n_edges: int) -> np.ndarray:
    """Reference enumeration, one coloring at a time.  Only for tiny lattices."""
    if n_edges > 15:
        raise ValueError("reference enumeration limited to 15 edges")
    n_vertices = incoming.shape[0]
    counts = np.zeros(n_vertices + 1, dtype=np.int64)
    pairs = [(list(map(int, i)), list(map(int, o))) for i, o in zip(incoming, outgoing)]
    tab = table.tolist()
    for state in range(1 << n_edges):
        flips = 0
        for ins, outs in pairs:
            idx = 0
            for e in ins:
                idx = (idx << 1) | ((state >> e) & 1)
            for e in outs:
                idx = (idx << 1) | ((state >> e) & 1)
            t = tab[idx]
            if t == 0:
                flips = -1
                break
            if t == 2:
                flips += 1
        if flips >= 0:
            counts[flips] += 1
    return counts


_njit_kernel = None


def _get_njit_kernel():
    global _njit_kernel
    if _njit_kernel is None:
        from numba import njit

        @njit(cache=True)
        def kernel(incoming, outgoing, table, n_edges):  # pragma: no cover - jitted
            n_vertices = incoming.shape[0]
            counts = np.zeros(n_vertices + 1, dtype=np.int64)
            total = 1 << n_edges
            for state in range(total):
                flips = 0
                ok = True
                for v in range(n_vertices):
                    idx = 0
                    for e in incoming[v]:
                        idx = (idx << 1) | ((state >> e) & 1)
                    for e in outgoing[v]:
                        idx = (idx << 1) | ((state >> e) & 1)
                    t = table[idx]
                    if t == 0:
                        ok = False
                        break
                    if t == 2:
                        flips += 1
                if ok:
                    counts[flips] += 1
            return counts

        _njit_kernel = kernel
    return _njit_kernel


def partition_counts(dims: tuple[int, int, int],
                     axis_perm: tuple[int, int, int] = (0, 1, 2),
                     force_backend: str | None = None) -> np.ndarray:
    """Exact counts of valid colorings by number of flip-type vertices."""
    lx, ly, lz = dims
    n_vertices = lx * ly * lz
    n_edges = 3 * n_vertices
    if n_vertices < 1:
        raise ValueError(f"empty lattice {dims}")
    if n_vertices > 8 or n_edges > 27:
        raise ValueError(f"lattice {dims} too large for exhaustive enumeration")
    incoming, outgoing = vertex_edge_indices(dims)
    table = vertex_type_table(axis_perm)
    chosen = force_backend or backend()
    if chosen == "numba":
        return _get_njit_kernel()(incoming, outgoing, table, n_edges)
    if chosen == "numpy":
        return _counts_numpy(incoming, outgoing, table, n_edges)
    if chosen == "python":
        return _counts_python(incoming, outgoing, table, n_edges)
    raise ValueError(f"unknown backend {chosen!r}")
