"""GF(2) maps, [A|B] parsing, simplex schemes, permutation-level checks."""

import random

import pytest

from tetraverify.bitlinalg import (
    ABParseError,
    AffineBitMap,
    BUILTIN_MAPS,
    H4,
    PermOperator,
    S2,
    S3,
    SimplexScheme,
    T2,
    T3,
    apply_map,
    dec_bits,
    embed_perm_table,
    enc_bits,
    parse_ab,
    perm_simplex_check,
)

S3_TEXT = "1 1 1|0\n0 0 1|0\n0 1 0|0\n"
H4_TEXT = "1 1 1 1|0\n0 0 1 1|0\n0 1 0 1|0\n0 0 0 1|0\n"


def gf2_apply_oracle(a, b, x):
    """Independent mod-2 matrix-vector arithmetic."""
    n = len(b)
    return tuple((sum(a[i][j] * x[j] for j in range(n)) + b[i]) % 2 for i in range(n))


def test_parse_s3():
    assert parse_ab(S3_TEXT) == S3


def test_parse_identity():
    assert parse_ab("1 0|0\n0 1|0\n") == AffineBitMap(2, ((1, 0), (0, 1)), (0, 0))


def test_parse_h4():
    assert parse_ab(H4_TEXT) == H4


def test_parse_comments_and_blanks():
    text = "# the three-index map\n\n" + S3_TEXT
    assert parse_ab(text) == S3


def test_parse_errors_name_lines():
    with pytest.raises(ABParseError, match="line 2"):
        parse_ab("1 1 1|0\n0 0 x|0\n0 1 0|0\n")
    with pytest.raises(ABParseError, match="line 3"):
        parse_ab("1 1|0\n0 1|0\n0 1 0|0\n")
    with pytest.raises(ABParseError, match="line 1"):
        parse_ab("1 1 1 0\n")
    with pytest.raises(ABParseError, match="line 2"):
        parse_ab("1 1|0\n0 2|0\n")
    with pytest.raises(ABParseError):
        parse_ab("# nothing here\n")
    with pytest.raises(ABParseError):
        parse_ab("1 1 1|0\n0 0 1|0\n")  # 3-bit rows need 3 rows


def test_writer_round_trip():
    for name, m in BUILTIN_MAPS.items():
        assert parse_ab(m.to_text()) == m, name
    assert S3.to_text() == S3_TEXT


def test_apply_examples():
    assert apply_map(S3, (1, 0, 1)) == (0, 1, 0)
    assert apply_map(S3, (1, 0, 1)) == gf2_apply_oracle(S3.a, S3.b, (1, 0, 1))
    assert apply_map(T3, (0, 0, 0)) == (1, 1, 1)
    ident = parse_ab("1 0|0\n0 1|0\n")
    for x in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        assert apply_map(ident, x) == x


def test_apply_matches_oracle_everywhere():
    for m in BUILTIN_MAPS.values():
        for value in range(1 << m.n):
            x = dec_bits(value, m.n)
            assert m.apply(x) == gf2_apply_oracle(m.a, m.b, x)


def test_apply_arity_mismatch():
    with pytest.raises(ValueError):
        S3.apply((0, 1))


def test_t_is_flip_of_s():
    for value in range(8):
        x = dec_bits(value, 3)
        assert T3.apply(x) == tuple(b ^ 1 for b in S3.apply(x))
    assert T3 == S3.flipped()
    assert T2 == S2.flipped()


def test_invertibility_and_bijection():
    for m in BUILTIN_MAPS.values():
        assert m.is_invertible()
        op = PermOperator.from_affine(m)
        assert op.is_bijection()
        assert sorted(op.table) == list(range(1 << m.n))
    singular = AffineBitMap(2, ((1, 1), (1, 1)), (0, 0))
    assert not singular.is_invertible()
    assert not PermOperator.from_affine(singular).is_bijection()


def test_encoding_bijection():
    assert [enc_bits(dec_bits(v, 4)) for v in range(16)] == list(range(16))
    assert enc_bits((1, 0, 1)) == 5  # first factor is the most significant bit


def test_scheme_slots():
    assert SimplexScheme.standard(2).slots == ((1, 2), (1, 3), (2, 3))
    assert SimplexScheme.standard(3).slots == ((1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 5, 6))
    four = SimplexScheme.standard(4)
    assert four.n_spaces == 10
    assert all(len(s) == 4 for s in four.slots)
    seen = [p for s in four.slots for p in s]
    assert all(seen.count(p) == 2 for p in range(1, 11))


def simplex_oracle(scheme, op, order):
    """State-by-state composition, iterating states in the given order."""
    n_spaces = scheme.n_spaces
    ops = []
    for slots in scheme.slots:
        table = op.table
        ops.append((slots, table))
    def act(slots, table, state):
        bits = list(dec_bits(state, n_spaces))
        sub = enc_bits(tuple(bits[p - 1] for p in slots))
        image = dec_bits(table[sub], op.n)
        for i, p in enumerate(slots):
            bits[p - 1] = image[i]
        return enc_bits(tuple(bits))
    mismatched = False
    for state in order:
        forward = state
        for slots, table in reversed(ops):
            forward = act(slots, table, forward)
        backward = state
        for slots, table in ops:
            backward = act(slots, table, backward)
        if forward != backward:
            mismatched = True
    return not mismatched


@pytest.mark.parametrize("name,n,expected", [
    ("S2", 2, "holds"),
    ("T2", 2, "fail"),
    ("S3", 3, "holds"),
    ("T3", 3, "fail"),
    ("H4", 4, "holds"),
])
def test_perm_simplex_check(name, n, expected):
    scheme = SimplexScheme.standard(n)
    op = PermOperator.from_affine(BUILTIN_MAPS[name])
    report = perm_simplex_check(scheme, op)
    assert report.status == expected
    if expected == "fail":
        assert report.witnesses


def test_perm_simplex_check_matches_oracle_any_order():
    rng = random.Random(0)
    for name, n in [("S3", 3), ("T3", 3), ("S2", 2)]:
        scheme = SimplexScheme.standard(n)
        op = PermOperator.from_affine(BUILTIN_MAPS[name])
        states = list(range(1 << scheme.n_spaces))
        rng.shuffle(states)
        holds = simplex_oracle(scheme, op, states)
        assert holds == (perm_simplex_check(scheme, op).status == "holds")


def test_arity_mismatch_rejected():
    with pytest.raises(ValueError):
        perm_simplex_check(SimplexScheme.standard(3), PermOperator.from_affine(S2))


def test_embed_perm_table_identity_elsewhere():
    op = PermOperator.from_affine(S2)
    table = embed_perm_table(op, (1, 3), 3)
    for state in range(8):
        bits = list(dec_bits(state, 3))
        sub = (bits[0], bits[2])
        image = S2.apply(sub)
        bits[0], bits[2] = image
        assert table[state] == enc_bits(tuple(bits))
