import itertools
import random

import pytest
import sympy as sp

from tensoralg.algebras import (AlgebraConfig, MVec, af, atensimp, av,
                                commutator, init_atensor,
                                multiplication_table, parse_mvec, sf)


@pytest.fixture(scope="module")
def quaternions():
    return init_atensor("clifford", 0, 0, 2)


@pytest.fixture(scope="module")
def lie3():
    return init_atensor("lie_envelop", 3)


# ---------------------------------------------------------------------------
# initialization


def test_clifford_aform_diag(quaternions):
    assert quaternions.aform == ((-1, 0), (0, -1))
    mixed = init_atensor("clifford", 2, 1, 1)
    assert [mixed.aform[i][i] for i in range(4)] == [1, 1, 0, -1]
    assert mixed.adim == 4


def test_lie_envelop_3_matrix(lie3):
    assert [[int(x) for x in row] for row in lie3.aform] == \
        [[0, 3, -2], [-3, 0, 1], [2, -1, 0]]


def test_grassmann_needs_no_aform():
    g = init_atensor("grassmann")
    assert g.aform is None and g.adim == 2
    assert atensimp(g, MVec.word((1, 2)) + MVec.word((2, 1))).is_zero


def test_symplectic_aform_antisymmetric():
    s = init_atensor("symplectic", 4, 1)
    assert s.adim == 5
    for i in range(5):
        assert s.aform[i][i] == 0
        for j in range(5):
            assert s.aform[i][j] == -s.aform[j][i]
            if i >= 4 or j >= 4:
                assert s.aform[i][j] == 0


def test_lie_envelop_aform_antisymmetric():
    for n in (2, 3, 4, 5):
        cfg = init_atensor("lie_envelop", n)
        for i in range(n):
            assert cfg.aform[i][i] == 0
            for j in range(n):
                assert cfg.aform[i][j] == -cfg.aform[j][i]
                assert abs(int(cfg.aform[i][j])) <= n


def test_init_validation():
    with pytest.raises(ValueError):
        init_atensor("clifford")
    with pytest.raises(ValueError):
        init_atensor("clifford", 1, 2, 3, 4)
    with pytest.raises(ValueError):
        init_atensor("lie_envelop", 2, 2)
    with pytest.raises(ValueError):
        init_atensor("nosuch", 1)


# ---------------------------------------------------------------------------
# commutator table values


def test_sf_af_av_values(quaternions, lie3):
    assert sf(quaternions, 1, 1) == -1
    assert sf(quaternions, 1, 2) == 0
    symp = init_atensor("symplectic", 2)
    assert af(symp, 1, 2) == -af(symp, 2, 1) == 1
    assert av(lie3, 1, 2) == MVec.vector(3)
    assert av(lie3, 1, 3) == -MVec.vector(2)  # entry -2 encodes -v2
    assert av(lie3, 2, 3) == MVec.vector(1)


def test_sf_af_av_type_guards(quaternions, lie3):
    with pytest.raises(ValueError):
        af(quaternions, 1, 2)
    with pytest.raises(ValueError):
        sf(lie3, 1, 2)
    with pytest.raises(ValueError):
        av(quaternions, 1, 2)
    with pytest.raises(ValueError):
        sf(quaternions, 0, 1)


# ---------------------------------------------------------------------------
# simplification


def test_grassmann_square_vanishes():
    g = init_atensor("grassmann")
    assert atensimp(g, MVec.word((1, 1))).is_zero


def test_clifford_square(quaternions):
    assert atensimp(quaternions, MVec.word((1, 1))) == -MVec.unit()


def test_clifford_swap(quaternions):
    assert atensimp(quaternions, MVec.word((2, 1))) == \
        MVec(((((1, 2)), -1),))


def test_clifford_word_square(quaternions):
    assert atensimp(quaternions, MVec.word((1, 2, 1, 2))) == -MVec.unit()


def test_universal_words_untouched():
    u = init_atensor("universal")
    e = MVec.word((2, 1))
    assert atensimp(u, e) == e


def test_symmetric_swap():
    s = init_atensor("symmetric")
    assert atensimp(s, MVec.word((2, 1))) == MVec.word((1, 2))


def test_symplectic_swap():
    s = init_atensor("symplectic", 2)
    # v2.v1 = v1.v2 - 2 f_a(1,2)
    assert atensimp(s, MVec.word((2, 1))) == \
        MVec.word((1, 2)) - 2 * MVec.unit()


def test_index_range_checked(quaternions):
    with pytest.raises(ValueError):
        atensimp(quaternions, MVec.word((1, 3)))


def test_quaternion_multiplication_table(quaternions):
    table = multiplication_table(quaternions)
    one, v1, v2, v12 = (MVec.word(w) for w in ((), (1,), (2,), (1, 2)))
    expected = [
        [one, v1, v2, v12],
        [v1, -one, v12, -v2],
        [v2, -v12, -one, v1],
        [v12, v2, -v1, -one],
    ]
    assert table == expected


def test_table_cells_for_other_types():
    s = init_atensor("symmetric")
    assert multiplication_table(s)[2][1] == MVec.word((1, 2))
    u = init_atensor("universal")
    assert multiplication_table(u)[2][1] == MVec.word((2, 1))


# ---------------------------------------------------------------------------
# properties


def _random_mvec(rng, adim, max_len=4, terms=3):
    out = MVec.zero()
    for _ in range(terms):
        word = tuple(rng.randint(1, adim) for _ in range(rng.randint(0, max_len)))
        out = out + MVec.word(word, rng.randint(-3, 3))
    return out


@pytest.mark.parametrize("algebra,dims", [
    ("grassmann", ()), ("symmetric", ()), ("universal", ()),
    ("clifford", (0, 0, 2)), ("clifford", (1, 1, 1)),
    ("symplectic", (2,)), ("lie_envelop", (3,)),
])
def test_atensimp_idempotent(algebra, dims):
    cfg = init_atensor(algebra, *dims)
    rng = random.Random(hash((algebra, dims)) & 0xFFFF)
    for _ in range(30):
        e = _random_mvec(rng, cfg.adim)
        once = atensimp(cfg, e)
        assert atensimp(cfg, once) == once


def test_commutator_axiom_replay():
    rng = random.Random(5)
    cliff = init_atensor("clifford", 1, 0, 2)
    symp = init_atensor("symplectic", 3)
    lie = init_atensor("lie_envelop", 4)
    gras = init_atensor("grassmann", 3)
    for _ in range(20):
        u = rng.randint(1, 3)
        v = rng.randint(1, 3)
        U, V = MVec.vector(u), MVec.vector(v)
        # u.v + v.u = 2 f_s(u, v)
        assert atensimp(cliff, U * V + V * U) == \
            atensimp(cliff, 2 * sf(cliff, u, v) * MVec.unit())
        # u.v + v.u = 0
        assert atensimp(gras, U * V + V * U).is_zero
        # u.v - v.u = 2 f_a(u, v)
        assert atensimp(symp, U * V - V * U) == \
            atensimp(symp, 2 * af(symp, u, v) * MVec.unit())
        # u.v - v.u = 2 v_a(u, v)
        assert atensimp(lie, U * V - V * U) == \
            atensimp(lie, 2 * av(lie, u, v))


def test_clifford_associativity():
    rng = random.Random(9)
    for dims in ((0, 0, 2), (1, 0, 2), (2, 0, 1)):
        cfg = init_atensor("clifford", *dims)
        for _ in range(25):
            words = [tuple(rng.randint(1, cfg.adim)
                           for _ in range(rng.randint(1, 4)))
                     for _ in range(3)]
            a, b, c = (MVec.word(w) for w in words)
            left = atensimp(cfg, atensimp(cfg, a * b) * c)
            right = atensimp(cfg, a * atensimp(cfg, b * c))
            assert left == right


def test_lie_envelop_jacobi(lie3):
    for u, v, w in itertools.product((1, 2, 3), repeat=3):
        U, V, W = MVec.vector(u), MVec.vector(v), MVec.vector(w)

        def br(x, y):
            return x * y - y * x

        cyclic = br(U, br(V, W)) + br(V, br(W, U)) + br(W, br(U, V))
        assert atensimp(lie3, cyclic).is_zero


def test_commutator_helper(lie3):
    assert commutator(lie3, MVec.vector(1), MVec.vector(2)) == \
        2 * MVec.vector(3)


# ---------------------------------------------------------------------------
# parsing


def test_parse_mvec():
    assert parse_mvec("v2.v1.v1") == MVec.word((2, 1, 1))
    assert parse_mvec("2*v1.v2 - v2.v1 + 1/2") == \
        2 * MVec.word((1, 2)) - MVec.word((2, 1)) + sp.Rational(1, 2) * MVec.unit()
    with pytest.raises(ValueError):
        parse_mvec("v1 . potato")
