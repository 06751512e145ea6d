import pytest

from cychom.complexes import HomologyGroup
from cychom.matrix import ExactMatrix
from cychom.rings import ZZ, GF
from cychom.tate import (
    CompleteResolution,
    GModuleComplex,
    TateError,
    complete_resolution_cyclic,
    construction_5_1_check,
    corollary_5_3_check,
    direct_sum_modules,
    named_module,
    norm_oracle,
    tate_complex,
)


def tate_table(kind, n, window=(-4, 4), base=ZZ):
    P = complete_resolution_cyclic(base, n)
    return tate_complex(named_module(kind, n, base), P, window).table()


# -- the standard resolution -----------------------------------------------------


def test_resolution_validates_for_small_orders():
    for n in (1, 2, 3, 4, 6):
        P = complete_resolution_cyclic(ZZ, n)
        assert P.validate(width=5) == []


def test_resolution_differentials_alternate():
    P = complete_resolution_cyclic(ZZ, 3)
    sm1 = P.differential(0)
    N = P.differential(1)
    assert sm1 == P.differential(2) == P.differential(-2)
    assert N == P.differential(-1) == P.differential(3)
    assert (sm1 * N).is_zero() and (N * sm1).is_zero()
    # augmentation hits the invariant line inside ker d_0
    assert (sm1 * P.augmentation()).is_zero()


def test_resolution_window_is_acyclic_inside():
    P = complete_resolution_cyclic(ZZ, 4)
    C = P.window(-3, 3)
    assert C.validate().ok
    for d in range(-2, 3):
        assert C.homology(d).is_zero()


def test_resolution_rejects_bad_order():
    with pytest.raises(TateError):
        complete_resolution_cyclic(ZZ, 0)


# -- module fixtures --------------------------------------------------------------


def test_named_modules_validate():
    for kind in ("trivial-Z", "trivial-Zn", "free", "two-term", "contractible"):
        M = named_module(kind, 4)
        assert M.validate() == [], kind


def test_named_module_rejects_unknown_kind():
    with pytest.raises(TateError):
        named_module("projective", 3)


def test_module_validation_catches_broken_action():
    # sigma of order 3 declared over a group of order 2
    sigma = ExactMatrix(ZZ, 3, 3, {(0, 2): 1, (1, 0): 1, (2, 1): 1})
    M = GModuleComplex(ZZ, 2, {0: 3}, {0: sigma})
    assert any("order" in p for p in M.validate())


def test_module_validation_catches_nonequivariant_differential():
    sigma = ExactMatrix(ZZ, 2, 2, {(0, 1): 1, (1, 0): 1})
    d = ExactMatrix(ZZ, 2, 2, {(0, 0): 1})  # does not commute with the swap
    M = GModuleComplex(ZZ, 2, {0: 2, 1: 2}, {0: sigma, 1: sigma}, diffs={1: d})
    assert any("equivariant" in p for p in M.validate())


def test_norm_matrix_sums_the_powers():
    M = named_module("free", 4)
    N = M.norm(0)
    sigma = M.sigma(0)
    total = ExactMatrix.identity(ZZ, 4)
    acc = ExactMatrix.identity(ZZ, 4)
    for _ in range(3):
        acc = sigma * acc
        total = total + acc
    assert N == total


# -- Tate cohomology tables --------------------------------------------------------


def test_trivial_module_tables():
    for n in (2, 3, 4, 6):
        table = tate_table("trivial-Z", n, (-5, 5))
        for d, H in table.items():
            if d % 2 == 0:
                assert H == HomologyGroup(ZZ, 0, (n,)), (n, d)
            else:
                assert H.is_zero(), (n, d)


def test_mod_n_trivial_module_table():
    # Z/4 with trivial C_4-action: both parities keep a Z/4
    table = tate_table("trivial-Zn", 4, (-3, 3))
    for H in table.values():
        assert H == HomologyGroup(ZZ, 0, (4,))


def test_free_modules_are_tate_acyclic():
    for n in (2, 3, 5):
        for H in tate_table("free", n, (-3, 3)).values():
            assert H.is_zero(), n


def test_two_term_cone_is_tate_acyclic():
    # the cone of sigma - 1 on a free module: both ends acyclic
    for H in tate_table("two-term", 3, (-3, 3)).values():
        assert H.is_zero()


def test_contractible_summand_does_not_change_homology():
    n = 4
    P = complete_resolution_cyclic(ZZ, n)
    M = named_module("trivial-Z", n)
    MC = direct_sum_modules(M, named_module("contractible", n))
    a = tate_complex(M, P, (-4, 4)).table()
    b = tate_complex(MC, P, (-4, 4)).table()
    assert {d: H.label() for d, H in a.items()} == {d: H.label() for d, H in b.items()}


def test_homology_is_2_periodic():
    P = complete_resolution_cyclic(ZZ, 6)
    T = tate_complex(named_module("trivial-Z", 6), P, (-5, 5))
    for d in range(-4, 3):
        assert T.homology(d) == T.homology(d + 2)


def test_basis_change_does_not_change_homology():
    # conjugating the module data by a unimodular matrix must not move
    # any invariant factor
    n = 3
    U = ExactMatrix(ZZ, n, n, {(0, 0): 1, (1, 1): 1, (2, 2): 1, (0, 1): 2})
    Uinv = ExactMatrix(ZZ, n, n, {(0, 0): 1, (1, 1): 1, (2, 2): 1, (0, 1): -2})
    assert U * Uinv == ExactMatrix.identity(ZZ, n)
    M = named_module("free", n)
    sigma = U * M.sigma(0) * Uinv
    M2 = GModuleComplex(ZZ, n, {0: n}, {0: sigma})
    assert M2.validate() == []
    P = complete_resolution_cyclic(ZZ, n)
    a = tate_complex(M, P, (-3, 3)).table()
    b = tate_complex(M2, P, (-3, 3)).table()
    assert {d: H.label() for d, H in a.items()} == {d: H.label() for d, H in b.items()}


def test_field_coefficients():
    # over F_2 with trivial C_2-action every degree keeps one dimension
    table = tate_table("trivial-Z", 2, (-3, 3), base=GF(2))
    for H in table.values():
        assert H.dimension == 1


# -- guards ------------------------------------------------------------------------


def test_edge_degrees_are_refused():
    P = complete_resolution_cyclic(ZZ, 2)
    T = tate_complex(named_module("trivial-Z", 2), P, (-2, 2))
    assert list(T.interior()) == [-1, 0, 1]
    for d in (-2, 2, 5):
        with pytest.raises(TateError):
            T.homology(d)


def test_window_and_order_guards():
    P = complete_resolution_cyclic(ZZ, 2)
    M = named_module("trivial-Z", 2)
    with pytest.raises(TateError):
        tate_complex(M, P, (0, 1))
    with pytest.raises(TateError):
        tate_complex(named_module("trivial-Z", 3), P, (-2, 2))


def test_norm_oracle_needs_single_degree():
    with pytest.raises(TateError):
        norm_oracle(named_module("two-term", 3))


# -- the norm oracle against the resolution route ----------------------------------


def test_norm_oracle_matches_tate_complex():
    for kind in ("trivial-Z", "trivial-Zn", "free"):
        for n in (2, 3, 4, 5, 6):
            M = named_module(kind, n)
            P = complete_resolution_cyclic(ZZ, n)
            T = tate_complex(M, P, (-3, 2))
            h0, hm1 = norm_oracle(M)
            assert T.homology(0) == h0, (kind, n)
            assert T.homology(-1) == hm1, (kind, n)


def test_norm_oracle_classical_values():
    h0, hm1 = norm_oracle(named_module("trivial-Z", 5))
    assert h0 == HomologyGroup(ZZ, 0, (5,))
    assert hm1.is_zero()
    h0, hm1 = norm_oracle(named_module("free", 7))
    assert h0.is_zero() and hm1.is_zero()
    h0, hm1 = norm_oracle(named_module("trivial-Zn", 6))
    assert h0 == HomologyGroup(ZZ, 0, (6,))
    assert hm1 == HomologyGroup(ZZ, 0, (6,))


# -- the two comparison checks ------------------------------------------------------


def test_construction_check_passes_for_small_orders():
    for n in (1, 2, 3, 6):
        report = construction_5_1_check(n)
        assert report.ok, (n, report.problems)
        assert report.details["kernel_generators"] == {"0": n, "-1": 1}
        assert report.details["kernel_is_whole_source"] == (n == 1)


def test_construction_check_rejects_bad_order():
    report = construction_5_1_check(0)
    assert not report.ok


def test_corollary_check_passes_and_reports_tables():
    for n in (2, 3, 4):
        report = corollary_5_3_check(n)
        assert report.ok, (n, report.problems)
        assert report.details["lhs"] == report.details["rhs"]
        assert set(report.details["lhs"]) == set(range(-4, 5))


def test_corollary_check_rejects_order_one():
    assert not corollary_5_3_check(1).ok


def test_check_reports_serialize():
    doc = construction_5_1_check(3).to_json()
    assert doc["check"] == "construction-5-1"
    assert doc["ok"] is True
    assert doc["problems"] == []
