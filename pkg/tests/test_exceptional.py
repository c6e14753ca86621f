import pytest

from fibercurve.ffield import is_prime
from fibercurve.projline import ProjPoint, ProjTransform
from fibercurve.exceptional import (
    KINDS,
    PROJECTIVE_ORDER,
    CongruenceError,
    check_congruence,
    build_exceptional,
    orbit_table,
)

# published orbit sets; None stands for the point at infinity
A4_13_ORBIT_OF_0 = {0, 9, 10, None}
A4_13_ORBIT_OF_1 = {1, 2, 6, 12}
A4_13_ORBIT_OF_3 = {3, 4, 5, 7, 8, 11}
A4_103_ORBIT_OF_0 = {0, 56, 57, None}
A4_103_ORBIT_OF_1 = {1, 10, 102, 72}
S4_73_ORBIT_OF_0 = {0, 5, 16, 17, 26, 32, 39, 46, 52, 61, 62, None}
S4_73_ORBIT_OF_1 = {
    1, 4, 6, 13, 18, 19, 23, 27, 28, 31, 33, 34, 36, 42, 44, 45, 47, 50,
    51, 55, 59, 60, 65, 72,
}
A5_421_ORBIT_OF_0 = {
    0, 2, 3, 14, 17, 20, 29, 50, 51, 55, 72, 83, 94, 101, 146, 152, 153,
    156, 163, 166, 177, 182, 190, 191, 192, 203, 206, 209, 210, 211, 212,
    215, 218, 220, 222, 225, 230, 234, 236, 242, 250, 257, 264, 266, 279,
    284, 293, 319, 326, 335, 343, 352, 355, 357, 359, 392, 396, 418, 419,
    None,
}
A5_421_ORBIT_OF_1 = {
    1, 5, 23, 25, 26, 27, 35, 40, 60, 61, 81, 92, 93, 105, 107, 115, 127,
    128, 137, 143, 154, 159, 160, 164, 172, 173, 189, 193, 195, 202, 223,
    227, 233, 235, 243, 246, 252, 256, 259, 273, 274, 289, 294, 306, 323,
    324, 325, 327, 348, 350, 361, 363, 370, 373, 374, 379, 382, 388, 389,
    409,
}


def orbit_as_set(orbit):
    return {pt.t for pt in orbit.points}


def test_a4_13_uses_published_generators():
    G = build_exceptional("a4", 13)
    assert G.order == 12
    assert ProjTransform(13, 3, 0, -1, 9) in G
    assert ProjTransform(13, 0, -1, 1, 0) in G


def test_a4_13_orbits_match_published_sets():
    table = orbit_table("a4", 13)
    assert orbit_as_set(table.orbit_of(ProjPoint(13, 0))) == A4_13_ORBIT_OF_0
    assert orbit_as_set(table.orbit_of(ProjPoint(13, 1))) == A4_13_ORBIT_OF_1
    assert orbit_as_set(table.orbit_of(ProjPoint(13, 3))) == A4_13_ORBIT_OF_3
    assert table.total == 3
    assert table.flags() == {"O2": True, "O3,1": True, "O3,2": True}


def test_a4_103_orbits_match_published_sets():
    table = orbit_table("a4", 103)
    assert orbit_as_set(table.orbit_of(ProjPoint(103, 0))) == A4_103_ORBIT_OF_0
    assert orbit_as_set(table.orbit_of(ProjPoint(103, 1))) == A4_103_ORBIT_OF_1
    assert table.total == 10
    assert table.flags() == {"O2": False, "O3,1": True, "O3,2": True}


def test_s4_73_orbits_match_published_sets():
    table = orbit_table("s4", 73)
    assert orbit_as_set(table.orbit_of(ProjPoint(73, 0))) == S4_73_ORBIT_OF_0
    assert orbit_as_set(table.orbit_of(ProjPoint(73, 1))) == S4_73_ORBIT_OF_1
    assert table.total == 5


def test_a5_421_orbits_match_published_sets():
    table = orbit_table("a5", 421)
    assert orbit_as_set(table.orbit_of(ProjPoint(421, 0))) == A5_421_ORBIT_OF_0
    assert orbit_as_set(table.orbit_of(ProjPoint(421, 1))) == A5_421_ORBIT_OF_1
    assert table.total == 9


def test_group_orders():
    assert build_exceptional("a4", 13).order == 12
    assert build_exceptional("s4", 73).order == 24
    assert build_exceptional("a5", 421).order == 60


def test_congruence_gates():
    with pytest.raises(CongruenceError):
        build_exceptional("s4", 13)  # 13 = 5 mod 8
    with pytest.raises(CongruenceError):
        build_exceptional("a5", 7)  # 7 = 2 mod 5
    with pytest.raises(CongruenceError):
        check_congruence("a4", 9)  # not prime
    check_congruence("s4", 17)
    check_congruence("a5", 11)


def test_scan_path_produces_correct_orders():
    # primes where no explicit generator convention applies
    for kind, p in (("a4", 11), ("a4", 5), ("s4", 23), ("s4", 31),
                    ("a5", 11), ("a5", 19), ("a5", 29), ("a5", 31)):
        G = build_exceptional(kind, p)
        assert G.order == PROJECTIVE_ORDER[kind], (kind, p)


def test_build_is_deterministic():
    a = build_exceptional("a5", 31)
    b = build_exceptional("a5", 31)
    assert a.elements == b.elements


def test_a5_59_single_orbit():
    table = orbit_table("a5", 59)
    assert table.total == 1
    assert table.flags() == {"O2": False, "O3": False, "O5": False}


def test_orbit_table_spot_values():
    # (kind, p, expected N_p)
    cases = [
        ("a4", 13, (13 + 23) // 12),
        ("a4", 103, (103 + 17) // 12),
        ("a4", 5, 1),
        ("a4", 11, 1),
        ("s4", 73, 5),
        ("s4", 7, 1),
        ("s4", 17, 2),
        ("s4", 23, 1),
        ("a5", 59, 1),
        ("a5", 61, 3),
    ]
    for kind, p, np in cases:
        assert orbit_table(kind, p).total == np, (kind, p)


def test_orbit_tables_sweep_below_100():
    for p in range(5, 100):
        if not is_prime(p):
            continue
        for kind in KINDS:
            try:
                check_congruence(kind, p)
            except CongruenceError:
                continue
            table = orbit_table(kind, p)  # raises on any table mismatch
            assert sum(len(o) for o in table.orbits) == p + 1
