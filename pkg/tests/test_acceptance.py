"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (visible under pytest -s) and
enforces the stated runtime budget.  Expected values are frozen here
from independent derivations: closed-form tables are restated locally,
worked equations carry the published factor data, and group-theoretic
predictions are recomputed from their defining formulas rather than
through the code under test.
"""

import random
import time
from fractions import Fraction

import pytest

from fibercurve.ffield import field_create, is_prime
from fibercurve.projline import ProjPoint, orbits as orbit_decomposition
from fibercurve.exceptional import (
    CongruenceError,
    check_congruence,
    build_exceptional,
    orbit_table,
)
from fibercurve.drinfeld import (
    admissible_twist,
    cartan_drinfeld,
    count_points_fp2,
    exceptional_drinfeld,
    phi_constant_on_orbits,
    verify_quotient_maps,
)
from fibercurve.atlas import (
    brute_supersingular_data,
    consistency_report,
    genus_x0,
    hasse_supersingular_data,
    special_fiber,
    supersingular_data,
    total_genus,
)
from fibercurve.neron import (
    MetrizedGraph,
    component_group,
    fiber_metrized_graph,
    component_group_prediction,
)


class Criterion:
    def __init__(self, number, name, budget_seconds):
        self.number = number
        self.name = name
        self.budget = budget_seconds
        self.start = time.monotonic()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print("ACCEPTANCE %2d %-28s %s (%.1fs / budget %ds)"
              % (self.number, self.name, status, elapsed, self.budget))
        if exc_type is None and self.budget is not None:
            assert elapsed < self.budget, (
                "criterion %d exceeded its %ds budget (%.1fs)"
                % (self.number, self.budget, elapsed)
            )
        return False


def primes_below(bound, start=5):
    return [p for p in range(start, bound) if is_prime(p)]


# -- 1: worked equations, byte-exact ---------------------------------------

WORKED_EQUATIONS = {
    ("a4", 13): "u^7 = t^5 (t-1)^5",
    ("a4", 103): "u^52 = t^35 (t-3) (t-10) (t-22) (t-39) (t-64) (t-89) "
                 "(t-100) (t-102)",
    ("s4", 73): "u^37 = t^19 (t-14)^25 (t-48)^28 (t-58)",
    ("a5", 421): "u^211 = t (t-23)^106 (t-47) (t-144)^141 (t-161) (t-228) "
                 "(t-292) (t-317)^169",
}

# the same curves in the residue notation of the source tables
WORKED_FACTORS = {
    ("a4", 13): {0: 5, 1: 5},
    ("a4", 103): {0: 35, 3: 1, -3 % 103: 1, -1 % 103: 1, 22: 1, 39: 1,
                  -14 % 103: 1, -39 % 103: 1, 10: 1},
    ("s4", 73): {-25 % 73: 28, 14: 25, 0: 19, -15 % 73: 1},
    ("a5", 421): {0: 1, 23: 106, 47: 1, 144: 141, 161: 1, 228: 1, 292: 1,
                  317: 169},
}


def test_acceptance_01_worked_equations():
    with Criterion(1, "worked equations", 5):
        for (kind, p), text in WORKED_EQUATIONS.items():
            table = orbit_table(kind, p)
            curve = exceptional_drinfeld(kind, p, table=table)
            assert curve.text() == text, (kind, p, curve.text())
            assert dict(curve.factors) == WORKED_FACTORS[(kind, p)]
            # unconditional invariants: exponent * isotropy = 1 mod (p+1)/2
            # and branch count = orbit count (up to the omitted infinity)
            n = (p + 1) // 2
            isotropies = {o.isotropy_order for o in table.orbits}
            for _, m in curve.factors:
                assert any(m * h % n == 1 % n for h in isotropies)
            assert len(curve.factors) in (table.total, table.total - 1)


# -- 2: orbit tables for every valid p < 500 -------------------------------

# closed forms restated independently: class -> (present orbits, N_p)
A4_ROWS = {1: ({"O2", "O3,1", "O3,2"}, lambda p: (p + 23) // 12),
           5: ({"O2"}, lambda p: (p + 7) // 12),
           7: ({"O3,1", "O3,2"}, lambda p: (p + 17) // 12),
           11: (set(), lambda p: (p + 1) // 12)}
S4_ROWS = {1: ({"O2", "O3", "O4"}, lambda p: (p + 47) // 24),
           7: ({"O3"}, lambda p: (p + 17) // 24),
           17: ({"O2", "O4"}, lambda p: (p + 31) // 24),
           23: (set(), lambda p: (p + 1) // 24)}
A5_ROWS = {1: ({"O2", "O3", "O5"}, lambda p: (p + 119) // 60),
           11: ({"O5"}, lambda p: (p + 49) // 60),
           19: ({"O3"}, lambda p: (p + 41) // 60),
           29: ({"O2"}, lambda p: (p + 31) // 60),
           31: ({"O3", "O5"}, lambda p: (p + 89) // 60),
           41: ({"O2", "O5"}, lambda p: (p + 79) // 60),
           49: ({"O2", "O3"}, lambda p: (p + 71) // 60),
           59: (set(), lambda p: (p + 1) // 60)}


def test_acceptance_02_orbit_tables_below_500():
    with Criterion(2, "orbit tables p < 500", 30):
        for p in primes_below(500):
            for kind, rows, mod in (("a4", A4_ROWS, 12), ("s4", S4_ROWS, 24),
                                    ("a5", A5_ROWS, 60)):
                try:
                    check_congruence(kind, p)
                except CongruenceError:
                    continue
                expected_orbits, np_formula = rows[p % mod]
                table = orbit_table(kind, p)
                assert table.total == np_formula(p), (kind, p)
                present = {name for name, flag in table.flags().items() if flag}
                assert present == expected_orbits, (kind, p)


# -- 3: maximality point counts ---------------------------------------------


def test_acceptance_03_maximality_counts():
    with Criterion(3, "maximality point counts", 60):
        for p in (5, 7, 11, 13):
            count = count_points_fp2(p, admissible_twist(p))
            genus = p * (p - 1) // 2
            assert count == p ** 3 + 1
            assert count == 1 + p * p + 2 * p * genus


# -- 4: genus oracle ----------------------------------------------------------


def test_acceptance_04_genus_oracle():
    with Criterion(4, "genus oracle", 60):
        assert total_genus("ns+", 13) == 3
        for p in primes_below(200):
            if p % 12 == 5:
                assert total_genus("ns+", p) == (p - 5) ** 2 // 24, p


# -- 5: toric ranks -----------------------------------------------------------


def toric_expected(family, p):
    s = genus_x0(p) + 1
    r = p % 12
    if family == "ns":
        return s - 1
    if family == "s":
        return 3 * (s - 1)
    if family == "ns+":
        return {1: (p - 13) // 12, 5: (p - 5) // 12}.get(r, 0)
    return {1: (p - 13) // 6, 5: (p - 5) // 6,
            7: (p - 7) // 12, 11: (p + 1) // 12}[r]


def test_acceptance_05_toric_ranks_below_500():
    with Criterion(5, "toric ranks p < 500", 60):
        for p in primes_below(500):
            for family in ("ns", "ns+", "s", "s+"):
                got = special_fiber(family, p).toric_rank()
                assert got == toric_expected(family, p), (family, p, got)


# -- 6: genus-consistency identities -----------------------------------------


def test_acceptance_06_consistency_identities():
    with Criterion(6, "consistency identities", 180):
        for p in primes_below(200):
            for family in ("ns", "ns+", "s", "s+"):
                report = consistency_report(family, p)
                assert report.ok, (family, p, report.ledger)
                if family == "ns+" and p % 12 == 5:
                    assert report.derived_genus == (p - 5) * (p - 17) // 96, p


# -- 7: component groups ------------------------------------------------------


def test_acceptance_07_component_groups():
    with Criterion(7, "component groups", 10):
        for p in (17, 29, 37, 41, 53):
            fiber = special_fiber("ns+", p)
            invariants = component_group(fiber_metrized_graph(fiber))
            s = fiber.supersingular.s
            n = Fraction(p - 1, 12).numerator
            expected = sorted([8] * (s - 2) + [8 * n])
            assert sorted(invariants.factors) == expected, (p, invariants)
        for p in (19, 23, 31, 43):
            fiber = special_fiber("ns+", p)
            invariants = component_group(fiber_metrized_graph(fiber))
            assert invariants.is_trivial(), p
        assert component_group_prediction(13).verdict == "vacuous-trivial"


# -- 8: supersingular oracle agreement ----------------------------------------


def test_acceptance_08_supersingular_oracles():
    with Criterion(8, "supersingular oracle p < 100", 120):
        for p in primes_below(100):
            closed = supersingular_data(p)
            oracle = (brute_supersingular_data(p) if p < 40
                      else hasse_supersingular_data(p))
            assert closed == oracle, p


# -- 9: property suites --------------------------------------------------------


def test_acceptance_09a_action_and_quotient_map_suites():
    with Criterion(9, "action/quotient-map suites", 300):
        # 50 samples x 4 families = 200 sampled points; each sample also
        # exercises two random special-linear actions and one root of
        # unity action on the source equation
        for family in ("ns", "ns+", "s", "s+"):
            chk = verify_quotient_maps(family, 13, 50, seed=1)
            assert chk.passed and chk.samples == 50


def test_acceptance_09b_phi_constant_exhaustive():
    with Criterion(9, "phi constant on orbits", 120):
        cases = 0
        for kind in ("a4", "s4", "a5"):
            for p in primes_below(104):
                try:
                    check_congruence(kind, p)
                except CongruenceError:
                    continue
                if orbit_table(kind, p).total < 2:
                    continue
                assert phi_constant_on_orbits(kind, p), (kind, p)
                cases += 1
        assert cases >= 40


def test_acceptance_09c_orbit_stabilizer_on_every_call():
    with Criterion(9, "orbit-stabilizer identity", 120):
        # the identity is asserted inside orbits(); drive it over many groups
        seen = 0
        for p in primes_below(200):
            for kind in ("a4", "s4", "a5"):
                try:
                    check_congruence(kind, p)
                except CongruenceError:
                    continue
                group = build_exceptional(kind, p)
                for orbit in orbit_decomposition(group):
                    assert len(orbit) * orbit.isotropy_order == group.order
                    seen += 1
        assert seen >= 200


def test_acceptance_09d_kirchhoff_on_every_call():
    with Criterion(9, "Kirchhoff cross-check", 120):
        # component_group() asserts SNF order == spanning-tree count on
        # every call; run it over 200 random connected multigraphs
        rng = random.Random(37)
        for _ in range(200):
            n = rng.randrange(2, 6)
            verts = ["v%d" % i for i in range(n)]
            edges = [("v%d" % i, "v%d" % (i + 1), rng.randrange(1, 6))
                     for i in range(n - 1)]
            for _ in range(rng.randrange(0, 4)):
                i, j = rng.sample(range(n), 2)
                edges.append(("v%d" % i, "v%d" % j, rng.randrange(1, 6)))
            component_group(MetrizedGraph.build(verts, edges))


# -- 10: cross-curve check -----------------------------------------------------


def test_acceptance_10_cross_curve_level_13():
    with Criterion(10, "cross-curve check at 13", 60):
        nsp = special_fiber("ns+", 13).horizontals()
        sp = special_fiber("s+", 13).horizontals()
        assert len(nsp) == len(sp) == 1
        for h in nsp + sp:
            assert h.genus == 3
            assert h.curve.form_label() == "Y^2 = X(X^7 + A)"
