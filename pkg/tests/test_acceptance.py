"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (see report.py); the lines are repeated in
the pytest terminal summary under "acceptance".
"""

import hashlib
import os
import random
import subprocess
import sys
from itertools import product
from math import comb
from pathlib import Path

from weyljanet import WeylAlgebra, dehomogenize, homogenize, janet_basis, normal_form
from weyljanet.algebra import Element, Monomial, deg, is_homogeneous, ord_x0, shift_x0
from weyljanet.cones import (basis_degree, basis_degree_bound, decompose, direct_count, hilbert_from_cones,
                             predecessor_violations)
from weyljanet.graded import exponent_vectors, filtered_dimensions, saturate_x0
from weyljanet.hilbert import (graded_hilbert_direct, hilbert_function, macaulay_constants, minimal_generators,
                               standard_monomial_count)
from weyljanet.janet import is_reduced
from weyljanet.linsolve import (ShiftedMatrix, Unsolvable, apply_left, apply_right, check_kernel, graded_kernel,
                                kernel_bound, kernel_span_dimension, solve_system)

from corpus import instances
from helpers import (affine_member, oracle_nullity, oracle_solvable, quotient_dim_affine, random_coeff,
                     random_combination, random_element, random_homogeneous, random_monomial_ideal,
                     random_shifted_matrix)
from report import criterion
from test_algebra import rewrite_product

SEED = 20240
CORPUS = instances()
HERE = Path(__file__).parent


def _saturation(ring, l, gens):
    return saturate_x0([homogenize(g) for g in gens], ring=ring.homogenization(), rank=l)


def _random_term(rng, ring, max_deg):
    e = rng.choice([e for d in range(max_deg + 1) for e in exponent_vectors(ring, d)])
    c = random_coeff(rng)
    return Element(ring, {Monomial(0, e): c}), e, c


def test_criterion_01_relations():
    rng = random.Random(SEED + 1)
    rings = [WeylAlgebra(n, homogenized=h) for n in (1, 2, 3) for h in (False, True)]
    with criterion(1, limit=10) as info:
        for ring in rings:
            c = ring.x(0) ** 2 if ring.homogenized else ring.one()
            for i in range(1, ring.n + 1):
                for j in range(1, ring.n + 1):
                    xi, xj, di, dj = ring.x(i), ring.x(j), ring.d(i), ring.d(j)
                    assert xi * xj == xj * xi and di * dj == dj * di
                    assert di * xj - xj * di == (c if i == j else ring.zero())
                if ring.homogenized:
                    x0 = ring.x(0)
                    assert x0 * ring.d(i) == ring.d(i) * x0 and x0 * ring.x(i) == ring.x(i) * x0
        for _ in range(1000):
            ring = rng.choice(rings)
            (a, ea, ca), (b, eb, cb), (t, _, _) = (_random_term(rng, ring, 3) for _ in range(3))
            if rng.random() < 0.25:
                assert a * b == ca * cb * rewrite_product(ring, ea, eb)
            assert (a * b) * t == a * (b * t)
            assert a * (b + t) == a * b + a * t and (a + b) * t == a * t + b * t
        info["detail"] = "1000 term pairs"


def test_criterion_02_homogenization_round_trips():
    rng = random.Random(SEED + 2)
    with criterion(2) as info:
        for _ in range(200):
            ring = WeylAlgebra(rng.randint(1, 3))
            z = random_element(rng, ring, 5, rng.randint(1, 5), rank=rng.randint(1, 2))
            assert dehomogenize(homogenize(z)) == z
        done = 0
        while done < 200:
            hring = WeylAlgebra(rng.randint(1, 3), homogenized=True)
            z = random_element(rng, hring, 0, rng.randint(1, 5), rank=rng.randint(1, 2),
                               homogeneous_degree=rng.randint(0, 5))
            if not z:
                continue
            assert shift_x0(homogenize(dehomogenize(z)), ord_x0(z)) == z
            done += 1
        info["detail"] = "200 + 200 elements"


def test_criterion_03_janet_correctness():
    with criterion(3, limit=120) as info:
        checked = 0
        for idx, (ring, l, gens) in enumerate(CORPUS):
            rng = random.Random(SEED + 300 + idx)
            basis = janet_basis(gens, ring=ring, rank=l)
            assert is_reduced(basis)
            for g in gens:
                assert normal_form(g, basis).is_zero()
            for _ in range(50):
                assert normal_form(random_combination(rng, gens, 8), basis).is_zero()
                r = normal_form(random_element(rng, ring, 5, 4, rank=l), basis)
                assert normal_form(r, basis) == r
            # per degree: dim I_m from the basis equals the brute-force span dimension
            slack = _saturation(ring, l, gens).N + 2
            leads = basis.leading_monomials()
            for m in range(4):
                inside = l * comb(m + 2 * ring.n, 2 * ring.n) - sum(
                    standard_monomial_count(leads, ring, k, l) for k in range(m + 1))
                assert inside == l * comb(m + 2 * ring.n, 2 * ring.n) - quotient_dim_affine(gens, ring, l, m, slack)
            # membership of individual elements agrees with the oracle
            for _ in range(6):
                f = random_element(rng, ring, 2, 3, rank=l)
                if rng.random() < 0.5:
                    f = f + random_combination(rng, gens, 3)
                if f._terms and deg(f) <= 3:
                    assert normal_form(f, basis).is_zero() == affine_member(f, gens, slack)
                    checked += 1
        info["detail"] = f"{len(CORPUS)} instances, {checked} membership comparisons"


def test_criterion_04_reduced_basis_uniqueness():
    with criterion(4) as info:
        for idx, (ring, l, gens) in enumerate(CORPUS):
            rng = random.Random(SEED + 400 + idx)
            want = janet_basis(gens, ring=ring, rank=l).elements
            for _ in range(5):
                g = [random_coeff(rng) * v for v in gens]
                rng.shuffle(g)
                if len(g) > 1:
                    i, j = rng.sample(range(len(g)), 2)
                    g[i] = g[i] + random_element(rng, ring, 1, 2) * g[j]
                assert janet_basis(g, ring=ring, rank=l).elements == want
        info["detail"] = f"{len(CORPUS)} instances x 5 transformations"


def test_criterion_05_homogeneous_round_trip():
    with criterion(5) as info:
        for ring, l, gens in CORPUS:
            sat = _saturation(ring, l, gens)
            assert all(is_homogeneous(g) for g in sat.basis.elements)
            back = tuple(dehomogenize(g) for g in sat.basis.elements)
            assert back == janet_basis(gens, ring=ring, rank=l).elements
        info["detail"] = f"{len(CORPUS)} instances"


def test_criterion_06_commutative_shadow():
    with criterion(6) as info:
        for ring, l, gens in CORPUS:
            sat = _saturation(ring, l, gens)
            aff = hilbert_function(gens, "affine", 10, ring=ring, rank=l, saturation=sat).values
            com = hilbert_function(gens, "commutative", 10, ring=ring, rank=l, saturation=sat).values
            assert aff == com
        info["detail"] = "m = 0..10"


def test_criterion_07_gr_partial_sums():
    with criterion(7) as info:
        for ring, l, gens in CORPUS:
            sat = _saturation(ring, l, gens)
            aff = hilbert_function(gens, "affine", 10, ring=ring, rank=l, saturation=sat).values
            gr = hilbert_function(gens, "gr", 10, ring=ring, rank=l, saturation=sat).values
            assert list(aff) == [sum(gr[:m + 1]) for m in range(11)]
        info["detail"] = "m = 0..10"


def test_criterion_08_kernel_vectors():
    rng = random.Random(SEED + 8)
    with criterion(8) as info:
        h1 = WeylAlgebra(1, homogenized=True)
        x0, x1, d1 = h1.x(0), h1.x(1), h1.d(1)
        b = ShiftedMatrix.from_rows([[x1, d1]], h1)
        z = [-(x1 * d1 + 2 * x0 * x0), x1 * x1]
        assert apply_right(b, z) == [h1.zero()]
        assert check_kernel(b, graded_kernel(b))
        for _ in range(50):
            n, l = rng.randint(1, 2), rng.randint(2, 3)
            b = random_shifted_matrix(rng, n, l - 1, l, rng.randint(1, 3))
            z = graded_kernel(b)
            assert any(a._terms for a in z) and check_kernel(b, z)
            assert max(deg(a) for a in z if a._terms) <= kernel_bound(n, l, b.d)
        info["detail"] = "50 matrices plus the documented example"


def _planted(rng):
    n, k, l = rng.randint(1, 2), rng.randint(1, 3), rng.randint(1, 2)
    b = random_shifted_matrix(rng, n, k, l, rng.randint(1, 2))
    rho = max(b.row_shifts) + rng.randint(0, 1)
    z = [random_homogeneous(rng, b.ring, rho - di, 2) for di in b.row_shifts]
    return b, apply_left(z, b)


def test_criterion_09_solve_contract():
    rng = random.Random(SEED + 9)
    with criterion(9) as info:
        for _ in range(30):
            b, u = _planted(rng)
            cap = max(b.row_shifts) - min(b.row_shifts) + 4
            s = solve_system(b, u, cap)
            assert s and apply_left(s.particular, b) == u
            low = min(b.row_shifts)
            for g in s.kernel_generators:
                assert all(not a._terms for a in apply_left(g, b))
            for t in range(low, low + s.certified_degree + 1):
                assert kernel_span_dimension(s.kernel_generators, b, t) == oracle_nullity(b, t)
        unsolvable = 0
        while unsolvable < 10:
            b = random_shifted_matrix(rng, 1, rng.randint(1, 2), rng.randint(1, 2), 2)
            rho = max(b.row_shifts)
            u = [random_homogeneous(rng, b.ring, rho - c, 2) for c in b.col_shifts]
            if not any(a._terms for a in u) or oracle_solvable(b, u, rho):
                continue
            s = solve_system(b, u, 2)
            assert isinstance(s, Unsolvable) and s.certificate
            assert all("degrees" in c for c in s.certificate)
            unsolvable += 1
        info["detail"] = "30 planted solvable, 10 unsolvable"


def test_criterion_10_saturation():
    with criterion(10) as info:
        worst = 0
        for ring, l, gens in CORPUS:
            s = _saturation(ring, l, gens)
            assert s.N <= 8 and all(ord_x0(g) == 0 for g in s.basis.elements)
            for g in s.generators:
                assert normal_form(shift_x0(g, s.N), s.j0_basis).is_zero()
            # A_{m+N} rows cap A_m against a much larger slack
            assert filtered_dimensions(gens, 6, s.N, ring=ring, rank=l) == \
                filtered_dimensions(gens, 6, s.N + 4, ring=ring, rank=l)
            worst = max(worst, s.N)
        info["detail"] = f"max N = {worst}"


def test_criterion_11_macaulay_constants():
    rng = random.Random(SEED + 11)
    with criterion(11) as info:
        for _ in range(30):
            nv = rng.randint(1, 4)
            gens = random_monomial_ideal(rng, nv, rng.randint(1, 6), 6)
            mc = macaulay_constants(gens, nv)
            b = mc.b
            for m in range(b[0], b[0] + 15):
                assert mc.formula(m) == graded_hilbert_direct(gens, nv, m)
            assert all(mc.h(m) >= 0 for m in range(b[1], b[0] + 15))
            assert max(sum(g) for g in minimal_generators(gens)) <= b[0]
        info["detail"] = "30 ideals"


def test_criterion_12_cones():
    rng = random.Random(SEED + 12)
    with criterion(12) as info:
        for _ in range(30):
            n, l = rng.randint(1, 3), rng.randint(1, 2)
            gens = [(rng.randrange(l), e) for e in random_monomial_ideal(rng, n, rng.randint(1, 6), 5)]
            dec = decompose(gens, n, l)
            for k in range(l):
                for u in product(range(12), repeat=n):
                    assert dec.multiplicity(k, u) == int(dec.in_complement(k, u))
            for z in range(21):
                assert hilbert_from_cones(dec, z) == direct_count(dec, z)
            assert predecessor_violations(dec) == []
            assert basis_degree(dec) <= basis_degree_bound(dec)
        info["detail"] = "30 ideals, box side 12"


def _artifact(seed: int, hashseed: str) -> str:
    env = dict(os.environ, PYTHONHASHSEED=hashseed)
    out = subprocess.run([sys.executable, str(HERE / "artifacts.py"), str(seed)], cwd=HERE, env=env,
                         capture_output=True, text=True, check=True).stdout
    return hashlib.sha256(out.encode()).hexdigest()


def test_criterion_13_determinism():
    with criterion(13) as info:
        first, second = _artifact(SEED, "1"), _artifact(SEED, "2")
        assert first == second
        info["detail"] = f"artifact sha256 {first[:16]}"

