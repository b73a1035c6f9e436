"""Torsion certificates, truncated operators, kernels, and degree machinery."""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from helpers import (
    random_bicharacter,
    random_cyclic_root,
    random_degree_map,
    random_element,
)
from twistlab import (
    BicharacterCocycle,
    CyclicRootCocycle,
    DegreeMap,
    EmptyInteriorError,
    InfiniteOrderError,
    RingElement,
    TrivialCocycle,
    WindowSpec,
    build_truncated_operator,
    commutator_phase,
    convolve,
    cyclic_product,
    degree_nonneg,
    element_order,
    free_abelian,
    heisenberg3,
    homogeneous_decompose,
    is_zero,
    kernel_search,
    search_zero_divisor,
    torsion_zero_divisor,
    verify_leading_step,
)
from twistlab.groups import compose


def delta(group, *coords):
    return RingElement.delta(group, coords)


# ---------------------------------------------------------------------------
# torsion construction


def test_element_order():
    c6 = cyclic_product(2, 3)
    assert element_order(c6.identity()) == 1
    assert element_order(c6.point(1, 0)) == 2
    assert element_order(c6.point(0, 1)) == 3
    assert element_order(c6.point(1, 1)) == 6
    with pytest.raises(InfiniteOrderError):
        element_order(free_abelian(1).point(2))
    with pytest.raises(InfiniteOrderError):
        element_order(heisenberg3().point(0, 0, 1))


def test_torsion_z2_trivial():
    c2 = cyclic_product(2)
    sigma = TrivialCocycle(c2)
    left, right = torsion_zero_divisor(c2.point(1), sigma)
    assert left == delta(c2, 0) + delta(c2, 1)
    assert right == delta(c2, 1) - delta(c2, 0)
    product = convolve(left, right, sigma)
    assert not product.terms  # telescopes to literal zero


def test_torsion_z4_trivial():
    c4 = cyclic_product(4)
    sigma = TrivialCocycle(c4)
    left, right = torsion_zero_divisor(c4.point(1), sigma)
    assert left == delta(c4, 0) + delta(c4, 1) + delta(c4, 2) + delta(c4, 3)
    assert right == delta(c4, 1) - delta(c4, 0)
    assert not convolve(left, right, sigma).terms


def test_torsion_z3_root_of_unity():
    # sigma(j,k) = omega^{jk}: alpha = omega * omega^2 = 1, so a = delta_1
    c3 = cyclic_product(3)
    sigma = CyclicRootCocycle(c3, ((Fraction(1, 3),),))
    left, right = torsion_zero_divisor(c3.point(1), sigma)
    alpha = sigma.value(c3.point(1), c3.point(1)) * sigma.value(c3.point(1), c3.point(2))
    assert alpha == pytest.approx(1.0, abs=1e-12)
    product = convolve(left, right, sigma)
    assert not product.terms
    assert left.terms and right.terms


def test_torsion_product_by_bruteforce_expansion():
    # independent check of the telescoping on Z/3 with the exact cocycle
    c3 = cyclic_product(3)
    sigma = CyclicRootCocycle(c3, ((Fraction(1, 3),),))
    left, right = torsion_zero_divisor(c3.point(1), sigma)
    for target in (c3.point(0), c3.point(1), c3.point(2)):
        total = 0j
        for p in left.support():
            for q in right.support():
                if compose(p, q) == target:
                    total += (
                        sigma.value(p, q)
                        * complex(left.coefficient(p))
                        * complex(right.coefficient(q))
                    )
        assert abs(total) <= 1e-15


def test_torsion_certificate_all_small_groups():
    rng = np.random.default_rng(17)
    for orders in [(2,), (3,), (4,), (5,), (6,), (2, 2), (2, 3)]:
        group = cyclic_product(*orders)
        cocycles = [TrivialCocycle(group), random_cyclic_root(group, rng)]
        points = [
            group.point(*coords)
            for coords in itertools.product(*(range(o) for o in orders))
        ]
        for gamma in points:
            if gamma.is_identity:
                continue
            for sigma in cocycles:
                left, right = torsion_zero_divisor(gamma, sigma)
                assert left.terms and right.terms
                product = convolve(left, right, sigma)
                assert not product.terms, (orders, gamma, sigma)


def test_torsion_principal_branch():
    # Z/4 with Q = [[1/4]]: alpha = e(1/4) e(2/4) e(3/4) = e(1/2) = -1, and the
    # principal branch gives alpha^{-1/4} = exp(-i*pi/4), turn exactly -1/8
    from fractions import Fraction as F

    from twistlab import PhaseSum

    c4 = cyclic_product(4)
    sigma = CyclicRootCocycle(c4, ((Fraction(1, 4),),))
    left, right = torsion_zero_divisor(c4.point(1), sigma)
    coeff = right.coefficient(c4.point(1))
    assert coeff == PhaseSum.unit(F(-1, 8))  # exact turn comparison
    assert abs(complex(coeff) - cmath.exp(-1j * math.pi / 4)) <= 1e-15
    assert not convolve(left, right, sigma).terms


def test_torsion_rejects_identity_and_infinite_order():
    c4 = cyclic_product(4)
    with pytest.raises(ValueError):
        torsion_zero_divisor(c4.identity(), TrivialCocycle(c4))
    z = free_abelian(1)
    with pytest.raises(InfiniteOrderError):
        torsion_zero_divisor(z.point(1), TrivialCocycle(z))


# ---------------------------------------------------------------------------
# truncated operators and kernels


def test_truncated_operator_identity_pattern():
    z = free_abelian(1)
    op = build_truncated_operator(delta(z, 0), TrivialCocycle(z), WindowSpec(2))
    assert op.matrix.shape == (5, 5)
    assert np.allclose(op.matrix, np.eye(5))
    assert op.rows == op.cols


def test_truncated_operator_band():
    z = free_abelian(1)
    a = delta(z, 0) - delta(z, 1)
    op = build_truncated_operator(a, TrivialCocycle(z), WindowSpec(2))
    assert op.matrix.shape == (5, 4)
    assert [p.coords[0] for p in op.cols] == [-2, -1, 0, 1]
    expected = np.zeros((5, 4))
    for j in range(4):
        expected[j, j] = 1.0
        expected[j + 1, j] = -1.0
    assert np.allclose(op.matrix, expected)


def test_truncated_operator_sparse_support():
    z = free_abelian(1)
    a = delta(z, 0) + delta(z, 3)
    op = build_truncated_operator(a, TrivialCocycle(z), WindowSpec(2))
    assert [p.coords[0] for p in op.cols] == [-2, -1]
    assert op.matrix.shape == (5, 2)


def test_truncated_operator_empty_interior():
    z = free_abelian(1)
    a = delta(z, 0) + delta(z, 5)
    with pytest.raises(EmptyInteriorError):
        build_truncated_operator(a, TrivialCocycle(z), WindowSpec(2))


def test_truncated_columns_are_convolutions():
    # column gamma must equal a * delta_gamma restricted to the window
    rng = np.random.default_rng(23)
    z2 = free_abelian(2)
    sigma = random_bicharacter(z2, rng)
    a = random_element(z2, rng, coord_range=2)
    op = build_truncated_operator(a, sigma, WindowSpec(4))
    row_of = op.row_index
    for j, g in enumerate(op.cols):
        col = convolve(a, RingElement.delta(z2, g), sigma)
        vec = np.zeros(len(op.rows), dtype=complex)
        for p, c in col.terms.items():
            vec[row_of[p]] = complex(c)
        assert np.max(np.abs(op.matrix[:, j] - vec)) <= 1e-14


def test_kernel_search_unit_injective():
    z = free_abelian(1)
    report = kernel_search(delta(z, 0), TrivialCocycle(z), WindowSpec(3))
    assert report.nullity == 0
    assert report.rank == report.interior_size


def test_kernel_search_difference_injective():
    z = free_abelian(1)
    a = delta(z, 0) - delta(z, 1)
    report = kernel_search(a, TrivialCocycle(z), WindowSpec(4))
    assert report.nullity == 0
    assert report.basis == ()


def test_kernel_search_z2_finds_cofactor():
    c2 = cyclic_product(2)
    sigma = TrivialCocycle(c2)
    a = delta(c2, 0) + delta(c2, 1)
    report = kernel_search(a, sigma, WindowSpec(1))
    assert report.nullity == 1
    basis = report.basis[0]
    # basis vector proportional to delta_0 - delta_1
    c0 = complex(basis.coefficient(c2.point(0)))
    c1 = complex(basis.coefficient(c2.point(1)))
    assert abs(c0 + c1) <= 1e-12
    assert abs(abs(c0) - 1 / math.sqrt(2)) <= 1e-12
    # and it actually annihilates a
    assert is_zero(convolve(a, basis, sigma), 1e-12)


def test_rank_nullity_identity_random():
    rng = np.random.default_rng(31)
    z2 = free_abelian(2)
    for _ in range(20):
        sigma = random_bicharacter(z2, rng)
        a = random_element(z2, rng, coord_range=2)
        report = kernel_search(a, sigma, WindowSpec(4))
        assert report.nullity + report.rank == report.interior_size
        assert tuple(sorted(report.singular_values, reverse=True)) == report.singular_values


def test_kernel_triviality_bicharacter_windows():
    # free abelian rings have no zero divisors: truncated kernels stay trivial
    rng = np.random.default_rng(41)
    for d in (1, 2):
        group = free_abelian(d)
        for _ in range(15):
            sigma = random_bicharacter(group, rng)
            a = random_element(group, rng, max_support=4, coord_range=2)
            report = kernel_search(a, sigma, WindowSpec(5))
            assert report.nullity == 0


def test_search_zero_divisor_schedule():
    z = free_abelian(1)
    a = delta(z, 0) - delta(z, 1)
    result = search_zero_divisor(a, TrivialCocycle(z), 6)
    assert not result.found
    assert result.message == "no cofactor within window"
    assert result.nullities == tuple((n, 0) for n in range(1, 7))

    c2 = cyclic_product(2)
    found = search_zero_divisor(
        delta(c2, 0) + delta(c2, 1), TrivialCocycle(c2), 3
    )
    assert found.found and found.radius_found == 1
    assert found.cofactor is not None


def test_kernel_report_document():
    z = free_abelian(1)
    report = kernel_search(delta(z, 0) - delta(z, 1), TrivialCocycle(z), WindowSpec(3))
    doc = report.to_dict()
    assert doc["nullity"] == 0
    assert doc["rank"] == doc["interior_size"] == 6
    assert doc["kernel_basis"] == []  # explicit empty array, not omitted
    assert doc["singular_values"] == sorted(doc["singular_values"], reverse=True)

    c2 = cyclic_product(2)
    found = kernel_search(
        delta(c2, 0) + delta(c2, 1), TrivialCocycle(c2), WindowSpec(1)
    )
    doc2 = found.to_dict()
    assert len(doc2["kernel_basis"]) == 1
    assert {tuple(rec["coords"]) for rec in doc2["kernel_basis"][0]} == {(0,), (1,)}


# ---------------------------------------------------------------------------
# degree machinery


def test_degree_map_validation():
    z2 = free_abelian(2)
    DegreeMap(z2, (1, 1))
    DegreeMap(z2, (2, 3))
    with pytest.raises(ValueError):
        DegreeMap(z2, (2, 4))  # gcd 2, not surjective
    with pytest.raises(ValueError):
        DegreeMap(z2, (0, 0))
    with pytest.raises(ValueError):
        DegreeMap(cyclic_product(3), (1,))
    with pytest.raises(ValueError):
        DegreeMap(heisenberg3(), (1, 1, 1))  # weights apply to (a, b) only


def test_degree_map_is_homomorphism():
    z2 = free_abelian(2)
    phi = DegreeMap(z2, (2, -1))
    span = range(-2, 3)
    for g in itertools.product(span, span):
        for h in itertools.product(span, span):
            gp, hp = z2.point(*g), z2.point(*h)
            assert phi.degree(compose(gp, hp)) == phi.degree(gp) + phi.degree(hp)

    h3 = heisenberg3()
    psi = DegreeMap(h3, (1, 2))
    for g in itertools.product(range(-1, 2), repeat=3):
        for h in itertools.product(range(-1, 2), repeat=3):
            gp, hp = h3.point(*g), h3.point(*h)
            assert psi.degree(compose(gp, hp)) == psi.degree(gp) + psi.degree(hp)


def test_homogeneous_decompose_examples():
    z2 = free_abelian(2)
    phi = DegreeMap(z2, (1, 1))
    a = delta(z2, 1, 0) + delta(z2, 0, 1) + delta(z2, 1, 1)
    parts = homogeneous_decompose(a, phi)
    assert set(parts) == {1, 2}
    assert parts[1] == delta(z2, 1, 0) + delta(z2, 0, 1)
    assert parts[2] == delta(z2, 1, 1)
    # homogeneous input -> single entry; zero -> empty
    assert set(homogeneous_decompose(delta(z2, 1, 1), phi)) == {2}
    assert homogeneous_decompose(RingElement.zero(z2), phi) == {}


def test_decomposition_reconstructs():
    rng = np.random.default_rng(13)
    z2 = free_abelian(2)
    for _ in range(20):
        a = random_element(z2, rng)
        phi = random_degree_map(z2, rng)
        parts = homogeneous_decompose(a, phi)
        total = RingElement.zero(z2)
        for part in parts.values():
            total = total + part
        assert (total - a).max_abs() == 0.0


def test_leading_step_quantum_torus():
    # theta = 1/5: a = u1 + u1*u2, b = u2; leading part is u1*u2
    z2 = free_abelian(2)
    sigma = BicharacterCocycle(z2, ((0.0, 0.2), (0.0, 0.0)))
    u1 = delta(z2, 1, 0)
    u2 = delta(z2, 0, 1)
    a = u1 + convolve(u1, u2, sigma)
    phi = DegreeMap(z2, (1, 1))
    report = verify_leading_step(a, u2, sigma, phi)
    assert report.degree_a == 1 and report.degree_b == 1
    assert report.leading_matches and report.higher_parts_ok
    assert report.supports_disjoint and report.implication_held
    # the degree-2 part of a*b carries the phase sigma(e1, e2)
    product = convolve(a, u2, sigma)
    lead_coeff = complex(product.coefficient(z2.point(1, 1)))
    assert lead_coeff == pytest.approx(cmath.exp(2j * math.pi * 0.2), abs=1e-12)


def test_leading_step_homogeneous_inputs():
    z2 = free_abelian(2)
    sigma = TrivialCocycle(z2)
    phi = DegreeMap(z2, (1, 1))
    a = delta(z2, 1, 0) + delta(z2, 0, 1)
    b = delta(z2, 1, 1)
    report = verify_leading_step(a, b, sigma, phi)
    assert report.leading_matches
    # homogeneous a, b: remainder is empty, product equals a'*b'
    product = convolve(a, b, sigma)
    lead = convolve(a, b, sigma)
    assert (product - lead).max_abs() == 0.0


def test_leading_step_constant_term():
    z2 = free_abelian(2)
    sigma = TrivialCocycle(z2)
    phi = DegreeMap(z2, (1, 0))
    a = delta(z2, 0, 0) + delta(z2, 1, 0)
    b = delta(z2, 0, 0)
    report = verify_leading_step(a, b, sigma, phi)
    assert report.degree_a == 0 and report.degree_b == 0
    assert report.leading_matches and report.higher_parts_ok


@pytest.mark.parametrize("seed", [0, 1])
def test_leading_step_random_property(seed):
    rng = np.random.default_rng(seed)
    z1, z2, h3 = free_abelian(1), free_abelian(2), heisenberg3()
    cases = [
        (z1, lambda: random_bicharacter(z1, rng)),
        (z2, lambda: random_bicharacter(z2, rng)),
        (h3, lambda: TrivialCocycle(h3)),
    ]
    for group, make_sigma in cases:
        for _ in range(20):
            sigma = make_sigma()
            a = random_element(group, rng)
            b = random_element(group, rng)
            phi = random_degree_map(group, rng)
            report = verify_leading_step(a, b, sigma, phi)
            assert report.leading_matches
            assert report.higher_parts_ok
            assert report.supports_disjoint
            assert report.implication_held


def test_degree_nonneg_examples():
    z2 = free_abelian(2)
    assert degree_nonneg(RingElement.zero(z2)) == -1
    assert degree_nonneg(delta(z2, 0, 0)) == 0
    assert degree_nonneg(delta(z2, 1, 2)) == 3
    with pytest.raises(ValueError):
        degree_nonneg(delta(z2, -1, 0))


def test_degree_nonneg_cross_terms_survive_irrational_twist():
    # (u1+u2)*(u1-u2): the mixed terms pick up distinct phases and cannot
    # cancel when the commutator phase is not 1
    z2 = free_abelian(2)
    sigma = BicharacterCocycle(z2, ((0.0, math.sqrt(2) / 10), (0.0, 0.0)))
    a = delta(z2, 1, 0) + delta(z2, 0, 1)
    b = delta(z2, 1, 0) - delta(z2, 0, 1)
    product = convolve(a, b, sigma)
    assert degree_nonneg(product) == 2
    assert z2.point(1, 1) in dict(product.terms)


def test_degree_multiplicativity_random():
    rng = np.random.default_rng(53)
    for d in (1, 2):
        group = free_abelian(d)
        for _ in range(30):
            sigma = random_bicharacter(group, rng)
            a = random_element(group, rng, nonneg=True)
            b = random_element(group, rng, nonneg=True)
            product = convolve(a, b, sigma)
            assert degree_nonneg(product) == degree_nonneg(a) + degree_nonneg(b)


def test_commutator_phase():
    z2 = free_abelian(2)
    assert commutator_phase(TrivialCocycle(z2), 1, 2) == pytest.approx(1.0)
    sigma = BicharacterCocycle(z2, ((0.0, 0.25), (0.0, 0.0)))
    assert commutator_phase(sigma, 1, 2) == pytest.approx(1j, abs=1e-12)
    assert commutator_phase(sigma, 1, 1) == pytest.approx(1.0, abs=1e-12)
    assert commutator_phase(sigma, 2, 2) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(IndexError):
        commutator_phase(sigma, 0, 1)
    with pytest.raises(IndexError):
        commutator_phase(sigma, 1, 3)
