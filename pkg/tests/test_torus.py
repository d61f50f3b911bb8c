import pytest
from hypothesis import given, settings, strategies as st

from ssverify.intlinalg import IntMatrix, Lattice
from ssverify.torus import (
    CycloFactorization,
    NotFiniteOrder,
    TwistedTorus,
    UnsupportedCyclotomic,
    charpoly,
    cyclo_factor,
    cyclotomic,
    euler_phi,
    factorization_text,
    fixed_structure,
    full_torus,
    order_polynomial_text,
    phi_order,
    poly_div_exact,
    poly_eval,
    restrict_to_lattice,
    sylow_phi_subtorus,
)

SWAP = IntMatrix(((0, 1), (1, 0)))
PHI3_COMPANION = IntMatrix(((0, -1), (1, -1)))  # root of x^2 + x + 1


def block_diag(*blocks):
    n = sum(b.rows for b in blocks)
    out = [[0] * n for _ in range(n)]
    at = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[at + i][at + j] = b.entries[i][j]
        at += b.rows
    return IntMatrix(tuple(map(tuple, out)))


class TestPolynomials:
    def test_euler_phi(self):
        assert [euler_phi(m) for m in (1, 2, 3, 4, 6, 8, 12, 30)] == [1, 1, 2, 2, 2, 4, 4, 8]

    def test_cyclotomic_small(self):
        assert cyclotomic(1) == (-1, 1)
        assert cyclotomic(2) == (1, 1)
        assert cyclotomic(3) == (1, 1, 1)
        assert cyclotomic(4) == (1, 0, 1)
        assert cyclotomic(6) == (1, -1, 1)
        assert cyclotomic(8) == (1, 0, 0, 0, 1)
        assert cyclotomic(12) == (1, 0, -1, 0, 1)

    def test_cyclotomic_product_is_x_pow_minus_one(self):
        from ssverify.torus import poly_mul
        poly = [1]
        for d in (1, 2, 3, 6):
            poly = poly_mul(poly, list(cyclotomic(d)))
        assert poly == [-1, 0, 0, 0, 0, 0, 1]  # x^6 - 1

    def test_poly_div_exact(self):
        assert poly_div_exact([-1, 0, 1], [1, 1]) == [-1, 1]
        assert poly_div_exact([1, 0, 1], [1, 1]) is None

    def test_charpoly(self):
        assert charpoly(IntMatrix(((2, 1), (1, 2)))) == [3, -4, 1]
        assert charpoly(SWAP) == [-1, 0, 1]
        assert charpoly(IntMatrix.identity(3)) == [-1, 3, -3, 1]

    def test_poly_eval(self):
        assert poly_eval([3, -4, 1], 5) == 8


class TestCycloFactor:
    def test_identity_rank4(self):
        fac = cyclo_factor(full_torus(IntMatrix.identity(4)))
        assert fac.factors == ((1, 4),)

    def test_minus_identity_rank4(self):
        phi = IntMatrix(tuple(tuple(-(i == j) for j in range(4)) for i in range(4)))
        assert cyclo_factor(full_torus(phi)).factors == ((2, 4),)

    def test_swap(self):
        assert cyclo_factor(full_torus(SWAP)).factors == ((1, 1), (2, 1))

    def test_degree_identity(self):
        phi = block_diag(IntMatrix.identity(1), PHI3_COMPANION, SWAP)
        fac = cyclo_factor(full_torus(phi))
        assert fac.dim == 5

    def test_non_cyclotomic_rejected(self):
        with pytest.raises(NotFiniteOrder):
            cyclo_factor(full_torus(IntMatrix(((2, 0), (0, 1)))))

    def test_str(self):
        fac = CycloFactorization(((1, 2), (3, 1)))
        assert str(fac) == "Phi1^2*Phi3"


class TestPhiOrder:
    def test_orders(self):
        assert phi_order(full_torus(IntMatrix.identity(2))) == 1
        assert phi_order(full_torus(SWAP)) == 2
        assert phi_order(full_torus(PHI3_COMPANION)) == 3

    def test_unipotent_rejected(self):
        with pytest.raises(NotFiniteOrder):
            phi_order(full_torus(IntMatrix(((1, 1), (0, 1)))))


class TestFixedStructure:
    def test_split_rank1(self):
        g = fixed_structure(full_torus(IntMatrix.identity(1)), 3)
        assert g.invariant_factors == (2,)

    def test_nonsplit_swap_is_cyclic(self):
        g = fixed_structure(full_torus(SWAP), 3)
        assert g.invariant_factors == (8,)  # cyclic of order q^2 - 1

    def test_trivial(self):
        g = fixed_structure(full_torus(IntMatrix.identity(2)), 2)
        assert g.order == 1

    def test_order_matches_chi(self):
        tori = [
            full_torus(IntMatrix.identity(2)),
            full_torus(SWAP),
            full_torus(PHI3_COMPANION),
            full_torus(block_diag(SWAP, PHI3_COMPANION)),
            full_torus(block_diag(IntMatrix.identity(1), IntMatrix(((-1,),)))),
        ]
        for t in tori:
            fac = cyclo_factor(t)
            for q in (2, 3, 4, 5, 7, 8, 9):
                assert fixed_structure(t, q).order == fac.value_at(q)

    def test_pure_phi_torus_is_homocyclic(self):
        # rank-4 pure Phi_3 torus: S^F = (Z/Phi_3(q))^2
        t = full_torus(block_diag(PHI3_COMPANION, PHI3_COMPANION))
        for q in (2, 3, 5):
            expected = q * q + q + 1
            assert fixed_structure(t, q).invariant_factors == (expected, expected)

    @given(st.permutations(range(4)), st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4),
           st.sampled_from([2, 3, 4, 5, 7]))
    @settings(max_examples=60, deadline=None)
    def test_signed_permutation_grid(self, perm, signs, q):
        phi = IntMatrix(tuple(tuple(signs[i] * (perm[i] == j) for j in range(4))
                              for i in range(4)))
        t = full_torus(phi)
        fac = cyclo_factor(t)
        assert fac.dim == 4
        assert fixed_structure(t, q).order == fac.value_at(q)


class TestSylowSubtorus:
    def test_swap_phi1(self):
        s = sylow_phi_subtorus(full_torus(SWAP), 1)
        assert s.lattice.basis.entries == ((1, 1),)
        assert s.phi == IntMatrix(((1,),))

    def test_swap_phi2(self):
        s = sylow_phi_subtorus(full_torus(SWAP), 2)
        assert s.lattice.basis.entries == ((1, -1),)
        assert s.phi == IntMatrix(((-1,),))

    def test_identity_phi3_is_rank0(self):
        s = sylow_phi_subtorus(full_torus(IntMatrix.identity(2)), 3)
        assert s.dim == 0

    def test_multiplicity_preserved(self):
        t = full_torus(block_diag(IntMatrix.identity(1), PHI3_COMPANION, SWAP))
        fac = cyclo_factor(t)
        for m in (1, 2, 3):
            s = sylow_phi_subtorus(t, m)
            sub_fac = cyclo_factor(s)
            assert sub_fac.factors == ((m, fac.multiplicity(m)),)

    def test_restricted_phi_matches_embedding(self):
        # 3-cycle on Z^3: the Phi_3 part is a rank-2 sublattice
        cycle = IntMatrix(((0, 0, 1), (1, 0, 0), (0, 1, 0)))
        t = full_torus(cycle)
        s = sylow_phi_subtorus(t, 3)
        assert s.dim == 2
        # phi' in the sublattice basis must reproduce the ambient action
        for j in range(2):
            ambient = cycle.apply(s.lattice.basis.row(j))
            via_sub = tuple(
                sum(s.phi.entries[i][j] * s.lattice.basis.entries[i][a] for i in range(2))
                for a in range(3))
            assert ambient == via_sub
        # and satisfies Phi_3(phi') = 0
        sq = s.phi @ s.phi
        total = tuple(tuple(sq.entries[i][k] + s.phi.entries[i][k] + (i == k) for k in range(2))
                      for i in range(2))
        assert not any(any(row) for row in total)

    def test_sylow_fixed_points_are_homocyclic(self):
        cycle = IntMatrix(((0, 0, 1), (1, 0, 0), (0, 1, 0)))
        s = sylow_phi_subtorus(full_torus(cycle), 3)
        for q in (2, 3, 5):
            assert fixed_structure(s, q).invariant_factors == (q * q + q + 1,)


class TestOrderPolynomialText:
    def test_phi1_cubed_phi2(self):
        phi = block_diag(IntMatrix.identity(3), IntMatrix(((-1,),)))
        assert order_polynomial_text(full_torus(phi)) == "(q-1)^3*(q+1)"

    def test_phi1_sq_phi3(self):
        phi = block_diag(IntMatrix.identity(2), PHI3_COMPANION)
        assert order_polynomial_text(full_torus(phi)) == "(q-1)^2*(q^2+q+1)"

    def test_phi1(self):
        assert order_polynomial_text(full_torus(IntMatrix.identity(1))) == "(q-1)"

    def test_sorted_by_index(self):
        phi = block_diag(PHI3_COMPANION, IntMatrix(((-1,),)), IntMatrix.identity(1))
        assert order_polynomial_text(full_torus(phi)) == "(q-1)*(q+1)*(q^2+q+1)"

    def test_unsupported_index(self):
        companion5 = IntMatrix(((0, 0, 0, -1), (1, 0, 0, -1), (0, 1, 0, -1), (0, 0, 1, -1)))
        t = full_torus(companion5)
        assert cyclo_factor(t).factors == ((5, 1),)
        with pytest.raises(UnsupportedCyclotomic):
            order_polynomial_text(t)

    def test_rank0(self):
        assert factorization_text(CycloFactorization(())) == "1"


def test_restrict_to_lattice():
    lat = Lattice.from_rows([(1, 1), (0, 2)], 2)
    m = IntMatrix(((0, 1), (1, 0)))  # swap preserves this lattice
    r = restrict_to_lattice(m, lat)
    for j in range(2):
        ambient = m.apply(lat.basis.row(j))
        via = tuple(sum(r.entries[i][j] * lat.basis.entries[i][a] for i in range(2))
                    for a in range(2))
        assert ambient == via
