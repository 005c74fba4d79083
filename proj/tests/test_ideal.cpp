#include <catch2/catch_amalgamated.hpp>

#include "trideal/ideal.hpp"

using namespace trideal;

// triangular-2-2 element guide: index = E11 + 2*E12 + 4*E22.
// Named ideals: N = {0,2}, P1 = {0,1,2,3}, Q2 = {0,2,4,6}.

TEST_CASE("closure produces the expected one-sided ideals") {
    Ring R = preset_triangular(2, 2);
    Ideal col = make_ideal(R, {1}, Side::Left);
    REQUIRE(col.elems == std::vector<Elem>{0, 1});
    Ideal row = make_ideal(R, {1}, Side::Right);
    REQUIRE(row.elems == std::vector<Elem>{0, 1, 2, 3});
    Ideal two = make_ideal(R, {1}, Side::TwoSided);
    REQUIRE(two.elems == std::vector<Elem>{0, 1, 2, 3});
    Ideal left_of_E12 = make_ideal(R, {2}, Side::Left);
    REQUIRE(left_of_E12.elems == std::vector<Elem>{0, 2});
    REQUIRE(make_ideal(R, {}, Side::Left).elems == std::vector<Elem>{0});
    REQUIRE_THROWS_AS(make_ideal(R, {99}, Side::Left), InputError);
}

TEST_CASE("ideal arithmetic") {
    Ring R = preset_triangular(2, 2);
    Ideal A = make_ideal(R, {1}, Side::Left);
    Ideal B = make_ideal(R, {2}, Side::Left);
    REQUIRE(ideal_sum(A, B).elems == std::vector<Elem>{0, 1, 2, 3});
    REQUIRE(ideal_product(A, A).elems == A.elems);
    REQUIRE(ideal_product(B, B).is_zero());

    Ideal P1 = make_ideal(R, {1}, Side::TwoSided);
    Ideal Q2 = make_ideal(R, {4}, Side::TwoSided);
    REQUIRE(Q2.elems == std::vector<Elem>{0, 2, 4, 6});
    Ideal N = ideal_intersection(P1, Q2);
    REQUIRE(N.elems == std::vector<Elem>{0, 2});
    REQUIRE(is_idempotent_ideal(P1));
    REQUIRE(is_idempotent_ideal(Q2));
    REQUIRE_FALSE(is_idempotent_ideal(N));
    REQUIRE_THROWS_AS(ideal_sum(A, P1), InputError);
}

TEST_CASE("minimal generators") {
    Ring R = preset_triangular(2, 2);
    Ideal P1 = make_ideal(R, {1, 2, 3}, Side::TwoSided);
    REQUIRE(minimal_generators(P1) == std::vector<Elem>{1});
    Ideal N = make_ideal(R, {2}, Side::TwoSided);
    REQUIRE(minimal_generators(N) == std::vector<Elem>{2});
    Ideal full = unit_ideal(R, Side::Left);
    REQUIRE(close_elems(R, minimal_generators(full), Side::Left).size() == 8);
}

TEST_CASE("ideal census of small triangular rings") {
    Ring R2 = preset_triangular(2, 2);
    auto left2 = enumerate_ideals(R2, Side::Left);
    REQUIRE(left2.size() == 7);
    auto two2 = enumerate_ideals(R2, Side::TwoSided);
    REQUIRE(two2.size() == 5);
    REQUIRE(two2[0].elems == std::vector<Elem>{0});
    REQUIRE(two2[1].elems == std::vector<Elem>{0, 2});
    REQUIRE(two2[2].elems == std::vector<Elem>{0, 1, 2, 3});
    REQUIRE(two2[3].elems == std::vector<Elem>{0, 2, 4, 6});
    REQUIRE(two2[4].count() == 8);
    int idem_left = 0;
    for (const auto& I : left2)
        if (is_idempotent_ideal(I)) ++idem_left;
    REQUIRE(idem_left == 6);

    Ring R3 = preset_triangular(3, 2);
    REQUIRE(enumerate_ideals(R3, Side::Left).size() == 40);
    REQUIRE(enumerate_ideals(R3, Side::TwoSided).size() == 14);

    Ring big = preset_triangular(2, 4);
    REQUIRE(enumerate_ideals(big, Side::TwoSided).size() > 0);
    REQUIRE_THROWS_AS(enumerate_ideals(big, Side::TwoSided, 32), CapError);
}

TEST_CASE("jacobson radical") {
    REQUIRE(jacobson_radical(preset_triangular(2, 2)).elems == std::vector<Elem>{0, 2});
    REQUIRE(jacobson_radical(preset_modular(4)).elems == std::vector<Elem>{0, 2});
    REQUIRE(jacobson_radical(preset_modular(6)).is_zero());
    REQUIRE(jacobson_radical(preset_full_matrix(2, 2)).is_zero());
}

TEST_CASE("maximal two-sided ideals") {
    Ring R = preset_triangular(2, 2);
    auto mx = maximal_two_sided_ideals(R);
    REQUIRE(mx.size() == 2);
    REQUIRE(mx[0].elems == std::vector<Elem>{0, 1, 2, 3});
    REQUIRE(mx[1].elems == std::vector<Elem>{0, 2, 4, 6});

    auto mz = maximal_two_sided_ideals(preset_modular(6));
    REQUIRE(mz.size() == 2);
    REQUIRE(mz[0].elems == std::vector<Elem>{0, 3});
    REQUIRE(mz[1].elems == std::vector<Elem>{0, 2, 4});
}

TEST_CASE("purity of the maximal ideals of triangular-2-2") {
    Ring R = preset_triangular(2, 2);
    Ideal P1 = make_ideal(R, {1}, Side::TwoSided);
    Ideal Q2 = make_ideal(R, {4}, Side::TwoSided);
    REQUIRE(is_right_pure(P1));
    REQUIRE_FALSE(is_left_pure(P1));
    REQUIRE(is_left_pure(Q2));
    REQUIRE_FALSE(is_right_pure(Q2));
}

TEST_CASE("quotient rings") {
    Ring R = preset_triangular(2, 2);
    Ideal N = make_ideal(R, {2}, Side::TwoSided);
    Quotient Q = quotient_ring(R, N);
    REQUIRE(Q.ring.size() == 4);
    REQUIRE(Q.ring.commutative());
    REQUIRE(Q.proj[0] == Q.proj[2]);
    REQUIRE(Q.lift[Q.proj[5]] <= 5);
    // projection is a homomorphism
    for (Elem a = 0; a < R.size(); ++a)
        for (Elem b = 0; b < R.size(); ++b) {
            REQUIRE(Q.ring.mul(Q.proj[a], Q.proj[b]) == Q.proj[R.mul(a, b)]);
            REQUIRE(Q.ring.add(Q.proj[a], Q.proj[b]) == Q.proj[R.add(a, b)]);
        }
    REQUIRE(is_semisimple_quotient(R, N));
    REQUIRE_FALSE(is_semisimple_quotient(R, zero_ideal(R, Side::TwoSided)));

    Ideal left_only = make_ideal(R, {1}, Side::Left);
    REQUIRE_THROWS_AS(quotient_ring(R, left_only), PreconditionError);
}

TEST_CASE("central idempotents") {
    Ring R = preset_triangular(2, 2);
    REQUIRE(central_idempotents(R) == std::vector<Elem>{0, 5});
    REQUIRE(primitive_central_idempotents(R) == std::vector<Elem>{5});

    Quotient Q = quotient_ring(R, make_ideal(R, {2}, Side::TwoSided));
    auto prim = primitive_central_idempotents(Q.ring);
    REQUIRE(prim.size() == 2);
    REQUIRE(Q.ring.add(prim[0], prim[1]) == Q.ring.one());
    REQUIRE(Q.ring.mul(prim[0], prim[1]) == Q.ring.zero());
}
