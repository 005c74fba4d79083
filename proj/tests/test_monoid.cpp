#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "trideal/monoid.hpp"

using namespace trideal;

namespace {

const ExtNat INF = ExtNat::inf();

// running example: 2x + 3y in 5N, x + 2y in 2N
CongruenceSystem two_row() {
    return make_congruence_system(2, {{2, 3}, {1, 2}}, {5, 2});
}

std::vector<int> union_of(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

}  // namespace

TEST_CASE("extended naturals absorb and annihilate") {
    REQUIRE(INF + ExtNat(3) == INF);
    REQUIRE(ExtNat(3) + INF == INF);
    REQUIRE(INF * ExtNat(0) == ExtNat(0));
    REQUIRE(ExtNat(0) * INF == ExtNat(0));
    REQUIRE(INF * ExtNat(2) == INF);
    REQUIRE(INF * INF == INF);
    REQUIRE(ExtNat(2) + ExtNat(3) == ExtNat(5));
    REQUIRE(ExtNat(2) * ExtNat(3) == ExtNat(6));
    std::vector<ExtNat> vals{ExtNat(0), ExtNat(1), ExtNat(4), INF};
    for (ExtNat a : vals)
        for (ExtNat b : vals) {
            REQUIRE(a + b == b + a);
            REQUIRE(a * b == b * a);
            for (ExtNat c : vals) {
                REQUIRE((a + b) + c == a + (b + c));
                REQUIRE((a * b) * c == a * (b * c));
            }
        }
    REQUIRE_THROWS_AS(ExtNat(-1), InputError);
    REQUIRE(ExtNat(0) < INF);
    REQUIRE_FALSE(INF < INF);
    REQUIRE(ExtNat(2) < ExtNat(3));
}

TEST_CASE("supports split finite and infinite coordinates") {
    Supports s = supports(DimVector{1, INF});
    REQUIRE(s.supp == std::vector<int>{0, 1});
    REQUIRE(s.inf_supp == std::vector<int>{1});
    s = supports(DimVector{0, 0});
    REQUIRE(s.supp.empty());
    REQUIRE(s.inf_supp.empty());
    s = supports(DimVector{INF, 0});
    REQUIRE(s.supp == std::vector<int>{0});
    REQUIRE(s.inf_supp == std::vector<int>{0});

    // both support sets are unions under addition
    std::vector<ExtNat> vals{ExtNat(0), ExtNat(2), INF};
    for (ExtNat a0 : vals)
        for (ExtNat a1 : vals)
            for (ExtNat b0 : vals)
                for (ExtNat b1 : vals) {
                    DimVector a{a0, a1}, b{b0, b1};
                    Supports sa = supports(a), sb = supports(b);
                    Supports sum = supports(dim_add(a, b));
                    REQUIRE(sum.supp == union_of(sa.supp, sb.supp));
                    REQUIRE(sum.inf_supp == union_of(sa.inf_supp, sb.inf_supp));
                }
}

TEST_CASE("membership follows the congruence rows") {
    CongruenceSystem cs = two_row();
    REQUIRE(is_member(cs, {2, 2}));
    REQUIRE(is_member(cs, {1, INF}));
    REQUIRE_FALSE(is_member(cs, {1, 0}));
    REQUIRE(is_member(cs, {10, 0}));
    REQUIRE(is_member(cs, {0, 5}));
    REQUIRE_FALSE(is_member(cs, {12, 3}));
    REQUIRE_THROWS_AS(is_member(cs, {1, 2, 3}), InputError);

    REQUIRE_THROWS_AS(make_congruence_system(0, {}, {}), InputError);
    REQUIRE_THROWS_AS(make_congruence_system(2, {{1, 1}}, {1}), InputError);
    REQUIRE_THROWS_AS(make_congruence_system(2, {{1, -1}}, {2}), InputError);
    REQUIRE_THROWS_AS(make_congruence_system(2, {{1, 1, 1}}, {2}), InputError);
    REQUIRE_THROWS_AS(make_congruence_system(2, {{1, 1}}, {2, 3}), InputError);
}

TEST_CASE("membership is additive") {
    std::mt19937 rng(7);
    for (const CongruenceSystem& cs :
         {two_row(), make_congruence_system(2, {{1, 1}}, {2})}) {
        std::vector<DimVector> gens = monoid_generators(cs);
        std::uniform_int_distribution<int> coef(0, 3);
        for (int trial = 0; trial < 200; ++trial) {
            DimVector a(cs.k, ExtNat(0)), b(cs.k, ExtNat(0));
            for (const DimVector& g : gens) {
                for (int rep = coef(rng); rep > 0; --rep) a = dim_add(a, g);
                for (int rep = coef(rng); rep > 0; --rep) b = dim_add(b, g);
            }
            REQUIRE(is_member(cs, a));
            REQUIRE(is_member(cs, b));
            REQUIRE(is_member(cs, dim_add(a, b)));
        }
    }
}

TEST_CASE("finite members reduce to the box basis") {
    CongruenceSystem cs = two_row();
    std::vector<DimVector> basis = finite_hilbert_basis(cs);
    REQUIRE(basis == std::vector<DimVector>{{0, 5}, {2, 2}, {6, 1}, {10, 0}});

    CongruenceSystem free2 = make_congruence_system(2, {}, {});
    REQUIRE(finite_hilbert_basis(free2) == std::vector<DimVector>{{0, 1}, {1, 0}});

    CongruenceSystem even = make_congruence_system(1, {{1}}, {2});
    REQUIRE(finite_hilbert_basis(even) == std::vector<DimVector>{{2}});

    // no basis element splits into two nonzero members
    const long long L = modulus_lcm(cs);
    auto box = detail::box_members(cs, 2 * L, 1000000);
    std::set<std::vector<long long>> members(box.begin(), box.end());
    for (const DimVector& bd : basis) {
        std::vector<long long> x{bd[0].value, bd[1].value};
        for (const auto& y : box) {
            if (y == x || (y[0] == 0 && y[1] == 0)) continue;
            std::vector<long long> rest{x[0] - y[0], x[1] - y[1]};
            if (rest[0] < 0 || rest[1] < 0 || (rest[0] == 0 && rest[1] == 0)) continue;
            REQUIRE_FALSE(members.count(rest));
        }
    }

    // and every member inside the box is a sum of basis elements
    std::vector<std::vector<long long>> raw;
    for (const DimVector& bd : basis) raw.push_back({bd[0].value, bd[1].value});
    for (const auto& m : box) {
        auto picks = detail::bounded_decompose(raw, m, 1000000);
        REQUIRE(picks.has_value());
        std::vector<long long> sum{0, 0};
        for (int g : *picks) {
            sum[0] += raw[g][0];
            sum[1] += raw[g][1];
        }
        REQUIRE(sum == m);
    }

    REQUIRE_THROWS_AS(finite_hilbert_basis(cs, 10), SearchCapError);
}

TEST_CASE("support patterns yield their infinite generators") {
    CongruenceSystem cs = two_row();
    REQUIRE(support_generators(cs, {1}) ==
            std::vector<DimVector>{{0, INF}, {1, INF}});
    REQUIRE(support_generators(cs, {0}) == std::vector<DimVector>{{INF, 0}});
    REQUIRE(support_generators(cs, {0, 1}) == std::vector<DimVector>{{INF, INF}});
    REQUIRE_THROWS_AS(support_generators(cs, {}), InputError);
    REQUIRE_THROWS_AS(support_generators(cs, {2}), InputError);
}

TEST_CASE("the full generator list is irreducible and complete") {
    CongruenceSystem cs = two_row();
    std::vector<DimVector> gens = monoid_generators(cs);
    REQUIRE(gens == std::vector<DimVector>{{0, 5},
                                           {0, INF},
                                           {1, INF},
                                           {2, 2},
                                           {6, 1},
                                           {10, 0},
                                           {INF, 0}});
    for (const DimVector& g : gens) REQUIRE(is_member(cs, g));

    CongruenceSystem free1 = make_congruence_system(1, {}, {});
    REQUIRE(monoid_generators(free1) == std::vector<DimVector>{{1}, {INF}});

    CongruenceSystem even = make_congruence_system(1, {{1}}, {2});
    REQUIRE(monoid_generators(even) == std::vector<DimVector>{{2}, {INF}});
}

TEST_CASE("a mixed generator cannot split but its double can") {
    CongruenceSystem cs = two_row();
    const DimVector x{1, INF};
    REQUIRE(is_member(cs, x));

    // candidate summands: bounded members, finite or with infinite entries
    std::vector<DimVector> cands;
    std::vector<ExtNat> coords;
    for (long long v = 0; v <= 20; ++v) coords.push_back(ExtNat(v));
    coords.push_back(INF);
    for (ExtNat a : coords)
        for (ExtNat b : coords) {
            DimVector y{a, b};
            if (is_member(cs, y)) cands.push_back(y);
        }
    for (const DimVector& y : cands)
        for (const DimVector& z : cands) {
            if (y == x || z == x) continue;
            if (supports(y).supp.empty() || supports(z).supp.empty()) continue;
            REQUIRE_FALSE(dim_add(y, z) == x);
        }

    DimVector dbl = dim_add(x, x);
    REQUIRE(dbl == DimVector{2, INF});
    REQUIRE(dim_add({2, 2}, {0, INF}) == dbl);
    std::vector<DimVector> parts = express(cs, dbl);
    DimVector sum(2, ExtNat(0));
    for (const DimVector& p : parts) sum = dim_add(sum, p);
    REQUIRE(sum == dbl);
    REQUIRE(parts.size() >= 2);
}

TEST_CASE("expressions resum to their input") {
    CongruenceSystem cs = two_row();

    std::vector<DimVector> parts = express(cs, {8, 3});
    DimVector sum(2, ExtNat(0));
    for (const DimVector& p : parts) sum = dim_add(sum, p);
    REQUIRE(sum == DimVector{8, 3});

    parts = express(cs, {INF, INF});
    REQUIRE(parts.size() == 2);
    sum = DimVector(2, ExtNat(0));
    for (const DimVector& p : parts) sum = dim_add(sum, p);
    REQUIRE(sum == DimVector{INF, INF});

    REQUIRE(express(cs, {1, INF}) == std::vector<DimVector>{{1, INF}});
    REQUIRE(express(cs, {0, 0}).empty());

    REQUIRE_THROWS_AS(express(cs, {1, 0}), PreconditionError);
    REQUIRE_THROWS_AS(express(cs, {12, 3}), PreconditionError);
}

TEST_CASE("semiperfect witnesses are minimal unit multiples") {
    SemiPerfectReport rep = semiperfect_witnesses(two_row());
    REQUIRE(rep.ok);
    REQUIRE(rep.witnesses == std::vector<long long>{10, 5});

    rep = semiperfect_witnesses(make_congruence_system(2, {{1, 1}}, {2}));
    REQUIRE(rep.ok);
    REQUIRE(rep.witnesses == std::vector<long long>{2, 2});

    rep = semiperfect_witnesses(make_congruence_system(1, {}, {}));
    REQUIRE(rep.ok);
    REQUIRE(rep.witnesses == std::vector<long long>{1});
}

TEST_CASE("telescope limits report block multiplicities") {
    Ring T = preset_triangular(2, 2);
    Ring U = preset_triangular(3, 2);

    Mat id1 = mat_identity(T, 1);
    DimVector free_rank_one = dim_vector_of_telescope(T, telescope_constant(T, id1, id1));
    REQUIRE(free_rank_one == DimVector{1, 1});

    Ideal P1 = make_ideal(T, {1, 2}, Side::TwoSided);
    Telescope wh = whitehead_build(T, P1, {1, 2});
    REQUIRE(dim_vector_of_telescope(T, wh) == DimVector{INF, 0});

    Mat z1 = mat_zero(T, 1, 1);
    REQUIRE(dim_vector_of_telescope(T, telescope_constant(T, z1, z1)) ==
            DimVector{0, 0});

    // additive over block direct sums: the rank-two constant telescope is
    // the sum of two rank-one ones
    Mat id2 = mat_identity(T, 2);
    REQUIRE(dim_vector_of_telescope(T, telescope_constant(T, id2, id2)) ==
            dim_add(free_rank_one, free_rank_one));

    Mat uid = mat_identity(U, 1);
    REQUIRE(dim_vector_of_telescope(U, telescope_constant(U, uid, uid)) ==
            DimVector{1, 1, 1});

    REQUIRE_THROWS_AS(dim_vector_of_telescope(U, wh), InputError);
    REQUIRE_THROWS_AS(dim_vector_of_telescope(T, wh, 1), InputError);
    Telescope bare = telescope_constant(T, id1);
    REQUIRE_THROWS_AS(dim_vector_of_telescope(T, bare), PreconditionError);
}
