#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "trideal/tree.hpp"

using namespace trideal;

// triangular-2-2 element guide: index = E11 + 2*E12 + 4*E22, one = 5.
// Named ideals: N = {0,2}, P1 = {0,1,2,3}, Q2 = {0,2,4,6}.
// triangular-3-2 guide: index = E11 + 2*E12 + 4*E13 + 8*E22 + 16*E23 + 32*E33,
// one = 41.  I1 = <E11,E22,E23> (32 elements), I2 = <E22,E23> (16 elements).

namespace {

ChainSpec chain32(const Ring& R) {
    ChainSpec cs;
    cs.ring = &R;
    cs.ideals = {unit_ideal(R, Side::TwoSided),
                 make_ideal(R, {1, 8, 16}, Side::TwoSided),
                 make_ideal(R, {8, 16}, Side::TwoSided)};
    cs.gens = {{41}, {1, 8, 16}, {8, 16}};
    cs.constant_tail = true;
    return complete_lifts(cs);
}

ChainSpec chain22(const Ring& T) {
    ChainSpec cs;
    cs.ring = &T;
    Ideal P1 = make_ideal(T, {1}, Side::TwoSided);
    cs.ideals = {unit_ideal(T, Side::TwoSided), P1, P1};
    cs.gens = {{5}, {1, 2}, {1, 2}};
    cs.constant_tail = true;
    return complete_lifts(cs);
}

ChainSpec constant22(const Ring& T) {
    ChainSpec cs;
    cs.ring = &T;
    cs.ideals = {unit_ideal(T, Side::TwoSided), unit_ideal(T, Side::TwoSided)};
    cs.lifts = {{{0, 1}, 5}};
    cs.gens = {{5}, {5}};
    cs.constant_tail = true;
    return cs;
}

}  // namespace

TEST_CASE("chain specs are validated check by check") {
    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    auto rep = validate_chain_spec(cs);
    REQUIRE(rep.all_ok());

    Ring T = preset_triangular(2, 2);
    ChainSpec nil;
    nil.ring = &T;
    nil.ideals = {unit_ideal(T, Side::TwoSided), make_ideal(T, {2}, Side::TwoSided)};
    nil.lifts = {{{0, 1}, 5}};
    nil.gens = {{5}, {2}};
    nil.constant_tail = true;
    auto bad = validate_chain_spec(nil);
    REQUIRE_FALSE(bad.all_ok());
    bool found = false;
    for (const auto& c : bad.checks)
        if (c.name == "idempotent ideals") {
            found = true;
            REQUIRE_FALSE(c.ok);
            REQUIRE_FALSE(c.witness.empty());
        }
    REQUIRE(found);

    ChainSpec up;
    up.ring = &T;
    up.ideals = {make_ideal(T, {1}, Side::TwoSided), unit_ideal(T, Side::TwoSided)};
    up.lifts = {{{0, 1}, 5}};
    up.gens = {{1, 2}, {5}};
    auto asc = validate_chain_spec(up);
    REQUIRE_FALSE(asc.all_ok());
    for (const auto& c : asc.checks)
        if (c.name == "descending") REQUIRE_FALSE(c.ok);

    ChainSpec ragged = constant22(T);
    ragged.gens.pop_back();
    auto shp = validate_chain_spec(ragged);
    REQUIRE_FALSE(shp.all_ok());
    REQUIRE(shp.checks.front().name == "shape");
    REQUIRE_FALSE(shp.checks.front().ok);

    ChainSpec wrong = chain32(R);
    wrong.lifts[{1, 2}] = 8;  // E22 projects into I2, so it cannot lift I1
    auto lft = validate_chain_spec(wrong);
    REQUIRE_FALSE(lft.all_ok());
    for (const auto& c : lft.checks)
        if (c.name == "central idempotent lifts") REQUIRE_FALSE(c.ok);
}

TEST_CASE("central idempotent lifts are completed lowest first") {
    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    REQUIRE(cs.lifts.at({0, 1}) == 32);
    REQUIRE(cs.lifts.at({1, 2}) == 1);
    REQUIRE(cs.lifts.at({0, 2}) == 33);

    Ring T = preset_triangular(2, 2);
    ChainSpec c2 = chain22(T);
    REQUIRE(c2.lifts.at({0, 1}) == 4);
    REQUIRE(c2.lifts.at({0, 2}) == 4);
    REQUIRE(c2.lifts.at({1, 2}) == 0);

    Ideal P1 = make_ideal(T, {1}, Side::TwoSided);
    REQUIRE(default_left_generators(T, P1) == std::vector<Elem>{1, 2});
    REQUIRE(find_central_lift(T, unit_ideal(T, Side::TwoSided), P1) == Elem{4});
    REQUIRE(find_central_lift(T, P1, P1) == Elem{0});
}

TEST_CASE("basic trees carry splitting certificates") {
    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    TreeBuild tb = build_basic_tree(cs, 4);
    REQUIRE(tb.telescope.sizes == std::vector<int>{1, 4, 12, 36, 108});
    REQUIRE(tb.rep.levels == std::vector<int>{1, 4, 12, 36, 108});
    REQUIRE(tb.rep.vertex_count() == 161);
    REQUIRE(tb.rep.edges.size() == 160);
    REQUIRE(tb.telescope.X[0] == mat_col({32, 1, 8, 16}));
    std::vector<int> lvl1(tb.rep.vclass.begin() + 1, tb.rep.vclass.begin() + 5);
    REQUIRE(lvl1 == std::vector<int>{0, 1, 1, 1});
    REQUIRE(tb.telescope.tail.kind == TailKind::TreeLevels);
    REQUIRE(tb.telescope.tail.start == 1);
    REQUIRE(tb.telescope.tail.tree->gen_class == 2);
    REQUIRE(verify_certificates(tb.telescope, 5).all_ok());
    REQUIRE(telescope_trace(tb.telescope, 5).trace.is_unit_ideal());

    Ring T = preset_triangular(2, 2);
    TreeBuild t2 = build_basic_tree(chain22(T), 3);
    REQUIRE(t2.telescope.sizes == std::vector<int>{1, 3, 9, 27});
    REQUIRE(verify_certificates(t2.telescope, 4).all_ok());

    TreeBuild ct = build_basic_tree(constant22(T), 3);
    REQUIRE(ct.telescope.sizes == std::vector<int>{1, 2, 4, 8});
    for (const Mat& M : ct.telescope.X)
        for (int i = 0; i < M.rows; ++i)
            for (int j = 0; j < M.cols; ++j)
                if (M.at(i, j) != T.zero()) REQUIRE(M.at(i, j) == 5);
    REQUIRE(verify_certificates(ct.telescope, 5).all_ok());

    TreeBuild shallow = build_basic_tree(chain22(T), 0);
    REQUIRE(shallow.telescope.sizes == std::vector<int>{1});
    REQUIRE(shallow.telescope.tail.kind == TailKind::None);
}

TEST_CASE("sequence trees install lift multiplicities") {
    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    Telescope basic = build_basic_tree(cs, 3).telescope;
    Telescope ones = build_sequence_tree(cs, {1, 1, 1}, 3);
    REQUIRE(ones.sizes == basic.sizes);
    for (std::size_t i = 0; i < ones.X.size(); ++i) REQUIRE(ones.X[i] == basic.X[i]);

    Telescope seq = build_sequence_tree(cs, {2, 1, 2, 1}, 4);
    REQUIRE(seq.sizes[1] == 5);
    REQUIRE(verify_certificates(seq, 3).all_ok());

    REQUIRE_THROWS_AS(build_sequence_tree(cs, {1, 1}, 3), PreconditionError);
}

TEST_CASE("splitting certificates factor chain columns") {
    Ring R = preset_triangular(3, 2);
    Ideal top = unit_ideal(R, Side::TwoSided);
    Ideal I1 = make_ideal(R, {1, 8, 16}, Side::TwoSided);
    Ideal I2 = make_ideal(R, {8, 16}, Side::TwoSided);

    auto plain = solve_idempotent_certificate(R, top, I1, I2, 32, 33, 1,
                                              {1, 8, 16}, {8, 16});
    REQUIRE(mat_mul(R, plain.cert, mat_mul(R, plain.stage, plain.column)) ==
            plain.column);

    auto shaped = solve_idempotent_certificate(R, top, I1, I2, 32, 33, 1,
                                               {1, 8, 16}, {8, 16},
                                               CertShape{2, 1});
    REQUIRE(shaped.column.rows == 5);
    REQUIRE(mat_mul(R, shaped.cert, mat_mul(R, shaped.stage, shaped.column)) ==
            shaped.column);

    auto flat = solve_idempotent_certificate(R, top, top, top, 41, 41, 41,
                                             {41}, {41});
    REQUIRE(mat_mul(R, flat.cert, mat_mul(R, flat.stage, flat.column)) ==
            flat.column);

    REQUIRE_THROWS_AS(solve_idempotent_certificate(R, top, I1, I2, 2, 33, 1,
                                                   {1, 8, 16}, {8, 16}),
                      PreconditionError);
    REQUIRE_THROWS_AS(solve_idempotent_certificate(R, top, I1, I2, 32, 33, 1,
                                                   {1}, {8, 16}),
                      PreconditionError);
}

TEST_CASE("multiplicity vectors follow the census recurrence") {
    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    REQUIRE(multiplicity_vector(cs, {}, 2) == std::vector<long long>{1, 3, 8});
    REQUIRE(multiplicity_vector(cs, {}, 0) == std::vector<long long>{1});
    REQUIRE(multiplicity_vector(cs, {2, 1, 2}, 2) == std::vector<long long>{2, 3, 20});
    REQUIRE(multiplicity_vector(cs, {2}, 0) == std::vector<long long>{2});

    // distinct lift sequences give distinct vectors
    std::set<std::vector<long long>> seen;
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int c = 1; c <= 2; ++c) {
                auto v = multiplicity_vector(cs, {a, b, c}, 2);
                REQUIRE(v == std::vector<long long>{a, 3 * b, 2 * c * (a + 3)});
                seen.insert(v);
            }
    REQUIRE(seen.size() == 8);

    REQUIRE_THROWS_AS(multiplicity_vector(cs, {}, 3), PreconditionError);
    REQUIRE_THROWS_AS(multiplicity_vector(cs, {2}, 2), InputError);
    REQUIRE_THROWS_AS(multiplicity_vector(cs, {0, 1, 1}, 2), InputError);

    Ring T = preset_triangular(2, 2);
    ChainSpec ex;
    ex.ring = &T;
    Ideal P1 = make_ideal(T, {1}, Side::TwoSided);
    ex.ideals = {unit_ideal(T, Side::TwoSided), P1, P1};
    ex.gens = {{5}, {1, 2}, {1, 2, 3}};
    ex.constant_tail = true;
    ex = complete_lifts(ex);
    REQUIRE(validate_chain_spec(ex).all_ok());
    REQUIRE(multiplicity_vector(ex, {}, 2) == std::vector<long long>{1, 2, 9});
}

TEST_CASE("window column counts recover multiplicities") {
    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    REQUIRE(verify_multiplicities(cs, {}, 0, 3));
    REQUIRE(verify_multiplicities(cs, {}, 1, 4));
    REQUIRE(verify_multiplicities(cs, {}, 2, 5));
    REQUIRE(verify_multiplicities(cs, {2, 1, 2}, 2, 5));

    REQUIRE_FALSE(multiplicities_match(cs, {}, 2, 5, {1, 2, 8}));
    REQUIRE_FALSE(multiplicities_match(cs, {}, 2, 5, {2, 3, 8}));
    // the last entry scales I2/I3 = 0 when the tail repeats I2, so no value
    // of it can be refuted in this quotient
    REQUIRE(multiplicities_match(cs, {}, 2, 5, {1, 3, 9}));
    REQUIRE_THROWS_AS(multiplicities_match(cs, {}, 2, 3, {1, 3, 8}), PreconditionError);
    REQUIRE_THROWS_AS(multiplicities_match(cs, {}, 1, 4, {1}), InputError);
}

TEST_CASE("every weakly descending candidate triple verifies its census") {
    Ring T = preset_triangular(2, 2);
    auto cands = chain_ideal_candidates(T);
    REQUIRE(cands.size() == 3);
    int count = 0;
    for (const Ideal& a : cands)
        for (const Ideal& b : cands)
            for (const Ideal& c : cands) {
                if (!ideal_subset(b, a) || !ideal_subset(c, b)) continue;
                ++count;
                ChainSpec w = make_chain(T, {a, b, c});
                REQUIRE(validate_chain_spec(w).all_ok());
                REQUIRE(verify_multiplicities(w, {}, 2, 5));
            }
    REQUIRE(count == 7);
}

TEST_CASE("windowed right ideals certify their descent") {
    Ring T = preset_triangular(2, 2);
    Ideal P1 = make_ideal(T, {1}, Side::TwoSided);
    Telescope wh = whitehead_build(T, P1, {1, 2});
    auto pre = idempotent_prefix(wh, 6);
    auto steps = descending_ideals(T, pre, 20);
    REQUIRE(steps.size() == 21);
    for (const auto& st : steps) {
        REQUIRE(ideal_equal(st.closure, P1));
        REQUIRE(st.certified_at >= 0);
    }

    Telescope id = telescope_constant(T, mat_identity(T, 1), mat_identity(T, 1));
    auto pid = idempotent_prefix(id, 6);
    auto dsteps = descending_ideals(T, pid, 4);
    REQUIRE(dsteps[0].closure.is_unit_ideal());
    for (int k = 1; k <= 4; ++k) REQUIRE(dsteps[k].closure.is_zero());
    REQUIRE_THROWS_AS(descending_ideals(T, pid, 6), UndeterminedError);

    Telescope zt = telescope_constant(T, mat_zero(T, 1, 1), mat_zero(T, 1, 1));
    auto pz = idempotent_prefix(zt, 6);
    auto zsteps = descending_ideals(T, pz, 4);
    for (const auto& st : zsteps) REQUIRE(st.closure.is_zero());

    auto bad = pre;
    bad.window.at(0, 0) = T.add(bad.window.at(0, 0), 1);
    REQUIRE_THROWS_AS(descending_ideals(T, bad, 2), PreconditionError);
}

TEST_CASE("stable window closures bound finite generation") {
    Ring T = preset_triangular(2, 2);
    Ideal P1 = make_ideal(T, {1}, Side::TwoSided);
    Telescope wh = whitehead_build(T, P1, {1, 2});
    auto fs = fair_size_analyze(wh, 6);
    REQUIRE(ideal_equal(fs.minimal, P1));
    REQUIRE(fs.exact);
    REQUIRE(fs.stabilized_at == 0);
    REQUIRE(fs.census.size() == 5);
    for (const auto& entry : fs.census) {
        const bool fg = entry.second == FgStatus::FinitelyGenerated;
        REQUIRE(fg == ideal_subset(fs.minimal, entry.first));
    }
    REQUIRE(fs.note.find("unsatisfiable") != std::string::npos);

    Telescope id = telescope_constant(T, mat_identity(T, 1), mat_identity(T, 1));
    auto fid = fair_size_analyze(id, 6);
    REQUIRE(fid.minimal.is_zero());
    REQUIRE(fid.exact);
    REQUIRE(fid.stabilized_at == 1);

    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    Telescope tree = build_basic_tree(cs, 5).telescope;
    auto ft = fair_size_analyze(tree, 5);
    Ideal I2 = make_ideal(R, {8, 16}, Side::TwoSided);
    REQUIRE(ideal_equal(ft.minimal, I2));
    REQUIRE(ft.exact);
    REQUIRE(ft.census.size() == 14);
    int fg_count = 0;
    for (const auto& entry : ft.census)
        if (entry.second == FgStatus::FinitelyGenerated) ++fg_count;
    REQUIRE(fg_count == 4);

    REQUIRE_THROWS_AS(fair_size_analyze(wh, 1), InputError);
}

TEST_CASE("membership closure across products intersections and powers") {
    Ring T = preset_triangular(2, 2);
    Ideal P1 = make_ideal(T, {1}, Side::TwoSided);
    Telescope wh = whitehead_build(T, P1, {1, 2});
    std::vector<Ideal> ideals = {zero_ideal(T, Side::TwoSided),
                                 make_ideal(T, {2}, Side::TwoSided),
                                 P1,
                                 make_ideal(T, {4}, Side::TwoSided),
                                 unit_ideal(T, Side::TwoSided)};
    auto rep = ipop_closure_check(wh, {}, ideals, 6);
    REQUIRE(rep.membership.size() == 5);
    std::vector<bool> mem;
    for (const auto& pm : rep.membership) mem.push_back(pm.member);
    REQUIRE(mem == std::vector<bool>{false, false, true, false, true});
    REQUIRE(rep.products_closed);
    REQUIRE(rep.intersections_closed);
    REQUIRE(rep.omega_closed);
    REQUIRE(rep.omega.size() == 2);
    for (const auto& pl : rep.omega) {
        REQUIRE(pl.fg_member);
        REQUIRE(ideal_equal(pl.limit, pl.ideal));  // both survivors are idempotent
    }

    auto rep2 = ipop_closure_check(wh, {0}, {P1}, 6);
    REQUIRE(rep2.membership[0].member);

    REQUIRE_THROWS_AS(ipop_closure_check(wh, {1}, {P1}, 6), InputError);
    REQUIRE_THROWS_AS(ipop_closure_check(wh, {}, {make_ideal(T, {1}, Side::Left)}, 6),
                      InputError);
}

TEST_CASE("provenance split separates class spines") {
    Ring R = preset_triangular(3, 2);
    ChainSpec cs = chain32(R);
    TreeBuild tb = build_basic_tree(cs, 4);
    auto parts = provenance_split(tb, 2);
    REQUIRE(parts.size() == 3);
    REQUIRE(parts[0].sizes[0] == 1);
    REQUIRE(parts[1].sizes[0] == 3);
    REQUIRE(parts[2].sizes[0] == 8);
    for (std::size_t t = 0; t < parts[0].sizes.size(); ++t) {
        int total = 0;
        for (const auto& p : parts) total += p.sizes[t];
        REQUIRE(total == tb.telescope.sizes[2 + t]);
    }
    for (const auto& p : parts) REQUIRE(verify_certificates(p, 3).all_ok());

    Ideal I1 = make_ideal(R, {1, 8, 16}, Side::TwoSided);
    Ideal I2 = make_ideal(R, {8, 16}, Side::TwoSided);
    REQUIRE(telescope_trace(parts[0], 4).trace.is_unit_ideal());
    REQUIRE(ideal_equal(telescope_trace(parts[1], 4).trace, I1));
    REQUIRE(ideal_equal(telescope_trace(parts[2], 4).trace, I2));
}

TEST_CASE("candidate lattices and strict chains") {
    Ring T = preset_triangular(2, 2);
    auto c2 = chain_ideal_candidates(T);
    REQUIRE(c2.size() == 3);
    for (const Ideal& I : c2) {
        REQUIRE(is_idempotent_ideal(I));
        REQUIRE(is_semisimple_quotient(T, I));
    }

    Ring R = preset_triangular(3, 2);
    auto c3 = chain_ideal_candidates(R);
    REQUIRE(c3.size() == 5);

    auto chains = strict_chains(R, 3);
    REQUIRE(chains.size() == 2);
    Ideal I1 = make_ideal(R, {1, 8, 16}, Side::TwoSided);
    Ideal I2 = make_ideal(R, {8, 16}, Side::TwoSided);
    bool found = false;
    for (const auto& ch : chains) {
        REQUIRE(ch.size() == 3);
        REQUIRE(ch[0].is_unit_ideal());
        REQUIRE(ideal_subset(ch[1], ch[0]));
        REQUIRE_FALSE(ideal_equal(ch[1], ch[0]));
        REQUIRE(ideal_subset(ch[2], ch[1]));
        REQUIRE_FALSE(ideal_equal(ch[2], ch[1]));
        ChainSpec w = make_chain(R, ch);
        REQUIRE(validate_chain_spec(w).all_ok());
        found = found || (ideal_equal(ch[1], I1) && ideal_equal(ch[2], I2));
    }
    REQUIRE(found);
}

TEST_CASE("chain data access clamps or refuses past the tail") {
    Ring T = preset_triangular(2, 2);
    ChainSpec fin = chain22(T);
    fin.constant_tail = false;
    REQUIRE_THROWS_AS(build_basic_tree(fin, 4), PreconditionError);
    TreeBuild ok = build_basic_tree(fin, 2);
    REQUIRE(ok.telescope.sizes.size() == 3);
    REQUIRE(ok.telescope.tail.kind == TailKind::None);

    ChainSpec raw;
    raw.ring = &T;
    Ideal P1 = make_ideal(T, {1}, Side::TwoSided);
    raw.ideals = {unit_ideal(T, Side::TwoSided), P1};
    raw.gens = {{5}, {1, 2}};
    raw.constant_tail = true;
    REQUIRE_THROWS_AS(build_basic_tree(raw, 2), InputError);

    ChainSpec cs = chain22(T);
    REQUIRE(detail::chain_lift(cs, 0, 5) == 4);  // clamps to the last recorded column
    REQUIRE(detail::chain_lift(cs, 3, 5) == 0);  // repeated tail of equal ideals
    REQUIRE_THROWS_AS(detail::chain_lift(cs, 2, 2), InputError);
}