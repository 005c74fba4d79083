#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trideal/error.hpp"
#include "trideal/ideal.hpp"
#include "trideal/linalg.hpp"
#include "trideal/ring.hpp"

namespace trideal {

/// Outcome of deciding whether a two-sided ideal is the trace of a countably
/// generated projective right module.  YES carries the first witness in
/// census order: an idempotent left ideal J with JR = I.  NO means the whole
/// left-ideal census was scanned without finding one.
struct TraceDecision {
    bool is_trace = false;
    std::optional<Ideal> witness;
    int scanned = 0;
};

inline TraceDecision is_trace_ideal(const Ring& R, const Ideal& I,
                                    int size_cap = 64) {
    if (I.ring != &R) throw InputError("ideal belongs to a different ring");
    if (I.side != Side::TwoSided)
        throw PreconditionError("trace decision needs a two-sided ideal");
    TraceDecision d;
    const std::vector<Ideal> census = enumerate_ideals(R, Side::Left, size_cap);
    d.scanned = static_cast<int>(census.size());
    for (const Ideal& J : census) {
        if (!is_idempotent_ideal(J)) continue;
        Ideal JR = make_ideal(R, J.gens, Side::TwoSided);
        if (JR.elems == I.elems) {
            d.is_trace = true;
            d.witness = J;
            return d;
        }
    }
    return d;
}

/// All trace ideals of R, in census order of the two-sided ideal lattice.
inline std::vector<Ideal> trace_ideals(const Ring& R, int size_cap = 64) {
    std::vector<Ideal> out;
    for (const Ideal& I : enumerate_ideals(R, Side::TwoSided, size_cap))
        if (is_trace_ideal(R, I, size_cap).is_trace) out.push_back(I);
    return out;
}

/// An ascending chain J_1 <= J_2 <= ... of finitely generated left ideals
/// with J_{n+1} J_n = J_n for consecutive links.  `trace` is the two-sided
/// ideal generated by the last link, the union of the J_n R over the chain.
struct ChainCert {
    std::vector<Ideal> links;
    Ideal trace;
};

inline ChainCert verify_chain(const Ring& R, const std::vector<Ideal>& links) {
    if (links.empty()) throw PreconditionError("chain has no links");
    for (size_t n = 0; n < links.size(); ++n) {
        if (links[n].ring != &R)
            throw InputError("chain link belongs to a different ring");
        if (links[n].side != Side::Left)
            throw PreconditionError("chain links must be left ideals");
    }
    for (size_t n = 0; n + 1 < links.size(); ++n) {
        if (!ideal_subset(links[n], links[n + 1]))
            throw PreconditionError("chain is not ascending at link " +
                                    std::to_string(n + 1));
        if (!ideal_equal(ideal_product(links[n + 1], links[n]), links[n]))
            throw PreconditionError("chain product condition fails at link " +
                                    std::to_string(n + 1));
    }
    ChainCert cert;
    cert.links = links;
    cert.trace = make_ideal(R, links.back().gens, Side::TwoSided);
    return cert;
}

/// Chain of left ideals read off a finite window of a column finite
/// idempotent matrix.  `links[m]` collects the entries of the first
/// `columns[m]` columns; consecutive links satisfy the chain product
/// condition, certified exactly on the window.
struct PrefixChain {
    std::vector<Ideal> links;
    std::vector<int> columns;
    Ideal trace;
};

/// `A` is the top-left window of an infinite column finite matrix;
/// `col_bounds[j]` asserts that column j vanishes from row col_bounds[j] on.
/// The window must witness idempotency for every column it fully contains.
/// Throws PreconditionError when the window contradicts idempotency or is too
/// small to certify even one chain link pair.
inline PrefixChain chain_from_idempotent_prefix(
    const Ring& R, const Mat& A, const std::vector<int>& col_bounds) {
    if (static_cast<int>(col_bounds.size()) != A.cols)
        throw InputError("one column bound per window column required");
    for (int j = 0; j < A.cols; ++j)
        if (col_bounds[j] < 0)
            throw InputError("column bounds must be nonnegative");

    // A column is usable when all its claimed nonzero rows are inside the
    // window; idempotency of usable columns is checkable when the bound also
    // fits the window's column count.
    for (int j = 0; j < A.cols; ++j) {
        const int cb = col_bounds[j];
        if (cb > A.rows) continue;
        for (int i = cb; i < A.rows; ++i)
            if (A.at(i, j) != R.zero())
                throw PreconditionError(
                    "window entry below the declared column bound is nonzero");
        if (cb > A.cols) continue;
        for (int i = 0; i < A.rows; ++i) {
            Elem s = R.zero();
            for (int l = 0; l < cb; ++l) s = R.add(s, R.mul(A.at(i, l), A.at(l, j)));
            if (s != A.at(i, j))
                throw PreconditionError("window is not idempotent at column " +
                                        std::to_string(j));
        }
    }

    auto link_ideal = [&](int ncols) {
        std::vector<Elem> gens;
        for (int j = 0; j < ncols; ++j)
            for (int i = 0; i < std::min(col_bounds[j], A.rows); ++i)
                gens.push_back(A.at(i, j));
        return make_ideal(R, std::move(gens), Side::Left);
    };
    auto usable = [&](int ncols) {
        if (ncols > A.cols) return false;
        for (int j = 0; j < ncols; ++j)
            if (col_bounds[j] > A.rows) return false;
        return true;
    };

    PrefixChain chain;
    int n = 1;
    while (usable(n)) {
        chain.columns.push_back(n);
        chain.links.push_back(link_ideal(n));
        // The entries of the first n columns close within rows below their
        // bounds, so the link spanning those rows absorbs this one.
        int next = n + 1;
        for (int j = 0; j < n; ++j) next = std::max(next, col_bounds[j]);
        n = next;
    }
    if (chain.links.size() < 2)
        throw PreconditionError(
            "window too small to certify a chain link pair");
    for (size_t m = 0; m + 1 < chain.links.size(); ++m)
        if (!ideal_equal(ideal_product(chain.links[m + 1], chain.links[m]),
                         chain.links[m]))
            throw PreconditionError(
                "window chain fails the product condition at link " +
                std::to_string(m + 1));
    chain.trace = make_ideal(R, chain.links.back().gens, Side::TwoSided);
    return chain;
}

/// Result of rewriting a chain link pair with a finite multiplier set X.
/// The rewritten pair generates the same two-sided ideals and keeps the
/// product condition; X always contains the identity.
struct AddingResult {
    Ideal J1p;
    Ideal J2p;
    std::vector<Elem> X;
};

namespace detail {

inline void require_chain_pair(const Ring& R, const Ideal& J1, const Ideal& J2) {
    if (J1.ring != &R || J2.ring != &R)
        throw InputError("ideal belongs to a different ring");
    if (J1.side != Side::Left || J2.side != Side::Left)
        throw PreconditionError("chain rewriting needs left ideals");
    if (!ideal_subset(J1, J2))
        throw PreconditionError("first ideal must sit inside the second");
    if (!ideal_equal(ideal_product(J2, J1), J1))
        throw PreconditionError("pair does not satisfy the product condition");
}

inline Ideal right_translates(const Ring& R, const std::vector<Elem>& gens,
                              const std::vector<Elem>& X) {
    std::vector<Elem> g;
    for (Elem a : gens)
        for (Elem r : X) g.push_back(R.mul(a, r));
    return make_ideal(R, std::move(g), Side::Left);
}

}  // namespace detail

/// Rewrites the pair with a caller-chosen finite set X containing 1:
/// J'_i is generated by the right translates a*r.  The postconditions are
/// verified exactly; they are theorems, so failure is an internal error.
inline AddingResult adding_transform_with_set(const Ring& R, const Ideal& J1,
                                              const Ideal& J2,
                                              std::vector<Elem> X) {
    detail::require_chain_pair(R, J1, J2);
    std::sort(X.begin(), X.end());
    X.erase(std::unique(X.begin(), X.end()), X.end());
    if (X.empty() || X.front() < 0 || X.back() >= R.size())
        throw InputError("multiplier set out of range");
    if (std::find(X.begin(), X.end(), R.one()) == X.end())
        throw PreconditionError("multiplier set must contain the identity");

    AddingResult res;
    res.X = X;
    res.J1p = detail::right_translates(R, J1.gens, X);
    res.J2p = detail::right_translates(R, J2.gens, X);
    if (!ideal_subset(res.J1p, res.J2p) ||
        !ideal_equal(ideal_product(res.J2p, res.J1p), res.J1p) ||
        make_ideal(R, J1.gens, Side::TwoSided).elems !=
            make_ideal(R, res.J1p.gens, Side::TwoSided).elems ||
        make_ideal(R, J2.gens, Side::TwoSided).elems !=
            make_ideal(R, res.J2p.gens, Side::TwoSided).elems)
        throw AxiomViolation("rewritten pair lost a postcondition");
    return res;
}

/// Finds a finite multiplier set X with 1 such that the left ideal generated
/// by the translates of J2's generators already absorbs J1 on the left, while
/// generating the same two-sided ideal as J2.  X is extracted from the
/// decompositions of J1's generators over themselves with coefficients from
/// the two-sided closure of J2, tracking which right translates of J2's
/// generators each coefficient needs.  Falls back to X = R, which always
/// satisfies the postconditions; the result is verified exactly either way.
inline AddingResult adding_transform_find_set(const Ring& R, const Ideal& J1,
                                              const Ideal& J2) {
    detail::require_chain_pair(R, J1, J2);
    const Ideal J2R = make_ideal(R, J2.gens, Side::TwoSided);

    // Two-sided closure of J2's generators with provenance: prov[x] is a set
    // of right multipliers r such that x lies in sum_a R a r over a in
    // J2.gens, kept first-found under a FIFO closure.
    std::vector<std::vector<Elem>> prov(R.size());
    std::vector<char> seen(R.size(), 0);
    std::vector<Elem> queue;
    auto discover = [&](Elem x, std::vector<Elem> rs) {
        if (seen[x]) return;
        seen[x] = 1;
        std::sort(rs.begin(), rs.end());
        rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
        prov[x] = std::move(rs);
        queue.push_back(x);
    };
    discover(R.zero(), {R.one()});
    for (Elem a : J2.gens) discover(a, {R.one()});
    for (size_t head = 0; head < queue.size(); ++head) {
        const Elem x = queue[head];
        for (Elem r = 0; r < R.size(); ++r) {
            discover(R.mul(r, x), prov[x]);
            std::vector<Elem> shifted;
            for (Elem p : prov[x]) shifted.push_back(R.mul(p, r));
            discover(R.mul(x, r), std::move(shifted));
        }
        for (size_t prev = 0; prev <= head; ++prev) {
            const Elem y = queue[prev];
            std::vector<Elem> joint = prov[x];
            joint.insert(joint.end(), prov[y].begin(), prov[y].end());
            discover(R.add(x, y), std::move(joint));
        }
    }

    std::set<Elem> multipliers{R.one()};
    bool decomposed = true;
    for (Elem a : J1.gens) {
        auto dec = decompose_over(R, a, J1.gens, J2R.elems);
        if (!dec) {
            decomposed = false;
            break;
        }
        for (Elem y : *dec)
            for (Elem r : prov[y]) multipliers.insert(r);
    }

    auto build = [&](std::vector<Elem> X) {
        AddingResult res;
        res.X = std::move(X);
        res.J1p = J1;
        res.J2p = detail::right_translates(R, J2.gens, res.X);
        const bool ok =
            ideal_equal(ideal_product(res.J2p, J1), J1) &&
            J2R.elems == make_ideal(R, res.J2p.gens, Side::TwoSided).elems;
        return std::make_pair(ok, res);
    };

    if (decomposed) {
        auto [ok, res] =
            build(std::vector<Elem>(multipliers.begin(), multipliers.end()));
        if (ok) return res;
    }
    std::vector<Elem> all(R.size());
    for (Elem r = 0; r < R.size(); ++r) all[r] = r;
    auto [ok, res] = build(std::move(all));
    if (!ok) throw AxiomViolation("full multiplier set lost a postcondition");
    return res;
}

/// C with C * blockdiag_k(a) = B, entries drawn from `coeff_elems` (the whole
/// ring when null).  The block structure makes every entry of B its own
/// decomposition problem, solved by the complete layered scan, so nullopt is
/// a definitive no.  The product identity is re-checked exactly.
inline std::optional<Mat> solve_left_factor(
    const Ring& R, const Mat& B, const std::vector<Elem>& a,
    const std::vector<Elem>* coeff_elems = nullptr) {
    if (a.empty()) throw InputError("empty generator column");
    const int l = static_cast<int>(a.size());
    std::vector<Elem> coeffs;
    if (coeff_elems) {
        coeffs = *coeff_elems;
    } else {
        coeffs.resize(R.size());
        for (Elem v = 0; v < R.size(); ++v) coeffs[v] = v;
    }
    Mat C(B.rows, B.cols * l, R.zero());
    for (int r = 0; r < B.rows; ++r)
        for (int c = 0; c < B.cols; ++c) {
            auto dec = decompose_over(R, B.at(r, c), a, coeffs);
            if (!dec) return std::nullopt;
            for (int i = 0; i < l; ++i) C.at(r, c * l + i) = (*dec)[i];
        }
    const Mat block = block_diag(R, mat_col(a), B.cols);
    if (!(mat_mul(R, C, block) == B))
        throw AxiomViolation("left factor fails to reproduce the input");
    return C;
}

/// Cofactor-expansion determinant over a commutative ring.  No division, so
/// zero divisors are fine; intended for the small coefficient matrices of
/// the chain rewriting below.
inline Elem det_commutative(const Ring& R, const Mat& M) {
    if (!R.commutative())
        throw PreconditionError("determinant needs a commutative ring");
    if (M.rows != M.cols) throw InputError("determinant of a nonsquare matrix");
    if (M.rows == 0) return R.one();
    if (M.rows == 1) return M.at(0, 0);
    Elem det = R.zero();
    for (int j = 0; j < M.cols; ++j) {
        if (M.at(0, j) == R.zero()) continue;
        Mat minor(M.rows - 1, M.cols - 1, R.zero());
        for (int i = 1; i < M.rows; ++i)
            for (int c = 0, cc = 0; c < M.cols; ++c) {
                if (c == j) continue;
                minor.at(i - 1, cc++) = M.at(i, c);
            }
        const Elem term = R.mul(M.at(0, j), det_commutative(R, minor));
        det = (j % 2 == 0) ? R.add(det, term) : R.sub(det, term);
    }
    return det;
}

/// Element a in J2 with a*b = b for every b in J1, found by the determinant
/// trick: write each generator of J1 as a J2-combination of the generators,
/// then a = 1 - det(Id - A) for the coefficient matrix A.  Commutative rings
/// only; the defining property is verified exhaustively.
struct DeterminantCert {
    Elem a = 0;
    Mat coeff;
};

inline DeterminantCert determinant_unit(const Ring& R, const Ideal& J1,
                                        const Ideal& J2) {
    if (!R.commutative())
        throw PreconditionError("determinant trick needs a commutative ring");
    if (J1.ring != &R || J2.ring != &R)
        throw InputError("ideal belongs to a different ring");
    if (!ideal_equal(ideal_product(J2, J1), J1))
        throw PreconditionError("pair does not satisfy the product condition");

    const std::vector<Elem>& b = J1.gens;
    const int r = static_cast<int>(b.size());
    Mat A(r, r, R.zero());
    for (int i = 0; i < r; ++i) {
        auto dec = decompose_over(R, b[i], b, J2.elems);
        if (!dec)
            throw AxiomViolation("generator escaped its own combination");
        for (int j = 0; j < r; ++j) A.at(i, j) = (*dec)[j];
    }
    DeterminantCert cert;
    cert.coeff = A;
    cert.a = R.sub(R.one(), det_commutative(R, mat_sub(R, mat_identity(R, r), A)));
    if (!J2.contains(cert.a))
        throw AxiomViolation("determinant element left the target ideal");
    for (Elem x : J1.elems)
        if (R.mul(cert.a, x) != x)
            throw AxiomViolation("determinant element is not a local unit");
    return cert;
}

/// Constant-tail chain certificate for a trace ideal of a finite commutative
/// ring: a single idempotent e with (e) = I, so the chain (e), (e), ... has
/// the product property trivially.  NO carries the census exhaustion of the
/// trace decision.
struct PureChainResult {
    bool is_trace = false;
    Elem idempotent = 0;
    TraceDecision decision;
};

inline PureChainResult pure_chain(const Ring& R, const Ideal& I,
                                  int size_cap = 64) {
    if (!R.commutative())
        throw PreconditionError("constant chains need a commutative ring");
    PureChainResult res;
    res.decision = is_trace_ideal(R, I, size_cap);
    if (!res.decision.is_trace) return res;
    res.is_trace = true;
    res.idempotent = determinant_unit(R, I, I).a;
    const Elem e = res.idempotent;
    if (R.mul(e, e) != e ||
        make_ideal(R, {e}, Side::TwoSided).elems != I.elems)
        throw AxiomViolation("chain tail element is not an idempotent generator");
    return res;
}

}  // namespace trideal
