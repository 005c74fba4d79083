#pragma once
// Dimension vectors over the naturals extended with infinity, monoids of
// such vectors cut out by congruence constraints, their generating sets,
// and the dimension vector attached to a telescope limit.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trideal/tree.hpp"

namespace trideal {

/// Natural number extended with an absorbing infinity: inf + x = inf and
/// inf * n = inf for n > 0, while inf * 0 = 0 so multiplication stays
/// compatible with repeated addition.
struct ExtNat {
    long long value = 0;
    bool infinite = false;

    ExtNat() = default;
    ExtNat(long long v) : value(v) {
        if (v < 0) throw InputError("extended naturals are nonnegative");
    }
    static ExtNat inf() {
        ExtNat e;
        e.infinite = true;
        return e;
    }
    bool is_finite() const { return !infinite; }
    friend bool operator==(const ExtNat& a, const ExtNat& b) = default;
};

inline ExtNat operator+(ExtNat a, ExtNat b) {
    if (a.infinite || b.infinite) return ExtNat::inf();
    return ExtNat(a.value + b.value);
}

inline ExtNat operator*(ExtNat a, ExtNat b) {
    if (a.infinite || b.infinite) {
        if ((a.is_finite() && a.value == 0) || (b.is_finite() && b.value == 0))
            return ExtNat(0);
        return ExtNat::inf();
    }
    return ExtNat(a.value * b.value);
}

/// Finite values below infinity, finite values by magnitude.
inline bool operator<(ExtNat a, ExtNat b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
}

inline std::ostream& operator<<(std::ostream& os, ExtNat e) {
    if (e.infinite) return os << "inf";
    return os << e.value;
}

/// Coordinate vector of extended naturals.
using DimVector = std::vector<ExtNat>;

inline DimVector dim_add(const DimVector& a, const DimVector& b) {
    if (a.size() != b.size()) throw InputError("dimension vectors differ in length");
    DimVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

/// Lexicographic order with infinity above every finite value.
inline bool dim_less(const DimVector& a, const DimVector& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] == b[i]) continue;
        return a[i] < b[i];
    }
    return a.size() < b.size();
}

struct Supports {
    std::vector<int> supp;      ///< indices carrying a nonzero coordinate
    std::vector<int> inf_supp;  ///< indices carrying an infinite coordinate
};

inline Supports supports(const DimVector& x) {
    Supports s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] == ExtNat(0))) s.supp.push_back(static_cast<int>(i));
        if (x[i].infinite) s.inf_supp.push_back(static_cast<int>(i));
    }
    return s;
}

/// Congruence constraints on k-coordinate vectors: x is a member when every
/// row evaluates to infinity or to a finite multiple of its modulus.
struct CongruenceSystem {
    int k = 0;
    std::vector<std::vector<long long>> rows;
    std::vector<long long> moduli;
};

inline CongruenceSystem make_congruence_system(int k,
                                               std::vector<std::vector<long long>> rows,
                                               std::vector<long long> moduli) {
    if (k < 1) throw InputError("congruence systems need at least one coordinate");
    if (rows.size() != moduli.size())
        throw InputError("row and modulus counts differ");
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != k)
            throw InputError("row length does not match the coordinate count");
        for (long long c : row)
            if (c < 0) throw InputError("row coefficients are nonnegative");
    }
    for (long long m : moduli)
        if (m < 2) throw InputError("moduli must be at least 2");
    return CongruenceSystem{k, std::move(rows), std::move(moduli)};
}

inline long long modulus_lcm(const CongruenceSystem& cs) {
    long long L = 1;
    for (long long m : cs.moduli) L = std::lcm(L, m);
    return L;
}

inline bool is_member(const CongruenceSystem& cs, const DimVector& x) {
    if (static_cast<int>(x.size()) != cs.k)
        throw InputError("vector length does not match the system dimension");
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        ExtNat acc(0);
        for (int j = 0; j < cs.k; ++j) acc = acc + ExtNat(cs.rows[r][j]) * x[j];
        if (acc.is_finite() && acc.value % cs.moduli[r] != 0) return false;
    }
    return true;
}

namespace detail {

inline bool finite_member(const CongruenceSystem& cs, const std::vector<long long>& x) {
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        long long s = 0;
        for (int j = 0; j < cs.k; ++j) s += cs.rows[r][j] * x[j];
        if (s % cs.moduli[r] != 0) return false;
    }
    return true;
}

/// Members with every coordinate strictly below bound, in lexicographic
/// order.  The zero vector is always included.
inline std::vector<std::vector<long long>> box_members(const CongruenceSystem& cs,
                                                       long long bound, long long cap) {
    long long cells = 1;
    for (int i = 0; i < cs.k; ++i) {
        cells *= bound;
        if (cells > cap) throw SearchCapError("member enumeration box exceeds the cap");
    }
    std::vector<std::vector<long long>> out;
    std::vector<long long> cur(cs.k, 0);
    while (true) {
        if (finite_member(cs, cur)) out.push_back(cur);
        int i = cs.k - 1;
        while (i >= 0 && cur[i] == bound - 1) cur[i--] = 0;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

inline DimVector to_dim(const std::vector<long long>& v) {
    DimVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = ExtNat(v[i]);
    return out;
}

}  // namespace detail

/// Minimal generating set of the finite members.  Bound argument: with L the
/// lcm of the moduli, L*e_i is a member for every i because each row maps it
/// to a multiple of L.  A member with some coordinate at least 2L therefore
/// splits off L*e_i leaving a nonzero member, so irreducible members live in
/// the [0, 2L)^k box; induction on the coordinate sum then writes every
/// member as a sum of irreducibles found there.
inline std::vector<DimVector> finite_hilbert_basis(const CongruenceSystem& cs,
                                                   long long cap = 2000000) {
    const long long L = modulus_lcm(cs);
    auto box = detail::box_members(cs, 2 * L, cap / std::max(1, cs.k));
    std::set<std::vector<long long>> members(box.begin(), box.end());
    std::vector<DimVector> basis;
    for (const auto& x : box) {
        if (std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; })) continue;
        bool reducible = false;
        for (const auto& y : box) {
            if (y == x) continue;
            if (std::all_of(y.begin(), y.end(), [](long long v) { return v == 0; })) continue;
            bool fits = true;
            std::vector<long long> rest(cs.k);
            for (int j = 0; j < cs.k; ++j) {
                rest[j] = x[j] - y[j];
                if (rest[j] < 0) { fits = false; break; }
            }
            if (fits && members.count(rest)) { reducible = true; break; }
        }
        if (!reducible) basis.push_back(detail::to_dim(x));
    }
    return basis;
}

namespace detail {

/// True when some finite member agrees with target on the listed
/// coordinates.  Other coordinates are free: subtracting L*e_i keeps both
/// membership and the projection, so the 2L box is exhaustive.
inline bool projection_realizable(const CongruenceSystem& cs,
                                  const std::vector<std::vector<long long>>& box,
                                  const std::vector<int>& coords,
                                  const std::vector<long long>& target) {
    for (const auto& f : box) {
        bool ok = true;
        for (std::size_t a = 0; a < coords.size(); ++a)
            if (f[coords[a]] != target[a]) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

}  // namespace detail

/// Minimal generators among members whose infinite support is exactly X
/// (0-based coordinate indices).  Rows meeting X are satisfied outright by
/// the infinite coordinates; the remaining rows constrain the complement,
/// and a generator is pruned when it is another one plus a finite member.
inline std::vector<DimVector> support_generators(const CongruenceSystem& cs,
                                                 std::vector<int> X,
                                                 long long cap = 2000000) {
    if (X.empty()) throw InputError("infinite support pattern is empty");
    std::sort(X.begin(), X.end());
    X.erase(std::unique(X.begin(), X.end()), X.end());
    for (int i : X)
        if (i < 0 || i >= cs.k) throw InputError("support index out of range");
    std::vector<bool> in_x(cs.k, false);
    for (int i : X) in_x[i] = true;
    std::vector<int> comp;
    for (int j = 0; j < cs.k; ++j)
        if (!in_x[j]) comp.push_back(j);

    CongruenceSystem red;
    red.k = static_cast<int>(comp.size());
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        bool vacuous = false;
        for (int i : X)
            if (cs.rows[r][i] > 0) { vacuous = true; break; }
        if (vacuous) continue;
        std::vector<long long> row;
        for (int j : comp) row.push_back(cs.rows[r][j]);
        red.rows.push_back(std::move(row));
        red.moduli.push_back(cs.moduli[r]);
    }

    std::vector<std::vector<long long>> tails{std::vector<long long>(red.k, 0)};
    if (red.k > 0)
        for (const DimVector& b : finite_hilbert_basis(red, cap)) {
            std::vector<long long> t(red.k);
            for (int j = 0; j < red.k; ++j) t[j] = b[j].value;
            tails.push_back(std::move(t));
        }

    auto box = detail::box_members(cs, 2 * modulus_lcm(cs), cap);
    std::vector<std::vector<long long>> kept = tails;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t g = 0; g < kept.size(); ++g) {
            for (std::size_t c = 0; c < kept.size(); ++c) {
                if (c == g) continue;
                std::vector<long long> gap(red.k);
                bool fits = true;
                for (int j = 0; j < red.k; ++j) {
                    gap[j] = kept[g][j] - kept[c][j];
                    if (gap[j] < 0) { fits = false; break; }
                }
                if (!fits) continue;
                if (detail::projection_realizable(cs, box, comp, gap)) {
                    kept.erase(kept.begin() + static_cast<long>(g));
                    changed = true;
                    break;
                }
            }
            if (changed) break;
        }
    }

    std::vector<DimVector> out;
    for (const auto& t : kept) {
        DimVector v(cs.k);
        for (int i : X) v[i] = ExtNat::inf();
        for (int j = 0; j < red.k; ++j) v[comp[j]] = ExtNat(t[j]);
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), dim_less);
    return out;
}

namespace detail {

/// Bounded multiset decomposition of target over the listed vectors, memoized
/// on the remaining gap.  Returns the chosen indices or nothing.
inline std::optional<std::vector<int>> bounded_decompose(
    const std::vector<std::vector<long long>>& gens,
    const std::vector<long long>& target, long long cap) {
    std::map<std::vector<long long>, int> memo;  // gen index, -1 dead, -2 zero
    std::function<bool(const std::vector<long long>&)> solve =
        [&](const std::vector<long long>& t) -> bool {
        if (std::all_of(t.begin(), t.end(), [](long long v) { return v == 0; })) return true;
        auto it = memo.find(t);
        if (it != memo.end()) return it->second >= 0;
        if (static_cast<long long>(memo.size()) > cap)
            throw SearchCapError("decomposition search exceeds the cap");
        memo[t] = -1;
        for (std::size_t g = 0; g < gens.size(); ++g) {
            std::vector<long long> rest(t.size());
            bool fits = false;
            for (std::size_t j = 0; j < t.size(); ++j) {
                rest[j] = t[j] - gens[g][j];
                if (rest[j] < 0) { fits = false; break; }
                fits = true;
            }
            if (!fits && !t.empty()) continue;
            if (solve(rest)) {
                memo[t] = static_cast<int>(g);
                return true;
            }
        }
        return false;
    };
    if (!solve(target)) return std::nullopt;
    std::vector<int> picks;
    std::vector<long long> t = target;
    while (!std::all_of(t.begin(), t.end(), [](long long v) { return v == 0; })) {
        int g = memo.at(t);
        picks.push_back(g);
        for (std::size_t j = 0; j < t.size(); ++j) t[j] -= gens[g][j];
    }
    return picks;
}

}  // namespace detail

/// Irreducible generating set of the whole monoid: the finite basis together
/// with the support generators of every nonempty infinite-support pattern,
/// pruned of elements that are sums of the others.  Every pattern occurs:
/// infinity satisfies any row it meets and zero satisfies the rest.
inline std::vector<DimVector> monoid_generators(const CongruenceSystem& cs,
                                                long long cap = 2000000) {
    std::vector<DimVector> fin = finite_hilbert_basis(cs, cap);
    const long long L = modulus_lcm(cs);
    auto box = detail::box_members(cs, 2 * L, cap);

    std::vector<DimVector> infs;
    if (cs.k > 20) throw SearchCapError("too many coordinates for support patterns");
    for (long long mask = 1; mask < (1LL << cs.k); ++mask) {
        std::vector<int> X;
        for (int i = 0; i < cs.k; ++i)
            if (mask & (1LL << i)) X.push_back(i);
        for (DimVector& g : support_generators(cs, X, cap)) infs.push_back(std::move(g));
    }

    // cross-pattern pruning: g goes when other kept generators cover its
    // infinite support and a finite member fills the remaining finite gap
    if (infs.size() > 20) throw SearchCapError("too many support generators to reduce");
    std::vector<bool> dead(infs.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t g = 0; g < infs.size(); ++g) {
            if (dead[g]) continue;
            Supports sg = supports(infs[g]);
            std::vector<std::size_t> others;
            for (std::size_t c = 0; c < infs.size(); ++c) {
                if (c == g || dead[c]) continue;
                Supports sc = supports(infs[c]);
                if (std::includes(sg.inf_supp.begin(), sg.inf_supp.end(),
                                  sc.inf_supp.begin(), sc.inf_supp.end()))
                    others.push_back(c);
            }
            std::vector<int> comp;
            std::vector<bool> in_x(cs.k, false);
            for (int i : sg.inf_supp) in_x[i] = true;
            for (int j = 0; j < cs.k; ++j)
                if (!in_x[j]) comp.push_back(j);
            for (long long smask = 1; smask < (1LL << others.size()) && !changed; ++smask) {
                std::set<int> cover;
                std::vector<long long> gap;
                for (int j : comp) gap.push_back(infs[g][j].value);
                bool fits = true;
                for (std::size_t b = 0; b < others.size() && fits; ++b) {
                    if (!(smask & (1LL << b))) continue;
                    const DimVector& c = infs[others[b]];
                    for (int i : supports(c).inf_supp) cover.insert(i);
                    for (std::size_t a = 0; a < comp.size(); ++a) {
                        if (c[comp[a]].infinite || (gap[a] -= c[comp[a]].value) < 0) {
                            fits = false;
                            break;
                        }
                    }
                }
                if (!fits) continue;
                if (static_cast<int>(cover.size()) != static_cast<int>(sg.inf_supp.size()))
                    continue;
                if (detail::projection_realizable(cs, box, comp, gap)) {
                    dead[g] = true;
                    changed = true;
                }
            }
        }
    }

    std::vector<DimVector> out = fin;
    for (std::size_t g = 0; g < infs.size(); ++g)
        if (!dead[g]) out.push_back(infs[g]);
    std::sort(out.begin(), out.end(), dim_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());

    // generation self-check: every finite member within 3L decomposes over
    // the finite basis
    std::vector<std::vector<long long>> raw;
    for (const DimVector& b : fin) {
        std::vector<long long> v(cs.k);
        for (int j = 0; j < cs.k; ++j) v[j] = b[j].value;
        raw.push_back(std::move(v));
    }
    for (const auto& m : detail::box_members(cs, 3 * L + 1, cap))
        if (!detail::bounded_decompose(raw, m, cap))
            throw AxiomViolation("finite basis fails to generate a bounded member");
    return out;
}

/// Least positive multiple of each unit vector lying in the monoid, searched
/// up to the modulus lcm.  L*e_i is always a member, so the bound is sharp.
struct SemiPerfectReport {
    bool ok = false;
    std::vector<long long> witnesses;
};

inline SemiPerfectReport semiperfect_witnesses(const CongruenceSystem& cs) {
    const long long L = modulus_lcm(cs);
    SemiPerfectReport rep;
    rep.ok = true;
    for (int i = 0; i < cs.k; ++i) {
        long long found = -1;
        std::vector<long long> x(cs.k, 0);
        for (long long m = 1; m <= L && found < 0; ++m) {
            x[i] = m;
            if (detail::finite_member(cs, x)) found = m;
        }
        if (found < 0) rep.ok = false;
        rep.witnesses.push_back(found);
    }
    return rep;
}

/// Decomposition of a member as a multiset of the generating set; the parts
/// sum to x exactly.  Finite coordinates are matched by bounded enumeration;
/// each infinite coordinate is absorbed by a support generator.
inline std::vector<DimVector> express(const CongruenceSystem& cs, const DimVector& x,
                                      long long cap = 2000000) {
    if (!is_member(cs, x)) throw PreconditionError("vector is not a member of the monoid");
    std::vector<DimVector> gens = monoid_generators(cs, cap);
    Supports sx = supports(x);
    std::vector<int> comp;
    std::vector<bool> in_x(cs.k, false);
    for (int i : sx.inf_supp) in_x[i] = true;
    for (int j = 0; j < cs.k; ++j)
        if (!in_x[j]) comp.push_back(j);

    std::vector<DimVector> fin, inf;
    for (const DimVector& g : gens) {
        Supports sg = supports(g);
        if (sg.inf_supp.empty()) fin.push_back(g);
        else if (std::includes(sx.inf_supp.begin(), sx.inf_supp.end(),
                               sg.inf_supp.begin(), sg.inf_supp.end()))
            inf.push_back(g);
    }
    // finite generator shadows on the free coordinates; zero shadows add
    // nothing visible
    std::vector<std::vector<long long>> shadows;
    std::vector<int> shadow_of;
    for (std::size_t g = 0; g < fin.size(); ++g) {
        std::vector<long long> s;
        for (int j : comp) s.push_back(fin[g][j].value);
        if (std::all_of(s.begin(), s.end(), [](long long v) { return v == 0; })) continue;
        shadows.push_back(std::move(s));
        shadow_of.push_back(static_cast<int>(g));
    }

    std::vector<long long> target;
    for (int j : comp) target.push_back(x[j].value);

    if (inf.size() > 20) throw SearchCapError("too many support generators to combine");
    for (long long smask = 0; smask < (1LL << inf.size()); ++smask) {
        if (sx.inf_supp.empty() && smask > 0) break;
        std::set<int> cover;
        std::vector<long long> gap = target;
        bool fits = true;
        std::vector<DimVector> picked;
        for (std::size_t b = 0; b < inf.size() && fits; ++b) {
            if (!(smask & (1LL << b))) continue;
            picked.push_back(inf[b]);
            for (int i : supports(inf[b]).inf_supp) cover.insert(i);
            for (std::size_t a = 0; a < comp.size(); ++a)
                if ((gap[a] -= inf[b][comp[a]].value) < 0) { fits = false; break; }
        }
        if (!fits) continue;
        if (static_cast<int>(cover.size()) != static_cast<int>(sx.inf_supp.size())) continue;
        auto picks = detail::bounded_decompose(shadows, gap, cap);
        if (!picks) continue;
        for (int p : *picks) picked.push_back(fin[shadow_of[p]]);
        DimVector total(cs.k, ExtNat(0));
        for (const DimVector& p : picked) total = dim_add(total, p);
        for (int j : comp)
            if (!(total[j] == x[j]))
                throw AxiomViolation("decomposition does not resum to the input");
        for (int i : sx.inf_supp)
            if (!total[i].infinite)
                throw AxiomViolation("decomposition does not resum to the input");
        std::sort(picked.begin(), picked.end(), dim_less);
        return picked;
    }
    throw SearchCapError("no decomposition found within the bounded search");
}

/// Dimension vector of the telescope limit: one coordinate per simple block
/// of the ring modulo its radical, counting the block multiplicity in the
/// limit; infinite when fresh copies keep arriving at every stage.  Blocks
/// are ordered by their primitive central idempotent in the quotient ring.
inline DimVector dim_vector_of_telescope(const Ring& R, const Telescope& T,
                                         int depth = 6) {
    if (T.ring != &R) throw InputError("telescope is defined over a different ring");
    if (depth < 2) throw InputError("depth must be at least 2");
    if (!verify_certificates(T, depth - 1).all_ok())
        throw PreconditionError("telescope certificates fail");

    Ideal J = jacobson_radical(R);
    Telescope W;
    std::shared_ptr<Quotient> hold;
    if (J.is_zero()) {
        W = materialized(T, depth + 1);
    } else {
        TensorResult tq = tensor_quotient(T, J, depth);
        hold = tq.quotient;
        W = std::move(tq.reduced);
    }
    const Ring& S = *W.ring;
    std::vector<Elem> prims = primitive_central_idempotents(S);
    std::vector<long long> ssize;
    for (Elem e : prims) ssize.push_back(detail::simple_size(S, e));

    // per-block multiplicity of the image of stage b deep in the chain
    auto stage_counts = [&](int b) {
        std::vector<long long> prev;
        Mat Wm = mat_identity(S, W.sizes[b]);
        for (int t = b + 1; t < W.stages(); ++t) {
            Wm = mat_mul(S, W.X[t - 1], Wm);
            auto cur = detail::column_block_counts(S, Wm, prims, ssize);
            if (!prev.empty() && cur == prev) return cur;
            prev = std::move(cur);
        }
        throw UndeterminedError("image multiplicities did not stabilize in depth");
    };
    std::vector<std::vector<long long>> F;
    for (int b = 0; b + 2 < W.stages(); ++b) F.push_back(stage_counts(b));
    if (F.size() < 2)
        throw UndeterminedError("not enough stages to read off multiplicities");

    FgResult fg = fg_decide(W, depth);
    if (fg.status == FgStatus::Undetermined)
        throw UndeterminedError("finite generation of the reduced limit is open");

    DimVector out(prims.size());
    const std::size_t last = F.size() - 1;
    for (std::size_t t = 0; t < prims.size(); ++t) {
        bool strict = true;
        for (std::size_t b = 0; b + 1 < F.size(); ++b)
            if (F[b + 1][t] <= F[b][t]) { strict = false; break; }
        if (F[last][t] == F[last - 1][t]) {
            out[t] = ExtNat(F[last][t]);
        } else if (fg.status == FgStatus::NotFinitelyGenerated && strict) {
            out[t] = ExtNat::inf();
        } else {
            throw UndeterminedError("block multiplicity neither stabilizes nor grows");
        }
    }
    return out;
}

}  // namespace trideal
