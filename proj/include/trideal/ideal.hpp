#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "trideal/ring.hpp"

namespace trideal {

enum class Side { Left, Right, TwoSided };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        default: return "two-sided";
    }
}

inline Side side_from_name(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    if (s == "two-sided" || s == "two_sided" || s == "twosided") return Side::TwoSided;
    throw InputError("unknown ideal side '" + s + "'");
}

/// Additive-and-multiplicative closure of a seed set.  Every element is
/// processed once: when x enters, all required products with ring elements
/// and all sums with previously entered elements are pushed.  Sums of sums
/// are covered inductively, and negatives arise as iterated sums (finite
/// additive order).
inline std::vector<Elem> close_elems(const Ring& R, const std::vector<Elem>& seed, Side side) {
    const int n = R.size();
    std::vector<char> in(n, 0);
    std::vector<Elem> all;
    auto push = [&](Elem x) {
        if (!in[x]) {
            in[x] = 1;
            all.push_back(x);
        }
    };
    push(R.zero());
    for (Elem g : seed) {
        if (g < 0 || g >= n) throw InputError("generator index out of range");
        push(g);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        const Elem x = all[i];
        if (side == Side::Left || side == Side::TwoSided)
            for (Elem r = 0; r < n; ++r) push(R.mul(r, x));
        if (side == Side::Right || side == Side::TwoSided)
            for (Elem r = 0; r < n; ++r) push(R.mul(x, r));
        for (std::size_t j = 0; j <= i; ++j) push(R.add(x, all[j]));
    }
    std::sort(all.begin(), all.end());
    return all;
}

/// A one-sided or two-sided ideal of a tabulated ring, stored extensionally.
/// `elems` is sorted and always contains zero; `member` is an O(1) lookup.
struct Ideal {
    const Ring* ring = nullptr;
    Side side = Side::Left;
    std::vector<Elem> gens;
    std::vector<Elem> elems;
    std::vector<char> member;

    bool contains(Elem x) const { return member[x]; }
    int count() const { return static_cast<int>(elems.size()); }
    bool is_zero() const { return elems.size() == 1; }
    bool is_unit_ideal() const { return count() == ring->size(); }
};

inline Ideal make_ideal(const Ring& R, std::vector<Elem> gens, Side side) {
    Ideal I;
    I.ring = &R;
    I.side = side;
    I.elems = close_elems(R, gens, side);
    I.gens = std::move(gens);
    I.member.assign(R.size(), 0);
    for (Elem x : I.elems) I.member[x] = 1;
    return I;
}

inline Ideal zero_ideal(const Ring& R, Side side) { return make_ideal(R, {}, side); }
inline Ideal unit_ideal(const Ring& R, Side side) { return make_ideal(R, {R.one()}, side); }

inline bool ideal_equal(const Ideal& A, const Ideal& B) {
    return A.ring == B.ring && A.elems == B.elems;
}

inline bool ideal_subset(const Ideal& A, const Ideal& B) {
    for (Elem x : A.elems)
        if (!B.member[x]) return false;
    return true;
}

inline void require_same_ring(const Ideal& A, const Ideal& B) {
    if (A.ring != B.ring) throw InputError("ideals live over different rings");
}

inline Ideal ideal_sum(const Ideal& A, const Ideal& B) {
    require_same_ring(A, B);
    if (A.side != B.side) throw InputError("ideal sum requires matching sides");
    std::vector<Elem> gens = A.gens;
    gens.insert(gens.end(), B.gens.begin(), B.gens.end());
    return make_ideal(*A.ring, std::move(gens), A.side);
}

/// Module product AB: the additive closure of pairwise element products.
/// For matching one-sided ideals this is again an ideal of that side.
inline Ideal ideal_product(const Ideal& A, const Ideal& B) {
    require_same_ring(A, B);
    if (A.side != B.side) throw InputError("ideal product requires matching sides");
    const Ring& R = *A.ring;
    std::vector<char> seen(R.size(), 0);
    std::vector<Elem> prods;
    for (Elem a : A.elems)
        for (Elem b : B.elems) {
            const Elem v = R.mul(a, b);
            if (!seen[v]) {
                seen[v] = 1;
                prods.push_back(v);
            }
        }
    return make_ideal(R, std::move(prods), A.side);
}

inline Ideal ideal_intersection(const Ideal& A, const Ideal& B) {
    require_same_ring(A, B);
    if (A.side != B.side) throw InputError("ideal intersection requires matching sides");
    std::vector<Elem> common;
    for (Elem x : A.elems)
        if (B.member[x]) common.push_back(x);
    return make_ideal(*A.ring, std::move(common), A.side);
}

inline bool is_idempotent_ideal(const Ideal& I) {
    return ideal_equal(ideal_product(I, I), I);
}

/// Smallest generating set found by greedy build-up (always pick the least
/// element not yet generated) followed by a drop pass.  Deterministic.
inline std::vector<Elem> minimal_generators(const Ideal& I) {
    const Ring& R = *I.ring;
    std::vector<Elem> gens;
    std::vector<Elem> cur = close_elems(R, gens, I.side);
    while (cur != I.elems) {
        std::vector<char> in(R.size(), 0);
        for (Elem x : cur) in[x] = 1;
        for (Elem x : I.elems)
            if (!in[x]) {
                gens.push_back(x);
                break;
            }
        cur = close_elems(R, gens, I.side);
    }
    for (std::size_t i = 0; i < gens.size();) {
        std::vector<Elem> trial;
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (j != i) trial.push_back(gens[j]);
        if (close_elems(R, trial, I.side) == I.elems)
            gens = std::move(trial);
        else
            ++i;
    }
    return gens;
}

/// Every ideal of the given side, sorted by (size, element list).  Works by
/// closure growth: each ideal found spawns close(I + {x}) for all x outside
/// it, which reaches every ideal by induction on a generating chain.
inline std::vector<Ideal> enumerate_ideals(const Ring& R, Side side, int size_cap = 64) {
    if (R.size() > size_cap)
        throw CapError("ideal census over a ring of size " + std::to_string(R.size()) +
                       " exceeds the cap " + std::to_string(size_cap));
    std::map<std::vector<Elem>, std::vector<Elem>> found;  // elems -> gens
    std::vector<std::vector<Elem>> queue;
    auto zero = close_elems(R, {}, side);
    found[zero] = {};
    queue.push_back(zero);
    while (!queue.empty()) {
        auto cur = std::move(queue.back());
        queue.pop_back();
        std::vector<char> in(R.size(), 0);
        for (Elem x : cur) in[x] = 1;
        for (Elem x = 0; x < R.size(); ++x) {
            if (in[x]) continue;
            auto seed = cur;
            seed.push_back(x);
            auto bigger = close_elems(R, seed, side);
            if (!found.count(bigger)) {
                found[bigger] = std::move(seed);
                queue.push_back(bigger);
            }
        }
    }
    std::vector<Ideal> out;
    out.reserve(found.size());
    for (auto& [elems, gens] : found) {
        Ideal I;
        I.ring = &R;
        I.side = side;
        I.elems = elems;
        I.member.assign(R.size(), 0);
        for (Elem x : elems) I.member[x] = 1;
        I.gens = minimal_generators(I);
        out.push_back(std::move(I));
    }
    std::sort(out.begin(), out.end(), [](const Ideal& a, const Ideal& b) {
        if (a.elems.size() != b.elems.size()) return a.elems.size() < b.elems.size();
        return a.elems < b.elems;
    });
    return out;
}

/// Jacobson radical: x is in J(R) iff 1 - rx is a unit for every r.
inline Ideal jacobson_radical(const Ring& R) {
    const int n = R.size();
    std::vector<char> unit(n, 0);
    for (Elem u = 0; u < n; ++u) unit[u] = is_unit(R, u) ? 1 : 0;
    std::vector<Elem> rad;
    for (Elem x = 0; x < n; ++x) {
        bool ok = true;
        for (Elem r = 0; r < n && ok; ++r)
            if (!unit[R.sub(R.one(), R.mul(r, x))]) ok = false;
        if (ok) rad.push_back(x);
    }
    Ideal I = make_ideal(R, rad, Side::TwoSided);
    I.gens = minimal_generators(I);
    return I;
}

inline std::vector<Ideal> maximal_two_sided_ideals(const Ring& R, int size_cap = 64) {
    auto all = enumerate_ideals(R, Side::TwoSided, size_cap);
    std::vector<Ideal> maximal;
    for (const Ideal& I : all) {
        if (I.is_unit_ideal()) continue;
        bool top = true;
        for (const Ideal& J : all) {
            if (J.is_unit_ideal() || ideal_equal(I, J)) continue;
            if (ideal_subset(I, J)) {
                top = false;
                break;
            }
        }
        if (top) maximal.push_back(I);
    }
    return maximal;
}

/// K is right-pure when every element has a local left unit inside K, and
/// left-pure symmetrically.
inline bool is_right_pure(const Ideal& K) {
    const Ring& R = *K.ring;
    for (Elem x : K.elems) {
        bool found = false;
        for (Elem e : K.elems)
            if (R.mul(e, x) == x) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

inline bool is_left_pure(const Ideal& K) {
    const Ring& R = *K.ring;
    for (Elem x : K.elems) {
        bool found = false;
        for (Elem e : K.elems)
            if (R.mul(x, e) == x) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// quotients
// ---------------------------------------------------------------------------

/// Quotient by a two-sided ideal.  Cosets are named by their least element;
/// `proj` maps a ring element to its coset index, `lift` picks the least
/// representative back.
struct Quotient {
    Ring ring;
    std::vector<int> proj;
    std::vector<Elem> lift;
};

inline Quotient quotient_ring(const Ring& R, const Ideal& I) {
    if (I.ring != &R) throw InputError("ideal does not belong to this ring");
    for (Elem x : I.elems)
        for (Elem r = 0; r < R.size(); ++r)
            if (!I.member[R.mul(r, x)] || !I.member[R.mul(x, r)])
                throw PreconditionError("quotient requires a two-sided ideal");
    const int n = R.size();
    std::vector<Elem> rep(n);
    for (Elem x = 0; x < n; ++x) {
        Elem best = x;
        for (Elem e : I.elems) best = std::min(best, R.add(x, e));
        rep[x] = best;
    }
    std::vector<Elem> lift;
    std::vector<int> proj(n, -1);
    for (Elem x = 0; x < n; ++x)
        if (rep[x] == x) {
            proj[x] = static_cast<int>(lift.size());
            lift.push_back(x);
        }
    for (Elem x = 0; x < n; ++x) proj[x] = proj[rep[x]];
    const int m = static_cast<int>(lift.size());
    std::vector<Elem> add(static_cast<std::size_t>(m) * m), mul(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            add[static_cast<std::size_t>(i) * m + j] = proj[R.add(lift[i], lift[j])];
            mul[static_cast<std::size_t>(i) * m + j] = proj[R.mul(lift[i], lift[j])];
        }
    Quotient Q{make_ring_from_tables("quotient(" + R.name() + ")", m, std::move(add),
                                     std::move(mul), proj[R.zero()], proj[R.one()]),
               std::move(proj), std::move(lift)};
    return Q;
}

inline bool is_semisimple_quotient(const Ring& R, const Ideal& I) {
    Quotient Q = quotient_ring(R, I);
    return jacobson_radical(Q.ring).is_zero();
}

// ---------------------------------------------------------------------------
// central idempotents
// ---------------------------------------------------------------------------

inline std::vector<Elem> central_idempotents(const Ring& R) {
    std::vector<Elem> out;
    for (Elem e = 0; e < R.size(); ++e) {
        if (R.mul(e, e) != e) continue;
        bool central = true;
        for (Elem r = 0; r < R.size() && central; ++r)
            if (R.mul(e, r) != R.mul(r, e)) central = false;
        if (central) out.push_back(e);
    }
    return out;
}

/// Atoms of the order e <= f iff ef == e on nonzero central idempotents.
inline std::vector<Elem> primitive_central_idempotents(const Ring& R) {
    auto cents = central_idempotents(R);
    std::vector<Elem> out;
    for (Elem e : cents) {
        if (e == R.zero()) continue;
        bool atom = true;
        for (Elem f : cents) {
            if (f == R.zero() || f == e) continue;
            if (R.mul(e, f) == f && R.mul(f, e) == f) {  // f strictly below e
                atom = false;
                break;
            }
        }
        if (atom) out.push_back(e);
    }
    return out;
}

}  // namespace trideal
