#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trideal/error.hpp"
#include "trideal/ideal.hpp"
#include "trideal/linalg.hpp"
#include "trideal/ring.hpp"
#include "trideal/trace.hpp"

namespace trideal {

// ---------------------------------------------------------------------------
// tail rules
// ---------------------------------------------------------------------------

/// Continuation rule for the stages past a telescope's materialized prefix.
enum class TailKind {
    None,           ///< finite prefix only; deepening past it is an error
    EntryPeriodic,  ///< X[j] = X[j - period] for j >= start + period
    BlockDiagonal,  ///< X[j] = factor copies of X[j-1] on the diagonal, j >= start
    TreeLevels,     ///< self-similar tree levels described by TreeTail
};

/// Deep levels of a tree telescope.  Every vertex carries a class; a class-c
/// vertex spawns one lift child of class c followed by gen children of class
/// `gen_class`, so level class vectors evolve by a fixed substitution.
/// column[c] lists the child edge labels (lift label first).  cert[c], when
/// present, is the per-vertex splitting block h of that class, with
/// h * (stacked child columns) * column[c] = column[c].
struct TreeTail {
    std::vector<std::vector<Elem>> column;
    std::vector<Mat> cert;
    int gen_class = 0;
    std::vector<int> base_classes;  ///< vertex classes at stage `start`
};

struct TailRule {
    TailKind kind = TailKind::None;
    int start = 0;
    int period = 1;
    int factor = 1;
    std::optional<TreeTail> tree;
};

// ---------------------------------------------------------------------------
// telescopes
// ---------------------------------------------------------------------------

/// Finite window of a countable direct system of finite free modules.  Stage i
/// has rank sizes[i] >= 1; X[i] maps stage i into stage i+1 and has shape
/// sizes[i+1] x sizes[i].  The optional certificate Y[i] (i >= 1) has shape
/// sizes[i] x sizes[i+1] and asserts Y[i] * X[i] * X[i-1] = X[i-1]; Y[0] is an
/// empty placeholder so indices line up with X.
struct Telescope {
    const Ring* ring = nullptr;
    std::vector<int> sizes;
    std::vector<Mat> X;
    std::vector<Mat> Y;
    TailRule tail;

    int stages() const { return static_cast<int>(sizes.size()); }
    bool has_cert(int i) const {
        return i >= 1 && i < static_cast<int>(Y.size()) && Y[i].rows > 0;
    }
};

namespace detail {

/// Vertex classes of a tree-tail level.  base_classes belongs to stage
/// tail.start; each step replaces a class-c vertex by its lift child (class c)
/// followed by its gen children.
inline std::vector<int> tree_classes_at(const TailRule& tail, int stage) {
    const TreeTail& tt = *tail.tree;
    std::vector<int> cls = tt.base_classes;
    for (int s = tail.start; s < stage; ++s) {
        std::vector<int> next;
        for (int c : cls) {
            next.push_back(c);
            for (std::size_t t = 1; t < tt.column[c].size(); ++t)
                next.push_back(tt.gen_class);
        }
        cls = std::move(next);
    }
    return cls;
}

inline void extend_once(Telescope& T) {
    const Ring& R = *T.ring;
    const TailRule& tl = T.tail;
    const int j = static_cast<int>(T.X.size());
    Mat nx;
    Mat ny;
    switch (tl.kind) {
        case TailKind::None:
            throw PreconditionError(
                "telescope prefix exhausted and no tail rule is set");
        case TailKind::EntryPeriodic: {
            nx = T.X[j - tl.period];
            if (nx.cols != T.sizes[j])
                throw InputError("periodic tail repeats a transition of mismatched width");
            if (T.has_cert(j - tl.period)) ny = T.Y[j - tl.period];
            break;
        }
        case TailKind::BlockDiagonal: {
            nx = block_diag(R, T.X[j - 1], tl.factor);
            if (nx.cols != T.sizes[j])
                throw InputError("block-diagonal tail produces a transition of mismatched width");
            if (j - 1 >= tl.start && T.has_cert(j - 1))
                ny = block_diag(R, T.Y[j - 1], tl.factor);
            break;
        }
        case TailKind::TreeLevels: {
            const TreeTail& tt = *tl.tree;
            std::vector<int> cls = tree_classes_at(tl, j);
            if (static_cast<int>(cls.size()) != T.sizes[j])
                throw InputError("tree tail class vector does not match the stage size");
            int rows = 0;
            for (int c : cls) rows += static_cast<int>(tt.column[c].size());
            nx = mat_zero(R, rows, static_cast<int>(cls.size()));
            int r0 = 0;
            for (int v = 0; v < static_cast<int>(cls.size()); ++v) {
                const auto& col = tt.column[cls[v]];
                for (std::size_t t = 0; t < col.size(); ++t)
                    nx.at(r0 + static_cast<int>(t), v) = col[t];
                r0 += static_cast<int>(col.size());
            }
            if (!tt.cert.empty() && j - 1 >= tl.start) {
                // one splitting block per vertex of the previous level
                std::vector<int> prev = tree_classes_at(tl, j - 1);
                int yr = 0, yc = 0;
                for (int c : prev) {
                    yr += tt.cert[c].rows;
                    yc += tt.cert[c].cols;
                }
                ny = mat_zero(R, yr, yc);
                int i0 = 0, c0 = 0;
                for (int c : prev) {
                    const Mat& h = tt.cert[c];
                    for (int a = 0; a < h.rows; ++a)
                        for (int b = 0; b < h.cols; ++b)
                            ny.at(i0 + a, c0 + b) = h.at(a, b);
                    i0 += h.rows;
                    c0 += h.cols;
                }
            }
            break;
        }
    }
    T.sizes.push_back(nx.rows);
    T.X.push_back(std::move(nx));
    T.Y.push_back(std::move(ny));
}

inline void extend_to(Telescope& T, int stages) {
    while (T.stages() < stages) extend_once(T);
}

}  // namespace detail

/// Validated telescope from explicit data.  Y may be shorter than X; missing
/// certificates are empty placeholders.
inline Telescope make_telescope(const Ring& R, std::vector<int> sizes,
                                std::vector<Mat> X, std::vector<Mat> Y = {},
                                TailRule tail = {}) {
    if (sizes.empty()) throw InputError("telescope needs at least one stage");
    for (int s : sizes)
        if (s < 1) throw InputError("stage sizes must be at least 1");
    if (X.size() + 1 != sizes.size())
        throw InputError("one transition per adjacent stage pair required");
    for (std::size_t i = 0; i < X.size(); ++i)
        if (X[i].rows != sizes[i + 1] || X[i].cols != sizes[i])
            throw InputError("transition " + std::to_string(i) + " has the wrong shape");
    if (Y.size() > X.size()) throw InputError("more certificates than transitions");
    Y.resize(X.size());
    if (!Y.empty()) Y[0] = Mat{};
    for (std::size_t i = 1; i < Y.size(); ++i)
        if (Y[i].rows > 0 && (Y[i].rows != sizes[i] || Y[i].cols != sizes[i + 1]))
            throw InputError("certificate " + std::to_string(i) + " has the wrong shape");
    const int nx = static_cast<int>(X.size());
    switch (tail.kind) {
        case TailKind::None:
            break;
        case TailKind::EntryPeriodic:
            if (tail.period < 1) throw InputError("period must be positive");
            if (tail.start < 0 || tail.start + tail.period > nx)
                throw InputError("prefix must cover one full period past the rule start");
            break;
        case TailKind::BlockDiagonal:
            if (tail.factor < 1) throw InputError("factor must be positive");
            if (tail.start < 1 || tail.start > nx)
                throw InputError("block-diagonal rule start must point into the prefix");
            break;
        case TailKind::TreeLevels: {
            if (!tail.tree) throw InputError("tree tail without tree data");
            if (tail.start < 0 || tail.start > nx)
                throw InputError("tree rule start must point into the prefix");
            const TreeTail& tt = *tail.tree;
            if (tt.column.empty()) throw InputError("tree tail needs class columns");
            for (const auto& col : tt.column)
                if (col.empty()) throw InputError("every class needs at least one child label");
            if (tt.gen_class < 0 || tt.gen_class >= static_cast<int>(tt.column.size()))
                throw InputError("gen class out of range");
            for (int c : tt.base_classes)
                if (c < 0 || c >= static_cast<int>(tt.column.size()))
                    throw InputError("base class out of range");
            if (static_cast<int>(tt.base_classes.size()) != sizes[tail.start])
                throw InputError("base class vector must match the stage size at the rule start");
            break;
        }
    }
    Telescope T;
    T.ring = &R;
    T.sizes = std::move(sizes);
    T.X = std::move(X);
    T.Y = std::move(Y);
    T.tail = std::move(tail);
    return T;
}

/// Deepened copy; the input stays at its materialized depth.
inline Telescope materialized(Telescope T, int stages) {
    detail::extend_to(T, stages);
    return T;
}

/// Telescope repeating one square transition forever.  A certificate, when
/// given, is installed at every link; its validity is the caller's claim and
/// is checked by verify_certificates like any other.
inline Telescope telescope_constant(const Ring& R, const Mat& M,
                                    const std::optional<Mat>& cert = std::nullopt) {
    if (M.rows != M.cols) throw InputError("constant telescope needs a square transition");
    const int n = M.rows;
    std::vector<Mat> Y;
    if (cert) Y = {Mat{}, *cert};
    return make_telescope(R, {n, n, n}, {M, M}, std::move(Y),
                          TailRule{TailKind::EntryPeriodic, 0, 1, 1, std::nullopt});
}

// ---------------------------------------------------------------------------
// certificate checks
// ---------------------------------------------------------------------------

struct CertificateReport {
    int checked = 0;
    std::vector<int> failed;
    bool all_ok() const { return failed.empty(); }
};

/// Exact per-link check of Y[i] * X[i] * X[i-1] = X[i-1] for i = 1..depth.
inline CertificateReport verify_certificates(const Telescope& T, int depth) {
    if (depth < 1) throw InputError("depth must be at least 1");
    Telescope W = materialized(T, depth + 2);
    const Ring& R = *W.ring;
    CertificateReport rep;
    for (int i = 1; i <= depth; ++i) {
        if (!W.has_cert(i))
            throw PreconditionError("missing certificate at link " + std::to_string(i));
        const Mat lhs = mat_mul(R, W.Y[i], mat_mul(R, W.X[i], W.X[i - 1]));
        ++rep.checked;
        if (!(lhs == W.X[i - 1])) rep.failed.push_back(i);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// trace of the limit
// ---------------------------------------------------------------------------

struct TelescopeTraceResult {
    Ideal trace;
    bool stabilized = false;  ///< no transition can contribute a new entry
    bool exact = false;       ///< stabilization promoted by the tail rule
    int stabilized_at = 0;    ///< least transition count generating the full window trace
};

/// Two-sided ideal generated by all entries of X[0..depth-1].  With a tail
/// rule the entry supply repeats, so once the window passes the rule's cover
/// the ideal is the trace of the whole system; without a rule the stabilized
/// flag only reports that the window stopped growing.
inline TelescopeTraceResult telescope_trace(const Telescope& T, int depth) {
    if (depth < 1) throw InputError("depth must be at least 1");
    Telescope W = materialized(T, depth + 1);
    const Ring& R = *W.ring;
    std::set<Elem> seen;
    std::vector<std::vector<Elem>> stage_entries(depth);
    for (int j = 0; j < depth; ++j)
        for (Elem v : W.X[j].a)
            if (seen.insert(v).second) stage_entries[j].push_back(v);
    std::vector<Elem> gens;
    Ideal full = zero_ideal(R, Side::TwoSided);
    std::vector<Ideal> prefix;
    for (int j = 0; j < depth; ++j) {
        gens.insert(gens.end(), stage_entries[j].begin(), stage_entries[j].end());
        prefix.push_back(make_ideal(R, gens, Side::TwoSided));
    }
    full = prefix.back();
    int at = depth;
    for (int n = 1; n <= depth; ++n)
        if (ideal_equal(prefix[n - 1], full)) {
            at = n;
            break;
        }
    int cover = -1;
    switch (W.tail.kind) {
        case TailKind::None: break;
        case TailKind::EntryPeriodic: cover = W.tail.start + W.tail.period; break;
        case TailKind::BlockDiagonal: cover = W.tail.start; break;
        case TailKind::TreeLevels: cover = W.tail.start + 1; break;
    }
    TelescopeTraceResult res{std::move(full), false, false, at};
    res.exact = cover >= 0 && depth >= cover;
    res.stabilized = res.exact || (cover < 0 && at < depth);
    return res;
}

// ---------------------------------------------------------------------------
// row-span chain
// ---------------------------------------------------------------------------

/// Row spans of the composites X[k+l-1] ... X[k-1] (k is 1-based, so k = 1
/// starts at the first transition).  Item l sits inside item l-1 by
/// construction; equality is decided by a complete left solve expressing the
/// previous composite through the current one.
struct HomRowResult {
    std::vector<char> equal;  ///< equal[l-1]: item l equals item l-1
    int stationary_at = -1;   ///< least l with equality from l through the window
    bool persistent = false;  ///< the stable run covers one full tail period
};

inline HomRowResult hom_row_chain(const Telescope& T, int k, int depth) {
    if (k < 1) throw InputError("k is 1-based and must be positive");
    if (k >= depth) throw InputError("need k < depth");
    Telescope W = materialized(T, depth + 1);
    const Ring& R = *W.ring;
    HomRowResult res;
    Mat prev = W.X[k - 1];
    for (int l = 1; l <= depth - k; ++l) {
        Mat cur = mat_mul(R, W.X[k - 1 + l], prev);
        res.equal.push_back(solve_left(R, cur, prev).has_value() ? 1 : 0);
        prev = std::move(cur);
    }
    const int L = static_cast<int>(res.equal.size());
    int last_bad = 0;
    for (int l = 1; l <= L; ++l)
        if (!res.equal[l - 1]) last_bad = l;
    res.stationary_at = (last_bad == L) ? -1 : last_bad + 1;
    if (res.stationary_at > 0 && W.tail.kind != TailKind::None) {
        const int period = W.tail.kind == TailKind::EntryPeriodic ? W.tail.period : 1;
        res.persistent = L - res.stationary_at + 1 >= period;
    }
    return res;
}

// ---------------------------------------------------------------------------
// strict splitting search
// ---------------------------------------------------------------------------

/// Certificate candidates recovered by a complete solve: cert[i] satisfies
/// g * X[i] * X[i-1] = X[i-1].  A missing entry is a proof that no such g
/// exists, not a search failure.
struct StrictMlResult {
    std::vector<std::optional<Mat>> cert;  ///< index 0 unused
    int first_missing = -1;
    bool all_found = true;
};

inline StrictMlResult strict_ml_check(const Telescope& T, int depth) {
    if (depth < 2) throw InputError("need depth >= 2");
    Telescope W = materialized(T, depth + 1);
    const Ring& R = *W.ring;
    StrictMlResult res;
    res.cert.resize(depth);
    for (int i = 1; i < depth; ++i) {
        const Mat A = mat_mul(R, W.X[i], W.X[i - 1]);
        res.cert[i] = solve_left(R, A, W.X[i - 1]);
        if (!res.cert[i]) {
            res.all_found = false;
            if (res.first_missing < 0) res.first_missing = i;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

/// Telescope with stages R -> R^l -> R^(l*l) -> ... whose transitions stack the
/// generator column block-diagonally.  The left ideal spanned by the
/// generators must be idempotent with two-sided closure I.  The first
/// splitting certificate comes from a two-step factor solve (rewrite the
/// column through itself with coefficients inside the ideal, then pull that
/// rewrite through the next stage); the tail replicates it.
inline Telescope whitehead_build(const Ring& R, const Ideal& I,
                                 const std::vector<Elem>& gens) {
    if (gens.empty()) throw InputError("at least one generator required");
    if (I.ring != &R) throw InputError("ideal does not belong to this ring");
    if (I.side != Side::TwoSided)
        throw PreconditionError("target ideal must be two-sided");
    Ideal J = make_ideal(R, gens, Side::Left);
    if (!is_idempotent_ideal(J))
        throw PreconditionError("generator span is not an idempotent left ideal");
    if (!ideal_equal(make_ideal(R, gens, Side::TwoSided), I))
        throw PreconditionError("generators do not span the target two-sided ideal");
    const int l = static_cast<int>(gens.size());
    const Mat X0 = mat_col(gens);
    const Mat X1 = block_diag(R, X0, l);
    auto D = solve_left_factor(R, X0, gens, &J.elems);
    if (!D)
        throw PreconditionError("ideal does not absorb its generators on the left");
    auto Y1 = solve_left_factor(R, *D, gens, nullptr);
    if (!Y1) throw SolveError("certificate factorization failed");
    if (!(mat_mul(R, *Y1, mat_mul(R, X1, X0)) == X0))
        throw AxiomViolation("splitting certificate failed its defining identity");
    return make_telescope(R, {1, l, l * l}, {X0, X1}, {Mat{}, *Y1},
                          TailRule{TailKind::BlockDiagonal, 1, 1, l, std::nullopt});
}

// ---------------------------------------------------------------------------
// tensoring by quotients and finite generation
// ---------------------------------------------------------------------------

enum class FgStatus { FinitelyGenerated, NotFinitelyGenerated, Undetermined };

struct FgResult {
    FgStatus status = FgStatus::Undetermined;
    int stage = -1;           ///< generating stage certificate when one was found
    int dead_at = -1;         ///< products of this length all vanish (dead tails)
    int witness_stage = -1;   ///< transition carrying a surviving entry
    int witness_column = -1;
    std::string rule;
};

namespace detail {

inline bool single_nonzero_per_row(const Ring& R, const Mat& M) {
    for (int i = 0; i < M.rows; ++i) {
        int nz = 0;
        for (int j = 0; j < M.cols; ++j)
            if (M.at(i, j) != R.zero()) ++nz;
        if (nz > 1) return false;
    }
    return true;
}

inline std::vector<Elem> nonzero_entries(const Ring& R, const Mat& M) {
    std::set<Elem> s;
    for (Elem v : M.a)
        if (v != R.zero()) s.insert(v);
    return {s.begin(), s.end()};
}

/// Values admitting an endless chain of nonzero left multiplications drawn
/// from per-context label sets; edges[c] lists (label, next context).
/// Greatest fixpoint by iterated pruning.
inline std::vector<std::vector<char>> surviving_values(
    const Ring& R, const std::vector<std::vector<std::pair<Elem, int>>>& edges) {
    const int nc = static_cast<int>(edges.size());
    std::vector<std::vector<char>> alive(nc, std::vector<char>(R.size(), 1));
    for (int c = 0; c < nc; ++c) alive[c][R.zero()] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int c = 0; c < nc; ++c)
            for (Elem v = 0; v < R.size(); ++v) {
                if (!alive[c][v]) continue;
                bool ok = false;
                for (const auto& e : edges[c]) {
                    const Elem w = R.mul(e.first, v);
                    if (w != R.zero() && alive[e.second][w]) {
                        ok = true;
                        break;
                    }
                }
                if (!ok) {
                    alive[c][v] = 0;
                    changed = true;
                }
            }
    }
    return alive;
}

inline Mat mat_column(const Mat& M, int j) {
    Mat col(M.rows, 1);
    for (int i = 0; i < M.rows; ++i) col.at(i, 0) = M.at(i, j);
    return col;
}

/// Best-effort generating-stage certificate: stage k such that every column
/// of the next `span` stages reaches the image of stage k at some depth
/// within the window.
inline int find_stage_certificate(const Telescope& T, int depth, int span) {
    if (depth < 2) return -1;
    Telescope W = materialized(T, depth + 1);
    const Ring& R = *W.ring;
    for (int k = 0; k + 1 < depth; ++k) {
        bool all = true;
        const int tmax = std::min(k + span, depth - 1);
        for (int t = k + 1; t <= tmax && all; ++t) {
            for (int j = 0; j < W.sizes[t] && all; ++j) {
                Mat Wk = W.X[k];
                for (int i = k + 1; i < t; ++i) Wk = mat_mul(R, W.X[i], Wk);
                Mat Wt = mat_identity(R, W.sizes[t]);
                bool found = false;
                for (int n = t; n <= depth && !found; ++n) {
                    if (n > t) {
                        Wk = mat_mul(R, W.X[n - 1], Wk);
                        Wt = mat_mul(R, W.X[n - 1], Wt);
                    }
                    try {
                        found = solve_right(R, Wk, mat_column(Wt, j)).has_value();
                    } catch (const SearchCapError&) {
                    }
                }
                if (!found) all = false;
            }
        }
        if (all) return k;
    }
    return -1;
}

/// Length at which every product of tail labels vanishes; -1 when some chain
/// survives the iteration cap (callers only use this on dead label sets).
inline int death_length(const Ring& R, const std::vector<Elem>& labels) {
    std::set<Elem> cur(labels.begin(), labels.end());
    cur.erase(R.zero());
    int len = 1;
    const int cap = R.size() * static_cast<int>(labels.size() + 2) + 4;
    while (!cur.empty()) {
        if (len > cap) return -1;
        std::set<Elem> nxt;
        for (Elem l : labels)
            for (Elem v : cur) {
                const Elem w = R.mul(l, v);
                if (w != R.zero()) nxt.insert(w);
            }
        cur = std::move(nxt);
        ++len;
    }
    return len;
}

}  // namespace detail

/// Three-valued decision on finite generation of the telescope's limit.
/// Entry-periodic tails keep the stage images uniformly bounded, so the
/// ascending image union stabilizes and the limit is always finitely
/// generated.  A block-diagonal tail of factor f >= 2 makes the limit
/// isomorphic to its own f-th power, so it is finitely generated exactly when
/// it vanishes; vanishing is decided exactly by label mortality when the tail
/// transitions have at most one nonzero entry per row.  Tree tails reduce to
/// whether the generator-born subtrees vanish.  Everything else is reported
/// undetermined at the given depth.
inline FgResult fg_decide(const Telescope& T, int depth = 6) {
    const Ring& R = *T.ring;
    FgResult res;
    if (R.size() == 1) {
        res.status = FgStatus::FinitelyGenerated;
        res.stage = 0;
        res.rule = "the ring collapses, so every stage is the zero module";
        return res;
    }
    const TailRule& tl = T.tail;
    if (tl.kind == TailKind::None) {
        res.status = FgStatus::Undetermined;
        res.rule = "no tail rule; only a finite window is available";
        return res;
    }
    if (tl.kind == TailKind::EntryPeriodic ||
        (tl.kind == TailKind::BlockDiagonal && tl.factor == 1)) {
        res.status = FgStatus::FinitelyGenerated;
        res.rule = "stage ranks are bounded and transitions repeat, so the "
                   "ascending stage images stabilize";
        const int span = tl.kind == TailKind::EntryPeriodic ? tl.period : 1;
        res.stage = detail::find_stage_certificate(T, depth, span);
        return res;
    }
    if (tl.kind == TailKind::BlockDiagonal) {
        Telescope W = materialized(T, tl.start + 2);
        const Mat& base = W.X[tl.start - 1];  // deeper transitions repeat these labels
        if (!detail::single_nonzero_per_row(R, base)) {
            Telescope D = materialized(T, depth + 1);
            Mat V = D.X[tl.start - 1];
            bool dead = mat_is_zero(R, V);
            int n = tl.start;
            for (; !dead && n < depth; ++n) {
                V = mat_mul(R, D.X[n], V);
                dead = mat_is_zero(R, V);
            }
            if (dead) {
                res.status = FgStatus::FinitelyGenerated;
                res.dead_at = n - tl.start + 1;
                res.rule = "the running tail composite vanishes, so the limit is zero";
                res.stage = detail::find_stage_certificate(T, depth, 1);
            } else {
                res.status = FgStatus::Undetermined;
                res.rule = "tail transitions mix rows; no exact mortality analysis "
                           "at this depth";
            }
            return res;
        }
        const auto labels = detail::nonzero_entries(R, base);
        std::vector<std::vector<std::pair<Elem, int>>> edges(1);
        for (Elem l : labels) edges[0].push_back({l, 0});
        const auto alive = detail::surviving_values(R, edges);
        Elem survivor = -1;
        for (Elem l : labels)
            if (alive[0][l]) {
                survivor = l;
                break;
            }
        if (survivor < 0) {
            res.status = FgStatus::FinitelyGenerated;
            res.dead_at = detail::death_length(R, labels);
            res.rule = "every product of tail entries dies, so the limit is zero";
            res.stage = detail::find_stage_certificate(T, depth, 1);
        } else {
            res.status = FgStatus::NotFinitelyGenerated;
            res.witness_stage = tl.start;
            for (int c = 0; c < base.cols && res.witness_column < 0; ++c)
                for (int r = 0; r < base.rows; ++r)
                    if (base.at(r, c) == survivor) {
                        res.witness_column = c;
                        break;
                    }
            res.rule = "factor-" + std::to_string(tl.factor) +
                       " self-similar tail with surviving entry " +
                       std::to_string(survivor) +
                       ": the limit is isomorphic to its own power yet nonzero";
        }
        return res;
    }
    // tree levels
    const TreeTail& tt = *tl.tree;
    bool gen_edges = tt.column[tt.gen_class].size() >= 2;
    for (int c : tt.base_classes)
        if (tt.column[c].size() >= 2) gen_edges = true;
    if (!gen_edges) {
        res.status = FgStatus::FinitelyGenerated;
        res.rule = "tree tail has no generator edges, so level ranks stay bounded";
        res.stage = detail::find_stage_certificate(T, depth, 1);
        return res;
    }
    std::vector<std::vector<std::pair<Elem, int>>> edges(tt.column.size());
    for (int c = 0; c < static_cast<int>(tt.column.size()); ++c) {
        edges[c].push_back({tt.column[c][0], c});
        for (std::size_t t = 1; t < tt.column[c].size(); ++t)
            edges[c].push_back({tt.column[c][t], tt.gen_class});
    }
    const auto alive = detail::surviving_values(R, edges);
    Elem survivor = -1;
    for (const auto& e : edges[tt.gen_class])
        if (e.first != R.zero() && alive[e.second][e.first]) {
            survivor = e.first;
            break;
        }
    if (survivor < 0) {
        res.status = FgStatus::FinitelyGenerated;
        res.rule = "generator-born subtrees vanish, leaving bounded lift spines";
        res.stage = detail::find_stage_certificate(T, depth, 1);
    } else {
        res.status = FgStatus::NotFinitelyGenerated;
        res.witness_stage = tl.start;
        const std::vector<int> nxt = detail::tree_classes_at(tl, tl.start + 1);
        for (int v = 0; v < static_cast<int>(nxt.size()); ++v)
            if (nxt[v] == tt.gen_class) {
                res.witness_column = v;
                break;
            }
        res.rule = "a generator-born subtree recurs at every level and its label " +
                   std::to_string(survivor) + " survives all products";
    }
    return res;
}

/// Entry-wise image of a matrix in the quotient ring.
inline Mat reduce_mat(const Quotient& Q, const Mat& M) {
    Mat out(M.rows, M.cols, Q.ring.zero());
    for (std::size_t i = 0; i < M.a.size(); ++i) out.a[i] = Q.proj[M.a[i]];
    return out;
}

struct TensorResult {
    std::shared_ptr<Quotient> quotient;
    Telescope reduced;
    FgResult fg;
};

/// Reduction of every transition and certificate modulo a proper nonzero
/// two-sided ideal, together with the finite-generation decision for the
/// reduced limit.  The returned telescope points at the owned quotient ring.
inline TensorResult tensor_quotient(const Telescope& T, const Ideal& I, int depth = 6) {
    if (I.ring != T.ring) throw InputError("ideal does not belong to the telescope's ring");
    if (I.side != Side::TwoSided)
        throw PreconditionError("tensoring needs a two-sided ideal");
    if (I.is_zero() || I.is_unit_ideal())
        throw PreconditionError("tensoring needs a proper nonzero ideal");
    TensorResult res;
    res.quotient = std::make_shared<Quotient>(quotient_ring(*T.ring, I));
    const Quotient& Q = *res.quotient;
    Telescope W = materialized(T, depth + 1);
    Telescope red;
    red.ring = &Q.ring;
    red.sizes = W.sizes;
    red.X.reserve(W.X.size());
    red.Y.reserve(W.Y.size());
    for (const Mat& M : W.X) red.X.push_back(reduce_mat(Q, M));
    for (const Mat& M : W.Y) red.Y.push_back(M.rows > 0 ? reduce_mat(Q, M) : Mat{});
    red.tail = W.tail;
    if (red.tail.tree) {
        TreeTail t2 = *red.tail.tree;
        for (auto& col : t2.column)
            for (Elem& v : col) v = Q.proj[v];
        for (Mat& h : t2.cert) h = reduce_mat(Q, h);
        red.tail.tree = std::move(t2);
    }
    res.reduced = std::move(red);
    res.fg = fg_decide(res.reduced, depth);
    return res;
}

// ---------------------------------------------------------------------------
// idempotent window
// ---------------------------------------------------------------------------

/// Square window (block columns 0..blocks-1) of the column-finite idempotent
/// presenting the limit as a direct summand of the stage sum.  With
/// s_i = Y[i] X[i] and the first-stage substitute Y[0] (a retraction of X[0]
/// when one exists, zero otherwise), block column m carries
///   E[m][m]   = s_m - X[m-1] Y[m-1] s_m
///   E[j][m]   = (1 - X[j-1] Y[j-1]) Y[j] ... Y[m-1] s_m      (0 < j < m)
///   E[0][m]   = Y[0] Y[1] ... Y[m-1] s_m
///   E[m+1][m] = X[m] (1 - s_m)
/// and nothing below.  col_bounds[j] bounds the rows of window column j and
/// may point past the window; offsets lists the block offsets.
struct IdempotentPrefix {
    Mat window;
    std::vector<int> col_bounds;
    std::vector<int> offsets;
};

inline IdempotentPrefix idempotent_prefix(const Telescope& T, int blocks) {
    if (blocks < 1) throw InputError("need at least one block column");
    CertificateReport cr = verify_certificates(T, blocks);
    if (!cr.all_ok())
        throw PreconditionError("certificates fail at link " +
                                std::to_string(cr.failed.front()));
    Telescope W = materialized(T, blocks + 2);
    const Ring& R = *W.ring;
    std::vector<int> off(blocks + 2, 0);
    for (int t = 0; t + 1 < static_cast<int>(off.size()); ++t)
        off[t + 1] = off[t] + W.sizes[t];
    const int dim = off[blocks];
    SolveOptions yopts;
    yopts.budget = 100000000;  // one structural solve; worth a deep search
    Mat Y0 = solve_left(R, W.X[0], mat_identity(R, W.sizes[0]), yopts)
                 .value_or(mat_zero(R, W.sizes[0], W.sizes[1]));
    auto cert = [&](int i) -> const Mat& { return i == 0 ? Y0 : W.Y[i]; };
    IdempotentPrefix res;
    res.window = mat_zero(R, dim, dim);
    res.col_bounds.assign(dim, 0);
    res.offsets = off;
    auto put = [&](int r0, int c0, const Mat& B) {
        for (int i = 0; i < B.rows; ++i)
            for (int j = 0; j < B.cols; ++j) res.window.at(r0 + i, c0 + j) = B.at(i, j);
    };
    for (int m = 0; m < blocks; ++m) {
        const Mat sm = mat_mul(R, cert(m), W.X[m]);
        Mat P = sm;
        for (int j = m; j >= 0; --j) {
            if (j == 0) {
                put(off[0], off[m], P);
                break;
            }
            Mat up = mat_mul(R, cert(j - 1), P);
            put(off[j], off[m], mat_sub(R, P, mat_mul(R, W.X[j - 1], up)));
            P = std::move(up);
        }
        if (m + 1 < blocks)
            put(off[m + 1], off[m],
                mat_mul(R, W.X[m], mat_sub(R, mat_identity(R, W.sizes[m]), sm)));
        for (int c = off[m]; c < off[m + 1]; ++c) res.col_bounds[c] = off[m + 2];
    }
    return res;
}

// ---------------------------------------------------------------------------
// lifting a quotient telescope along an ideal chain
// ---------------------------------------------------------------------------

/// Chain for lifting: ascending finitely generated left ideals links[t] whose
/// generators gens[t] satisfy links[t] = sum of links[t+1] * gens[t][i], with
/// the right closure of the deepest link equal to the target ideal.  With
/// constant_tail the last entry repeats forever.
struct LiftChain {
    std::vector<Ideal> links;
    std::vector<std::vector<Elem>> gens;
    bool constant_tail = true;
};

namespace detail {

inline const Ideal& chain_link(const LiftChain& ch, int t) {
    const int n = static_cast<int>(ch.links.size());
    if (t < n) return ch.links[t];
    if (!ch.constant_tail)
        throw PreconditionError("chain data exhausted at index " + std::to_string(t));
    return ch.links[n - 1];
}

inline const std::vector<Elem>& chain_gens(const LiftChain& ch, int t) {
    const int n = static_cast<int>(ch.gens.size());
    if (t < n) return ch.gens[t];
    if (!ch.constant_tail)
        throw PreconditionError("chain data exhausted at index " + std::to_string(t));
    return ch.gens[n - 1];
}

/// Additive closure of {x * g : x in left.elems, g in gens}.
inline std::set<Elem> left_multiples(const Ring& R, const Ideal& left,
                                     const std::vector<Elem>& gens) {
    std::set<Elem> seed;
    for (Elem x : left.elems)
        for (Elem g : gens) seed.insert(R.mul(x, g));
    std::vector<Elem> work(seed.begin(), seed.end());
    std::set<Elem> out(seed.begin(), seed.end());
    out.insert(R.zero());
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Elem> cur(out.begin(), out.end());
        for (Elem a : cur)
            for (Elem b : work)
                if (out.insert(R.add(a, b)).second) grew = true;
    }
    return out;
}

}  // namespace detail

/// Exact validation of the chain posts; throws on the first failure.
inline void validate_lift_chain(const Ring& R, const LiftChain& ch, const Ideal& I) {
    if (ch.links.empty() || ch.links.size() != ch.gens.size())
        throw InputError("chain needs matching link and generator lists");
    for (std::size_t t = 0; t < ch.links.size(); ++t) {
        const Ideal& J = ch.links[t];
        if (J.ring != &R) throw InputError("chain link over the wrong ring");
        if (J.side != Side::Left)
            throw PreconditionError("chain links must be left ideals");
        if (ch.gens[t].empty())
            throw InputError("every chain link needs at least one generator");
        for (Elem g : ch.gens[t])
            if (!J.contains(g))
                throw PreconditionError("chain generator outside its link at index " +
                                        std::to_string(t));
        if (!ideal_equal(make_ideal(R, ch.gens[t], Side::Left), J))
            throw PreconditionError("generators do not span the chain link at index " +
                                    std::to_string(t));
        if (t + 1 < ch.links.size())
            for (Elem x : J.elems)
                if (!ch.links[t + 1].contains(x))
                    throw PreconditionError("chain links must ascend");
    }
    const std::size_t top = ch.links.size() - 1;
    for (std::size_t t = 0; t < ch.links.size(); ++t) {
        if (t == top && !ch.constant_tail) break;
        const Ideal& next = ch.links[std::min(t + 1, top)];
        const auto span = detail::left_multiples(R, next, ch.gens[t]);
        if (!(span == std::set<Elem>(ch.links[t].elems.begin(), ch.links[t].elems.end())))
            throw PreconditionError("chain product condition fails at index " +
                                    std::to_string(t));
    }
    Ideal closure = make_ideal(R, ch.links.back().elems, Side::TwoSided);
    if (!ideal_equal(closure, I))
        throw PreconditionError("chain does not exhaust the target ideal");
}

/// Lift a telescope over R/I to one over R whose trace absorbs I.  Stage t+1
/// gains generator block rows: the transition stacks the entry-lifted input
/// (padded with zero columns) over a block-diagonal generator column, and the
/// certificates are reassembled from the lifted input certificates plus
/// factor solves through the chain links.  Reducing the result modulo I
/// reproduces the input in the top-left blocks.
inline Telescope lift_build(const Ring& R, const Ideal& I, const Telescope& Tbar,
                            const LiftChain& chain, int depth) {
    if (depth < 2) throw InputError("need depth >= 2");
    if (I.ring != &R) throw InputError("ideal does not belong to this ring");
    validate_lift_chain(R, chain, I);
    Quotient Q = quotient_ring(R, I);
    if (Tbar.ring->size() != Q.ring.size())
        throw InputError("telescope ring does not match the quotient by the ideal");
    Telescope B = materialized(Tbar, depth + 1);
    for (int i = 1; i <= depth - 1; ++i)
        if (!B.has_cert(i))
            throw PreconditionError("missing input certificate at link " +
                                    std::to_string(i));
    auto lift_mat = [&](const Mat& M) {
        Mat out(M.rows, M.cols, R.zero());
        for (std::size_t i = 0; i < M.a.size(); ++i) out.a[i] = Q.lift[M.a[i]];
        return out;
    };
    const int trans = depth;  // output transitions 0..depth-1
    std::vector<int> m(trans + 1);
    std::vector<Mat> Xp(trans), Ap(trans), XA(trans), YA(trans);
    m[0] = B.sizes[0];
    for (int t = 0; t < trans; ++t) {
        const auto& g = detail::chain_gens(chain, t);
        const Mat Xl = lift_mat(B.X[t]);
        Xp[t] = mat_hstack(Xl, mat_zero(R, B.sizes[t + 1], m[t] - B.sizes[t]));
        Ap[t] = block_diag(R, mat_col(g), m[t]);
        XA[t] = mat_vstack(Xp[t], Ap[t]);
        m[t + 1] = XA[t].rows;
    }
    for (int t = 0; t + 1 < trans; ++t) {
        const Ideal& Jt = detail::chain_link(chain, t);
        const Ideal& Jn = detail::chain_link(chain, t + 1);
        const auto& g = detail::chain_gens(chain, t);
        const auto& g1 = detail::chain_gens(chain, t + 1);
        const Mat Yl = lift_mat(B.Y[t + 1]);
        const Mat YX = mat_mul(R, Yl, lift_mat(B.X[t + 1]));
        const Mat Z = mat_sub(R, mat_mul(R, YX, Xp[t]), Xp[t]);
        for (int i = 0; i < Z.rows; ++i)
            for (int j = 0; j < Z.cols; ++j)
                if (!Jt.contains(Z.at(i, j)))
                    throw PreconditionError(
                        "lifted defect leaves chain link " + std::to_string(t) +
                        " at entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        auto C1 = solve_left_factor(R, Z, g, &Jn.elems);
        if (!C1) throw AxiomViolation("defect factorization failed despite the chain posts");
        auto C2 = solve_left_factor(R, Ap[t], g, &Jn.elems);
        if (!C2) throw AxiomViolation("generator block factorization failed");
        const int nt1 = B.sizes[t + 1];
        const int mlt = m[t] * static_cast<int>(g.size());
        Mat minusC1 = mat_sub(R, mat_zero(R, nt1, mlt), *C1);
        Mat C = mat_vstack(mat_hstack(YX, minusC1),
                           mat_hstack(mat_zero(R, mlt, nt1), *C2));
        if (!(mat_mul(R, C, XA[t]) == XA[t]))
            throw AxiomViolation("assembled multiplier lost the fixed-point identity");
        auto D2 = solve_left_factor(R, mat_hstack(mat_zero(R, mlt, nt1), *C2), g1, nullptr);
        auto D1 = solve_left_factor(R, mat_hstack(mat_zero(R, nt1, nt1), minusC1), g1,
                                    nullptr);
        if (!D1 || !D2)
            throw AxiomViolation("multiplier pullback through the next stage failed");
        YA[t + 1] = mat_vstack(mat_hstack(Yl, *D1),
                               mat_hstack(mat_zero(R, mlt, B.sizes[t + 2]), *D2));
        if (!(mat_mul(R, YA[t + 1], XA[t + 1]) == C))
            throw AxiomViolation("certificate assembly does not reproduce the multiplier");
    }
    std::vector<int> sizes(m.begin(), m.end());
    return make_telescope(R, sizes, XA, YA, TailRule{});
}

}  // namespace trideal
