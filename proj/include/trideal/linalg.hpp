#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "trideal/error.hpp"
#include "trideal/ring.hpp"

namespace trideal {

/// Coefficients y_i with sum_i y_i * gens[i] == target, every y_i drawn from
/// `coeffs`.  Layered reachability with first-found backpointers; states and
/// candidate coefficients are scanned ascending, so the result is
/// reproducible.  nullopt is definitive: the scan covers every reachable
/// partial sum.
inline std::optional<std::vector<Elem>> decompose_over(
    const Ring& R, Elem target, const std::vector<Elem>& gens,
    std::vector<Elem> coeffs) {
    const int size = R.size();
    if (target < 0 || target >= size)
        throw InputError("decompose_over: target out of range");
    for (Elem g : gens)
        if (g < 0 || g >= size)
            throw InputError("decompose_over: generator out of range");
    std::sort(coeffs.begin(), coeffs.end());
    coeffs.erase(std::unique(coeffs.begin(), coeffs.end()), coeffs.end());
    if (!coeffs.empty() && (coeffs.front() < 0 || coeffs.back() >= size))
        throw InputError("decompose_over: coefficient out of range");

    const int n = static_cast<int>(gens.size());
    if (n == 0) {
        if (target == R.zero()) return std::vector<Elem>{};
        return std::nullopt;
    }

    constexpr Elem kUnset = -1;
    std::vector<std::vector<Elem>> prev_state(n, std::vector<Elem>(size, kUnset));
    std::vector<std::vector<Elem>> prev_coeff(n, std::vector<Elem>(size, kUnset));
    std::vector<char> cur(size, 0), nxt(size, 0);
    cur[R.zero()] = 1;
    for (int i = 0; i < n; ++i) {
        std::fill(nxt.begin(), nxt.end(), 0);
        for (Elem s = 0; s < size; ++s) {
            if (!cur[s]) continue;
            for (Elem y : coeffs) {
                const Elem t = R.add(s, R.mul(y, gens[i]));
                if (prev_state[i][t] == kUnset) {
                    prev_state[i][t] = s;
                    prev_coeff[i][t] = y;
                }
                nxt[t] = 1;
            }
        }
        std::swap(cur, nxt);
    }
    if (!cur[target]) return std::nullopt;

    std::vector<Elem> out(n, R.zero());
    Elem s = target;
    for (int i = n - 1; i >= 0; --i) {
        out[i] = prev_coeff[i][s];
        s = prev_state[i][s];
    }
    return out;
}

/// One summand of a linear constraint: x*coeff when coeff_on_right, else
/// coeff*x, where x is the unknown named by `var`.
struct LinTerm {
    int var = 0;
    Elem coeff = 0;
    bool coeff_on_right = true;
};

struct LinConstraint {
    std::vector<LinTerm> terms;
    Elem target = 0;
};

struct SolveOptions {
    /// Value domain for every unknown; nullptr means the whole ring.
    const std::vector<Elem>* allowed = nullptr;
    /// Value trials before giving up with SearchCapError.
    long long budget = 4000000;
};

namespace detail {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Complete backtracking search for an assignment of all variables satisfying
/// every constraint.  Variables are grouped into connected components (linked
/// by shared constraints) and solved independently; inside a component the
/// assignment order is ascending variable index and values are tried in
/// ascending domain order, so the first solution found is reproducible.
/// nullopt is a definitive no; exceeding the budget throws SearchCapError.
inline std::optional<std::vector<Elem>> solve_linear_system(
    const Ring& R, int num_vars, const std::vector<LinConstraint>& constraints,
    SolveOptions opts = {}) {
    const int size = R.size();
    if (num_vars < 0)
        throw InputError("solve_linear_system: negative variable count");
    for (const LinConstraint& c : constraints) {
        if (c.target < 0 || c.target >= size)
            throw InputError("solve_linear_system: target out of range");
        for (const LinTerm& t : c.terms) {
            if (t.var < 0 || t.var >= num_vars)
                throw InputError("solve_linear_system: variable index out of range");
            if (t.coeff < 0 || t.coeff >= size)
                throw InputError("solve_linear_system: coefficient out of range");
        }
    }

    std::vector<Elem> domain;
    if (opts.allowed) {
        domain = *opts.allowed;
        std::sort(domain.begin(), domain.end());
        domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
        if (!domain.empty() && (domain.front() < 0 || domain.back() >= size))
            throw InputError("solve_linear_system: domain value out of range");
    } else {
        domain.resize(size);
        for (Elem v = 0; v < size; ++v) domain[v] = v;
    }

    for (const LinConstraint& c : constraints)
        if (c.terms.empty() && c.target != R.zero()) return std::nullopt;
    if (num_vars == 0) return std::vector<Elem>{};
    if (domain.empty()) return std::nullopt;

    detail::Dsu dsu(num_vars);
    for (const LinConstraint& c : constraints)
        for (size_t i = 1; i < c.terms.size(); ++i)
            dsu.unite(c.terms[0].var, c.terms[i].var);

    const int ncs = static_cast<int>(constraints.size());
    std::vector<Elem> acc(ncs, R.zero());
    std::vector<int> rem(ncs, 0);
    std::vector<std::vector<std::pair<int, int>>> touch(num_vars);
    for (int c = 0; c < ncs; ++c) {
        rem[c] = static_cast<int>(constraints[c].terms.size());
        for (size_t t = 0; t < constraints[c].terms.size(); ++t)
            touch[constraints[c].terms[t].var].emplace_back(c, static_cast<int>(t));
    }

    std::vector<Elem> val(num_vars, domain.front());
    long long budget = opts.budget;

    auto term_value = [&](const LinTerm& t, Elem v) {
        return t.coeff_on_right ? R.mul(v, t.coeff) : R.mul(t.coeff, v);
    };

    std::vector<std::vector<int>> components(num_vars);
    for (int v = 0; v < num_vars; ++v)
        if (!touch[v].empty()) components[dsu.find(v)].push_back(v);

    auto assign = [&](const std::vector<int>& order, auto&& self,
                      size_t pos) -> bool {
        if (pos == order.size()) return true;
        const int x = order[pos];
        for (Elem v : domain) {
            if (--budget < 0)
                throw SearchCapError("linear solve budget exhausted");
            bool ok = true;
            for (auto [c, t] : touch[x]) {
                acc[c] = R.add(acc[c], term_value(constraints[c].terms[t], v));
                rem[c] -= 1;
                if (rem[c] == 0 && acc[c] != constraints[c].target) ok = false;
            }
            if (ok) {
                val[x] = v;
                if (self(order, self, pos + 1)) return true;
            }
            for (auto [c, t] : touch[x]) {
                acc[c] = R.sub(acc[c], term_value(constraints[c].terms[t], v));
                rem[c] += 1;
            }
        }
        return false;
    };

    for (int root = 0; root < num_vars; ++root) {
        if (components[root].empty()) continue;
        if (!assign(components[root], assign, 0)) return std::nullopt;
    }
    return val;
}

/// G with G*A = B; G has shape B.rows x A.rows.  Rows of G are independent
/// systems, each solved with a fresh budget.
inline std::optional<Mat> solve_left(const Ring& R, const Mat& A, const Mat& B,
                                     SolveOptions opts = {}) {
    if (A.cols != B.cols) throw InputError("solve_left: column count mismatch");
    Mat G(B.rows, A.rows, R.zero());
    for (int r = 0; r < B.rows; ++r) {
        std::vector<LinConstraint> cs(A.cols);
        for (int c = 0; c < A.cols; ++c) {
            cs[c].target = B.at(r, c);
            for (int j = 0; j < A.rows; ++j)
                if (A.at(j, c) != R.zero())
                    cs[c].terms.push_back({j, A.at(j, c), true});
        }
        auto x = solve_linear_system(R, A.rows, cs, opts);
        if (!x) return std::nullopt;
        for (int j = 0; j < A.rows; ++j) G.at(r, j) = (*x)[j];
    }
    return G;
}

/// X with A*X = B; X has shape A.cols x B.cols.  Columns of X are independent
/// systems, each solved with a fresh budget.
inline std::optional<Mat> solve_right(const Ring& R, const Mat& A, const Mat& B,
                                      SolveOptions opts = {}) {
    if (A.rows != B.rows) throw InputError("solve_right: row count mismatch");
    Mat X(A.cols, B.cols, R.zero());
    for (int c = 0; c < B.cols; ++c) {
        std::vector<LinConstraint> cs(A.rows);
        for (int i = 0; i < A.rows; ++i) {
            cs[i].target = B.at(i, c);
            for (int j = 0; j < A.cols; ++j)
                if (A.at(i, j) != R.zero())
                    cs[i].terms.push_back({j, A.at(i, j), false});
        }
        auto x = solve_linear_system(R, A.cols, cs, opts);
        if (!x) return std::nullopt;
        for (int j = 0; j < A.cols; ++j) X.at(j, c) = (*x)[j];
    }
    return X;
}

}  // namespace trideal
