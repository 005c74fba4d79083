#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "trideal/error.hpp"

namespace trideal {

/// Elements of a tabulated ring are indices into its operation tables.
using Elem = std::int32_t;

/// Size caps used when materializing rings.  `q_cap` bounds the field order
/// accepted by the matrix presets, `size_cap` bounds the number of elements
/// of any tabulated ring.
struct RingCaps {
    int q_cap = 4;
    int size_cap = 4096;
};

/// A finite unital ring given by full addition and multiplication tables.
///
/// Instances are immutable after construction.  The constructor checks index
/// bounds and that every element has an additive inverse (needed to tabulate
/// negation); full axiom verification lives in `verify_ring_axioms` and runs
/// for every ring produced by `make_ring_from_tables` or a preset.
class Ring {
public:
    Ring(std::string name, int size, std::vector<Elem> add_table,
         std::vector<Elem> mul_table, Elem zero, Elem one)
        : name_(std::move(name)),
          n_(size),
          add_(std::move(add_table)),
          mul_(std::move(mul_table)),
          zero_(zero),
          one_(one) {
        if (n_ <= 0) throw InputError("ring size must be positive");
        const std::size_t want = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
        if (add_.size() != want || mul_.size() != want)
            throw InputError("operation tables must have size*size entries");
        for (Elem v : add_)
            if (v < 0 || v >= n_) throw InputError("addition table entry out of range");
        for (Elem v : mul_)
            if (v < 0 || v >= n_) throw InputError("multiplication table entry out of range");
        if (zero_ < 0 || zero_ >= n_ || one_ < 0 || one_ >= n_)
            throw InputError("zero/one index out of range");
        neg_.assign(n_, -1);
        for (Elem a = 0; a < n_; ++a) {
            for (Elem b = 0; b < n_; ++b) {
                if (add(a, b) == zero_) {
                    neg_[a] = b;
                    break;
                }
            }
            if (neg_[a] < 0)
                throw AxiomViolation("element " + std::to_string(a) + " has no additive inverse");
        }
        commutative_ = true;
        for (Elem a = 0; a < n_ && commutative_; ++a)
            for (Elem b = a + 1; b < n_; ++b)
                if (mul(a, b) != mul(b, a)) {
                    commutative_ = false;
                    break;
                }
    }

    const std::string& name() const { return name_; }
    int size() const { return n_; }
    Elem zero() const { return zero_; }
    Elem one() const { return one_; }
    bool commutative() const { return commutative_; }

    Elem add(Elem a, Elem b) const { return add_[static_cast<std::size_t>(a) * n_ + b]; }
    Elem mul(Elem a, Elem b) const { return mul_[static_cast<std::size_t>(a) * n_ + b]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    const std::vector<Elem>& add_table() const { return add_; }
    const std::vector<Elem>& mul_table() const { return mul_; }

private:
    std::string name_;
    int n_;
    std::vector<Elem> add_, mul_;
    Elem zero_, one_;
    std::vector<Elem> neg_;
    bool commutative_;
};

/// Exhaustively checks every ring axiom on the tables: associativity and
/// commutativity of addition, the zero law, additive inverses, associativity
/// of multiplication, the unit laws, and both distributive laws.  Cubic in
/// the ring size.  Throws AxiomViolation naming the first failing axiom and
/// a witness triple.
inline void verify_ring_axioms(const Ring& R) {
    const int n = R.size();
    auto witness = [](const char* law, Elem a, Elem b, Elem c) {
        return std::string(law) + " fails at (" + std::to_string(a) + "," +
               std::to_string(b) + "," + std::to_string(c) + ")";
    };
    for (Elem a = 0; a < n; ++a) {
        if (R.add(a, R.zero()) != a || R.add(R.zero(), a) != a)
            throw AxiomViolation(witness("additive identity", a, R.zero(), 0));
        if (R.mul(a, R.one()) != a || R.mul(R.one(), a) != a)
            throw AxiomViolation(witness("multiplicative identity", a, R.one(), 0));
    }
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b)
            if (R.add(a, b) != R.add(b, a))
                throw AxiomViolation(witness("addition commutativity", a, b, 0));
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b) {
            // Hoist the two inner table rows; the innermost loop is the hot path.
            const Elem ab_add = R.add(a, b);
            const Elem ab_mul = R.mul(a, b);
            for (Elem c = 0; c < n; ++c) {
                if (R.add(ab_add, c) != R.add(a, R.add(b, c)))
                    throw AxiomViolation(witness("addition associativity", a, b, c));
                if (R.mul(ab_mul, c) != R.mul(a, R.mul(b, c)))
                    throw AxiomViolation(witness("multiplication associativity", a, b, c));
                if (R.mul(a, R.add(b, c)) != R.add(ab_mul, R.mul(a, c)))
                    throw AxiomViolation(witness("left distributivity", a, b, c));
                if (R.mul(R.add(a, b), c) != R.add(R.mul(a, c), R.mul(b, c)))
                    throw AxiomViolation(witness("right distributivity", a, b, c));
            }
        }
}

/// Builds a ring from explicit tables and verifies all axioms exhaustively.
inline Ring make_ring_from_tables(std::string name, int size, std::vector<Elem> add_table,
                                  std::vector<Elem> mul_table, Elem zero, Elem one,
                                  const RingCaps& caps = {}) {
    if (size > caps.size_cap)
        throw CapError("ring size " + std::to_string(size) + " exceeds cap " +
                       std::to_string(caps.size_cap));
    Ring R(std::move(name), size, std::move(add_table), std::move(mul_table), zero, one);
    verify_ring_axioms(R);
    return R;
}

// ---------------------------------------------------------------------------
// small Galois fields (used by the matrix presets)
// ---------------------------------------------------------------------------

/// Addition/multiplication tables for GF(q).  Prime q uses arithmetic mod q;
/// the prime-power orders 4, 8 and 9 use a fixed irreducible polynomial, with
/// elements encoded as base-p digit strings (least significant digit first).
struct GfTables {
    int q = 0;
    std::vector<Elem> add, mul;
};

inline bool is_prime(int v) {
    if (v < 2) return false;
    for (int d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

inline GfTables gf_tables(int q) {
    GfTables t;
    t.q = q;
    t.add.assign(static_cast<std::size_t>(q) * q, 0);
    t.mul.assign(static_cast<std::size_t>(q) * q, 0);
    if (is_prime(q)) {
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) {
                t.add[static_cast<std::size_t>(a) * q + b] = (a + b) % q;
                t.mul[static_cast<std::size_t>(a) * q + b] = (a * b) % q;
            }
        return t;
    }
    int p = 0, e = 0;
    for (int cand = 2; cand <= q; ++cand) {
        if (!is_prime(cand)) continue;
        int power = cand, deg = 1;
        while (power < q) power *= cand, ++deg;
        if (power == q) {
            p = cand;
            e = deg;
            break;
        }
    }
    if (p == 0) throw InputError("q = " + std::to_string(q) + " is not a prime power");
    // Irreducible polynomials, coefficients of x^e expressed via lower terms.
    std::vector<int> red;  // red[i] = coefficient of x^i in x^e (mod p)
    if (q == 4) red = {1, 1};        // x^2 = x + 1
    else if (q == 8) red = {1, 1, 0};  // x^3 = x + 1
    else if (q == 9) red = {2, 0};     // x^2 = -1 = 2
    else
        throw CapError("GF(" + std::to_string(q) + ") is not tabulated");
    auto digits = [&](int v) {
        std::vector<int> d(e);
        for (int i = 0; i < e; ++i) d[i] = v % p, v /= p;
        return d;
    };
    auto encode = [&](const std::vector<int>& d) {
        int v = 0;
        for (int i = e - 1; i >= 0; --i) v = v * p + d[i] % p;
        return v;
    };
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
            auto da = digits(a), db = digits(b);
            std::vector<int> s(e);
            for (int i = 0; i < e; ++i) s[i] = (da[i] + db[i]) % p;
            t.add[static_cast<std::size_t>(a) * q + b] = encode(s);
            std::vector<int> prod(2 * e - 1, 0);
            for (int i = 0; i < e; ++i)
                for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            for (int d = 2 * e - 2; d >= e; --d) {
                const int coef = prod[d];
                if (coef == 0) continue;
                prod[d] = 0;
                for (int i = 0; i < e; ++i)
                    prod[d - e + i] = (prod[d - e + i] + coef * red[i]) % p;
            }
            prod.resize(e);
            t.mul[static_cast<std::size_t>(a) * q + b] = encode(prod);
        }
    return t;
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

/// Z/n with the natural encoding 0..n-1.
inline Ring preset_modular(int n, const RingCaps& caps = {}) {
    if (n < 1) throw InputError("modular preset needs n >= 1");
    std::vector<Elem> add(static_cast<std::size_t>(n) * n), mul(static_cast<std::size_t>(n) * n);
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b) {
            add[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
            mul[static_cast<std::size_t>(a) * n + b] = (a * b) % n;
        }
    return make_ring_from_tables("modular-" + std::to_string(n), n, std::move(add),
                                 std::move(mul), 0, n == 1 ? 0 : 1, caps);
}

namespace detail {

// Shared digit machinery for the matrix presets.  `positions` lists the
// stored matrix entries; element indices are mixed-radix base-q numbers with
// the FIRST listed position as the least significant digit.  For the
// triangular preset over GF(2) this gives the documented encoding
// a + 2b + 4c for ((a,b),(0,c)).
struct MatrixEncoding {
    int n = 0, q = 0;
    std::vector<std::pair<int, int>> positions;  // (row, col), 0-based
    std::vector<int> pos_index;                  // row * n + col -> digit slot or -1

    long long size() const {
        long long s = 1;
        for (std::size_t i = 0; i < positions.size(); ++i) s *= q;
        return s;
    }
    std::vector<int> digits(Elem v) const {
        std::vector<int> d(positions.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            d[i] = static_cast<int>(v % q);
            v /= q;
        }
        return d;
    }
    Elem encode(const std::vector<int>& d) const {
        long long v = 0;
        for (std::size_t i = d.size(); i-- > 0;) v = v * q + d[i];
        return static_cast<Elem>(v);
    }
    int slot(int r, int c) const { return pos_index[r * n + c]; }
};

inline Ring build_matrix_preset(const std::string& name, MatrixEncoding enc,
                                const GfTables& gf, const RingCaps& caps) {
    const long long sz = enc.size();
    if (sz > caps.size_cap)
        throw CapError(name + " has " + std::to_string(sz) + " elements, cap is " +
                       std::to_string(caps.size_cap));
    const int n = static_cast<int>(sz);
    const int q = enc.q;
    std::vector<Elem> add(static_cast<std::size_t>(n) * n), mul(static_cast<std::size_t>(n) * n);
    std::vector<std::vector<int>> dig(n);
    for (Elem v = 0; v < n; ++v) dig[v] = enc.digits(v);
    auto gf_add = [&](int a, int b) { return gf.add[static_cast<std::size_t>(a) * q + b]; };
    auto gf_mul = [&](int a, int b) { return gf.mul[static_cast<std::size_t>(a) * q + b]; };
    std::vector<int> out(enc.positions.size());
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b) {
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = gf_add(dig[a][i], dig[b][i]);
            add[static_cast<std::size_t>(a) * n + b] = enc.encode(out);
            for (std::size_t i = 0; i < out.size(); ++i) {
                const auto [r, c] = enc.positions[i];
                int s = 0;
                for (int l = 0; l < enc.n; ++l) {
                    const int sa = enc.slot(r, l), sb = enc.slot(l, c);
                    if (sa < 0 || sb < 0) continue;
                    s = gf_add(s, gf_mul(dig[a][sa], dig[b][sb]));
                }
                out[i] = s;
            }
            mul[static_cast<std::size_t>(a) * n + b] = enc.encode(out);
        }
    std::vector<int> zero_d(enc.positions.size(), 0), one_d(enc.positions.size(), 0);
    for (std::size_t i = 0; i < enc.positions.size(); ++i)
        if (enc.positions[i].first == enc.positions[i].second) one_d[i] = 1;
    return make_ring_from_tables(name, n, std::move(add), std::move(mul), enc.encode(zero_d),
                                 enc.encode(one_d), caps);
}

inline MatrixEncoding matrix_encoding(int n, int q, bool upper_only) {
    MatrixEncoding enc;
    enc.n = n;
    enc.q = q;
    enc.pos_index.assign(static_cast<std::size_t>(n) * n, -1);
    for (int r = 0; r < n; ++r)
        for (int c = upper_only ? r : 0; c < n; ++c) {
            enc.pos_index[r * n + c] = static_cast<int>(enc.positions.size());
            enc.positions.emplace_back(r, c);
        }
    return enc;
}

}  // namespace detail

/// Upper triangular n-by-n matrices over GF(q).  Entries are stored row by
/// row along the upper triangle, the first stored position being the least
/// significant base-q digit of the element index.
inline Ring preset_triangular(int n, int q, const RingCaps& caps = {}) {
    if (n < 1) throw InputError("triangular preset needs n >= 1");
    if (q > caps.q_cap)
        throw CapError("q = " + std::to_string(q) + " exceeds cap " + std::to_string(caps.q_cap));
    return detail::build_matrix_preset(
        "triangular-" + std::to_string(n) + "-" + std::to_string(q),
        detail::matrix_encoding(n, q, /*upper_only=*/true), gf_tables(q), caps);
}

/// Full n-by-n matrix ring over GF(q), row-major digit encoding.
inline Ring preset_full_matrix(int n, int q, const RingCaps& caps = {}) {
    if (n < 1) throw InputError("full-matrix preset needs n >= 1");
    if (q > caps.q_cap)
        throw CapError("q = " + std::to_string(q) + " exceeds cap " + std::to_string(caps.q_cap));
    return detail::build_matrix_preset(
        "full-matrix-" + std::to_string(n) + "-" + std::to_string(q),
        detail::matrix_encoding(n, q, /*upper_only=*/false), gf_tables(q), caps);
}

/// Direct product of rings; the first factor is the least significant
/// mixed-radix digit of the element index.
inline Ring preset_product(const std::vector<Ring>& factors, const RingCaps& caps = {}) {
    if (factors.empty()) throw InputError("product preset needs at least one factor");
    long long sz = 1;
    for (const Ring& f : factors) {
        sz *= f.size();
        if (sz > caps.size_cap)
            throw CapError("product size exceeds cap " + std::to_string(caps.size_cap));
    }
    const int n = static_cast<int>(sz);
    auto split = [&](Elem v) {
        std::vector<Elem> parts(factors.size());
        for (std::size_t i = 0; i < factors.size(); ++i) {
            parts[i] = static_cast<Elem>(v % factors[i].size());
            v /= factors[i].size();
        }
        return parts;
    };
    auto join = [&](const std::vector<Elem>& parts) {
        long long v = 0;
        for (std::size_t i = parts.size(); i-- > 0;) v = v * factors[i].size() + parts[i];
        return static_cast<Elem>(v);
    };
    std::vector<Elem> add(static_cast<std::size_t>(n) * n), mul(static_cast<std::size_t>(n) * n);
    std::vector<Elem> out(factors.size());
    for (Elem a = 0; a < n; ++a) {
        const auto pa = split(a);
        for (Elem b = 0; b < n; ++b) {
            const auto pb = split(b);
            for (std::size_t i = 0; i < factors.size(); ++i) out[i] = factors[i].add(pa[i], pb[i]);
            add[static_cast<std::size_t>(a) * n + b] = join(out);
            for (std::size_t i = 0; i < factors.size(); ++i) out[i] = factors[i].mul(pa[i], pb[i]);
            mul[static_cast<std::size_t>(a) * n + b] = join(out);
        }
    }
    std::string name = "product(";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) name += ",";
        name += factors[i].name();
    }
    name += ")";
    std::vector<Elem> zeros(factors.size()), ones(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        zeros[i] = factors[i].zero();
        ones[i] = factors[i].one();
    }
    return make_ring_from_tables(std::move(name), n, std::move(add), std::move(mul), join(zeros),
                                 join(ones), caps);
}

// ---------------------------------------------------------------------------
// derived ring data
// ---------------------------------------------------------------------------

/// All two-sided units, ascending.
inline std::vector<Elem> units(const Ring& R) {
    std::vector<Elem> us;
    for (Elem u = 0; u < R.size(); ++u)
        for (Elem v = 0; v < R.size(); ++v)
            if (R.mul(u, v) == R.one() && R.mul(v, u) == R.one()) {
                us.push_back(u);
                break;
            }
    return us;
}

inline bool is_unit(const Ring& R, Elem u) {
    for (Elem v = 0; v < R.size(); ++v)
        if (R.mul(u, v) == R.one() && R.mul(v, u) == R.one()) return true;
    return false;
}

/// The opposite ring: same carrier and addition, reversed multiplication.
inline Ring opposite_ring(const Ring& R) {
    const int n = R.size();
    std::vector<Elem> mul(static_cast<std::size_t>(n) * n);
    for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b) mul[static_cast<std::size_t>(a) * n + b] = R.mul(b, a);
    std::string name = R.name();
    if (name.size() > 3 && name.substr(0, 3) == "op(" && name.back() == ')')
        name = name.substr(3, name.size() - 4);
    else
        name = "op(" + name + ")";
    return Ring(std::move(name), n, R.add_table(), std::move(mul), R.zero(), R.one());
}

// ---------------------------------------------------------------------------
// matrices over a tabulated ring
// ---------------------------------------------------------------------------

/// Dense row-major matrix of ring elements.  Plain data; all arithmetic goes
/// through the free functions below, which take the ring explicitly.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<Elem> a;

    Mat() = default;
    Mat(int r, int c, Elem fill = 0) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {
        if (r < 0 || c < 0) throw InputError("matrix dimensions must be non-negative");
    }
    Elem& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    Elem at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    bool operator==(const Mat& o) const = default;
};

inline Mat mat_zero(const Ring& R, int r, int c) { return Mat(r, c, R.zero()); }

inline Mat mat_identity(const Ring& R, int n) {
    Mat m(n, n, R.zero());
    for (int i = 0; i < n; ++i) m.at(i, i) = R.one();
    return m;
}

inline Mat mat_add(const Ring& R, const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw InputError("matrix addition shape mismatch");
    Mat C(A.rows, A.cols, R.zero());
    for (std::size_t i = 0; i < A.a.size(); ++i) C.a[i] = R.add(A.a[i], B.a[i]);
    return C;
}

inline Mat mat_sub(const Ring& R, const Mat& A, const Mat& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw InputError("matrix subtraction shape mismatch");
    Mat C(A.rows, A.cols, R.zero());
    for (std::size_t i = 0; i < A.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
    return C;
}

inline Mat mat_mul(const Ring& R, const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw InputError("matrix product shape mismatch");
    Mat C(A.rows, B.cols, R.zero());
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const Elem aik = A.at(i, k);
            if (aik == R.zero()) continue;
            for (int j = 0; j < B.cols; ++j)
                C.at(i, j) = R.add(C.at(i, j), R.mul(aik, B.at(k, j)));
        }
    return C;
}

inline bool mat_is_zero(const Ring& R, const Mat& A) {
    return std::all_of(A.a.begin(), A.a.end(), [&](Elem v) { return v == R.zero(); });
}

/// `copies` diagonal copies of A, zero elsewhere.
inline Mat block_diag(const Ring& R, const Mat& A, int copies) {
    Mat C(A.rows * copies, A.cols * copies, R.zero());
    for (int k = 0; k < copies; ++k)
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) C.at(k * A.rows + i, k * A.cols + j) = A.at(i, j);
    return C;
}

/// Stacks A on top of B (shared column count).
inline Mat mat_vstack(const Mat& A, const Mat& B) {
    if (A.cols != B.cols) throw InputError("vstack column mismatch");
    Mat C(A.rows + B.rows, A.cols);
    std::copy(A.a.begin(), A.a.end(), C.a.begin());
    std::copy(B.a.begin(), B.a.end(), C.a.begin() + A.a.size());
    return C;
}

/// Places A and B side by side (shared row count).
inline Mat mat_hstack(const Mat& A, const Mat& B) {
    if (A.rows != B.rows) throw InputError("hstack row mismatch");
    Mat C(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
    }
    return C;
}

inline Mat submat(const Mat& A, int r0, int c0, int rows, int cols) {
    if (r0 < 0 || c0 < 0 || r0 + rows > A.rows || c0 + cols > A.cols)
        throw InputError("submatrix out of range");
    Mat C(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) C.at(i, j) = A.at(r0 + i, c0 + j);
    return C;
}

/// Column vector from explicit entries.
inline Mat mat_col(const std::vector<Elem>& entries) {
    Mat C(static_cast<int>(entries.size()), 1);
    C.a = entries;
    return C;
}

}  // namespace trideal
