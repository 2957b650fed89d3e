#pragma once

// Bit-packed linear algebra over GF(2): vectors, matrices, echelon forms,
// subspaces and Gaussian binomial counting.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chinv/errors.hpp"

namespace chinv {

/// Largest ambient dimension a Vec2 can hold.
inline constexpr std::size_t kMaxDim = 256;

using BigInt = boost::multiprecision::cpp_int;

/// A vector of GF(2)^n packed into machine words. Bit i is the coefficient
/// of the i-th basis vector; textual form lists bit 0 first.
class Vec2 {
public:
    static constexpr std::size_t kWords = kMaxDim / 64;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Vec2() = default;

    explicit Vec2(std::size_t n) : n_(n) {
        if (n > kMaxDim) throw ResourceError("dimension " + std::to_string(n) + " exceeds " + std::to_string(kMaxDim));
    }

    static Vec2 unit(std::size_t n, std::size_t i) {
        Vec2 v(n);
        v.set(i);
        return v;
    }

    /// Parses a 0/1 string such as "1010" (bit 0 first).
    static Vec2 from_string(std::string_view bits) {
        Vec2 v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1')
                v.set(i);
            else if (bits[i] != '0')
                throw ParseError("expected 0 or 1", i);
        }
        return v;
    }

    std::size_t size() const noexcept { return n_; }

    bool get(std::size_t i) const noexcept { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) noexcept { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) noexcept { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void flip(std::size_t i) noexcept { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
    void assign(std::size_t i, bool b) noexcept { b ? set(i) : reset(i); }

    bool is_zero() const noexcept {
        for (auto w : w_)
            if (w) return false;
        return true;
    }

    std::size_t popcount() const noexcept {
        std::size_t c = 0;
        for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Index of the lowest set bit, or npos for the zero vector.
    std::size_t lowest() const noexcept {
        for (std::size_t k = 0; k < kWords; ++k)
            if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
        return npos;
    }

    /// Index of the highest set bit, or npos for the zero vector.
    std::size_t highest() const noexcept {
        for (std::size_t k = kWords; k-- > 0;)
            if (w_[k]) return k * 64 + 63 - static_cast<std::size_t>(std::countl_zero(w_[k]));
        return npos;
    }

    template <class Fn>
    void for_each_set_bit(Fn&& fn) const {
        for (std::size_t k = 0; k < kWords; ++k) {
            std::uint64_t w = w_[k];
            while (w) {
                fn(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }

    Vec2& operator^=(const Vec2& o) noexcept {
        for (std::size_t k = 0; k < kWords; ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    Vec2& operator&=(const Vec2& o) noexcept {
        for (std::size_t k = 0; k < kWords; ++k) w_[k] &= o.w_[k];
        return *this;
    }
    Vec2& operator|=(const Vec2& o) noexcept {
        for (std::size_t k = 0; k < kWords; ++k) w_[k] |= o.w_[k];
        return *this;
    }
    friend Vec2 operator^(Vec2 a, const Vec2& b) noexcept { return a ^= b; }
    friend Vec2 operator&(Vec2 a, const Vec2& b) noexcept { return a &= b; }
    friend Vec2 operator|(Vec2 a, const Vec2& b) noexcept { return a |= b; }
    /// Addition in GF(2)^n.
    friend Vec2 operator+(Vec2 a, const Vec2& b) noexcept { return a ^= b; }

    /// Shifts every coefficient one position up; bits at or above size() are dropped.
    Vec2 shifted_up() const noexcept {
        Vec2 r(*this);
        std::uint64_t carry = 0;
        for (std::size_t k = 0; k < kWords; ++k) {
            std::uint64_t next = r.w_[k] >> 63;
            r.w_[k] = (r.w_[k] << 1) | carry;
            carry = next;
        }
        r.clear_tail();
        return r;
    }

    /// Inner product over GF(2).
    friend bool dot(const Vec2& a, const Vec2& b) noexcept {
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < kWords; ++k) acc ^= a.w_[k] & b.w_[k];
        return std::popcount(acc) & 1;
    }

    friend bool operator==(const Vec2& a, const Vec2& b) noexcept { return a.n_ == b.n_ && a.w_ == b.w_; }

    /// Lexicographic order on the textual form (bit 0 most significant).
    friend std::strong_ordering operator<=>(const Vec2& a, const Vec2& b) noexcept {
        if (a.n_ != b.n_) return a.n_ <=> b.n_;
        Vec2 d = a ^ b;
        std::size_t p = d.lowest();
        if (p == npos) return std::strong_ordering::equal;
        return a.get(p) ? std::strong_ordering::greater : std::strong_ordering::less;
    }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    std::size_t hash() const noexcept {
        std::size_t h = n_ * 0x9e3779b97f4a7c15ull;
        for (auto w : w_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

    const std::array<std::uint64_t, kWords>& words() const noexcept { return w_; }

private:
    void clear_tail() noexcept {
        for (std::size_t k = 0; k < kWords; ++k) {
            std::size_t lo = k * 64;
            if (lo >= n_)
                w_[k] = 0;
            else if (n_ - lo < 64)
                w_[k] &= (std::uint64_t{1} << (n_ - lo)) - 1;
        }
    }

    std::array<std::uint64_t, kWords> w_{};
    std::size_t n_ = 0;
};

struct Vec2Hash {
    std::size_t operator()(const Vec2& v) const noexcept { return v.hash(); }
};

/// Dense GF(2) matrix stored as rows.
struct Mat2 {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Vec2> data;

    Mat2() = default;
    Mat2(std::size_t r, std::size_t c) : rows(r), cols(c), data(r, Vec2(c)) {}

    static Mat2 identity(std::size_t k) {
        Mat2 m(k, k);
        for (std::size_t i = 0; i < k; ++i) m.data[i].set(i);
        return m;
    }

    static Mat2 from_rows(std::size_t cols, std::vector<Vec2> rows) {
        Mat2 m;
        m.rows = rows.size();
        m.cols = cols;
        for (const auto& r : rows)
            if (r.size() != cols) throw DimensionError("row length does not match column count");
        m.data = std::move(rows);
        return m;
    }

    /// Rows given as 0/1 strings, e.g. {"100", "100", "100"}.
    static Mat2 from_strings(const std::vector<std::string>& rows) {
        if (rows.empty()) return Mat2{};
        std::vector<Vec2> r;
        r.reserve(rows.size());
        for (const auto& s : rows) r.push_back(Vec2::from_string(s));
        return from_rows(rows.front().size(), std::move(r));
    }

    bool at(std::size_t r, std::size_t c) const { return data[r].get(c); }
    void put(std::size_t r, std::size_t c, bool b) { data[r].assign(c, b); }

    Vec2 column(std::size_t c) const {
        Vec2 v(rows);
        for (std::size_t r = 0; r < rows; ++r)
            if (data[r].get(c)) v.set(r);
        return v;
    }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2 transpose(const Mat2& m) {
    Mat2 t(m.cols, m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) m.data[r].for_each_set_bit([&](std::size_t c) { t.data[c].set(r); });
    return t;
}

namespace detail {

// In-place reduction to row-reduced echelon form; returns the nonzero rows,
// sorted by pivot.
inline std::vector<Vec2> reduce_rows(std::vector<Vec2> rows) {
    std::vector<Vec2> basis;
    std::vector<std::size_t> pivots;
    for (auto& row : rows) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (row.get(pivots[i])) row ^= basis[i];
        if (row.is_zero()) continue;
        std::size_t p = row.lowest();
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i].get(p)) basis[i] ^= row;
        basis.push_back(row);
        pivots.push_back(p);
    }
    std::vector<std::size_t> order(basis.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots[a] < pivots[b]; });
    std::vector<Vec2> out;
    out.reserve(basis.size());
    for (auto i : order) out.push_back(basis[i]);
    return out;
}

}  // namespace detail

/// The unique row-reduced echelon form of m with zero rows dropped.
inline Mat2 rref(const Mat2& m) { return Mat2::from_rows(m.cols, detail::reduce_rows(m.data)); }

inline std::size_t rank(const Mat2& m) { return detail::reduce_rows(m.data).size(); }

inline bool is_rref(const Mat2& m) {
    std::size_t last = Vec2::npos;
    for (std::size_t r = 0; r < m.rows; ++r) {
        std::size_t p = m.data[r].lowest();
        if (p == Vec2::npos) return false;
        if (last != Vec2::npos && p <= last) return false;
        for (std::size_t q = 0; q < m.rows; ++q)
            if (q != r && m.data[q].get(p)) return false;
        last = p;
    }
    return true;
}

/// Column-reduced echelon form of a square matrix: leading ones move down as
/// columns move right, a leading one is alone in its row, zero columns last.
inline Mat2 col_reduced_echelon(const Mat2& m) {
    if (m.rows != m.cols) throw DimensionError("column-reduced echelon form needs a square matrix");
    Mat2 r = transpose(rref(transpose(m)));
    // Pad with zero columns back to k x k.
    Mat2 out(m.rows, m.cols);
    for (std::size_t i = 0; i < r.rows; ++i)
        for (std::size_t j = 0; j < r.cols; ++j) out.put(i, j, r.at(i, j));
    return out;
}

inline bool is_col_reduced_echelon(const Mat2& m) {
    if (m.rows != m.cols) return false;
    return col_reduced_echelon(m) == m;
}

/// Echelon basis that accepts vectors one at a time. Rows are kept reduced
/// against each other's pivots only, which is enough for membership tests.
class IncrementalBasis {
public:
    explicit IncrementalBasis(std::size_t n) : n_(n) {}

    std::size_t ambient_dim() const noexcept { return n_; }
    std::size_t dim() const noexcept { return rows_.size(); }
    const std::vector<Vec2>& rows() const noexcept { return rows_; }

    Vec2 reduce(Vec2 x) const noexcept {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (x.get(pivots_[i])) x ^= rows_[i];
        return x;
    }

    bool contains(const Vec2& x) const noexcept { return reduce(x).is_zero(); }

    /// Adds x; returns true when the span grew.
    bool insert(const Vec2& x) {
        if (x.size() != n_) throw DimensionError("vector length does not match basis ambient dimension");
        Vec2 r = reduce(x);
        if (r.is_zero()) return false;
        std::size_t p = r.lowest();
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (rows_[i].get(p)) rows_[i] ^= r;
        rows_.push_back(r);
        pivots_.push_back(p);
        return true;
    }

private:
    std::size_t n_;
    std::vector<Vec2> rows_;
    std::vector<std::size_t> pivots_;
};

/// A subspace of GF(2)^n held by its canonical row-reduced echelon basis.
/// Two subspaces are equal as sets iff their bases are identical.
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(std::size_t n) {
        Subspace s;
        s.n_ = n;
        return s;
    }

    static Subspace full(std::size_t n) {
        std::vector<Vec2> rows;
        for (std::size_t i = 0; i < n; ++i) rows.push_back(Vec2::unit(n, i));
        return span(n, rows);
    }

    static Subspace span(std::size_t n, const std::vector<Vec2>& vectors) {
        for (const auto& v : vectors)
            if (v.size() != n) throw DimensionError("vector length does not match ambient dimension");
        Subspace s;
        s.n_ = n;
        s.basis_ = detail::reduce_rows(vectors);
        s.index_pivots();
        return s;
    }

    static Subspace row_space(const Mat2& m) { return span(m.cols, m.data); }

    std::size_t ambient_dim() const noexcept { return n_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    bool is_zero() const noexcept { return basis_.empty(); }
    const std::vector<Vec2>& basis() const& noexcept { return basis_; }
    std::vector<Vec2> basis() && { return std::move(basis_); }
    const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }
    Mat2 matrix() const { return Mat2::from_rows(n_, basis_); }

    bool contains(const Vec2& x) const {
        if (x.size() != n_) throw DimensionError("vector length does not match ambient dimension");
        Vec2 r = x;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (r.get(pivots_[i])) r ^= basis_[i];
        return r.is_zero();
    }

    bool contains(const Subspace& o) const {
        check_same(o);
        for (const auto& b : o.basis_)
            if (!contains(b)) return false;
        return true;
    }

    /// Orthogonal complement under the standard inner product.
    Subspace perp() const {
        std::vector<bool> is_pivot(n_, false);
        for (auto p : pivots_) is_pivot[p] = true;
        std::vector<Vec2> rows;
        for (std::size_t c = 0; c < n_; ++c) {
            if (is_pivot[c]) continue;
            Vec2 v = Vec2::unit(n_, c);
            for (std::size_t i = 0; i < basis_.size(); ++i)
                if (basis_[i].get(c)) v.set(pivots_[i]);
            rows.push_back(v);
        }
        return span(n_, rows);
    }

    /// Coordinates of x (assumed to lie in the subspace) in terms of the basis rows.
    Vec2 coordinates(const Vec2& x) const {
        Vec2 c(basis_.size());
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (x.get(pivots_[i])) c.set(i);
        return c;
    }

    /// The vector whose coordinates in this basis are c.
    Vec2 combine(const Vec2& c) const {
        Vec2 v(n_);
        c.for_each_set_bit([&](std::size_t i) { v ^= basis_[i]; });
        return v;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) noexcept {
        return a.n_ == b.n_ && a.basis_ == b.basis_;
    }

    friend bool operator<(const Subspace& a, const Subspace& b) noexcept {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        if (a.basis_.size() != b.basis_.size()) return a.basis_.size() < b.basis_.size();
        return a.basis_ < b.basis_;
    }

    std::size_t hash() const noexcept {
        std::size_t h = n_;
        for (const auto& b : basis_) h ^= b.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

    void check_same(const Subspace& o) const {
        if (o.n_ != n_) throw DimensionError("subspaces live in ambient spaces of different dimension");
    }

private:
    void index_pivots() {
        pivots_.clear();
        for (const auto& b : basis_) pivots_.push_back(b.lowest());
    }

    std::size_t n_ = 0;
    std::vector<Vec2> basis_;
    std::vector<std::size_t> pivots_;
};

struct SubspaceHash {
    std::size_t operator()(const Subspace& s) const noexcept { return s.hash(); }
};

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    a.check_same(b);
    std::vector<Vec2> rows = a.basis();
    rows.insert(rows.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(a.ambient_dim(), rows);
}

inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
    a.check_same(b);
    return subspace_sum(a.perp(), b.perp()).perp();
}

inline bool membership(const Vec2& x, const Subspace& s) { return s.contains(x); }

/// Gaussian binomial coefficient [n choose k]_q by the product formula.
inline BigInt q_binomial(unsigned n, unsigned k, unsigned q) {
    if (k > n) return 0;
    if (q < 2) throw DimensionError("q must be a prime power");
    BigInt num = 1, den = 1, Q = q;
    for (unsigned i = 0; i < k; ++i) {
        num *= boost::multiprecision::pow(Q, n - i) - 1;
        den *= boost::multiprecision::pow(Q, i + 1) - 1;
    }
    BigInt quot = num / den;
    if (quot * den != num) throw std::logic_error("q-binomial division is not exact");
    return quot;
}

/// Total number of subspaces of GF(q)^n.
inline BigInt galois_number(unsigned n, unsigned q = 2) {
    BigInt s = 0;
    for (unsigned k = 0; k <= n; ++k) s += q_binomial(n, k, q);
    return s;
}

/// Walks every row-reduced echelon matrix with k columns: by rank, then by
/// pivot set (lexicographic), then by free entries read as a binary counter
/// whose most significant digit is the first free entry of the first row.
class RrefEnumerator {
public:
    explicit RrefEnumerator(std::size_t k, std::optional<std::size_t> only_rank = std::nullopt)
        : k_(k), only_(only_rank) {
        rank_ = only_ ? *only_ : 0;
        if (rank_ > k_) {
            done_ = true;
            return;
        }
        start_rank();
    }

    /// Next matrix (rows only; rank rows of length k), or nullopt when exhausted.
    std::optional<std::vector<Vec2>> next() {
        if (done_) return std::nullopt;
        std::vector<Vec2> rows(rank_, Vec2(k_));
        for (std::size_t r = 0; r < rank_; ++r) rows[r].set(pivots_[r]);
        for (std::size_t s = 0; s < slots_.size(); ++s)
            if ((counter_ >> (slots_.size() - 1 - s)) & 1u) rows[slots_[s].first].set(slots_[s].second);
        advance();
        return rows;
    }

private:
    void start_rank() {
        pivots_.resize(rank_);
        for (std::size_t i = 0; i < rank_; ++i) pivots_[i] = i;
        build_slots();
    }

    void build_slots() {
        slots_.clear();
        std::vector<bool> piv(k_, false);
        for (auto p : pivots_) piv[p] = true;
        for (std::size_t r = 0; r < rank_; ++r)
            for (std::size_t c = pivots_[r] + 1; c < k_; ++c)
                if (!piv[c]) slots_.emplace_back(r, c);
        if (slots_.size() >= 63) throw ResourceError("echelon enumeration too large");
        counter_ = 0;
    }

    bool next_combination() {
        std::size_t j = rank_;
        while (j > 0) {
            --j;
            if (pivots_[j] < k_ - rank_ + j) {
                ++pivots_[j];
                for (std::size_t i = j + 1; i < rank_; ++i) pivots_[i] = pivots_[i - 1] + 1;
                return true;
            }
        }
        return false;
    }

    void advance() {
        if (++counter_ < (std::uint64_t{1} << slots_.size())) return;
        if (next_combination()) {
            build_slots();
            return;
        }
        if (only_ || rank_ == k_) {
            done_ = true;
            return;
        }
        ++rank_;
        start_rank();
    }

    std::size_t k_;
    std::optional<std::size_t> only_;
    std::size_t rank_ = 0;
    std::vector<std::size_t> pivots_;
    std::vector<std::pair<std::size_t, std::size_t>> slots_;
    std::uint64_t counter_ = 0;
    bool done_ = false;
};

/// Streams every subspace of an ambient subspace exactly once. The order is
/// the RrefEnumerator order on coordinates relative to the ambient basis.
class SubspaceStream {
public:
    static constexpr std::size_t kDefaultCap = 12;

    SubspaceStream(Subspace ambient, std::optional<std::size_t> dim_filter = std::nullopt,
                   std::size_t cap = kDefaultCap)
        : ambient_(std::move(ambient)), rrefs_(check_cap(ambient_, cap), dim_filter) {}

    std::optional<Subspace> next() {
        auto rows = rrefs_.next();
        if (!rows) return std::nullopt;
        std::vector<Vec2> vecs;
        vecs.reserve(rows->size());
        for (const auto& c : *rows) vecs.push_back(ambient_.combine(c));
        return Subspace::span(ambient_.ambient_dim(), vecs);
    }

private:
    static std::size_t check_cap(const Subspace& a, std::size_t cap) {
        if (a.dim() > cap)
            throw ResourceError("subspace enumeration of a " + std::to_string(a.dim()) +
                                "-dimensional ambient exceeds cap " + std::to_string(cap));
        return a.dim();
    }

    Subspace ambient_;
    RrefEnumerator rrefs_;
};

inline SubspaceStream enumerate_subspaces(const Subspace& ambient, std::optional<std::size_t> dim_filter = std::nullopt,
                                          std::size_t cap = SubspaceStream::kDefaultCap) {
    return SubspaceStream(ambient, dim_filter, cap);
}

}  // namespace chinv
