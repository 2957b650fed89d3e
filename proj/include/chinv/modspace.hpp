#pragma once

// The pair (V, f): a GF(2) space with a nilpotent operator given by its
// Jordan block sizes t_1 <= ... <= t_m.
//
// Basis order is block-major and power-ascending: block j occupies positions
// offset(j) .. offset(j) + t_j - 1, and position offset(j) + i holds f^i u_j.
// Blocks are indexed from 0 in the API; the textual vector syntax (u1, u2, ...)
// is 1-based.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chinv/errors.hpp"
#include "chinv/gf2.hpp"

namespace chinv {

class SpaceSpec {
public:
    /// Builds (V, f) from exponents. Unsorted input is sorted and flagged.
    static SpaceSpec build(std::vector<int> t) {
        if (t.empty()) throw HypothesisError({"Segre characteristic must be nonempty"});
        for (int e : t)
            if (e <= 0) throw HypothesisError({"exponents must be positive"});
        SpaceSpec s;
        s.resorted_ = !std::is_sorted(t.begin(), t.end());
        std::sort(t.begin(), t.end());
        std::size_t off = 0;
        for (int e : t) {
            s.t_.push_back(static_cast<std::size_t>(e));
            s.offset_.push_back(off);
            off += static_cast<std::size_t>(e);
        }
        s.n_ = off;
        if (s.n_ > kMaxDim) throw ResourceError("ambient dimension exceeds " + std::to_string(kMaxDim));
        s.shift_mask_ = Vec2(s.n_);
        for (std::size_t j = 0; j < s.t_.size(); ++j) {
            Vec2 mask(s.n_);
            for (std::size_t i = 0; i < s.t_[j]; ++i) {
                mask.set(s.offset_[j] + i);
                if (i > 0) s.shift_mask_.set(s.offset_[j] + i);
            }
            s.block_mask_.push_back(mask);
        }
        return s;
    }

    /// True when build() had to sort the exponents.
    bool was_resorted() const noexcept { return resorted_; }

    std::size_t n() const noexcept { return n_; }
    std::size_t m() const noexcept { return t_.size(); }
    const std::vector<std::size_t>& t() const noexcept { return t_; }
    std::size_t t(std::size_t j) const { return t_.at(j); }
    std::size_t offset(std::size_t j) const { return offset_.at(j); }

    std::size_t position(std::size_t j, std::size_t i) const {
        if (j >= m() || i >= t_[j]) throw DimensionError("basis vector f^i u_j out of range");
        return offset_[j] + i;
    }

    /// Inverse of position(): the (block, power) pair of a basis position.
    std::pair<std::size_t, std::size_t> locate(std::size_t p) const {
        auto it = std::upper_bound(offset_.begin(), offset_.end(), p);
        std::size_t j = static_cast<std::size_t>(it - offset_.begin()) - 1;
        return {j, p - offset_[j]};
    }

    Vec2 zero() const { return Vec2(n_); }
    Vec2 basis_vector(std::size_t j, std::size_t i) const { return Vec2::unit(n_, position(j, i)); }
    Vec2 generator(std::size_t j) const { return basis_vector(j, 0); }
    const Vec2& block_mask(std::size_t j) const { return block_mask_.at(j); }
    /// Positions that f writes into (every position except block starts).
    const Vec2& shift_mask() const noexcept { return shift_mask_; }

    void check(const Vec2& x) const {
        if (x.size() != n_) throw DimensionError("vector length does not match the space dimension");
    }

    friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) noexcept { return a.t_ == b.t_; }

private:
    std::vector<std::size_t> t_;
    std::vector<std::size_t> offset_;
    std::vector<Vec2> block_mask_;
    Vec2 shift_mask_;
    std::size_t n_ = 0;
    bool resorted_ = false;
};

/// Height of a vector; the zero vector has infinite height.
class Height {
public:
    static Height infinity() noexcept { return Height{}; }
    static Height finite(std::size_t q) noexcept {
        Height h;
        h.v_ = q;
        return h;
    }

    bool is_infinite() const noexcept { return !v_; }
    std::size_t value() const {
        if (!v_) throw std::logic_error("infinite height has no value");
        return *v_;
    }

    friend bool operator==(const Height& a, const Height& b) noexcept { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Height& a, const Height& b) noexcept {
        if (!a.v_ || !b.v_) return static_cast<bool>(b.v_) <=> static_cast<bool>(a.v_);
        return *a.v_ <=> *b.v_;
    }

    std::string to_string() const { return v_ ? std::to_string(*v_) : "inf"; }

private:
    std::optional<std::size_t> v_;
};

inline Vec2 apply_f(const SpaceSpec& s, const Vec2& x) {
    s.check(x);
    return x.shifted_up() & s.shift_mask();
}

inline Vec2 apply_f_power(const SpaceSpec& s, Vec2 x, std::size_t k) {
    s.check(x);
    for (std::size_t i = 0; i < k && !x.is_zero(); ++i) x = x.shifted_up() & s.shift_mask();
    return x;
}

/// Smallest l with f^l x = 0; zero for x = 0.
inline std::size_t exponent(const SpaceSpec& s, const Vec2& x) {
    s.check(x);
    std::size_t e = 0;
    x.for_each_set_bit([&](std::size_t p) {
        auto [j, i] = s.locate(p);
        e = std::max(e, s.t(j) - i);
    });
    return e;
}

/// Largest q with x in f^q V. Since f^q V is spanned by the f^i u_j with
/// i >= q, this is the lowest power occurring in x.
inline Height height(const SpaceSpec& s, const Vec2& x) {
    s.check(x);
    if (x.is_zero()) return Height::infinity();
    std::size_t q = s.n();
    x.for_each_set_bit([&](std::size_t p) { q = std::min(q, s.locate(p).second); });
    return Height::finite(q);
}

/// V[f^j] = Ker f^j.
inline Subspace kernel_power(const SpaceSpec& s, std::size_t j) {
    std::vector<Vec2> rows;
    for (std::size_t b = 0; b < s.m(); ++b)
        for (std::size_t i = 0; i < s.t(b); ++i)
            if (i + j >= s.t(b)) rows.push_back(s.basis_vector(b, i));
    return Subspace::span(s.n(), rows);
}

/// f^j V.
inline Subspace image_power(const SpaceSpec& s, std::size_t j) {
    std::vector<Vec2> rows;
    for (std::size_t b = 0; b < s.m(); ++b)
        for (std::size_t i = j; i < s.t(b); ++i) rows.push_back(s.basis_vector(b, i));
    return Subspace::span(s.n(), rows);
}

/// The f-cyclic span <x> = span{f^i x : i >= 0}.
inline Subspace cyclic_span(const SpaceSpec& s, const Vec2& x) {
    s.check(x);
    std::vector<Vec2> orbit;
    for (Vec2 y = x; !y.is_zero(); y = apply_f(s, y)) orbit.push_back(y);
    return Subspace::span(s.n(), orbit);
}

/// Smallest f-invariant subspace containing the given vectors.
inline Subspace invariant_span(const SpaceSpec& s, const std::vector<Vec2>& gens) {
    std::vector<Vec2> rows;
    for (const auto& g : gens) {
        s.check(g);
        for (Vec2 y = g; !y.is_zero(); y = apply_f(s, y)) rows.push_back(y);
    }
    return Subspace::span(s.n(), rows);
}

inline bool is_invariant(const SpaceSpec& s, const Subspace& x) {
    for (const auto& b : x.basis())
        if (!x.contains(apply_f(s, b))) return false;
    return true;
}

/// Block-j component of x (the projection pi_j onto <u_j> along the other blocks).
inline Vec2 projection(const SpaceSpec& s, std::size_t j, const Vec2& x) {
    s.check(x);
    if (j >= s.m()) throw DimensionError("projection index out of range");
    return x & s.block_mask(j);
}

inline Subspace project_subspace(const SpaceSpec& s, std::size_t j, const Subspace& x) {
    std::vector<Vec2> rows;
    for (const auto& b : x.basis()) rows.push_back(projection(s, j, b));
    return Subspace::span(s.n(), rows);
}

/// Indices whose exponent occurs exactly once.
inline std::vector<std::size_t> unrepeated_indices(const SpaceSpec& s) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < s.m(); ++j) {
        std::size_t c = static_cast<std::size_t>(std::count(s.t().begin(), s.t().end(), s.t(j)));
        if (c == 1) out.push_back(j);
    }
    return out;
}

inline bool is_unrepeated(const SpaceSpec& s, std::size_t j) {
    return std::count(s.t().begin(), s.t().end(), s.t(j)) == 1;
}

/// Some(t) iff x is a generator of exponent t, i.e. lambda^t is an elementary
/// divisor, f^t x = 0 and h(f^r x) = r for r = 0 .. t-1.
inline std::optional<std::size_t> is_generator(const SpaceSpec& s, const Vec2& x) {
    s.check(x);
    if (x.is_zero()) return std::nullopt;
    std::size_t t = exponent(s, x);
    if (std::find(s.t().begin(), s.t().end(), t) == s.t().end()) return std::nullopt;
    Vec2 y = x;
    for (std::size_t r = 0; r < t; ++r) {
        if (height(s, y) != Height::finite(r)) return std::nullopt;
        y = apply_f(s, y);
    }
    return t;
}

/// dim(V[f] ∩ f^q V) - dim(V[f] ∩ f^{q+1} V).
inline std::size_t ulm_invariant(const SpaceSpec& s, std::size_t q) {
    Subspace socle = kernel_power(s, 1);
    std::size_t a = subspace_intersect(socle, image_power(s, q)).dim();
    std::size_t b = subspace_intersect(socle, image_power(s, q + 1)).dim();
    return a - b;
}

/// {v : f v ∈ X}.
inline Subspace f_preimage(const SpaceSpec& s, const Subspace& x) {
    std::vector<Vec2> rows;
    for (const auto& w : x.perp().basis()) {
        Vec2 y = s.zero();
        w.for_each_set_bit([&](std::size_t p) {
            if (s.locate(p).second > 0) y.set(p - 1);
        });
        rows.push_back(y);
    }
    return Subspace::span(s.n(), rows).perp();
}

/// Every f-invariant subspace, grouped by dimension and sorted within each
/// dimension. Built level by level from the covers X + <v> with f v ∈ X.
inline std::vector<Subspace> enumerate_invariant_subspaces(const SpaceSpec& s, std::size_t max_count = 1000000) {
    std::vector<Subspace> out;
    std::vector<Subspace> level{Subspace::zero(s.n())};
    while (!level.empty()) {
        out.insert(out.end(), level.begin(), level.end());
        if (out.size() > max_count)
            throw ResourceError("more than " + std::to_string(max_count) + " invariant subspaces");
        std::unordered_set<Subspace, SubspaceHash> next;
        for (const auto& x : level) {
            Subspace p = f_preimage(s, x);
            IncrementalBasis acc(s.n());
            for (const auto& b : x.basis()) acc.insert(b);
            std::vector<Vec2> extra;
            for (const auto& b : p.basis())
                if (acc.insert(b)) extra.push_back(b);
            if (extra.size() >= 40) throw ResourceError("too many covers of an invariant subspace");
            for (std::uint64_t c = 1; c < (std::uint64_t{1} << extra.size()); ++c) {
                Vec2 v = s.zero();
                for (std::size_t k = 0; k < extra.size(); ++k)
                    if ((c >> k) & 1u) v ^= extra[k];
                std::vector<Vec2> rows = x.basis();
                rows.push_back(v);
                next.insert(Subspace::span(s.n(), rows));
            }
            if (next.size() > max_count)
                throw ResourceError("more than " + std::to_string(max_count) + " invariant subspaces");
        }
        level.assign(next.begin(), next.end());
        std::sort(level.begin(), level.end());
    }
    return out;
}

/// Parses sums of terms u<j>, f*u<j>, f^<i>*u<j> (and the literal 0).
inline Vec2 parse_vector(const SpaceSpec& s, std::string_view expr) {
    Vec2 v = s.zero();
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < expr.size() && std::isspace(static_cast<unsigned char>(expr[pos]))) ++pos;
    };
    auto number = [&]() -> std::size_t {
        skip();
        std::size_t start = pos;
        std::size_t val = 0;
        while (pos < expr.size() && std::isdigit(static_cast<unsigned char>(expr[pos]))) {
            val = val * 10 + static_cast<std::size_t>(expr[pos] - '0');
            if (val > 100000) throw ParseError("number too large", start);
            ++pos;
        }
        if (pos == start) throw ParseError("expected a number", start);
        return val;
    };
    auto expect = [&](char c) {
        skip();
        if (pos >= expr.size() || expr[pos] != c) throw ParseError(std::string("expected '") + c + "'", pos);
        ++pos;
    };

    bool any = false;
    while (true) {
        skip();
        if (pos >= expr.size()) {
            if (!any) throw ParseError("empty expression", pos);
            throw ParseError("expected a term after '+'", pos);
        }
        std::size_t term_start = pos;
        char c = expr[pos];
        if (c == '0') {
            ++pos;
        } else {
            std::size_t power = 0;
            if (c == 'f') {
                ++pos;
                skip();
                if (pos < expr.size() && expr[pos] == '^') {
                    ++pos;
                    power = number();
                } else {
                    power = 1;
                }
                expect('*');
                skip();
                c = pos < expr.size() ? expr[pos] : '\0';
            }
            if (c != 'u') throw ParseError("expected 'u'", pos);
            ++pos;
            std::size_t idx_pos = pos;
            std::size_t j = number();
            if (j == 0 || j > s.m()) throw ParseError("generator index out of range", idx_pos);
            if (power >= s.t(j - 1)) throw ParseError("power out of range", term_start);
            v.flip(s.position(j - 1, power));
        }
        any = true;
        skip();
        if (pos >= expr.size()) break;
        if (expr[pos] != '+') throw ParseError("expected '+'", pos);
        ++pos;
    }
    return v;
}

/// Inverse of parse_vector: "u1 + f*u2 + f^2*u3", or "0".
inline std::string format_vector(const SpaceSpec& s, const Vec2& x) {
    s.check(x);
    std::string out;
    x.for_each_set_bit([&](std::size_t p) {
        auto [j, i] = s.locate(p);
        if (!out.empty()) out += " + ";
        if (i == 1)
            out += "f*";
        else if (i > 1)
            out += "f^" + std::to_string(i) + "*";
        out += "u" + std::to_string(j + 1);
    });
    return out.empty() ? "0" : out;
}

}  // namespace chinv
