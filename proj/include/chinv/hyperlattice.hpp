#pragma once

// Hyperinvariant subspaces W(r) parametrized by admissible tuples r, the
// hyperinvariant frame (X_H, X^h) of a characteristic subspace, and the
// duality r -> t - r.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "chinv/commutant.hpp"
#include "chinv/errors.hpp"
#include "chinv/gf2.hpp"
#include "chinv/modspace.hpp"

namespace chinv {

/// r with 0 <= r_1 <= ... <= r_m and 0 <= t_1 - r_1 <= ... <= t_m - r_m.
inline bool is_admissible(const SpaceSpec& s, const std::vector<int>& r) {
    if (r.size() != s.m()) throw DimensionError("tuple length does not match the number of blocks");
    for (std::size_t j = 0; j < r.size(); ++j) {
        int t = static_cast<int>(s.t(j));
        if (r[j] < 0 || r[j] > t) return false;
        if (j > 0) {
            int tp = static_cast<int>(s.t(j - 1));
            if (r[j] < r[j - 1]) return false;
            if (t - r[j] < tp - r[j - 1]) return false;
        }
    }
    return true;
}

/// An admissible tuple; validated on construction.
class RTuple {
public:
    RTuple(const SpaceSpec& s, std::vector<int> r) : r_(std::move(r)) {
        if (!is_admissible(s, r_)) throw HypothesisError({"tuple " + to_string() + " is not admissible"});
    }

    const std::vector<int>& values() const noexcept { return r_; }
    std::size_t size() const noexcept { return r_.size(); }
    int operator[](std::size_t j) const { return r_.at(j); }

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t j = 0; j < r_.size(); ++j) out += (j ? "," : "") + std::to_string(r_[j]);
        return out + ")";
    }

    friend bool operator==(const RTuple&, const RTuple&) = default;
    friend auto operator<=>(const RTuple& a, const RTuple& b) { return a.r_ <=> b.r_; }

private:
    std::vector<int> r_;
};

/// Componentwise order: a ≼ b iff a_j <= b_j for all j (equivalently W(a) ⊇ W(b)).
inline bool precedes(const RTuple& a, const RTuple& b) {
    if (a.size() != b.size()) throw DimensionError("tuple lengths differ");
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] > b[j]) return false;
    return true;
}

/// W(r) = f^{r_1}<u_1> ⊕ ... ⊕ f^{r_m}<u_m>, read off the basis.
inline Subspace w_subspace_direct(const SpaceSpec& s, const RTuple& r) {
    std::vector<Vec2> rows;
    for (std::size_t j = 0; j < s.m(); ++j)
        for (std::size_t i = static_cast<std::size_t>(r[j]); i < s.t(j); ++i) rows.push_back(s.basis_vector(j, i));
    return Subspace::span(s.n(), rows);
}

/// W(r) = sum_j f^{r_j}V ∩ V[f^{t_j - r_j}], built from kernels and images only.
inline Subspace w_subspace_kernel_image(const SpaceSpec& s, const RTuple& r) {
    Subspace acc = Subspace::zero(s.n());
    for (std::size_t j = 0; j < s.m(); ++j) {
        std::size_t rj = static_cast<std::size_t>(r[j]);
        acc = subspace_sum(acc, subspace_intersect(image_power(s, rj), kernel_power(s, s.t(j) - rj)));
    }
    return acc;
}

/// W(r); both descriptions are computed and must agree.
inline Subspace w_subspace(const SpaceSpec& s, const RTuple& r) {
    Subspace a = w_subspace_direct(s, r);
    if (a != w_subspace_kernel_image(s, r)) throw std::logic_error("W(r) forms disagree for " + r.to_string());
    return a;
}

/// All admissible tuples in lexicographic order.
inline std::vector<RTuple> enumerate_lattice(const SpaceSpec& s) {
    std::vector<RTuple> out;
    std::vector<int> cur(s.m());
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (j == s.m()) {
            out.emplace_back(s, cur);
            return;
        }
        int t = static_cast<int>(s.t(j));
        int lo = j ? cur[j - 1] : 0;
        int hi = t;
        if (j) hi = std::min(hi, cur[j - 1] + t - static_cast<int>(s.t(j - 1)));
        for (int v = lo; v <= hi; ++v) {
            cur[j] = v;
            rec(j + 1);
        }
    };
    rec(0);
    return out;
}

/// (componentwise min, componentwise max); W(min) = W(a) + W(b) and W(max) = W(a) ∩ W(b).
inline std::pair<RTuple, RTuple> tuple_meet_join(const SpaceSpec& s, const RTuple& a, const RTuple& b) {
    if (a.size() != b.size() || a.size() != s.m()) throw DimensionError("tuple lengths differ");
    std::vector<int> lo(a.size()), hi(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        lo[j] = std::min(a[j], b[j]);
        hi[j] = std::max(a[j], b[j]);
    }
    return {RTuple(s, lo), RTuple(s, hi)};
}

/// Lambda on tuples: r -> t - r. An involution on admissible tuples.
inline RTuple duality(const SpaceSpec& s, const RTuple& r) {
    if (r.size() != s.m()) throw DimensionError("tuple length does not match the number of blocks");
    std::vector<int> d(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) d[j] = static_cast<int>(s.t(j)) - r[j];
    return RTuple(s, d);
}

/// Covering pairs (a, b) of ≼ among the given tuples, as index pairs:
/// a ≺ b with nothing strictly between. W(a) covers W(b) from above.
inline std::vector<std::pair<std::size_t, std::size_t>> covering_pairs(const std::vector<RTuple>& lattice) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < lattice.size(); ++a)
        for (std::size_t b = 0; b < lattice.size(); ++b) {
            if (a == b || !precedes(lattice[a], lattice[b])) continue;
            bool cover = true;
            for (std::size_t c = 0; c < lattice.size() && cover; ++c)
                if (c != a && c != b && precedes(lattice[a], lattice[c]) && precedes(lattice[c], lattice[b]))
                    cover = false;
            if (cover) out.emplace_back(a, b);
        }
    return out;
}

/// The hyperinvariant frame of a characteristic subspace X.
struct Frame {
    Subspace kernel;  ///< X_H = ⊕_j (X ∩ <u_j>) = W(r)
    Subspace hull;    ///< X^h = Σ_j π_j X = W(mu)
    RTuple r;
    RTuple mu;
    std::vector<std::size_t> J;  ///< indices with X ∩ <u_j> ⊊ π_j X
};

/// Frame of X without checking that X is characteristic.
inline Frame frame_trusted(const SpaceSpec& s, const Subspace& x) {
    if (x.ambient_dim() != s.n()) throw DimensionError("subspace does not live in V");
    std::vector<int> r(s.m()), mu(s.m());
    Subspace kernel = Subspace::zero(s.n()), hull = Subspace::zero(s.n());
    std::vector<std::size_t> J;
    for (std::size_t j = 0; j < s.m(); ++j) {
        Subspace block = cyclic_span(s, s.generator(j));
        Subspace meet = subspace_intersect(x, block);
        Subspace proj = project_subspace(s, j, x);
        r[j] = static_cast<int>(s.t(j) - meet.dim());
        mu[j] = static_cast<int>(s.t(j) - proj.dim());
        kernel = subspace_sum(kernel, meet);
        hull = subspace_sum(hull, proj);
        if (meet != proj) J.push_back(j);
    }
    return Frame{kernel, hull, RTuple(s, r), RTuple(s, mu), J};
}

/// Frame of X; rejects X unless the oracle confirms it is characteristic.
inline Frame frame(const Commutant& c, const Subspace& x) {
    if (!c.is_characteristic(x)) throw HypothesisError({"X is not characteristic"});
    return frame_trusted(c.space(), x);
}

/// A violated necessary condition on the frame of a characteristic non-hyperinvariant subspace.
struct Violation {
    enum class Kind {
        JSize,           ///< |J| >= 2
        JUnrepeated,     ///< J ⊆ I_u
        TupleRelation,   ///< r = mu + Σ_{j∈J} e_j
        MuIncreasing,    ///< p ∈ J, p < q  =>  mu_p < mu_q
        CodimPositive,   ///< q ∈ J  =>  0 < t_q - mu_q
        CodimIncreasing, ///< q ∈ J, p < q  =>  t_p - mu_p < t_q - mu_q
        Gap,             ///< p, q ∈ J, p < q  =>  t_p + 1 < t_q
    };
    Kind kind;
    std::size_t p = 0;
    std::size_t q = 0;

    std::string message() const {
        auto pq = [&] { return " (p=" + std::to_string(p + 1) + ", q=" + std::to_string(q + 1) + ")"; };
        switch (kind) {
            case Kind::JSize: return "|J| >= 2 violated";
            case Kind::JUnrepeated: return "J subset of I_u violated (j=" + std::to_string(p + 1) + ")";
            case Kind::TupleRelation: return "r = mu + sum e_J violated (j=" + std::to_string(p + 1) + ")";
            case Kind::MuIncreasing: return "mu_p < mu_q violated" + pq();
            case Kind::CodimPositive: return "0 < t_q - mu_q violated (q=" + std::to_string(q + 1) + ")";
            case Kind::CodimIncreasing: return "t_p - mu_p < t_q - mu_q violated" + pq();
            case Kind::Gap: return "t_p + 1 < t_q violated" + pq();
        }
        return "unknown";
    }

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks the conditions every frame of a characteristic non-hyperinvariant
/// subspace satisfies; an empty result means none is violated.
inline std::vector<Violation> necessary_conditions(const SpaceSpec& s, const Frame& fr) {
    using K = Violation::Kind;
    std::vector<Violation> out;
    const auto& J = fr.J;
    auto inJ = [&](std::size_t j) { return std::find(J.begin(), J.end(), j) != J.end(); };
    auto t = [&](std::size_t j) { return static_cast<int>(s.t(j)); };
    if (J.size() < 2) out.push_back({K::JSize});
    for (auto j : J)
        if (!is_unrepeated(s, j)) out.push_back({K::JUnrepeated, j, j});
    for (std::size_t j = 0; j < s.m(); ++j)
        if (fr.r[j] != fr.mu[j] + (inJ(j) ? 1 : 0)) out.push_back({K::TupleRelation, j, j});
    for (auto p : J)
        for (std::size_t q = p + 1; q < s.m(); ++q)
            if (!(fr.mu[p] < fr.mu[q])) out.push_back({K::MuIncreasing, p, q});
    for (auto q : J) {
        if (!(0 < t(q) - fr.mu[q])) out.push_back({K::CodimPositive, q, q});
        for (std::size_t p = 0; p < q; ++p)
            if (!(t(p) - fr.mu[p] < t(q) - fr.mu[q])) out.push_back({K::CodimIncreasing, p, q});
    }
    for (std::size_t a = 0; a < J.size(); ++a)
        for (std::size_t b = a + 1; b < J.size(); ++b)
            if (!(t(J[a]) + 1 < t(J[b]))) out.push_back({K::Gap, J[a], J[b]});
    return out;
}

}  // namespace chinv
