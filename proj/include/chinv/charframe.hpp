#pragma once

// Intervals [W(r), W(mu)] of characteristic subspaces, their echelon-matrix
// classification, extensions of partial tuples, the Shoda criterion and
// constructors for characteristic non-hyperinvariant subspaces.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chinv/commutant.hpp"
#include "chinv/errors.hpp"
#include "chinv/gf2.hpp"
#include "chinv/hyperlattice.hpp"
#include "chinv/modspace.hpp"

namespace chinv {

/// Values mu_j prescribed on an increasing index set J.
struct PartialTuple {
    std::vector<std::size_t> J;
    std::vector<int> values;
};

/// Weak chains: 0 <= mu_{i_1} <= ... and 0 <= t_{i_1} - mu_{i_1} <= ...
/// Strict chains: 0 <= mu_{i_1} < ... and 0 < t_{i_1} - mu_{i_1} < ..., with
/// J ⊆ I_u and |J| >= 2.
enum class ChainMode { Weak, Strict };

inline std::vector<std::string> index_set_violations(const SpaceSpec& s, const std::vector<std::size_t>& J) {
    std::vector<std::string> bad;
    for (std::size_t a = 0; a < J.size(); ++a) {
        if (J[a] >= s.m()) bad.push_back("index " + std::to_string(J[a] + 1) + " out of range");
        if (a > 0 && J[a] <= J[a - 1]) bad.push_back("J must be strictly increasing");
    }
    return bad;
}

inline std::vector<std::string> partial_tuple_violations(const SpaceSpec& s, const PartialTuple& p, ChainMode mode) {
    std::vector<std::string> bad = index_set_violations(s, p.J);
    if (!bad.empty()) return bad;
    if (p.values.size() != p.J.size()) return {"one value per index of J is required"};
    if (p.J.empty()) return {"J must be nonempty"};
    const bool strict = mode == ChainMode::Strict;
    if (strict && p.J.size() < 2) bad.push_back("|J| >= 2");
    if (strict)
        for (auto j : p.J)
            if (!is_unrepeated(s, j)) bad.push_back("J subset of I_u (index " + std::to_string(j + 1) + ")");
    auto t = [&](std::size_t a) { return static_cast<int>(s.t(p.J[a])); };
    if (p.values[0] < 0) bad.push_back("mu chain: 0 <= mu_{i_1}");
    if (strict ? !(0 < t(0) - p.values[0]) : !(0 <= t(0) - p.values[0]))
        bad.push_back(strict ? "t - mu chain: 0 < t_{i_1} - mu_{i_1}" : "t - mu chain: 0 <= t_{i_1} - mu_{i_1}");
    for (std::size_t a = 1; a < p.J.size(); ++a) {
        int m0 = p.values[a - 1], m1 = p.values[a];
        if (strict ? !(m0 < m1) : !(m0 <= m1))
            bad.push_back(std::string("mu chain ") + (strict ? "strict" : "monotone") + " at position " +
                          std::to_string(a + 1));
        if (strict ? !(t(a - 1) - m0 < t(a) - m1) : !(t(a - 1) - m0 <= t(a) - m1))
            bad.push_back(std::string("t - mu chain ") + (strict ? "strict" : "monotone") + " at position " +
                          std::to_string(a + 1));
    }
    return bad;
}

inline void validate_partial(const SpaceSpec& s, const PartialTuple& p, ChainMode mode) {
    auto bad = partial_tuple_violations(s, p, mode);
    if (!bad.empty()) throw HypothesisError(bad);
}

/// The largest admissible tuple agreeing with p on J.
inline RTuple max_extension(const SpaceSpec& s, const PartialTuple& p, ChainMode mode = ChainMode::Weak) {
    validate_partial(s, p, mode);
    const auto& J = p.J;
    const auto& v = p.values;
    const std::size_t k = J.size();
    auto t = [&](std::size_t j) { return static_cast<int>(s.t(j)); };
    std::vector<int> mu(s.m());
    for (std::size_t j = 0; j < s.m(); ++j) {
        if (j <= J[0]) {
            mu[j] = std::min(t(j), v[0]);
        } else if (j >= J[k - 1]) {
            mu[j] = t(j) - (t(J[k - 1]) - v[k - 1]);
        } else {
            std::size_t a = static_cast<std::size_t>(std::upper_bound(J.begin(), J.end(), j) - J.begin()) - 1;
            mu[j] = std::min(t(j) - (t(J[a]) - v[a]), v[a + 1]);
        }
    }
    return RTuple(s, mu);
}

/// The smallest admissible tuple agreeing with p on J.
inline RTuple min_extension(const SpaceSpec& s, const PartialTuple& p, ChainMode mode = ChainMode::Weak) {
    validate_partial(s, p, mode);
    const auto& J = p.J;
    const auto& v = p.values;
    const std::size_t k = J.size();
    auto t = [&](std::size_t j) { return static_cast<int>(s.t(j)); };
    std::vector<int> mu(s.m());
    for (std::size_t j = 0; j < s.m(); ++j) {
        if (j <= J[0]) {
            mu[j] = std::max(0, t(j) - (t(J[0]) - v[0]));
        } else if (j >= J[k - 1]) {
            mu[j] = v[k - 1];
        } else {
            std::size_t a = static_cast<std::size_t>(std::upper_bound(J.begin(), J.end(), j) - J.begin()) - 1;
            mu[j] = std::max(t(j) - (t(J[a + 1]) - v[a + 1]), v[a]);
        }
    }
    return RTuple(s, mu);
}

/// Every admissible tuple agreeing with p on J, in lexicographic order.
inline std::vector<RTuple> enumerate_extensions(const SpaceSpec& s, const PartialTuple& p) {
    validate_partial(s, p, ChainMode::Weak);
    std::vector<RTuple> out;
    for (auto& r : enumerate_lattice(s)) {
        bool agree = true;
        for (std::size_t a = 0; a < p.J.size(); ++a)
            if (r[p.J[a]] != p.values[a]) agree = false;
        if (agree) out.push_back(r);
    }
    return out;
}

/// mu + Σ_{j∈J} e_j as a plain vector (not necessarily admissible).
inline std::vector<int> add_unit_vectors(const RTuple& mu, const std::vector<std::size_t>& J) {
    std::vector<int> r = mu.values();
    for (auto j : J) r.at(j) += 1;
    return r;
}

/// The extensions mu of p for which mu + Σ_{j∈J} e_j is admissible as well.
inline std::vector<RTuple> extensions_with_admissible_r(const SpaceSpec& s, const PartialTuple& p) {
    std::vector<RTuple> out;
    for (auto& mu : enumerate_extensions(s, p))
        if (is_admissible(s, add_unit_vectors(mu, p.J))) out.push_back(mu);
    return out;
}

/// An interval [W(r), W(mu)] with r = mu + Σ_{j∈J} e_j and W(mu) = W(r) ⊕ D.
struct IntervalSpec {
    std::vector<std::size_t> J;
    RTuple mu;
    RTuple r;
    Subspace D;               ///< span{f^{mu_j} u_j : j ∈ J}
    std::vector<Vec2> d_gens; ///< f^{mu_j} u_j in J order
    Subspace bottom;          ///< W(r)
    Subspace top;             ///< W(mu)
};

inline IntervalSpec build_interval(const SpaceSpec& s, const std::vector<std::size_t>& J, const std::vector<int>& mu) {
    std::vector<std::string> bad = index_set_violations(s, J);
    if (!bad.empty()) throw HypothesisError(bad);
    if (mu.size() != s.m()) throw DimensionError("mu must have one entry per block");
    if (J.size() < 2) bad.push_back("|J| >= 2");
    for (auto j : J)
        if (!is_unrepeated(s, j)) bad.push_back("J subset of I_u (index " + std::to_string(j + 1) + ")");
    if (!is_admissible(s, mu)) bad.push_back("mu admissible");
    std::vector<int> r = mu;
    for (auto j : J) r[j] += 1;
    if (!is_admissible(s, r)) bad.push_back("r = mu + e_J admissible");
    if (!J.empty()) {
        auto t = [&](std::size_t j) { return static_cast<int>(s.t(j)); };
        if (mu[J[0]] < 0) bad.push_back("strict mu chain (0 <= mu_{i_1})");
        if (!(0 < t(J[0]) - mu[J[0]])) bad.push_back("strict t - mu chain (0 < t_{i_1} - mu_{i_1})");
        for (std::size_t a = 1; a < J.size(); ++a) {
            if (!(mu[J[a - 1]] < mu[J[a]])) bad.push_back("strict mu chain at position " + std::to_string(a + 1));
            if (!(t(J[a - 1]) - mu[J[a - 1]] < t(J[a]) - mu[J[a]]))
                bad.push_back("strict t - mu chain at position " + std::to_string(a + 1));
            if (!(t(J[a - 1]) + 1 < t(J[a])))
                bad.push_back("gap condition t_{i_s} + 1 < t_{i_(s+1)} at position " + std::to_string(a + 1));
        }
    }
    if (!bad.empty()) throw HypothesisError(bad);

    RTuple m(s, mu), rr(s, r);
    std::vector<Vec2> gens;
    for (auto j : J) gens.push_back(s.basis_vector(j, static_cast<std::size_t>(mu[j])));
    Subspace D = Subspace::span(s.n(), gens);
    Subspace bottom = w_subspace(s, rr), top = w_subspace(s, m);
    if (D.dim() != J.size() || subspace_sum(bottom, D) != top || !subspace_intersect(bottom, D).is_zero())
        throw std::logic_error("W(mu) is not W(r) ⊕ D");
    return IntervalSpec{J, m, rr, D, gens, bottom, top};
}

struct IntervalElement {
    Subspace Z;  ///< subspace of D
    Subspace X;  ///< W(r) ⊕ Z
};

/// Streams W(r) ⊕ Z for every subspace Z of D.
class IntervalStream {
public:
    explicit IntervalStream(const IntervalSpec& iv, std::size_t cap = SubspaceStream::kDefaultCap)
        : iv_(&iv), zs_(iv.D, std::nullopt, cap) {}

    std::optional<IntervalElement> next() {
        auto z = zs_.next();
        if (!z) return std::nullopt;
        return IntervalElement{*z, subspace_sum(iv_->bottom, *z)};
    }

private:
    const IntervalSpec* iv_;
    SubspaceStream zs_;
};

inline IntervalStream interval_elements(const IntervalSpec& iv, std::size_t cap = SubspaceStream::kDefaultCap) {
    return IntervalStream(iv, cap);
}

/// Z(M) = span of the columns of (f^{mu_{i_1}} u_{i_1}, ..., f^{mu_{i_k}} u_{i_k}) M.
inline Subspace echelon_subspace(const IntervalSpec& iv, const Mat2& M) {
    const std::size_t k = iv.J.size();
    if (M.rows != k || M.cols != k) throw DimensionError("echelon matrix must be k x k");
    std::vector<Vec2> cols;
    for (std::size_t c = 0; c < k; ++c) {
        Vec2 z(iv.D.ambient_dim());
        for (std::size_t r = 0; r < k; ++r)
            if (M.at(r, c)) z ^= iv.d_gens[r];
        cols.push_back(z);
    }
    return Subspace::span(iv.D.ambient_dim(), cols);
}

/// The subspace of D with respect to the D-generators as a column-reduced echelon matrix.
inline Mat2 echelon_matrix(const IntervalSpec& iv, const Subspace& Z) {
    const std::size_t k = iv.J.size();
    Mat2 m(k, k);
    std::size_t c = 0;
    for (const auto& b : Z.basis()) {
        for (std::size_t r = 0; r < k; ++r)
            if (b.get(iv.d_gens[r].lowest())) m.put(r, c, true);
        ++c;
    }
    return col_reduced_echelon(m);
}

struct EchelonClass {
    bool hyperinvariant = false;    ///< each nonzero column has exactly one entry 1
    bool kernel_is_bottom = false;  ///< each nonzero column has at least two entries 1
    bool hull_is_top = false;       ///< each row has at least one entry 1

    friend bool operator==(const EchelonClass&, const EchelonClass&) = default;
};

/// Reads the three interval predicates off the pattern of a column-reduced echelon matrix.
inline EchelonClass classify_echelon(const IntervalSpec& iv, const Mat2& M) {
    const std::size_t k = iv.J.size();
    if (M.rows != k || M.cols != k) throw DimensionError("echelon matrix must be k x k");
    if (!is_col_reduced_echelon(M)) throw HypothesisError({"matrix is not in column-reduced echelon form"});
    EchelonClass e{true, true, true};
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t ones = M.column(c).popcount();
        if (ones == 0) continue;
        if (ones != 1) e.hyperinvariant = false;
        if (ones < 2) e.kernel_is_bottom = false;
    }
    for (std::size_t r = 0; r < k; ++r)
        if (M.data[r].is_zero()) e.hull_is_top = false;
    return e;
}

/// All k x k matrices in column-reduced echelon form.
inline std::vector<Mat2> enumerate_col_echelon(std::size_t k) {
    std::vector<Mat2> out;
    RrefEnumerator en(k);
    while (auto rows = en.next()) {
        Mat2 t(k, k);
        for (std::size_t i = 0; i < rows->size(); ++i) t.data[i] = (*rows)[i];
        out.push_back(transpose(t));
    }
    return out;
}

/// A hyperinvariant element W(r) ⊕ span{f^{mu_τ} u_τ : τ ∈ T} of an interval.
struct HyperMember {
    std::vector<std::size_t> T;
    RTuple eta;
    Subspace X;
};

/// The 2^k hyperinvariant members, ordered by T as a bitmask over J.
/// eta is identified from the subspace itself and checked against W(eta).
inline std::vector<HyperMember> hyperinvariant_members(const SpaceSpec& s, const IntervalSpec& iv) {
    const std::size_t k = iv.J.size();
    if (k > 20) throw ResourceError("too many subsets of J");
    std::vector<HyperMember> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        std::vector<std::size_t> T;
        std::vector<Vec2> rows = iv.bottom.basis();
        for (std::size_t a = 0; a < k; ++a)
            if ((mask >> a) & 1u) {
                T.push_back(iv.J[a]);
                rows.push_back(iv.d_gens[a]);
            }
        Subspace Y = Subspace::span(s.n(), rows);
        std::vector<int> eta(s.m());
        for (std::size_t j = 0; j < s.m(); ++j)
            eta[j] = static_cast<int>(s.t(j) - subspace_intersect(Y, cyclic_span(s, s.generator(j))).dim());
        RTuple e(s, eta);
        if (w_subspace(s, e) != Y) throw std::logic_error("hyperinvariant member is not of the form W(eta)");
        out.push_back({T, e, Y});
    }
    return out;
}

/// A pair of unrepeated exponents R + 1 < S.
struct ShodaPair {
    std::size_t R, S;    ///< exponents
    std::size_t iR, iS;  ///< block indices
};

/// A Shoda pair if one exists: smallest S, then smallest R.
inline std::optional<ShodaPair> shoda(const SpaceSpec& s) {
    auto u = unrepeated_indices(s);
    for (auto iS : u)
        for (auto iR : u)
            if (s.t(iR) + 1 < s.t(iS)) return ShodaPair{s.t(iR), s.t(iS), iR, iS};
    return std::nullopt;
}

struct Construction {
    Vec2 z;        ///< Σ_{j∈J} f^{mu_j} u_j
    Subspace X;    ///< W(r) + span{z}
    RTuple mu;     ///< maximum extension
    RTuple r;      ///< mu + Σ_{j∈J} e_j
};

/// W(r) + span{z} for the maximum extension mu of p and r = mu + e_J.
inline Construction construct_char_nonhyp(const SpaceSpec& s, const PartialTuple& p) {
    RTuple mu = max_extension(s, p, ChainMode::Strict);
    RTuple r(s, add_unit_vectors(mu, p.J));
    Vec2 z = s.zero();
    for (auto j : p.J) z ^= s.basis_vector(j, static_cast<std::size_t>(mu[j]));
    std::vector<Vec2> rows = w_subspace(s, r).basis();
    rows.push_back(z);
    return Construction{z, Subspace::span(s.n(), rows), mu, r};
}

/// <f^sh u_{iR} + f^q u_{iS}>^c for unrepeated exponents R = t_{iR}, S = t_{iS}.
inline Subspace shoda_witness(const Commutant& c, std::size_t iR, std::size_t iS, int sh, int q) {
    const SpaceSpec& s = c.space();
    if (iR >= s.m() || iS >= s.m()) throw DimensionError("generator index out of range");
    std::vector<std::string> bad;
    if (!is_unrepeated(s, iR)) bad.push_back("lambda^R unrepeated");
    if (!is_unrepeated(s, iS)) bad.push_back("lambda^S unrepeated");
    const int R = static_cast<int>(s.t(iR)), S = static_cast<int>(s.t(iS));
    if (!(R + 1 < S)) bad.push_back("R + 1 < S");
    if (!(0 <= sh && sh < q)) bad.push_back("0 <= s < q");
    if (!(0 < R - sh && R - sh < S - q)) bad.push_back("0 < R - s < S - q");
    if (!bad.empty()) throw HypothesisError(bad);
    Vec2 z = s.basis_vector(iR, static_cast<std::size_t>(sh)) ^ s.basis_vector(iS, static_cast<std::size_t>(q));
    return c.characteristic_hull({z});
}

/// True iff X = W(r) ⊕ Z has hull W(mu). mu must be the maximum extension of
/// its restriction to J; then a true result comes with X = <basis of Z>^c,
/// which is checked against the oracle.
inline bool single_hull_check(const Commutant& c, const IntervalSpec& iv, const Subspace& Z) {
    const SpaceSpec& s = c.space();
    PartialTuple p{iv.J, {}};
    for (auto j : iv.J) p.values.push_back(iv.mu[j]);
    if (max_extension(s, p) != iv.mu) throw HypothesisError({"mu is not the maximum extension of its J-part"});
    if (!iv.D.contains(Z)) throw HypothesisError({"Z is not a subspace of D"});
    Subspace X = subspace_sum(iv.bottom, Z);
    Subspace hull = Subspace::zero(s.n());
    for (std::size_t j = 0; j < s.m(); ++j) hull = subspace_sum(hull, project_subspace(s, j, X));
    if (hull != iv.top) return false;
    if (c.characteristic_hull(Z.basis()) != X) throw std::logic_error("X differs from the characteristic hull of Z");
    return true;
}

/// z = Σ_i f^{mu_{rho_i}} u'_{rho_i} for a generator tuple U'.
struct CanonicalRep {
    std::vector<Vec2> generators;  ///< U' = (u'_1, ..., u'_m)
    std::vector<std::size_t> rho;
    std::vector<int> mu;
    bool hull_non_hyperinvariant = false;  ///< oracle: <z>^c is not hyperinvariant
    bool two_unrepeated = false;           ///< at least two u'_{rho_i} are unrepeated
};

/// Finds a representation with strict chains by searching the automorphism
/// orbit of z for a standard form Σ f^{mu_rho} u_rho.
inline CanonicalRep canonical_rep(const Commutant& c, const Vec2& z) {
    const SpaceSpec& s = c.space();
    s.check(z);
    if (z.is_zero()) throw HypothesisError({"z must be nonzero"});
    if (s.n() > c.caps().search_dim)
        throw ResourceError("canonical_rep search is limited to n <= " + std::to_string(c.caps().search_dim));
    OrbitSet orb = c.orbit(z);
    std::unordered_set<Vec2, Vec2Hash> in_orbit(orb.elements.begin(), orb.elements.end());

    std::optional<std::pair<std::vector<std::size_t>, std::vector<int>>> found;
    std::vector<std::size_t> rho;
    std::vector<int> mu;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t start) {
        if (found) return;
        if (rho.size() == k) {
            Vec2 z0 = s.zero();
            for (std::size_t a = 0; a < k; ++a) z0 ^= s.basis_vector(rho[a], static_cast<std::size_t>(mu[a]));
            if (in_orbit.count(z0)) found.emplace(rho, mu);
            return;
        }
        for (std::size_t j = start; j < s.m() && !found; ++j) {
            int t = static_cast<int>(s.t(j));
            for (int v = 0; v < t && !found; ++v) {
                if (!rho.empty()) {
                    int tp = static_cast<int>(s.t(rho.back()));
                    if (!(mu.back() < v && tp - mu.back() < t - v)) continue;
                }
                rho.push_back(j);
                mu.push_back(v);
                rec(k, j + 1);
                rho.pop_back();
                mu.pop_back();
            }
        }
    };
    for (std::size_t k = 1; k <= s.m() && !found; ++k) rec(k, 0);
    if (!found) throw std::logic_error("no standard representation found in the orbit of z");

    CanonicalRep out;
    out.rho = found->first;
    out.mu = found->second;
    Vec2 z0 = s.zero();
    for (std::size_t a = 0; a < out.rho.size(); ++a) z0 ^= s.basis_vector(out.rho[a], static_cast<std::size_t>(out.mu[a]));
    c.visit_automorphisms(0, c.endo_count(), [&](std::uint64_t, std::span<const Vec2> cols) {
        if (apply_columns(cols, z0) != z) return true;
        for (std::size_t j = 0; j < s.m(); ++j) out.generators.push_back(cols[s.position(j, 0)]);
        return false;
    });
    Subspace hull = c.characteristic_hull({z});
    out.hull_non_hyperinvariant = !c.is_hyperinvariant(hull);
    std::size_t unrep = 0;
    for (auto j : out.rho)
        if (is_unrepeated(s, j)) ++unrep;
    out.two_unrepeated = unrep >= 2;
    return out;
}

}  // namespace chinv
