#pragma once

// End(V, f) and Aut(V, f): enumeration, orbits, hulls and the brute-force
// classification oracle.
//
// An f-commuting endomorphism is fixed by the images of the generators u_j,
// and any image of u_j inside V[f^{t_j}] extends uniquely. End(V, f) is thus
// the product of the spaces V[f^{t_j}], of dimension d = sum min(t_i, t_j).
// Coordinate b of an endomorphism is one (generator, basis vector of
// V[f^{t_j}]) pair; endomorphism number c has coordinate b equal to bit b of c.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chinv/errors.hpp"
#include "chinv/gf2.hpp"
#include "chinv/modspace.hpp"

namespace chinv {

/// Resource limits for the exponential oracles.
struct Caps {
    /// Largest d for which the 2^d endomorphisms may be walked.
    std::size_t endo_dim = 24;
    /// Largest ambient dimension for subspace enumeration.
    std::size_t subspace_dim = SubspaceStream::kDefaultCap;
    /// Random automorphisms tried before falling back to full enumeration
    /// when computing the linear span of Aut(V, f).
    std::size_t unit_samples = 4096;
    /// Largest n for the generator-tuple search of canonical_rep.
    std::size_t search_dim = 8;
    std::size_t threads = 1;
};

/// True when the vectors are linearly independent and span their ambient space.
inline bool is_full_rank(std::span<const Vec2> cols) {
    if (cols.empty()) return true;
    const std::size_t n = cols.front().size();
    if (cols.size() != n) return false;
    std::vector<Vec2> basis;
    std::vector<std::size_t> piv;
    basis.reserve(n);
    piv.reserve(n);
    for (const auto& c : cols) {
        Vec2 r = c;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (r.get(piv[i])) r ^= basis[i];
        if (r.is_zero()) return false;
        basis.push_back(r);
        piv.push_back(r.lowest());
    }
    return true;
}

/// Applies the linear map with the given columns (column p = image of basis vector p).
inline Vec2 apply_columns(std::span<const Vec2> cols, const Vec2& x) {
    Vec2 y(cols.empty() ? x.size() : cols.front().size());
    x.for_each_set_bit([&](std::size_t p) { y ^= cols[p]; });
    return y;
}

/// An endomorphism commuting with f, stored by its generator images and its full columns.
class FEndo {
public:
    static FEndo from_generator_images(const SpaceSpec& s, std::vector<Vec2> images) {
        if (images.size() != s.m()) throw DimensionError("need one image per generator");
        FEndo e;
        e.images_ = std::move(images);
        e.cols_.assign(s.n(), s.zero());
        for (std::size_t j = 0; j < s.m(); ++j) {
            s.check(e.images_[j]);
            if (exponent(s, e.images_[j]) > s.t(j))
                throw HypothesisError({"image of u" + std::to_string(j + 1) + " must lie in V[f^" +
                                       std::to_string(s.t(j)) + "]"});
            Vec2 y = e.images_[j];
            for (std::size_t i = 0; i < s.t(j); ++i) {
                e.cols_[s.position(j, i)] = y;
                y = apply_f(s, y);
            }
        }
        return e;
    }

    static FEndo identity(const SpaceSpec& s) {
        std::vector<Vec2> im;
        for (std::size_t j = 0; j < s.m(); ++j) im.push_back(s.generator(j));
        return from_generator_images(s, std::move(im));
    }

    const std::vector<Vec2>& generator_images() const noexcept { return images_; }
    const std::vector<Vec2>& columns() const noexcept { return cols_; }

    Vec2 apply(const Vec2& x) const { return apply_columns(cols_, x); }

    Subspace apply(const Subspace& x) const {
        std::vector<Vec2> rows;
        for (const auto& b : x.basis()) rows.push_back(apply(b));
        return Subspace::span(x.ambient_dim(), rows);
    }

    bool is_invertible() const { return is_full_rank(cols_); }

    /// Matrix with entry (i, p) = coefficient of basis vector i in the image of basis vector p.
    Mat2 matrix() const {
        const std::size_t n = cols_.size();
        Mat2 m(n, n);
        for (std::size_t p = 0; p < n; ++p) cols_[p].for_each_set_bit([&](std::size_t i) { m.put(i, p, true); });
        return m;
    }

    friend bool operator==(const FEndo& a, const FEndo& b) noexcept { return a.images_ == b.images_; }

private:
    std::vector<Vec2> images_;
    std::vector<Vec2> cols_;
};

/// The orbit [x] = {alpha x : alpha in Aut(V, f)}, sorted.
struct OrbitSet {
    Vec2 base;
    std::vector<Vec2> elements;
};

/// A coset base + direction.
struct AffineSet {
    Vec2 base;
    Subspace direction;

    bool contains(const Vec2& x) const { return direction.contains(x ^ base); }

    std::vector<Vec2> elements() const {
        std::vector<Vec2> out;
        const std::size_t k = direction.dim();
        if (k > 30) throw ResourceError("affine set too large to list");
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
            Vec2 v = base;
            for (std::size_t i = 0; i < k; ++i)
                if ((c >> i) & 1u) v ^= direction.basis()[i];
            out.push_back(v);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// The orbit of an unrepeated generator u_i in closed form:
/// u_i + <f u_i> + sum over j != i of <u_j>[f^{t_i}].
inline AffineSet unrepeated_generator_orbit(const SpaceSpec& s, std::size_t i) {
    if (i >= s.m()) throw DimensionError("generator index out of range");
    if (!is_unrepeated(s, i)) throw HypothesisError({"u" + std::to_string(i + 1) + " is not unrepeated"});
    const std::size_t t = s.t(i);
    std::vector<Vec2> dir;
    for (std::size_t k = 1; k < t; ++k) dir.push_back(s.basis_vector(i, k));
    for (std::size_t j = 0; j < s.m(); ++j) {
        if (j == i) continue;
        for (std::size_t k = 0; k < s.t(j); ++k)
            if (k + t >= s.t(j)) dir.push_back(s.basis_vector(j, k));
    }
    return {s.generator(i), Subspace::span(s.n(), dir)};
}

struct Classification {
    bool invariant = false;
    bool characteristic = false;
    bool hyperinvariant = false;

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Runs fn(lo, hi) over a partition of [0, total) on the given number of threads.
inline void parallel_slices(std::uint64_t total, std::size_t threads,
                            const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
    if (threads <= 1 || total < 4096) {
        fn(0, total);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + threads - 1) / threads;
    for (std::size_t w = 0; w < threads; ++w) {
        std::uint64_t lo = w * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

class Commutant {
public:
    explicit Commutant(SpaceSpec s, Caps caps = {}) : s_(std::move(s)), caps_(caps) {
        for (std::size_t j = 0; j < s_.m(); ++j) {
            for (std::size_t k = 0; k < s_.m(); ++k)
                for (std::size_t i = 0; i < s_.t(k); ++i)
                    if (i + s_.t(j) >= s_.t(k)) coords_.push_back({j, s_.position(k, i)});
        }
        for (std::size_t b = 0; b < coords_.size(); ++b) {
            auto [j, p] = coords_[b];
            Contribution c;
            Vec2 y = Vec2::unit(s_.n(), p);
            for (std::size_t i = 0; i < s_.t(j); ++i) {
                c.emplace_back(s_.position(j, i), y);
                y = apply_f(s_, y);
            }
            contrib_.push_back(std::move(c));
        }
    }

    const SpaceSpec& space() const noexcept { return s_; }
    const Caps& caps() const noexcept { return caps_; }

    /// d = dim End(V, f).
    std::size_t dim() const noexcept { return coords_.size(); }

    /// Builds the endomorphism with the given coordinate vector (length d).
    FEndo from_coordinates(const Vec2& c) const {
        if (c.size() != dim()) throw DimensionError("coordinate vector has wrong length");
        std::vector<Vec2> im(s_.m(), s_.zero());
        c.for_each_set_bit([&](std::size_t b) { im[coords_[b].first].flip(coords_[b].second); });
        return FEndo::from_generator_images(s_, std::move(im));
    }

    FEndo from_index(std::uint64_t c) const {
        require_enumerable();
        Vec2 v(dim());
        for (std::size_t b = 0; b < dim(); ++b)
            if ((c >> b) & 1u) v.set(b);
        return from_coordinates(v);
    }

    /// Coordinate vector of an endomorphism.
    Vec2 coordinates(const FEndo& e) const {
        Vec2 c(dim());
        for (std::size_t b = 0; b < dim(); ++b)
            if (e.generator_images()[coords_[b].first].get(coords_[b].second)) c.set(b);
        return c;
    }

    /// A linear basis of End(V, f): the coordinate unit vectors.
    std::vector<FEndo> basis() const {
        std::vector<FEndo> out;
        for (std::size_t b = 0; b < dim(); ++b) out.push_back(from_coordinates(Vec2::unit(dim(), b)));
        return out;
    }

    std::uint64_t endo_count() const {
        require_enumerable();
        return std::uint64_t{1} << dim();
    }

    /// Streams endomorphisms number lo .. hi-1 in index order.
    class EndoStream {
    public:
        EndoStream(const Commutant& c, std::uint64_t lo, std::uint64_t hi, bool units_only)
            : c_(&c), next_(lo), hi_(hi), units_(units_only) {}

        std::optional<FEndo> next() {
            while (next_ < hi_) {
                FEndo e = c_->from_index(next_++);
                if (!units_ || e.is_invertible()) return e;
            }
            return std::nullopt;
        }

    private:
        const Commutant* c_;
        std::uint64_t next_, hi_;
        bool units_;
    };

    EndoStream endo_stream() const { return EndoStream(*this, 0, endo_count(), false); }
    EndoStream endo_stream(std::uint64_t lo, std::uint64_t hi) const {
        check_slice(lo, hi);
        return EndoStream(*this, lo, hi, false);
    }
    EndoStream auto_stream() const { return EndoStream(*this, 0, endo_count(), true); }
    EndoStream auto_stream(std::uint64_t lo, std::uint64_t hi) const {
        check_slice(lo, hi);
        return EndoStream(*this, lo, hi, true);
    }

    /// Visits Gray-code positions lo .. hi-1 of the index range; position i is
    /// endomorphism gray(i) = i ^ (i >> 1). fn(code, columns) returns false to stop.
    /// Returns false when stopped early.
    template <class Fn>
    bool visit_endomorphisms(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        check_slice(lo, hi);
        if (lo >= hi) return true;
        std::uint64_t code = lo ^ (lo >> 1);
        std::vector<Vec2> cols(s_.n(), s_.zero());
        for (std::size_t b = 0; b < dim(); ++b)
            if ((code >> b) & 1u) add_contribution(cols, b);
        if (!fn(code, std::span<const Vec2>(cols))) return false;
        for (std::uint64_t i = lo + 1; i < hi; ++i) {
            std::size_t b = static_cast<std::size_t>(std::countr_zero(i));
            add_contribution(cols, b);
            code ^= std::uint64_t{1} << b;
            if (!fn(code, std::span<const Vec2>(cols))) return false;
        }
        return true;
    }

    /// As visit_endomorphisms, restricted to automorphisms.
    template <class Fn>
    bool visit_automorphisms(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        return visit_endomorphisms(lo, hi, [&](std::uint64_t code, std::span<const Vec2> cols) {
            if (!is_full_rank(cols)) return true;
            return fn(code, cols);
        });
    }

    std::uint64_t automorphism_count() const {
        std::atomic<std::uint64_t> count{0};
        parallel_slices(endo_count(), caps_.threads, [&](std::uint64_t lo, std::uint64_t hi) {
            std::uint64_t local = 0;
            visit_automorphisms(lo, hi, [&](std::uint64_t, std::span<const Vec2>) {
                ++local;
                return true;
            });
            count += local;
        });
        return count;
    }

    OrbitSet orbit(const Vec2& x) const {
        s_.check(x);
        std::unordered_set<Vec2, Vec2Hash> seen;
        std::mutex mu;
        parallel_slices(endo_count(), caps_.threads, [&](std::uint64_t lo, std::uint64_t hi) {
            std::unordered_set<Vec2, Vec2Hash> local;
            visit_automorphisms(lo, hi, [&](std::uint64_t, std::span<const Vec2> cols) {
                local.insert(apply_columns(cols, x));
                return true;
            });
            std::lock_guard lock(mu);
            seen.insert(local.begin(), local.end());
        });
        OrbitSet o{x, {seen.begin(), seen.end()}};
        std::sort(o.elements.begin(), o.elements.end());
        return o;
    }

    /// A basis of the linear span of Aut(V, f) inside End(V, f). Invariance
    /// under every automorphism is equivalent to invariance under this basis.
    ///
    /// Random automorphisms are tried until they reach unit_span_dim();
    /// otherwise every automorphism is enumerated.
    const std::vector<FEndo>& unit_span_basis() const {
        std::call_once(unit_once_, [this] { compute_unit_span(); });
        return unit_span_;
    }

    /// dim span Aut(V, f) = d - max(0, |I_u| - 1). Modulo the radical of
    /// End(V, f) the units form a product of groups GL(n_k, 2), one per
    /// distinct exponent of multiplicity n_k; GL(n, 2) spans M_n(2) for n >= 2
    /// while every unrepeated exponent contributes the same scalar 1.
    std::size_t unit_span_dim() const {
        const std::size_t u = unrepeated_indices(s_).size();
        return dim() - (u > 1 ? u - 1 : 0);
    }

    /// True when the automorphisms span all of End(V, f), in which case
    /// characteristic and hyperinvariant subspaces coincide.
    bool units_span_all() const { return unit_span_basis().size() == dim(); }

    bool is_hyperinvariant(const Subspace& x) const {
        check_ambient(x);
        for (const auto& e : basis_cached())
            if (!maps_into(e, x)) return false;
        return true;
    }

    bool is_characteristic(const Subspace& x) const {
        check_ambient(x);
        if (!is_invariant(s_, x)) return false;
        for (const auto& e : unit_span_basis())
            if (!maps_into(e, x)) return false;
        return true;
    }

    /// Invariant, characteristic and hyperinvariant flags.
    Classification classify(const Subspace& x) const {
        check_ambient(x);
        Classification c;
        c.invariant = is_invariant(s_, x);
        if (!c.invariant) return c;
        c.hyperinvariant = is_hyperinvariant(x);
        c.characteristic = c.hyperinvariant || is_characteristic(x);
        return c;
    }

    /// Checks alpha X ⊆ X for every automorphism alpha, one by one, for each
    /// of the given subspaces in a single pass over Aut(V, f).
    std::vector<bool> characteristic_by_enumeration(const std::vector<Subspace>& xs) const {
        for (const auto& x : xs) check_ambient(x);
        return stable_by_enumeration(xs, true);
    }

    /// As characteristic_by_enumeration, over all 2^d endomorphisms.
    std::vector<bool> hyperinvariant_by_enumeration(const std::vector<Subspace>& xs) const {
        for (const auto& x : xs) check_ambient(x);
        return stable_by_enumeration(xs, false);
    }

    /// <B>^c: the smallest characteristic subspace containing B.
    Subspace characteristic_hull(const std::vector<Vec2>& gens) const {
        std::vector<Vec2> rows;
        for (const auto& g : gens) {
            s_.check(g);
            for (const auto& e : unit_span_basis()) rows.push_back(e.apply(g));
        }
        return invariant_span(s_, rows);
    }

    /// <B>^h: the smallest hyperinvariant subspace containing B.
    Subspace hyperinvariant_hull(const std::vector<Vec2>& gens) const {
        std::vector<Vec2> rows;
        for (const auto& g : gens) {
            s_.check(g);
            for (const auto& e : basis_cached()) rows.push_back(e.apply(g));
        }
        return Subspace::span(s_.n(), rows);
    }

    /// The automorphism alpha(u_i, x) fixing u_k for k != i and sending u_i to x.
    FEndo exchange_automorphism(std::size_t i, const Vec2& x) const {
        if (i >= s_.m()) throw DimensionError("generator index out of range");
        std::vector<std::string> bad;
        if (!is_unrepeated(s_, i)) bad.push_back("u" + std::to_string(i + 1) + " is not unrepeated");
        auto g = is_generator(s_, x);
        if (!g || *g != s_.t(i)) bad.push_back("x is not a generator of exponent " + std::to_string(s_.t(i)));
        if (!bad.empty()) throw HypothesisError(bad);
        std::vector<Vec2> im;
        for (std::size_t k = 0; k < s_.m(); ++k) im.push_back(k == i ? x : s_.generator(k));
        FEndo e = FEndo::from_generator_images(s_, std::move(im));
        if (!e.is_invertible()) throw std::logic_error("exchange map is not invertible");
        return e;
    }

private:
    using Contribution = std::vector<std::pair<std::size_t, Vec2>>;

    /// Walks End (or Aut) once; each slice keeps the subspaces not yet refuted.
    std::vector<bool> stable_by_enumeration(const std::vector<Subspace>& xs, bool units_only) const {
        std::vector<std::atomic<bool>> ok(xs.size());
        for (auto& b : ok) b = true;
        parallel_slices(endo_count(), caps_.threads, [&](std::uint64_t lo, std::uint64_t hi) {
            std::vector<std::size_t> alive(xs.size());
            for (std::size_t k = 0; k < xs.size(); ++k) alive[k] = k;
            std::uint64_t visits = 0;
            visit_endomorphisms(lo, hi, [&](std::uint64_t, std::span<const Vec2> cols) {
                if ((++visits & 0xfff) == 0)
                    std::erase_if(alive, [&](std::size_t k) { return !ok[k].load(std::memory_order_relaxed); });
                if (alive.empty()) return false;
                if (units_only && !is_full_rank(cols)) return true;
                for (std::size_t a = 0; a < alive.size();) {
                    const Subspace& x = xs[alive[a]];
                    bool stable = true;
                    for (const auto& b : x.basis())
                        if (!x.contains(apply_columns(cols, b))) {
                            stable = false;
                            break;
                        }
                    if (stable) {
                        ++a;
                    } else {
                        ok[alive[a]] = false;
                        alive[a] = alive.back();
                        alive.pop_back();
                    }
                }
                return !alive.empty();
            });
        });
        return {ok.begin(), ok.end()};
    }

    void add_contribution(std::vector<Vec2>& cols, std::size_t b) const {
        for (const auto& [p, v] : contrib_[b]) cols[p] ^= v;
    }

    bool maps_into(const FEndo& e, const Subspace& x) const {
        for (const auto& b : x.basis())
            if (!x.contains(e.apply(b))) return false;
        return true;
    }

    const std::vector<FEndo>& basis_cached() const {
        std::call_once(basis_once_, [this] { basis_ = basis(); });
        return basis_;
    }

    void require_enumerable() const {
        if (dim() > caps_.endo_dim || dim() >= 63)
            throw ResourceError("End(V,f) has dimension " + std::to_string(dim()) + ", above the enumeration cap " +
                                std::to_string(caps_.endo_dim));
    }

    void check_slice(std::uint64_t lo, std::uint64_t hi) const {
        if (lo > hi || hi > endo_count()) throw DimensionError("endomorphism slice out of range");
    }

    void check_ambient(const Subspace& x) const {
        if (x.ambient_dim() != s_.n()) throw DimensionError("subspace does not live in V");
    }

    void compute_unit_span() const {
        const std::size_t d = dim();
        const std::size_t target = unit_span_dim();
        IncrementalBasis span(d);
        Vec2 id = coordinates(FEndo::identity(s_));
        auto offer = [&](const Vec2& c) {
            if (span.contains(c)) return;
            if (from_coordinates(c).is_invertible()) span.insert(c);
        };
        offer(id);
        for (std::size_t b = 0; b < d && span.dim() < target; ++b) offer(id ^ Vec2::unit(d, b));
        std::mt19937_64 rng(0x5eed5eedULL);
        for (std::size_t k = 0; k < caps_.unit_samples && span.dim() < target; ++k) {
            Vec2 c(d);
            for (std::size_t b = 0; b < d; ++b)
                if (rng() & 1u) c.set(b);
            offer(c);
        }
        if (span.dim() < target) {
            require_enumerable();
            std::mutex mu;
            std::atomic<bool> full{false};
            parallel_slices(endo_count(), caps_.threads, [&](std::uint64_t lo, std::uint64_t hi) {
                visit_automorphisms(lo, hi, [&](std::uint64_t code, std::span<const Vec2>) {
                    Vec2 c(d);
                    for (std::size_t b = 0; b < d; ++b)
                        if ((code >> b) & 1u) c.set(b);
                    std::lock_guard lock(mu);
                    span.insert(c);
                    if (span.dim() == target) full = true;
                    return !full.load();
                });
            });
            if (span.dim() != target) throw std::logic_error("span of Aut(V,f) has unexpected dimension");
        }
        Subspace reduced = Subspace::span(d, span.rows());
        for (const auto& row : reduced.basis()) unit_span_.push_back(from_coordinates(row));
    }

    SpaceSpec s_;
    Caps caps_;
    std::vector<std::pair<std::size_t, std::size_t>> coords_;
    std::vector<Contribution> contrib_;
    mutable std::once_flag unit_once_, basis_once_;
    mutable std::vector<FEndo> unit_span_, basis_;
};

}  // namespace chinv
