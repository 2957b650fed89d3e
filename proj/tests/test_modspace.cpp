#include <gtest/gtest.h>

#include <random>
#include <set>

#include "chinv/modspace.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace chinv;

namespace {

SpaceSpec ex() { return SpaceSpec::build({1, 3, 6}); }

Vec2 v(const SpaceSpec& s, const char* e) { return parse_vector(s, e); }

using support::partitions;

/// Invariant subspaces by scanning all element sets closed under XOR and f (n <= 4).
std::set<oracle::ElementSet> invariant_by_brute_force(const std::vector<int>& t, std::size_t n) {
    oracle::Dense f = oracle::shift_matrix(t);
    std::set<oracle::ElementSet> out;
    for (auto e : oracle::all_subspaces_by_closure(n))
        if (oracle::stable_under(e, n, {f})) out.insert(e);
    return out;
}

}  // namespace

TEST(Build, RunningExample) {
    SpaceSpec s = ex();
    EXPECT_EQ(s.n(), 10u);
    EXPECT_EQ(s.m(), 3u);
    EXPECT_FALSE(s.was_resorted());
    EXPECT_EQ(s.position(2, 0), 4u);
}

TEST(Build, SmallCases) {
    SpaceSpec one = SpaceSpec::build({1});
    EXPECT_EQ(one.n(), 1u);
    Vec2 x = one.generator(0);
    EXPECT_TRUE(apply_f(one, x).is_zero());
    SpaceSpec two = SpaceSpec::build({2, 2});
    EXPECT_EQ(two.n(), 4u);
    EXPECT_EQ(two.t(0), 2u);
    EXPECT_EQ(two.t(1), 2u);
}

TEST(Build, SortsAndFlags) {
    SpaceSpec s = SpaceSpec::build({6, 1, 3});
    EXPECT_TRUE(s.was_resorted());
    EXPECT_EQ(s.t(), (std::vector<std::size_t>{1, 3, 6}));
    EXPECT_EQ(s, ex());
}

TEST(Build, RejectsBadInput) {
    EXPECT_THROW(SpaceSpec::build({}), HypothesisError);
    EXPECT_THROW(SpaceSpec::build({1, 0}), HypothesisError);
    EXPECT_THROW(SpaceSpec::build({-2}), HypothesisError);
}

TEST(ApplyF, Examples) {
    SpaceSpec s = ex();
    EXPECT_TRUE(apply_f(s, s.generator(0)).is_zero());
    EXPECT_EQ(apply_f(s, v(s, "f^2*u3")), v(s, "f^3*u3"));
    EXPECT_TRUE(apply_f(s, v(s, "f^5*u3")).is_zero());
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        Vec2 x(s.n());
        for (std::size_t i = 0; i < s.n(); ++i)
            if (rng() & 1u) x.set(i);
        EXPECT_TRUE(apply_f_power(s, x, s.n()).is_zero());
    }
}

TEST(ApplyF, MatchesDenseShift) {
    for (auto t : {std::vector<int>{1, 3, 6}, std::vector<int>{2, 2, 5}, std::vector<int>{4}}) {
        SpaceSpec s = SpaceSpec::build(t);
        oracle::Dense f = oracle::shift_matrix(t);
        for (oracle::Word w = 0; w < (oracle::Word{1} << s.n()); w += 7)
            EXPECT_EQ(oracle::to_word(apply_f(s, oracle::to_vec(s.n(), w))), f.apply(w));
    }
}

TEST(ApplyF, LengthMismatch) { EXPECT_THROW(apply_f(ex(), Vec2(9)), DimensionError); }

TEST(Exponent, Examples) {
    SpaceSpec s = ex();
    EXPECT_EQ(exponent(s, s.generator(2)), 6u);
    EXPECT_EQ(exponent(s, s.zero()), 0u);
    EXPECT_EQ(exponent(s, v(s, "f^2*u3")), 4u);
    EXPECT_EQ(exponent(s, s.generator(0)), 1u);
    EXPECT_EQ(exponent(s, s.generator(1)), 3u);
}

TEST(Height, Examples) {
    SpaceSpec s = ex();
    EXPECT_TRUE(height(s, s.zero()).is_infinite());
    for (std::size_t j = 0; j < s.m(); ++j) EXPECT_EQ(height(s, s.generator(j)), Height::finite(0));
    Vec2 x = v(s, "f*u2 + f^4*u3");
    EXPECT_EQ(height(s, x), Height::finite(1));
    // membership scan of f^q V
    EXPECT_TRUE(image_power(s, 1).contains(x));
    EXPECT_FALSE(image_power(s, 2).contains(x));
}

TEST(Height, InfinityIsLargest) {
    EXPECT_LT(Height::finite(100), Height::infinity());
    EXPECT_EQ(Height::infinity(), Height::infinity());
    EXPECT_EQ(Height::infinity().to_string(), "inf");
    EXPECT_THROW(Height::infinity().value(), std::logic_error);
}

TEST(Generators, ExponentAndHeightOfBasisVectors) {
    for (auto t : {std::vector<int>{1, 3, 6}, std::vector<int>{2, 2, 5}, std::vector<int>{1, 1, 4, 4}}) {
        SpaceSpec s = SpaceSpec::build(t);
        for (std::size_t j = 0; j < s.m(); ++j)
            for (std::size_t i = 0; i < s.t(j); ++i) {
                Vec2 b = s.basis_vector(j, i);
                EXPECT_EQ(exponent(s, b), s.t(j) - i);
                EXPECT_EQ(height(s, b), Height::finite(i));
            }
    }
}

TEST(KernelPower, Examples) {
    SpaceSpec s = ex();
    EXPECT_TRUE(kernel_power(s, 0).is_zero());
    EXPECT_EQ(kernel_power(s, s.n()), Subspace::full(s.n()));
    Subspace k1 = kernel_power(s, 1);
    EXPECT_EQ(k1, Subspace::span(s.n(), {v(s, "u1"), v(s, "f^2*u2"), v(s, "f^5*u3")}));
    EXPECT_EQ(k1.dim(), 3u);
}

TEST(KernelPower, IsTheNullspaceOfTheShiftPower) {
    SpaceSpec s = ex();
    for (std::size_t j = 0; j <= s.n(); ++j) {
        Subspace k = kernel_power(s, j);
        for (const auto& b : k.basis()) EXPECT_TRUE(apply_f_power(s, b, j).is_zero());
        std::size_t count = 0;
        for (oracle::Word w = 0; w < (oracle::Word{1} << s.n()); ++w)
            if (apply_f_power(s, oracle::to_vec(s.n(), w), j).is_zero()) ++count;
        EXPECT_EQ(count, std::size_t{1} << k.dim());
    }
}

TEST(ImagePower, Examples) {
    SpaceSpec s = ex();
    EXPECT_EQ(image_power(s, 0), Subspace::full(s.n()));
    EXPECT_TRUE(image_power(s, s.n()).is_zero());
    Subspace i2 = image_power(s, 2);
    EXPECT_EQ(i2.dim(), 5u);
    EXPECT_EQ(i2, Subspace::span(s.n(), {v(s, "f^2*u2"), v(s, "f^2*u3"), v(s, "f^3*u3"), v(s, "f^4*u3"),
                                           v(s, "f^5*u3")}));
    std::vector<Vec2> cols;
    for (std::size_t p = 0; p < s.n(); ++p) cols.push_back(apply_f_power(s, Vec2::unit(s.n(), p), 2));
    EXPECT_EQ(Subspace::span(s.n(), cols), i2);
}

TEST(KernelImage, DimensionFormulas) {
    for (int n = 1; n <= 8; ++n)
        for (const auto& t : partitions(n)) {
            SpaceSpec s = SpaceSpec::build(t);
            for (std::size_t j = 0; j <= s.n(); ++j) {
                std::size_t kd = 0, id = 0;
                for (auto tj : s.t()) {
                    kd += std::min(j, tj);
                    id += tj > j ? tj - j : 0;
                }
                EXPECT_EQ(kernel_power(s, j).dim(), kd);
                EXPECT_EQ(image_power(s, j).dim(), id);
                EXPECT_EQ(kd + id, s.n());
            }
        }
}

TEST(CyclicSpan, Examples) {
    SpaceSpec s = ex();
    EXPECT_TRUE(cyclic_span(s, s.zero()).is_zero());
    EXPECT_EQ(cyclic_span(s, s.generator(1)).dim(), 3u);
    Subspace c = cyclic_span(s, v(s, "u1 + f*u2"));
    EXPECT_EQ(c, Subspace::span(s.n(), {v(s, "u1 + f*u2"), v(s, "f^2*u2")}));
    EXPECT_EQ(c.dim(), 2u);
}

TEST(CyclicSpan, DimensionIsExponent) {
    SpaceSpec s = ex();
    for (oracle::Word w = 0; w < (oracle::Word{1} << s.n()); w += 3) {
        Vec2 x = oracle::to_vec(s.n(), w);
        EXPECT_EQ(cyclic_span(s, x).dim(), exponent(s, x));
    }
}

TEST(Projection, Examples) {
    SpaceSpec s = ex();
    EXPECT_EQ(projection(s, 0, v(s, "u1 + f*u2 + f^2*u3")), v(s, "u1"));
    EXPECT_TRUE(projection(s, 2, s.zero()).is_zero());
    EXPECT_EQ(projection(s, 1, v(s, "f*u2 + f^3*u3")), v(s, "f*u2"));
    EXPECT_THROW(projection(s, 3, s.zero()), DimensionError);
}

TEST(Projection, CommutesWithF) {
    SpaceSpec s = ex();
    for (oracle::Word w = 0; w < (oracle::Word{1} << s.n()); w += 5) {
        Vec2 x = oracle::to_vec(s.n(), w);
        for (std::size_t j = 0; j < s.m(); ++j) EXPECT_EQ(apply_f(s, projection(s, j, x)), projection(s, j, apply_f(s, x)));
    }
}

TEST(IsGenerator, Examples) {
    SpaceSpec s = ex();
    EXPECT_EQ(is_generator(s, v(s, "u2 + f^3*u3")), 3u);
    for (std::size_t j = 0; j < s.m(); ++j) EXPECT_EQ(is_generator(s, s.generator(j)), s.t(j));
    EXPECT_FALSE(is_generator(s, v(s, "f*u2")).has_value());
    EXPECT_FALSE(is_generator(s, s.zero()).has_value());
    // exponent 2 is not an elementary divisor
    EXPECT_FALSE(is_generator(s, v(s, "f^4*u3")).has_value());
}

TEST(IsGenerator, IffCyclicSummandWithInvariantComplement) {
    for (int n = 1; n <= 6; ++n)
        for (const auto& t : partitions(n)) {
            SpaceSpec s = SpaceSpec::build(t);
            auto inv = enumerate_invariant_subspaces(s);
            for (oracle::Word w = 1; w < (oracle::Word{1} << s.n()); ++w) {
                Vec2 x = oracle::to_vec(s.n(), w);
                Subspace cx = cyclic_span(s, x);
                bool split = false;
                for (const auto& c : inv)
                    if (c.dim() + cx.dim() == s.n() && subspace_intersect(c, cx).is_zero()) {
                        split = true;
                        break;
                    }
                auto g = is_generator(s, x);
                EXPECT_EQ(g.has_value(), split) << "t-size " << s.m() << " x " << x.to_string();
                if (g) {
                    EXPECT_EQ(*g, exponent(s, x));
                }
            }
        }
}

TEST(Unrepeated, Examples) {
    EXPECT_EQ(unrepeated_indices(ex()), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_TRUE(unrepeated_indices(SpaceSpec::build({2, 2})).empty());
    EXPECT_EQ(unrepeated_indices(SpaceSpec::build({1, 2, 2, 5})), (std::vector<std::size_t>{0, 3}));
}

TEST(Ulm, Examples) {
    SpaceSpec s = ex();
    EXPECT_EQ(ulm_invariant(s, 5), 1u);
    EXPECT_EQ(ulm_invariant(s, s.n()), 0u);
    EXPECT_EQ(ulm_invariant(s, s.n() + 3), 0u);
    EXPECT_EQ(ulm_invariant(SpaceSpec::build({2, 2}), 1), 2u);
}

TEST(Ulm, CountsMultiplicities) {
    for (int n = 1; n <= 8; ++n)
        for (const auto& t : partitions(n)) {
            SpaceSpec s = SpaceSpec::build(t);
            for (std::size_t q = 0; q <= s.n(); ++q) {
                std::size_t mult = static_cast<std::size_t>(std::count(s.t().begin(), s.t().end(), q + 1));
                EXPECT_EQ(ulm_invariant(s, q), mult);
            }
            for (std::size_t j = 0; j < s.m(); ++j)
                EXPECT_EQ(is_unrepeated(s, j), ulm_invariant(s, s.t(j) - 1) == 1);
        }
}

TEST(Parse, RunningExampleVector) {
    SpaceSpec s = ex();
    Vec2 z = v(s, "u1 + f*u2 + f^2*u3");
    EXPECT_EQ(z, s.generator(0) ^ s.basis_vector(1, 1) ^ s.basis_vector(2, 2));
    EXPECT_TRUE(v(s, "0").is_zero());
    Vec2 last = v(s, "f^5*u3");
    EXPECT_EQ(last.lowest(), s.n() - 1);
    EXPECT_EQ(v(s, "  f^1 * u2+u1 "), v(s, "u1 + f*u2"));
    EXPECT_TRUE(v(s, "u1 + u1").is_zero());
}

TEST(Parse, Errors) {
    SpaceSpec s = ex();
    EXPECT_THROW(v(s, "u4"), ParseError);
    EXPECT_THROW(v(s, "u0"), ParseError);
    EXPECT_THROW(v(s, "f^3*u2"), ParseError);
    EXPECT_THROW(v(s, "u1 +"), ParseError);
    EXPECT_THROW(v(s, "u1 u2"), ParseError);
    EXPECT_THROW(v(s, "g*u1"), ParseError);
    EXPECT_THROW(v(s, ""), ParseError);
    try {
        v(s, "u1 + q");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 5u);
    }
}

TEST(Parse, FormatRoundTrip) {
    SpaceSpec s = ex();
    EXPECT_EQ(format_vector(s, v(s, "f^2*u3 + u1 + f*u2")), "u1 + f*u2 + f^2*u3");
    EXPECT_EQ(format_vector(s, s.zero()), "0");
    for (oracle::Word w = 0; w < (oracle::Word{1} << s.n()); w += 11) {
        Vec2 x = oracle::to_vec(s.n(), w);
        EXPECT_EQ(v(s, format_vector(s, x).c_str()), x);
    }
}

TEST(InvariantSubspaces, MatchBruteForce) {
    for (int n = 1; n <= 4; ++n)
        for (const auto& t : partitions(n)) {
            SpaceSpec s = SpaceSpec::build(t);
            std::set<oracle::ElementSet> ours;
            for (const auto& x : enumerate_invariant_subspaces(s)) {
                EXPECT_TRUE(is_invariant(s, x));
                ours.insert(oracle::element_set(x));
            }
            EXPECT_EQ(ours, invariant_by_brute_force(t, s.n()));
        }
}

TEST(InvariantSubspaces, MatchFilteredFullScan) {
    for (int n = 5; n <= 6; ++n)
        for (const auto& t : partitions(n)) {
            SpaceSpec s = SpaceSpec::build(t);
            std::set<Subspace> scan;
            auto st = enumerate_subspaces(Subspace::full(s.n()));
            while (auto x = st.next())
                if (is_invariant(s, *x)) scan.insert(*x);
            auto inv = enumerate_invariant_subspaces(s);
            EXPECT_EQ(std::set<Subspace>(inv.begin(), inv.end()), scan);
            EXPECT_EQ(inv.size(), scan.size());
        }
}

TEST(InvariantSubspaces, CapIsAHardError) {
    EXPECT_THROW(enumerate_invariant_subspaces(SpaceSpec::build({1, 1, 1, 1, 1}), 100), ResourceError);
}
