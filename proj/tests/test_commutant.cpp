#include <gtest/gtest.h>

#include <random>
#include <set>

#include "chinv/commutant.hpp"
#include "chinv/hyperlattice.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace chinv;

namespace {

SpaceSpec ex() { return SpaceSpec::build({1, 3, 6}); }

Vec2 v(const SpaceSpec& s, const char* e) { return parse_vector(s, e); }

std::vector<Vec2> vs(const SpaceSpec& s, std::initializer_list<const char*> es) {
    std::vector<Vec2> out;
    for (auto e : es) out.push_back(v(s, e));
    return out;
}

Subspace span(const SpaceSpec& s, std::initializer_list<const char*> es) { return Subspace::span(s.n(), vs(s, es)); }

oracle::Dense dense(const FEndo& e) {
    const std::size_t n = e.columns().size();
    oracle::Dense d{n, std::vector<oracle::Word>(n, 0)};
    for (std::size_t c = 0; c < n; ++c)
        e.columns()[c].for_each_set_bit([&](std::size_t r) { d.rows[r] |= oracle::Word{1} << c; });
    return d;
}

std::vector<FEndo> all_endos(const Commutant& c) {
    std::vector<FEndo> out;
    auto st = c.endo_stream();
    while (auto e = st.next()) out.push_back(*e);
    return out;
}

std::vector<FEndo> all_autos(const Commutant& c) {
    std::vector<FEndo> out;
    auto st = c.auto_stream();
    while (auto e = st.next()) out.push_back(*e);
    return out;
}

using support::partitions;
using support::partitions_up_to;

}  // namespace

TEST(Dimension, RunningExample) {
    Commutant c(ex());
    EXPECT_EQ(c.dim(), 20u);
    EXPECT_EQ(c.endo_count(), std::uint64_t{1} << 20);
}

TEST(Dimension, MatchesLinearSystem) {
    for (const auto& t : partitions_up_to(1, 10)) {
        Commutant c(SpaceSpec::build(t));
        EXPECT_EQ(c.dim(), oracle::commutant_dimension_linear(t)) << ::testing::PrintToString(t);
    }
}

TEST(Dimension, MinFormula) {
    for (const auto& t : partitions_up_to(1, 12)) {
        std::size_t d = 0;
        for (int a : t)
            for (int b : t) d += static_cast<std::size_t>(std::min(a, b));
        EXPECT_EQ(Commutant(SpaceSpec::build(t)).dim(), d);
    }
}

TEST(Endomorphisms, MatchDenseScan) {
    for (const auto& t : partitions_up_to(1, 4)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        auto brute = oracle::commuting_matrices(oracle::shift_matrix(t));
        std::set<std::vector<oracle::Word>> want, got;
        for (const auto& a : brute) want.insert(a.rows);
        for (const auto& e : all_endos(c)) got.insert(dense(e).rows);
        EXPECT_EQ(got, want) << ::testing::PrintToString(t);
        EXPECT_EQ(c.endo_count(), brute.size());

        std::size_t inv = 0;
        for (const auto& a : brute) inv += oracle::invertible(a) ? 1 : 0;
        EXPECT_EQ(c.automorphism_count(), inv);
        EXPECT_EQ(all_autos(c).size(), inv);
    }
}

TEST(Endomorphisms, CommuteWithF) {
    SpaceSpec s = ex();
    Commutant c(s);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        FEndo e = c.from_index(rng() & ((std::uint64_t{1} << 20) - 1));
        for (std::size_t p = 0; p < s.n(); ++p) {
            Vec2 x = Vec2::unit(s.n(), p);
            EXPECT_EQ(e.apply(apply_f(s, x)), apply_f(s, e.apply(x)));
        }
    }
}

TEST(Endomorphisms, CoordinatesRoundTrip) {
    Commutant c(ex());
    std::mt19937_64 rng(4);
    for (int k = 0; k < 100; ++k) {
        std::uint64_t code = rng() & ((std::uint64_t{1} << 20) - 1);
        FEndo e = c.from_index(code);
        Vec2 coords = c.coordinates(e);
        EXPECT_EQ(c.from_coordinates(coords), e);
    }
    EXPECT_EQ(c.basis().size(), 20u);
}

TEST(Endomorphisms, ImageMustLieInKernel) {
    SpaceSpec s = ex();
    // u1 has exponent 1, so its image must be killed by f.
    EXPECT_THROW(FEndo::from_generator_images(s, vs(s, {"u2", "u2", "u3"})), HypothesisError);
    EXPECT_THROW(FEndo::from_generator_images(s, vs(s, {"u1"})), DimensionError);
    EXPECT_NO_THROW(FEndo::from_generator_images(s, vs(s, {"f^5*u3", "u2 + f^3*u3", "u3"})));
}

TEST(Automorphisms, SmallCounts) {
    EXPECT_EQ(Commutant(SpaceSpec::build({1})).automorphism_count(), 1u);
    EXPECT_EQ(Commutant(SpaceSpec::build({1, 1})).automorphism_count(), 6u);
    EXPECT_EQ(Commutant(SpaceSpec::build({1, 1, 1})).automorphism_count(), 168u);
    EXPECT_EQ(Commutant(SpaceSpec::build({3})).automorphism_count(), 4u);
}

TEST(Automorphisms, ParallelSlicesAgree) {
    SpaceSpec s = ex();
    Caps one, four;
    four.threads = 4;
    Commutant a(s, one), b(s, four);
    EXPECT_EQ(a.automorphism_count(), b.automorphism_count());
    Vec2 x = v(s, "u1 + f*u2");
    EXPECT_EQ(a.orbit(x).elements, b.orbit(x).elements);
}

TEST(Automorphisms, StreamSlicesPartition) {
    Commutant c(SpaceSpec::build({1, 2, 2}));
    std::uint64_t total = c.endo_count();
    std::size_t pieces = 0;
    for (std::uint64_t lo = 0; lo < total; lo += 37) {
        auto st = c.auto_stream(lo, std::min(total, lo + 37));
        while (st.next()) ++pieces;
    }
    EXPECT_EQ(pieces, c.automorphism_count());
}

TEST(Automorphisms, PreserveExponentAndHeight) {
    SpaceSpec s = ex();
    Commutant c(s);
    std::mt19937_64 rng(5);
    std::vector<FEndo> autos;
    auto st = c.auto_stream();
    while (autos.size() < 64) {
        auto e = st.next();
        if (!e) break;
        if (rng() % 97 == 0 || autos.empty()) autos.push_back(*e);
    }
    for (const auto& a : autos)
        for (int k = 0; k < 50; ++k) {
            Vec2 x = oracle::to_vec(s.n(), static_cast<oracle::Word>(rng() & 1023u));
            EXPECT_EQ(exponent(s, a.apply(x)), exponent(s, x));
            EXPECT_EQ(height(s, a.apply(x)), height(s, x));
        }
}

TEST(Orbit, UnrepeatedGenerator) {
    SpaceSpec s = ex();
    Commutant c(s);
    auto o = c.orbit(s.generator(0));
    Subspace dir = span(s, {"f^2*u2", "f^5*u3"});
    ASSERT_EQ(o.elements.size(), 4u);
    for (const auto& y : o.elements) EXPECT_TRUE(dir.contains(y ^ s.generator(0)));
}

TEST(Orbit, OfFu2) {
    SpaceSpec s = ex();
    Commutant c(s);
    Vec2 x = v(s, "f*u2");
    auto o = c.orbit(x);
    Subspace dir = span(s, {"f^2*u2", "f^4*u3", "f^5*u3"});
    ASSERT_EQ(o.elements.size(), 8u);
    for (const auto& y : o.elements) EXPECT_TRUE(dir.contains(y ^ x));
}

TEST(Orbit, OfZero) {
    SpaceSpec s = ex();
    auto o = Commutant(s).orbit(s.zero());
    ASSERT_EQ(o.elements.size(), 1u);
    EXPECT_TRUE(o.elements[0].is_zero());
}

TEST(Orbit, ClosedFormForUnrepeatedGenerators) {
    for (const auto& t : partitions_up_to(1, 8)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        if (c.dim() > 24) continue;
        for (std::size_t i : unrepeated_indices(s))
            EXPECT_EQ(unrepeated_generator_orbit(s, i).elements(), c.orbit(s.generator(i)).elements)
                << ::testing::PrintToString(t) << " i=" << i;
    }
    SpaceSpec s = SpaceSpec::build({2, 2});
    EXPECT_THROW(unrepeated_generator_orbit(s, 0), HypothesisError);
}

TEST(Hull, CharacteristicExamples) {
    SpaceSpec s = ex();
    Commutant c(s);
    Subspace g = c.characteristic_hull({v(s, "u1 + f*u2 + f^2*u3")});
    EXPECT_EQ(g.dim(), 5u);
    EXPECT_EQ(g, invariant_span(s, vs(s, {"u1 + f*u2 + f^2*u3", "f^2*u2", "f^3*u3"})));
    Subspace f = c.characteristic_hull(vs(s, {"u1 + f*u2", "f*u2 + f^2*u3"}));
    EXPECT_EQ(f.dim(), 6u);
    EXPECT_EQ(f, invariant_span(s, vs(s, {"u1 + f*u2", "f*u2 + f^2*u3"})));
}

TEST(Hull, HyperinvariantExamples) {
    SpaceSpec s = ex();
    Commutant c(s);
    Subspace h = c.hyperinvariant_hull({s.generator(0)});
    EXPECT_EQ(h, w_subspace(s, RTuple(s, {0, 2, 5})));
    Subspace g = c.characteristic_hull({v(s, "u1 + f*u2 + f^2*u3")});
    EXPECT_EQ(c.hyperinvariant_hull(g.basis()), w_subspace(s, RTuple(s, {0, 1, 2})));
}

TEST(Hull, SmallestContaining) {
    for (const auto& t : partitions_up_to(1, 6)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        if (c.dim() > 24) continue;
        auto inv = enumerate_invariant_subspaces(s);
        auto chr = c.characteristic_by_enumeration(inv);
        for (oracle::Word w = 0; w < (oracle::Word{1} << s.n()); ++w) {
            Vec2 x = oracle::to_vec(s.n(), w);
            Subspace hc = c.characteristic_hull({x});
            Subspace hh = c.hyperinvariant_hull({x});
            ASSERT_TRUE(c.is_characteristic(hc));
            ASSERT_TRUE(c.is_hyperinvariant(hh));
            for (std::size_t k = 0; k < inv.size(); ++k) {
                if (!inv[k].contains(x)) continue;
                if (chr[k]) {
                    EXPECT_TRUE(inv[k].contains(hc));
                }
                if (c.is_hyperinvariant(inv[k])) {
                    EXPECT_TRUE(inv[k].contains(hh));
                }
            }
        }
    }
}

TEST(Classify, Examples) {
    SpaceSpec s = ex();
    Commutant c(s);
    Subspace g = c.characteristic_hull({v(s, "u1 + f*u2 + f^2*u3")});
    EXPECT_EQ(c.classify(g), (Classification{true, true, false}));
    EXPECT_EQ(c.classify(w_subspace(s, RTuple(s, {0, 1, 2}))), (Classification{true, true, true}));
    EXPECT_EQ(c.classify(span(s, {"u1"})), (Classification{true, false, false}));
    EXPECT_EQ(c.classify(span(s, {"u2"})), (Classification{false, false, false}));
    EXPECT_EQ(c.classify(Subspace::zero(s.n())), (Classification{true, true, true}));
    EXPECT_EQ(c.classify(Subspace::full(s.n())), (Classification{true, true, true}));
    EXPECT_THROW(c.classify(Subspace::zero(3)), DimensionError);
}

TEST(Classify, LinearTestMatchesEnumeration) {
    for (const auto& t : partitions_up_to(1, 6)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        if (c.dim() > 24) continue;
        auto inv = enumerate_invariant_subspaces(s);
        auto lit = c.characteristic_by_enumeration(inv);
        for (std::size_t k = 0; k < inv.size(); ++k)
            EXPECT_EQ(c.is_characteristic(inv[k]), lit[k]) << ::testing::PrintToString(t) << " #" << k;
    }
}

TEST(Classify, MatchesDenseBruteForce) {
    for (const auto& t : partitions_up_to(1, 4)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        auto all = oracle::commuting_matrices(oracle::shift_matrix(t));
        std::vector<oracle::Dense> units;
        for (const auto& a : all)
            if (oracle::invertible(a)) units.push_back(a);
        for (const auto& x : enumerate_invariant_subspaces(s)) {
            auto e = oracle::element_set(x);
            EXPECT_EQ(c.is_hyperinvariant(x), oracle::stable_under(e, s.n(), all));
            EXPECT_EQ(c.is_characteristic(x), oracle::stable_under(e, s.n(), units));
        }
    }
}

TEST(Classify, HyperinvariantIffBothHulls) {
    for (const auto& t : partitions_up_to(1, 6)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        for (const auto& x : enumerate_invariant_subspaces(s)) {
            bool both = c.characteristic_hull(x.basis()) == x && c.hyperinvariant_hull(x.basis()) == x;
            EXPECT_EQ(c.is_hyperinvariant(x), both);
        }
    }
}

TEST(Classify, ProjectionsInsideHyperinvariantHull) {
    for (const auto& t : partitions_up_to(2, 6)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        for (const auto& x : enumerate_invariant_subspaces(s)) {
            Subspace h = c.hyperinvariant_hull(x.basis());
            for (std::size_t j = 0; j < s.m(); ++j) EXPECT_TRUE(h.contains(project_subspace(s, j, x)));
        }
    }
}

TEST(UnitSpan, ExhaustiveFallback) {
    Commutant c(SpaceSpec::build({1, 1, 2, 3}));
    EXPECT_EQ(c.dim(), 21u);
    EXPECT_EQ(c.unit_span_basis().size(), 20u);
    EXPECT_FALSE(c.units_span_all());
    Caps shallow;
    shallow.unit_samples = 0;
    EXPECT_EQ(Commutant(SpaceSpec::build({1, 1, 2, 3}), shallow).unit_span_basis().size(), 20u);
}

TEST(UnitSpan, MatchesSpanOfDenseUnits) {
    for (const auto& t : partitions_up_to(1, 4)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        std::vector<Vec2> flat;
        for (const auto& a : oracle::commuting_matrices(oracle::shift_matrix(t))) {
            if (!oracle::invertible(a)) continue;
            Vec2 row(s.n() * s.n());
            for (std::size_t r = 0; r < s.n(); ++r)
                for (std::size_t k = 0; k < s.n(); ++k)
                    if ((a.rows[r] >> k) & 1u) row.set(r * s.n() + k);
            flat.push_back(row);
        }
        EXPECT_EQ(c.unit_span_basis().size(), Subspace::span(s.n() * s.n(), flat).dim())
            << ::testing::PrintToString(t);
    }
}

TEST(UnitSpan, DimensionFormulaMatchesFullEnumeration) {
    for (const auto& t : partitions_up_to(1, 8)) {
        SpaceSpec s = SpaceSpec::build(t);
        Commutant c(s);
        if (c.dim() > 18) continue;
        IncrementalBasis all(c.dim());
        auto st = c.auto_stream();
        while (auto e = st.next()) all.insert(c.coordinates(*e));
        EXPECT_EQ(all.dim(), c.unit_span_dim()) << ::testing::PrintToString(t);
        EXPECT_EQ(c.unit_span_basis().size(), all.dim());
        for (const auto& e : c.unit_span_basis()) EXPECT_TRUE(all.contains(c.coordinates(e)));
    }
}

TEST(UnitSpan, ReachedBySamplingBeyondEnumerationCap) {
    for (const auto& t : partitions_up_to(9, 12)) {
        Commutant c(SpaceSpec::build(t));
        EXPECT_EQ(c.unit_span_basis().size(), c.unit_span_dim()) << ::testing::PrintToString(t);
    }
}

TEST(UnitSpan, SpansAllForEqualBlocks) {
    EXPECT_TRUE(Commutant(SpaceSpec::build({2, 2})).units_span_all());
    EXPECT_TRUE(Commutant(SpaceSpec::build({3, 3, 3})).units_span_all());
    EXPECT_FALSE(Commutant(SpaceSpec::build({1, 3})).units_span_all());
}

TEST(Exchange, Example) {
    SpaceSpec s = ex();
    Commutant c(s);
    Vec2 x = v(s, "u1 + f^2*u2 + f^5*u3");
    FEndo a = c.exchange_automorphism(0, x);
    EXPECT_TRUE(a.is_invertible());
    EXPECT_EQ(a.apply(s.generator(0)), x);
    EXPECT_EQ(a.apply(s.generator(1)), s.generator(1));
    EXPECT_EQ(a.apply(s.generator(2)), s.generator(2));
}

TEST(Exchange, Errors) {
    SpaceSpec s = ex();
    Commutant c(s);
    EXPECT_THROW(c.exchange_automorphism(0, v(s, "u2")), HypothesisError);
    EXPECT_THROW(c.exchange_automorphism(5, s.generator(0)), DimensionError);
    SpaceSpec r = SpaceSpec::build({2, 2});
    EXPECT_THROW(Commutant(r).exchange_automorphism(0, r.generator(1)), HypothesisError);
}

TEST(Caps, EnumerationGuard) {
    Caps tight;
    tight.endo_dim = 10;
    Commutant c(ex(), tight);
    EXPECT_THROW(c.automorphism_count(), ResourceError);
    EXPECT_NO_THROW(c.is_hyperinvariant(Subspace::zero(10)));
}
