#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stellar/conversion.hpp"
#include "stellar/state_zoo.hpp"

using namespace stellar;

namespace {

// Hand-built profile with zero spreads for the pure-arithmetic tests.
StellarProfile fixed_profile(std::vector<double> values) {
    StellarProfile p;
    p.n_max = static_cast<int>(values.size()) - 1;
    p.values = std::move(values);
    p.flags.assign(p.values.size(), false);
    p.entries.assign(p.values.size(), FidelityResult{});
    return p;
}

const double kF1 = 3.0 * std::sqrt(3.0) / (4.0 * std::exp(1.0));

} // namespace

TEST_CASE("scenario validation") {
    ConversionScenario s;
    s.flavor = ConversionFlavor::subadditive;
    s.target_copies = 2;
    CHECK_THROWS_AS(s.validate(), parameter_error);
    s.target_copies = 1;
    CHECK_NOTHROW(s.validate());
    s.input_copies = 0;
    CHECK_THROWS_AS(s.validate(), parameter_error);
}

TEST_CASE("exact bound check") {
    StellarProfile two = fixed_profile({0.38, 0.56, 1.0});
    StellarProfile oo = fixed_profile({0.25, kF1, 1.0});

    // |2> -> |1,1>: violated already at n=0 for every p.
    for (double p : {0.1, 0.5, 1.0}) {
        auto v = exact_bound_check(two, oo, p);
        CHECK(v[0] == BoundVerdict::violated);
    }
    // Identical profiles at p=1: never violated.
    for (BoundVerdict v : exact_bound_check(two, two, 1.0))
        CHECK(v == BoundVerdict::consistent);
    // Tiny p censors every n >= 1 past the profile cap.
    auto v = exact_bound_check(two, oo, 1e-3);
    CHECK(v[1] == BoundVerdict::inconclusive);
    CHECK(v[2] == BoundVerdict::inconclusive);
    CHECK_THROWS_AS(exact_bound_check(two, oo, 0.0), parameter_error);
}

TEST_CASE("multicopy no-go region: |2> -> |1,1>") {
    StellarProfile two = fixed_profile({0.38, 0.56, 1.0});
    StellarProfile oo = fixed_profile({0.25, kF1, 1.0});
    NoGoRegion r = nogo_region_multicopy(two, oo);
    CHECK(!r.empty());
    // The n=0, q=0 rectangle spans (0,1] x [0, 0.13) and dominates the rest.
    double best = 0.0;
    for (const auto& rect : r.rectangles) {
        if (rect.n == 0 && rect.q == 0) {
            CHECK(rect.p_gt == 0.0);
            CHECK(rect.delta_lt == doctest::Approx(0.13).epsilon(1e-9));
        }
        CHECK(rect.delta_lt <= 0.13 + 1e-12);
        best = std::max(best, rect.delta_lt);
    }
    CHECK(best == doctest::Approx(0.13));
    for (double p : {0.01, 0.3, 1.0}) CHECK(r.delta_at(p) == doctest::Approx(0.13));
    CHECK(r.excludes(0.5, 0.12));
    CHECK(!r.excludes(0.5, 0.14));

    // Identical input and target: empty region.
    CHECK(nogo_region_multicopy(two, two).empty());
    // Vacuum target has f_q = 1 everywhere: nothing exceeds it.
    CHECK(nogo_region_multicopy(two, fixed_profile({1.0})).empty());
}

TEST_CASE("mixed purity squares the extent") {
    StellarProfile in = fixed_profile({0.5, 1.0});
    StellarProfile out = fixed_profile({0.2, 0.6, 1.0});
    NoGoRegion pure = nogo_region_multicopy(in, out, Purity::pure);
    NoGoRegion mixed = nogo_region_multicopy(in, out, Purity::mixed);
    REQUIRE(pure.rectangles.size() == mixed.rectangles.size());
    for (std::size_t i = 0; i < pure.rectangles.size(); ++i) {
        const double g = pure.rectangles[i].delta_lt;
        CHECK(mixed.rectangles[i].delta_lt == doctest::Approx(0.5 * g * g));
    }
}

TEST_CASE("boundary is a non-decreasing step function") {
    StellarProfile in = fixed_profile({0.5, 0.8, 1.0});
    StellarProfile out = fixed_profile({0.1, 0.3, 0.45, 0.7, 0.9, 1.0});
    NoGoRegion r = nogo_region_multicopy(in, out);
    auto b = r.boundary();
    REQUIRE(!b.empty());
    for (std::size_t i = 1; i < b.size(); ++i) {
        CHECK(b[i].first > b[i - 1].first);
        CHECK(b[i].second > b[i - 1].second);
    }
    // Region monotonicity on sampled points.
    for (double p = 0.05; p <= 1.0; p += 0.05)
        for (double p2 = p; p2 <= 1.0; p2 += 0.1)
            CHECK(r.delta_at(p2) >= r.delta_at(p));
}

TEST_CASE("sub-additive region reduces to multicopy at k=1") {
    StellarProfile in = fixed_profile({0.5, 1.0});
    StellarProfile out = fixed_profile({0.1, 0.3, 0.6, 1.0});
    NoGoRegion sub = nogo_region_subadditive(in, 1, out);
    NoGoRegion multi = nogo_region_multicopy(in, out);
    // Same formula at k=1: 1 - f_q - (1 - f_n) = f_n - f_q.
    for (double p : {0.2, 0.5, 0.9})
        CHECK(sub.delta_at(p) == doctest::Approx(multi.delta_at(p)));
}

TEST_CASE("sub-additive regions shrink with copy count") {
    StellarProfile in = fixed_profile({kF1, 1.0}); // single photon
    StellarProfile gkp_like =
        fixed_profile({0.3, 0.5, 0.62, 0.7, 0.76, 0.81, 0.85, 0.88, 0.9, 0.92, 0.94, 0.95, 0.96});
    NoGoRegion prev = nogo_region_subadditive(in, 1, gkp_like);
    CHECK(prev.delta_at(0.5) > 0.0);
    for (int k = 2; k <= 5; ++k) {
        NoGoRegion cur = nogo_region_subadditive(in, k, gkp_like);
        for (double p = 0.05; p <= 1.0; p += 0.05)
            CHECK(cur.delta_at(p) <= prev.delta_at(p) + 1e-12);
        prev = cur;
    }
}

TEST_CASE("sub-additive region is contained in the multicopy region") {
    // k=2 copies of |1>: sub-additive bound vs the direct |1,1> profile.
    StellarProfile single = fixed_profile({kF1, 1.0});
    StellarProfile direct = fixed_profile({0.25, kF1, 1.0});
    StellarProfile out = fixed_profile({0.1, 0.2, 0.35, 0.5, 0.7, 0.9, 1.0});
    NoGoRegion sub = nogo_region_subadditive(single, 2, out);
    NoGoRegion multi = nogo_region_multicopy(direct, out);
    for (double p = 0.05; p <= 1.0; p += 0.05)
        CHECK(sub.delta_at(p) <= multi.delta_at(p) + 1e-12);
}

TEST_CASE("certification honors the target confidence spread") {
    StellarProfile in = fixed_profile({0.5, 1.0});
    StellarProfile out = fixed_profile({0.499, 1.0});
    out.entries[0].spread = 0.01; // wider than the 0.001 gap
    NoGoRegion r = nogo_region_multicopy(in, out);
    REQUIRE(r.rectangles.size() == 1);
    CHECK(!r.rectangles[0].certified);
    out.entries[0].spread = 1e-5;
    NoGoRegion r2 = nogo_region_multicopy(in, out);
    CHECK(r2.rectangles[0].certified);
}

TEST_CASE("protocol assessment") {
    StellarProfile in = fixed_profile({0.38, 0.56, 1.0});
    StellarProfile out = fixed_profile({0.25, kF1, 1.0});
    NoGoRegion r = nogo_region_multicopy(in, out);

    // Perfect conversion claim sits inside the no-go region.
    AssessResult perfect = assess_protocol(r, 0.5, 1.0);
    CHECK(perfect.inside_nogo);
    CHECK(perfect.delta == 0.0);

    // A lossy protocol well above the boundary is consistent.
    AssessResult lossy = assess_protocol(r, 0.5, 0.9);
    CHECK(!lossy.inside_nogo);
    CHECK(lossy.delta == doctest::Approx(std::sqrt(0.1)));
    CHECK(lossy.delta_margin > 0.0);

    // Monotone in F at fixed p.
    double prev_margin = 1e300;
    for (double F : {0.5, 0.7, 0.9, 0.99, 1.0}) {
        AssessResult a = assess_protocol(r, 0.5, F);
        CHECK(a.delta_margin <= prev_margin);
        prev_margin = a.delta_margin;
    }

    // Empty region: always outside.
    NoGoRegion empty;
    CHECK(!assess_protocol(empty, 0.5, 1.0).inside_nogo);
    CHECK_THROWS_AS(assess_protocol(r, 0.0, 0.5), parameter_error);
    CHECK_THROWS_AS(assess_protocol(r, 0.5, 1.5), parameter_error);
}

TEST_CASE("Wigner-negativity comparator") {
    CHECK(wln_bound_check(0.55, 0.71, 0.8));   // ruled out
    CHECK(!wln_bound_check(0.55, 0.71, 0.5));  // allowed
    CHECK(!wln_bound_check(0.4, 0.4, 1.0));    // equal values never violate
    // Threshold p* = w_in / w_out.
    const double p_star = 0.55 / 0.71;
    CHECK(wln_bound_check(0.55, 0.71, p_star + 1e-6));
    CHECK(!wln_bound_check(0.55, 0.71, p_star - 1e-6));
    CHECK_THROWS_AS(wln_bound_check(0.5, 0.5, 0.0), parameter_error);
}
