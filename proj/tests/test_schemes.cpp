#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "twrc/region.hpp"
#include "twrc/schemes.hpp"

using namespace twrc;
using Catch::Matchers::WithinAbs;

namespace {

// Bound c of the unique stored constraint with coefficients (a, b).
std::optional<double> bound_of(const RateRegion& region, int a, int b) {
    std::optional<double> found;
    for (const auto& lc : region.constraints()) {
        if (lc.a == a && lc.b == b) {
            REQUIRE_FALSE(found.has_value());
            found = lc.c;
        }
    }
    return found;
}

ChannelParams uplink(double p1, double p2, double n0) {
    return ChannelParams{p1, p2, n0, std::nullopt};
}

ChannelParams random_config(std::mt19937& rng, bool allow_downlink) {
    std::uniform_real_distribution<double> power(0.1, 40.0);
    std::uniform_real_distribution<double> noise(0.5, 4.0);
    std::bernoulli_distribution coin(0.5);
    ChannelParams params{power(rng), power(rng), noise(rng), std::nullopt};
    if (allow_downlink && coin(rng))
        params.downlink = Downlink{power(rng), noise(rng), noise(rng)};
    return params;
}

}  // namespace

TEST_CASE("outer bound folds uplink and downlink cuts") {
    const auto uplink_only = outer_bound_region(uplink(2, 2, 2));
    CHECK_THAT(*bound_of(uplink_only, 1, 0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(*bound_of(uplink_only, 0, 1), WithinAbs(0.5, 1e-15));
    CHECK(uplink_only.size() == 2);

    const auto zero_power = outer_bound_region(uplink(0, 2, 2));
    CHECK(*bound_of(zero_power, 1, 0) == 0.0);
    CHECK_THAT(*bound_of(zero_power, 0, 1), WithinAbs(0.5, 1e-15));

    // Downlink C(6/3) = 1.0 and C(6/2) = 0.792481 do not bind at min(.)
    const auto with_dl = outer_bound_region({2, 2, 2, Downlink{6, 3, 2}});
    CHECK_THAT(*bound_of(with_dl, 1, 0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(*bound_of(with_dl, 0, 1), WithinAbs(0.5, 1e-15));
    CHECK(with_dl.size() == 2);
}

TEST_CASE("cdf region is the multiple-access pentagon") {
    const auto region = cdf_region(uplink(2, 2, 2));
    CHECK_THAT(*bound_of(region, 1, 0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(*bound_of(region, 0, 1), WithinAbs(0.5, 1e-15));
    CHECK_THAT(*bound_of(region, 1, 1), WithinAbs(0.79248125036057804, 1e-15));

    const auto m = max_sum_rate(region);
    CHECK_THAT(m.value, WithinAbs(0.79248125036057804, 1e-12));
    CHECK_THAT(m.argmax.r1, WithinAbs(0.5, 1e-12));
    CHECK_THAT(m.argmax.r2, WithinAbs(0.29248125036057804, 1e-12));

    const auto skewed = cdf_region(uplink(10, 2, 2));
    CHECK_THAT(*bound_of(skewed, 1, 0), WithinAbs(1.292481250360578, 1e-15));
    CHECK_THAT(*bound_of(skewed, 0, 1), WithinAbs(0.5, 1e-15));
    CHECK_THAT(*bound_of(skewed, 1, 1), WithinAbs(1.4036774610288021, 1e-15));
}

TEST_CASE("cdf region degenerates at zero power") {
    const auto region = cdf_region(uplink(0, 0, 2));
    const auto m = max_sum_rate(region);
    CHECK(m.value == 0.0);
    CHECK(m.argmax == RatePair{0.0, 0.0});
}

TEST_CASE("nested lattice bounds match the power-scaled formula") {
    const auto symmetric = fdf_nested_region(uplink(2, 2, 2), {1.0, 1.0});
    CHECK_THAT(*bound_of(symmetric, 1, 0), WithinAbs(0.29248125036057809, 1e-15));
    CHECK_THAT(*bound_of(symmetric, 0, 1), WithinAbs(0.29248125036057809, 1e-15));

    const auto skewed = fdf_nested_region(uplink(10, 2, 2), {1.0, 1.0});
    CHECK_THAT(*bound_of(skewed, 1, 0), WithinAbs(1.2721602581119051, 1e-15));
    CHECK_THAT(*bound_of(skewed, 0, 1), WithinAbs(0.11119621066822401, 1e-15));

    // delta1 = 0 silences user 1 entirely; user 2's self-interference term
    // becomes 1 and its bound is C(1) = 0.5.
    const auto one_sided = fdf_nested_region(uplink(10, 2, 2), {0.0, 1.0});
    CHECK(*bound_of(one_sided, 1, 0) == 0.0);
    CHECK_THAT(*bound_of(one_sided, 0, 1), WithinAbs(0.5, 1e-15));
}

TEST_CASE("nested region with zero combined power is the origin") {
    const auto region = fdf_nested_region(uplink(10, 2, 2), {0.0, 0.0});
    CHECK(*bound_of(region, 1, 0) == 0.0);
    CHECK(*bound_of(region, 0, 1) == 0.0);
    CHECK(max_sum_rate(region).value == 0.0);
}

TEST_CASE("nested params outside the unit box are rejected") {
    CHECK_THROWS_AS(fdf_nested_region(uplink(2, 2, 2), {1.5, 0.5}), validation_error);
    CHECK_THROWS_AS(fdf_nested_region(uplink(2, 2, 2), {0.5, -0.1}), validation_error);
}

TEST_CASE("rs-sim region matches the corrected lattice bound") {
    // eta1 = 0: no Gaussian layer, R1 = R2 <= 1/2 log2(1/2 + 1).
    const auto lattice_only = fdf_rs_sim_region(uplink(10, 2, 2), {0.0, 1.0});
    CHECK_THAT(*bound_of(lattice_only, 0, 1), WithinAbs(0.29248125036057809, 1e-15));
    CHECK(*bound_of(lattice_only, 1, -1) == 0.0);
    CHECK(*bound_of(lattice_only, -1, 1) == 0.0);

    // eta1 = 1: full-power Gaussian layer buries the lattice code; the raw
    // R2 bound 1/2 log2(0.7) is negative and must clamp to exactly 0.
    const auto gaussian_heavy = fdf_rs_sim_region(uplink(10, 2, 2), {1.0, 1.0});
    CHECK(*bound_of(gaussian_heavy, 0, 1) == 0.0);
    CHECK_THAT(*bound_of(gaussian_heavy, 1, -1), WithinAbs(1.1609640474436811, 1e-15));

    const auto idle = fdf_rs_sim_region(uplink(10, 2, 2), {0.0, 0.0});
    CHECK(max_sum_rate(idle).value == 0.0);
}

TEST_CASE("rs schemes demand p1 >= p2") {
    CHECK_THROWS_AS(fdf_rs_sim_region(uplink(2, 10, 2), {0.5, 0.5}), orientation_error);
    CHECK_THROWS_AS(fdf_rs_tdm_region(uplink(2, 10, 2), {0.5}), orientation_error);
    CHECK_NOTHROW(fdf_rs_sim_region(uplink(2, 2, 2), {0.5, 0.5}));
}

TEST_CASE("rs-tdm region endpoints follow the continuous limits") {
    const auto single_phase = fdf_rs_tdm_region(uplink(10, 2, 2), {1.0});
    CHECK_THAT(*bound_of(single_phase, 0, 1), WithinAbs(0.29248125036057809, 1e-15));
    CHECK(*bound_of(single_phase, 1, -1) == 0.0);  // exact: region forces R1 = R2

    const auto no_lattice = fdf_rs_tdm_region(uplink(10, 2, 2), {0.0});
    CHECK(*bound_of(no_lattice, 0, 1) == 0.0);

    const auto split = fdf_rs_tdm_region(uplink(10, 2, 2), {0.3});
    CHECK_THAT(*bound_of(split, 0, 1), WithinAbs(0.29078991830037848, 1e-15));
    CHECK_THAT(*bound_of(split, 1, -1), WithinAbs(0.96153187536701168, 1e-15));

    // Equal powers: phase 2 carries nothing at any alpha.
    const auto equal = fdf_rs_tdm_region(uplink(2, 2, 2), {0.3});
    CHECK_THAT(*bound_of(equal, 0, 1), WithinAbs(0.29078991830037848, 1e-15));
    CHECK(*bound_of(equal, 1, -1) == 0.0);
}

TEST_CASE("rs-tdm zero-power user 2 clamps the lattice bound") {
    const auto region = fdf_rs_tdm_region(uplink(10, 0, 2), {0.5});
    CHECK(*bound_of(region, 0, 1) == 0.0);  // raw bound -alpha/2 < 0
}

TEST_CASE("downlink caps are appended to every achievable scheme") {
    const ChannelParams p{10, 10, 2, Downlink{2, 2, 2}};
    const double cap = capacity_c(1.0);  // 0.5 on both rates
    auto has_constraint = [](const RateRegion& region, int a, int b, double c) {
        for (const auto& lc : region.constraints())
            if (lc.a == a && lc.b == b && lc.c == c) return true;
        return false;
    };
    for (const auto& region :
         {cdf_region(p), fdf_nested_region(p, {1, 1}), fdf_rs_sim_region(p, {0, 1}),
          fdf_rs_tdm_region(p, {1.0})}) {
        CHECK(has_constraint(region, 1, 0, cap));
        CHECK(has_constraint(region, 0, 1, cap));
        const auto m = max_sum_rate(region);
        CHECK(m.value <= 2 * cap + 1e-12);
    }
}

// --- properties ---

TEST_CASE("every scheme region sits inside the outer bound") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        ChannelParams params = random_config(rng, true);
        if (params.p1 < params.p2) params = swap_roles(params);  // orient for RS
        const auto outer = outer_bound_region(params);
        std::vector<RateRegion> regions{cdf_region(params)};
        for (int k = 0; k < 3; ++k) {
            regions.push_back(fdf_nested_region(params, {frac(rng), frac(rng)}));
            regions.push_back(fdf_rs_sim_region(params, {frac(rng), frac(rng)}));
            regions.push_back(fdf_rs_tdm_region(params, {frac(rng)}));
        }
        for (const auto& region : regions)
            for (const auto& v : vertices(region)) {
                INFO("p1=" << params.p1 << " p2=" << params.p2 << " n0=" << params.n0);
                CHECK(outer.contains(v, 1e-9));
            }
    }
}

TEST_CASE("role swap mirrors the symmetric constructors") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    auto mirrored_equal = [](const RateRegion& a, const RateRegion& b) {
        if (a.size() != b.size()) return false;
        for (const auto& lc : a.constraints()) {
            bool found = false;
            for (const auto& mc : b.constraints())
                if (mc.a == lc.b && mc.b == lc.a && mc.c == lc.c) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    };
    for (int trial = 0; trial < 40; ++trial) {
        const ChannelParams params = random_config(rng, true);
        const ChannelParams swapped = swap_roles(params);
        CHECK(mirrored_equal(outer_bound_region(params), outer_bound_region(swapped)));
        CHECK(mirrored_equal(cdf_region(params), cdf_region(swapped)));
        const double d1 = frac(rng), d2 = frac(rng);
        CHECK(mirrored_equal(fdf_nested_region(params, {d1, d2}),
                             fdf_nested_region(swapped, {d2, d1})));
    }
}

TEST_CASE("nested R1 bound is monotone in the power fractions") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const ChannelParams params = random_config(rng, false);
        auto r1_bound = [&](double d1, double d2) {
            return *bound_of(fdf_nested_region(params, {d1, d2}), 1, 0);
        };
        double prev = r1_bound(0.0, 0.6);
        for (int i = 1; i <= 20; ++i) {  // nondecreasing in delta1
            const double cur = r1_bound(i / 20.0, 0.6);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
        prev = r1_bound(0.7, 0.0);
        for (int i = 1; i <= 20; ++i) {  // nonincreasing in delta2
            const double cur = r1_bound(0.7, i / 20.0);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("negative raw bounds always clamp to exactly zero") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    int clamped_seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        ChannelParams params = random_config(rng, false);
        if (params.p1 < params.p2) params = swap_roles(params);
        const double e1 = frac(rng), e2 = frac(rng);
        const double raw =
            0.5 * std::log2(0.5 + e2 * params.p2 /
                                      (params.n0 + e1 * (params.p1 - e2 * params.p2)));
        const double stored = *bound_of(fdf_rs_sim_region(params, {e1, e2}), 0, 1);
        if (raw < 0.0) {
            CHECK(stored == 0.0);
            ++clamped_seen;
        } else {
            CHECK(stored == raw);
        }
    }
    CHECK(clamped_seen > 0);  // the property must not pass vacuously
}

TEST_CASE("cdf max sum rate equals its closed form") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const ChannelParams params = random_config(rng, false);
        const double closed =
            std::min(capacity_c((params.p1 + params.p2) / params.n0),
                     capacity_c(params.p1 / params.n0) + capacity_c(params.p2 / params.n0));
        CHECK_THAT(max_sum_rate(cdf_region(params)).value, WithinAbs(closed, 1e-12));
    }
}

TEST_CASE("scheme names round-trip") {
    for (Scheme s : {Scheme::OuterBound, Scheme::CDF, Scheme::FdfNested, Scheme::FdfRsSim,
                     Scheme::FdfRsTdm}) {
        CHECK(parse_scheme(scheme_cli_name(s)) == s);
        CHECK(parse_scheme(scheme_label(s)) == s);
    }
    CHECK_THROWS_AS(parse_scheme("amplify_forward"), validation_error);
}
