#include <catch2/catch_amalgamated.hpp>

#include "metroplan/spectrum.hpp"

using namespace metroplan;

TEST_CASE("grid slot counts") {
  SECTION("4.8 THz at 75 GHz gives 64 slots") {
    Band c{"C", 191.3, 196.1, 0.075};
    auto g = build_grid(c);
    REQUIRE(g.size() == 64);
    REQUIRE_THAT(g.front(), Catch::Matchers::WithinAbs(191.3 + 0.0375, 1e-12));
  }
  SECTION("12 THz combined span gives 160 slots") {
    Band all{"all", 184.4, 196.4, 0.075};
    REQUIRE(build_grid(all).size() == 160);
  }
  SECTION("span smaller than spacing gives zero slots") {
    Band tiny{"t", 193.0, 193.05, 0.075};
    REQUIRE(build_grid(tiny).empty());
  }
  SECTION("non-positive spacing rejected") {
    Band bad{"b", 191.0, 196.0, 0.0};
    REQUIRE_THROWS_AS(build_grid(bad), ValidationError);
  }
}

TEST_CASE("grid spacing is constant and matches the floor rule") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 200; ++it) {
    const double start = 180 + uniform01(rng) * 15;
    const double span = 0.1 + uniform01(rng) * 14;
    const double spacing = 0.01 + uniform01(rng) * 0.4;
    Band b{"r", start, start + span, spacing};
    auto g = build_grid(b);
    const int n = static_cast<int>(g.size());
    REQUIRE(n == b.num_channels());
    // count matches the floor rule: n slots fit, n+1 do not
    REQUIRE(n * spacing <= span + 1e-9);
    REQUIRE((n + 1) * spacing > span - 1e-9);
    for (int i = 1; i < n; ++i) {
      REQUIRE(g[i] > g[i - 1]);
      REQUIRE_THAT(g[i] - g[i - 1], Catch::Matchers::WithinAbs(spacing, 1e-12));
    }
  }
}

TEST_CASE("band of slot partitions the spectrum") {
  BandLayout layout{{64, 80}, 160};
  layout.validate();
  REQUIRE(band_of_slot(layout, 0) == BandName::C);
  REQUIRE(band_of_slot(layout, 63) == BandName::C);
  REQUIRE(band_of_slot(layout, 64) == BandName::SuperC);
  REQUIRE(band_of_slot(layout, 79) == BandName::SuperC);
  REQUIRE(band_of_slot(layout, 80) == BandName::L);
  REQUIRE(band_of_slot(layout, 159) == BandName::L);
  REQUIRE_THROWS_AS(band_of_slot(layout, 160), ValidationError);
  REQUIRE_THROWS_AS(band_of_slot(layout, -1), ValidationError);

  // three contiguous non-overlapping ranges
  int flips = 0;
  for (int s = 1; s < layout.total_slots; ++s)
    if (band_of_slot(layout, s) != band_of_slot(layout, s - 1)) ++flips;
  REQUIRE(flips == 2);

  BandLayout bad{{80, 64}, 160};
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("optical parameter derivations") {
  OpticalParameters p;
  p.validate();
  REQUIRE_THAT(p.channel_bandwidth_hz(), Catch::Matchers::WithinRel(70.4e9, 1e-12));
  // 0.2 dB/km -> 4.605e-5 1/m power attenuation
  REQUIRE_THAT(p.alpha_norm(), Catch::Matchers::WithinRel(4.605170185988091e-5, 1e-12));
  REQUIRE(p.effective_length(80.0) < p.effective_length());

  OpticalParameters bad = p;
  bad.rolloff = 1.0;
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.modulation_thresholds[1].snr_db = 0;  // not increasing
  REQUIRE_THROWS_AS(bad.validate(), ValidationError);
}
