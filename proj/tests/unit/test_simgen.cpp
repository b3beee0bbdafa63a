#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"
#include "funloci/hscore.hpp"
#include "funloci/simgen.hpp"
#include "oracle/brute_force.hpp"

using namespace funloci;

TEST_CASE("order-1 basis is a set of cell indicators") {
  const std::vector<double> grid{0.0, 0.1, 0.3, 0.49, 0.5, 0.74, 0.99, 1.0};
  const auto d = bspline_design(grid, 4, 1);
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const std::size_t cell = std::min<std::size_t>(3, static_cast<std::size_t>(grid[t] * 4));
    for (std::size_t l = 0; l < 4; ++l) CHECK(d[t * 4 + l] == (l == cell ? 1.0 : 0.0));
  }
}

TEST_CASE("linear hat at a cell midpoint") {
  // Order 2, two cells on [0, 2]: 3 hats peaking at 0, 1, 2.
  const BSplineBasis b(0.0, 2.0, 3, 2);
  std::vector<double> v(2);
  const auto first = b.evaluate(0.5, v);
  CHECK(first == 0);
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(0.5));
}

TEST_CASE("partition of unity and agreement with the recursive definition") {
  for (std::size_t order : {1ul, 2ul, 3ul, 4ul, 5ul}) {
    for (std::size_t L : {order, order + 1, order + 4, 17ul}) {
      if (L < order) continue;
      std::vector<double> grid(101);
      for (std::size_t t = 0; t < grid.size(); ++t) grid[t] = -2.0 + 0.07 * static_cast<double>(t);
      const auto d = bspline_design(grid, L, order);
      const BSplineBasis b(grid.front(), grid.back(), L, order);
      for (std::size_t t = 0; t < grid.size(); ++t) {
        double s = 0;
        for (std::size_t l = 0; l < L; ++l) {
          s += d[t * L + l];
          CHECK(std::abs(d[t * L + l] - oracle::bspline(b.knots(), l, order, grid[t], L)) < 1e-12);
        }
        CHECK(std::abs(s - 1.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("basis rejects bad orders") {
  CHECK_THROWS_AS(BSplineBasis(0, 1, 3, 4), Error);
  CHECK_THROWS_AS(BSplineBasis(0, 1, 3, 0), Error);
  try {
    bspline_design(std::vector<double>{0, 1, 2}, 2, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidOrder);
  }
}

TEST_CASE("default configuration plants four motifs with 40/80/40/10 point supports") {
  const auto cfg = default_sim_config(1);
  CHECK(cfg.n_curves == 20);
  CHECK(cfg.grid_len == 400);
  const auto truth = planted_loci(cfg);
  REQUIRE(truth.size() == 5);
  std::map<std::string, std::size_t> len;
  for (const auto& p : truth) len[p.motif] = p.interval.length();
  CHECK(len["A"] == 40);
  CHECK(len["B"] == 80);
  CHECK(len["C"] == 40);
  CHECK(len["D"] == 10);
  for (const auto& m : cfg.motifs) CHECK(m.target_length == len[m.id]);
}

TEST_CASE("planted loci are perfect at zero noise, for several orders") {
  for (std::size_t order : {2ul, 3ul, 4ul, 5ul}) {
    const auto cfg = default_sim_config(3, 0.0, order);
    const auto sim = generate(cfg);
    for (const auto& p : sim.truth) {
      CAPTURE(p.motif);
      CHECK(hscore(sim.data, p.curves, p.interval, ClusterModelKind::Full) < 1e-10);
      // The curves are in fact identical there.
      for (std::size_t t = p.interval.start; t <= p.interval.end; ++t)
        CHECK(std::abs(sim.data.at(p.curves[0], t) - sim.data.at(p.curves[1], t)) < 1e-9);
    }
  }
}

TEST_CASE("generation is deterministic per seed") {
  const auto a = generate(default_sim_config(42));
  const auto b = generate(default_sim_config(42));
  const auto c = generate(default_sim_config(43));
  CHECK(a.data == b.data);
  CHECK(a.data.fingerprint() == b.data.fingerprint());
  CHECK_FALSE(a.data == c.data);

  SimConfig bare;
  bare.seed = 9;
  CHECK(generate(bare).data == generate(bare).data);
}

TEST_CASE("planted score grows with noise") {
  const double sigmas[] = {0.0, 0.5, 1.0, 2.0};
  double mean[4] = {0, 0, 0, 0};
  const int seeds = 20;
  for (int s = 1; s <= seeds; ++s) {
    for (int k = 0; k < 4; ++k) {
      const auto sim = generate(default_sim_config(static_cast<std::uint64_t>(s), sigmas[k]));
      for (const auto& p : sim.truth)
        mean[k] += hscore(sim.data, p.curves, p.interval, ClusterModelKind::Full);
    }
  }
  for (int k = 1; k < 4; ++k) CHECK(mean[k] > mean[k - 1]);
  // E[H] for i.i.d. noise is sigma^2 (1 - 1/|I|)(1 - 1/|S|); check the scale.
  CHECK(mean[3] / mean[1] == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("background draws stay inside the coefficient range") {
  const auto v = sample_background(5, 200000, 0.45, 0.45, -15, 15);
  CHECK(*std::min_element(v.begin(), v.end()) >= -15.0);
  CHECK(*std::max_element(v.begin(), v.end()) <= 15.0);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  CHECK(std::abs(mean) < 0.2);
  // Var of Beta(a,a) is 1/(4(2a+1)); rescaled by 30^2.
  double var = 0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= v.size();
  CHECK(var == doctest::Approx(900.0 / (4 * 1.9)).epsilon(0.02));
}

TEST_CASE("placement errors") {
  auto cfg = default_sim_config(1);
  auto overlapping = cfg;
  overlapping.motifs[1].occurrences.push_back({0, 3});  // B over A on curve 1
  try {
    planted_loci(overlapping);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingMotifPlacements);
  }
  auto outside = cfg;
  outside.motifs[0].occurrences.push_back({25, 0});
  CHECK_THROWS_AS(planted_loci(outside), Error);
  auto past_end = cfg;
  past_end.motifs[3].occurrences.push_back({0, 42});
  try {
    planted_loci(past_end);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MotifOutOfRange);
  }
}
