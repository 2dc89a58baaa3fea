#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "wiretap/metrics.hpp"
#include "wiretap/random_instances.hpp"

namespace wiretap {
namespace {

using testing::point;
using testing::weak;

const std::vector<std::size_t> kBoth{0, 1};
const DecodingOrder k12({0, 1});
const DecodingOrder k21({1, 0});

TEST(LegitimateRate, Examples) {
  const auto c = weak();
  EXPECT_NEAR(legitimate_rate(c, point(1, 1, 1, 1), 0), 1.2223924213364481, 1e-12);
  EXPECT_NEAR(legitimate_rate(c, point(1, 0, 1, 1), 0), std::log2(3.0), 1e-12);
  EXPECT_EQ(legitimate_rate(c, point(0, 1, 1, 1), 0), 0.0);
  EXPECT_EQ(legitimate_rate(c, point(1, 1, 0, 1), 0), 0.0);
}

TEST(HarvestedEnergy, Examples) {
  auto c = weak();
  EXPECT_NEAR(harvested_energy(c, point(1, 1, 1, 1), 0), 0.25, 1e-15);
  EXPECT_NEAR(harvested_energy(c, point(1, 1, 0.56, 0.56), 0), 0.80, 1e-12);
  c.energy_model = EnergyModel::ProductForm;
  EXPECT_EQ(harvested_energy(c, point(1, 1, 1, 1), 0), 0.0);
  EXPECT_NEAR(harvested_energy(c, point(1, 1, 0, 0), 1), 1.25 + 0.25, 1e-15);
}

TEST(EveSumRate, Examples) {
  const auto c = testing::orthogonal();
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_EQ(eve_sum_rate(c, zero, kBoth), 0.0);
  EXPECT_NEAR(eve_sum_rate(c, ones, kBoth), 2.0 * std::log2(1.5), 1e-12);
  const std::vector<std::size_t> only2{1};
  EXPECT_NEAR(eve_sum_rate(c, ones, only2), std::log2(1.5), 1e-12);
  EXPECT_THROW(eve_sum_rate(c, ones, std::vector<std::size_t>{}), Error);
}

TEST(EveRateChain, Examples) {
  const std::vector<double> ones{1.0, 1.0};
  const auto par = testing::parallel();
  const auto r = eve_rate_chain(par, ones, k12, kBoth);
  EXPECT_NEAR(r[0], std::log2(4.0 / 3.0), 1e-12);
  EXPECT_NEAR(r[1], std::log2(1.5), 1e-12);

  // Order (1,2): the user decoded last sees no interference.
  const auto c = weak();
  const auto t = eve_rate_chain(c, ones, k12, kBoth);
  EXPECT_NEAR(t[1], std::log2(1.0 + 0.25 / 0.5), 1e-12);

  const std::vector<double> zero{0.0, 0.0};
  for (const auto& o : {k12, k21}) {
    for (double v : eve_rate_chain(c, zero, o, kBoth)) EXPECT_EQ(v, 0.0);
  }
}

TEST(EveRateChain, ChainRuleConservation) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto c = random_config(rng, {2 + static_cast<std::size_t>(i % 2), i % 2 ? 4u : 2u});
    std::vector<double> p;
    for (double pm : c.power_budget) p.push_back(pm * u(rng));
    for (const auto& o : DecodingOrder::all(c.num_users)) {
      for (unsigned mask = 1; mask < (1u << c.num_users); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t k = 0; k < c.num_users; ++k) {
          if (mask & (1u << k)) s.push_back(k);
        }
        const auto chain = eve_rate_chain(c, p, o, s);
        double sum = 0.0;
        for (std::size_t k = 0; k < c.num_users; ++k) {
          if (!(mask & (1u << k))) EXPECT_EQ(chain[k], 0.0);
          sum += chain[k];
        }
        EXPECT_NEAR(sum, eve_sum_rate(c, p, s), 1e-9);
      }
    }
  }
}

TEST(SecrecyCorner, Examples) {
  // Axis endpoint: log2 3 - log2 1.5 = 1 for any eavesdropper directions of norm 0.5.
  for (const auto& c : {weak(), testing::orthogonal(), testing::parallel(), testing::strong()}) {
    EXPECT_NEAR(secrecy_corner(c, point(1, 0, 1, 1), k12)[0], 1.0, 1e-12);
    EXPECT_NEAR(secrecy_corner(c, point(1, 0, 1, 1), k21)[0], 1.0, 1e-12);
  }
  auto blind = weak();
  blind.eve_channels = {ComplexVector(2), ComplexVector(2)};
  const auto op = point(0.7, 0.4, 0.8, 0.3);
  EXPECT_EQ(secrecy_corner(blind, op, k21), legitimate_rates(blind, op));

  // A starved user is clamped to zero; the other keeps its margin.
  const auto c = weak();
  const auto starved = point(1, 0.05, 1, 0.01);
  const auto margins = secrecy_margins(c, starved, k12);
  ASSERT_LT(margins[1], 0.0);
  const auto corner = secrecy_corner(c, starved, k12);
  EXPECT_EQ(corner[1], 0.0);
  EXPECT_EQ(corner[0], margins[0]);
}

TEST(SubsetConstraints, Examples) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const auto c = random_config(rng);
    const auto op = point(u(rng), u(rng), u(rng), u(rng));
    for (const auto& o : {k12, k21}) {
      const auto m = secrecy_margins(c, op, o);
      if (m[0] < 0.0 || m[1] < 0.0) continue;  // clamped corners are not chain-rule tight
      const auto r = subset_constraints_satisfied(c, op, secrecy_corner(c, op, o), 1e-9);
      EXPECT_TRUE(r.satisfied);
      EXPECT_LE(r.worst_violation, 1e-9);
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);

  const auto c = weak();
  const auto op = point(1, 1, 1, 1);
  EXPECT_TRUE(subset_constraints_satisfied(c, op, RateTuple{{0.0, 0.0}}, 0.0).satisfied);
  auto inflated = secrecy_corner(c, op, k12);
  inflated.per_user[1] += 0.1;
  const auto r = subset_constraints_satisfied(c, op, inflated, 1e-9);
  EXPECT_FALSE(r.satisfied);
  EXPECT_NEAR(r.worst_violation, 0.1, 1e-9);
  EXPECT_FALSE(r.worst_subset.empty());
}

TEST(SubsetConstraints, TooManyUsers) {
  SystemConfig c;
  c.num_users = 17;
  OperatingPoint op;
  EXPECT_THROW(subset_constraints_satisfied(c, op, RateTuple{std::vector<double>(17)}, 0.0), Error);
}

TEST(Metrics, Monotonicity) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto c = random_config(rng, {2 + static_cast<std::size_t>(i % 2), 2});
    const std::size_t K = c.num_users;
    OperatingPoint op;
    for (std::size_t k = 0; k < K; ++k) {
      op.powers.push_back(c.power_budget[k] * u(rng));
      op.splits.push_back(u(rng));
    }
    const std::size_t k = static_cast<std::size_t>(i) % K;
    const std::size_t j = (k + 1) % K;
    const double base = legitimate_rate(c, op, k);

    auto more_eta = op;
    more_eta.splits[k] = op.splits[k] + (1.0 - op.splits[k]) * u(rng);
    EXPECT_GE(legitimate_rate(c, more_eta, k), base - 1e-12);

    auto more_p = op;
    more_p.powers[k] = op.powers[k] + (c.power_budget[k] - op.powers[k]) * u(rng);
    EXPECT_GE(legitimate_rate(c, more_p, k), base - 1e-12);

    auto more_interf = op;
    more_interf.powers[j] = op.powers[j] + (c.power_budget[j] - op.powers[j]) * u(rng);
    EXPECT_LE(legitimate_rate(c, more_interf, k), base + 1e-12);

    // Energy: product form strictly decreasing in eta, reformulated hits sigma^2 at eta = 1.
    auto pc = c;
    pc.energy_model = EnergyModel::ProductForm;
    if (more_eta.splits[k] > op.splits[k]) {
      EXPECT_LT(harvested_energy(pc, more_eta, k), harvested_energy(pc, op, k));
    }
    auto full = op;
    full.splits[k] = 1.0;
    EXPECT_DOUBLE_EQ(harvested_energy(c, full, k), c.processing_noise_vars[k]);

    for (const auto& o : DecodingOrder::all(K)) {
      const auto s = secrecy_corner(c, op, o);
      const auto r = legitimate_rates(c, op);
      for (std::size_t q = 0; q < K; ++q) EXPECT_LE(s[q], r[q] + 1e-12);
    }
  }
}

TEST(Metrics, InterferenceLimitedSplitLoss) {
  // When eta * interference dominates the processing noise by 100x, power
  // splitting costs at most 0.05 bits.
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    auto c = random_config(rng);
    c.processing_noise_vars = {1e-4 + 1e-3 * u(rng), 1e-4 + 1e-3 * u(rng)};
    const auto op = point(c.power_budget[0] * u(rng), c.power_budget[1] * u(rng), u(rng), u(rng));
    for (std::size_t k = 0; k < 2; ++k) {
      const std::size_t j = 1 - k;
      if (op.splits[k] * op.powers[j] * c.gain2(k, j) < 100.0 * c.processing_noise_vars[k]) continue;
      auto full = op;
      full.splits[k] = 1.0;
      EXPECT_LE(std::abs(legitimate_rate(c, full, k) - legitimate_rate(c, op, k)), 0.05);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace wiretap
