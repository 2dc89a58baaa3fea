#pragma once

#include <cmath>
#include <string>

#include "wiretap/model.hpp"

namespace wiretap::testing {

inline const std::string kScenarioDir = WIRETAP_SCENARIO_DIR;

/// Two users, two eavesdropper antennas, |h_kk|^2 = 1, |h_kj|^2 = cross, every
/// noise variance 0.25, unit power budgets. Eavesdropper channels have norm
/// 0.5 and sit 45 degrees apart.
inline SystemConfig two_user(double cross_gain2, double demand = 0.0) {
  SystemConfig c;
  c.num_users = 2;
  c.num_eve_antennas = 2;
  const double a = std::sqrt(cross_gain2);
  c.gains = {{{1.0, 0.0}, {a, 0.0}}, {{a, 0.0}, {1.0, 0.0}}};
  const double d = 0.5 / std::sqrt(2.0);
  c.eve_channels = {{{0.5, 0.0}, {0.0, 0.0}}, {{d, 0.0}, {d, 0.0}}};
  c.antenna_noise_vars = {0.25, 0.25};
  c.processing_noise_vars = {0.25, 0.25};
  c.eve_antenna_noise_var = 0.25;
  c.eve_processing_noise_var = 0.25;
  c.power_budget = {1.0, 1.0};
  c.eh_demands = {demand, demand};
  return c;
}

inline SystemConfig weak(double demand = 0.0) { return two_user(0.25, demand); }
inline SystemConfig strong(double demand = 0.0) { return two_user(1.0, demand); }

inline SystemConfig with_eve(SystemConfig c, ComplexVector h1, ComplexVector h2) {
  c.eve_channels = {std::move(h1), std::move(h2)};
  return c;
}

/// h_E1 = (0.5, 0), h_E2 = (0, 0.5).
inline SystemConfig orthogonal() { return with_eve(weak(), {{0.5, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.5, 0.0}}); }

/// h_E1 = h_E2 = (0.5, 0).
inline SystemConfig parallel() { return with_eve(weak(), {{0.5, 0.0}, {0.0, 0.0}}, {{0.5, 0.0}, {0.0, 0.0}}); }

inline OperatingPoint point(double p1, double p2, double eta1, double eta2) {
  return {{p1, p2}, {eta1, eta2}};
}

}  // namespace wiretap::testing
