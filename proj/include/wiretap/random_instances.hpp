#pragma once

// Seeded random problem instances and posynomials for property checks.

#include <cmath>
#include <numbers>
#include <random>

#include "wiretap/model.hpp"
#include "wiretap/posynomial.hpp"

namespace wiretap {

/// Largest energy user k can harvest (eta_k -> 0, full power everywhere).
inline double max_deliverable_energy(const SystemConfig& cfg, std::size_t k) {
  double received = 0.0;
  for (std::size_t j = 0; j < cfg.num_users; ++j) received += cfg.power_budget[j] * cfg.gain2(k, j);
  if (cfg.energy_model == EnergyModel::ProductForm) return received + cfg.antenna_noise_vars[k];
  return cfg.processing_noise_vars[k] + received;
}

struct RandomConfigSpec {
  std::size_t num_users = 2;
  std::size_t num_eve_antennas = 2;
  /// EH demand as a fraction of the deliverable maximum, drawn from [0, this].
  double max_demand_fraction = 0.6;
};

template <typename Rng>
SystemConfig random_config(Rng& rng, const RandomConfigSpec& spec = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto phasor = [&](double magnitude) {
    return std::polar(magnitude, uniform(0.0, 2.0 * std::numbers::pi));
  };

  const std::size_t K = spec.num_users;
  const std::size_t M = spec.num_eve_antennas;
  SystemConfig cfg;
  cfg.num_users = K;
  cfg.num_eve_antennas = M;
  cfg.gains.assign(K, ComplexVector(K));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < K; ++j) {
      cfg.gains[k][j] = phasor(k == j ? uniform(0.7, 1.5) : uniform(0.1, 1.2));
    }
  }
  cfg.eve_channels.assign(K, ComplexVector(M));
  for (auto& h : cfg.eve_channels) {
    const double norm = uniform(0.2, 0.8);
    double total = 0.0;
    for (auto& z : h) {
      z = phasor(uniform(0.1, 1.0));
      total += std::norm(z);
    }
    for (auto& z : h) z *= norm / std::sqrt(total);
  }
  for (std::size_t k = 0; k < K; ++k) {
    cfg.antenna_noise_vars.push_back(uniform(0.1, 0.5));
    cfg.processing_noise_vars.push_back(uniform(0.1, 0.5));
    cfg.power_budget.push_back(uniform(0.5, 2.0));
  }
  cfg.eve_antenna_noise_var = uniform(0.1, 0.5);
  cfg.eve_processing_noise_var = uniform(0.1, 0.5);
  cfg.eh_demands.assign(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    cfg.eh_demands[k] = uniform(0.0, spec.max_demand_fraction) * max_deliverable_energy(cfg, k);
  }
  return cfg;
}

/// Posynomial with 1-5 terms, coefficients in [0.1, 10] and exponents in
/// [-2, 2] over `num_vars` variables.
template <typename Rng>
Posynomial random_posynomial(Rng& rng, std::size_t num_vars) {
  std::uniform_real_distribution<double> coef(0.1, 10.0);
  std::uniform_real_distribution<double> expo(-2.0, 2.0);
  std::uniform_int_distribution<int> count(1, 5);
  Posynomial p(num_vars);
  const int terms = count(rng);
  for (int t = 0; t < terms; ++t) {
    Monomial m = Monomial::constant(num_vars, coef(rng));
    for (auto& e : m.exponents) e = expo(rng);
    p.add(m);
  }
  return p;
}

template <typename Rng>
std::vector<double> random_positive_point(Rng& rng, std::size_t num_vars) {
  std::uniform_real_distribution<double> log_x(std::log(0.05), std::log(20.0));
  std::vector<double> x(num_vars);
  for (auto& v : x) v = std::exp(log_x(rng));
  return x;
}

}  // namespace wiretap
