#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lsalign/align.hpp"
#include "lsalign/distance.hpp"
#include "lsalign/empirical.hpp"

namespace lsalign {

// n draws from N(mu, sigma^2): inverse normal CDF applied to a counter-based
// uniform stream keyed by `seed`. Throws InvalidParameter if sigma <= 0 or n == 0.
Sample sample_normal(double mu, double sigma, std::size_t n, std::uint64_t seed);

struct SimulationConfig {
  std::size_t n = 100;
  std::size_t replicates = 100;
  double mu1 = 150.0;
  double sigma1 = 10.0;
  double mu2 = 160.0;
  double sigma2 = 10.0;
  std::vector<Metric::Kind> metrics{Metric::Kind::Mallows, Metric::Kind::KS};
  std::vector<AlignCase> cases{AlignCase::Shift, AlignCase::Scale, AlignCase::ShiftScale};
  double r = 1.0;
  std::uint64_t base_seed = 20240601;
  std::size_t threads = 1;

  // Throws InvalidParameter.
  void validate() const;
  std::vector<Metric> metric_list() const;

  // Situations 1-3 of the normal-group design:
  //   1: mu 150/150, sigma 10/15;  2: mu 150/160, sigma 10/10;
  //   3: mu 150/160, sigma 10/15.
  static SimulationConfig situation(int which);
};

// Keys: n, replicates (or M), mu1, sigma1, mu2, sigma2, metrics, cases, r,
// seed, threads, situation. One `key = value` per line; '#' starts a comment.
SimulationConfig parse_simulation_config(std::istream& in);

// Seeds of the two groups in replicate k.
std::pair<std::uint64_t, std::uint64_t> replicate_seeds(std::uint64_t base_seed, std::size_t k);

// The X and Y samples of replicate k.
std::pair<Sample, Sample> replicate_samples(const SimulationConfig& config, std::size_t k);

struct SimulationCell {
  AlignCase which;
  Metric metric;
  std::string param;  // "h" or "sigma"
  double mean = 0.0;
  double sd = 0.0;
  std::size_t failures = 0;
  std::vector<double> values;  // per replicate; NaN where the solver failed
};

struct SimulationReport {
  std::vector<SimulationCell> cells;

  // Throws InvalidParameter when absent.
  const SimulationCell& cell(AlignCase which, Metric::Kind kind, const std::string& param) const;
};

SimulationReport run_simulation(const SimulationConfig& config);

// Columns: case,metric,param,mean,sd,failures
void write_simulation_csv(std::ostream& out, const SimulationReport& report);

}  // namespace lsalign
