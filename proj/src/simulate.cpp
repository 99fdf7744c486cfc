#include "lsalign/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "lsalign/error.hpp"
#include "lsalign/format.hpp"

namespace lsalign {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform on (0, 1), never 0 or 1.
double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidParameter("invalid value for " + key + ": '" + v + "'");
  }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long u = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    throw InvalidParameter("invalid value for " + key + ": '" + v + "'");
  }
}

std::vector<std::string> params_of(AlignCase c) {
  switch (c) {
    case AlignCase::Shift:
      return {"h"};
    case AlignCase::Scale:
      return {"sigma"};
    case AlignCase::ShiftScale:
      return {"sigma", "h"};
  }
  return {};
}

}  // namespace

Sample sample_normal(double mu, double sigma, std::size_t n, std::uint64_t seed) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("normal sigma must be positive");
  if (!std::isfinite(mu)) throw InvalidParameter("normal mean must be finite");
  if (n == 0) throw InvalidParameter("sample size must be positive");
  const boost::math::normal_distribution<double> normal(mu, sigma);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = boost::math::quantile(normal, counter_uniform(seed, i));
  return Sample::from_values(std::move(values));
}

void SimulationConfig::validate() const {
  if (n < 2) throw InvalidParameter("n must be at least 2");
  if (replicates < 1) throw InvalidParameter("replicate count must be at least 1");
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw InvalidParameter("sigma1 and sigma2 must be positive");
  if (!std::isfinite(mu1) || !std::isfinite(mu2) || !std::isfinite(sigma1) || !std::isfinite(sigma2))
    throw InvalidParameter("normal parameters must be finite");
  if (metrics.empty()) throw InvalidParameter("no metric requested");
  if (cases.empty()) throw InvalidParameter("no case requested");
  if (!(r >= 1.0)) throw InvalidParameter("Mallows order r must be >= 1");
  if (threads < 1) throw InvalidParameter("threads must be at least 1");
}

std::vector<Metric> SimulationConfig::metric_list() const {
  std::vector<Metric> out;
  for (auto kind : metrics) out.push_back(kind == Metric::Kind::KS ? Metric::ks() : Metric::mallows(r));
  return out;
}

SimulationConfig SimulationConfig::situation(int which) {
  SimulationConfig c;
  switch (which) {
    case 1:
      c.mu1 = 150.0, c.mu2 = 150.0, c.sigma1 = 10.0, c.sigma2 = 15.0;
      break;
    case 2:
      c.mu1 = 150.0, c.mu2 = 160.0, c.sigma1 = 10.0, c.sigma2 = 10.0;
      break;
    case 3:
      c.mu1 = 150.0, c.mu2 = 160.0, c.sigma1 = 10.0, c.sigma2 = 15.0;
      break;
    default:
      throw InvalidParameter("situation must be 1, 2 or 3");
  }
  return c;
}

SimulationConfig parse_simulation_config(std::istream& in) {
  SimulationConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidParameter("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "situation") {
      const auto keep_seed = c.base_seed;
      const auto keep = c;
      c = SimulationConfig::situation(static_cast<int>(parse_unsigned(key, value)));
      c.n = keep.n, c.replicates = keep.replicates, c.metrics = keep.metrics;
      c.cases = keep.cases, c.r = keep.r, c.threads = keep.threads, c.base_seed = keep_seed;
    } else if (key == "n") {
      c.n = parse_unsigned(key, value);
    } else if (key == "replicates" || key == "M") {
      c.replicates = parse_unsigned(key, value);
    } else if (key == "mu1") {
      c.mu1 = parse_double(key, value);
    } else if (key == "sigma1") {
      c.sigma1 = parse_double(key, value);
    } else if (key == "mu2") {
      c.mu2 = parse_double(key, value);
    } else if (key == "sigma2") {
      c.sigma2 = parse_double(key, value);
    } else if (key == "r") {
      c.r = parse_double(key, value);
    } else if (key == "seed") {
      c.base_seed = parse_unsigned(key, value);
    } else if (key == "threads") {
      c.threads = parse_unsigned(key, value);
    } else if (key == "metrics") {
      c.metrics.clear();
      for (const auto& m : split_list(value)) {
        if (m == "mallows") c.metrics.push_back(Metric::Kind::Mallows);
        else if (m == "ks") c.metrics.push_back(Metric::Kind::KS);
        else throw InvalidParameter("unknown metric '" + m + "'");
      }
    } else if (key == "cases") {
      c.cases.clear();
      for (const auto& s : split_list(value)) c.cases.push_back(parse_align_case(s));
    } else {
      throw InvalidParameter("unknown config key '" + key + "'");
    }
  }
  return c;
}

std::pair<std::uint64_t, std::uint64_t> replicate_seeds(std::uint64_t base_seed, std::size_t k) {
  const std::uint64_t rep = splitmix64(base_seed ^ splitmix64(0xA5A5A5A5ULL + k));
  return {splitmix64(rep ^ 0x1ULL), splitmix64(rep ^ 0x2ULL)};
}

std::pair<Sample, Sample> replicate_samples(const SimulationConfig& config, std::size_t k) {
  const auto [sx, sy] = replicate_seeds(config.base_seed, k);
  return {sample_normal(config.mu1, config.sigma1, config.n, sx),
          sample_normal(config.mu2, config.sigma2, config.n, sy)};
}

const SimulationCell& SimulationReport::cell(AlignCase which, Metric::Kind kind,
                                             const std::string& param) const {
  for (const auto& c : cells)
    if (c.which == which && c.metric.kind == kind && c.param == param) return c;
  throw InvalidParameter("no simulation cell for " + to_string(which) + "/" + param);
}

SimulationReport run_simulation(const SimulationConfig& config) {
  config.validate();
  const auto metrics = config.metric_list();

  SimulationReport report;
  for (auto which : config.cases)
    for (const auto& metric : metrics)
      for (const auto& param : params_of(which))
        report.cells.push_back({which, metric, param, 0.0, 0.0, 0,
                                std::vector<double>(config.replicates,
                                                    std::numeric_limits<double>::quiet_NaN())});

  auto run_replicate = [&](std::size_t k) {
    const auto [x, y] = replicate_samples(config, k);
    const Distribution f = EmpiricalDist(x);
    const Distribution g = EmpiricalDist(y);
    const SearchBounds bounds = default_bounds(f, g);
    std::size_t slot = 0;
    for (auto which : config.cases) {
      for (const auto& metric : metrics) {
        const auto params = params_of(which);
        try {
          const auto result = align(f, g, which, metric, bounds);
          for (const auto& p : params)
            report.cells[slot++].values[k] = p == "h" ? result.optimal.h : result.optimal.sigma;
        } catch (const Error&) {
          slot += params.size();
        }
      }
    }
  };

  const std::size_t workers = std::min(config.threads, config.replicates);
  if (workers <= 1) {
    for (std::size_t k = 0; k < config.replicates; ++k) run_replicate(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < config.replicates; k = next++) run_replicate(k);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (auto& cell : report.cells) {
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : cell.values) {
      if (std::isnan(v)) {
        ++cell.failures;
      } else {
        sum += v;
        ++count;
      }
    }
    cell.mean = count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
    double ss = 0.0;
    for (double v : cell.values)
      if (!std::isnan(v)) ss += (v - cell.mean) * (v - cell.mean);
    cell.sd = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
  }
  return report;
}

void write_simulation_csv(std::ostream& out, const SimulationReport& report) {
  out << "case,metric,param,mean,sd,failures\n";
  for (const auto& c : report.cells) {
    out << to_string(c.which) << ',' << c.metric.label() << ',' << c.param << ','
        << format_number(c.mean) << ',' << format_number(c.sd) << ',' << c.failures << '\n';
  }
}

}  // namespace lsalign
