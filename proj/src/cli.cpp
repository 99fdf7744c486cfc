#include "lsalign/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <ostream>

#include "lsalign/align.hpp"
#include "lsalign/distance.hpp"
#include "lsalign/error.hpp"
#include "lsalign/format.hpp"
#include "lsalign/inference.hpp"
#include "lsalign/io.hpp"
#include "lsalign/simulate.hpp"

namespace lsalign::cli {

namespace {

// Degenerate-math outcome that still produced output.
struct DegenerateOutcome {};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

// section,name,value,units
class Envelope {
 public:
  Envelope(std::ostream& out, std::ostream& err, const std::string& command)
      : out_(out), err_(err) {
    out_ << "section,name,value,units\n";
    row("input", "command", command, "");
  }

  void row(const std::string& section, const std::string& name, const std::string& value,
           const std::string& units) {
    out_ << section << ',' << csv_field(name) << ',' << csv_field(value) << ',' << units << '\n';
  }
  void number(const std::string& section, const std::string& name, double v,
              const std::string& units) {
    row(section, name, format_number(v), units);
  }
  void warning(const std::string& code, const std::string& message) {
    row("warning", code, message, "");
    err_ << "warning: " << message << '\n';
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

struct MetricOptions {
  std::string metric = "mallows";
  double r = 1.0;

  std::vector<Metric> metrics() const {
    std::vector<Metric> out;
    if (metric == "mallows" || metric == "both") out.push_back(Metric::mallows(r));
    if (metric == "ks" || metric == "both") out.push_back(Metric::ks());
    return out;
  }
  Metric single() const {
    if (metric == "both") throw InvalidParameter("this command takes a single metric");
    return metrics().front();
  }
};

void add_metric_options(CLI::App* cmd, MetricOptions& m, bool allow_both) {
  std::vector<std::string> choices{"mallows", "ks"};
  if (allow_both) choices.push_back("both");
  cmd->add_option("--metric", m.metric, "Discrepancy measure")
      ->check(CLI::IsMember(choices))
      ->capture_default_str();
  cmd->add_option("--r", m.r, "Mallows order (>= 1)")->capture_default_str();
}

struct BoundOptions {
  std::optional<double> sigma_min, sigma_max, h_min, h_max;

  void add(CLI::App* cmd) {
    cmd->add_option("--sigma-min", sigma_min, "Lower scale bound");
    cmd->add_option("--sigma-max", sigma_max, "Upper scale bound");
    cmd->add_option("--h-min", h_min, "Lower shift bound");
    cmd->add_option("--h-max", h_max, "Upper shift bound");
  }
  SearchBounds resolve(const Distribution& f, const Distribution& g) const {
    SearchBounds b = default_bounds(f, g);
    if (sigma_min) b.sigma.lo = *sigma_min;
    if (sigma_max) b.sigma.hi = *sigma_max;
    if (h_min) b.h.lo = *h_min;
    if (h_max) b.h.hi = *h_max;
    b.validate();
    return b;
  }
};

std::string units_of_distance(const Metric& m) { return m.is_ks() ? "probability" : "data"; }

void echo_metric(Envelope& env, const Metric& m) {
  env.row("input", "metric", m.is_ks() ? "ks" : "mallows", "");
  if (m.is_mallows()) env.number("input", "r", m.r, "");
}

int cmd_distance(const std::string& file_f, const std::string& file_g, const MetricOptions& mo,
                 std::ostream& out, std::ostream& err) {
  const auto metrics = mo.metrics();
  const Distribution f = EmpiricalDist(read_sample_file(file_f));
  const Distribution g = EmpiricalDist(read_sample_file(file_g));
  Envelope env(out, err, "distance");
  env.row("input", "f", file_f, "");
  env.row("input", "g", file_g, "");
  env.row("input", "metric", mo.metric, "");
  env.number("input", "r", mo.r, "");
  for (const auto& m : metrics) {
    if (m.is_mallows())
      env.number("result", "mallows_distance", mallows_distance(f, g, m.r), "data");
    else
      env.number("result", "ks_distance", ks_distance(f, g), "probability");
  }
  return kOk;
}

int cmd_align(const std::string& file_f, const std::string& file_g, const std::string& which_text,
              const MetricOptions& mo, const BoundOptions& bo, std::ostream& out,
              std::ostream& err) {
  const Metric metric = mo.single();
  const AlignCase which = parse_align_case(which_text);
  const Distribution f = EmpiricalDist(read_sample_file(file_f));
  const Distribution g = EmpiricalDist(read_sample_file(file_g));
  const SearchBounds bounds = bo.resolve(f, g);
  const AlignmentResult result = align(f, g, which, metric, bounds);

  Envelope env(out, err, "align");
  env.row("input", "f", file_f, "");
  env.row("input", "g", file_g, "");
  env.row("input", "case", to_string(which), "");
  echo_metric(env, metric);
  env.number("input", "sigma_min", bounds.sigma.lo, "dimensionless");
  env.number("input", "sigma_max", bounds.sigma.hi, "dimensionless");
  env.number("input", "h_min", bounds.h.lo, "data");
  env.number("input", "h_max", bounds.h.hi, "data");
  env.number("result", "sigma", result.optimal.sigma, "dimensionless");
  env.number("result", "h", result.optimal.h, "data");
  env.number("result", "distance", result.distance, units_of_distance(metric));
  if (result.argmin_h_interval) {
    env.number("result", "h_interval_lo", result.argmin_h_interval->lo, "data");
    env.number("result", "h_interval_hi", result.argmin_h_interval->hi, "data");
  }
  if (result.argmin_sigma_interval) {
    env.number("result", "sigma_interval_lo", result.argmin_sigma_interval->lo, "dimensionless");
    env.number("result", "sigma_interval_hi", result.argmin_sigma_interval->hi, "dimensionless");
  }
  env.row("result", "solver", result.solver, "");
  env.row("result", "certified", result.certified ? "true" : "false", "");
  env.row("result", "evaluations", std::to_string(result.evaluations), "count");
  env.row("note", "convention", "f samples are mapped x -> sigma*x + h", "");
  if (result.argmin_h_interval || result.argmin_sigma_interval)
    env.row("note", "canonical",
            "sigma = 1 if it minimizes, else the smallest minimizing sigma; h = minimizer of least "
            "magnitude",
            "");
  for (const auto& n : result.notes) env.row("note", "solver", n, "");
  if (result.degenerate) {
    env.warning("degenerate_scale", "scale is degenerate for these samples");
    return kDegenerate;
  }
  return kOk;
}

struct ProfileOptions {
  bool curve = false;
  bool surface = false;
  std::size_t steps = 101;
  std::size_t sigma_steps = 51;
  std::size_t h_steps = 51;
};

int cmd_profile(const std::string& file_f, const std::string& file_g, const MetricOptions& mo,
                const BoundOptions& bo, const ProfileOptions& po, std::ostream& out) {
  const Metric metric = mo.single();
  if (po.curve == po.surface) throw InvalidParameter("choose exactly one of --curve or --surface");
  const Distribution f = EmpiricalDist(read_sample_file(file_f));
  const Distribution g = EmpiricalDist(read_sample_file(file_g));
  SearchBounds bounds = default_bounds(f, g);
  if (bo.sigma_min) bounds.sigma.lo = *bo.sigma_min;
  if (bo.sigma_max) bounds.sigma.hi = *bo.sigma_max;
  if (bo.h_min) bounds.h.lo = *bo.h_min;
  if (bo.h_max) bounds.h.hi = *bo.h_max;

  if (po.curve) {
    if (!(bounds.h.hi > bounds.h.lo)) throw InvalidParameter("empty h range");
    const auto curve = profile_shift_curve(f, g, metric, bounds.h, po.steps);
    out << "h,distance\n";
    for (const auto& p : curve.points) out << format_number(p.h) << ',' << format_number(p.distance) << '\n';
    return kOk;
  }
  bounds.validate();
  const auto surface = profile_surface(f, g, metric, bounds, po.sigma_steps, po.h_steps);
  out << "sigma,h,distance\n";
  for (std::size_t i = 0; i < surface.sigmas.size(); ++i)
    for (std::size_t j = 0; j < surface.shifts.size(); ++j)
      out << format_number(surface.sigmas[i]) << ',' << format_number(surface.shifts[j]) << ','
          << format_number(surface.at(i, j)) << '\n';
  return kOk;
}

struct PairedOptions {
  std::string study;
  std::string baseline;
  std::string followup;
  std::string treatments;
  std::string format = "table";
};

int cmd_paired_compare(const PairedOptions& po, const MetricOptions& mo, std::ostream& out,
                       std::ostream& err) {
  const auto metrics = mo.metrics();
  const PairedStudyTable table = read_study_file(po.study);

  std::vector<std::string> treatments = table.treatments();
  if (!po.treatments.empty()) {
    std::vector<std::string> chosen;
    for (auto& field : split_csv_line(po.treatments)) chosen.push_back(field);
    if (chosen.size() != 2) throw InvalidParameter("--treatments takes two labels");
    for (const auto& t : chosen)
      if (std::find(treatments.begin(), treatments.end(), t) == treatments.end())
        throw InputError(po.study, 0, "treatment '" + t + "' not present");
    if (treatments.size() != 2)
      throw InputError(po.study, 0, "expected exactly two treatments, found " + std::to_string(treatments.size()));
    treatments = chosen;
  }
  if (treatments.size() != 2)
    throw InputError(po.study, 0,
                     "expected exactly two treatments, found " + std::to_string(treatments.size()));

  const auto visits = table.visits();
  std::string baseline = po.baseline;
  std::string followup = po.followup;
  if (baseline.empty() || followup.empty()) {
    if (visits.size() != 2)
      throw InputError(po.study, 0, "cannot infer visits; pass --baseline and --followup");
    if (baseline.empty()) baseline = visits[0] == followup ? visits[1] : visits[0];
    if (followup.empty()) followup = visits[0] == baseline ? visits[1] : visits[0];
  }
  for (const auto& v : {baseline, followup})
    if (std::find(visits.begin(), visits.end(), v) == visits.end())
      throw InputError(po.study, 0, "visit '" + v + "' not present");

  std::vector<std::string> warnings;
  struct SubjectData {
    std::string id;
    std::vector<double> base[2];
    std::vector<double> follow[2];
  };
  std::vector<SubjectData> usable;
  for (const auto& s : table.subjects()) {
    SubjectData d{s, {}, {}};
    bool complete = true;
    for (int t = 0; t < 2; ++t) {
      d.base[t] = table.values(s, treatments[t], baseline);
      d.follow[t] = table.values(s, treatments[t], followup);
      if (d.base[t].empty() || d.follow[t].empty()) complete = false;
    }
    if (complete) {
      usable.push_back(std::move(d));
    } else {
      warnings.push_back("subject " + s + " skipped: missing visit data");
    }
  }
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (usable.empty()) throw InputError(po.study, 0, "no subject has complete visit data");

  TreatmentComparisonReport report;
  report.label_c = treatments[0];
  report.label_f = treatments[1];
  for (const auto& metric : metrics) {
    PairedShifts shifts;
    shifts.metric = metric;
    for (const auto& d : usable) {
      shifts.subject_ids.push_back(d.id);
      double h[2];
      for (int t = 0; t < 2; ++t) {
        const Distribution b = EmpiricalDist::from_values(d.base[t]);
        const Distribution f = EmpiricalDist::from_values(d.follow[t]);
        h[t] = optimal_shift(b, f, metric).optimal.h;
      }
      shifts.shift_c.push_back(h[0]);
      shifts.shift_f.push_back(h[1]);
    }
    report.rows.push_back(paired_treatment_compare(shifts));
  }
  if (po.format == "csv")
    write_report_csv(out, report);
  else
    write_report_table(out, report);
  return kOk;
}

struct SimulateOptions {
  std::string config_file;
  std::optional<int> situation;
  std::optional<std::size_t> n, replicates, threads;
  std::optional<double> mu1, sigma1, mu2, sigma2, r;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> metric, cases;
};

int cmd_simulate(const SimulateOptions& so, std::ostream& out) {
  SimulationConfig config;
  if (!so.config_file.empty()) {
    std::ifstream in(so.config_file);
    if (!in) throw InputError(so.config_file, 0, "cannot open file");
    config = parse_simulation_config(in);
  }
  if (so.situation) {
    const auto base = SimulationConfig::situation(*so.situation);
    config.mu1 = base.mu1, config.sigma1 = base.sigma1;
    config.mu2 = base.mu2, config.sigma2 = base.sigma2;
  }
  if (so.n) config.n = *so.n;
  if (so.replicates) config.replicates = *so.replicates;
  if (so.threads) config.threads = *so.threads;
  if (so.mu1) config.mu1 = *so.mu1;
  if (so.sigma1) config.sigma1 = *so.sigma1;
  if (so.mu2) config.mu2 = *so.mu2;
  if (so.sigma2) config.sigma2 = *so.sigma2;
  if (so.r) config.r = *so.r;
  if (so.seed) config.base_seed = *so.seed;
  if (so.metric) {
    config.metrics.clear();
    if (*so.metric != "ks") config.metrics.push_back(Metric::Kind::Mallows);
    if (*so.metric != "mallows") config.metrics.push_back(Metric::Kind::KS);
  }
  if (so.cases) {
    config.cases.clear();
    for (const auto& c : split_csv_line(*so.cases)) config.cases.push_back(parse_align_case(c));
  }
  config.validate();
  write_simulation_csv(out, run_simulation(config));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Location and scale alignment of one-dimensional samples", "lsalign"};
  app.require_subcommand(1);

  MetricOptions metric_opts;
  BoundOptions bound_opts;
  std::string file_f, file_g, which = "shift";
  ProfileOptions profile_opts;
  PairedOptions paired_opts;
  SimulateOptions sim_opts;

  auto* distance = app.add_subcommand("distance", "Mallows and/or KS distance between two samples");
  distance->add_option("f", file_f, "First sample file")->required();
  distance->add_option("g", file_g, "Second sample file")->required();
  add_metric_options(distance, metric_opts, true);

  auto* align_cmd = app.add_subcommand("align", "Optimal shift, scale or shift-scale transform");
  align_cmd->add_option("f", file_f, "Sample to transform")->required();
  align_cmd->add_option("g", file_g, "Target sample")->required();
  align_cmd->add_option("--case", which, "shift | scale | shift-scale")
      ->check(CLI::IsMember({"shift", "scale", "shift-scale"}))
      ->capture_default_str();
  add_metric_options(align_cmd, metric_opts, false);
  bound_opts.add(align_cmd);

  auto* profile = app.add_subcommand("profile", "Objective along h or over (sigma, h) as CSV");
  profile->add_option("f", file_f, "Sample to transform")->required();
  profile->add_option("g", file_g, "Target sample")->required();
  profile->add_flag("--curve", profile_opts.curve, "Shift curve h,distance");
  profile->add_flag("--surface", profile_opts.surface, "Surface sigma,h,distance");
  profile->add_option("--steps", profile_opts.steps, "Points along the curve")->capture_default_str();
  profile->add_option("--sigma-steps", profile_opts.sigma_steps, "Surface rows")->capture_default_str();
  profile->add_option("--h-steps", profile_opts.h_steps, "Surface columns")->capture_default_str();
  add_metric_options(profile, metric_opts, false);
  bound_opts.add(profile);

  auto* paired = app.add_subcommand("paired-compare", "Two-treatment comparison of visit shifts");
  paired->add_option("study", paired_opts.study, "CSV with subject,treatment,visit,value")->required();
  paired->add_option("--baseline", paired_opts.baseline, "Baseline visit label");
  paired->add_option("--followup", paired_opts.followup, "Follow-up visit label");
  paired->add_option("--treatments", paired_opts.treatments, "Treatment labels C,F in report order");
  paired->add_option("--format", paired_opts.format, "table | csv")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();
  add_metric_options(paired, metric_opts, true);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo study with normal groups");
  simulate->add_option("--config", sim_opts.config_file, "key = value config file");
  simulate->add_option("--situation", sim_opts.situation, "Preset 1, 2 or 3")->check(CLI::Range(1, 3));
  simulate->add_option("--n", sim_opts.n, "Per-group sample size");
  simulate->add_option("-M,--replicates", sim_opts.replicates, "Replicate count");
  simulate->add_option("--mu1", sim_opts.mu1);
  simulate->add_option("--sigma1", sim_opts.sigma1);
  simulate->add_option("--mu2", sim_opts.mu2);
  simulate->add_option("--sigma2", sim_opts.sigma2);
  simulate->add_option("--r", sim_opts.r, "Mallows order");
  simulate->add_option("--seed", sim_opts.seed, "Base seed");
  simulate->add_option("--threads", sim_opts.threads, "Worker threads");
  simulate->add_option("--metric", sim_opts.metric, "mallows | ks | both")
      ->check(CLI::IsMember({"mallows", "ks", "both"}));
  simulate->add_option("--cases", sim_opts.cases, "Comma list of shift,scale,shift-scale");

  std::vector<const char*> argv{"lsalign"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*distance) return cmd_distance(file_f, file_g, metric_opts, out, err);
    if (*align_cmd) return cmd_align(file_f, file_g, which, metric_opts, bound_opts, out, err);
    if (*profile) return cmd_profile(file_f, file_g, metric_opts, bound_opts, profile_opts, out);
    if (*paired) return cmd_paired_compare(paired_opts, metric_opts, out, err);
    if (*simulate) return cmd_simulate(sim_opts, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DegenerateScale& e) {
    err << "warning: " << e.what() << '\n';
    return kDegenerate;
  } catch (const AllZeroDifferences& e) {
    err << "warning: " << e.what() << '\n';
    return kDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace lsalign::cli
