#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <new>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbstree/asymptotics.hpp"
#include "gibbstree/errors.hpp"
#include "gibbstree/ks.hpp"
#include "gibbstree/limit.hpp"
#include "gibbstree/markov_tree.hpp"
#include "gibbstree/model.hpp"
#include "gibbstree/random.hpp"

namespace gibbstree::cli {

namespace {

using Json = nlohmann::ordered_json;

// Sub-seed tags so that the parts of one run never share random streams.
enum SeedTag : std::uint64_t {
  kTagBesq = 1,
  kTagDiscrete = 2,
  kTagCompare = 3,
  kTagIncrements = 4,
};

// Collects flag overrides and applies the ones given on the command line.
class FlagSet {
 public:
  template <typename T, typename Set>
  CLI::Option *add(CLI::App *app, const std::string &name, const std::string &help, Set set) {
    auto value = std::make_shared<T>();
    CLI::Option *opt = app->add_option(name, *value, help);
    appliers_.push_back([opt, value, set](ExperimentConfig &c) {
      if (opt->count() > 0) set(c, *value);
    });
    return opt;
  }

  void apply(ExperimentConfig &config) const {
    for (const auto &f : appliers_) f(config);
  }

 private:
  std::vector<std::function<void(ExperimentConfig &)>> appliers_;
};

struct Context {
  ExperimentConfig config;
  EnergyModel model;
  CriticalParams params;
  std::string format;
  unsigned workers;
};

struct Outcome {
  std::string body;
  int checks = 0;
  int passed = 0;
};

Json model_json(const EnergyModel &model) {
  Json j;
  j["D"] = model.max_degree();
  j["E"] = std::vector<double>(model.energies().data(),
                               model.energies().data() + model.energies().size());
  j["beta"] = model.beta();
  return j;
}

std::string param(std::initializer_list<std::pair<const char *, std::string>> items) {
  std::string out;
  for (const auto &[key, value] : items) {
    if (!out.empty()) out += ' ';
    out += key;
    out += '=';
    out += value;
  }
  return out;
}

ReportRow info(std::string test, std::string p, double statistic) {
  return ReportRow{.test = std::move(test), .param = std::move(p), .statistic = statistic};
}

ReportRow check_below(std::string test, std::string p, double statistic, double threshold) {
  return ReportRow{.test = std::move(test),
                   .param = std::move(p),
                   .statistic = statistic,
                   .has_threshold = true,
                   .threshold = threshold,
                   .pass = statistic < threshold};
}

ReportRow check_at_most(std::string test, std::string p, double statistic, double threshold) {
  ReportRow row = check_below(std::move(test), std::move(p), statistic, threshold);
  row.pass = statistic <= threshold;
  return row;
}

Outcome render_report(const std::string &command, const Context &ctx,
                      const std::vector<ReportRow> &rows) {
  Outcome outcome;
  for (const auto &row : rows) {
    if (!row.has_threshold) continue;
    ++outcome.checks;
    if (row.pass) ++outcome.passed;
  }
  const auto result = [](const ReportRow &row) -> std::string {
    if (!row.has_threshold) return "info";
    return row.pass ? "pass" : "fail";
  };
  std::ostringstream s;
  if (ctx.format == "json") {
    Json doc;
    doc["command"] = command;
    doc["seed"] = ctx.config.seed;
    doc["model"] = model_json(ctx.model);
    Json list = Json::array();
    for (const auto &row : rows) {
      Json j;
      j["test"] = row.test;
      j["param"] = row.param;
      j["statistic"] = row.statistic;
      j["threshold"] = row.has_threshold ? Json(row.threshold) : Json(nullptr);
      j["result"] = result(row);
      list.push_back(std::move(j));
    }
    doc["rows"] = std::move(list);
    doc["checks"] = outcome.checks;
    doc["passed"] = outcome.passed;
    doc["pass"] = outcome.passed == outcome.checks;
    s << doc.dump(2) << '\n';
  } else {
    s << "test,param,statistic,threshold,result\n";
    for (const auto &row : rows) {
      s << row.test << ',' << row.param << ',' << format_double(row.statistic) << ','
        << (row.has_threshold ? format_double(row.threshold) : std::string()) << ','
        << result(row) << '\n';
    }
  }
  outcome.body = s.str();
  return outcome;
}

void write_histogram(const std::string &path, const std::vector<double> &samples, int bins) {
  const Histogram h = histogram(samples, bins, 0.0, 10.0);
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open histogram file '" + path + "'");
  f << "lower,upper,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    f << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ',' << h.counts[b]
      << '\n';
}

Outcome cmd_solve(const Context &ctx) {
  const auto record = flat_record(ctx.params);
  std::ostringstream s;
  if (ctx.format == "json") {
    Json doc;
    for (const auto &[name, value] : record) doc[name] = value;
    s << doc.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < record.size(); ++i) s << (i ? "," : "") << record[i].first;
    s << '\n';
    for (std::size_t i = 0; i < record.size(); ++i)
      s << (i ? "," : "") << format_double(record[i].second);
    s << '\n';
  }
  return Outcome{.body = s.str()};
}

Outcome cmd_converge(const Context &ctx) {
  const auto &c = ctx.config.converge;
  const auto rows = convergence_table(ctx.model, c.n, c.orders);
  std::vector<double> tv;
  for (const auto &row : rows) tv.push_back(row.tv);
  const int increases = count_increases(tv);
  const double ratio = tv.front() / tv.back();
  const bool pass = increases <= c.max_inversions && tv.back() < tv.front() / c.min_ratio;

  std::ostringstream s;
  if (ctx.format == "json") {
    Json doc;
    doc["command"] = "converge";
    doc["model"] = model_json(ctx.model);
    doc["n"] = c.n;
    Json list = Json::array();
    for (const auto &row : rows) list.push_back(Json{{"N", row.N}, {"n", row.n}, {"tv_distance", row.tv}});
    doc["rows"] = std::move(list);
    doc["increases"] = increases;
    doc["ratio"] = ratio;
    doc["pass"] = pass;
    s << doc.dump(2) << '\n';
  } else {
    s << "N,n,tv_distance\n";
    for (const auto &row : rows) s << row.N << ',' << row.n << ',' << format_double(row.tv) << '\n';
  }
  return Outcome{.body = s.str(), .checks = 1, .passed = pass ? 1 : 0};
}

Outcome cmd_sample(const Context &ctx) {
  const auto &c = ctx.config.sample;
  std::vector<TreeTrajectory> trajectories(static_cast<std::size_t>(c.trajectories));
  parallel_for(trajectories.size(), ctx.workers, [&](std::size_t i) {
    trajectories[i] = sample_trajectory(c.levels, ctx.params, ctx.config.seed, i);
  });
  std::ostringstream s;
  if (ctx.format == "json") {
    Json doc;
    doc["command"] = "sample";
    doc["seed"] = ctx.config.seed;
    doc["model"] = model_json(ctx.model);
    Json list = Json::array();
    for (const auto &t : trajectories) {
      Json levels = Json::array();
      for (const auto &level : t.levels) levels.push_back(level.parents());
      list.push_back(Json{{"stream", t.stream}, {"levels", std::move(levels)}, {"sizes", t.sizes()}});
    }
    doc["trajectories"] = std::move(list);
    s << doc.dump(2) << '\n';
  } else if (ctx.format == "csv") {
    s << "stream,step,size\n";
    for (const auto &t : trajectories) {
      const auto sizes = t.sizes();
      for (std::size_t step = 0; step < sizes.size(); ++step)
        s << t.stream << ',' << step << ',' << sizes[step] << '\n';
    }
  } else {
    for (const auto &t : trajectories) write_trajectory(s, t);
  }
  return Outcome{.body = s.str()};
}

Outcome cmd_gamma(const Context &ctx) {
  const auto &g = ctx.config.gamma;
  const auto result = gamma_limit_test(g.n, g.samples, ctx.params, ctx.config.seed, ctx.workers);
  if (!g.histogram.empty()) write_histogram(g.histogram, result.scaled, g.histogram_bins);
  const std::string p = param({{"n", std::to_string(g.n)}, {"samples", std::to_string(g.samples)}});
  const double expected_raw = 1.0 + g.n * ctx.params.mu;
  std::vector<ReportRow> rows;
  rows.push_back(check_below("gamma_ks", p, result.ks.statistic, g.threshold));
  rows.push_back(info("gamma_ks_p_value", p, result.ks.p_value));
  rows.push_back(info("scaled_mean", p, result.sample_mean));
  rows.push_back(info("raw_mean", p, result.raw_mean));
  rows.push_back(info("raw_mean_expected", p, expected_raw));
  rows.push_back(info("raw_mean_se", p, result.raw_mean_standard_error));
  rows.push_back(check_at_most("raw_mean_z", p,
                               std::abs(result.raw_mean - expected_raw) /
                                   result.raw_mean_standard_error,
                               3.0));
  return render_report("gamma", ctx, rows);
}

Outcome cmd_laplace(const Context &ctx) {
  const auto &l = ctx.config.laplace;
  const double limit = laplace_limit(l.x, ctx.params.mu);
  const int n_check = l.n.empty() ? 0 : *std::max_element(l.n.begin(), l.n.end());
  std::vector<ReportRow> rows;
  rows.push_back(info("laplace_limit", param({{"x", format_double(l.x)}}), limit));
  for (int n : l.n) {
    const std::string p = param({{"n", std::to_string(n)}, {"x", format_double(l.x)}});
    const double value = laplace_exact(n, l.x, ctx.params);
    rows.push_back(info("laplace_value", p, value));
    if (n == n_check)
      rows.push_back(check_below("laplace_gap", p, std::abs(value - limit), l.tolerance));
    else
      rows.push_back(info("laplace_gap", p, std::abs(value - limit)));
    if (l.x < 0.0 && n >= 2)
      rows.push_back(info("comparison_constant", p, laplace_comparison_constant(n, l.x, ctx.params)));
  }
  for (int n = 1; n <= l.oracle_max_n; ++n) {
    const std::string p = param({{"n", std::to_string(n)}, {"x", format_double(l.x)}});
    const double gap =
        std::abs(laplace_exact(n, l.x, ctx.params) - laplace_expectation(n, l.x, ctx.params));
    rows.push_back(check_below("oracle_gap", p, gap, l.oracle_tolerance));
  }
  return render_report("laplace", ctx, rows);
}

bool has_part(const DiffuseBlock &d, const char *part) {
  return std::find(d.parts.begin(), d.parts.end(), part) != d.parts.end();
}

void diffuse_besq(const Context &ctx, std::vector<ReportRow> &rows) {
  const auto &d = ctx.config.diffuse;
  const double mu = ctx.params.mu;
  const auto z = besq_terminal_values(d.paths, d.T_end, d.dt, ctx.params,
                                      derive_seed(ctx.config.seed, kTagBesq), ctx.workers);
  CompensatedSum<double> sum, sum_sq;
  for (double v : z) sum += v;
  const double m = static_cast<double>(z.size());
  const double mean = sum.value() / m;
  for (double v : z) sum_sq += (v - mean) * (v - mean);
  const double variance = sum_sq.value() / (m - 1.0);
  const double mean_exact = mu * d.T_end;
  const double variance_exact = 0.5 * mean_exact * mean_exact;

  std::vector<double> scaled(z.size());
  const double scale = 2.0 / (mu * d.T_end);
  std::transform(z.begin(), z.end(), scaled.begin(), [&](double v) { return scale * v; });
  if (!d.histogram.empty()) write_histogram(d.histogram, scaled, d.histogram_bins);

  const std::string p = param({{"T", format_double(d.T_end)}, {"dt", format_double(d.dt)},
                               {"paths", std::to_string(d.paths)}});
  rows.push_back(info("besq_mean", p, mean));
  rows.push_back(check_below("besq_mean_rel_error", p, std::abs(mean - mean_exact) / mean_exact,
                             d.mean_tolerance));
  rows.push_back(info("besq_variance", p, variance));
  rows.push_back(check_below("besq_variance_rel_error", p,
                             std::abs(variance - variance_exact) / variance_exact,
                             d.variance_tolerance));
  rows.push_back(check_below("besq_ks", p, ks_test(scaled, gamma2_cdf).statistic, d.ks_threshold));

  const auto discrete = gamma_limit_test(d.discrete_n, d.paths, ctx.params,
                                         derive_seed(ctx.config.seed, kTagDiscrete), ctx.workers);
  const std::string q = param({{"n", std::to_string(d.discrete_n)}, {"paths", std::to_string(d.paths)}});
  rows.push_back(check_below("besq_vs_discrete_ks", q,
                             ks_two_sample(scaled, discrete.scaled).statistic,
                             d.two_sample_threshold));
}

void diffuse_compare(const Context &ctx, std::vector<ReportRow> &rows) {
  const auto &d = ctx.config.diffuse;
  std::vector<int> orders = d.compare_n;
  std::sort(orders.begin(), orders.end());
  const DiscreteVsSdeOptions options{.paths = d.compare_paths, .dt = d.dt, .workers = ctx.workers};
  for (int r : d.compare_r) {
    // (coordinate, t) -> distances in increasing n
    std::vector<std::pair<std::pair<int, double>, std::vector<double>>> series;
    for (int n : orders) {
      const auto table = compare_discrete_vs_sde(
          n, r, ctx.params, derive_seed(derive_seed(ctx.config.seed, kTagCompare), n), options);
      for (const auto &row : table) {
        const std::string coordinate = row.coordinate < 0 ? "sum" : std::to_string(row.coordinate + 1);
        rows.push_back(info("groups_ks",
                            param({{"n", std::to_string(n)}, {"r", std::to_string(r)},
                                   {"i", coordinate}, {"t", format_double(row.t)}}),
                            row.ks));
        const auto key = std::make_pair(row.coordinate, row.t);
        auto it = std::find_if(series.begin(), series.end(), [&](const auto &e) { return e.first == key; });
        if (it == series.end()) {
          series.push_back({key, {}});
          it = std::prev(series.end());
        }
        it->second.push_back(row.ks);
      }
    }
    for (const auto &[key, values] : series) {
      const std::string coordinate = key.first < 0 ? "sum" : std::to_string(key.first + 1);
      rows.push_back(info("groups_ks_increases",
                          param({{"r", std::to_string(r)}, {"i", coordinate}, {"t", format_double(key.second)}}),
                          count_increases(values)));
    }
  }
}

void diffuse_increments(const Context &ctx, std::vector<ReportRow> &rows) {
  const auto &d = ctx.config.diffuse;
  const auto stats = group_increment_statistics(d.increments_n, d.increments_r,
                                                d.increments_trajectories, ctx.params,
                                                derive_seed(ctx.config.seed, kTagIncrements),
                                                ctx.workers);
  const std::string p = param({{"n", std::to_string(d.increments_n)}, {"r", std::to_string(d.increments_r)},
                               {"trajectories", std::to_string(d.increments_trajectories)}});
  rows.push_back(info("increment_steps", p, static_cast<double>(stats.steps)));
  rows.push_back(info("drift_residual_mean", p, stats.drift_residual_mean));
  rows.push_back(info("drift_residual_se", p, stats.drift_residual_se));
  rows.push_back(check_at_most("drift_residual_z", p,
                               std::abs(stats.drift_residual_mean) / stats.drift_residual_se,
                               d.increments_sigmas));
  rows.push_back(info("cross_variation_mean", p, stats.cross_variation_mean));
  rows.push_back(info("cross_variation_se", p, stats.cross_variation_se));
  rows.push_back(check_at_most("cross_variation_z", p,
                               std::abs(stats.cross_variation_mean) / stats.cross_variation_se,
                               d.increments_sigmas));
  rows.push_back(info("centred_cross_mean", p, stats.centred_cross_mean));
}

Outcome cmd_diffuse(const Context &ctx) {
  const auto &d = ctx.config.diffuse;
  std::vector<ReportRow> rows;
  if (has_part(d, "besq")) diffuse_besq(ctx, rows);
  if (has_part(d, "compare")) diffuse_compare(ctx, rows);
  if (has_part(d, "increments")) diffuse_increments(ctx, rows);
  return render_report("diffuse", ctx, rows);
}

Outcome cmd_moments(const Context &ctx) {
  const auto &m = ctx.config.moments;
  std::vector<ReportRow> rows;
  for (int q = 1; q <= m.q_max; ++q) {
    for (int k = 1; k <= m.k_max; ++k) {
      const double exhaustive = conditional_moment_exhaustive(k, q, ctx.params);
      const double formula = conditional_moment_formula(k, q, ctx.params);
      const std::string p = param({{"q", std::to_string(q)}, {"k", std::to_string(k)}});
      rows.push_back(info("moment_exhaustive", p, exhaustive));
      rows.push_back(info("moment_formula", p, formula));
      rows.push_back(check_at_most("moment_rel_error", p,
                                   std::abs(exhaustive - formula) / std::abs(formula), m.tolerance));
    }
  }
  return render_report("moments", ctx, rows);
}

struct CommandSpec {
  const char *name;
  const char *help;
  std::vector<std::string> formats;  // first entry is the default
  Outcome (*run)(const Context &);
};

const std::vector<CommandSpec> &commands() {
  static const std::vector<CommandSpec> list = {
      {"solve", "Critical parameters of the model", {"csv", "json"}, &cmd_solve},
      {"converge", "Total variation distance to the limit law over a range of orders", {"csv", "json"}, &cmd_converge},
      {"sample", "Levels of limit trees", {"text", "csv", "json"}, &cmd_sample},
      {"gamma", "Monte Carlo gamma limit of the rescaled level size", {"csv", "json"}, &cmd_gamma},
      {"laplace", "Laplace transform iteration of the level size", {"csv", "json"}, &cmd_laplace},
      {"diffuse", "Diffusion approximation and group coevolution", {"csv", "json"}, &cmd_diffuse},
      {"moments", "Conditional moments of the level-size chain", {"csv", "json"}, &cmd_moments},
  };
  return list;
}

void add_command_flags(const std::string &name, CLI::App *sub, FlagSet &flags) {
  if (name == "converge") {
    flags.add<int>(sub, "--n", "Neighbourhood radius", [](auto &c, int v) { c.converge.n = v; });
    flags.add<std::vector<int>>(sub, "--orders", "Tree orders N", [](auto &c, const auto &v) { c.converge.orders = v; })
        ->delimiter(',');
  } else if (name == "sample") {
    flags.add<int>(sub, "--levels", "Levels per tree", [](auto &c, int v) { c.sample.levels = v; });
    flags.add<int>(sub, "--trajectories", "Number of trees", [](auto &c, int v) { c.sample.trajectories = v; });
  } else if (name == "gamma") {
    flags.add<int>(sub, "--n", "Level", [](auto &c, int v) { c.gamma.n = v; });
    flags.add<std::size_t>(sub, "--samples", "Number of trees", [](auto &c, std::size_t v) { c.gamma.samples = v; });
    flags.add<std::string>(sub, "--histogram", "Histogram CSV path", [](auto &c, const std::string &v) { c.gamma.histogram = v; });
  } else if (name == "laplace") {
    flags.add<double>(sub, "--x", "Transform argument (<= 0)", [](auto &c, double v) { c.laplace.x = v; });
    flags.add<std::vector<int>>(sub, "--n", "Levels", [](auto &c, const auto &v) { c.laplace.n = v; })
        ->delimiter(',');
  } else if (name == "diffuse") {
    flags.add<std::vector<std::string>>(sub, "--parts", "besq,compare,increments", [](auto &c, const auto &v) { c.diffuse.parts = v; })
        ->delimiter(',');
    flags.add<double>(sub, "--T-end", "Terminal time", [](auto &c, double v) { c.diffuse.T_end = v; });
    flags.add<double>(sub, "--dt", "Euler-Maruyama step", [](auto &c, double v) { c.diffuse.dt = v; });
    flags.add<std::size_t>(sub, "--paths", "SDE paths", [](auto &c, std::size_t v) { c.diffuse.paths = v; });
    flags.add<int>(sub, "--discrete-n", "Level of the discrete comparison sample", [](auto &c, int v) { c.diffuse.discrete_n = v; });
    flags.add<std::vector<int>>(sub, "--compare-n", "Levels for the group comparison", [](auto &c, const auto &v) { c.diffuse.compare_n = v; })
        ->delimiter(',');
    flags.add<std::vector<int>>(sub, "--compare-r", "Group counts for the comparison", [](auto &c, const auto &v) { c.diffuse.compare_r = v; })
        ->delimiter(',');
    flags.add<std::size_t>(sub, "--compare-paths", "Samples per comparison", [](auto &c, std::size_t v) { c.diffuse.compare_paths = v; });
    flags.add<int>(sub, "--increments-n", "Depth for increment statistics", [](auto &c, int v) { c.diffuse.increments_n = v; });
    flags.add<std::size_t>(sub, "--increments-trajectories", "Trees for increment statistics", [](auto &c, std::size_t v) { c.diffuse.increments_trajectories = v; });
    flags.add<std::string>(sub, "--histogram", "Histogram CSV path", [](auto &c, const std::string &v) { c.diffuse.histogram = v; });
  } else if (name == "moments") {
    flags.add<int>(sub, "--k-max", "Largest level size", [](auto &c, int v) { c.moments.k_max = v; });
    flags.add<int>(sub, "--q-max", "Highest moment (<= 4)", [](auto &c, int v) { c.moments.q_max = v; });
  }
}

void emit_error(std::ostream &err, const char *kind, const std::string &message, int code) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  err << j.dump() << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Gibbs plane trees: critical parameters, limit laws and scaling limits", "gibbstree"};
  app.require_subcommand(1);
  app.fallthrough();

  FlagSet flags;
  std::string config_path;
  bool quiet = false;
  bool json_switch = false;
  app.add_option("--config", config_path, "JSON config file");
  flags.add<std::uint64_t>(&app, "--seed", "Master seed", [](auto &c, std::uint64_t v) { c.seed = v; });
  flags.add<std::string>(&app, "--out", "Output path (default stdout)", [](auto &c, const std::string &v) { c.out = v; });
  flags.add<std::string>(&app, "--format", "csv, json (sample: text, csv, json)", [](auto &c, const std::string &v) { c.format = v; });
  flags.add<unsigned>(&app, "--threads", "Worker threads (0: all cores)", [](auto &c, unsigned v) { c.threads = v; });
  flags.add<int>(&app, "--D", "Maximal out-degree", [](auto &c, int v) { c.model.D = v; });
  flags.add<std::vector<double>>(&app, "--E", "Energies E_0..E_D", [](auto &c, const auto &v) { c.model.E = v; })
      ->delimiter(',');
  flags.add<double>(&app, "--beta", "Inverse temperature", [](auto &c, double v) { c.model.beta = v; });
  app.add_flag("--quiet", quiet, "No summary on stderr");
  app.add_flag("--json", json_switch, "Same as --format json");

  const CommandSpec *selected = nullptr;
  for (const auto &spec : commands()) {
    CLI::App *sub = app.add_subcommand(spec.name, spec.help);
    add_command_flags(spec.name, sub, flags);
    sub->callback([&selected, &spec] { selected = &spec; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    emit_error(err, "config", e.what(), kExitConfig);
    return kExitConfig;
  }

  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    flags.apply(config);
    if (quiet) config.quiet = true;
    if (json_switch) config.format = "json";
    validate(config);

    std::string format = config.format.empty() ? selected->formats.front() : config.format;
    if (std::find(selected->formats.begin(), selected->formats.end(), format) == selected->formats.end())
      throw ConfigError("format '" + format + "' is not available for " + selected->name);

    EnergyModel model = build_model(config.model);
    CriticalParams params = critical_params(model);
    const unsigned workers = config.threads == 0 ? default_worker_count() : config.threads;
    const Context ctx{.config = config,
                      .model = model,
                      .params = params,
                      .format = format,
                      .workers = workers};
    const Outcome outcome = selected->run(ctx);

    if (config.out.empty() || config.out == "-") {
      out << outcome.body;
    } else {
      std::ofstream file(config.out, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + config.out + "'");
      file << outcome.body;
    }
    if (!config.quiet) {
      err << selected->name << ": ";
      if (outcome.checks == 0)
        err << "ok\n";
      else
        err << outcome.passed << '/' << outcome.checks << " checks passed\n";
    }
    return outcome.passed == outcome.checks ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError &e) {
    emit_error(err, "config", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const InvalidModel &e) {
    emit_error(err, "invalid_model", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const ResourceError &e) {
    emit_error(err, "resource", e.what(), kExitResource);
    return kExitResource;
  } catch (const std::bad_alloc &) {
    emit_error(err, "resource", "out of memory", kExitResource);
    return kExitResource;
  } catch (const DomainError &e) {
    emit_error(err, "config", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const SupportError &e) {
    emit_error(err, "config", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const std::exception &e) {
    emit_error(err, "internal", e.what(), 1);
    return 1;
  }
}

}  // namespace gibbstree::cli
