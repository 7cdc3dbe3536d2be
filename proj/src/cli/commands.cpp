#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "kernmetric/embeddings.hpp"
#include "kernmetric/errors.hpp"
#include "kernmetric/io.hpp"
#include "kernmetric/kernel_config.hpp"
#include "kernmetric/random.hpp"
#include "kernmetric/selfcheck.hpp"
#include "kernmetric/stats.hpp"

namespace kernmetric::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const fs::path& require_path(const std::optional<fs::path>& p, const char* flag) {
  if (!p) throw ParseError(std::string("missing required option ") + flag);
  return *p;
}

GridPtr load_grid(const RunConfig& cfg) {
  if (!cfg.grid) return nullptr;
  return make_grid(io::read_grid(*cfg.grid));
}

// Kernel from --kernel, or the default kernel on the space inferred from the
// first data file.
Kernel resolve_kernel(const RunConfig& cfg, const fs::path& data_file) {
  const GridPtr grid = load_grid(cfg);
  if (cfg.kernel_spec) return load_kernel(*cfg.kernel_spec, ConfigContext{grid, "."});
  return default_kernel(io::infer_space(data_file, grid));
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& content) {
  if (cfg.out) {
    io::write_atomic(*cfg.out, content);
  } else {
    out << content;
  }
}

DiscreteMeasure load_sample_measure(const fs::path& path, const std::optional<fs::path>& weights,
                                    const PointSpace& space) {
  if (space.is_measure()) return DiscreteMeasure::empirical(space, io::read_points(path, space));
  return io::read_measure(path, space, weights);
}

std::string test_result_json(const TestResult& r) {
  json j;
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["n_permutations"] = r.n_permutations;
  j["seed"] = r.seed;
  j["estimator"] = to_string(r.estimator);
  return j.dump() + "\n";
}

// Scenario for run_power.
struct Scenario {
  std::string generator = "function";  // "function" | "euclidean"
  std::size_t n = 20;
  std::size_t m = 20;
  std::size_t dim = 1;
  double noise = 1.0;
  GridPtr grid;
  std::vector<double> shifts{0.0};
};

Scenario load_scenario(const RunConfig& cfg) {
  const fs::path& path = require_path(cfg.scenario, "--scenario");
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open scenario");
  json j;
  try {
    in >> j;
    Scenario s;
    s.generator = j.value("generator", s.generator);
    s.n = j.value("n", s.n);
    s.m = j.value("m", s.m);
    s.dim = j.value("dim", s.dim);
    s.noise = j.value("noise", s.noise);
    if (j.contains("shifts")) s.shifts = j.at("shifts").get<std::vector<double>>();
    if (s.generator != "function" && s.generator != "euclidean") {
      throw ParseError(path.string() + ": unknown generator \"" + s.generator + "\"");
    }
    if (s.n < 2 || s.m < 2 || s.dim < 1 || s.shifts.empty() || !(s.noise >= 0.0)) {
      throw ParseError(path.string() + ": scenario needs n, m >= 2, dim >= 1, noise >= 0 and shifts");
    }
    if (s.generator == "function") {
      if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.is_string()) {
          s.grid = make_grid(io::read_grid(path.parent_path() / g.get<std::string>()));
        } else {
          s.grid = make_grid(QuadratureGrid::trapezoid(g.value("a", 0.0), g.value("b", 1.0),
                                                       g.value("m", std::size_t{51})));
        }
      } else if (cfg.grid) {
        s.grid = load_grid(cfg);
      } else {
        s.grid = make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 51));
      }
    }
    return s;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const DomainError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Noise process shared by both samples; the second sample is shifted by
// `shift` (first coordinate for Euclidean data, a constant for functions).
Point draw_point(const Scenario& s, CounterRng& rng, double shift) {
  if (s.generator == "euclidean") {
    Vector v(s.dim);
    for (double& x : v) x = s.noise * rng.normal();
    v[0] += shift;
    return Point(std::move(v));
  }
  double c[5];
  for (double& v : c) v = rng.normal();
  Vector values(s.grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = s.grid->nodes()[i];
    double f = 0.0;
    for (int k = 1; k <= 5; ++k) f += c[k - 1] * std::sin(k * 3.141592653589793 * t) / k;
    values[i] = shift + s.noise * f;
  }
  return Point(std::move(values));
}

template <class T>
void fill(const json& j, const char* key, std::optional<T>& slot) {
  if (!slot && j.contains(key)) slot = T(j.at(key).get<std::string>());
}

void merge_config_file(const fs::path& path, RunConfig& cfg, const CLI::App& app,
                       bool& command_set) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open config");
  json j;
  try {
    in >> j;
    auto unset = [&](const char* name) { return app.get_option(name)->count() == 0; };
    fill(j, "kernel", cfg.kernel_spec);
    fill(j, "points", cfg.points);
    fill(j, "x", cfg.x);
    fill(j, "y", cfg.y);
    fill(j, "x_weights", cfg.x_weights);
    fill(j, "y_weights", cfg.y_weights);
    fill(j, "forecast", cfg.forecast);
    fill(j, "forecast_weights", cfg.forecast_weights);
    fill(j, "obs", cfg.obs);
    fill(j, "grid", cfg.grid);
    fill(j, "scenario", cfg.scenario);
    fill(j, "out", cfg.out);
    if (j.contains("perms") && unset("--perms")) {
      const auto v = j.at("perms").get<long long>();
      if (v < 1) throw ParseError(path.string() + ": perms must be a positive integer");
      cfg.n_perm = static_cast<std::size_t>(v);
    }
    if (j.contains("trials") && unset("--trials")) {
      const auto v = j.at("trials").get<long long>();
      if (v < 1) throw ParseError(path.string() + ": trials must be a positive integer");
      cfg.trials = static_cast<std::size_t>(v);
    }
    if (j.contains("alpha") && unset("--alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("seed") && unset("--seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (!command_set && j.contains("command")) {
      static const std::pair<const char*, Command> kCommands[] = {
          {"gram", Command::gram},   {"mmd", Command::mmd},     {"test2", Command::test2},
          {"score", Command::score}, {"power", Command::power}, {"selfcheck", Command::selfcheck}};
      const auto name = j.at("command").get<std::string>();
      bool found = false;
      for (const auto& [n, c] : kCommands) {
        if (name == n) {
          cfg.command = c;
          found = true;
        }
      }
      if (!found) throw ParseError(path.string() + ": unknown command \"" + name + "\"");
      command_set = true;
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ParseError("alpha must lie in (0, 1)");
}

}  // namespace

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                        bool allow_fault_injection) {
  RunConfig cfg;
  CLI::App app{"Characteristic kernels, MMD, kernel scores and two-sample tests", "kernmetric"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string kernel, points, x, y, xw, yw, forecast, fw, obs, grid, scenario, outp, config;
  app.add_option("--kernel", kernel, "Kernel spec JSON");
  app.add_option("--points", points, "Points CSV (gram)");
  app.add_option("--x", x, "First sample / measure CSV");
  app.add_option("--y", y, "Second sample / measure CSV");
  app.add_option("--x-weights", xw, "Weights file for --x");
  app.add_option("--y-weights", yw, "Weights file for --y");
  app.add_option("--forecast", forecast, "Forecast measure CSV (score)");
  app.add_option("--forecast-weights", fw, "Weights file for --forecast");
  app.add_option("--obs", obs, "Observations CSV (score)");
  app.add_option("--grid", grid, "Quadrature grid CSV (node,weight)");
  app.add_option("--scenario", scenario, "Power scenario JSON");
  app.add_option("--out", outp, "Output path (stdout when omitted)");
  app.add_option("--perms", cfg.n_perm, "Number of permutations")->check(CLI::PositiveNumber);
  app.add_option("--alpha", cfg.alpha, "Test level")->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials (power)")->check(CLI::PositiveNumber);
  app.add_option("--config", config, "Run configuration JSON")->check(CLI::ExistingFile);
  if (allow_fault_injection) {
    app.add_flag("--inject-fault", cfg.inject_fault, "Force a selfcheck failure (test builds)");
  }

  struct Sub {
    const char* name;
    const char* help;
    Command cmd;
  };
  const Sub subs[] = {{"gram", "Write the Gram matrix of a point set", Command::gram},
                      {"mmd", "MMD, squared MMD and score divergence of two measures", Command::mmd},
                      {"test2", "Permutation two-sample test", Command::test2},
                      {"score", "Kernel scores of observations under a forecast", Command::score},
                      {"power", "Empirical rejection rates over mean shifts", Command::power},
                      {"selfcheck", "Run the built-in invariant suite", Command::selfcheck}};
  std::vector<std::pair<CLI::App*, Command>> sub_apps;
  for (const auto& s : subs) sub_apps.emplace_back(app.add_subcommand(s.name, s.help), s.cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, e.get_exit_code() == 0 ? kExitOk : kExitUsage + 0 * code};
  }

  bool command_set = false;
  for (const auto& [sub, cmd] : sub_apps) {
    if (sub->parsed()) {
      cfg.command = cmd;
      command_set = true;
    }
  }
  auto set = [](const std::string& v, std::optional<fs::path>& slot) {
    if (!v.empty()) slot = v;
  };
  set(kernel, cfg.kernel_spec);
  set(points, cfg.points);
  set(x, cfg.x);
  set(y, cfg.y);
  set(xw, cfg.x_weights);
  set(yw, cfg.y_weights);
  set(forecast, cfg.forecast);
  set(fw, cfg.forecast_weights);
  set(obs, cfg.obs);
  set(grid, cfg.grid);
  set(scenario, cfg.scenario);
  set(outp, cfg.out);

  try {
    if (!config.empty()) merge_config_file(config, cfg, app, command_set);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return {std::nullopt, kExitUsage};
  }
  if (!command_set) {
    err << "error: a command is required (gram, mmd, test2, score, power, selfcheck)\n";
    return {std::nullopt, kExitUsage};
  }
  return {cfg, kExitOk};
}

int run_gram(const RunConfig& cfg, std::ostream& out) {
  const fs::path& points_path = require_path(cfg.points, "--points");
  const Kernel k = resolve_kernel(cfg, points_path);
  const auto points = io::read_points(points_path, k.space());
  const GramMatrix g = gram(k, points);
  emit(cfg, out, io::matrix_to_csv(g.entries));
  return kExitOk;
}

int run_mmd(const RunConfig& cfg, std::ostream& out) {
  const fs::path& xp = require_path(cfg.x, "--x");
  const fs::path& yp = require_path(cfg.y, "--y");
  const Kernel k = resolve_kernel(cfg, xp);
  const auto p = load_sample_measure(xp, cfg.x_weights, k.space());
  const auto q = load_sample_measure(yp, cfg.y_weights, k.space());
  const double m = mmd(k, p, q);
  json j;
  j["mmd"] = m;
  j["mmd_squared"] = m * m;
  j["divergence"] = divergence(k, p, q);
  j["estimator"] = to_string(Estimator::exact_discrete);
  emit(cfg, out, j.dump() + "\n");
  return kExitOk;
}

int run_test2(const RunConfig& cfg, std::ostream& out) {
  const fs::path& xp = require_path(cfg.x, "--x");
  const fs::path& yp = require_path(cfg.y, "--y");
  const Kernel k = resolve_kernel(cfg, xp);
  const auto xs = io::read_points(xp, k.space());
  const auto ys = io::read_points(yp, k.space());
  const TestResult r = permutation_test(k, xs, ys, cfg.n_perm, cfg.seed);
  const std::string body = test_result_json(r);
  if (cfg.out) io::write_atomic(*cfg.out, body);
  else out << body;
  out << (r.p_value <= cfg.alpha ? "REJECT" : "FAIL-TO-REJECT") << '\n';
  return kExitOk;
}

int run_score(const RunConfig& cfg, std::ostream& out) {
  const fs::path& fp = require_path(cfg.forecast, "--forecast");
  const fs::path& op = require_path(cfg.obs, "--obs");
  const Kernel k = resolve_kernel(cfg, fp);
  const DiscreteMeasure forecast = io::read_measure(fp, k.space(), cfg.forecast_weights);
  if (!forecast.is_probability()) {
    throw DomainError(fp.string() + ": forecast is not a probability measure");
  }
  const auto obs = io::read_points(op, k.space());
  std::ostringstream os;
  os << "index,score\n";
  double total = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double s = kernel_score(k, forecast, obs[i]);
    total += s;
    os << i << ',' << io::format_double(s) << '\n';
  }
  os << "mean," << io::format_double(obs.empty() ? 0.0 : total / static_cast<double>(obs.size()))
     << '\n';
  emit(cfg, out, os.str());
  return kExitOk;
}

int run_power(const RunConfig& cfg, std::ostream& out) {
  if (cfg.trials < 1) throw ParseError("trials must be a positive integer");
  const Scenario s = load_scenario(cfg);
  const PointSpace space = s.generator == "euclidean" ? PointSpace::euclidean(s.dim)
                                                      : PointSpace::func_lp(s.grid, 2.0);
  Kernel k = cfg.kernel_spec ? load_kernel(*cfg.kernel_spec, ConfigContext{s.grid, "."})
                             : default_kernel(space);
  if (!k.space().same_as(space)) {
    throw ShapeError("kernel lives on " + k.space().describe() + " but the scenario generates " +
                     space.describe());
  }
  std::ostringstream os;
  os << "shift,rejection_rate,trials,mc_stderr\n";
  for (std::size_t si = 0; si < s.shifts.size(); ++si) {
    std::size_t rejections = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(si) << 32) | t;
      CounterRng rng(cfg.seed, stream);
      std::vector<Point> xs, ys;
      for (std::size_t i = 0; i < s.n; ++i) xs.push_back(draw_point(s, rng, 0.0));
      for (std::size_t i = 0; i < s.m; ++i) ys.push_back(draw_point(s, rng, s.shifts[si]));
      const TestResult r = permutation_test(k, xs, ys, cfg.n_perm, rng.next());
      if (r.p_value <= cfg.alpha) ++rejections;
    }
    const double rate = static_cast<double>(rejections) / static_cast<double>(cfg.trials);
    os << io::format_double(s.shifts[si]) << ',' << io::format_double(rate) << ',' << cfg.trials
       << ',' << io::format_double(std::sqrt(rate * (1.0 - rate) / static_cast<double>(cfg.trials)))
       << '\n';
  }
  emit(cfg, out, os.str());
  return kExitOk;
}

int run_selfcheck(const RunConfig& cfg, std::ostream& out) {
  const int failures = print_selfcheck(out, cfg.inject_fault);
  out << (failures == 0 ? "selfcheck: all invariants hold\n"
                        : "selfcheck: " + std::to_string(failures) + " invariant(s) failed\n");
  return failures == 0 ? kExitOk : kExitSelfcheckFailed;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::gram:
        return run_gram(cfg, out);
      case Command::mmd:
        return run_mmd(cfg, out);
      case Command::test2:
        return run_test2(cfg, out);
      case Command::score:
        return run_score(cfg, out);
      case Command::power:
        return run_power(cfg, out);
      case Command::selfcheck:
        return run_selfcheck(cfg, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, bool allow_fault_injection) {
  const ParseOutcome parsed = parse_args(argc, argv, std::cout, std::cerr, allow_fault_injection);
  if (!parsed.config) return parsed.exit_code;
  return run(*parsed.config, std::cout, std::cerr);
}

}  // namespace kernmetric::cli
