#include "kernmetric/kernel_config.hpp"

#include <fstream>

#include "kernmetric/errors.hpp"
#include "kernmetric/io.hpp"

namespace kernmetric {
namespace {

using nlohmann::json;

const json& member(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string(where) + ": missing key \"" + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* key, const char* where) {
  const json& v = member(j, key, where);
  if (!v.is_number()) throw ParseError(std::string(where) + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  return number(j, key, where);
}

Vector vector_of(const json& j, const char* where) {
  if (!j.is_array()) throw ParseError(std::string(where) + ": expected an array of numbers");
  Vector out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(std::string(where) + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

GridPtr grid_from_json(const json& j, const ConfigContext& ctx) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = ctx.base_dir / p;
    return make_grid(io::read_grid(p));
  }
  if (j.is_object()) {
    const auto m = static_cast<std::size_t>(number_or(j, "m", 101, "grid"));
    return make_grid(QuadratureGrid::trapezoid(number_or(j, "a", 0.0, "grid"),
                                               number_or(j, "b", 1.0, "grid"), m));
  }
  throw ParseError("grid: expected an object or a path");
}

GridPtr resolve_grid(const json& space, const ConfigContext& ctx) {
  if (space.is_object() && space.contains("grid")) return grid_from_json(space.at("grid"), ctx);
  if (ctx.grid) return ctx.grid;
  throw ParseError("function space needs a grid (in the spec or via --grid)");
}

MetricSpec metric_from_json(const json& rule, const PointSpace& space) {
  const std::string name = rule.value("metric", space.is_func() ? "lp" : "euclidean");
  if (name == "euclidean") {
    if (!space.is_euclidean()) throw ShapeError("euclidean metric needs a Euclidean space");
    return MetricSpec::euclidean(space.coordinate_count());
  }
  if (name == "lp") {
    if (!space.is_func()) throw ShapeError("lp metric needs a function space");
    return MetricSpec::lp(space.grid_ptr(), space.p());
  }
  throw ParseError("rule: unknown metric \"" + name + "\"");
}

MapSpec map_from_json(const json& j) {
  const std::string type = j.value("type", "identity");
  if (type == "identity") return MapSpec::identity();
  if (type == "diagonal_scale") return MapSpec::diagonal_scale(vector_of(member(j, "factors", "map"), "map.factors"));
  if (type == "linear") {
    const json& rows = member(j, "matrix", "map");
    if (!rows.is_array() || rows.empty()) throw ParseError("map.matrix: expected a non-empty array of rows");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Vector r = vector_of(rows[i], "map.matrix");
      if (static_cast<Eigen::Index>(r.size()) != m.cols()) throw ParseError("map.matrix: ragged rows");
      for (std::size_t c = 0; c < r.size(); ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = r[c];
    }
    return MapSpec::linear(std::move(m));
  }
  throw ParseError("map: unknown type \"" + type + "\"");
}

Point point_from_json(const json& j, const PointSpace& space) {
  if (j.is_number()) return Point(Vector(space.coordinate_count(), j.get<double>()));
  return Point(vector_of(j, "rule.z0"));
}

}  // namespace

PhiProfile profile_from_json(const json& j) {
  const std::string family = member(j, "family", "phi").get<std::string>();
  if (family == "gaussian") return PhiProfile::gaussian(number(j, "alpha", "phi"));
  if (family == "exp_sqrt") return PhiProfile::exp_sqrt(number(j, "c", "phi"));
  if (family == "inverse_rational") {
    return PhiProfile::inverse_rational(number(j, "beta", "phi"), number_or(j, "scale", 1.0, "phi"));
  }
  if (family == "discrete_laplace") {
    std::vector<PhiProfile::Atom> atoms;
    for (const auto& a : member(j, "atoms", "phi")) {
      const Vector pair = vector_of(a, "phi.atoms");
      if (pair.size() != 2) throw ParseError("phi.atoms: each atom is [rate, weight]");
      atoms.push_back({pair[0], pair[1]});
    }
    return PhiProfile::discrete_laplace(std::move(atoms));
  }
  throw ParseError("phi: unknown family \"" + family + "\"");
}

json profile_to_json(const PhiProfile& phi) {
  json j;
  j["family"] = phi.family();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PhiProfile::Gaussian>) {
          j["alpha"] = v.alpha;
        } else if constexpr (std::is_same_v<T, PhiProfile::ExpSqrt>) {
          j["c"] = v.c;
        } else if constexpr (std::is_same_v<T, PhiProfile::InverseRational>) {
          j["beta"] = v.beta;
          j["scale"] = v.scale;
        } else {
          json atoms = json::array();
          for (const auto& a : v.atoms) atoms.push_back({a.rate, a.weight});
          j["atoms"] = atoms;
        }
      },
      phi.variant());
  return j;
}

PointSpace space_from_json(const json& j, const ConfigContext& ctx) {
  const std::string type = member(j, "type", "space").get<std::string>();
  if (type == "euclidean") return PointSpace::euclidean(static_cast<std::size_t>(number(j, "dim", "space")));
  if (type == "function") return PointSpace::func_lp(resolve_grid(j, ctx), number_or(j, "p", 2.0, "space"));
  if (type == "measure") return PointSpace::measures_over(space_from_json(member(j, "base", "space"), ctx));
  throw ParseError("space: unknown type \"" + type + "\"");
}

Kernel kernel_from_json(const json& j, const ConfigContext& ctx) {
  if (!j.is_object()) throw ParseError("kernel spec must be a JSON object");
  const json& rule = member(j, "rule", "kernel spec");
  const std::string kind = member(rule, "kind", "rule").get<std::string>();
  auto phi = [&] { return profile_from_json(member(j, "phi", "kernel spec")); };
  auto space = [&] { return space_from_json(member(j, "space", "kernel spec"), ctx); };

  if (kind == "radial_hilbert") return make_radial_hilbert(phi(), space());
  if (kind == "tee_radial") return make_tee_radial(phi(), map_from_json(rule.value("map", json::object())), space());
  if (kind == "lp_operator") {
    const json space_json = j.value("space", json::object());
    const GridPtr grid = resolve_grid(space_json, ctx);
    double p = number_or(space_json, "p", 2.0, "space");
    p = number_or(rule, "p", p, "rule");
    return make_lp_operator(phi(), kernel_from_json(member(rule, "k1", "rule"), ctx), grid, p);
  }
  if (kind == "metric_phi") {
    const json& sj = member(j, "space", "kernel spec");
    if (sj.value("type", "") == "function") {
      // Validate the metric exponent before the space, so p outside (1, 2]
      // reports the whitelist rather than a generic space error.
      const double p = number_or(sj, "p", 2.0, "space");
      return make_metric_phi(phi(), MetricSpec::lp(resolve_grid(sj, ctx), p));
    }
    return make_metric_phi(phi(), metric_from_json(rule, space()));
  }
  if (kind == "distance") {
    const json& sj = member(j, "space", "kernel spec");
    const MetricSpec metric = sj.value("type", "") == "function"
                                  ? MetricSpec::lp(resolve_grid(sj, ctx), number_or(sj, "p", 2.0, "space"))
                                  : metric_from_json(rule, space());
    const Point z0 = rule.contains("z0") ? point_from_json(rule.at("z0"), metric.space())
                                         : Point(Vector(metric.space().coordinate_count(), 0.0));
    return make_distance_kernel(metric, z0);
  }
  if (kind == "mixture") {
    std::vector<std::pair<Kernel, double>> comps;
    for (const auto& c : member(rule, "components", "rule")) {
      comps.emplace_back(kernel_from_json(member(c, "kernel", "component"), ctx),
                         number(c, "weight", "component"));
    }
    return make_mixture(std::move(comps));
  }
  if (kind == "kme_measure") return make_kme_measure(phi(), kernel_from_json(member(rule, "k1", "rule"), ctx));
  if (kind == "fourier_measure") {
    const json& freqs = member(rule, "freqs", "rule");
    if (freqs.is_string()) {
      if (freqs.get<std::string>() != "gaussian") throw ParseError("rule.freqs: expected \"gaussian\" or an array");
      auto [f, w] = gaussian_frequencies(static_cast<std::size_t>(number_or(rule, "dim", 1, "rule")),
                                         static_cast<std::size_t>(number_or(rule, "n", 64, "rule")),
                                         static_cast<std::uint64_t>(number_or(rule, "seed", 0, "rule")));
      return make_fourier_measure(phi(), std::move(f), std::move(w));
    }
    std::vector<Vector> f;
    for (const auto& s : freqs) f.push_back(vector_of(s, "rule.freqs"));
    Vector w = rule.contains("freq_weights")
                   ? vector_of(rule.at("freq_weights"), "rule.freq_weights")
                   : Vector(f.size(), f.empty() ? 0.0 : 1.0 / static_cast<double>(f.size()));
    return make_fourier_measure(phi(), std::move(f), std::move(w));
  }
  if (kind == "quantile_monge") {
    const GridPtr u = rule.contains("u_grid") ? grid_from_json(rule.at("u_grid"), ctx)
                                              : make_grid(QuadratureGrid::trapezoid(0.0, 1.0, 101));
    return make_quantile_monge(phi(), u);
  }
  throw ParseError("rule: unknown kind \"" + kind + "\"");
}

Kernel load_kernel(const std::filesystem::path& path, const ConfigContext& ctx) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open kernel spec");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  ConfigContext local = ctx;
  local.base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  try {
    return kernel_from_json(j, local);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Kernel default_kernel(const PointSpace& space) {
  const PhiProfile half = PhiProfile::gaussian(0.5);
  if (space.is_measure()) return make_kme_measure(half, default_kernel(space.base()));
  if (space.is_func() && space.p() != 2.0) {
    return make_radial_hilbert(half, PointSpace::func_lp(space.grid_ptr(), 2.0));
  }
  return make_radial_hilbert(half, space);
}

}  // namespace kernmetric
