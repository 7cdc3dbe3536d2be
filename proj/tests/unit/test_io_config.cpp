#include <doctest.h>

#include <cmath>

#include "kernmetric/errors.hpp"
#include "kernmetric/io.hpp"
#include "kernmetric/kernel_config.hpp"
#include "tmpdir.hpp"

using namespace kernmetric;
using nlohmann::json;

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, std::exp(-1.0), -2.5e-300, 6.02214076e23}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("read_csv") {
  TmpDir d;
  const auto t = io::read_csv(d.write("a.csv", "x,y\n1,2\n3,4\n"));
  CHECK(t.header == std::vector<std::string>{"x", "y"});
  CHECK(t.rows.size() == 2);
  CHECK(t.rows[1][0] == 3.0);
  CHECK(io::read_csv(d.write("b.csv", "1,2\n3,4\n")).header.empty());

  try {
    io::read_csv(d.write("bad.csv", "1,2\n3,oops\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad.csv:2") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_csv(d.write("ragged.csv", "1,2\n3\n")), ParseError);
  CHECK_THROWS_AS(io::read_csv(d / "missing.csv"), ParseError);
}

TEST_CASE("points and measures") {
  TmpDir d;
  const auto pts = io::read_points(d.write("p.csv", "x0,x1\n0,0\n1,1\n"), PointSpace::euclidean(2));
  CHECK(pts.size() == 2);
  CHECK(pts[1] == Point{1.0, 1.0});
  CHECK_THROWS_AS(io::read_points(d / "p.csv", PointSpace::euclidean(3)), ShapeError);

  const auto mu = io::read_measure(d.write("m.csv", "x,weight\n0,0.25\n2,0.75\n"), PointSpace::euclidean(1));
  CHECK(mu.weights() == Vector{0.25, 0.75});
  const auto emp = io::read_measure(d.write("e.csv", "0\n1\n2\n3\n"), PointSpace::euclidean(1));
  CHECK(emp.weights() == Vector(4, 0.25));
  const auto sep = io::read_measure(d / "e.csv", PointSpace::euclidean(1), d.write("w.txt", "0.1\n0.2\n0.3\n0.4\n"));
  CHECK(sep.weights()[3] == 0.4);

  const auto ms = PointSpace::measures_over(PointSpace::euclidean(1));
  const auto mp = io::read_points(d.write("mp.csv", "id,x,weight\n0,0,0.5\n0,1,0.5\n1,3,1\n"), ms);
  REQUIRE(mp.size() == 2);
  CHECK(mp[0].measure().size() == 2);
  CHECK(mp[1].measure().weights() == Vector{1.0});
}

TEST_CASE("grid and matrix files") {
  TmpDir d;
  const auto g = QuadratureGrid::trapezoid(0.0, 2.0, 7);
  io::write_grid(d / "g.csv", g);
  CHECK(io::read_grid(d / "g.csv") == g);

  Eigen::MatrixXd m(2, 2);
  m << 1.0, std::exp(-1.0), std::exp(-1.0), 1.0 / 3.0;
  io::write_atomic(d / "m.csv", io::matrix_to_csv(m));
  CHECK(io::read_matrix(d / "m.csv") == m);
  CHECK_FALSE(std::filesystem::exists(d / "m.csv.tmp"));
}

TEST_CASE("profile json round trip") {
  for (const auto& p : {PhiProfile::gaussian(0.5), PhiProfile::exp_sqrt(2.0), PhiProfile::inverse_rational(1.5, 3.0),
                        PhiProfile::discrete_laplace({{0.0, 0.5}, {2.0, 1.5}})}) {
    const auto q = profile_from_json(profile_to_json(p));
    for (double t : {0.0, 0.3, 2.0, 7.5}) CHECK(q(t) == p(t));
  }
  CHECK_THROWS(profile_from_json(json{{"family", "nope"}}));
}

TEST_CASE("kernel specs for every rule") {
  const ConfigContext ctx{};
  const std::vector<std::string> specs{
      R"({"space":{"type":"euclidean","dim":2},"phi":{"family":"gaussian","alpha":0.5},"rule":{"kind":"radial_hilbert"}})",
      R"({"space":{"type":"euclidean","dim":2},"phi":{"family":"gaussian","alpha":0.5},
          "rule":{"kind":"tee_radial","map":{"type":"diagonal_scale","factors":[2,1]}}})",
      R"({"space":{"type":"function","p":1.5,"grid":{"a":0,"b":1,"m":6}},"phi":{"family":"gaussian","alpha":1},
          "rule":{"kind":"lp_operator","p":1.5,"k1":{"space":{"type":"euclidean","dim":1},
          "phi":{"family":"gaussian","alpha":1},"rule":{"kind":"radial_hilbert"}}}})",
      R"({"space":{"type":"function","p":1.5,"grid":{"a":0,"b":1,"m":6}},"phi":{"family":"gaussian","alpha":1},
          "rule":{"kind":"metric_phi"}})",
      R"({"space":{"type":"euclidean","dim":1},"rule":{"kind":"distance","z0":0}})",
      R"({"space":{"type":"euclidean","dim":1},"rule":{"kind":"mixture","components":[
          {"weight":0.5,"kernel":{"space":{"type":"euclidean","dim":1},"phi":{"family":"gaussian","alpha":1},"rule":{"kind":"radial_hilbert"}}},
          {"weight":0.5,"kernel":{"space":{"type":"euclidean","dim":1},"phi":{"family":"gaussian","alpha":2},"rule":{"kind":"radial_hilbert"}}}]}})",
      R"({"space":{"type":"measure","base":{"type":"euclidean","dim":1}},"phi":{"family":"gaussian","alpha":1},
          "rule":{"kind":"kme_measure","k1":{"space":{"type":"euclidean","dim":1},"phi":{"family":"gaussian","alpha":0.5},"rule":{"kind":"radial_hilbert"}}}})",
      R"({"space":{"type":"measure","base":{"type":"euclidean","dim":1}},"phi":{"family":"gaussian","alpha":1},
          "rule":{"kind":"fourier_measure","freqs":[[1.0]],"freq_weights":[1.0]}})",
      R"({"space":{"type":"measure","base":{"type":"euclidean","dim":1}},"phi":{"family":"gaussian","alpha":1},
          "rule":{"kind":"quantile_monge"}})"};
  const std::vector<std::string> kinds{"radial_hilbert", "tee_radial", "lp_operator", "metric_phi", "distance",
                                       "mixture", "kme_measure", "fourier_measure", "quantile_monge"};
  for (std::size_t i = 0; i < specs.size(); ++i) {
    CAPTURE(i);
    const Kernel k = kernel_from_json(json::parse(specs[i]), ctx);
    CHECK(k.kind() == kinds[i]);
  }
  const Kernel mix = kernel_from_json(json::parse(specs[5]), ctx);
  CHECK(mix(Point{0.0}, Point{1.0}) == doctest::Approx(0.2516074).epsilon(1e-7));
}

TEST_CASE("kernel spec errors") {
  const ConfigContext ctx{};
  CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"space":{"type":"euclidean","dim":1}})"), ctx), ParseError);
  CHECK_THROWS_AS(kernel_from_json(json::parse(R"({"space":{"type":"euclidean","dim":1},
      "phi":{"family":"discrete_laplace","atoms":[[0,1]]},"rule":{"kind":"radial_hilbert"}})"), ctx),
                  ClassError);
  TmpDir d;
  CHECK_THROWS_AS(load_kernel(d.write("k.json", "{not json"), ctx), ParseError);
}

TEST_CASE("default kernel") {
  const auto k = default_kernel(PointSpace::euclidean(2));
  CHECK(k(Point{0.0, 0.0}, Point{1.0, 1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(default_kernel(PointSpace::measures_over(PointSpace::euclidean(1))).kind() == "kme_measure");
}
