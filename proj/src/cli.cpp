#include "packlp/cli.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "packlp/abel.hpp"
#include "packlp/error.hpp"
#include "packlp/specfun.hpp"

namespace packlp::cli {
namespace {

constexpr double kPi = std::numbers::pi;

Geometry geometry_of(const RunConfig& c) {
  const Geometry g = Geometry::from_name(c.geometry, c.n);
  return c.measure_scale == 1.0 ? g : g.with_measure_scale(c.measure_scale);
}

int default_degree(witness::Family f, const Geometry& g) {
  switch (f) {
    case witness::Family::Hat: return 8;
    case witness::Family::SphereHarmonic: return 10;
    case witness::Family::HeisGaussPoly: return 6;
    case witness::Family::GaussPoly:
      return g.kind == GeometryKind::Hyperbolic && g.n % 2 == 0 ? 12 : 24;
  }
  return 12;
}

witness::WitnessBasis basis_of(const RunConfig& c) {
  const Geometry g = geometry_of(c);
  const auto family = c.family.empty() ? witness::default_family(g) : witness::family_from_string(c.family);
  return witness::make_basis(g, family, c.radius, c.degree < 0 ? default_degree(family, g) : c.degree);
}

void log_flags(const witness::WitnessBasis& b, std::ostream& log) {
  for (const auto& f : io::design_flags(b)) log << "flag: " << f << '\n';
}

std::vector<double> range(const RunConfig& c) {
  std::vector<double> xs;
  const long n = static_cast<long>(std::floor((c.to - c.from) / c.step + 1e-9));
  for (long i = 0; i <= n; ++i) xs.push_back(c.from + i * c.step);
  return xs;
}

void write_csv(const std::string& path, const char* header, const std::vector<double>& xs,
               const std::vector<double>& ys) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << header << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) out << xs[i] << ',' << ys[i] << '\n';
}

RadialFunction test_function(const RunConfig& c, const Geometry& g) {
  if (!c.input.empty()) {
    RadialFunction f = io::function_from_json(io::read_file(c.input));
    if (!(f.geometry() == g)) throw Error(ErrorKind::InvalidInput, "input function lives on " + f.geometry().label());
    return f.with_geometry(g);
  }
  if (g.kind == GeometryKind::Heisenberg)
    return RadialFunction(g, profile::HeisGaussLaguerre{g.n, c.gauss_scale, c.gauss_scale, 0, 0, {1.0}});
  if (g.kind == GeometryKind::Sphere) return RadialFunction(g, profile::Zonal{g.n, {1.0, 0.5, 0.25}});
  const double alpha = g.kind == GeometryKind::Euclidean ? 0.5 * g.n - 1.0 : -0.5;
  return RadialFunction(g, profile::GaussLaguerre{c.gauss_scale, alpha, {1.0}});
}

int cmd_bound(const RunConfig& c, std::ostream& out, std::ostream& log) {
  const auto b = basis_of(c);
  log_flags(b, log);
  auto opt = certify::default_refine_options(b);
  opt.budget = c.budget;
  if (c.spectral_spacing > 0.0) opt.spectral.spacing = c.spectral_spacing;
  if (c.max_lambda > 0.0) opt.spectral.max_lambda = c.max_lambda;
  if (c.spatial_spacing > 0.0) opt.spatial.spacing = c.spatial_spacing;
  std::optional<certify::RefineResult> found;
  try {
    found.emplace(certify::refine_until_certified(b, opt));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
    out << io::json{{"status", "budget_exhausted"}, {"reason", e.what()}}.dump(2) << '\n';
    return kFailure;
  }
  const auto& res = *found;
  // The seed and re-check size of the run are part of the stored policy.
  auto doc = io::certificate_to_json(b, res);
  if (c.seed != certify::Policy{}.seed || c.random_points != certify::Policy{}.random_points ||
      c.w2_tolerance != certify::Policy{}.w2_tolerance || c.random_tolerance != certify::Policy{}.random_tolerance) {
    auto p = certify::default_policy(b, res.final_grids.spectral, res.final_grids.spatial);
    p.seed = c.seed;
    p.random_points = c.random_points;
    p.w2_tolerance = c.w2_tolerance;
    p.random_tolerance = c.random_tolerance;
    const auto again = certify::certify_witness(b.geometry, b.r, res.certificate.f, p);
    doc = io::certificate_to_json(b, res.lp.coefficients, again, p);
    doc["certification"]["rounds"] = res.rounds;
    if (!again.certified) {
      if (!c.output.empty()) io::write_file(c.output, doc);
      out << io::json{{"status", "rejected"}, {"reason", again.reason}}.dump(2) << '\n';
      return kFailure;
    }
  }
  const std::string path = c.output.empty() ? "cert.json" : c.output;
  io::write_file(path, doc);
  out << io::json{{"status", "certified"},
                  {"geometry", b.geometry.label()},
                  {"r", b.r},
                  {"bound", res.bound},
                  {"rounds", res.rounds},
                  {"certificate", path}}
             .dump(2)
      << '\n';
  return kOk;
}

int cmd_certify(const RunConfig& c, std::ostream& out, std::ostream& log) {
  if (c.input.empty()) throw Error(ErrorKind::InvalidInput, "certify needs a certificate file");
  const auto stored = io::certificate_from_json(io::read_file(c.input));
  log_flags(stored.basis, log);
  const RadialFunction f = stored.basis.combine(stored.coefficients);
  const auto cert = certify::certify_witness(stored.basis.geometry, stored.basis.r, f, stored.policy);
  const double bound = cert.fhat_one > 0.0 ? cert.bound() : INFINITY;
  const bool agrees = std::abs(bound - stored.bound) <= 1e-12 * std::abs(stored.bound);
  if (!c.output.empty()) io::write_file(c.output, io::certificate_to_json(stored.basis, stored.coefficients, cert, stored.policy));
  log << "verdict: " << (cert.certified ? "certified" : "rejected: " + cert.reason) << '\n'
      << "  bound " << std::setprecision(12) << bound << " (stored " << stored.bound << ")\n"
      << "  W1 max " << std::setprecision(4) << cert.w1.max_value << " on [" << cert.w1.t_begin << ", " << cert.w1.t_end
      << "], tail " << cert.w1.tail_argument << (cert.w1.tail_ok ? "" : " (failed)") << '\n'
      << "  W2 min " << cert.w2.min_value << " at " << spectra::to_string(cert.w2.argmin) << ", tail "
      << cert.w2.tail_argument << (cert.w2.tail_ok ? "" : " (failed)") << '\n'
      << "  re-check max " << cert.recheck_max << " (seed " << cert.recheck_seed << ")\n";
  out << io::json{{"status", cert.certified ? "certified" : "rejected"},
                  {"reason", cert.reason},
                  {"bound", cert.fhat_one > 0.0 ? io::json(bound) : io::json(nullptr)},
                  {"stored_bound", stored.bound},
                  {"bound_agrees", agrees},
                  {"w1_margin", cert.w1.max_value},
                  {"w2_margin", cert.w2.min_value}}
             .dump(2)
      << '\n';
  return cert.certified && agrees ? kOk : kFailure;
}

int cmd_transform(const RunConfig& c, std::ostream& out, std::ostream&) {
  const Geometry g = geometry_of(c);
  const RadialFunction f = test_function(c, g);
  spectra::SpectralGrid grid{g, {}, {}};
  std::vector<double> xs = range(c);
  if (g.kind == GeometryKind::Heisenberg) std::erase_if(xs, [](double x) { return x <= 0.0; });
  if (xs.empty()) throw Error(ErrorKind::InvalidInput, "empty transform grid");
  for (double x : xs) {
    switch (g.kind) {
      case GeometryKind::Euclidean: grid.points.push_back(spectra::EuclidPoint{x}); break;
      case GeometryKind::Hyperbolic: grid.points.push_back(spectra::HypReal{x}); break;
      case GeometryKind::Sphere: grid.points.push_back(spectra::SpherePoint{static_cast<int>(std::lround(x))}); break;
      case GeometryKind::Heisenberg: grid.points.push_back(spectra::HeisA{x, 0}); break;
    }
  }
  const auto values = spectra::transform_on_grid(g, f, grid);
  io::json pts = io::json::array();
  for (const auto& p : grid.points) pts.push_back(spectra::to_string(p));
  if (!c.csv.empty()) write_csv(c.csv, "point,value", xs, values);
  out << io::json{{"geometry", io::to_json(g)}, {"function", io::function_to_json(f)}, {"points", pts}, {"values", values}}
             .dump(2)
      << '\n';
  return kOk;
}

int cmd_abel(const RunConfig& c, std::ostream& out, std::ostream&) {
  const Geometry g = geometry_of(c);
  if (g.kind != GeometryKind::Hyperbolic) throw Error(ErrorKind::InvalidInput, "abel works on hyperbolic space");
  const auto ts = range(c);
  std::vector<double> values(ts.size());
  io::json doc{{"geometry", io::to_json(g)}, {"direction", c.direction}, {"t", ts}};
  if (c.direction == "forward") {
    const RadialFunction f = test_function(c, g);
    for (std::size_t i = 0; i < ts.size(); ++i) values[i] = abel::forward_value(f, ts[i]);
    doc["function"] = io::function_to_json(f);
  } else if (c.direction == "inverse") {
    profile::GaussLaguerre p{c.gauss_scale, -0.5, {1.0}};
    if (!c.input.empty()) {
      const auto j = io::read_file(c.input);
      if (!j.contains("profile") || j["profile"].value("type", "") != "gauss_laguerre")
        throw Error(ErrorKind::InvalidInput, "inverse Abel input must be a gauss_laguerre line profile");
      const auto& q = j["profile"];
      p = profile::GaussLaguerre{q.at("scale").get<double>(), q.at("alpha").get<double>(),
                                 q.at("coefficients").get<std::vector<double>>()};
    }
    auto line = std::make_shared<profile::LineFunction>(profile::make_line(p));
    const RadialFunction f = abel::abel_inverse(line, g.n).with_geometry(g);
    double err = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      values[i] = f(ts[i]);
      err = std::max(err, std::abs(abel::forward_value(f, ts[i]) - (*line)(ts[i])));
    }
    doc["line"] = {{"type", "gauss_laguerre"}, {"scale", p.scale}, {"alpha", p.alpha}, {"coefficients", p.coeffs}};
    doc["roundtrip_error"] = err;
  } else {
    throw Error(ErrorKind::InvalidInput, "direction must be forward or inverse");
  }
  doc["values"] = values;
  if (!c.csv.empty()) write_csv(c.csv, "t,value", ts, values);
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_density(const RunConfig& c, std::ostream& out, std::ostream&) {
  const bool file = c.lattice.size() > 5 && c.lattice.substr(c.lattice.size() - 5) == ".json";
  const auto lat = file ? io::lattice_from_json(io::read_file(c.lattice)) : pointprocess::lattice_by_name(c.lattice);
  const double lambda1 = pointprocess::min_distance(lat);
  out << io::json{{"lattice", c.lattice},
                  {"dimension", lat.dimension()},
                  {"lambda1", lambda1},
                  {"covol", lat.covolume()},
                  {"density", pointprocess::lattice_density(lat)}}
             .dump(2)
      << '\n';
  return kOk;
}

int cmd_kissing(const RunConfig& c, std::ostream& out, std::ostream&) {
  const int L = c.degree < 0 ? 10 : c.degree;
  const double bound = witness::delsarte_code_bound(c.n, c.theta, L);
  io::json doc{{"n", c.n}, {"theta", c.theta}, {"degree", L}, {"bound", std::isfinite(bound) ? io::json(bound) : io::json(nullptr)}};
  if (c.n == 2) {
    const auto ico = pointprocess::icosahedron();
    const double angle = pointprocess::min_pairwise_distance(ico);
    if (angle >= c.theta) doc["lower_anchor"] = {{"configuration", "icosahedron"}, {"points", ico.points.size()}, {"min_angle", angle}};
  }
  out << doc.dump(2) << '\n';
  return std::isfinite(bound) ? kOk : kFailure;
}

struct Check {
  const char* module;
  const char* name;
  std::function<std::pair<bool, std::string>()> run;
};

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

std::vector<Check> selftests() {
  using std::abs;
  return {
      {"specfun", "2F1(1,1;2;-1) = ln 2",
       [] {
         const double v = specfun::gauss_2f1(1.0, 1.0, 2.0, -1.0).real(), e = abs(v - std::log(2.0));
         return std::pair{e <= 1e-12, "err " + num(e)};
       }},
      {"specfun", "J_1/2 closed form",
       [] {
         const double x = 2.3, e = abs(specfun::bessel_j(0.5, x) - std::sqrt(2.0 / (kPi * x)) * std::sin(x));
         return std::pair{e <= 1e-13, "err " + num(e)};
       }},
      {"geometry", "Heisenberg ball dilation",
       [] {
         const Geometry h = Geometry::heisenberg(1);
         const double e = abs(ball_volume(h, 2.0) / ball_volume(h, 1.0) - 16.0) / 16.0;
         return std::pair{e <= 1e-10, "rel err " + num(e)};
       }},
      {"spectra", "H^3 spherical function",
       [] {
         double e = 0.0;
         for (double t : {0.3, 1.0, 4.0})
           for (double l : {0.5, 3.0})
             e = std::max(e, abs(spectra::spherical_function(Geometry::hyperbolic(3), spectra::HypReal{l}, t) -
                                 std::sin(l * t) / (l * std::sinh(t))));
         return std::pair{e <= 1e-8, "max err " + num(e)};
       }},
      {"abel", "roundtrip n = 3",
       [] {
         auto line = std::make_shared<profile::LineFunction>(profile::make_line(profile::GaussLaguerre{1.0, -0.5, {1.0}}));
         const RadialFunction f = abel::abel_inverse(line, 3);
         double e = 0.0;
         for (double t : {0.0, 0.7, 2.0}) e = std::max(e, abs(abel::forward_value(f, t) - (*line)(t)));
         return std::pair{e <= 1e-6, "max err " + num(e)};
       }},
      {"abel", "factorization n = 3",
       [] {
         const RadialFunction f(Geometry::hyperbolic(3), profile::ExpCosh{1.0, 1.0});
         const double r = abel::factorization_residual(f, 1.0);
         return std::pair{r <= 1e-6, "residual " + num(r)};
       }},
      {"witness_lp", "Delsarte bound on S^2 at 60 degrees",
       [] {
         const double b = witness::delsarte_code_bound(2, kPi / 3, 10);
         return std::pair{b >= 12.0 && b <= 13.2, "bound " + num(b)};
       }},
      {"certify", "triangle certifies at 1",
       [] {
         const auto b = witness::make_basis(Geometry::euclidean(1), witness::Family::Hat, 0.5, 8);
         const auto res = certify::refine_until_certified(b, certify::default_refine_options(b));
         return std::pair{res.certificate.certified && abs(res.bound - 1.0) <= 1e-9, "bound " + num(res.bound)};
       }},
      {"pointprocess", "A2 density",
       [] {
         const double d = pointprocess::lattice_density(pointprocess::hexagonal_lattice());
         return std::pair{abs(d - kPi / std::sqrt(12.0)) <= 1e-12, "density " + num(d)};
       }},
      {"pointprocess", "theta identity on Z",
       [] {
         const RadialFunction f(Geometry::euclidean(1), profile::GaussLaguerre{1.0, -0.5, {1.0}});
         const auto rep = pointprocess::poisson_chain_check(pointprocess::integer_lattice(1), f);
         return std::pair{rep.equality_gap <= 1e-12, "gap " + num(rep.equality_gap)};
       }},
      {"cli", "config round trip",
       [] {
         RunConfig c;
         c.command = "bound";
         c.geometry = "hyperbolic";
         c.n = 3;
         c.theta = 0.123456789012345678;
         c.seed = 99;
         const bool ok = config_from_json(io::json::parse(to_json(c).dump())) == c;
         return std::pair{ok, std::string(ok ? "identical" : "differs")};
       }},
  };
}

int cmd_selftest(const RunConfig& c, std::ostream& out, std::ostream&) {
  int failed = 0, ran = 0;
  out << std::left << std::setw(14) << "module" << std::setw(40) << "check" << std::setw(8) << "result" << "detail\n";
  for (const auto& check : selftests()) {
    if (c.target != "all" && c.target != check.module) continue;
    ++ran;
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = check.run();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    failed += !ok;
    out << std::setw(14) << check.module << std::setw(40) << check.name << std::setw(8) << (ok ? "PASS" : "FAIL")
        << detail << '\n';
  }
  if (ran == 0) throw Error(ErrorKind::InvalidInput, "no self-test named '" + c.target + "'");
  out << ran - failed << "/" << ran << " passed\n";
  return failed == 0 ? kOk : kFailure;
}

bool usage_kind(ErrorKind k) {
  return k == ErrorKind::InvalidInput || k == ErrorKind::DimensionTooLarge || k == ErrorKind::SpectrumMismatch ||
         k == ErrorKind::GridError;
}

}  // namespace

io::json to_json(const RunConfig& c) {
  return io::json{{"command", c.command},
                  {"geometry", c.geometry},
                  {"n", c.n},
                  {"measure_scale", c.measure_scale},
                  {"radius", c.radius},
                  {"family", c.family},
                  {"degree", c.degree},
                  {"budget", c.budget},
                  {"seed", c.seed},
                  {"random_points", c.random_points},
                  {"w2_tolerance", c.w2_tolerance},
                  {"random_tolerance", c.random_tolerance},
                  {"spectral_spacing", c.spectral_spacing},
                  {"max_lambda", c.max_lambda},
                  {"spatial_spacing", c.spatial_spacing},
                  {"input", c.input},
                  {"output", c.output},
                  {"csv", c.csv},
                  {"lattice", c.lattice},
                  {"theta", c.theta},
                  {"gauss_scale", c.gauss_scale},
                  {"from", c.from},
                  {"to", c.to},
                  {"step", c.step},
                  {"direction", c.direction},
                  {"target", c.target}};
}

RunConfig config_from_json(const io::json& j) {
  RunConfig c;
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
  const io::json known = to_json(c);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw Error(ErrorKind::InvalidInput, "unknown config key '" + key + "'");
  try {
    auto get = [&](const char* key, auto& dst) {
      if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
    };
    get("command", c.command);
    get("geometry", c.geometry);
    get("n", c.n);
    get("measure_scale", c.measure_scale);
    get("radius", c.radius);
    get("family", c.family);
    get("degree", c.degree);
    get("budget", c.budget);
    get("seed", c.seed);
    get("random_points", c.random_points);
    get("w2_tolerance", c.w2_tolerance);
    get("random_tolerance", c.random_tolerance);
    get("spectral_spacing", c.spectral_spacing);
    get("max_lambda", c.max_lambda);
    get("spatial_spacing", c.spatial_spacing);
    get("input", c.input);
    get("output", c.output);
    get("csv", c.csv);
    get("lattice", c.lattice);
    get("theta", c.theta);
    get("gauss_scale", c.gauss_scale);
    get("from", c.from);
    get("to", c.to);
    get("step", c.step);
    get("direction", c.direction);
    get("target", c.target);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
  }
  return c;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidInput, m); };
  static const char* commands[] = {"bound", "certify", "transform", "abel", "density", "kissing", "selftest"};
  if (std::find(std::begin(commands), std::end(commands), c.command) == std::end(commands))
    fail("unknown command '" + c.command + "'");
  if (c.n < 1) fail("n must be >= 1");
  if (!(c.measure_scale > 0.0) || !std::isfinite(c.measure_scale)) fail("measure scale must be positive");
  if (!(c.radius > 0.0) || !std::isfinite(c.radius)) fail("radius must be positive");
  if (c.budget < 1) fail("budget must be >= 1");
  if (c.random_points < 0) fail("random_points must be >= 0");
  if (!(c.w2_tolerance > 0.0) || !(c.random_tolerance > 0.0)) fail("tolerances must be positive");
  if (c.spectral_spacing < 0.0 || c.max_lambda < 0.0 || c.spatial_spacing < 0.0) fail("grid overrides must be >= 0");
  if (!(c.theta > 0.0) || !(c.gauss_scale > 0.0)) fail("theta and the Gaussian scale must be positive");
  if (!(c.step > 0.0) || !(c.to >= c.from)) fail("range needs step > 0 and to >= from");
  if ((c.to - c.from) / c.step > 1e6) fail("range has more than a million points");
  if (!c.family.empty()) witness::family_from_string(c.family);
  if (c.command != "density" && c.command != "kissing" && c.command != "selftest" && c.command != "certify")
    Geometry::from_name(c.geometry, c.n);
}

int run(const RunConfig& c, std::ostream& out, std::ostream& log) {
  try {
    validate(c);
    if (c.command == "bound") return cmd_bound(c, out, log);
    if (c.command == "certify") return cmd_certify(c, out, log);
    if (c.command == "transform") return cmd_transform(c, out, log);
    if (c.command == "abel") return cmd_abel(c, out, log);
    if (c.command == "density") return cmd_density(c, out, log);
    if (c.command == "kissing") return cmd_kissing(c, out, log);
    return cmd_selftest(c, out, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return usage_kind(e.kind()) ? kUsage : kFailure;
  }
}

void apply_thread_limit() {
  const char* v = std::getenv("PACKLP_THREADS");
  if (!v || !*v) return;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw Error(ErrorKind::InvalidInput, "PACKLP_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

}  // namespace packlp::cli
