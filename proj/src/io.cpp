#include "packlp/io.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "packlp/abel.hpp"
#include "packlp/error.hpp"

namespace packlp::io {
namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.is_object() && j.contains(key) ? field<T>(j, key) : fallback;
}

json gauss_json(const profile::GaussLaguerre& p) {
  return json{{"type", "gauss_laguerre"}, {"scale", p.scale}, {"alpha", p.alpha}, {"coefficients", p.coeffs}};
}

profile::GaussLaguerre gauss_from(const json& j) {
  return profile::GaussLaguerre{field<double>(j, "scale"), field<double>(j, "alpha"),
                                field<std::vector<double>>(j, "coefficients")};
}

}  // namespace

json to_json(const Geometry& g) {
  return json{{"kind", g.name()}, {"n", g.n}, {"measure_scale", g.measure_scale}};
}

Geometry geometry_from_json(const json& j) {
  const Geometry g = Geometry::from_name(field<std::string>(j, "kind"), field<int>(j, "n"));
  const double c = field_or<double>(j, "measure_scale", 1.0);
  return c == 1.0 ? g : g.with_measure_scale(c);
}

json to_json(const witness::WitnessBasis& b) {
  return json{{"family", witness::to_string(b.family)},
              {"r", b.r},
              {"top", b.top},
              {"scale", b.scale},
              {"scale_t", b.scale_t},
              {"top_s", b.top_s},
              {"widths", b.widths}};
}

witness::WitnessBasis basis_from_json(const json& j) {
  witness::WitnessBasis b;
  b.family = witness::family_from_string(field<std::string>(j, "family"));
  b.r = field<double>(j, "r");
  b.top = field<int>(j, "top");
  b.scale = field<double>(j, "scale");
  b.scale_t = field_or<double>(j, "scale_t", 1.0);
  b.top_s = field_or<int>(j, "top_s", 3);
  b.widths = field_or<std::vector<double>>(j, "widths", {});
  return b;
}

json to_json(const spectra::GridSpec& s) {
  return json{{"max_lambda", s.max_lambda}, {"spacing", s.spacing},   {"imag_points", s.imag_points},
              {"max_l", s.max_l},           {"max_m", s.max_m},       {"max_tau", s.max_tau},
              {"extra_lambdas", s.extra_lambdas}};
}

spectra::GridSpec grid_from_json(const json& j) {
  spectra::GridSpec s;
  s.max_lambda = field<double>(j, "max_lambda");
  s.spacing = field<double>(j, "spacing");
  s.imag_points = field<int>(j, "imag_points");
  s.max_l = field<int>(j, "max_l");
  s.max_m = field<int>(j, "max_m");
  s.max_tau = field<double>(j, "max_tau");
  s.extra_lambdas = field_or<std::vector<double>>(j, "extra_lambdas", {});
  return s;
}

json to_json(const witness::SpatialGridSpec& s) {
  return json{{"spacing", s.spacing}, {"t_max", s.t_max}, {"boundary_points", s.boundary_points}, {"extra", s.extra}};
}

witness::SpatialGridSpec spatial_from_json(const json& j) {
  witness::SpatialGridSpec s;
  s.spacing = field<double>(j, "spacing");
  s.t_max = field_or<double>(j, "t_max", 0.0);
  s.boundary_points = field_or<int>(j, "boundary_points", 400);
  s.extra = field_or<std::vector<double>>(j, "extra", {});
  return s;
}

json to_json(const witness::Margins& m) {
  return json{{"spectral", m.spectral}, {"spatial", m.spatial},   {"monomial", m.monomial},
              {"leading", m.leading},   {"spectral_floor", m.spectral_floor}, {"coefficient_cap", m.coefficient_cap}};
}

witness::Margins margins_from_json(const json& j) {
  witness::Margins m;
  m.spectral = field<double>(j, "spectral");
  m.spatial = field<double>(j, "spatial");
  m.monomial = field_or<double>(j, "monomial", m.monomial);
  m.leading = field_or<double>(j, "leading", m.leading);
  m.spectral_floor = field_or<double>(j, "spectral_floor", m.spectral_floor);
  m.coefficient_cap = field_or<double>(j, "coefficient_cap", m.coefficient_cap);
  return m;
}

json to_json(const certify::Policy& p) {
  return json{{"w1_spacing", p.w1_spacing},
              {"spectral", to_json(p.spectral)},
              {"refine_factor", p.refine_factor},
              {"w2_tolerance", p.w2_tolerance},
              {"fhat_min", p.fhat_min},
              {"seed", p.seed},
              {"random_points", p.random_points},
              {"random_tolerance", p.random_tolerance},
              {"max_tail_samples", p.max_tail_samples}};
}

certify::Policy policy_from_json(const json& j) {
  certify::Policy p;
  p.w1_spacing = field<double>(j, "w1_spacing");
  p.spectral = grid_from_json(field<json>(j, "spectral"));
  p.refine_factor = field<int>(j, "refine_factor");
  p.w2_tolerance = field<double>(j, "w2_tolerance");
  p.fhat_min = field<double>(j, "fhat_min");
  p.seed = field<std::uint64_t>(j, "seed");
  p.random_points = field<int>(j, "random_points");
  p.random_tolerance = field<double>(j, "random_tolerance");
  p.max_tail_samples = field_or<long>(j, "max_tail_samples", p.max_tail_samples);
  if (!(p.w1_spacing > 0.0) || p.refine_factor < 1 || !(p.w2_tolerance > 0.0) || !(p.random_tolerance > 0.0) ||
      p.random_points < 0)
    throw Error(ErrorKind::InvalidInput, "policy tolerances and spacings must be positive");
  return p;
}

json function_to_json(const RadialFunction& f) {
  json prof;
  if (const auto* h = f.heisenberg_profile()) {
    prof = json{{"type", "heis_gauss_laguerre"}, {"scale_t", h->scale_t}, {"scale_s", h->scale_s},
                {"max_j", h->max_j},            {"max_k", h->max_k},     {"coefficients", h->coeffs}};
  } else {
    const profile::Profile& p = *f.line_profile();
    if (const auto* q = std::get_if<profile::GaussLaguerre>(&p)) {
      prof = gauss_json(*q);
    } else if (const auto* q = std::get_if<profile::Tents>(&p)) {
      prof = json{{"type", "tents"}, {"widths", q->widths}, {"coefficients", q->coeffs}};
    } else if (const auto* q = std::get_if<profile::Zonal>(&p)) {
      prof = json{{"type", "zonal"}, {"coefficients", q->coeffs}};
    } else if (const auto* q = std::get_if<profile::ExpCosh>(&p)) {
      prof = json{{"type", "exp_cosh"}, {"a", q->a}, {"amplitude", q->amplitude}};
    } else if (const auto* q = std::get_if<profile::AbelPullback>(&p)) {
      const auto* line = q->line ? std::get_if<profile::GaussLaguerre>(&q->line->profile) : nullptr;
      if (!line) throw Error(ErrorKind::InvalidInput, "only Gauss-Laguerre pullbacks are serializable");
      prof = json{{"type", "abel_pullback"}, {"line", gauss_json(*line)}};
    } else {
      throw Error(ErrorKind::InvalidInput, "custom profiles are not serializable");
    }
  }
  return json{{"geometry", to_json(f.geometry())}, {"profile", prof}};
}

RadialFunction function_from_json(const json& j) {
  const Geometry g = geometry_from_json(field<json>(j, "geometry"));
  const json p = field<json>(j, "profile");
  const std::string type = field<std::string>(p, "type");
  if (type == "gauss_laguerre") return RadialFunction(g, gauss_from(p));
  if (type == "tents")
    return RadialFunction(g, profile::Tents{field<std::vector<double>>(p, "widths"),
                                            field<std::vector<double>>(p, "coefficients")});
  if (type == "zonal") return RadialFunction(g, profile::Zonal{g.n, field<std::vector<double>>(p, "coefficients")});
  if (type == "exp_cosh")
    return RadialFunction(g, profile::ExpCosh{field<double>(p, "a"), field_or<double>(p, "amplitude", 1.0)});
  if (type == "heis_gauss_laguerre")
    return RadialFunction(g, profile::HeisGaussLaguerre{g.n, field<double>(p, "scale_t"), field<double>(p, "scale_s"),
                                                        field<int>(p, "max_j"), field<int>(p, "max_k"),
                                                        field<std::vector<double>>(p, "coefficients")});
  if (type == "abel_pullback") {
    if (g.kind != GeometryKind::Hyperbolic) throw Error(ErrorKind::InvalidInput, "abel_pullback needs hyperbolic space");
    auto line = std::make_shared<profile::LineFunction>(profile::make_line(gauss_from(field<json>(p, "line"))));
    return abel::abel_inverse(line, g.n).with_geometry(g);
  }
  throw Error(ErrorKind::InvalidInput, "unknown profile type '" + type + "'");
}

pointprocess::LatticeSpec lattice_from_json(const json& j) {
  const auto rows = field<std::vector<std::vector<double>>>(j, "basis");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) throw Error(ErrorKind::InvalidInput, "basis must be square");
    for (Eigen::Index k = 0; k < n; ++k) b(i, k) = rows[i][k];
  }
  return pointprocess::make_lattice(b);
}

std::vector<std::string> design_flags(const witness::WitnessBasis& b) {
  using witness::Family;
  std::vector<std::string> flags{"relative_lp_margins"};
  const GeometryKind k = b.geometry.kind;
  switch (b.family) {
    case Family::GaussPoly:
      flags.push_back("gauss_leading_row");
      if (k == GeometryKind::Euclidean || (k == GeometryKind::Hyperbolic && b.geometry.n == 3))
        flags.push_back("tail_sign_rows");
      if (k == GeometryKind::Hyperbolic) {
        flags.push_back("abel_pullback_witness");
        flags.push_back("imaginary_segment_sampled");
        if (b.geometry.n != 3) flags.push_back("w1_envelope_magnitude_tail");
      }
      break;
    case Family::Hat: flags.push_back("tent_sign_rows"); break;
    case Family::SphereHarmonic: break;
    case Family::HeisGaussPoly:
      flags.push_back("heisenberg_ck_convention");
      flags.push_back("heisenberg_spectral_floor");
      flags.push_back("heisenberg_monotone_class");
      flags.push_back("heisenberg_w2_sampled_extension");
      break;
  }
  return flags;
}

namespace {

json verdict_json(const certify::WitnessCertificate& c, const certify::Policy& policy) {
  const auto& w1 = c.w1;
  const auto& w2 = c.w2;
  return json{{"w1_margin", w1.max_value},
              {"w2_margin", w2.min_value},
              {"policy", to_json(policy)},
              {"w1",
               {{"t_begin", w1.t_begin},
                {"t_end", w1.t_end},
                {"argmax_t", w1.argmax_t},
                {"argmax_s", w1.argmax_s},
                {"samples", w1.samples},
                {"tail_radius", w1.tail_radius},
                {"tail_argument", w1.tail_argument},
                {"tail_ok", w1.tail_ok}}},
              {"w2",
               {{"argmin", spectra::to_string(w2.argmin)},
                {"samples", w2.samples},
                {"imag_min", w2.has_imag ? json(w2.imag_min) : json(nullptr)},
                {"tail_start", w2.tail_start},
                {"tail_argument", w2.tail_argument},
                {"tail_ok", w2.tail_ok}}},
              {"recheck", {{"seed", c.recheck_seed}, {"max", c.recheck_max}}}};
}

json document(const witness::WitnessBasis& b, const std::vector<double>& coefficients,
              const certify::WitnessCertificate& cert, json certification) {
  const double vol = ball_volume(b.geometry, b.r);
  json flags = json::array();
  for (const auto& f : design_flags(b)) flags.push_back(f);
  return json{{"format", kCertificateFormat},
              {"geometry", to_json(b.geometry)},
              {"r", b.r},
              {"basis", to_json(b)},
              {"coefficients", coefficients},
              {"bound", cert.fhat_one > 0.0 ? json(cert.bound()) : json(nullptr)},
              {"fe", cert.fe},
              {"fhat_one", cert.fhat_one},
              {"ball_volume", vol},
              {"certification", std::move(certification)},
              {"flags", flags},
              {"status", cert.certified ? "certified" : "rejected"},
              {"reason", cert.reason}};
}

}  // namespace

json certificate_to_json(const witness::WitnessBasis& b, const certify::RefineResult& res) {
  const certify::Policy policy = certify::default_policy(b, res.final_grids.spectral, res.final_grids.spatial);
  json cert = verdict_json(res.certificate, policy);
  cert["grids"] = {{"spectral", to_json(res.final_grids.spectral)}, {"spatial", to_json(res.final_grids.spatial)}};
  cert["margins"] = to_json(res.final_grids.margins);
  cert["rounds"] = res.rounds;
  cert["lp"] = {{"objective", res.lp.objective}, {"iterations", res.lp.iterations}, {"residual", res.lp.residual}};
  return document(b, res.lp.coefficients, res.certificate, std::move(cert));
}

json certificate_to_json(const witness::WitnessBasis& b, const std::vector<double>& coefficients,
                         const certify::WitnessCertificate& cert, const certify::Policy& policy) {
  json c = verdict_json(cert, policy);
  c["grids"] = {{"spectral", to_json(policy.spectral)}};
  return document(b, coefficients, cert, std::move(c));
}

StoredCertificate certificate_from_json(const json& j) {
  if (field_or<std::string>(j, "format", "") != kCertificateFormat)
    throw Error(ErrorKind::InvalidInput, std::string("not a ") + kCertificateFormat + " document");
  StoredCertificate s;
  s.basis = basis_from_json(field<json>(j, "basis"));
  s.basis.geometry = geometry_from_json(field<json>(j, "geometry"));
  if (field<double>(j, "r") != s.basis.r) throw Error(ErrorKind::InvalidInput, "radius disagrees with the basis");
  s.coefficients = field<std::vector<double>>(j, "coefficients");
  if (s.coefficients.size() != s.basis.size())
    throw Error(ErrorKind::InvalidInput, "coefficient count does not match the basis");
  s.policy = policy_from_json(field<json>(field<json>(j, "certification"), "policy"));
  s.bound = j.contains("bound") && j["bound"].is_number() ? j["bound"].get<double>() : 0.0;
  s.status = field<std::string>(j, "status");
  return s;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, "'" + path + "': " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorKind::InvalidInput, "write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error(ErrorKind::InvalidInput, "cannot rename onto '" + path + "'");
}

}  // namespace packlp::io
