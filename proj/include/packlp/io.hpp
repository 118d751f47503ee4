#pragma once

// JSON forms of geometries, bases, grids, functions, lattices and
// certificates. Doubles are written in shortest round-trip form, so equal
// inputs give byte-identical documents.

#include <string>
#include <vector>

#include "json.hpp"
#include "packlp/certify.hpp"
#include "packlp/pointprocess.hpp"
#include "packlp/witness_lp.hpp"

namespace packlp::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kCertificateFormat = "packlp-certificate/1";

json to_json(const Geometry& g);
Geometry geometry_from_json(const json& j);

json to_json(const witness::WitnessBasis& b);
witness::WitnessBasis basis_from_json(const json& j);

json to_json(const spectra::GridSpec& s);
spectra::GridSpec grid_from_json(const json& j);

json to_json(const witness::SpatialGridSpec& s);
witness::SpatialGridSpec spatial_from_json(const json& j);

json to_json(const witness::Margins& m);
witness::Margins margins_from_json(const json& j);

json to_json(const certify::Policy& p);
certify::Policy policy_from_json(const json& j);

/// {"geometry": ..., "profile": {"type": ..., ...}}. Supported types:
/// gauss_laguerre, tents, zonal, exp_cosh, heis_gauss_laguerre and
/// abel_pullback (of a line gauss_laguerre profile).
json function_to_json(const RadialFunction& f);
RadialFunction function_from_json(const json& j);

/// {"basis": [[...], ...]} with one row per generator.
pointprocess::LatticeSpec lattice_from_json(const json& j);

/// Design decisions that shaped a certificate (recorded in its "flags").
std::vector<std::string> design_flags(const witness::WitnessBasis& b);

json certificate_to_json(const witness::WitnessBasis& b, const certify::RefineResult& res);
/// Same document for a single verdict without a refinement history.
json certificate_to_json(const witness::WitnessBasis& b, const std::vector<double>& coefficients,
                         const certify::WitnessCertificate& cert, const certify::Policy& policy);

struct StoredCertificate {
  witness::WitnessBasis basis;
  std::vector<double> coefficients;
  certify::Policy policy;
  double bound = 0.0;
  std::string status;
};

StoredCertificate certificate_from_json(const json& j);

json read_file(const std::string& path);
/// Writes through a temporary file and a rename.
void write_file(const std::string& path, const json& j);

}  // namespace packlp::io
