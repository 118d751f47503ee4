#pragma once

// Command dispatch behind the packlp executable.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "packlp/io.hpp"

namespace packlp::cli {

/// Exit statuses: success, numeric failure or rejected verdict, usage error.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

struct RunConfig {
  std::string command;  ///< bound | certify | transform | abel | density | kissing | selftest
  std::string geometry = "euclidean";
  int n = 1;
  double measure_scale = 1.0;
  double radius = 0.5;
  std::string family;  ///< empty: default family of the geometry
  int degree = -1;     ///< -1: default degree of the family
  int budget = 6;
  std::uint64_t seed = 0x5eed;
  int random_points = 2000;
  double w2_tolerance = 1e-12;
  double random_tolerance = 1e-10;
  double spectral_spacing = 0.0;  ///< 0: basis default
  double max_lambda = 0.0;        ///< 0: basis default
  double spatial_spacing = 0.0;   ///< 0: basis default
  std::string input;   ///< certificate (certify) or function file (transform, abel)
  std::string output;  ///< certificate path (bound)
  std::string csv;     ///< grid dump
  std::string lattice = "A2";
  double theta = 1.0471975511965976;  ///< kissing angle (radians)
  double gauss_scale = 1.0;           ///< Gaussian test profile when no input is given
  double from = 0.0, to = 10.0, step = 0.5;
  std::string direction = "forward";  ///< abel
  std::string target = "all";         ///< selftest

  bool operator==(const RunConfig&) const = default;
};

io::json to_json(const RunConfig& c);
RunConfig config_from_json(const io::json& j);
/// Throws InvalidInput on nonpositive tolerances, budget < 1 and similar.
void validate(const RunConfig& c);

/// Runs one command; JSON results go to out, diagnostics and design flags to
/// log. Returns an exit status.
int run(const RunConfig& c, std::ostream& out, std::ostream& log);

/// Applies PACKLP_THREADS (if set) to the OpenMP runtime; throws InvalidInput
/// on a malformed value.
void apply_thread_limit();

}  // namespace packlp::cli
