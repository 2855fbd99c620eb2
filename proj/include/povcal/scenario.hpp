#pragma once

// Scenario files: JSON documents holding named observables, kernels and
// states. Complex numbers are [re, im] pairs (a bare number means im = 0),
// matrices are row-major arrays of rows, kernels are arrays of rows aligned
// with the sorted-label atom order of their source observable.
//
//   {
//     "dim": 2,
//     "backend": "hilbert",                 // optional, or "tribe"
//     "tolerances": {"eq": 1e-8},           // optional overrides
//     "observables": {"xi": {"labels": [0, 1], "atoms": [M0, M1]}},
//     "kernels": {"nu": [[0.8, 0.2], [0.3, 0.7]]},
//     "states": {"rho": M, "P": [0.5, 0.5]}  // matrix: density, flat: distribution
//   }

#include <map>
#include <string>

#include <json.hpp>

#include "povcal/sufficiency.hpp"

namespace povcal {

struct Scenario {
  Backend backend = Backend::hilbert;
  Index dim = 0;
  Tolerances tolerance;  ///< defaults, then the file's overrides, then the scale factor
  std::map<std::string, Observable> observables;
  std::map<std::string, MarkovKernel> kernels;
  /// Density matrices (hilbert) or base-set distributions (tribe).
  std::map<std::string, State> states;
  /// Every state given as a flat probability vector.
  std::map<std::string, Eigen::VectorXd> distributions;
  nlohmann::json document;  ///< the parsed source, for re-emission

  const Observable& observable(const std::string& name) const;
  const MarkovKernel& kernel(const std::string& name) const;
  const State& state(const std::string& name) const;
  const Eigen::VectorXd& distribution(const std::string& name) const;
};

/// Throws Error(ParseError) with a JSON-path location on malformed input;
/// validation errors of the objects themselves are re-thrown with the path
/// prefixed. Objects are validated under `tolerance`, which scales the
/// equality and feasibility thresholds by `tol_scale`.
Scenario parse_scenario(const nlohmann::json& doc, double tol_scale = 1.0);
Scenario load_scenario(const std::string& path, double tol_scale = 1.0);

nlohmann::json to_json(const CMatrix& m);
nlohmann::json to_json(const Eigen::MatrixXd& m);
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Effect& e);
nlohmann::json to_json(const Observable& xi);
nlohmann::json to_json(const MarkovKernel& nu);
nlohmann::json to_json(const WeakMarkovKernel& nu);
nlohmann::json to_json(const SufficiencyReport& report);

}  // namespace povcal
