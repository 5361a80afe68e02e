#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmx/overlap.hpp"

namespace tmx {

/// Pair classes of the orthogonality matrix, by name:
///   te-counter, te-counter-evanescent, tm-counter, tm-counter-evanescent,
///   te-co, tm-co, tm-co-mixed, cross-electric, cross-magnetic,
///   delta-te, delta-tm, delta-tm-evanescent, mixed-conjugate, mixed-plain,
/// and with the oracle enabled: oracle-identical, oracle-counter,
///   oracle-cross, oracle-sweep.
const std::vector<std::string>& orthogonality_classes(bool with_oracle);

struct OrthogonalityRecord {
  std::string pair_class;
  std::string descriptor;
  std::string form;
  std::vector<DampedValue> table;
  cplx value;
  std::vector<DeltaWeight> delta_weights;
  double scale = 0.0;
  std::optional<double> epsilon_exponent;
  double expected = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct OrthogonalitySuiteConfig {
  std::vector<std::string> classes;  // empty: all non-oracle classes
  std::uint64_t seed = 1;
  int random_pairs = 4;  // random draws per class on top of the fixed cases
  RegularizationParams params;
  double vanishing_tolerance = 1e-8;
  double min_exponent = 0.9;
  double delta_tolerance = 5e-3;
  bool oracle = false;
  double oracle_box = 50.0;  // full box side in carrier wavelengths
};

/// Throws InvalidArgument for unknown class names.
std::vector<OrthogonalityRecord> run_orthogonality_suite(const OrthogonalitySuiteConfig& config);

}  // namespace tmx
