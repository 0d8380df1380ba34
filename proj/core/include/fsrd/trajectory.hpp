#pragma once

#include <optional>
#include <vector>

#include "fsrd/field.hpp"

namespace fsrd {

// Per-step norms recorded while integrating; t = step * dt.
struct StepRecord {
  double t;
  double l2;      // ||u||_{L2}
  double h_alpha; // full fractional Sobolev norm
  double lp;      // ||u||_{Lp} with the drift's exponent
};

// Time-discrete path: fields[m] is the state after m steps, records[m] its
// norms. Stochastic paths driven through a change of measure carry the log
// density ratio of nominal vs sampling measure in log_weight.
struct Trajectory {
  double dt = 0.0;
  std::vector<Field> fields;
  std::vector<StepRecord> records;
  std::optional<double> log_weight;

  int steps() const { return static_cast<int>(fields.size()) - 1; }
  double duration() const { return dt * steps(); }
  const Field& initial() const { return fields.front(); }
  const Field& terminal() const { return fields.back(); }
};

} // namespace fsrd
