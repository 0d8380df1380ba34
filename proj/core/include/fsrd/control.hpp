#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "fsrd/errors.hpp"

namespace fsrd {

// Piecewise-constant l2-valued control: one row of `modes` entries per time
// step. Values are set in bulk so the cached energy can never go stale.
//   energy = sum_m dt sum_k v[m][k]^2,   action = energy / 2.
class Control {
public:
  Control(int steps, int modes, double dt) : Control(steps, modes, dt, {}) {}

  Control(int steps, int modes, double dt, std::vector<double> values)
      : steps_(steps), modes_(modes), dt_(dt), values_(std::move(values)) {
    if (steps_ < 1 || modes_ < 1) throw InvalidArgument("control needs steps >= 1, modes >= 1");
    if (!(dt_ > 0.0)) throw InvalidArgument("control needs dt > 0");
    if (values_.empty())
      values_.assign(static_cast<std::size_t>(steps_) * static_cast<std::size_t>(modes_), 0.0);
    if (values_.size() != static_cast<std::size_t>(steps_) * static_cast<std::size_t>(modes_))
      throw InvalidArgument("control value count != steps * modes");
    refresh_energy();
  }

  int steps() const { return steps_; }
  int modes() const { return modes_; }
  double dt() const { return dt_; }
  double duration() const { return dt_ * steps_; }

  double at(int step, int mode) const {
    return values_[static_cast<std::size_t>(step) * static_cast<std::size_t>(modes_) +
                   static_cast<std::size_t>(mode)];
  }

  std::span<const double> row(int step) const {
    return {values_.data() + static_cast<std::size_t>(step) * static_cast<std::size_t>(modes_),
            static_cast<std::size_t>(modes_)};
  }

  const std::vector<double>& values() const { return values_; }

  // Replaces all values and recomputes the cached energy.
  void set_values(std::vector<double> values) {
    if (values.size() != values_.size())
      throw InvalidArgument("control value count != steps * modes");
    values_ = std::move(values);
    refresh_energy();
  }

  double energy() const { return energy_; }
  double action() const { return 0.5 * energy_; }

  // Recomputation used by the cache-consistency test.
  double energy_recomputed() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return dt_ * s;
  }

private:
  void refresh_energy() {
    energy_ = energy_recomputed();
    if (!std::isfinite(energy_)) throw NonFiniteError("control energy is not finite");
  }

  int steps_;
  int modes_;
  double dt_;
  std::vector<double> values_;
  double energy_ = 0.0;
};

} // namespace fsrd
