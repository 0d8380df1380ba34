#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fsrd/field.hpp"

namespace fsrd {

// Pointwise reaction term F(t, s) with polynomial growth exponent p, together
// with the envelope constants the structural checks test against:
//   zero at zero:       F(t, 0) = 0
//   dissipativity:      F(t, s) s            >= lambda1 |s|^p - psi1
//   local Lipschitz:    |F(t,s1) - F(t,s2)|  <= lambda2 (psi2 + |s1|^{p-2} + |s2|^{p-2}) |s1 - s2|
//   one-sided slope:    dF/ds                >= -psi3
//   growth:             |F(t, s)|            <= lambda3 |s|^{p-1} + psi4
//   strong monotonicity (example class):
//     (F(t,s1) - F(t,s2))(s1 - s2) >= lambda4 |s1 - s2|^p - psi5 |s1 - s2|^2
// The canonical family F(s) = a |s|^{p-2} s - b s (a > 0, b >= 0) fills all
// constants in; custom terms must declare their own.
struct DriftSpec {
  double p = 4.0;
  double a = 1.0;
  double b = 0.0;
  bool canonical = true;
  std::function<double(double, double)> f;    // custom F(t, s)
  std::function<double(double, double)> dfds; // custom dF/ds

  double lambda1 = 0.0, psi1 = 0.0;
  double lambda2 = 0.0, psi2 = 0.0;
  double psi3 = 0.0;
  double lambda3 = 0.0, psi4 = 0.0;
  double lambda4 = 0.0, psi5 = 0.0;

  static DriftSpec canonical_family(double p, double a, double b);
  static DriftSpec custom(double p, std::function<double(double, double)> f,
                          std::function<double(double, double)> dfds,
                          double lambda1, double psi1, double lambda2, double psi2,
                          double psi3, double lambda3, double psi4, double lambda4,
                          double psi5);

  double eval(double t, double s) const;
  double deriv(double t, double s) const;
};

// Pointwise application to a field. The tamed variants divide by 1 + dt |F|,
// which caps one explicit step at magnitude 1/dt without moving fixed points;
// the tamed derivative is dF/ds / (1 + dt |F|)^2, the exact slope of the
// tamed map almost everywhere. Non-finite outputs (overflow at extreme field
// values) raise NonFiniteError.
Field eval_F(const DriftSpec& d, double t, const Field& u);
Field eval_F_tamed(const DriftSpec& d, double t, const Field& u, double dt);
Field eval_dF(const DriftSpec& d, double t, const Field& u);
Field eval_dF_tamed(const DriftSpec& d, double t, const Field& u, double dt);

// Sampling plan for the structural checks: a (t, u) product grid plus all
// u-pairs at each t for the two-point conditions.
struct DriftSampleSpec {
  double t_min = 0.0, t_max = 1.0;
  int t_count = 5;
  double u_min = -8.0, u_max = 8.0;
  int u_count = 161;
};

struct ConditionEntry {
  std::string name;
  bool pass;
  double margin; // smallest sampled slack; >= 0 (up to rounding) means holds
  std::string note;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  double empirical_lambda4 = 0.0; // smallest sampled monotonicity ratio
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

ConditionReport check_conditions(const DriftSpec& d, const DriftSampleSpec& s);

} // namespace fsrd
