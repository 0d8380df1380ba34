#include "fsrd/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fsrd {

namespace {

inline double canon_eval(double p, double a, double b, double s) {
  return (p == 2.0 ? a * s : a * std::pow(std::fabs(s), p - 2.0) * s) - b * s;
}

inline double canon_deriv(double p, double a, double b, double s) {
  return (p == 2.0 ? a : a * (p - 1.0) * std::pow(std::fabs(s), p - 2.0)) - b;
}

void require_exponent(double p) {
  if (!(p >= 2.0)) throw InvalidArgument("drift exponent p must be >= 2");
}

} // namespace

DriftSpec DriftSpec::canonical_family(double p, double a, double b) {
  require_exponent(p);
  if (!(a > 0.0)) throw InvalidArgument("canonical drift needs a > 0");
  if (b < 0.0) throw InvalidArgument("canonical drift needs b >= 0");
  DriftSpec d;
  d.p = p;
  d.a = a;
  d.b = b;
  d.canonical = true;

  if (b == 0.0) {
    d.lambda1 = a;
    d.psi1 = 0.0;
  } else if (p > 2.0) {
    // F(s) s = a|s|^p - b s^2 >= (a/2)|s|^p - sup_s (b s^2 - (a/2) s^p).
    d.lambda1 = 0.5 * a;
    const double sstar = std::pow(4.0 * b / (p * a), 1.0 / (p - 2.0));
    d.psi1 = std::max(0.0, b * sstar * sstar - 0.5 * a * std::pow(sstar, p));
  } else {
    if (!(a > b)) throw InvalidArgument("canonical p = 2 drift needs a > b for dissipativity");
    d.lambda1 = a - b;
    d.psi1 = 0.0;
  }
  d.lambda2 = a * (p - 1.0) + b;
  d.psi2 = 1.0;
  d.psi3 = b;
  d.lambda3 = a + b;
  d.psi4 = b;
  d.lambda4 = a * std::pow(2.0, 2.0 - p);
  d.psi5 = b;
  return d;
}

DriftSpec DriftSpec::custom(double p, std::function<double(double, double)> f,
                            std::function<double(double, double)> dfds,
                            double lambda1, double psi1, double lambda2, double psi2,
                            double psi3, double lambda3, double psi4, double lambda4,
                            double psi5) {
  require_exponent(p);
  if (!f || !dfds) throw InvalidArgument("custom drift needs both F and dF/ds");
  DriftSpec d;
  d.p = p;
  d.canonical = false;
  d.f = std::move(f);
  d.dfds = std::move(dfds);
  d.lambda1 = lambda1;
  d.psi1 = psi1;
  d.lambda2 = lambda2;
  d.psi2 = psi2;
  d.psi3 = psi3;
  d.lambda3 = lambda3;
  d.psi4 = psi4;
  d.lambda4 = lambda4;
  d.psi5 = psi5;
  return d;
}

double DriftSpec::eval(double t, double s) const {
  return canonical ? canon_eval(p, a, b, s) : f(t, s);
}

double DriftSpec::deriv(double t, double s) const {
  return canonical ? canon_deriv(p, a, b, s) : dfds(t, s);
}

Field eval_F(const DriftSpec& d, double t, const Field& u) {
  Field out(u.grid);
  if (d.canonical) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = canon_eval(d.p, d.a, d.b, u[i]);
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = d.f(t, u[i]);
  }
  if (!out.all_finite()) throw NonFiniteError("drift evaluation overflowed");
  return out;
}

Field eval_F_tamed(const DriftSpec& d, double t, const Field& u, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("taming needs dt > 0");
  Field out = eval_F(d, t, u);
  for (double& v : out.values) v /= 1.0 + dt * std::fabs(v);
  return out;
}

Field eval_dF(const DriftSpec& d, double t, const Field& u) {
  Field out(u.grid);
  if (d.canonical) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = canon_deriv(d.p, d.a, d.b, u[i]);
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = d.dfds(t, u[i]);
  }
  if (!out.all_finite()) throw NonFiniteError("drift slope evaluation overflowed");
  return out;
}

Field eval_dF_tamed(const DriftSpec& d, double t, const Field& u, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("taming needs dt > 0");
  const Field fv = eval_F(d, t, u);
  Field out = eval_dF(d, t, u);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double denom = 1.0 + dt * std::fabs(fv[i]);
    out[i] /= denom * denom;
  }
  return out;
}

ConditionReport check_conditions(const DriftSpec& d, const DriftSampleSpec& s) {
  if (s.t_count < 1 || s.u_count < 3)
    throw InvalidArgument("condition check needs at least 1 time and 3 state samples");
  if (!(s.u_max > s.u_min) || !(s.t_max >= s.t_min))
    throw InvalidArgument("condition check sample ranges are empty");

  std::vector<double> ts(static_cast<std::size_t>(s.t_count));
  for (int i = 0; i < s.t_count; ++i)
    ts[static_cast<std::size_t>(i)] =
        s.t_count == 1 ? s.t_min
                       : s.t_min + (s.t_max - s.t_min) * i / double(s.t_count - 1);
  std::vector<double> us(static_cast<std::size_t>(s.u_count));
  for (int i = 0; i < s.u_count; ++i)
    us[static_cast<std::size_t>(i)] = s.u_min + (s.u_max - s.u_min) * i / double(s.u_count - 1);

  // Scale for the pass tolerance: conditions compare quantities of size
  // ~ lambda * |u|^p, so slack is judged relative to that.
  const double umax = std::max(std::fabs(s.u_min), std::fabs(s.u_max));
  const double scale = std::max(1.0, (std::fabs(d.lambda1) + std::fabs(d.lambda2) +
                                      std::fabs(d.lambda3) + 1.0) *
                                         std::pow(umax, d.p));
  const double tol = 1e-9 * scale;

  double zero_violation = 0.0;
  double m_diss = std::numeric_limits<double>::infinity();
  double m_lip = std::numeric_limits<double>::infinity();
  double m_slope = std::numeric_limits<double>::infinity();
  double m_growth = std::numeric_limits<double>::infinity();
  double m_mono = std::numeric_limits<double>::infinity();
  double emp_l4 = std::numeric_limits<double>::infinity();

  for (double t : ts) {
    zero_violation = std::max(zero_violation, std::fabs(d.eval(t, 0.0)));
    for (double u : us) {
      const double fu = d.eval(t, u);
      const double au = std::fabs(u);
      m_diss = std::min(m_diss, fu * u - d.lambda1 * std::pow(au, d.p) + d.psi1);
      m_slope = std::min(m_slope, d.deriv(t, u) + d.psi3);
      m_growth = std::min(m_growth,
                          d.lambda3 * std::pow(au, d.p - 1.0) + d.psi4 - std::fabs(fu));
    }
    for (double u1 : us) {
      const double f1 = d.eval(t, u1);
      for (double u2 : us) {
        if (u2 <= u1) continue;
        const double f2 = d.eval(t, u2);
        const double du = u2 - u1;
        m_lip = std::min(m_lip, d.lambda2 *
                                    (d.psi2 + std::pow(std::fabs(u1), d.p - 2.0) +
                                     std::pow(std::fabs(u2), d.p - 2.0)) *
                                    du -
                                std::fabs(f2 - f1));
        const double lhs = (f2 - f1) * du + d.psi5 * du * du;
        const double dup = std::pow(du, d.p);
        m_mono = std::min(m_mono, lhs - d.lambda4 * dup);
        emp_l4 = std::min(emp_l4, lhs / dup);
      }
    }
  }

  ConditionReport r;
  r.entries.push_back({"zero-at-zero", zero_violation <= 1e-12 * std::max(1.0, scale),
                       -zero_violation, "max |F(t, 0)| over sampled t"});
  r.entries.push_back({"dissipativity", m_diss >= -tol, m_diss,
                       "min F(u) u - lambda1 |u|^p + psi1"});
  r.entries.push_back({"local-lipschitz", m_lip >= -tol, m_lip,
                       "min envelope - |F(u1) - F(u2)| over pairs"});
  r.entries.push_back({"one-sided-slope", m_slope >= -tol, m_slope, "min dF/ds + psi3"});
  r.entries.push_back({"growth", m_growth >= -tol, m_growth,
                       "min lambda3 |u|^{p-1} + psi4 - |F(u)|"});
  r.entries.push_back({"strong-monotonicity", m_mono >= -tol, m_mono,
                       "min two-point slack at declared lambda4"});
  r.empirical_lambda4 = emp_l4;
  return r;
}

} // namespace fsrd
