#include <cmath>
#include <vector>

#include "doctest.h"
#include "fsrd/noise.hpp"
#include "fsrd/rng.hpp"
#include "fsrd/spectral.hpp"

using namespace fsrd;

namespace {

Field random_field(const Grid& g, std::uint64_t seed) {
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = counter_normal(seed, 9, i, 0, 0);
  return f;
}

NoiseSpec full_spec(const Grid& g) {
  NoiseBuildParams p;
  p.modes = 3;
  p.profile = "pure-mode";
  p.amp = 0.8;
  p.amp_decay = 0.5;
  p.family = Sigma2Family::Bounded;
  p.c_amp = 0.4;
  p.c_decay = 1.0;
  p.kappa_amp = 0.6;
  p.kappa_width = 1.5;
  NoiseSpec n = make_noise(g, p);
  n.time_mod = [](double t) { return 1.0 + 0.5 * std::cos(t); };
  return n;
}

} // namespace

TEST_SUITE("noise") {

TEST_CASE("built profiles are normalized, scaled, and orthogonal") {
  Grid g(1, 128, 3.0);
  NoiseBuildParams p;
  p.modes = 3;
  p.amp = 0.7;
  p.amp_decay = 0.5;
  NoiseSpec n = make_noise(g, p);
  REQUIRE(n.sigma1.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(l2_norm(n.sigma1[static_cast<std::size_t>(k)]) ==
          doctest::Approx(0.7 * std::pow(k + 1.0, -0.5)).epsilon(1e-12));
  CHECK(inner(n.sigma1[0], n.sigma1[1]) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inner(n.sigma1[0], n.sigma1[2]) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inner(n.sigma1[1], n.sigma1[2]) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("enveloped profiles vanish toward the box edge") {
  Grid g(1, 256, 10.0);
  NoiseBuildParams p;
  p.modes = 2;
  p.profile = "enveloped-trig";
  p.amp = 1.0;
  p.amp_decay = 0.0;
  p.envelope_width = 1.0;
  NoiseSpec n = make_noise(g, p);
  for (const auto& s : n.sigma1) {
    CHECK(l2_norm(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(s[0]) < 1e-12);            // x = -L
    CHECK(std::fabs(s[s.size() - 1]) < 1e-12); // x = L - h
  }
}

TEST_CASE("apply_sigma and adjoint_sigma are adjoint") {
  Grid g(1, 64, 3.0);
  NoiseSpec n = full_spec(g);
  Field u = random_field(g, 21);
  Field q = random_field(g, 22);
  const std::vector<double> v = {0.7, -1.3, 0.4};
  const double t = 0.6;
  const double lhs = inner(apply_sigma(n, t, u, v), q);
  std::vector<double> a(3);
  adjoint_sigma(n, t, u, q, a);
  const double rhs = v[0] * a[0] + v[1] * a[1] + v[2] * a[2];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("additive fast path matches the general formula") {
  Grid g(1, 64, 3.0);
  NoiseBuildParams p;
  p.modes = 2;
  p.amp = 0.5;
  NoiseSpec n = make_noise(g, p); // family None
  Field u = random_field(g, 23);
  const std::vector<double> v = {1.1, -0.3};
  Field out = apply_sigma(n, 0.0, u, v);
  Field expect(g);
  axpy(expect, v[0], n.sigma1[0]);
  axpy(expect, v[1], n.sigma1[1]);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out[i] == doctest::Approx(expect[i]).epsilon(1e-14));
}

TEST_CASE("state derivative matches a finite difference") {
  Grid g(1, 32, 2.0);
  NoiseSpec n = full_spec(g);
  Field u = random_field(g, 24);
  const std::vector<double> v = {0.5, 0.2, -0.8};
  const double t = 0.3;
  const double h = 1e-6;
  Field up = u, um = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    up[i] += h;
    um[i] -= h;
  }
  Field fp = apply_sigma(n, t, up, v);
  Field fm = apply_sigma(n, t, um, v);
  Field d = sigma_state_deriv(n, t, u, v);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(d[i] == doctest::Approx((fp[i] - fm[i]) / (2.0 * h)).epsilon(1e-6));
}

TEST_CASE("Hilbert-Schmidt norm for additive noise is the profile mass") {
  Grid g(1, 64, 3.0);
  NoiseBuildParams p;
  p.modes = 2;
  p.amp = 0.9;
  p.amp_decay = 1.0;
  NoiseSpec n = make_noise(g, p);
  n.time_mod = [](double) { return 2.0; };
  Field u = random_field(g, 25);
  double expect = 0.0;
  for (const auto& s : n.sigma1) {
    const double norm = l2_norm(s);
    expect += 4.0 * norm * norm; // m(t)^2 = 4
  }
  CHECK(hs_norm_sq(n, 0.0, u) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("declared envelopes hold on sampled fields") {
  Grid g(1, 64, 3.0);
  for (auto family : {Sigma2Family::Linear, Sigma2Family::Bounded}) {
    NoiseBuildParams p;
    p.modes = 3;
    p.amp = 0.5;
    p.family = family;
    p.c_amp = 0.6;
    p.kappa_amp = 0.8;
    p.kappa_width = 1.0;
    NoiseSpec n = make_noise(g, p);
    NoiseCheckReport r = check_noise(n, 16, 3.0, 777);
    CHECK(r.all_pass());
    CHECK(r.sums.alpha_sq > 0.0);
  }
}

TEST_CASE("gaps are nonnegative on adversarial fields") {
  Grid g(1, 32, 2.0);
  NoiseSpec n = full_spec(g);
  for (std::uint64_t s = 0; s < 8; ++s) {
    Field u1 = random_field(g, 100 + s);
    Field u2 = random_field(g, 200 + s);
    scale(u1, 5.0);
    CHECK(growth_gap(n, 0.4, u1) >= -1e-10);
    CHECK(lipschitz_gap(n, 0.4, u1, u2) >= -1e-10);
  }
}

TEST_CASE("shape validation") {
  Grid g(1, 32, 2.0);
  NoiseSpec n = full_spec(g);
  n.c.pop_back();
  CHECK_THROWS_AS(n.validate(), InvalidArgument);
  NoiseSpec ok = full_spec(g);
  Field u = random_field(g, 26);
  const std::vector<double> wrong = {1.0, 2.0};
  CHECK_THROWS_AS(apply_sigma(ok, 0.0, u, wrong), InvalidArgument);
  NoiseBuildParams bad;
  bad.modes = 0;
  CHECK_THROWS_AS(make_noise(g, bad), InvalidArgument);
  bad.modes = 1;
  bad.profile = "unknown";
  CHECK_THROWS_AS(make_noise(g, bad), InvalidArgument);
}

} // TEST_SUITE
