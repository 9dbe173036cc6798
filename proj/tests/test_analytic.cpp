#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oems/analytic.hpp"
#include "oems/params.hpp"

using namespace oems;
using C = std::complex<double>;

namespace {

RwaCoefficients<double> reference(double c1, double c2) {
  const auto p = default_params();
  return RwaCoefficients<double>::from_cooperativities(c1, c2, p.kappa1, p.kappa2, p.gamma_m);
}

// Unnormalized cleared denominator, straight from the product form.
C cubic(const RwaCoefficients<double>& c, C x) {
  return (x + C(0, c.kappa1)) * (x + C(0, c.gamma_m / 2)) * (x + C(0, c.kappa2)) -
         c.s1 * (x + C(0, c.kappa2)) - c.s2 * (x + C(0, c.kappa1));
}

// Durand-Kerner simultaneous iteration on the monic cubic in x / gamma_m;
// an oracle independent of the companion-matrix path.
std::array<C, 3> durand_kerner(const RwaCoefficients<double>& c) {
  auto f = [&](C z) { return cubic(c, z * c.gamma_m) / std::pow(c.gamma_m, 3); };
  std::array<C, 3> z{C(0.4, 0.9), C(0.4, 0.9) * C(0.4, 0.9),
                     C(0.4, 0.9) * C(0.4, 0.9) * C(0.4, 0.9)};
  const double r = 2.0 * (c.kappa1 + c.kappa2 + c.gamma_m) / c.gamma_m;
  for (auto& v : z) v *= r;
  for (int it = 0; it < 5000; ++it) {
    for (int k = 0; k < 3; ++k) {
      C den(1);
      for (int j = 0; j < 3; ++j)
        if (j != k) den *= z[k] - z[j];
      z[k] -= f(z[k]) / den;
    }
  }
  for (auto& v : z) v *= c.gamma_m;
  return z;
}

}  // namespace

TEST_CASE("response_rwa limiting cases") {
  auto c = reference(0.0, 0.0);
  for (double x : {-3e6, -1.0, 0.0, 2.5e4}) {
    const C want = C(0, 2 * c.kappa1) / C(x, c.kappa1);
    CHECK(std::abs(response_rwa(x, c) - want) <= 1e-15 * std::abs(want));
  }
  CHECK(response_rwa(0.0, c) == C(2.0));

  for (double c1 : {0.5, 40.0, 300.0}) {
    const auto k = reference(c1, 0.0);
    CHECK(std::abs(response_rwa(0.0, k) - C(2.0 / (1.0 + c1))) < 1e-14);
    CHECK(k.c1() == doctest::Approx(c1));
  }
  CHECK(std::abs(response_rwa(0.0, reference(40.0, 40.0)) - C(82.0 / 81.0)) < 1e-14);
}

TEST_CASE("decoupled and single-cavity poles") {
  const auto c0 = reference(0.0, 0.0);
  const auto p0 = denominator_roots(c0);
  CHECK(std::abs(p0.roots[0] - C(0, -c0.kappa2)) < 1e-9 * c0.kappa2);
  CHECK(std::abs(p0.roots[1] - C(0, -c0.gamma_m / 2)) < 1e-9 * c0.gamma_m);
  CHECK(std::abs(p0.roots[2] - C(0, -c0.kappa1)) < 1e-9 * c0.kappa1);

  // s2 = 0: quadratic factor (x + i k1)(x + i g/2) - s1 plus the bare -i k2.
  const auto c = reference(40.0, 0.0);
  const C b(0, c.kappa1 + c.gamma_m / 2);
  const C q = b * b - 4.0 * (C(0, c.kappa1) * C(0, c.gamma_m / 2) - c.s1);
  const C r1 = (-b + std::sqrt(q)) / 2.0, r2 = (-b - std::sqrt(q)) / 2.0;
  const auto p = denominator_roots(c);
  CHECK(p.regime == PoleRegime::eit);
  CHECK(std::abs(p.roots[0] - C(0, -c.kappa2)) < 1e-9 * c.kappa2);
  CHECK(std::abs(p.roots[1] - r1) < 1e-9 * std::abs(r1));
  CHECK(std::abs(p.roots[2] - r2) < 1e-9 * std::abs(r2));
  const double gamma_eit = eit_width(40.0, c.gamma_m);
  CHECK(std::abs(p.roots[1].imag()) == doctest::Approx(gamma_eit).epsilon(0.03));
  CHECK(std::abs(p.roots[2].imag()) ==
        doctest::Approx(c.kappa1 + c.gamma_m / 2 - gamma_eit).epsilon(0.03));
}

TEST_CASE("companion roots match an independent Durand-Kerner oracle") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coop(0.0, 200.0);
  for (int k = 0; k < 50; ++k) {
    const auto c = reference(coop(rng), coop(rng));
    const auto p = denominator_roots(c);
    const auto dk = match_roots(p.roots, durand_kerner(c));
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(p.roots[j] - dk[j]) <= 1e-8 * std::max(std::abs(dk[j]), c.gamma_m));
    }
    CHECK(vieta_residual(p, c) < 1e-9);
  }
}

TEST_CASE("normalized coefficients reproduce the unnormalized cubic") {
  const auto c = reference(40.0, 25.0);
  const auto q = denominator_coefficients(c);
  for (C x : {C(0.3, -2.0), C(-17.0, 0.1), C(1e3, 1e3)}) {
    const C normalized = horner(q, x / c.gamma_m) * std::pow(c.gamma_m, 3);
    CHECK(std::abs(normalized - cubic(c, x)) <= 1e-12 * std::abs(cubic(c, x)));
  }
}

TEST_CASE("partial fractions reproduce direct evaluation") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> xs(-50.0, 50.0);
  for (auto [c1, c2] : {std::pair{40.0, 0.0}, std::pair{40.0, 20.0}, std::pair{40.0, 40.0},
                        std::pair{5.0, 90.0}}) {
    const auto c = reference(c1, c2);
    const auto p = denominator_roots(c);
    for (int k = 0; k < 200; ++k) {
      const double x = xs(rng) * c.gamma_m;
      const C direct = response_rwa(x, c);
      CHECK(std::abs(response_from_poles(x, p, c) - direct) <= 1e-8 * std::abs(direct));
    }
  }
}

TEST_CASE("root trajectories along the cooperativity-ratio sweep") {
  std::vector<RwaCoefficients<double>> path;
  for (int k = 0; k <= 400; ++k) path.push_back(reference(40.0, 40.0 * k / 400.0));
  const auto poles = track_roots(path);
  const double kappa2 = path.front().kappa2;
  CHECK(std::abs(poles.front().roots[0].imag()) == doctest::Approx(kappa2).epsilon(1e-6));
  CHECK(std::abs(poles.back().roots[0].imag()) ==
        doctest::Approx(kappa2 * (1.0 + 40.0 / 41.0)).epsilon(0.02));
  for (std::size_t k = 0; k < poles.size(); ++k) {
    CHECK(poles[k].regime == PoleRegime::eit);
    for (const auto& r : poles[k].roots) CHECK(std::abs(r.real()) <= 1e-6 * std::abs(r.imag()));
    if (k > 0) {
      for (int j = 0; j < 3; ++j) {
        const C a = poles[k - 1].roots[j], b = poles[k].roots[j];
        CHECK(std::abs(b - a) < 0.01 * std::abs(a));
      }
      CHECK(std::abs(poles[k].roots[0].imag()) > std::abs(poles[k - 1].roots[0].imag()));
    }
  }
}

TEST_CASE("roots vary continuously with s2") {
  for (double c2 : {1.0, 10.0, 25.0, 40.0}) {
    auto a = reference(40.0, c2);
    auto b = a;
    b.s2 *= 1.001;
    const auto pa = denominator_roots(a);
    const auto pb = denominator_roots(b);
    const auto matched = match_roots(pa.roots, pb.roots);
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(matched[j] - pa.roots[j]) < 0.01 * std::abs(pa.roots[j]));
  }
}

TEST_CASE("normal-mode splitting above the critical coupling") {
  // 4 s1 > (kappa1 - gamma_m/2)^2 gives a complex-conjugate-real-part pair.
  auto c = reference(0.0, 0.0);
  c.s1 = 0.3 * std::pow(c.kappa1 - c.gamma_m / 2, 2);
  CHECK(denominator_roots(c).regime == PoleRegime::normal_mode_splitting);
  c.s1 = 0.2 * std::pow(c.kappa1 - c.gamma_m / 2, 2);
  CHECK(denominator_roots(c).regime == PoleRegime::eit);
}

TEST_CASE("EIA splitting") {
  const double gm = hz(1e3), k2 = hz(1e2);
  const double gamma_eit = eit_width(40.0, gm);
  const auto zero = eia_splitting(gamma_eit, 0.0, k2);
  CHECK(zero.gamma_plus.real() == doctest::Approx(gamma_eit));
  CHECK(std::abs(zero.gamma_minus) < 1e-12 * gamma_eit);
  CHECK(zero.gamma_eia_approx == k2);

  const double s2 = 40.0 * k2 * gm / 2.0;
  const auto s = eia_splitting(gamma_eit, s2, k2);
  CHECK(s.gamma_eia_approx == doctest::Approx(k2 * (1.0 + 40.0 / 41.0)).epsilon(1e-12));
  CHECK(s.gamma_eia_approx / gm == doctest::Approx(0.1976).epsilon(1e-3));
  CHECK(s.validity_ratio == doctest::Approx(0.019).epsilon(0.01));
  CHECK(s.approx_valid);

  const auto degenerate = eia_splitting(gamma_eit, gamma_eit * gamma_eit / 4.0, k2);
  CHECK(degenerate.gamma_plus.real() == doctest::Approx(gamma_eit / 2));
  CHECK(degenerate.gamma_minus.real() == doctest::Approx(gamma_eit / 2));

  const auto complex_split = eia_splitting(gamma_eit, gamma_eit * gamma_eit, k2);
  CHECK(complex_split.gamma_plus.imag() != 0.0);
  CHECK_FALSE(complex_split.approx_valid);
}

TEST_CASE("peak height") {
  const auto equal = peak_height(40.0, 40.0);
  CHECK(equal.exact == doctest::Approx(82.0 / 81.0));
  CHECK(*equal.approx == doctest::Approx(1.0));
  const auto none = peak_height(40.0, 0.0);
  CHECK(none.exact == doctest::Approx(2.0 / 41.0));
  CHECK_FALSE(none.approx.has_value());
  const auto half = peak_height(40.0, 20.0);
  CHECK(half.exact == doctest::Approx(42.0 / 61.0));
  CHECK(*half.approx == doctest::Approx(2.0 / 3.0));

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coop(0.0, 500.0);
  for (int k = 0; k < 100; ++k) {
    const double c1 = coop(rng), c2 = coop(rng);
    CHECK(std::abs(peak_height(c1, c2).exact - response_rwa(0.0, reference(c1, c2)).real()) <
          1e-12);
  }

  double previous = 1e300;
  for (double c : {10.0, 100.0, 1000.0}) {
    const auto h = peak_height(c, 0.5 * c);
    const double err = std::abs(*h.approx - h.exact);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("long double instantiation agrees with double") {
  const auto p = default_params();
  const auto cd = reference(40.0, 40.0);
  const auto cl = RwaCoefficients<long double>::from_cooperativities(
      40.0L, 40.0L, p.kappa1, p.kappa2, p.gamma_m);
  const auto pd = denominator_roots(cd);
  const auto pl = denominator_roots(cl);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(C(pl.roots[j]) - pd.roots[j]) < 1e-10 * std::abs(pd.roots[j]));
  }
  CHECK(std::abs(response_rwa(0.0L, cl) - std::complex<long double>(82.0L / 81.0L)) < 1e-17L);
}
