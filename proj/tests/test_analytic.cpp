#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mwall/analytic.hpp"
#include "mwall/error.hpp"
#include "oracles.hpp"

using namespace mwall;
using std::numbers::pi;

namespace {

// Frozen from the oracle: |e^{-2i} - e^{-i}|^2 = 2 - 2 cos 1 for k=2, v=1.5, x=-1, t=0.
constexpr double kDensityRef = 0.9193953882637205;
constexpr double kCurrentRef = 1.3790930823955807;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mwall::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("physical params default to natural units and reject non-positive values") {
  const PhysicalParams p;
  CHECK(p.hbar() == 1.0);
  CHECK(p.mass() == 1.0);
  CHECK_THROWS_AS(PhysicalParams(0.0, 1.0), Error);
  CHECK_THROWS_AS(PhysicalParams(1.0, -2.0), Error);
}

TEST_CASE("reflected wavenumber") {
  CHECK(reflected_wavenumber(1.0, 0.0) == -1.0);
  CHECK(reflected_wavenumber(2.0, 3.0) == 4.0);
  CHECK(reflected_wavenumber(5.0, 2.0) == -1.0);
  CHECK(code_of([] { reflected_wavenumber(0.0, 1.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { reflected_wavenumber(-3.0, 1.0); }) == ErrorCode::DomainError);

  // hbar and m enter as 2 m v / hbar.
  CHECK(reflected_wavenumber(1.0, 0.5, PhysicalParams(2.0, 3.0)) == doctest::Approx(-1.0 + 1.5));
}

TEST_CASE("reflection coefficient is exactly -1") {
  const auto r = reflection_coefficient();
  CHECK(r == std::complex<double>(-1.0, 0.0));
  CHECK(std::abs(r) == 1.0);
  CHECK(std::arg(r) == doctest::Approx(pi));
}

TEST_CASE("dispersion") {
  CHECK(dispersion(0.0) == 0.0);
  CHECK(dispersion(2.0) == 2.0);
  CHECK(dispersion(-3.7) == dispersion(3.7));
  CHECK(dispersion(3.7) == doctest::Approx(6.845).epsilon(1e-12));
  CHECK(dispersion(2.0, PhysicalParams(3.0, 4.0)) == doctest::Approx(1.5));
}

TEST_CASE("reflected phase velocity") {
  CHECK(reflected_phase_velocity(2.0, 0.0) == -1.0);
  CHECK(reflected_phase_velocity(2.0, 1.0) == 0.0);
  CHECK(reflected_phase_velocity(2.0, 3.0) == 2.0);
  CHECK_THROWS_AS(reflected_phase_velocity(-1.0, 0.0), Error);

  const PhysicalParams p(0.7, 1.3);
  for (double v : {-2.0, 0.1, 4.0}) {
    CHECK(reflected_phase_velocity(3.0, v, p) ==
          doctest::Approx(p.hbar() / (2.0 * p.mass()) * reflected_wavenumber(3.0, v, p)));
  }
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(2.0, 0.5) == RegimeClass::CounterPropagating);
  CHECK(classify_regime(2.0, 1.0) == RegimeClass::ZeroReflectedWavenumber);
  CHECK(classify_regime(2.0, 1.5) == RegimeClass::CoPropagating);
  CHECK(classify_regime(2.0, 2.0) == RegimeClass::Degenerate);
  CHECK(classify_regime(2.0, 2.5) == RegimeClass::CoPropagatingFaster);
  CHECK(classify_regime(2.0, -7.0) == RegimeClass::CounterPropagating);
  CHECK_THROWS_AS(classify_regime(0.0, 1.0), Error);
  CHECK(to_string(RegimeClass::CoPropagating) == "CoPropagating");
}

TEST_CASE("regime labels partition the velocity axis [property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> kd(0.01, 10.0), frac(0.001, 0.999), far(0.001, 20.0);
  for (int i = 0; i < 500; ++i) {
    const double k = kd(rng);
    const double vc1 = k / 2.0, vc2 = k;
    CHECK(classify_regime(k, vc1 - far(rng)) == RegimeClass::CounterPropagating);
    CHECK(classify_regime(k, vc1) == RegimeClass::ZeroReflectedWavenumber);
    CHECK(classify_regime(k, vc1 + frac(rng) * (vc2 - vc1)) == RegimeClass::CoPropagating);
    CHECK(classify_regime(k, vc2) == RegimeClass::Degenerate);
    CHECK(classify_regime(k, vc2 + far(rng)) == RegimeClass::CoPropagatingFaster);
    // k' changes sign exactly at hbar k / 2m.
    CHECK(reflected_wavenumber(k, vc1) == 0.0);
    CHECK(reflected_wavenumber(k, std::nextafter(vc1, -100.0)) < 0.0);
    CHECK(reflected_wavenumber(k, std::nextafter(vc1, 100.0)) > 0.0);
  }
}

TEST_CASE("scattering instance derives every quantity") {
  const PhysicalParams p(1.5, 0.5);
  const PlaneWaveScattering s(2.0, 0.7, p);
  CHECK(s.k_prime() == doctest::Approx(-2.0 + 2.0 * 0.5 * 0.7 / 1.5));
  CHECK(s.omega() == doctest::Approx(1.5 * 4.0 / 1.0));
  CHECK(s.omega_prime() == doctest::Approx(1.5 * s.k_prime() * s.k_prime()));
  CHECK(s.r() == std::complex<double>(-1.0, 0.0));
  CHECK(s.k_bar() == doctest::Approx(2.0 - 0.5 * 0.7 / 1.5));
  CHECK(s.regime() == classify_regime(2.0, 0.7, p));
  CHECK_THROWS_AS(PlaneWaveScattering(-1.0, 0.0), Error);
}

TEST_CASE("total wavefunction") {
  SUBCASE("static wall standing wave") {
    const PlaneWaveScattering s(2.0, 0.0);
    const cplx psi = total_wavefunction(pi / 4.0, 0.0, s);
    CHECK(psi.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(psi.imag() == doctest::Approx(2.0));
  }
  SUBCASE("agrees with the two-exponential oracle") {
    const PlaneWaveScattering s(2.0, 1.5, PhysicalParams(1.2, 0.8));
    for (double x : {-3.0, -0.4, 0.0}) {
      for (double t : {-0.5, 0.0, 0.7}) {
        CHECK(std::abs(total_wavefunction(x, t, s) - oracle::plane_wave_pair(x, t, 2.0, 1.5, 1.2, 0.8)) < 1e-13);
      }
    }
  }
  SUBCASE("matches the lifted wall-frame wave at one point") {
    const PlaneWaveScattering s(2.0, 1.5);
    const double x = -3.0, t = 0.7;
    const cplx lifted = galilean_phase(x, t, s.v()) * comoving_wavefunction(x - s.v() * t, t, s.k_bar());
    CHECK(std::abs(total_wavefunction(x, t, s) - lifted) < 1e-12);
  }
}

TEST_CASE("wall boundary condition holds to roundoff [property]") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> kd(0.0, 10.0), vd(-10.0, 10.0), td(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    double k = 0.0;
    while (k == 0.0) k = kd(rng);
    const PlaneWaveScattering s(k, vd(rng));
    const double t = td(rng);
    worst = std::max(worst, std::abs(total_wavefunction(s.v() * t, t, s)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("comoving wavefunction") {
  CHECK(comoving_wavefunction(0.0, 3.3, 1.7) == cplx{});
  CHECK(std::abs(comoving_wavefunction(0.8, 1.1, 0.0)) == 0.0);
  const cplx top = comoving_wavefunction(pi / 2.0, 0.0, 1.0);
  CHECK(top.real() == doctest::Approx(0.0));
  CHECK(top.imag() == doctest::Approx(2.0));
}

TEST_CASE("galilean lift") {
  const Grid1D grid(-10.0, 0.0, 101);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> values(grid.n());
  for (auto& z : values) z = {u(rng), u(rng)};
  const FieldSnapshot snap(0.8, Frame::Comoving, 1.3, grid, values);

  SUBCASE("null boost is the identity") {
    const auto lab = galilean_lift(snap, 0.0);
    CHECK(lab.frame == Frame::Lab);
    CHECK(lab.grid == grid);
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(std::abs(lab.values[i] - values[i]) == 0.0);
  }
  SUBCASE("coordinates shift by v t and modulus is kept") {
    const auto lab = galilean_lift(snap, 1.3);
    CHECK(lab.grid.x_min() == doctest::Approx(-10.0 + 1.3 * 0.8));
    CHECK(lab.grid.spacing() == grid.spacing());
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(std::abs(lab.values[i]) == doctest::Approx(std::abs(values[i])).epsilon(1e-14));
    }
  }
  SUBCASE("round trip through the opposite boost") {
    for (double v : {-4.0, 0.3, 2.5}) {
      FieldSnapshot lab = galilean_lift(snap, v);
      lab.frame = Frame::Comoving;
      const auto back = galilean_lift(lab, -v);
      for (std::size_t i = 0; i < values.size(); ++i) CHECK(std::abs(back.values[i] - values[i]) < 1e-12);
      CHECK(back.grid.x_min() == doctest::Approx(grid.x_min()));
    }
  }
  SUBCASE("lab input is rejected") {
    const auto lab = galilean_lift(snap, 1.0);
    CHECK(code_of([&] { galilean_lift(lab, 1.0); }) == ErrorCode::FrameMismatch);
  }
}

TEST_CASE("lifted wall-frame standing wave equals the lab field [property]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> kd(0.05, 5.0), vd(-5.0, 5.0), td(-3.0, 3.0), ld(2.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PhysicalParams p(std::uniform_real_distribution<double>(0.5, 2.0)(rng),
                           std::uniform_real_distribution<double>(0.5, 2.0)(rng));
    const PlaneWaveScattering s(kd(rng), vd(rng), p);
    const double t = td(rng);
    const Grid1D grid(-ld(rng), 0.0, 100);
    const auto lifted = galilean_lift(sample_comoving(grid, t, s.k_bar(), s.v(), p), s.v(), p);
    const auto direct = sample_lab(lifted.grid, t, s);
    for (std::size_t j = 0; j < grid.n(); ++j) worst = std::max(worst, std::abs(lifted.values[j] - direct.values[j]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("probability density") {
  const PlaneWaveScattering s(2.0, 1.5);
  CHECK(probability_density(1.5 * 0.4, 0.4, s) == doctest::Approx(0.0).epsilon(1e-30));
  // (k - m v / hbar)(x - v t) = pi / 2
  CHECK(probability_density(pi, 0.0, s) == doctest::Approx(4.0));
  const double rho = probability_density(-1.0, 0.0, s);
  CHECK(rho == doctest::Approx(kDensityRef).epsilon(1e-14));
  CHECK(rho == doctest::Approx(std::norm(oracle::plane_wave_pair(-1.0, 0.0, 2.0, 1.5))).epsilon(1e-13));
}

TEST_CASE("density equals |psi|^2 and lies in [0, 4] [property]") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> kd(0.1, 6.0), vd(-6.0, 6.0), xd(-10.0, 0.0), td(-2.0, 2.0);
  for (int i = 0; i < 300; ++i) {
    const PlaneWaveScattering s(kd(rng), vd(rng));
    const double x = xd(rng), t = td(rng);
    const double rho = probability_density(x, t, s);
    CHECK(rho >= 0.0);
    CHECK(rho <= 4.0);
    CHECK(rho == doctest::Approx(std::norm(total_wavefunction(x, t, s))).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("probability current") {
  const PlaneWaveScattering still(2.0, 0.0);
  for (double x : {-3.0, -1.0, -0.2}) CHECK(probability_current(x, 0.4, still) == 0.0);
  const PlaneWaveScattering s(2.0, 1.5);
  CHECK(probability_current(1.5 * 2.0, 2.0, s) == doctest::Approx(0.0).epsilon(1e-30));

  const double j = probability_current(-1.0, 0.0, s);
  CHECK(j == doctest::Approx(kCurrentRef).epsilon(1e-14));
  // Independent route: extrapolated finite-difference current of the two plane waves.
  const double fd = oracle::richardson_current([](double x) { return oracle::plane_wave_pair(x, 0.0, 2.0, 1.5); },
                                               -1.0, 1e-3);
  CHECK(fd == doctest::Approx(kCurrentRef).epsilon(1e-9));
}

TEST_CASE("current factorizes as v times density [property]") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> kd(0.1, 10.0), vd(-10.0, 10.0), xd(-20.0, 5.0), td(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const PlaneWaveScattering s(kd(rng), vd(rng));
    const double x = xd(rng), t = td(rng);
    const double expected = s.v() * probability_density(x, t, s);
    const double j = probability_current(x, t, s);
    CHECK(std::abs(j - expected) <= 1e-12 * std::abs(expected));
  }
}

TEST_CASE("discrete current") {
  SUBCASE("real field carries no current") {
    const Grid1D grid(0.0, 5.0, 51);
    std::vector<cplx> values(grid.n());
    for (std::size_t i = 0; i < grid.n(); ++i) values[i] = std::cos(1.3 * grid.node(i)) + 0.2;
    const auto j = discrete_current(FieldSnapshot(0.0, Frame::Lab, 0.0, grid, values));
    for (double ji : j) CHECK(ji == 0.0);
  }
  SUBCASE("unit plane wave, second order in h") {
    auto max_error = [](std::size_t n) {
      const Grid1D grid(0.0, 10.0, n);
      std::vector<cplx> values(grid.n());
      for (std::size_t i = 0; i < grid.n(); ++i) values[i] = std::polar(1.0, grid.node(i));
      const auto j = discrete_current(FieldSnapshot(0.0, Frame::Lab, 0.0, grid, values));
      double e = 0.0;
      for (double ji : j) e = std::max(e, std::abs(ji - 1.0));
      return e;
    };
    const double e1 = max_error(201), e2 = max_error(401);
    CHECK(e1 < 1e-3);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("converges to the closed-form current of the reflected field") {
    const PlaneWaveScattering s(2.0, 1.5);
    auto error_at = [&](std::size_t n) {
      const Grid1D grid(-10.0, 0.0, n);
      const auto j = discrete_current(sample_lab(grid, 0.0, s));
      double e = 0.0;
      for (std::size_t i = 0; i < grid.n(); ++i) e = std::max(e, std::abs(j[i] - probability_current(grid.node(i), 0.0, s)));
      return e;
    };
    const double coarse = error_at(401), fine = error_at(801);
    CHECK(coarse < 1e-2);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("too few nodes") {
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 2), Error);
  }
}

TEST_CASE("drift velocity") {
  CHECK(drift_velocity(-1.0, 0.0, PlaneWaveScattering(2.0, 1.5)) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(drift_velocity(pi / 8.0, 0.0, PlaneWaveScattering(2.0, 0.0)) == 0.0);
  const PlaneWaveScattering s(2.0, 1.5);
  CHECK(code_of([&] { drift_velocity(1.5 * 0.3, 0.3, s); }) == ErrorCode::NodeSingularity);
  // Tolerance is configurable.
  CHECK_NOTHROW(drift_velocity(-1.0, 0.0, s, 0.5));
  CHECK_THROWS_AS(drift_velocity(-1.0, 0.0, s, 0.95), Error);
}

TEST_CASE("drift velocity equals the wall velocity away from nodes [property]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> kd(0.1, 10.0), vd(-10.0, 10.0), xd(-20.0, 0.0), td(-5.0, 5.0);
  int used = 0;
  for (int i = 0; i < 2000; ++i) {
    const PlaneWaveScattering s(kd(rng), vd(rng));
    const double x = xd(rng), t = td(rng);
    if (probability_density(x, t, s) <= 1e-6) continue;
    ++used;
    CHECK(std::abs(drift_velocity(x, t, s) - s.v()) < 1e-9);
  }
  CHECK(used > 1900);
}

TEST_CASE("schrodinger residual") {
  const PlaneWaveScattering s(2.0, 1.5);
  auto field = [&](double x, double t) { return total_wavefunction(x, t, s); };

  SUBCASE("exact solution has a small residual") {
    CHECK(std::abs(schrodinger_residual(field, -2.0, 0.3, 1e-3, 1e-3)) < 1e-4);
  }
  SUBCASE("second-order convergence") {
    const double r1 = std::abs(schrodinger_residual(field, -2.0, 0.3, 1e-2, 1e-2));
    const double r2 = std::abs(schrodinger_residual(field, -2.0, 0.3, 5e-3, 5e-3));
    const double r3 = std::abs(schrodinger_residual(field, -2.0, 0.3, 2.5e-3, 2.5e-3));
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
    CHECK(r2 / r3 == doctest::Approx(4.0).epsilon(0.2));
    // The example's own step: halving from 1e-3.
    const double a = std::abs(schrodinger_residual(field, -2.0, 0.3, 1e-3, 1e-3));
    const double b = std::abs(schrodinger_residual(field, -2.0, 0.3, 5e-4, 5e-4));
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("wrong frequency is detected") {
    const double k = 2.0;
    auto wrong = [&](double x, double t) {
      return std::polar(1.0, k * x - (dispersion(k) + 1.0) * t);
    };
    CHECK(std::abs(schrodinger_residual(wrong, -2.0, 0.3, 1e-3, 1e-3)) == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("hbar and mass are honoured") {
    const PhysicalParams p(0.6, 2.5);
    const PlaneWaveScattering sp(3.0, 0.4, p);
    auto f = [&](double x, double t) { return total_wavefunction(x, t, sp); };
    CHECK(std::abs(schrodinger_residual(f, -1.0, 0.2, 1e-3, 1e-3, p)) < 1e-4);
    CHECK(std::abs(schrodinger_residual(f, -1.0, 0.2, 1e-3, 1e-3)) > 0.1);
  }
}

TEST_CASE("degenerate velocity annihilates the field [property]") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> kd(0.1, 10.0), xd(-50.0, 50.0), td(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double k = kd(rng);
    const PlaneWaveScattering s(k, k);
    CHECK(s.regime() == RegimeClass::Degenerate);
    CHECK(std::abs(total_wavefunction(xd(rng), td(rng), s)) < 1e-12);
  }
}
