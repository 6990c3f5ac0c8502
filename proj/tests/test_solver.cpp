#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mwall/error.hpp"
#include "mwall/solver.hpp"
#include "mwall/spectral.hpp"
#include "oracles.hpp"

using namespace mwall;
using std::numbers::pi;

namespace {

double density_mean(const FieldSnapshot& s) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.grid.n(); ++i) {
    const double p = std::norm(s.values[i]);
    num += p * s.grid.node(i);
    den += p;
  }
  return num / den;
}

double density_width(const FieldSnapshot& s) {
  const double mean = density_mean(s);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s.grid.n(); ++i) {
    const double p = std::norm(s.values[i]);
    const double d = s.grid.node(i) - mean;
    num += p * d * d;
    den += p;
  }
  return std::sqrt(num / den);
}

FieldSnapshot random_field(const Grid1D& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> values(grid.n());
  for (std::size_t i = 1; i + 1 < grid.n(); ++i) values[i] = {g(rng), g(rng)};
  return FieldSnapshot(0.0, Frame::Comoving, 0.0, grid, values);
}

}  // namespace

TEST_CASE("comoving grid and step budget") {
  const Grid1D g = comoving_grid(120.0, 4096);
  CHECK(g.x_min() == -120.0);
  CHECK(g.x_max() == 0.0);
  CHECK_THROWS_AS(comoving_grid(0.0, 10), Error);

  const WavepacketSpec spec{-30.0, 2.0, 5.0};
  CHECK(comoving_wavenumber(spec, 3.0) == 2.0);
  CHECK(recommended_steps(spec, 3.0, 0.002) == 15000);
  CHECK(recommended_steps(spec, 5.0, 0.002) == 0);
}

TEST_CASE("gaussian initial state") {
  const Grid1D grid = comoving_grid(60.0, 1201);
  SUBCASE("normalized, peaked at x0, zero endpoints") {
    const auto s = init_gaussian(grid, {-20.0, 2.0, 5.0}, 0.0);
    CHECK(s.frame == Frame::Comoving);
    CHECK(s.time == 0.0);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.values.front() == cplx{});
    CHECK(s.values.back() == cplx{});
    std::size_t peak = 0;
    for (std::size_t i = 0; i < grid.n(); ++i) if (std::abs(s.values[i]) > std::abs(s.values[peak])) peak = i;
    CHECK(peak == grid.nearest(-20.0));
  }
  SUBCASE("wall outrunning the packet is rejected") {
    try {
      init_gaussian(grid, {-20.0, 2.0, 5.0}, 5.0);
      FAIL("expected NoCollision");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoCollision);
      CHECK(std::string(e.what()).find("v < hbar k0 / m = 5") != std::string::npos);
    }
    CHECK_THROWS_AS(init_gaussian(grid, {-20.0, 2.0, 5.0}, 7.0), Error);
  }
  SUBCASE("wall-frame wavenumber seen by the spectrum") {
    const auto s = init_gaussian(grid, {-20.0, 2.0, 5.0}, 3.0);
    CHECK(spectral_centroid(s, grid.x_min(), 0.0) == doctest::Approx(2.0).epsilon(0.01));
  }
  SUBCASE("clearance on both sides") {
    auto code = [&](WavepacketSpec spec) {
      try {
        init_gaussian(grid, spec, 0.0);
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::InvalidArgument;
    };
    CHECK(code({-7.0, 2.0, 5.0}) == ErrorCode::ClearanceViolation);
    CHECK(code({-53.0, 2.0, 5.0}) == ErrorCode::ClearanceViolation);
    CHECK_NOTHROW(init_gaussian(grid, {-9.0, 2.0, 5.0}, 0.0));
    CHECK_THROWS_AS(init_gaussian(grid, {-20.0, 0.0, 5.0}, 0.0), Error);
  }
}

TEST_CASE("single propagator step") {
  const Grid1D grid = comoving_grid(20.0, 401);

  SUBCASE("zero field stays zero") {
    const FieldSnapshot zero(0.0, Frame::Comoving, 0.0, grid, std::vector<cplx>(grid.n()));
    const auto next = cn_step(zero, 0.01);
    for (const auto& z : next.values) CHECK(z == cplx{});
    CHECK(next.time == doctest::Approx(0.01));
  }
  SUBCASE("norm preserved for arbitrary fields") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto f = random_field(grid, seed);
      for (double dt : {1e-4, 0.01, 1.0}) {
        const auto next = cn_step(f, dt);
        CHECK(std::abs(next.norm() - f.norm()) < 1e-13 * f.norm());
        CHECK(next.values.front() == cplx{});
        CHECK(next.values.back() == cplx{});
      }
    }
  }
  SUBCASE("Dirichlet eigenmode picks up a unit phase") {
    const double L = 20.0;
    for (int j : {1, 3, 17}) {
      std::vector<cplx> values(grid.n());
      for (std::size_t i = 1; i + 1 < grid.n(); ++i) values[i] = 0.7 * std::sin(pi * j * grid.node(i) / L);
      const FieldSnapshot mode(0.0, Frame::Comoving, 0.0, grid, values);
      const auto next = cn_step(mode, 0.05);
      const std::size_t probe = grid.nearest(-L / (2.0 * j));
      const cplx factor = next.values[probe] / values[probe];
      CHECK(std::abs(factor) == doctest::Approx(1.0).epsilon(1e-12));
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.n(); ++i) worst = std::max(worst, std::abs(next.values[i] - factor * values[i]));
      CHECK(worst < 1e-12);
    }
  }
  SUBCASE("preconditions") {
    auto f = random_field(grid, 9);
    f.values.back() = 1e-300;
    CHECK_THROWS_AS(cn_step(f, 0.01), Error);
    auto lab = random_field(grid, 9);
    lab.frame = Frame::Lab;
    CHECK_THROWS_AS(cn_step(lab, 0.01), Error);
    CHECK_THROWS_AS(cn_step(random_field(grid, 9), 0.0), Error);
    CrankNicolson cn(grid, 0.01);
    std::vector<cplx> wrong(grid.n() + 1);
    CHECK_THROWS_AS(cn.step(wrong), Error);
  }
}

TEST_CASE("evolution bookkeeping") {
  const Grid1D grid = comoving_grid(60.0, 601);
  const auto init = init_gaussian(grid, {-30.0, 2.0, 2.0}, 0.0);

  SUBCASE("zero steps returns only the initial snapshot") {
    const auto r = evolve(init, {grid, 0.01, 0, 1, 0.0, {}});
    REQUIRE(r.snapshots.size() == 1);
    CHECK(r.snapshots[0].values == init.values);
    CHECK(r.norm_drift == 0.0);
  }
  SUBCASE("stride and final state") {
    const auto r = evolve(init, {grid, 0.01, 25, 10, 0.0, {}});
    REQUIRE(r.snapshots.size() == 4);
    CHECK(r.snapshots[1].time == doctest::Approx(0.10));
    CHECK(r.snapshots[2].time == doctest::Approx(0.20));
    CHECK(r.snapshots[3].time == doctest::Approx(0.25));
    CHECK_FALSE(r.boundary_warning);
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(evolve(init, {grid, 0.01, 5, 0, 0.0, {}}), Error);
    CHECK_THROWS_AS(evolve(init, {comoving_grid(60.0, 602), 0.01, 5, 1, 0.0, {}}), Error);
  }
}

TEST_CASE("free packet follows the closed-form spreading law") {
  const Grid1D grid = comoving_grid(80.0, 3201);
  const double k = 2.0, sigma = 2.0, x0 = -50.0, dt = 0.002;
  const auto init = init_gaussian(grid, {x0, sigma, k}, 0.0);
  const std::size_t steps = 5000;  // t = 10
  const auto r = evolve(init, {grid, dt, steps, steps, 0.0, {}});
  const auto& last = r.snapshots.back();
  const double t = last.time;
  CHECK(t == doctest::Approx(10.0));
  CHECK(density_mean(last) - x0 == doctest::Approx(k * t).epsilon(0.02));
  CHECK(density_width(last) == doctest::Approx(oracle::free_gaussian_width(t, sigma)).epsilon(0.02));
  CHECK(density_width(init) == doctest::Approx(sigma).epsilon(1e-3));
  CHECK(r.norm_drift < 1e-9);
}

TEST_CASE("field converges to the free-packet oracle at second order") {
  auto error_for = [](std::size_t n) {
    const Grid1D grid = comoving_grid(60.0, n);
    const double h = grid.spacing();
    const double dt = 0.1 * h * h;
    const auto steps = static_cast<std::size_t>(std::llround(2.0 / dt));
    auto init = init_gaussian(grid, {-30.0, 2.0, 2.0}, 0.0);
    // Oracle initial data carries the continuum amplitude, not the discrete norm.
    for (std::size_t i = 1; i + 1 < grid.n(); ++i) init.values[i] = oracle::free_gaussian(grid.node(i), 0.0, -30.0, 2.0, 2.0);
    const auto r = evolve(init, {grid, dt, steps, steps, 0.0, {}});
    const auto& last = r.snapshots.back();
    double err = 0.0;
    for (std::size_t i = 0; i < grid.n(); ++i) {
      err += std::norm(last.values[i] - oracle::free_gaussian(grid.node(i), last.time, -30.0, 2.0, 2.0));
    }
    return std::sqrt(err * h);
  };
  const double e1 = error_for(601), e2 = error_for(1201);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("reflection off the static wall mirrors the spectrum") {
  const Grid1D grid = comoving_grid(60.0, 1201);
  const auto init = init_gaussian(grid, {-20.0, 2.0, 5.0}, 3.0);
  const double before = spectral_centroid(init);
  const auto r = evolve(init, {grid, 0.005, 4000, 4000, 3.0, {}});  // t = 20
  const auto& last = r.snapshots.back();
  CHECK(before == doctest::Approx(2.0).epsilon(0.02));
  CHECK(spectral_centroid(last, grid.x_min(), 0.0) == doctest::Approx(-2.0).epsilon(0.02));
  CHECK(positive_wavenumber_fraction(last) < 0.01);
  for (const auto& s : r.snapshots) CHECK(s.values.back() == cplx{});
  CHECK(r.norm_drift < 1e-9);
}

TEST_CASE("lifting to the lab frame") {
  const Grid1D grid = comoving_grid(60.0, 1201);
  const double v = 1.25;
  auto s = init_gaussian(grid, {-20.0, 2.0, 4.0}, v);
  s.time = 2.0;

  SUBCASE("null boost") {
    const auto lab = to_lab_frame(s, 0.0);
    CHECK(lab.frame == Frame::Lab);
    CHECK(lab.grid == grid);
    CHECK(lab.values == s.values);
  }
  SUBCASE("density is unchanged") {
    const auto a = s.density();
    const auto b = to_lab_frame(s, v).density();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-14);
  }
  SUBCASE("spectrum shifts by m v / hbar") {
    const PhysicalParams p(1.0, 2.0);
    const auto lab = to_lab_frame(s, v, p);
    const double resolution = 2.0 * pi / grid.length();
    CHECK(std::abs(spectral_centroid(lab) - (spectral_centroid(s) + 2.0 * v)) < resolution);
    CHECK(lab.grid.x_min() == doctest::Approx(grid.x_min() + v * 2.0));
  }
}

TEST_CASE("backward steps undo forward steps") {
  const Grid1D grid = comoving_grid(60.0, 1201);
  const auto init = init_gaussian(grid, {-20.0, 2.0, 3.0}, 0.0);
  const auto fwd = evolve(init, {grid, 0.005, 2000, 2000, 0.0, {}}).snapshots.back();
  const auto back = evolve(fwd, {grid, -0.005, 2000, 2000, 0.0, {}}).snapshots.back();
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n(); ++i) worst = std::max(worst, std::abs(back.values[i] - init.values[i]));
  CHECK(worst < 1e-8);
  CHECK(back.time == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("far-boundary contamination is flagged") {
  const Grid1D grid = comoving_grid(20.0, 401);
  const auto init = init_gaussian(grid, {-10.0, 1.5, 5.0}, 0.0);
  const auto r = evolve(init, {grid, 0.002, 3000, 3000, 0.0, {}});
  CHECK(r.boundary_warning);
  CHECK(r.boundary_fraction > kBoundaryWarningFraction);
  CHECK(far_boundary_fraction(init) < 1e-9);
}
