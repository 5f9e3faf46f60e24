#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "slitsim/constants.hpp"
#include "slitsim/grating.hpp"

using namespace slitsim;

namespace {

// odd sample count puts a sample exactly on the central slit axis
Grid1D odd_centered(double width, std::size_t n) {
  REQUIRE(n % 2 == 1);
  return Grid1D::centered(width, n);
}

}  // namespace

TEST_CASE("binary mask opens one window of the slit width", "[grating]") {
  const Grating g(2e-7, 1e-7, 0.0, 1, 0.0);
  const Grid1D grid = odd_centered(2.4e-7, 241);  // dx = 1 nm
  const auto mask = binary_mask(g, grid);

  double open_span = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    if (mask.amplitude[i] == 1.0) {
      open_span += grid.dx;
      CHECK(std::abs(grid.x(i)) <= 0.5 * g.slit_width + 0.5 * grid.dx);
    } else {
      CHECK(mask.amplitude[i] == 0.0);
      CHECK(std::abs(grid.x(i)) >= 0.5 * g.slit_width - 0.5 * grid.dx);
    }
    CHECK(mask.phase[i] == 0.0);
  }
  CHECK(open_span == Catch::Approx(g.slit_width).margin(2.0 * grid.dx));
}

TEST_CASE("binary mask open fraction over one period is the duty cycle",
          "[grating]") {
  const Grating g(1e-6, 4e-7, 0.0, 5, 0.0);
  const Grid1D grid = Grid1D::centered(8e-6, 2048);
  const auto mask = binary_mask(g, grid);

  // one interior period centered on the middle slit
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    if (std::abs(grid.x(i)) <= 0.5 * g.period) {
      sum += mask.amplitude[i];
      ++count;
    }
  }
  const double open_fraction = sum / static_cast<double>(count);
  CHECK(open_fraction ==
        Catch::Approx(g.slit_width / g.period).margin(2.0 / static_cast<double>(count)));
}

TEST_CASE("binary mask produces one window per slit", "[grating]") {
  const Grating g(1e-6, 3e-7, 0.0, 3, 0.0);
  const Grid1D grid = Grid1D::centered(6e-6, 1536);
  const auto mask = binary_mask(g, grid);
  std::size_t openings = 0;
  for (std::size_t i = 1; i < grid.n; ++i)
    if (mask.amplitude[i] == 1.0 && mask.amplitude[i - 1] == 0.0) ++openings;
  CHECK(openings == 3);
}

TEST_CASE("binary mask enforces span and resolution guards", "[grating]") {
  const Grating g(1e-6, 3e-7, 0.0, 3, 0.0);
  CHECK_THROWS_AS(binary_mask(g, Grid1D::centered(2e-6, 1024)), ConfigError);
  CHECK_THROWS_AS(binary_mask(g, Grid1D::centered(6e-6, 64)), ConfigError);
}

TEST_CASE("mask amplitude and phase repeat with the grating period",
          "[grating]") {
  const Grating g(1e-6, 5e-7, 4e-7, 5, 8e-49);
  const std::size_t samples_per_period = 64;
  const Grid1D grid =
      Grid1D::centered(8e-6, 8 * samples_per_period);  // dx = d/64 exactly
  const auto mask = vdw_phase_mask(g, 180.0, grid);

  // interior samples at least one period from the outermost slits
  for (std::size_t i = 0; i < grid.n - samples_per_period; ++i) {
    const double x = grid.x(i);
    if (std::abs(x) > 1.4e-6 || std::abs(x + g.period) > 1.4e-6) continue;
    CHECK(mask.amplitude[i] == mask.amplitude[i + samples_per_period]);
    CHECK(mask.phase[i] ==
          Catch::Approx(mask.phase[i + samples_per_period]).epsilon(1e-12).margin(1e-300));
  }
}

TEST_CASE("wall phase at the slit center matches the direct formula",
          "[grating]") {
  const double c3 = 1e-48, depth = 5e-7, v = 200.0, w = 5e-8, d = 2e-7;
  const Grating g(d, w, depth, 1, c3);
  const Grid1D grid = odd_centered(2.5e-7, 81);  // sample exactly at x = 0
  const auto mask = vdw_phase_mask(g, v, grid);

  const std::size_t center = grid.n / 2;
  REQUIRE(grid.x(center) == 0.0);
  REQUIRE(mask.amplitude[center] == 1.0);
  const double half = 0.5 * w;
  const double expected = c3 * depth / (constants::hbar * v) * 2.0 /
                          (half * half * half);
  CHECK(mask.phase[center] == Catch::Approx(expected).epsilon(1e-12));
  CHECK(mask.phase[center] == Catch::Approx(3.0344).epsilon(1e-3));
}

TEST_CASE("c3 = 0 gives exactly the binary mask", "[grating]") {
  const Grating g(1e-6, 5e-7, 4e-7, 3, 0.0);
  const Grid1D grid = Grid1D::centered(4e-6, 1024);
  const auto plain = binary_mask(g, grid);
  const auto vdw = vdw_phase_mask(g, 200.0, grid);
  for (std::size_t i = 0; i < grid.n; ++i) {
    CHECK(vdw.amplitude[i] == plain.amplitude[i]);
    CHECK(vdw.phase[i] == 0.0);
  }
}

TEST_CASE("wall phase is symmetric about each slit center", "[grating]") {
  const Grating g(1e-6, 5e-7, 4e-7, 3, 1e-48);
  const Grid1D grid = Grid1D::centered(4e-6, 4096);
  const auto mask = vdw_phase_mask(g, 200.0, grid);
  for (std::size_t i = 0; i < grid.n / 2; ++i) {
    const std::size_t j = grid.n - 1 - i;  // mirror sample, x_j = -x_i exactly
    CHECK(mask.amplitude[i] == mask.amplitude[j]);
    if (mask.amplitude[i] > 0.0)
      CHECK(mask.phase[i] == Catch::Approx(mask.phase[j]).epsilon(1e-12));
  }
}

TEST_CASE("wall phase scales linearly in c3 and inversely in velocity",
          "[grating]") {
  const Grid1D grid = Grid1D::centered(4e-6, 2048);
  const Grating g1(1e-6, 5e-7, 4e-7, 3, 1e-48);
  const Grating g2(1e-6, 5e-7, 4e-7, 3, 2e-48);
  const auto m1 = vdw_phase_mask(g1, 200.0, grid);
  const auto m2 = vdw_phase_mask(g2, 200.0, grid);
  const auto m1_fast = vdw_phase_mask(g1, 400.0, grid);
  for (std::size_t i = 0; i < grid.n; ++i) {
    if (m1.amplitude[i] == 0.0) continue;
    CHECK(m2.phase[i] == Catch::Approx(2.0 * m1.phase[i]).epsilon(1e-12));
    CHECK(m1.phase[i] == Catch::Approx(2.0 * m1_fast.phase[i]).epsilon(1e-12));
  }
}

TEST_CASE("samples hugging a wall are blanked, not evaluated", "[grating]") {
  const Grating g(1e-6, 5e-7, 4e-7, 1, 1e-48);
  const Grid1D grid = Grid1D::centered(2e-6, 512);
  const auto mask = vdw_phase_mask(g, 200.0, grid);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double xi = 0.5 * g.slit_width - std::abs(x);
    if (xi >= 0.0 && xi < grid.dx) CHECK(mask.amplitude[i] == 0.0);
    if (mask.amplitude[i] > 0.0) CHECK(std::isfinite(mask.phase[i]));
  }
}

TEST_CASE("effective width matches the hand-evaluated deflection cutoff",
          "[grating]") {
  // xi_c = (3 C3 b / (m v^2 theta))^(1/4)
  const double c3 = 1e-48, depth = 5e-7, m = 1.39485e-24, v = 200.0,
               theta = 1e-4;
  const double w = 1.2e-7;
  const Grating g(2e-7, w, depth, 1, c3);
  const double xi_c = std::pow(3.0 * c3 * depth / (m * v * v * theta), 0.25);
  CHECK(xi_c == Catch::Approx(2.2769e-8).epsilon(1e-4));
  CHECK(effective_slit_width(g, m, v, theta) ==
        Catch::Approx(w - 2.0 * xi_c).epsilon(1e-12));
}

TEST_CASE("effective width is exact at c3 = 0 and clamps to a closed slit",
          "[grating]") {
  const Grating open_g(2e-7, 1.2e-7, 5e-7, 1, 0.0);
  CHECK(effective_slit_width(open_g, 1.4e-24, 200.0, 1e-4) == 1.2e-7);

  const Grating strong(2e-7, 2e-8, 5e-7, 1, 1e-46);
  CHECK(effective_slit_width(strong, 1.4e-24, 50.0, 1e-5) == 0.0);
}

TEST_CASE("effective width is monotone over a c3-velocity lattice",
          "[grating]") {
  const double depth = 5e-7, m = 1.39485e-24, theta = 1e-4, w = 1.2e-7;
  for (int ic = 0; ic < 10; ++ic) {
    for (int iv = 0; iv < 10; ++iv) {
      const double c3 = 1e-49 * static_cast<double>(ic + 1);
      const double v = 60.0 + 40.0 * static_cast<double>(iv);
      const Grating g(2e-7, w, depth, 1, c3);
      const double base = effective_slit_width(g, m, v, theta);
      const Grating g_more(2e-7, w, depth, 1, c3 * 1.3);
      CHECK(effective_slit_width(g_more, m, v, theta) <= base);
      CHECK(effective_slit_width(g, m, v * 1.3, theta) >= base);
    }
  }
}

TEST_CASE("effective width validates its inputs", "[grating]") {
  const Grating g(2e-7, 1e-7, 5e-7, 1, 1e-48);
  CHECK_THROWS_AS(effective_slit_width(g, 0.0, 200.0, 1e-4), DomainError);
  CHECK_THROWS_AS(effective_slit_width(g, 1e-24, 0.0, 1e-4), DomainError);
  CHECK_THROWS_AS(effective_slit_width(g, 1e-24, 200.0, 0.0), DomainError);
}
