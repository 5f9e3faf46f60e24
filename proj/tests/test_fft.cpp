#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>
#include <vector>

#include "slitsim/fft.hpp"
#include "slitsim/rng.hpp"

using namespace slitsim;

namespace {

// Independent O(n^2) reference transform.
std::vector<Complex> naive_dft(const std::vector<Complex>& in, bool inverse) {
  const std::size_t n = in.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> out(n, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * std::numbers::pi *
                         static_cast<double>(k * j % n) /
                         static_cast<double>(n);
      out[k] += in[j] * Complex(std::cos(ang), std::sin(ang));
    }
    if (inverse) out[k] /= static_cast<double>(n);
  }
  return out;
}

std::vector<Complex> random_vector(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Complex> v(n);
  for (auto& c : v)
    c = Complex(rng.next_uniform(-1.0, 1.0), rng.next_uniform(-1.0, 1.0));
  return v;
}

double max_abs_diff(const std::vector<Complex>& a,
                    const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("radix-2 transform matches the naive DFT", "[fft]") {
  for (std::size_t n : {16UL, 64UL, 256UL}) {
    auto in = random_vector(n, 7 + n);
    auto fast = in;
    fft_radix2(fast, false);
    CHECK(max_abs_diff(fast, naive_dft(in, false)) < 1e-11);
  }
}

TEST_CASE("radix-2 inverse undoes the forward transform", "[fft]") {
  auto in = random_vector(1024, 11);
  auto a = in;
  fft_radix2(a, false);
  fft_radix2(a, true);
  CHECK(max_abs_diff(a, in) < 1e-13);
}

TEST_CASE("radix-2 rejects non-power-of-two lengths", "[fft]") {
  std::vector<Complex> v(48, Complex(1.0, 0.0));
  CHECK_THROWS_AS(fft_radix2(v, false), DomainError);
}

TEST_CASE("arbitrary-length transform matches the naive DFT", "[fft]") {
  for (std::size_t n : {48UL, 100UL, 401UL}) {
    auto in = random_vector(n, 100 + n);
    CHECK(max_abs_diff(fft_any(in, false), naive_dft(in, false)) < 1e-10);
    CHECK(max_abs_diff(fft_any(in, true), naive_dft(in, true)) < 1e-10);
  }
}

TEST_CASE("transform preserves energy (Parseval)", "[fft]") {
  auto in = random_vector(512, 23);
  double time_energy = 0.0;
  for (const auto& c : in) time_energy += std::norm(c);
  auto a = in;
  fft_radix2(a, false);
  double freq_energy = 0.0;
  for (const auto& c : a) freq_energy += std::norm(c);
  CHECK(freq_energy / static_cast<double>(in.size()) ==
        Catch::Approx(time_energy).epsilon(1e-12));
}
