#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "revlab/fan.hpp"
#include "revlab/kernels/fan_step.hpp"
#include "revlab/surface.hpp"

using namespace revlab;
using kernels::Isa;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Lanes {
  std::vector<double> t, theta, u, w, h;
  kernels::FanLanes view() { return {t, theta, u, w, h}; }
};

Lanes random_lanes(std::size_t n, std::uint64_t seed, double t_hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Lanes L;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 1e-3 + t_hi * U(rng);
    const double phi = 3.14159 * (2.0 * U(rng) - 1.0);
    L.t.push_back(t);
    L.theta.push_back(U(rng));
    L.u.push_back(std::cos(phi));
    L.w.push_back(std::sin(phi) / t);
    L.h.push_back(i % 7 == 3 ? 0.0 : 0.05 * U(rng));  // some idle lanes
  }
  return L;
}

}  // namespace

TEST_CASE("scalar reference is always available") {
  CHECK(kernels::isa_available(Isa::kScalar));
  CHECK(kernels::isa_name(Isa::kScalar) == "scalar");
}

TEST_CASE("AVX2 warp evaluation matches the scalar reference bit for bit") {
  if (!kernels::isa_available(Isa::kAvx2)) return;
  for (const char* name : {"hyperbolic", "paraboloid", "smoothed_cone", "spike"}) {
    CAPTURE(name);
    const SurfaceModel S = catalog(name);
    for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 1024u}) {
      std::vector<double> t(n);
      std::mt19937_64 rng(n);
      std::uniform_real_distribution<double> U(-1.0, 1.1 * S.t_max());  // odd extension and extrapolation too
      for (double& x : t) x = U(rng);
      std::vector<double> f0(n), fp0(n), f1(n), fp1(n);
      kernels::warp_eval(Isa::kScalar, S.table(), t, f0, fp0);
      kernels::warp_eval(Isa::kAvx2, S.table(), t, f1, fp1);
      CHECK(same_bits(f0, f1));
      CHECK(same_bits(fp0, fp1));
    }
  }
}

TEST_CASE("AVX2 fan step matches the scalar reference bit for bit") {
  if (!kernels::isa_available(Isa::kAvx2)) return;
  const SurfaceModel S = catalog("paraboloid");
  for (std::size_t n : {1u, 4u, 6u, 33u, 256u}) {
    Lanes a = random_lanes(n, 100 + n, 20.0), b = a;
    for (int step = 0; step < 50; ++step) {
      kernels::fan_rk4_step(Isa::kScalar, S.table(), a.view());
      kernels::fan_rk4_step(Isa::kAvx2, S.table(), b.view());
    }
    CHECK(same_bits(a.t, b.t));
    CHECK(same_bits(a.theta, b.theta));
    CHECK(same_bits(a.u, b.u));
    CHECK(same_bits(a.w, b.w));
  }
}

TEST_CASE("idle lanes are left untouched") {
  const SurfaceModel S = catalog("plane");
  Lanes a = random_lanes(8, 1, 5.0);
  for (double& h : a.h) h = 0.0;
  const Lanes before = a;
  kernels::fan_rk4_step(kernels::active_isa(), S.table(), a.view());
  CHECK(same_bits(a.t, before.t));
  CHECK(same_bits(a.w, before.w));
}

TEST_CASE("fan step conserves the Clairaut constant on the plane") {
  const SurfaceModel S = catalog("plane");
  Lanes a = random_lanes(16, 2, 5.0);
  std::vector<double> nu(16);
  for (std::size_t i = 0; i < 16; ++i) nu[i] = a.t[i] * a.t[i] * a.w[i];
  for (double& h : a.h) h = 1e-3;
  for (int k = 0; k < 100; ++k) kernels::fan_rk4_step(kernels::active_isa(), S.table(), a.view());
  for (std::size_t i = 0; i < 16; ++i) CHECK(a.t[i] * a.t[i] * a.w[i] == doctest::Approx(nu[i]).epsilon(1e-8));
}

TEST_CASE("fan scans agree across variants") {
  if (!kernels::isa_available(Isa::kAvx2)) return;
  const SurfaceModel S = catalog("smoothed_cone");
  std::vector<double> phis, targets{0.5, 1.5, 3.0};
  for (int i = 0; i < 37; ++i) phis.push_back(3.14159 * (i + 0.5) / 37);
  const FanScan a(S, 2.0, phis, targets, 40.0, Isa::kScalar);
  const FanScan b(S, 2.0, phis, targets, 40.0, Isa::kAvx2);
  for (std::size_t i = 0; i < phis.size(); ++i)
    for (std::size_t k = 0; k < targets.size(); ++k) {
      CHECK(a.hit(i, k).reached == b.hit(i, k).reached);
      CHECK(a.hit(i, k).t == b.hit(i, k).t);
      CHECK(a.hit(i, k).s == b.hit(i, k).s);
    }
}
