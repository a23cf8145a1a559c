#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace revlab::kernels {

// Warp function resampled on a uniform grid t_k = k * dt, k = 0..n-1, for the
// vectorized fan integrator. Values between samples come from the cubic
// Hermite interpolant of (f, f'); f is extended oddly to t < 0 and continues
// along its last tangent line beyond the grid.
struct WarpTable {
  double dt = 0.0;
  double inv_dt = 0.0;
  std::vector<double> f;
  std::vector<double> fp;

  std::size_t size() const { return f.size(); }
};

// Structure-of-arrays state of a fan of geodesics in coordinates
// (t, theta, u = dt/ds, w = dtheta/ds). Lane i advances by h[i]; lanes with
// h[i] == 0 are left untouched.
struct FanLanes {
  std::span<double> t;
  std::span<double> theta;
  std::span<double> u;
  std::span<double> w;
  std::span<const double> h;
};

// Evaluates the cubic Hermite warp interpolant at each t; the reference
// definition every variant must reproduce.
void warp_eval_scalar(const WarpTable& table, std::span<const double> t, std::span<double> f,
                      std::span<double> fp);

// One classical RK4 step of t'' = f f' w^2, w' = -2 (f'/f) u w per lane.
void fan_rk4_step_scalar(const WarpTable& table, FanLanes lanes);

#if defined(REVLAB_BUILD_AVX2)
void warp_eval_avx2(const WarpTable& table, std::span<const double> t, std::span<double> f, std::span<double> fp);
void fan_rk4_step_avx2(const WarpTable& table, FanLanes lanes);
#endif

enum class Isa { kScalar, kAvx2 };

// Best variant supported by the running CPU and compiled into this build.
// REVLAB_SIMD=scalar in the environment forces the scalar reference.
Isa active_isa();
std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

void warp_eval(Isa isa, const WarpTable& table, std::span<const double> t, std::span<double> f,
               std::span<double> fp);
void fan_rk4_step(Isa isa, const WarpTable& table, FanLanes lanes);

}  // namespace revlab::kernels
