#include <cstdlib>
#include <string_view>

#include "revlab/kernels/fan_step.hpp"

namespace revlab::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(REVLAB_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("REVLAB_SIMD"); env && std::string_view(env) == "scalar") return Isa::kScalar;
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

void warp_eval(Isa isa, const WarpTable& table, std::span<const double> t, std::span<double> f,
               std::span<double> fp) {
#if defined(REVLAB_BUILD_AVX2)
  if (isa == Isa::kAvx2 && isa_available(Isa::kAvx2)) return warp_eval_avx2(table, t, f, fp);
#endif
  (void)isa;
  warp_eval_scalar(table, t, f, fp);
}

void fan_rk4_step(Isa isa, const WarpTable& table, FanLanes lanes) {
#if defined(REVLAB_BUILD_AVX2)
  if (isa == Isa::kAvx2 && isa_available(Isa::kAvx2)) return fan_rk4_step_avx2(table, lanes);
#endif
  (void)isa;
  fan_rk4_step_scalar(table, lanes);
}

}  // namespace revlab::kernels
