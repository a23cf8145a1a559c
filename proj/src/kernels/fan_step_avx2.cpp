#include <immintrin.h>

#include "revlab/kernels/fan_step.hpp"

namespace revlab::kernels {

namespace {

// Four lanes of the Hermite interpolant. Arithmetic is written in the same
// order as the scalar reference and without fused multiply-adds so both
// variants round identically.
inline void eval4(const WarpTable& table, __m256d t, __m256d& f, __m256d& fp) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d neg = _mm256_cmp_pd(t, zero, _CMP_LT_OQ);
  const __m256d sign = _mm256_blendv_pd(one, _mm256_set1_pd(-1.0), neg);
  const __m256d at = _mm256_andnot_pd(sign_mask, t);
  const __m256d inv = _mm256_set1_pd(table.inv_dt);
  const __m256d last = _mm256_set1_pd(static_cast<double>(table.size() - 2));
  const __m256d scaled = _mm256_mul_pd(at, inv);
  const __m256d k = _mm256_min_pd(_mm256_max_pd(_mm256_floor_pd(scaled), zero), last);
  const __m256d xr = _mm256_sub_pd(scaled, k);
  const __m256d x = _mm256_min_pd(xr, one);
  const __m128i idx = _mm256_cvttpd_epi32(k);
  const __m128i idx1 = _mm_add_epi32(idx, _mm_set1_epi32(1));

  const __m256d h = _mm256_set1_pd(table.dt);
  const __m256d f0 = _mm256_i32gather_pd(table.f.data(), idx, 8);
  const __m256d f1 = _mm256_i32gather_pd(table.f.data(), idx1, 8);
  const __m256d m0 = _mm256_mul_pd(_mm256_i32gather_pd(table.fp.data(), idx, 8), h);
  const __m256d m1 = _mm256_mul_pd(_mm256_i32gather_pd(table.fp.data(), idx1, 8), h);

  const __m256d x2 = _mm256_mul_pd(x, x);
  const __m256d x3 = _mm256_mul_pd(x2, x);
  const __m256d c2 = _mm256_set1_pd(2.0), c3 = _mm256_set1_pd(3.0), c4 = _mm256_set1_pd(4.0);
  const __m256d c6 = _mm256_set1_pd(6.0), cm2 = _mm256_set1_pd(-2.0), cm6 = _mm256_set1_pd(-6.0);

  // (2x3 - 3x2 + 1), (x3 - 2x2 + x), (-2x3 + 3x2), (x3 - x2)
  const __m256d H00 = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(c2, x3), _mm256_mul_pd(c3, x2)), one);
  const __m256d H10 = _mm256_add_pd(_mm256_sub_pd(x3, _mm256_mul_pd(c2, x2)), x);
  const __m256d H01 = _mm256_add_pd(_mm256_mul_pd(cm2, x3), _mm256_mul_pd(c3, x2));
  const __m256d H11 = _mm256_sub_pd(x3, x2);
  // (6x2 - 6x), (3x2 - 4x + 1), (-6x2 + 6x), (3x2 - 2x)
  const __m256d D00 = _mm256_sub_pd(_mm256_mul_pd(c6, x2), _mm256_mul_pd(c6, x));
  const __m256d D10 = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(c3, x2), _mm256_mul_pd(c4, x)), one);
  const __m256d D01 = _mm256_add_pd(_mm256_mul_pd(cm6, x2), _mm256_mul_pd(c6, x));
  const __m256d D11 = _mm256_sub_pd(_mm256_mul_pd(c3, x2), _mm256_mul_pd(c2, x));

  __m256d p = _mm256_mul_pd(H00, f0);
  p = _mm256_add_pd(p, _mm256_mul_pd(H10, m0));
  p = _mm256_add_pd(p, _mm256_mul_pd(H01, f1));
  p = _mm256_add_pd(p, _mm256_mul_pd(H11, m1));
  __m256d dp = _mm256_mul_pd(D00, f0);
  dp = _mm256_add_pd(dp, _mm256_mul_pd(D10, m0));
  dp = _mm256_add_pd(dp, _mm256_mul_pd(D01, f1));
  dp = _mm256_add_pd(dp, _mm256_mul_pd(D11, m1));
  f = _mm256_mul_pd(sign, _mm256_add_pd(p, _mm256_mul_pd(_mm256_sub_pd(xr, x), m1)));
  fp = _mm256_mul_pd(dp, inv);
}

struct Deriv4 {
  __m256d dt, dtheta, du, dw;
};

inline Deriv4 rhs4(const WarpTable& table, __m256d t, __m256d u, __m256d w) {
  __m256d f, fp;
  eval4(table, t, f, fp);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d is_zero = _mm256_cmp_pd(f, zero, _CMP_EQ_OQ);
  const __m256d safe_f = _mm256_blendv_pd(f, _mm256_set1_pd(1.0), is_zero);
  const __m256d ratio = _mm256_blendv_pd(_mm256_div_pd(fp, safe_f), zero, is_zero);
  const __m256d du = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(f, fp), w), w);
  const __m256d dw = _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), ratio), u), w);
  return {u, w, du, dw};
}

inline __m256d axpy(__m256d y, __m256d a, __m256d x) { return _mm256_add_pd(y, _mm256_mul_pd(a, x)); }

inline __m256d combine(__m256d y, __m256d s, __m256d k1, __m256d k2, __m256d k3, __m256d k4) {
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d acc = _mm256_add_pd(k1, _mm256_mul_pd(two, k2));
  acc = _mm256_add_pd(acc, _mm256_mul_pd(two, k3));
  acc = _mm256_add_pd(acc, k4);
  return _mm256_add_pd(y, _mm256_mul_pd(s, acc));
}

}  // namespace

void warp_eval_avx2(const WarpTable& table, std::span<const double> t, std::span<double> f, std::span<double> fp) {
  const std::size_t n = t.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vf, vfp;
    eval4(table, _mm256_loadu_pd(t.data() + i), vf, vfp);
    _mm256_storeu_pd(f.data() + i, vf);
    _mm256_storeu_pd(fp.data() + i, vfp);
  }
  if (i < n) warp_eval_scalar(table, t.subspan(i), f.subspan(i), fp.subspan(i));
}

void fan_rk4_step_avx2(const WarpTable& table, FanLanes lanes) {
  const std::size_t n = lanes.t.size();
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d sixth_div = _mm256_set1_pd(6.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d h = _mm256_loadu_pd(lanes.h.data() + i);
    const __m256d active = _mm256_cmp_pd(h, _mm256_setzero_pd(), _CMP_NEQ_UQ);
    if (_mm256_movemask_pd(active) == 0) continue;
    const __m256d t = _mm256_loadu_pd(lanes.t.data() + i);
    const __m256d th = _mm256_loadu_pd(lanes.theta.data() + i);
    const __m256d u = _mm256_loadu_pd(lanes.u.data() + i);
    const __m256d w = _mm256_loadu_pd(lanes.w.data() + i);
    const __m256d hh = _mm256_mul_pd(half, h);

    const Deriv4 k1 = rhs4(table, t, u, w);
    const Deriv4 k2 = rhs4(table, axpy(t, hh, k1.dt), axpy(u, hh, k1.du), axpy(w, hh, k1.dw));
    const Deriv4 k3 = rhs4(table, axpy(t, hh, k2.dt), axpy(u, hh, k2.du), axpy(w, hh, k2.dw));
    const Deriv4 k4 = rhs4(table, axpy(t, h, k3.dt), axpy(u, h, k3.du), axpy(w, h, k3.dw));
    const __m256d s = _mm256_div_pd(h, sixth_div);

    const __m256d nt = combine(t, s, k1.dt, k2.dt, k3.dt, k4.dt);
    const __m256d nth = combine(th, s, k1.dtheta, k2.dtheta, k3.dtheta, k4.dtheta);
    const __m256d nu = combine(u, s, k1.du, k2.du, k3.du, k4.du);
    const __m256d nw = combine(w, s, k1.dw, k2.dw, k3.dw, k4.dw);
    _mm256_storeu_pd(lanes.t.data() + i, _mm256_blendv_pd(t, nt, active));
    _mm256_storeu_pd(lanes.theta.data() + i, _mm256_blendv_pd(th, nth, active));
    _mm256_storeu_pd(lanes.u.data() + i, _mm256_blendv_pd(u, nu, active));
    _mm256_storeu_pd(lanes.w.data() + i, _mm256_blendv_pd(w, nw, active));
  }
  if (i < n) {
    fan_rk4_step_scalar(table, {lanes.t.subspan(i), lanes.theta.subspan(i), lanes.u.subspan(i),
                                lanes.w.subspan(i), lanes.h.subspan(i)});
  }
}

}  // namespace revlab::kernels
