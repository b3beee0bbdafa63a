// AArch64 Advanced SIMD variant (two double lanes per register).
#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace funloci::kernels::neon {

namespace {

struct KahanLanes {
  float64x2_t sum = vdupq_n_f64(0.0);
  float64x2_t comp = vdupq_n_f64(0.0);

  void add(float64x2_t v) {
    const float64x2_t y = vsubq_f64(v, comp);
    const float64x2_t t = vaddq_f64(sum, y);
    comp = vsubq_f64(vsubq_f64(t, sum), y);
    sum = t;
  }
};

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if ((sum >= 0 ? sum : -sum) >= (v >= 0 ? v : -v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
};

inline double finish(const KahanLanes& k, Neumaier tail) {
  tail.add(vgetq_lane_f64(k.sum, 0));
  tail.add(-vgetq_lane_f64(k.comp, 0));
  tail.add(vgetq_lane_f64(k.sum, 1));
  tail.add(-vgetq_lane_f64(k.comp, 1));
  return tail.sum + tail.comp;
}

inline double hsum(float64x2_t v) { return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1); }

}  // namespace

double sum(const double* x, std::size_t n) {
  std::size_t t = 0;
  if (n > kCompensatedThreshold) {
    KahanLanes k;
    for (; t + 2 <= n; t += 2) k.add(vld1q_f64(x + t));
    Neumaier tail;
    for (; t < n; ++t) tail.add(x[t]);
    return finish(k, tail);
  }
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  for (; t + 4 <= n; t += 4) {
    a0 = vaddq_f64(a0, vld1q_f64(x + t));
    a1 = vaddq_f64(a1, vld1q_f64(x + t + 2));
  }
  if (t + 2 <= n) {
    a0 = vaddq_f64(a0, vld1q_f64(x + t));
    t += 2;
  }
  double s = hsum(vaddq_f64(a0, a1));
  for (; t < n; ++t) s += x[t];
  return s;
}

double sum_sq_dev(const double* x, std::size_t n, double c) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t t = 0;
  if (n > kCompensatedThreshold) {
    KahanLanes k;
    for (; t + 2 <= n; t += 2) {
      const float64x2_t r = vsubq_f64(vld1q_f64(x + t), vc);
      k.add(vmulq_f64(r, r));
    }
    Neumaier tail;
    for (; t < n; ++t) {
      const double r = x[t] - c;
      tail.add(r * r);
    }
    return finish(k, tail);
  }
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  for (; t + 4 <= n; t += 4) {
    const float64x2_t r0 = vsubq_f64(vld1q_f64(x + t), vc);
    const float64x2_t r1 = vsubq_f64(vld1q_f64(x + t + 2), vc);
    a0 = vaddq_f64(a0, vmulq_f64(r0, r0));
    a1 = vaddq_f64(a1, vmulq_f64(r1, r1));
  }
  if (t + 2 <= n) {
    const float64x2_t r0 = vsubq_f64(vld1q_f64(x + t), vc);
    a0 = vaddq_f64(a0, vmulq_f64(r0, r0));
    t += 2;
  }
  double s = hsum(vaddq_f64(a0, a1));
  for (; t < n; ++t) {
    const double r = x[t] - c;
    s += r * r;
  }
  return s;
}

double sum_sq_diff_dev(const double* x, const double* y, std::size_t n, double c) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t t = 0;
  if (n > kCompensatedThreshold) {
    KahanLanes k;
    for (; t + 2 <= n; t += 2) {
      const float64x2_t r = vsubq_f64(vsubq_f64(vld1q_f64(x + t), vld1q_f64(y + t)), vc);
      k.add(vmulq_f64(r, r));
    }
    Neumaier tail;
    for (; t < n; ++t) {
      const double r = x[t] - y[t] - c;
      tail.add(r * r);
    }
    return finish(k, tail);
  }
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  for (; t + 4 <= n; t += 4) {
    const float64x2_t r0 = vsubq_f64(vsubq_f64(vld1q_f64(x + t), vld1q_f64(y + t)), vc);
    const float64x2_t r1 = vsubq_f64(vsubq_f64(vld1q_f64(x + t + 2), vld1q_f64(y + t + 2)), vc);
    a0 = vaddq_f64(a0, vmulq_f64(r0, r0));
    a1 = vaddq_f64(a1, vmulq_f64(r1, r1));
  }
  if (t + 2 <= n) {
    const float64x2_t r0 = vsubq_f64(vsubq_f64(vld1q_f64(x + t), vld1q_f64(y + t)), vc);
    a0 = vaddq_f64(a0, vmulq_f64(r0, r0));
    t += 2;
  }
  double s = hsum(vaddq_f64(a0, a1));
  for (; t < n; ++t) {
    const double r = x[t] - y[t] - c;
    s += r * r;
  }
  return s;
}

void accumulate(double* acc, const double* x, std::size_t n) {
  std::size_t t = 0;
  for (; t + 2 <= n; t += 2) vst1q_f64(acc + t, vaddq_f64(vld1q_f64(acc + t), vld1q_f64(x + t)));
  for (; t < n; ++t) acc[t] += x[t];
}

}  // namespace funloci::kernels::neon
