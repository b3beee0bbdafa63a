// Compiled with -mavx2 only; dispatch guarantees the CPU supports it.
// Keep this file free of std:: templates so no AVX2 code leaks into shared
// inline instantiations.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace funloci::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

// Per-lane Kahan state, finished with a Neumaier pass over lanes and tail.
struct KahanLanes {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  void add(__m256d v) {
    const __m256d y = _mm256_sub_pd(v, comp);
    const __m256d t = _mm256_add_pd(sum, y);
    comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
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
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, k.sum);
  _mm256_store_pd(c, k.comp);
  for (int l = 0; l < 4; ++l) {
    tail.add(s[l]);
    tail.add(-c[l]);
  }
  return tail.sum + tail.comp;
}

}  // namespace

double sum(const double* x, std::size_t n) {
  std::size_t t = 0;
  if (n > kCompensatedThreshold) {
    KahanLanes k;
    for (; t + 4 <= n; t += 4) k.add(_mm256_loadu_pd(x + t));
    Neumaier tail;
    for (; t < n; ++t) tail.add(x[t]);
    return finish(k, tail);
  }
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  for (; t + 8 <= n; t += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + t));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + t + 4));
  }
  if (t + 4 <= n) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + t));
    t += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; t < n; ++t) s += x[t];
  return s;
}

double sum_sq_dev(const double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t t = 0;
  if (n > kCompensatedThreshold) {
    KahanLanes k;
    for (; t + 4 <= n; t += 4) {
      const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(x + t), vc);
      k.add(_mm256_mul_pd(r, r));
    }
    Neumaier tail;
    for (; t < n; ++t) {
      const double r = x[t] - c;
      tail.add(r * r);
    }
    return finish(k, tail);
  }
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  for (; t + 8 <= n; t += 8) {
    const __m256d r0 = _mm256_sub_pd(_mm256_loadu_pd(x + t), vc);
    const __m256d r1 = _mm256_sub_pd(_mm256_loadu_pd(x + t + 4), vc);
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(r0, r0));
    a1 = _mm256_add_pd(a1, _mm256_mul_pd(r1, r1));
  }
  if (t + 4 <= n) {
    const __m256d r0 = _mm256_sub_pd(_mm256_loadu_pd(x + t), vc);
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(r0, r0));
    t += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; t < n; ++t) {
    const double r = x[t] - c;
    s += r * r;
  }
  return s;
}

double sum_sq_diff_dev(const double* x, const double* y, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t t = 0;
  if (n > kCompensatedThreshold) {
    KahanLanes k;
    for (; t + 4 <= n; t += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + t), _mm256_loadu_pd(y + t));
      const __m256d r = _mm256_sub_pd(d, vc);
      k.add(_mm256_mul_pd(r, r));
    }
    Neumaier tail;
    for (; t < n; ++t) {
      const double r = x[t] - y[t] - c;
      tail.add(r * r);
    }
    return finish(k, tail);
  }
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  for (; t + 8 <= n; t += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + t), _mm256_loadu_pd(y + t));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + t + 4), _mm256_loadu_pd(y + t + 4));
    const __m256d r0 = _mm256_sub_pd(d0, vc);
    const __m256d r1 = _mm256_sub_pd(d1, vc);
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(r0, r0));
    a1 = _mm256_add_pd(a1, _mm256_mul_pd(r1, r1));
  }
  if (t + 4 <= n) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + t), _mm256_loadu_pd(y + t));
    const __m256d r0 = _mm256_sub_pd(d0, vc);
    a0 = _mm256_add_pd(a0, _mm256_mul_pd(r0, r0));
    t += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; t < n; ++t) {
    const double r = x[t] - y[t] - c;
    s += r * r;
  }
  return s;
}

void accumulate(double* acc, const double* x, std::size_t n) {
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    _mm256_storeu_pd(acc + t, _mm256_add_pd(_mm256_loadu_pd(acc + t), _mm256_loadu_pd(x + t)));
  }
  for (; t < n; ++t) acc[t] += x[t];
}

}  // namespace funloci::kernels::avx2
