// AVX2+FMA kernel variants. Compiled with -mavx2 -mfma; only reachable
// through runtime dispatch after __builtin_cpu_supports checks.
//
// Float ELU uses a polynomial exp (cephes-style, ~1e-7 relative error).
// The double ELU path stays on std::exp: gradient checks run in double and
// need libm-accurate activations.

#include "spectune/kernels/kernels.hpp"

#ifdef SPECTUNE_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace spectune::kernels::detail {

namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(s);
  __m128 sums = _mm_add_ps(s, shuf);
  return _mm_cvtss_f32(_mm_add_ss(sums, _mm_movehl_ps(shuf, sums)));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp(x) for 8 floats; cephes expf port.
inline __m256 exp256_ps(__m256 x) {
  const __m256 hi = _mm256_set1_ps(88.3762626647949f);
  const __m256 lo = _mm256_set1_ps(-87.3365478515625f);
  const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
  const __m256 c1 = _mm256_set1_ps(0.693359375f);
  const __m256 c2 = _mm256_set1_ps(-2.12194440e-4f);
  const __m256 one = _mm256_set1_ps(1.0f);

  x = _mm256_max_ps(_mm256_min_ps(x, hi), lo);
  __m256 fx = _mm256_fmadd_ps(x, log2e, _mm256_set1_ps(0.5f));
  fx = _mm256_floor_ps(fx);
  x = _mm256_fnmadd_ps(fx, c1, x);
  x = _mm256_fnmadd_ps(fx, c2, x);

  __m256 y = _mm256_set1_ps(1.9875691500e-4f);
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.3981999507e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(8.3334519073e-3f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(4.1665795894e-2f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.6666665459e-1f));
  y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(5.0000001201e-1f));
  y = _mm256_fmadd_ps(y, _mm256_mul_ps(x, x), _mm256_add_ps(x, one));

  __m256i n = _mm256_add_epi32(_mm256_cvttps_epi32(fx), _mm256_set1_epi32(127));
  __m256 pow2n = _mm256_castsi256_ps(_mm256_slli_epi32(n, 23));
  return _mm256_mul_ps(y, pow2n);
}

// ---------------------------------------------------------------- gemm_nt

template <typename T>
T dot_edge(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void gemm_nt_f(std::size_t m, std::size_t n, std::size_t k, const float* A, std::size_t lda,
               const float* B, std::size_t ldb, float* C, std::size_t ldc, bool accumulate) {
  const std::size_t m4 = m & ~std::size_t(3);
  const std::size_t n2 = n & ~std::size_t(1);
  const std::size_t k8 = k & ~std::size_t(7);
  for (std::size_t i = 0; i < m4; i += 4) {
    const float* a0 = A + (i + 0) * lda;
    const float* a1 = A + (i + 1) * lda;
    const float* a2 = A + (i + 2) * lda;
    const float* a3 = A + (i + 3) * lda;
    for (std::size_t j = 0; j < n2; j += 2) {
      const float* b0 = B + (j + 0) * ldb;
      const float* b1 = B + (j + 1) * ldb;
      __m256 acc00 = _mm256_setzero_ps(), acc01 = _mm256_setzero_ps();
      __m256 acc10 = _mm256_setzero_ps(), acc11 = _mm256_setzero_ps();
      __m256 acc20 = _mm256_setzero_ps(), acc21 = _mm256_setzero_ps();
      __m256 acc30 = _mm256_setzero_ps(), acc31 = _mm256_setzero_ps();
      for (std::size_t p = 0; p < k8; p += 8) {
        const __m256 vb0 = _mm256_loadu_ps(b0 + p);
        const __m256 vb1 = _mm256_loadu_ps(b1 + p);
        __m256 va = _mm256_loadu_ps(a0 + p);
        acc00 = _mm256_fmadd_ps(va, vb0, acc00);
        acc01 = _mm256_fmadd_ps(va, vb1, acc01);
        va = _mm256_loadu_ps(a1 + p);
        acc10 = _mm256_fmadd_ps(va, vb0, acc10);
        acc11 = _mm256_fmadd_ps(va, vb1, acc11);
        va = _mm256_loadu_ps(a2 + p);
        acc20 = _mm256_fmadd_ps(va, vb0, acc20);
        acc21 = _mm256_fmadd_ps(va, vb1, acc21);
        va = _mm256_loadu_ps(a3 + p);
        acc30 = _mm256_fmadd_ps(va, vb0, acc30);
        acc31 = _mm256_fmadd_ps(va, vb1, acc31);
      }
      float s[4][2] = {{hsum(acc00), hsum(acc01)},
                       {hsum(acc10), hsum(acc11)},
                       {hsum(acc20), hsum(acc21)},
                       {hsum(acc30), hsum(acc31)}};
      for (std::size_t p = k8; p < k; ++p) {
        const float x0 = b0[p], x1 = b1[p];
        s[0][0] += a0[p] * x0;
        s[0][1] += a0[p] * x1;
        s[1][0] += a1[p] * x0;
        s[1][1] += a1[p] * x1;
        s[2][0] += a2[p] * x0;
        s[2][1] += a2[p] * x1;
        s[3][0] += a3[p] * x0;
        s[3][1] += a3[p] * x1;
      }
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 2; ++c) {
          float* dst = C + (i + r) * ldc + j + c;
          *dst = accumulate ? *dst + s[r][c] : s[r][c];
        }
    }
    for (std::size_t j = n2; j < n; ++j) {
      const float* b = B + j * ldb;
      const float sv[4] = {dot_edge(a0, b, k), dot_edge(a1, b, k), dot_edge(a2, b, k),
                           dot_edge(a3, b, k)};
      for (int r = 0; r < 4; ++r) {
        float* dst = C + (i + r) * ldc + j;
        *dst = accumulate ? *dst + sv[r] : sv[r];
      }
    }
  }
  for (std::size_t i = m4; i < m; ++i) {
    const float* a = A + i * lda;
    for (std::size_t j = 0; j < n; ++j) {
      const float s = dot_edge(a, B + j * ldb, k);
      float* dst = C + i * ldc + j;
      *dst = accumulate ? *dst + s : s;
    }
  }
}

void gemm_nt_d(std::size_t m, std::size_t n, std::size_t k, const double* A, std::size_t lda,
               const double* B, std::size_t ldb, double* C, std::size_t ldc, bool accumulate) {
  const std::size_t m2 = m & ~std::size_t(1);
  const std::size_t n2 = n & ~std::size_t(1);
  const std::size_t k4 = k & ~std::size_t(3);
  for (std::size_t i = 0; i < m2; i += 2) {
    const double* a0 = A + (i + 0) * lda;
    const double* a1 = A + (i + 1) * lda;
    for (std::size_t j = 0; j < n2; j += 2) {
      const double* b0 = B + (j + 0) * ldb;
      const double* b1 = B + (j + 1) * ldb;
      __m256d acc00 = _mm256_setzero_pd(), acc01 = _mm256_setzero_pd();
      __m256d acc10 = _mm256_setzero_pd(), acc11 = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k4; p += 4) {
        const __m256d vb0 = _mm256_loadu_pd(b0 + p);
        const __m256d vb1 = _mm256_loadu_pd(b1 + p);
        __m256d va = _mm256_loadu_pd(a0 + p);
        acc00 = _mm256_fmadd_pd(va, vb0, acc00);
        acc01 = _mm256_fmadd_pd(va, vb1, acc01);
        va = _mm256_loadu_pd(a1 + p);
        acc10 = _mm256_fmadd_pd(va, vb0, acc10);
        acc11 = _mm256_fmadd_pd(va, vb1, acc11);
      }
      double s[2][2] = {{hsum(acc00), hsum(acc01)}, {hsum(acc10), hsum(acc11)}};
      for (std::size_t p = k4; p < k; ++p) {
        s[0][0] += a0[p] * b0[p];
        s[0][1] += a0[p] * b1[p];
        s[1][0] += a1[p] * b0[p];
        s[1][1] += a1[p] * b1[p];
      }
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          double* dst = C + (i + r) * ldc + j + c;
          *dst = accumulate ? *dst + s[r][c] : s[r][c];
        }
    }
    for (std::size_t j = n2; j < n; ++j) {
      const double* b = B + j * ldb;
      const double s0 = dot_edge(a0, b, k), s1 = dot_edge(a1, b, k);
      double* d0 = C + i * ldc + j;
      double* d1 = C + (i + 1) * ldc + j;
      *d0 = accumulate ? *d0 + s0 : s0;
      *d1 = accumulate ? *d1 + s1 : s1;
    }
  }
  for (std::size_t i = m2; i < m; ++i) {
    const double* a = A + i * lda;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = dot_edge(a, B + j * ldb, k);
      double* dst = C + i * ldc + j;
      *dst = accumulate ? *dst + s : s;
    }
  }
}

// ---------------------------------------------------------------- gemm_nn
// Column-chunked so the B panel stays cache resident across row pairs.

constexpr std::size_t kColChunk = 512;

void gemm_nn_f(std::size_t m, std::size_t n, std::size_t k, const float* A, std::size_t lda,
               const float* B, std::size_t ldb, float* C, std::size_t ldc, bool accumulate) {
  for (std::size_t j0 = 0; j0 < n; j0 += kColChunk) {
    const std::size_t jend = j0 + kColChunk < n ? j0 + kColChunk : n;
    const std::size_t jv = j0 + ((jend - j0) & ~std::size_t(15));
    for (std::size_t i = 0; i < m; ++i) {
      const float* a = A + i * lda;
      float* c = C + i * ldc;
      for (std::size_t j = j0; j < jv; j += 16) {
        __m256 acc0, acc1;
        if (accumulate) {
          acc0 = _mm256_loadu_ps(c + j);
          acc1 = _mm256_loadu_ps(c + j + 8);
        } else {
          acc0 = _mm256_setzero_ps();
          acc1 = _mm256_setzero_ps();
        }
        for (std::size_t p = 0; p < k; ++p) {
          const __m256 s = _mm256_set1_ps(a[p]);
          const float* b = B + p * ldb + j;
          acc0 = _mm256_fmadd_ps(s, _mm256_loadu_ps(b), acc0);
          acc1 = _mm256_fmadd_ps(s, _mm256_loadu_ps(b + 8), acc1);
        }
        _mm256_storeu_ps(c + j, acc0);
        _mm256_storeu_ps(c + j + 8, acc1);
      }
      for (std::size_t j = jv; j < jend; ++j) {
        float acc = accumulate ? c[j] : 0.0f;
        for (std::size_t p = 0; p < k; ++p) acc += a[p] * B[p * ldb + j];
        c[j] = acc;
      }
    }
  }
}

void gemm_nn_d(std::size_t m, std::size_t n, std::size_t k, const double* A, std::size_t lda,
               const double* B, std::size_t ldb, double* C, std::size_t ldc, bool accumulate) {
  for (std::size_t j0 = 0; j0 < n; j0 += kColChunk) {
    const std::size_t jend = j0 + kColChunk < n ? j0 + kColChunk : n;
    const std::size_t jv = j0 + ((jend - j0) & ~std::size_t(7));
    for (std::size_t i = 0; i < m; ++i) {
      const double* a = A + i * lda;
      double* c = C + i * ldc;
      for (std::size_t j = j0; j < jv; j += 8) {
        __m256d acc0, acc1;
        if (accumulate) {
          acc0 = _mm256_loadu_pd(c + j);
          acc1 = _mm256_loadu_pd(c + j + 4);
        } else {
          acc0 = _mm256_setzero_pd();
          acc1 = _mm256_setzero_pd();
        }
        for (std::size_t p = 0; p < k; ++p) {
          const __m256d s = _mm256_set1_pd(a[p]);
          const double* b = B + p * ldb + j;
          acc0 = _mm256_fmadd_pd(s, _mm256_loadu_pd(b), acc0);
          acc1 = _mm256_fmadd_pd(s, _mm256_loadu_pd(b + 4), acc1);
        }
        _mm256_storeu_pd(c + j, acc0);
        _mm256_storeu_pd(c + j + 4, acc1);
      }
      for (std::size_t j = jv; j < jend; ++j) {
        double acc = accumulate ? c[j] : 0.0;
        for (std::size_t p = 0; p < k; ++p) acc += a[p] * B[p * ldb + j];
        c[j] = acc;
      }
    }
  }
}

// ------------------------------------------------------------------- conv

void conv1d_forward_f(const float* x, std::size_t n, const float* kern, std::size_t kw,
                      float* out) {
  const std::size_t out_len = n - kw + 1;
  const std::size_t j8 = out_len & ~std::size_t(7);
  for (std::size_t j = 0; j < j8; j += 8) {
    __m256 acc = _mm256_setzero_ps();
    for (std::size_t w = 0; w < kw; ++w)
      acc = _mm256_fmadd_ps(_mm256_set1_ps(kern[w]), _mm256_loadu_ps(x + j + w), acc);
    _mm256_storeu_ps(out + j, acc);
  }
  for (std::size_t j = j8; j < out_len; ++j) {
    float acc = 0;
    for (std::size_t w = 0; w < kw; ++w) acc += kern[w] * x[j + w];
    out[j] = acc;
  }
}

void conv1d_forward_d(const double* x, std::size_t n, const double* kern, std::size_t kw,
                      double* out) {
  const std::size_t out_len = n - kw + 1;
  const std::size_t j4 = out_len & ~std::size_t(3);
  for (std::size_t j = 0; j < j4; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t w = 0; w < kw; ++w)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(kern[w]), _mm256_loadu_pd(x + j + w), acc);
    _mm256_storeu_pd(out + j, acc);
  }
  for (std::size_t j = j4; j < out_len; ++j) {
    double acc = 0;
    for (std::size_t w = 0; w < kw; ++w) acc += kern[w] * x[j + w];
    out[j] = acc;
  }
}

float dot_f(const float* a, const float* b, std::size_t n);
double dot_d(const double* a, const double* b, std::size_t n);

void conv1d_kernel_grad_f(const float* x, const float* dy, std::size_t out_len, std::size_t kw,
                          float* dk) {
  for (std::size_t w = 0; w < kw; ++w) dk[w] += dot_f(dy, x + w, out_len);
}

void conv1d_kernel_grad_d(const double* x, const double* dy, std::size_t out_len, std::size_t kw,
                          double* dk) {
  for (std::size_t w = 0; w < kw; ++w) dk[w] += dot_d(dy, x + w, out_len);
}

// ------------------------------------------------------------- dot / axpy

float dot_f(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps(), acc1 = _mm256_setzero_ps();
  __m256 acc2 = _mm256_setzero_ps(), acc3 = _mm256_setzero_ps();
  const std::size_t n32 = n & ~std::size_t(31);
  std::size_t i = 0;
  for (; i < n32; i += 32) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 16), _mm256_loadu_ps(b + i + 16), acc2);
    acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 24), _mm256_loadu_ps(b + i + 24), acc3);
  }
  const std::size_t n8 = n & ~std::size_t(7);
  for (; i < n8; i += 8) acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  float s = hsum(_mm256_add_ps(_mm256_add_ps(acc0, acc1), _mm256_add_ps(acc2, acc3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot_d(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  const std::size_t n8 = n & ~std::size_t(7);
  std::size_t i = 0;
  for (; i < n8; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  const std::size_t n4 = n & ~std::size_t(3);
  for (; i < n4; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_f(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  const std::size_t n8 = n & ~std::size_t(7);
  std::size_t i = 0;
  for (; i < n8; i += 8)
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpy_d(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// -------------------------------------------------------------------- elu

void elu_f(const float* x, float* y, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  const std::size_t n8 = n & ~std::size_t(7);
  std::size_t i = 0;
  for (; i < n8; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    const __m256 neg = _mm256_min_ps(v, zero);
    const __m256 e = _mm256_sub_ps(exp256_ps(neg), one);
    const __m256 mask = _mm256_cmp_ps(v, zero, _CMP_GT_OQ);
    _mm256_storeu_ps(y + i, _mm256_blendv_ps(e, v, mask));
  }
  for (; i < n; ++i) y[i] = x[i] > 0 ? x[i] : std::exp(x[i]) - 1.0f;
}

void elu_d(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0 ? x[i] : std::exp(x[i]) - 1.0;
}

void elu_grad_f(const float* post, const float* dy, float* dx, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  const std::size_t n8 = n & ~std::size_t(7);
  std::size_t i = 0;
  for (; i < n8; i += 8) {
    const __m256 p = _mm256_loadu_ps(post + i);
    const __m256 mask = _mm256_cmp_ps(p, zero, _CMP_GT_OQ);
    const __m256 slope = _mm256_blendv_ps(_mm256_add_ps(p, one), one, mask);
    _mm256_storeu_ps(dx + i, _mm256_mul_ps(_mm256_loadu_ps(dy + i), slope));
  }
  for (; i < n; ++i) dx[i] = dy[i] * (post[i] > 0 ? 1.0f : post[i] + 1.0f);
}

void elu_grad_d(const double* post, const double* dy, double* dx, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d p = _mm256_loadu_pd(post + i);
    const __m256d mask = _mm256_cmp_pd(p, zero, _CMP_GT_OQ);
    const __m256d slope = _mm256_blendv_pd(_mm256_add_pd(p, one), one, mask);
    _mm256_storeu_pd(dx + i, _mm256_mul_pd(_mm256_loadu_pd(dy + i), slope));
  }
  for (; i < n; ++i) dx[i] = dy[i] * (post[i] > 0 ? 1.0 : post[i] + 1.0);
}

// ------------------------------------------------------------------- adam

void adam_update_f(float* w, const float* g, float* m, float* v, std::size_t n, float lr,
                   float beta1, float beta2, float eps, float bc1, float bc2) {
  const __m256 vb1 = _mm256_set1_ps(beta1), vomb1 = _mm256_set1_ps(1.0f - beta1);
  const __m256 vb2 = _mm256_set1_ps(beta2), vomb2 = _mm256_set1_ps(1.0f - beta2);
  const __m256 vlr = _mm256_set1_ps(lr), veps = _mm256_set1_ps(eps);
  const __m256 vbc1 = _mm256_set1_ps(bc1), vbc2 = _mm256_set1_ps(bc2);
  const std::size_t n8 = n & ~std::size_t(7);
  std::size_t i = 0;
  for (; i < n8; i += 8) {
    const __m256 vg = _mm256_loadu_ps(g + i);
    __m256 vm = _mm256_fmadd_ps(vomb1, vg, _mm256_mul_ps(vb1, _mm256_loadu_ps(m + i)));
    __m256 vv = _mm256_fmadd_ps(vomb2, _mm256_mul_ps(vg, vg),
                                _mm256_mul_ps(vb2, _mm256_loadu_ps(v + i)));
    _mm256_storeu_ps(m + i, vm);
    _mm256_storeu_ps(v + i, vv);
    const __m256 mhat = _mm256_mul_ps(vm, vbc1);
    const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(_mm256_mul_ps(vv, vbc2)), veps);
    const __m256 upd = _mm256_div_ps(_mm256_mul_ps(vlr, mhat), denom);
    _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), upd));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
    w[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
  }
}

void adam_update_d(double* w, const double* g, double* m, double* v, std::size_t n, double lr,
                   double beta1, double beta2, double eps, double bc1, double bc2) {
  const __m256d vb1 = _mm256_set1_pd(beta1), vomb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2), vomb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d vlr = _mm256_set1_pd(lr), veps = _mm256_set1_pd(eps);
  const __m256d vbc1 = _mm256_set1_pd(bc1), vbc2 = _mm256_set1_pd(bc2);
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g + i);
    __m256d vm = _mm256_fmadd_pd(vomb1, vg, _mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)));
    __m256d vv = _mm256_fmadd_pd(vomb2, _mm256_mul_pd(vg, vg),
                                 _mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)));
    _mm256_storeu_pd(m + i, vm);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(vm, vbc1);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, vbc2)), veps);
    const __m256d upd = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
    _mm256_storeu_pd(w + i, _mm256_sub_pd(_mm256_loadu_pd(w + i), upd));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    w[i] -= lr * (m[i] * bc1) / (std::sqrt(v[i] * bc2) + eps);
  }
}

// ------------------------------------------------------------- reductions
// Accumulate in double lanes even for float inputs.

double sum_sq_f(const float* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  const std::size_t n8 = n & ~std::size_t(7);
  std::size_t i = 0;
  for (; i < n8; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(v));
    const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1));
    acc0 = _mm256_fmadd_pd(lo, lo, acc0);
    acc1 = _mm256_fmadd_pd(hi, hi, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += double(x[i]) * double(x[i]);
  return s;
}

double sum_sq_d(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

double mse_f(const float* a, const float* b, std::size_t n) {
  if (n == 0) return 0.0;
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  const std::size_t n8 = n & ~std::size_t(7);
  std::size_t i = 0;
  for (; i < n8; i += 8) {
    const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
    const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(d));
    const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(d, 1));
    acc0 = _mm256_fmadd_pd(lo, lo, acc0);
    acc1 = _mm256_fmadd_pd(hi, hi, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = double(a[i]) - double(b[i]);
    s += d * d;
  }
  return s / double(n);
}

double mse_d(const double* a, const double* b, std::size_t n) {
  if (n == 0) return 0.0;
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  std::size_t i = 0;
  for (; i < n4; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / double(n);
}

template <typename T>
Ops<T> make_avx2_table();

template <>
Ops<float> make_avx2_table<float>() {
  Ops<float> t;
  t.gemm_nt = &gemm_nt_f;
  t.gemm_nn = &gemm_nn_f;
  t.conv1d_forward = &conv1d_forward_f;
  t.conv1d_kernel_grad = &conv1d_kernel_grad_f;
  t.dot = &dot_f;
  t.axpy = &axpy_f;
  t.elu = &elu_f;
  t.elu_grad = &elu_grad_f;
  t.adam_update = &adam_update_f;
  t.sum_sq = &sum_sq_f;
  t.mse = &mse_f;
  return t;
}

template <>
Ops<double> make_avx2_table<double>() {
  Ops<double> t;
  t.gemm_nt = &gemm_nt_d;
  t.gemm_nn = &gemm_nn_d;
  t.conv1d_forward = &conv1d_forward_d;
  t.conv1d_kernel_grad = &conv1d_kernel_grad_d;
  t.dot = &dot_d;
  t.axpy = &axpy_d;
  t.elu = &elu_d;
  t.elu_grad = &elu_grad_d;
  t.adam_update = &adam_update_d;
  t.sum_sq = &sum_sq_d;
  t.mse = &mse_d;
  return t;
}

}  // namespace

template <typename T>
const Ops<T>& avx2_table() {
  static const Ops<T> table = make_avx2_table<T>();
  return table;
}

template const Ops<float>& avx2_table<float>();
template const Ops<double>& avx2_table<double>();

bool avx2_compiled() { return true; }

}  // namespace spectune::kernels::detail

#else  // !SPECTUNE_HAVE_AVX2

namespace spectune::kernels::detail {

template <typename T>
const Ops<T>& avx2_table() {
  return scalar_table<T>();  // never selected; dispatch checks avx2_compiled()
}

template const Ops<float>& avx2_table<float>();
template const Ops<double>& avx2_table<double>();

bool avx2_compiled() { return false; }

}  // namespace spectune::kernels::detail

#endif
