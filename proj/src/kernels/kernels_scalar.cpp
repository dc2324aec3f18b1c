// Scalar reference kernels. These define the semantics; SIMD backends are
// checked against them.

#include <cmath>
#include <cstddef>

#include "spectune/kernels/kernels.hpp"

namespace spectune::kernels::detail {

namespace {

template <typename T>
void gemm_nt_scalar(std::size_t m, std::size_t n, std::size_t k, const T* A, std::size_t lda,
                    const T* B, std::size_t ldb, T* C, std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* a = A + i * lda;
    for (std::size_t j = 0; j < n; ++j) {
      const T* b = B + j * ldb;
      T acc = 0;
      for (std::size_t p = 0; p < k; ++p) acc += a[p] * b[p];
      T* c = C + i * ldc + j;
      *c = accumulate ? *c + acc : acc;
    }
  }
}

template <typename T>
void gemm_nn_scalar(std::size_t m, std::size_t n, std::size_t k, const T* A, std::size_t lda,
                    const T* B, std::size_t ldb, T* C, std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    T* c = C + i * ldc;
    if (!accumulate)
      for (std::size_t j = 0; j < n; ++j) c[j] = 0;
    const T* a = A + i * lda;
    for (std::size_t p = 0; p < k; ++p) {
      const T s = a[p];
      const T* b = B + p * ldb;
      for (std::size_t j = 0; j < n; ++j) c[j] += s * b[j];
    }
  }
}

template <typename T>
void conv1d_forward_scalar(const T* x, std::size_t n, const T* kern, std::size_t kw, T* out) {
  const std::size_t out_len = n - kw + 1;
  for (std::size_t j = 0; j < out_len; ++j) {
    T acc = 0;
    for (std::size_t w = 0; w < kw; ++w) acc += kern[w] * x[j + w];
    out[j] = acc;
  }
}

template <typename T>
void conv1d_kernel_grad_scalar(const T* x, const T* dy, std::size_t out_len, std::size_t kw,
                               T* dk) {
  for (std::size_t w = 0; w < kw; ++w) {
    T acc = 0;
    for (std::size_t j = 0; j < out_len; ++j) acc += dy[j] * x[j + w];
    dk[w] += acc;
  }
}

template <typename T>
T dot_scalar(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
void axpy_scalar(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void elu_scalar(const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0 ? x[i] : std::exp(x[i]) - T(1);
}

template <typename T>
void elu_grad_scalar(const T* post, const T* dy, T* dx, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * (post[i] > 0 ? T(1) : post[i] + T(1));
}

template <typename T>
void adam_update_scalar(T* w, const T* g, T* m, T* v, std::size_t n, T lr, T beta1, T beta2, T eps,
                        T bc1, T bc2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + (T(1) - beta1) * g[i];
    v[i] = beta2 * v[i] + (T(1) - beta2) * g[i] * g[i];
    const T mhat = m[i] * bc1;
    const T vhat = v[i] * bc2;
    w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

template <typename T>
double sum_sq_scalar(const T* x, std::size_t n) {
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += double(x[i]) * double(x[i]);
  return acc;
}

template <typename T>
double mse_scalar(const T* a, const T* b, std::size_t n) {
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = double(a[i]) - double(b[i]);
    acc += d * d;
  }
  return n ? acc / double(n) : 0.0;
}

template <typename T>
Ops<T> make_scalar_table() {
  Ops<T> t;
  t.gemm_nt = &gemm_nt_scalar<T>;
  t.gemm_nn = &gemm_nn_scalar<T>;
  t.conv1d_forward = &conv1d_forward_scalar<T>;
  t.conv1d_kernel_grad = &conv1d_kernel_grad_scalar<T>;
  t.dot = &dot_scalar<T>;
  t.axpy = &axpy_scalar<T>;
  t.elu = &elu_scalar<T>;
  t.elu_grad = &elu_grad_scalar<T>;
  t.adam_update = &adam_update_scalar<T>;
  t.sum_sq = &sum_sq_scalar<T>;
  t.mse = &mse_scalar<T>;
  return t;
}

}  // namespace

template <typename T>
const Ops<T>& scalar_table() {
  static const Ops<T> table = make_scalar_table<T>();
  return table;
}

template const Ops<float>& scalar_table<float>();
template const Ops<double>& scalar_table<double>();

}  // namespace spectune::kernels::detail
