#pragma once

#include <cstddef>
#include <string>

namespace spectune::kernels {

// Backends are selected once at startup: AVX2+FMA when the CPU supports it,
// scalar otherwise. The scalar kernels are the reference semantics; SIMD
// variants must agree within floating-point reassociation tolerance and are
// equivalence-tested against scalar. The environment variable
// SPECTUNE_BACKEND=scalar|avx2 overrides auto-detection.
enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_supported(Backend b);
void force_backend(Backend b);  // throws ArgumentError if unsupported
const char* backend_name(Backend b);

// Dispatch table. All pointers are non-null for a supported backend.
//
// Conventions:
//  - matrices are row-major with explicit leading dimensions
//  - gemm_*: if accumulate is false, C is overwritten, else added to
//  - reductions accumulate in double regardless of T
template <typename T>
struct Ops {
  // C[m x n] (+)= A[m x k] * B[n x k]^T   (rows of A dotted with rows of B)
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const T* A, std::size_t lda,
                  const T* B, std::size_t ldb, T* C, std::size_t ldc, bool accumulate);
  // C[m x n] (+)= A[m x k] * B[k x n]
  void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k, const T* A, std::size_t lda,
                  const T* B, std::size_t ldb, T* C, std::size_t ldc, bool accumulate);
  // Valid cross-correlation: out[j] = sum_w kern[w] * x[j+w], j in [0, n-kw]
  void (*conv1d_forward)(const T* x, std::size_t n, const T* kern, std::size_t kw, T* out);
  // dk[w] += sum_j dy[j] * x[j+w]
  void (*conv1d_kernel_grad)(const T* x, const T* dy, std::size_t out_len, std::size_t kw, T* dk);
  T (*dot)(const T* a, const T* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(T alpha, const T* x, T* y, std::size_t n);
  // y = x > 0 ? x : exp(x) - 1   (alpha = 1)
  void (*elu)(const T* x, T* y, std::size_t n);
  // dx = dy * (post > 0 ? 1 : post + 1); post is the ELU output. dx may alias dy.
  void (*elu_grad)(const T* post, const T* dy, T* dx, std::size_t n);
  // Fused ADAM step with precomputed bias corrections bc1 = 1/(1-beta1^t), bc2 = 1/(1-beta2^t):
  //   m = beta1*m + (1-beta1)*g; v = beta2*v + (1-beta2)*g^2
  //   w -= lr * (m*bc1) / (sqrt(v*bc2) + eps)
  void (*adam_update)(T* w, const T* g, T* m, T* v, std::size_t n, T lr, T beta1, T beta2, T eps,
                      T bc1, T bc2);
  double (*sum_sq)(const T* x, std::size_t n);
  double (*mse)(const T* a, const T* b, std::size_t n);
};

// Table for the active backend.
template <typename T>
const Ops<T>& ops();

// Table for an explicit backend (equivalence tests). Throws if unsupported.
template <typename T>
const Ops<T>& ops(Backend b);

extern template const Ops<float>& ops<float>();
extern template const Ops<double>& ops<double>();
extern template const Ops<float>& ops<float>(Backend);
extern template const Ops<double>& ops<double>(Backend);

namespace detail {
template <typename T>
const Ops<T>& scalar_table();
template <typename T>
const Ops<T>& avx2_table();  // only valid when built with AVX2 support
bool avx2_compiled();
bool avx2_runtime();
}  // namespace detail

}  // namespace spectune::kernels
