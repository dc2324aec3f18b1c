// Kernel unit tests plus scalar-vs-SIMD equivalence checks. The scalar
// backend is the reference; every SIMD backend must reproduce it within
// floating-point reassociation tolerance on randomized shapes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spectune/kernels/kernels.hpp"
#include "spectune/rng.hpp"

using namespace spectune;
using kernels::Backend;

namespace {

template <typename T>
std::vector<T> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(rng.normal(0.0, scale));
  return v;
}

template <typename T>
void check_close(const std::vector<T>& a, const std::vector<T>& b, double rel_tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(double(a[i])), std::abs(double(b[i])), 1.0});
    CHECK(std::abs(double(a[i]) - double(b[i])) / denom < rel_tol);
  }
}

template <typename T>
double rel_tol() {
  return std::is_same_v<T, float> ? 2e-5 : 1e-11;
}

// Runs one equivalence pass of every kernel between scalar and the given
// backend at a randomized shape.
template <typename T>
void equivalence_pass(Backend backend, Rng& rng) {
  const auto& ref = kernels::ops<T>(Backend::scalar);
  const auto& alt = kernels::ops<T>(backend);
  const double tol = rel_tol<T>();

  const std::size_t m = 1 + rng.uniform_int(0, 9);
  const std::size_t n = 1 + rng.uniform_int(0, 40);
  const std::size_t k = 1 + rng.uniform_int(0, 70);

  // gemm_nt
  {
    auto A = random_vec<T>(rng, m * k);
    auto B = random_vec<T>(rng, n * k);
    std::vector<T> C0(m * n, T(0.5)), C1 = C0;
    for (bool acc : {false, true}) {
      ref.gemm_nt(m, n, k, A.data(), k, B.data(), k, C0.data(), n, acc);
      alt.gemm_nt(m, n, k, A.data(), k, B.data(), k, C1.data(), n, acc);
      check_close(C0, C1, tol);
    }
  }
  // gemm_nn
  {
    auto A = random_vec<T>(rng, m * k);
    auto B = random_vec<T>(rng, k * n);
    std::vector<T> C0(m * n, T(0.25)), C1 = C0;
    for (bool acc : {false, true}) {
      ref.gemm_nn(m, n, k, A.data(), k, B.data(), n, C0.data(), n, acc);
      alt.gemm_nn(m, n, k, A.data(), k, B.data(), n, C1.data(), n, acc);
      check_close(C0, C1, tol);
    }
  }
  // conv1d forward + kernel grad
  {
    const std::size_t len = 40 + rng.uniform_int(0, 80);
    const std::size_t kw = 1 + rng.uniform_int(0, std::min<std::size_t>(28, len - 1));
    const std::size_t out_len = len - kw + 1;
    auto x = random_vec<T>(rng, len);
    auto kern = random_vec<T>(rng, kw);
    std::vector<T> o0(out_len), o1(out_len);
    ref.conv1d_forward(x.data(), len, kern.data(), kw, o0.data());
    alt.conv1d_forward(x.data(), len, kern.data(), kw, o1.data());
    check_close(o0, o1, tol);

    auto dy = random_vec<T>(rng, out_len);
    std::vector<T> dk0(kw, T(0.1)), dk1 = dk0;
    ref.conv1d_kernel_grad(x.data(), dy.data(), out_len, kw, dk0.data());
    alt.conv1d_kernel_grad(x.data(), dy.data(), out_len, kw, dk1.data());
    check_close(dk0, dk1, tol);
  }
  // dot / axpy
  {
    const std::size_t len = 1 + rng.uniform_int(0, 300);
    auto a = random_vec<T>(rng, len);
    auto b = random_vec<T>(rng, len);
    const double d0 = ref.dot(a.data(), b.data(), len);
    const double d1 = alt.dot(a.data(), b.data(), len);
    CHECK(std::abs(d0 - d1) <= tol * std::max({std::abs(d0), std::abs(d1), 1.0}));

    auto y0 = random_vec<T>(rng, len);
    auto y1 = y0;
    ref.axpy(T(0.37), a.data(), y0.data(), len);
    alt.axpy(T(0.37), a.data(), y1.data(), len);
    check_close(y0, y1, tol);
  }
  // elu / elu_grad
  {
    const std::size_t len = 1 + rng.uniform_int(0, 200);
    auto x = random_vec<T>(rng, len, 3.0);
    std::vector<T> y0(len), y1(len);
    ref.elu(x.data(), y0.data(), len);
    alt.elu(x.data(), y1.data(), len);
    check_close(y0, y1, tol);

    auto dy = random_vec<T>(rng, len);
    std::vector<T> dx0(len), dx1(len);
    ref.elu_grad(y0.data(), dy.data(), dx0.data(), len);
    alt.elu_grad(y0.data(), dy.data(), dx1.data(), len);
    check_close(dx0, dx1, tol);
  }
  // adam
  {
    const std::size_t len = 1 + rng.uniform_int(0, 150);
    auto g = random_vec<T>(rng, len);
    auto w0 = random_vec<T>(rng, len);
    auto m0 = random_vec<T>(rng, len, 0.1);
    std::vector<T> v0(len);
    for (auto& x : v0) x = T(rng.uniform(0.0, 0.01));
    auto w1 = w0;
    auto m1 = m0;
    auto v1 = v0;
    const T bc1 = T(1) / (T(1) - T(std::pow(0.9, 3)));
    const T bc2 = T(1) / (T(1) - T(std::pow(0.999, 3)));
    ref.adam_update(w0.data(), g.data(), m0.data(), v0.data(), len, T(0.005), T(0.9), T(0.999),
                    T(1e-7), bc1, bc2);
    alt.adam_update(w1.data(), g.data(), m1.data(), v1.data(), len, T(0.005), T(0.9), T(0.999),
                    T(1e-7), bc1, bc2);
    check_close(w0, w1, tol);
    check_close(m0, m1, tol);
    check_close(v0, v1, tol);
  }
  // reductions
  {
    const std::size_t len = 1 + rng.uniform_int(0, 400);
    auto a = random_vec<T>(rng, len);
    auto b = random_vec<T>(rng, len);
    CHECK(ref.sum_sq(a.data(), len) ==
          doctest::Approx(alt.sum_sq(a.data(), len)).epsilon(tol));
    CHECK(ref.mse(a.data(), b.data(), len) ==
          doctest::Approx(alt.mse(a.data(), b.data(), len)).epsilon(tol));
  }
}

}  // namespace

TEST_CASE("scalar gemm_nt matches naive definition") {
  Rng rng(11);
  const auto& ops = kernels::ops<double>(Backend::scalar);
  const std::size_t m = 5, n = 7, k = 13;
  auto A = random_vec<double>(rng, m * k);
  auto B = random_vec<double>(rng, n * k);
  std::vector<double> C(m * n);
  ops.gemm_nt(m, n, k, A.data(), k, B.data(), k, C.data(), n, false);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double want = 0;
      for (std::size_t p = 0; p < k; ++p) want += A[i * k + p] * B[j * k + p];
      CHECK(C[i * n + j] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("gemm_nn computes A*B with and without accumulation") {
  Rng rng(12);
  const auto& ops = kernels::ops<double>(Backend::scalar);
  const std::size_t m = 4, n = 6, k = 3;
  auto A = random_vec<double>(rng, m * k);
  auto B = random_vec<double>(rng, k * n);
  std::vector<double> C(m * n, 2.0);
  ops.gemm_nn(m, n, k, A.data(), k, B.data(), n, C.data(), n, true);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double want = 2.0;
      for (std::size_t p = 0; p < k; ++p) want += A[i * k + p] * B[p * n + j];
      CHECK(C[i * n + j] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("elu values at reference points") {
  const auto& ops = kernels::ops<double>();
  const double x[3] = {0.0, 2.0, -0.6931471805599453};
  double y[3];
  ops.elu(x, y, 3);
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[2] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("conv1d output length and identity kernel") {
  const auto& ops = kernels::ops<double>();
  std::vector<double> x(30);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i);
  const double kern[1] = {1.0};
  std::vector<double> out(30);
  ops.conv1d_forward(x.data(), x.size(), kern, 1, out.data());
  CHECK(out == x);
}

TEST_CASE("adam first step moves weight by roughly lr") {
  const auto& ops = kernels::ops<double>();
  double w = 1.0, g = 0.3, m = 0.0, v = 0.0;
  const double bc1 = 1.0 / (1.0 - 0.9);
  const double bc2 = 1.0 / (1.0 - 0.999);
  ops.adam_update(&w, &g, &m, &v, 1, 0.005, 0.9, 0.999, 1e-7, bc1, bc2);
  CHECK(std::abs((1.0 - w) - 0.005) < 0.005 * 1e-4);
}

TEST_CASE("adam zero gradient leaves weights unchanged") {
  const auto& ops = kernels::ops<double>();
  double w = 1.25, g = 0.0, m = 0.0, v = 0.0;
  ops.adam_update(&w, &g, &m, &v, 1, 0.005, 0.9, 0.999, 1e-7, 10.0, 1000.0);
  CHECK(w == 1.25);
}

TEST_CASE("backend dispatch reports a supported backend") {
  CHECK(kernels::backend_supported(kernels::active_backend()));
  CHECK(kernels::backend_supported(Backend::scalar));
}

TEST_CASE("avx2 backend matches scalar reference") {
  if (!kernels::backend_supported(Backend::avx2)) {
    MESSAGE("avx2 not available on this host; equivalence pass skipped");
    return;
  }
  Rng rng(20250810);
  for (int pass = 0; pass < 40; ++pass) {
    equivalence_pass<float>(Backend::avx2, rng);
    equivalence_pass<double>(Backend::avx2, rng);
  }
}

TEST_CASE("forced backend round trip") {
  const Backend before = kernels::active_backend();
  kernels::force_backend(Backend::scalar);
  CHECK(kernels::active_backend() == Backend::scalar);
  kernels::force_backend(before);
  CHECK(kernels::active_backend() == before);
}
