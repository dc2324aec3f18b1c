#include "spectune/kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "spectune/errors.hpp"

namespace spectune::kernels {

namespace detail {

bool avx2_runtime() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace detail

namespace {

Backend detect_backend() {
  if (const char* env = std::getenv("SPECTUNE_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::avx2)) return Backend::avx2;
  }
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect_backend()};
  return backend;
}

}  // namespace

Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return detail::avx2_compiled() && detail::avx2_runtime();
  }
  return false;
}

void force_backend(Backend b) {
  if (!backend_supported(b))
    throw ArgumentError(std::string("kernel backend not supported on this host: ") +
                        backend_name(b));
  current().store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "?";
}

template <typename T>
const Ops<T>& ops(Backend b) {
  if (!backend_supported(b))
    throw ArgumentError(std::string("kernel backend not supported on this host: ") +
                        backend_name(b));
  return b == Backend::avx2 ? detail::avx2_table<T>() : detail::scalar_table<T>();
}

template <typename T>
const Ops<T>& ops() {
  return ops<T>(active_backend());
}

template const Ops<float>& ops<float>();
template const Ops<double>& ops<double>();
template const Ops<float>& ops<float>(Backend);
template const Ops<double>& ops<double>(Backend);

}  // namespace spectune::kernels
