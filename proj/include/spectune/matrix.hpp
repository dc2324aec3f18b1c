#pragma once

#include <cstddef>
#include <vector>

#include "spectune/errors.hpp"

namespace spectune {

// Dense row-major matrix. Plain storage, no arithmetic; the kernels layer
// operates on raw pointers.
template <typename T>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), v(r * c, fill) {}

  T* row(std::size_t r) { return v.data() + r * cols; }
  const T* row(std::size_t r) const { return v.data() + r * cols; }

  T& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  T at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }

  bool empty() const { return rows == 0 || cols == 0; }

  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    v.assign(r * c, T{});
  }

  template <typename U>
  Matrix<U> cast() const {
    Matrix<U> out(rows, cols);
    for (std::size_t i = 0; i < v.size(); ++i) out.v[i] = static_cast<U>(v[i]);
    return out;
  }
};

}  // namespace spectune
