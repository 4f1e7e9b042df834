#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tic/errors.hpp"

namespace tic {

// Dense rank-4 array in (batch, channel, height, width) order, row-major.
// The token-map carrier shared by every module. A default-constructed
// Tensor4 is an empty placeholder; any tensor entering an operation must
// have all dims >= 1.
template <typename T>
struct Tensor4 {
  int b = 0, c = 0, h = 0, w = 0;
  std::vector<T> data;

  Tensor4() = default;
  Tensor4(int b_, int c_, int h_, int w_, T fill = T(0)) : b(b_), c(c_), h(h_), w(w_) {
    check_dim(b_ >= 1 && c_ >= 1 && h_ >= 1 && w_ >= 1,
              "Tensor4 dims must all be >= 1, got " + dims_str());
    data.assign(size(), fill);
  }

  std::size_t size() const {
    return std::size_t(b) * std::size_t(c) * std::size_t(h) * std::size_t(w);
  }
  bool empty() const { return data.empty(); }

  std::size_t index(int bi, int ci, int hi, int wi) const {
    return ((std::size_t(bi) * c + ci) * h + hi) * w + wi;
  }
  T& at(int bi, int ci, int hi, int wi) { return data[index(bi, ci, hi, wi)]; }
  const T& at(int bi, int ci, int hi, int wi) const { return data[index(bi, ci, hi, wi)]; }

  // Contiguous H*W plane of one (batch, channel) pair.
  T* plane(int bi, int ci) { return data.data() + index(bi, ci, 0, 0); }
  const T* plane(int bi, int ci) const { return data.data() + index(bi, ci, 0, 0); }

  bool same_dims(const Tensor4& o) const {
    return b == o.b && c == o.c && h == o.h && w == o.w;
  }
  std::string dims_str() const {
    return "(" + std::to_string(b) + "," + std::to_string(c) + "," +
           std::to_string(h) + "," + std::to_string(w) + ")";
  }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  template <typename U>
  Tensor4<U> cast() const {
    Tensor4<U> out(b, c, h, w);
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
    return out;
  }
};

// Row-major matrix, used for projection weights [rows=C_out, cols=C_in].
template <typename T>
struct Matrix {
  int rows = 0, cols = 0;
  std::vector<T> data;

  Matrix() = default;
  Matrix(int r, int c, T fill = T(0)) : rows(r), cols(c) {
    check_dim(r >= 1 && c >= 1, "Matrix dims must be >= 1");
    data.assign(std::size_t(r) * c, fill);
  }

  T& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
  const T& at(int r, int c) const { return data[std::size_t(r) * cols + c]; }
  T* row(int r) { return data.data() + std::size_t(r) * cols; }
  const T* row(int r) const { return data.data() + std::size_t(r) * cols; }
  std::size_t size() const { return data.size(); }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
    return m;
  }
};

template <typename T>
bool all_finite(const std::vector<T>& v) {
  for (T x : v)
    if (!std::isfinite(double(x))) return false;
  return true;
}

template <typename T>
bool all_finite(const Tensor4<T>& t) {
  return all_finite(t.data);
}

template <typename T>
T max_abs_diff(const Tensor4<T>& a, const Tensor4<T>& b) {
  check_dim(a.same_dims(b), "max_abs_diff: dims differ " + a.dims_str() + " vs " + b.dims_str());
  T m = T(0);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace tic
