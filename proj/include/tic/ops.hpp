#pragma once

#include <cmath>
#include <cstdint>
#include <tuple>

#include "tic/tensor.hpp"
#include "tic/threads.hpp"

namespace tic {

// Per-position channel mixing: weight [C_out x C_in], bias [C_out].
template <typename T>
struct LinearParams {
  Matrix<T> weight;
  std::vector<T> bias;

  LinearParams() = default;
  LinearParams(int c_out, int c_in) : weight(c_out, c_in), bias(std::size_t(c_out), T(0)) {}

  int c_out() const { return weight.rows; }
  int c_in() const { return weight.cols; }
};

template <typename T>
struct LayerNormParams {
  std::vector<T> gamma;
  std::vector<T> beta;
  T eps = T(1e-5);

  LayerNormParams() = default;
  explicit LayerNormParams(int c, T eps_ = T(1e-5))
      : gamma(std::size_t(c), T(1)), beta(std::size_t(c), T(0)), eps(eps_) {}

  int channels() const { return int(gamma.size()); }
};

// out[b,:,h,w] = weight * x[b,:,h,w] + bias
template <typename T>
Tensor4<T> linear_fwd(const Tensor4<T>& x, const LinearParams<T>& p) {
  check_dim(x.c == p.c_in(), "linear_fwd: input has " + std::to_string(x.c) +
                                 " channels, weight expects " + std::to_string(p.c_in()));
  Tensor4<T> out(x.b, p.c_out(), x.h, x.w);
  const int hw = x.h * x.w;
  parallel_for(x.b, [&](std::int64_t bi) {
    for (int co = 0; co < p.c_out(); ++co) {
      T* o = out.plane(int(bi), co);
      const T* wrow = p.weight.row(co);
      for (int i = 0; i < hw; ++i) o[i] = p.bias[co];
      for (int ci = 0; ci < p.c_in(); ++ci) {
        const T wv = wrow[ci];
        if (wv == T(0)) continue;
        const T* xi = x.plane(int(bi), ci);
        for (int i = 0; i < hw; ++i) o[i] += wv * xi[i];
      }
    }
  });
  return out;
}

// Adjoint of linear_fwd; needs the forward input.
// grad_weight[co,ci] = sum over positions of grad_out[co] * x[ci]
template <typename T>
struct LinearGrads {
  Tensor4<T> grad_x;
  Matrix<T> grad_weight;
  std::vector<T> grad_bias;
};

template <typename T>
LinearGrads<T> linear_bwd(const Tensor4<T>& grad_out, const Tensor4<T>& x,
                          const LinearParams<T>& p) {
  check_dim(!x.empty(), "linear_bwd: missing saved input");
  check_dim(x.c == p.c_in() && grad_out.c == p.c_out() && grad_out.b == x.b &&
                grad_out.h == x.h && grad_out.w == x.w,
            "linear_bwd: shapes inconsistent with forward");
  LinearGrads<T> g;
  g.grad_x = Tensor4<T>(x.b, x.c, x.h, x.w);
  g.grad_weight = Matrix<T>(p.c_out(), p.c_in());
  g.grad_bias.assign(std::size_t(p.c_out()), T(0));
  const int hw = x.h * x.w;

  parallel_for(x.b, [&](std::int64_t bi) {
    for (int ci = 0; ci < p.c_in(); ++ci) {
      T* gx = g.grad_x.plane(int(bi), ci);
      for (int co = 0; co < p.c_out(); ++co) {
        const T wv = p.weight.at(co, ci);
        if (wv == T(0)) continue;
        const T* go = grad_out.plane(int(bi), co);
        for (int i = 0; i < hw; ++i) gx[i] += wv * go[i];
      }
    }
  });
  // Parameter grads accumulate serially in batch order.
  for (int bi = 0; bi < x.b; ++bi) {
    for (int co = 0; co < p.c_out(); ++co) {
      const T* go = grad_out.plane(bi, co);
      T* gw = g.grad_weight.row(co);
      for (int ci = 0; ci < p.c_in(); ++ci) {
        const T* xi = x.plane(bi, ci);
        T acc = T(0);
        for (int i = 0; i < hw; ++i) acc += go[i] * xi[i];
        gw[ci] += acc;
      }
      T acc = T(0);
      for (int i = 0; i < hw; ++i) acc += go[i];
      g.grad_bias[co] += acc;
    }
  }
  return g;
}

// LayerNorm over the channel axis, independently per (b, h, w) position.
template <typename T>
struct LayerNormSaved {
  Tensor4<T> x;
  // mean and inverse stddev per position, laid out [b][h][w].
  std::vector<T> mean;
  std::vector<T> inv_std;
};

template <typename T>
Tensor4<T> layernorm_fwd(const Tensor4<T>& x, const LayerNormParams<T>& p,
                         LayerNormSaved<T>* saved = nullptr) {
  check_dim(x.c == p.channels(), "layernorm_fwd: channel mismatch");
  check_config(p.eps > T(0), "layernorm_fwd: eps must be > 0");
  Tensor4<T> out(x.b, x.c, x.h, x.w);
  const int hw = x.h * x.w;
  std::vector<T> mean(std::size_t(x.b) * hw), inv_std(std::size_t(x.b) * hw);

  parallel_for(x.b, [&](std::int64_t bi) {
    for (int i = 0; i < hw; ++i) {
      T mu = T(0);
      for (int ci = 0; ci < x.c; ++ci) mu += x.plane(int(bi), ci)[i];
      mu /= T(x.c);
      T var = T(0);
      for (int ci = 0; ci < x.c; ++ci) {
        const T d = x.plane(int(bi), ci)[i] - mu;
        var += d * d;
      }
      var /= T(x.c);
      const T is = T(1) / std::sqrt(var + p.eps);
      mean[std::size_t(bi) * hw + i] = mu;
      inv_std[std::size_t(bi) * hw + i] = is;
      for (int ci = 0; ci < x.c; ++ci) {
        const T xhat = (x.plane(int(bi), ci)[i] - mu) * is;
        out.plane(int(bi), ci)[i] = xhat * p.gamma[ci] + p.beta[ci];
      }
    }
  });
  if (saved) {
    saved->x = x;
    saved->mean = std::move(mean);
    saved->inv_std = std::move(inv_std);
  }
  return out;
}

template <typename T>
struct LayerNormGrads {
  Tensor4<T> grad_x;
  std::vector<T> grad_gamma;
  std::vector<T> grad_beta;
};

template <typename T>
LayerNormGrads<T> layernorm_bwd(const Tensor4<T>& grad_out, const LayerNormSaved<T>& saved,
                                const LayerNormParams<T>& p) {
  check_dim(!saved.x.empty(), "layernorm_bwd: missing saved input");
  const Tensor4<T>& x = saved.x;
  check_dim(grad_out.same_dims(x), "layernorm_bwd: grad dims mismatch");
  LayerNormGrads<T> g;
  g.grad_x = Tensor4<T>(x.b, x.c, x.h, x.w);
  g.grad_gamma.assign(std::size_t(x.c), T(0));
  g.grad_beta.assign(std::size_t(x.c), T(0));
  const int hw = x.h * x.w;
  const T n = T(x.c);

  for (int bi = 0; bi < x.b; ++bi) {
    for (int i = 0; i < hw; ++i) {
      const T mu = saved.mean[std::size_t(bi) * hw + i];
      const T is = saved.inv_std[std::size_t(bi) * hw + i];
      T sum_gg = T(0), sum_ggx = T(0);
      for (int ci = 0; ci < x.c; ++ci) {
        const T xhat = (x.plane(bi, ci)[i] - mu) * is;
        const T go = grad_out.plane(bi, ci)[i];
        const T gg = go * p.gamma[ci];
        sum_gg += gg;
        sum_ggx += gg * xhat;
        g.grad_gamma[ci] += go * xhat;
        g.grad_beta[ci] += go;
      }
      for (int ci = 0; ci < x.c; ++ci) {
        const T xhat = (x.plane(bi, ci)[i] - mu) * is;
        const T gg = grad_out.plane(bi, ci)[i] * p.gamma[ci];
        g.grad_x.plane(bi, ci)[i] = (gg - sum_gg / n - xhat * sum_ggx / n) * is;
      }
    }
  }
  return g;
}

// GELU, tanh approximation.
inline constexpr double kGeluC0 = 0.7978845608028654;  // sqrt(2/pi)
inline constexpr double kGeluC1 = 0.044715;

template <typename T>
T gelu_scalar(T x) {
  const T u = T(kGeluC0) * (x + T(kGeluC1) * x * x * x);
  return T(0.5) * x * (T(1) + std::tanh(u));
}

template <typename T>
T gelu_grad_scalar(T x) {
  const T u = T(kGeluC0) * (x + T(kGeluC1) * x * x * x);
  const T t = std::tanh(u);
  const T du = T(kGeluC0) * (T(1) + T(3) * T(kGeluC1) * x * x);
  return T(0.5) * (T(1) + t) + T(0.5) * x * (T(1) - t * t) * du;
}

template <typename T>
Tensor4<T> gelu_fwd(const Tensor4<T>& x) {
  Tensor4<T> out(x.b, x.c, x.h, x.w);
  for (std::size_t i = 0; i < x.data.size(); ++i) out.data[i] = gelu_scalar(x.data[i]);
  return out;
}

template <typename T>
Tensor4<T> gelu_bwd(const Tensor4<T>& grad_out, const Tensor4<T>& x) {
  check_dim(grad_out.same_dims(x), "gelu_bwd: dims mismatch");
  Tensor4<T> gx(x.b, x.c, x.h, x.w);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    gx.data[i] = grad_out.data[i] * gelu_grad_scalar(x.data[i]);
  return gx;
}

// Masked softmax over one contiguous row of n slots. Masked slots come out
// exactly 0; valid slots are stabilized by max-subtraction and sum to 1.
// The attention cores and the public tensor op share this kernel.
template <typename T>
void softmax_masked_row(const T* scores, const std::uint8_t* valid, int n, T* out) {
  T mx = T(0);
  bool any = false;
  for (int i = 0; i < n; ++i) {
    if (!valid[i]) continue;
    if (!any || scores[i] > mx) mx = scores[i];
    any = true;
  }
  if (!any) throw DimensionError("softmax_masked_row: all slots masked");
  T sum = T(0);
  for (int i = 0; i < n; ++i) {
    if (valid[i]) {
      out[i] = std::exp(scores[i] - mx);
      sum += out[i];
    } else {
      out[i] = T(0);
    }
  }
  const T inv = T(1) / sum;
  for (int i = 0; i < n; ++i)
    if (valid[i]) out[i] *= inv;
}

// grad_scores[i] = dot[i] * (grad_dot[i] - sum_j dot[j] * grad_dot[j])
template <typename T>
void softmax_masked_row_bwd(const T* dot, const std::uint8_t* valid, int n,
                            const T* grad_dot, T* grad_scores) {
  T inner = T(0);
  for (int i = 0; i < n; ++i)
    if (valid[i]) inner += dot[i] * grad_dot[i];
  for (int i = 0; i < n; ++i)
    grad_scores[i] = valid[i] ? dot[i] * (grad_dot[i] - inner) : T(0);
}

// Tensor-level masked softmax over the last (W) axis; rows are (b, c, h).
// mask has dims (1, 1, H, W) or matches scores exactly.
template <typename T>
Tensor4<T> softmax_lastdim_fwd(const Tensor4<T>& scores, const Tensor4<std::uint8_t>& mask) {
  const bool shared = (mask.b == 1 && mask.c == 1 && mask.h == scores.h && mask.w == scores.w);
  check_dim(shared || (mask.b == scores.b && mask.c == scores.c && mask.h == scores.h &&
                       mask.w == scores.w),
            "softmax_lastdim_fwd: mask dims incompatible");
  Tensor4<T> out(scores.b, scores.c, scores.h, scores.w);
  for (int bi = 0; bi < scores.b; ++bi)
    for (int ci = 0; ci < scores.c; ++ci)
      for (int hi = 0; hi < scores.h; ++hi) {
        const T* row = &scores.at(bi, ci, hi, 0);
        const std::uint8_t* m =
            shared ? &mask.at(0, 0, hi, 0) : &mask.at(bi, ci, hi, 0);
        softmax_masked_row(row, m, scores.w, &out.at(bi, ci, hi, 0));
      }
  return out;
}

template <typename T>
Tensor4<T> softmax_lastdim_bwd(const Tensor4<T>& grad_out, const Tensor4<T>& dot,
                               const Tensor4<std::uint8_t>& mask) {
  check_dim(grad_out.same_dims(dot), "softmax_lastdim_bwd: dims mismatch");
  const bool shared = (mask.b == 1 && mask.c == 1);
  Tensor4<T> gs(dot.b, dot.c, dot.h, dot.w);
  for (int bi = 0; bi < dot.b; ++bi)
    for (int ci = 0; ci < dot.c; ++ci)
      for (int hi = 0; hi < dot.h; ++hi) {
        const std::uint8_t* m =
            shared ? &mask.at(0, 0, hi, 0) : &mask.at(bi, ci, hi, 0);
        softmax_masked_row_bwd(&dot.at(bi, ci, hi, 0), m, dot.w,
                               &grad_out.at(bi, ci, hi, 0), &gs.at(bi, ci, hi, 0));
      }
  return gs;
}

}  // namespace tic
