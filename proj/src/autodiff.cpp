/* Copyright 2026 The voxsynth Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "voxsynth/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

#include "voxsynth/errors.hpp"

namespace voxsynth {

void Node::ensure_grad() {
  if (grad.empty()) grad = Tensor(value.shape());
}

void Var::zero_grad() {
  node_->ensure_grad();
  node_->grad.fill(0.0);
}

void zero_grads(const std::vector<Var>& params) {
  for (const Var& p : params) {
    Var v = p;
    v.zero_grad();
  }
}

Var make_parameter(Tensor init) {
  auto n = std::make_shared<Node>();
  n->value = std::move(init);
  n->requires_grad = true;
  n->is_param = true;
  return Var(std::move(n));
}

Var make_constant(Tensor value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return Var(std::move(n));
}

namespace {

Var make_op(Tensor value, const std::vector<Var>& parents,
            std::function<void(Node&)> backprop) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  bool requires = false;
  n->parents.reserve(parents.size());
  for (const Var& p : parents) {
    requires = requires || p.requires_grad();
    n->parents.push_back(p.node());
  }
  n->requires_grad = requires;
  if (requires) n->backprop = std::move(backprop);
  return Var(std::move(n));
}

struct ConvDims {
  std::int64_t batch, in_ch, in_len, out_ch, kernel, out_len;
  std::int64_t stride, pad;
  bool batched;
};

ConvDims conv_dims(const Tensor& x, const Tensor& w, const Tensor& b,
                   int stride) {
  if (x.rank() != 2 && x.rank() != 3) {
    throw ShapeError("conv1d: input must be [channels, time] or "
                     "[batch, channels, time], got " + x.shape_str());
  }
  if (w.rank() != 3) {
    throw ShapeError("conv1d: weight must be [out_channels, in_channels, "
                     "kernel], got " + w.shape_str());
  }
  if (b.rank() != 1 || b.dim(0) != w.dim(0)) {
    throw ShapeError("conv1d: bias axis 0 must match weight out_channels " +
                     std::to_string(w.dim(0)) + ", got " + b.shape_str());
  }
  if (w.dim(2) % 2 == 0) {
    throw ShapeError("conv1d: kernel axis must be odd for symmetric padding, "
                     "got " + std::to_string(w.dim(2)));
  }
  if (stride < 1) {
    throw ShapeError("conv1d: stride must be positive, got " +
                     std::to_string(stride));
  }
  ConvDims d;
  d.batched = x.rank() == 3;
  d.batch = d.batched ? x.dim(0) : 1;
  d.in_ch = d.batched ? x.dim(1) : x.dim(0);
  d.in_len = d.batched ? x.dim(2) : x.dim(1);
  d.out_ch = w.dim(0);
  d.kernel = w.dim(2);
  d.stride = stride;
  d.pad = (d.kernel - 1) / 2;
  d.out_len = (d.in_len + d.stride - 1) / d.stride;  // ceil(T / stride)
  if (d.in_ch != w.dim(1)) {
    throw ShapeError("conv1d: input channel axis has " +
                     std::to_string(d.in_ch) + " channels, weight expects " +
                     std::to_string(w.dim(1)));
  }
  return d;
}

// Output indices j for one kernel tap offset where j*stride + off is a valid
// input index. Returns {lo, hi} inclusive; lo > hi means empty.
inline std::pair<std::int64_t, std::int64_t> tap_range(std::int64_t off,
                                                       std::int64_t in_len,
                                                       std::int64_t out_len,
                                                       std::int64_t stride) {
  std::int64_t lo = 0;
  if (off < 0) lo = (-off + stride - 1) / stride;
  const std::int64_t num = in_len - 1 - off;
  if (num < 0) return {1, 0};
  return {lo, std::min(out_len - 1, num / stride)};
}

void conv_forward_kernel(const double* x, const double* w, const double* bias,
                         double* y, const ConvDims& d) {
  for (std::int64_t b = 0; b < d.batch; ++b) {
    const double* xb = x + b * d.in_ch * d.in_len;
    double* yb = y + b * d.out_ch * d.out_len;
    for (std::int64_t co = 0; co < d.out_ch; ++co) {
      double* yrow = yb + co * d.out_len;
      std::fill(yrow, yrow + d.out_len, bias[co]);
      const double* wc = w + co * d.in_ch * d.kernel;
      for (std::int64_t ci = 0; ci < d.in_ch; ++ci) {
        const double* xrow = xb + ci * d.in_len;
        const double* wk = wc + ci * d.kernel;
        for (std::int64_t u = 0; u < d.kernel; ++u) {
          const double wv = wk[u];
          const std::int64_t off = u - d.pad;
          const auto [lo, hi] = tap_range(off, d.in_len, d.out_len, d.stride);
          if (d.stride == 1) {
            const double* xs = xrow + off;
            for (std::int64_t j = lo; j <= hi; ++j) yrow[j] += wv * xs[j];
          } else {
            for (std::int64_t j = lo; j <= hi; ++j)
              yrow[j] += wv * xrow[j * d.stride + off];
          }
        }
      }
    }
  }
}

void conv_backward_input(const double* gy, const double* w, double* gx,
                         const ConvDims& d) {
  for (std::int64_t b = 0; b < d.batch; ++b) {
    const double* gyb = gy + b * d.out_ch * d.out_len;
    double* gxb = gx + b * d.in_ch * d.in_len;
    for (std::int64_t co = 0; co < d.out_ch; ++co) {
      const double* gyrow = gyb + co * d.out_len;
      const double* wc = w + co * d.in_ch * d.kernel;
      for (std::int64_t ci = 0; ci < d.in_ch; ++ci) {
        double* gxrow = gxb + ci * d.in_len;
        const double* wk = wc + ci * d.kernel;
        for (std::int64_t u = 0; u < d.kernel; ++u) {
          const double wv = wk[u];
          const std::int64_t off = u - d.pad;
          const auto [lo, hi] = tap_range(off, d.in_len, d.out_len, d.stride);
          if (d.stride == 1) {
            double* gxs = gxrow + off;
            for (std::int64_t j = lo; j <= hi; ++j) gxs[j] += wv * gyrow[j];
          } else {
            for (std::int64_t j = lo; j <= hi; ++j)
              gxrow[j * d.stride + off] += wv * gyrow[j];
          }
        }
      }
    }
  }
}

void conv_backward_weight(const double* gy, const double* x, double* gw,
                          double* gb, const ConvDims& d) {
  for (std::int64_t b = 0; b < d.batch; ++b) {
    const double* gyb = gy + b * d.out_ch * d.out_len;
    const double* xb = x + b * d.in_ch * d.in_len;
    for (std::int64_t co = 0; co < d.out_ch; ++co) {
      const double* gyrow = gyb + co * d.out_len;
      double bias_acc = 0.0;
      for (std::int64_t j = 0; j < d.out_len; ++j) bias_acc += gyrow[j];
      gb[co] += bias_acc;
      double* gwc = gw + co * d.in_ch * d.kernel;
      for (std::int64_t ci = 0; ci < d.in_ch; ++ci) {
        const double* xrow = xb + ci * d.in_len;
        double* gwk = gwc + ci * d.kernel;
        for (std::int64_t u = 0; u < d.kernel; ++u) {
          const std::int64_t off = u - d.pad;
          const auto [lo, hi] = tap_range(off, d.in_len, d.out_len, d.stride);
          double acc = 0.0;
          if (d.stride == 1) {
            const double* xs = xrow + off;
            for (std::int64_t j = lo; j <= hi; ++j) acc += gyrow[j] * xs[j];
          } else {
            for (std::int64_t j = lo; j <= hi; ++j)
              acc += gyrow[j] * xrow[j * d.stride + off];
          }
          gwk[u] += acc;
        }
      }
    }
  }
}

}  // namespace

Var conv1d(const Var& input, const Var& weight, const Var& bias, int stride) {
  const ConvDims d = conv_dims(input.value(), weight.value(), bias.value(),
                               stride);
  Tensor y = d.batched ? Tensor({d.batch, d.out_ch, d.out_len})
                       : Tensor({d.out_ch, d.out_len});
  conv_forward_kernel(input.value().data(), weight.value().data(),
                      bias.value().data(), y.data(), d);
  NodePtr xn = input.node(), wn = weight.node(), bn = bias.node();
  return make_op(std::move(y), {input, weight, bias}, [xn, wn, bn, d](Node& self) {
    const double* gy = self.grad.data();
    if (xn->requires_grad) {
      xn->ensure_grad();
      conv_backward_input(gy, wn->value.data(), xn->grad.data(), d);
    }
    if (wn->requires_grad || bn->requires_grad) {
      wn->ensure_grad();
      bn->ensure_grad();
      conv_backward_weight(gy, xn->value.data(), wn->grad.data(),
                           bn->grad.data(), d);
    }
  });
}

Var upsample_linear(const Var& input, int factor) {
  const Tensor& x = input.value();
  if (x.rank() != 2 && x.rank() != 3) {
    throw ShapeError("upsample_linear: input must be [channels, time] or "
                     "[batch, channels, time], got " + x.shape_str());
  }
  if (factor < 1) {
    throw ShapeError("upsample_linear: factor must be positive, got " +
                     std::to_string(factor));
  }
  const bool batched = x.rank() == 3;
  const std::int64_t rows = batched ? x.dim(0) * x.dim(1) : x.dim(0);
  const std::int64_t in_len = batched ? x.dim(2) : x.dim(1);
  if (in_len < 2) {
    throw ShapeError("upsample_linear: degenerate input, time axis must have "
                     "at least 2 frames, got " + std::to_string(in_len));
  }
  const std::int64_t out_len = in_len * factor;
  Tensor y = batched ? Tensor({x.dim(0), x.dim(1), out_len})
                     : Tensor({x.dim(0), out_len});
  const double* xd = x.data();
  double* yd = y.data();
  const double inv = 1.0 / factor;
  for (std::int64_t r = 0; r < rows; ++r) {
    const double* xrow = xd + r * in_len;
    double* yrow = yd + r * out_len;
    for (std::int64_t i = 0; i < out_len; ++i) {
      const std::int64_t k = i / factor;
      const std::int64_t rem = i % factor;
      if (rem == 0) {
        yrow[i] = xrow[k];
      } else {
        const std::int64_t k2 = std::min(k + 1, in_len - 1);
        const double frac = static_cast<double>(rem) * inv;
        yrow[i] = xrow[k] + (xrow[k2] - xrow[k]) * frac;
      }
    }
  }
  NodePtr xn = input.node();
  const std::int64_t f = factor;
  return make_op(std::move(y), {input},
                 [xn, rows, in_len, out_len, f](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    const double* g = self.grad.data();
    double* gx = xn->grad.data();
    const double inv = 1.0 / static_cast<double>(f);
    for (std::int64_t r = 0; r < rows; ++r) {
      const double* grow = g + r * out_len;
      double* gxrow = gx + r * in_len;
      for (std::int64_t i = 0; i < out_len; ++i) {
        const std::int64_t k = i / f;
        const std::int64_t rem = i % f;
        if (rem == 0) {
          gxrow[k] += grow[i];
        } else {
          const std::int64_t k2 = std::min(k + 1, in_len - 1);
          const double frac = static_cast<double>(rem) * inv;
          gxrow[k] += (1.0 - frac) * grow[i];
          gxrow[k2] += frac * grow[i];
        }
      }
    }
  });
}

namespace {

template <typename Fwd, typename Dfn>
Var unary_map(const Var& x, Fwd fwd, Dfn dgrad) {
  Tensor y = x.value();
  for (double& v : y.values()) v = fwd(v);
  NodePtr xn = x.node();
  return make_op(std::move(y), {x}, [xn, dgrad](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    const double* g = self.grad.data();
    const double* xv = xn->value.data();
    const double* yv = self.value.data();
    double* gx = xn->grad.data();
    const std::int64_t n = self.value.size();
    for (std::int64_t i = 0; i < n; ++i) gx[i] += dgrad(xv[i], yv[i]) * g[i];
  });
}

}  // namespace

Var relu(const Var& x) {
  return unary_map(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double xv, double) { return xv > 0.0 ? 1.0 : 0.0; });
}

Var leaky_relu(const Var& x, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) {
    throw ConfigError("leaky_relu: slope must be in (0, 1), got " +
                      std::to_string(slope));
  }
  return unary_map(
      x, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double xv, double) { return xv > 0.0 ? 1.0 : slope; });
}

Var tanh_op(const Var& x) {
  return unary_map(
      x, [](double v) { return std::tanh(v); },
      [](double, double yv) { return 1.0 - yv * yv; });
}

Var abs_op(const Var& x) {
  return unary_map(
      x, [](double v) { return std::abs(v); },
      [](double xv, double) {
        return xv > 0.0 ? 1.0 : (xv < 0.0 ? -1.0 : 0.0);
      });
}

Var concat_channels(const std::vector<Var>& parts) {
  if (parts.empty()) {
    throw ShapeError("concat_channels: need at least one input");
  }
  const Tensor& first = parts[0].value();
  if (first.rank() != 2 && first.rank() != 3) {
    throw ShapeError("concat_channels: inputs must be rank 2 or 3, got " +
                     first.shape_str());
  }
  const bool batched = first.rank() == 3;
  const std::int64_t batch = batched ? first.dim(0) : 1;
  const std::int64_t time = batched ? first.dim(2) : first.dim(1);
  std::int64_t total_ch = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    const Tensor& t = parts[i].value();
    if (t.rank() != first.rank()) {
      throw ShapeError("concat_channels: input " + std::to_string(i) +
                       " rank differs from input 0");
    }
    const std::int64_t b = batched ? t.dim(0) : 1;
    const std::int64_t tt = batched ? t.dim(2) : t.dim(1);
    if (b != batch) {
      throw ShapeError("concat_channels: input " + std::to_string(i) +
                       " batch axis " + std::to_string(b) + " != " +
                       std::to_string(batch));
    }
    if (tt != time) {
      throw ShapeError("concat_channels: input " + std::to_string(i) +
                       " time axis " + std::to_string(tt) + " != " +
                       std::to_string(time));
    }
    total_ch += batched ? t.dim(1) : t.dim(0);
  }
  Tensor y = batched ? Tensor({batch, total_ch, time})
                     : Tensor({total_ch, time});
  std::vector<std::int64_t> ch_offsets(parts.size());
  {
    std::int64_t off = 0;
    for (size_t i = 0; i < parts.size(); ++i) {
      ch_offsets[i] = off;
      const Tensor& t = parts[i].value();
      const std::int64_t ch = batched ? t.dim(1) : t.dim(0);
      for (std::int64_t b = 0; b < batch; ++b) {
        std::memcpy(y.data() + (b * total_ch + off) * time,
                    t.data() + b * ch * time,
                    static_cast<size_t>(ch * time) * sizeof(double));
      }
      off += ch;
    }
  }
  std::vector<NodePtr> nodes;
  nodes.reserve(parts.size());
  for (const Var& p : parts) nodes.push_back(p.node());
  return make_op(std::move(y), parts,
                 [nodes, ch_offsets, batch, total_ch, time, batched](Node& self) {
    const double* g = self.grad.data();
    for (size_t i = 0; i < nodes.size(); ++i) {
      Node* p = nodes[i].get();
      if (!p->requires_grad) continue;
      p->ensure_grad();
      const std::int64_t ch = batched ? p->value.dim(1) : p->value.dim(0);
      for (std::int64_t b = 0; b < batch; ++b) {
        const double* gsrc = g + (b * total_ch + ch_offsets[i]) * time;
        double* gdst = p->grad.data() + b * ch * time;
        const std::int64_t n = ch * time;
        for (std::int64_t k = 0; k < n; ++k) gdst[k] += gsrc[k];
      }
    }
  });
}

Var detach(const Var& x) { return make_constant(x.value()); }

Var reshape(const Var& x, std::vector<std::int64_t> shape) {
  Tensor y = x.value().reshaped(std::move(shape));
  NodePtr xn = x.node();
  return make_op(std::move(y), {x}, [xn](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    const double* g = self.grad.data();
    double* gx = xn->grad.data();
    const std::int64_t n = self.value.size();
    for (std::int64_t i = 0; i < n; ++i) gx[i] += g[i];
  });
}

Var flatten_rows(const Var& x) {
  const Tensor& t = x.value();
  if (t.rank() != 3) {
    throw ShapeError("flatten_rows: input must be [batch, channels, time], "
                     "got " + t.shape_str());
  }
  return reshape(x, {t.dim(0), t.dim(1) * t.dim(2)});
}

Var row_dot(const Var& x, const Var& w, const Var& b) {
  const Tensor& xt = x.value();
  const Tensor& wt = w.value();
  const Tensor& bt = b.value();
  if (xt.rank() != 2) {
    throw ShapeError("row_dot: input must be [batch, features], got " +
                     xt.shape_str());
  }
  if (wt.rank() != 1 || wt.dim(0) != xt.dim(1)) {
    throw ShapeError("row_dot: weight axis 0 must match feature axis " +
                     std::to_string(xt.dim(1)) + ", got " + wt.shape_str());
  }
  if (bt.size() != 1) {
    throw ShapeError("row_dot: bias must be a scalar, got " + bt.shape_str());
  }
  const std::int64_t batch = xt.dim(0);
  const std::int64_t feat = xt.dim(1);
  Tensor y({batch});
  for (std::int64_t i = 0; i < batch; ++i) {
    const double* row = xt.data() + i * feat;
    double acc = bt[0];
    for (std::int64_t f = 0; f < feat; ++f) acc += row[f] * wt[f];
    y[i] = acc;
  }
  NodePtr xn = x.node(), wn = w.node(), bn = b.node();
  return make_op(std::move(y), {x, w, b}, [xn, wn, bn, batch, feat](Node& self) {
    const double* g = self.grad.data();
    if (xn->requires_grad) {
      xn->ensure_grad();
      const double* wv = wn->value.data();
      for (std::int64_t i = 0; i < batch; ++i) {
        double* gxrow = xn->grad.data() + i * feat;
        const double gi = g[i];
        for (std::int64_t f = 0; f < feat; ++f) gxrow[f] += gi * wv[f];
      }
    }
    if (wn->requires_grad) {
      wn->ensure_grad();
      double* gw = wn->grad.data();
      for (std::int64_t i = 0; i < batch; ++i) {
        const double* xrow = xn->value.data() + i * feat;
        const double gi = g[i];
        for (std::int64_t f = 0; f < feat; ++f) gw[f] += gi * xrow[f];
      }
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      double acc = 0.0;
      for (std::int64_t i = 0; i < batch; ++i) acc += g[i];
      bn->grad[0] += acc;
    }
  });
}

namespace {

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() +
                     " vs " + b.shape_str());
  }
}

}  // namespace

Var add(const Var& a, const Var& b) {
  check_same_shape("add", a.value(), b.value());
  Tensor y = a.value();
  const double* bv = b.value().data();
  double* yv = y.data();
  for (std::int64_t i = 0; i < y.size(); ++i) yv[i] += bv[i];
  NodePtr an = a.node(), bn = b.node();
  return make_op(std::move(y), {a, b}, [an, bn](Node& self) {
    const double* g = self.grad.data();
    const std::int64_t n = self.value.size();
    for (Node* p : {an.get(), bn.get()}) {
      if (!p->requires_grad) continue;
      p->ensure_grad();
      double* gp = p->grad.data();
      for (std::int64_t i = 0; i < n; ++i) gp[i] += g[i];
    }
  });
}

Var sub(const Var& a, const Var& b) {
  check_same_shape("sub", a.value(), b.value());
  Tensor y = a.value();
  const double* bv = b.value().data();
  double* yv = y.data();
  for (std::int64_t i = 0; i < y.size(); ++i) yv[i] -= bv[i];
  NodePtr an = a.node(), bn = b.node();
  return make_op(std::move(y), {a, b}, [an, bn](Node& self) {
    const double* g = self.grad.data();
    const std::int64_t n = self.value.size();
    if (an->requires_grad) {
      an->ensure_grad();
      double* ga = an->grad.data();
      for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i];
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      double* gb = bn->grad.data();
      for (std::int64_t i = 0; i < n; ++i) gb[i] -= g[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  check_same_shape("mul", a.value(), b.value());
  Tensor y = a.value();
  const double* bv = b.value().data();
  double* yv = y.data();
  for (std::int64_t i = 0; i < y.size(); ++i) yv[i] *= bv[i];
  NodePtr an = a.node(), bn = b.node();
  return make_op(std::move(y), {a, b}, [an, bn](Node& self) {
    const double* g = self.grad.data();
    const std::int64_t n = self.value.size();
    if (an->requires_grad) {
      an->ensure_grad();
      double* ga = an->grad.data();
      const double* bv = bn->value.data();
      for (std::int64_t i = 0; i < n; ++i) ga[i] += g[i] * bv[i];
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      double* gb = bn->grad.data();
      const double* av = an->value.data();
      for (std::int64_t i = 0; i < n; ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var scale(const Var& x, double k) {
  Tensor y = x.value();
  for (double& v : y.values()) v *= k;
  NodePtr xn = x.node();
  return make_op(std::move(y), {x}, [xn, k](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    const double* g = self.grad.data();
    double* gx = xn->grad.data();
    const std::int64_t n = self.value.size();
    for (std::int64_t i = 0; i < n; ++i) gx[i] += k * g[i];
  });
}

Var sum_all(const Var& x) {
  double acc = 0.0;
  for (double v : x.value().values()) acc += v;
  NodePtr xn = x.node();
  return make_op(Tensor::scalar(acc), {x}, [xn](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    const double g = self.grad[0];
    for (double& gv : xn->grad.values()) gv += g;
  });
}

Var mean_all(const Var& x) {
  const double inv = 1.0 / static_cast<double>(x.value().size());
  double acc = 0.0;
  for (double v : x.value().values()) acc += v;
  NodePtr xn = x.node();
  return make_op(Tensor::scalar(acc * inv), {x}, [xn, inv](Node& self) {
    if (!xn->requires_grad) return;
    xn->ensure_grad();
    const double g = self.grad[0] * inv;
    for (double& gv : xn->grad.values()) gv += g;
  });
}

void backward(const Var& loss) {
  if (!loss.defined()) throw ContractError("backward: loss is undefined");
  if (loss.value().size() != 1) {
    throw ContractError("backward: loss must be a scalar, got shape " +
                        loss.value().shape_str());
  }
  // Visit marks key the per-call visited set; single-threaded by contract.
  static std::uint64_t mark_counter = 0;
  const std::uint64_t mark = ++mark_counter;

  // Post-order DFS over parent edges: ancestors first, loss last.
  std::vector<Node*> order;
  std::vector<std::pair<Node*, size_t>> stack;
  Node* root = loss.node().get();
  root->visit_mark = mark;
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->visit_mark != mark) {
        parent->visit_mark = mark;
        stack.emplace_back(parent, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  // Parameters accumulate across calls; intermediate buffers are reset so a
  // repeated backward on the same graph adds one more full contribution.
  for (Node* node : order) {
    if (!node->requires_grad) continue;
    node->ensure_grad();
    if (!node->is_param) node->grad.fill(0.0);
  }
  root->ensure_grad();
  root->grad[0] += 1.0;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->requires_grad && node->backprop) node->backprop(*node);
  }
}

}  // namespace voxsynth
