// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "hns/mlp.hpp"

#include <cmath>
#include <numbers>

#include "hns/errors.hpp"
#include "hns/parallel.hpp"
#include "hns/rng.hpp"

namespace hns {

std::size_t MlpArchitecture::parameter_count() const {
  std::size_t in = static_cast<std::size_t>(input_dim);
  std::size_t w = static_cast<std::size_t>(hidden_width);
  std::size_t out = static_cast<std::size_t>(output_dim);
  return (in * w + w) + static_cast<std::size_t>(hidden_layers - 1) * (w * w + w) +
         (out * w + out);
}

void MlpArchitecture::validate() const {
  if (input_dim <= 0 || hidden_layers <= 0 || hidden_width <= 0 || output_dim <= 0) {
    throw InvalidArgumentError("mlp architecture: all dimensions must be positive");
  }
  if (positional_levels < 0) {
    throw InvalidArgumentError("mlp architecture: positional levels must be >= 0");
  }
  if (input_dim != positional_encoding_dim(positional_levels)) {
    throw InvalidArgumentError("mlp architecture: input_dim must equal 3 + 6L");
  }
}

MlpArchitecture MlpArchitecture::coarse() { return {3, 20, 12, 3, 0}; }

MlpArchitecture MlpArchitecture::fine(int hidden_layers, int hidden_width,
                                      int positional_levels) {
  return {positional_encoding_dim(positional_levels), hidden_layers, hidden_width, 3,
          positional_levels};
}

void positional_encode(const Vec3& point, int levels, std::span<double> out) {
  if (static_cast<int>(out.size()) != positional_encoding_dim(levels)) {
    throw InvalidArgumentError("positional_encode: wrong output size");
  }
  out[0] = point.x;
  out[1] = point.y;
  out[2] = point.z;
  double freq = std::numbers::pi;
  for (int level = 0; level < levels; ++level) {
    for (int c = 0; c < 3; ++c) {
      double a = freq * point[c];
      out[3 + 6 * level + 2 * c] = std::sin(a);
      out[3 + 6 * level + 2 * c + 1] = std::cos(a);
    }
    freq *= 2.0;
  }
}

double cosine_lr(int step, int total, double base_lr) {
  if (total <= 0 || step < 0 || step > total) {
    throw InvalidArgumentError("cosine_lr: need 0 <= step <= total, total > 0");
  }
  return base_lr * 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) /
                                         static_cast<double>(total)));
}

namespace {

template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic> silu(
    const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& z) {
  return z / (Real(1) + (-z).exp());
}

// d/dz silu(z) = s(z) * (1 + z * (1 - s(z)))
template <typename Real>
Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic> silu_grad(
    const Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>& z) {
  auto s = (Real(1) / (Real(1) + (-z).exp())).eval();
  return s * (Real(1) + z * (Real(1) - s));
}

}  // namespace

template <typename Real>
MlpT<Real>::MlpT(const MlpArchitecture& arch) : arch_(arch) {
  arch.validate();
  weights.resize(static_cast<std::size_t>(arch.layer_count()));
  biases.resize(static_cast<std::size_t>(arch.layer_count()));
  for (int layer = 0; layer <= arch.hidden_layers; ++layer) {
    int fan_in = layer == 0 ? arch.input_dim : arch.hidden_width;
    int fan_out = layer == arch.hidden_layers ? arch.output_dim : arch.hidden_width;
    weights[static_cast<std::size_t>(layer)].setZero(fan_out, fan_in);
    biases[static_cast<std::size_t>(layer)].setZero(fan_out);
  }
}

template <typename Real>
MlpT<Real> MlpT<Real>::zeros(const MlpArchitecture& arch) {
  return MlpT(arch);
}

template <typename Real>
MlpT<Real> MlpT<Real>::random_init(const MlpArchitecture& arch, std::uint64_t seed) {
  MlpT net(arch);
  int last = arch.hidden_layers;
  // Residual branches carry an extra 1/sqrt(H-1) so depth does not inflate
  // activations; the output layer is shrunk so initial outputs sit near zero.
  double residual_scale = last > 1 ? 1.0 / std::sqrt(static_cast<double>(last - 1)) : 1.0;
  for (int layer = 0; layer <= last; ++layer) {
    Matrix& w = net.weights[static_cast<std::size_t>(layer)];
    double bound = std::sqrt(6.0 / static_cast<double>(w.cols()));
    if (layer == last) bound *= 1e-2;
    else if (layer > 0) bound *= residual_scale;
    Rng rng(seed, static_cast<std::uint64_t>(layer));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = static_cast<Real>(rng.next_double(-bound, bound));
      }
    }
  }
  return net;
}

template <typename Real>
MlpT<Real> MlpT<Real>::from_parameters(const MlpArchitecture& arch, std::span<const Real> params) {
  if (params.size() != arch.parameter_count()) {
    throw InvalidArgumentError("mlp: parameter blob size does not match the architecture");
  }
  MlpT net(arch);
  std::size_t pos = 0;
  for (std::size_t layer = 0; layer < net.weights.size(); ++layer) {
    Matrix& w = net.weights[layer];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = params[pos++];
    }
    Vector& b = net.biases[layer];
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = params[pos++];
  }
  return net;
}

template <typename Real>
std::vector<Real> MlpT<Real>::flatten() const {
  std::vector<Real> out;
  out.reserve(parameter_count());
  for (std::size_t layer = 0; layer < weights.size(); ++layer) {
    const Matrix& w = weights[layer];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out.push_back(w(r, c));
    }
    const Vector& b = biases[layer];
    for (Eigen::Index r = 0; r < b.size(); ++r) out.push_back(b(r));
  }
  return out;
}

template <typename Real>
typename MlpT<Real>::Matrix MlpT<Real>::forward(const Matrix& batch) const {
  if (batch.cols() != arch_.input_dim) {
    throw InvalidArgumentError("mlp forward: batch width does not match input_dim");
  }
  std::size_t last = weights.size() - 1;
  Matrix y = silu<Real>(((batch * weights[0].transpose()).rowwise() + biases[0].transpose()).array())
                 .matrix();
  for (std::size_t i = 1; i < last; ++i) {
    Matrix z = (y * weights[i].transpose()).rowwise() + biases[i].transpose();
    y += silu<Real>(z.array()).matrix();
  }
  Matrix out = (y * weights[last].transpose()).rowwise() + biases[last].transpose();
  if (!out.allFinite()) throw NumericError("mlp forward produced a non-finite output");
  return out;
}

template <typename Real>
Real MlpT<Real>::forward_backward(const Matrix& batch, const Matrix& targets,
                                  MlpT* gradients) const {
  if (batch.cols() != arch_.input_dim || targets.cols() != arch_.output_dim ||
      batch.rows() != targets.rows()) {
    throw InvalidArgumentError("mlp forward_backward: inconsistent batch/target shapes");
  }
  const std::size_t last = weights.size() - 1;
  const Eigen::Index n = batch.rows();

  std::vector<Matrix> z(last);  // pre-activations per hidden layer
  std::vector<Matrix> y(last);  // residual stream after each hidden layer
  z[0] = (batch * weights[0].transpose()).rowwise() + biases[0].transpose();
  y[0] = silu<Real>(z[0].array()).matrix();
  for (std::size_t i = 1; i < last; ++i) {
    z[i] = (y[i - 1] * weights[i].transpose()).rowwise() + biases[i].transpose();
    y[i] = y[i - 1] + silu<Real>(z[i].array()).matrix();
  }
  Matrix out = (y[last - 1] * weights[last].transpose()).rowwise() + biases[last].transpose();

  Matrix diff = out - targets;
  Real loss = diff.squaredNorm() / static_cast<Real>(n);
  if (!std::isfinite(static_cast<double>(loss))) {
    throw NumericError("mlp loss is non-finite");
  }
  if (!gradients) return loss;

  if (gradients->arch_ != arch_) *gradients = zeros(arch_);

  Matrix d_out = diff * (Real(2) / static_cast<Real>(n));
  gradients->weights[last].noalias() = d_out.transpose() * y[last - 1];
  gradients->biases[last] = d_out.colwise().sum().transpose();

  Matrix dy = d_out * weights[last];
  for (std::size_t i = last - 1; i >= 1; --i) {
    Matrix dz = (dy.array() * silu_grad<Real>(z[i].array())).matrix();
    gradients->weights[i].noalias() = dz.transpose() * y[i - 1];
    gradients->biases[i] = dz.colwise().sum().transpose();
    dy.noalias() += dz * weights[i];
  }
  Matrix dz0 = (dy.array() * silu_grad<Real>(z[0].array())).matrix();
  gradients->weights[0].noalias() = dz0.transpose() * batch;
  gradients->biases[0] = dz0.colwise().sum().transpose();
  return loss;
}

template <typename Real>
Eigen::Matrix<Real, 3, Eigen::Dynamic> MlpT<Real>::input_jacobian(const Vector& point) const {
  if (point.size() != arch_.input_dim) {
    throw InvalidArgumentError("mlp input_jacobian: point size does not match input_dim");
  }
  const std::size_t last = weights.size() - 1;

  Vector z = weights[0] * point + biases[0];
  Eigen::Array<Real, Eigen::Dynamic, 1> s =
      Real(1) / (Real(1) + (-z.array()).exp());
  Vector y = (z.array() * s).matrix();
  Matrix tangent =
      (s * (Real(1) + z.array() * (Real(1) - s))).matrix().asDiagonal() * weights[0];

  for (std::size_t i = 1; i < last; ++i) {
    z = weights[i] * y + biases[i];
    s = Real(1) / (Real(1) + (-z.array()).exp());
    Matrix propagated = weights[i] * tangent;
    tangent += (s * (Real(1) + z.array() * (Real(1) - s))).matrix().asDiagonal() * propagated;
    y += (z.array() * s).matrix();
  }
  return weights[last] * tangent;
}

template <typename Real>
Vec3 MlpT<Real>::evaluate(const Vec3& point) const {
  Matrix x(1, 3);
  x << static_cast<Real>(point.x), static_cast<Real>(point.y), static_cast<Real>(point.z);
  Matrix out = forward(x);
  return {static_cast<double>(out(0, 0)), static_cast<double>(out(0, 1)),
          static_cast<double>(out(0, 2))};
}

template <typename Real>
typename MlpT<Real>::Matrix forward_chunked(const MlpT<Real>& mlp,
                                            const typename MlpT<Real>::Matrix& batch, int workers,
                                            int chunk_rows) {
  using Matrix = typename MlpT<Real>::Matrix;
  Eigen::Index n = batch.rows();
  Matrix out(n, mlp.architecture().output_dim);
  std::size_t chunks =
      static_cast<std::size_t>((n + chunk_rows - 1) / std::max(chunk_rows, 1));
  parallel_for(chunks, workers, [&](std::size_t ci) {
    Eigen::Index lo = static_cast<Eigen::Index>(ci) * chunk_rows;
    Eigen::Index rows = std::min<Eigen::Index>(chunk_rows, n - lo);
    out.middleRows(lo, rows) = mlp.forward(batch.middleRows(lo, rows));
  });
  return out;
}

template <typename Real>
typename MlpT<Real>::Matrix positional_encode_batch(
    const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& points, int levels) {
  if (points.cols() != 3) throw InvalidArgumentError("positional_encode_batch: points must be n x 3");
  typename MlpT<Real>::Matrix out(points.rows(), positional_encoding_dim(levels));
  out.leftCols(3) = points;
  Real freq = static_cast<Real>(std::numbers::pi);
  for (int level = 0; level < levels; ++level) {
    for (int c = 0; c < 3; ++c) {
      auto arg = (points.col(c) * freq).array();
      out.col(3 + 6 * level + 2 * c) = arg.sin();
      out.col(3 + 6 * level + 2 * c + 1) = arg.cos();
    }
    freq *= Real(2);
  }
  return out;
}

template <typename Real>
AdamWT<Real>::AdamWT(const MlpArchitecture& arch, const AdamWParams& params)
    : params_(params),
      first_moment_(MlpT<Real>::zeros(arch)),
      second_moment_(MlpT<Real>::zeros(arch)) {}

template <typename Real>
void AdamWT<Real>::step(MlpT<Real>& mlp, const MlpT<Real>& gradients, Real step_lr) {
  ++step_;
  const Real beta1 = static_cast<Real>(params_.beta1);
  const Real beta2 = static_cast<Real>(params_.beta2);
  const Real eps = static_cast<Real>(params_.epsilon);
  const Real wd = static_cast<Real>(params_.weight_decay);
  const Real bc1 = static_cast<Real>(1.0 - std::pow(params_.beta1, step_));
  const Real bc2 = static_cast<Real>(1.0 - std::pow(params_.beta2, step_));

  auto update = [&](auto& theta, const auto& g, auto& m, auto& v) {
    if (wd != Real(0)) theta -= step_lr * wd * theta;
    m = beta1 * m + (Real(1) - beta1) * g;
    v = (beta2 * v.array() + (Real(1) - beta2) * g.array().square()).matrix();
    theta.array() -= step_lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < mlp.weights.size(); ++i) {
    update(mlp.weights[i], gradients.weights[i], first_moment_.weights[i],
           second_moment_.weights[i]);
    update(mlp.biases[i], gradients.biases[i], first_moment_.biases[i],
           second_moment_.biases[i]);
  }
}

template class MlpT<float>;
template class MlpT<double>;
template class AdamWT<float>;
template class AdamWT<double>;

template MlpT<float>::Matrix forward_chunked<float>(const MlpT<float>&, const MlpT<float>::Matrix&,
                                                    int, int);
template MlpT<double>::Matrix forward_chunked<double>(const MlpT<double>&,
                                                      const MlpT<double>::Matrix&, int, int);
template MlpT<float>::Matrix positional_encode_batch<float>(
    const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic>&, int);
template MlpT<double>::Matrix positional_encode_batch<double>(
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>&, int);

}  // namespace hns
