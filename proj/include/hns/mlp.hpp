// Copyright 2026 The hnsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "hns/vec3.hpp"

namespace hns {

// Residual MLP family: input->W affine + SiLU, (H-1) residual blocks
// y = y + silu(Wy + b), then W->3 affine output.
struct MlpArchitecture {
  int input_dim = 3;
  int hidden_layers = 20;    // H: affine layers before the output layer
  int hidden_width = 12;     // W
  int output_dim = 3;
  int positional_levels = 0; // L; input_dim = 3 + 6L

  bool operator==(const MlpArchitecture&) const = default;

  std::size_t parameter_count() const;
  int layer_count() const { return hidden_layers + 1; }
  void validate() const;

  // q_c is fixed at (3, 20x12, L=0) for all presets
  static MlpArchitecture coarse();
  static MlpArchitecture fine(int hidden_layers, int hidden_width, int positional_levels = 10);
};

inline int positional_encoding_dim(int levels) { return 3 + 6 * levels; }

// [x y z | per level l: sin(2^l pi x), cos(2^l pi x), ... for y, z]
void positional_encode(const Vec3& point, int levels, std::span<double> out);

double cosine_lr(int step, int total, double base_lr);

template <typename Real>
class MlpT {
 public:
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

  MlpT() = default;

  static MlpT random_init(const MlpArchitecture& arch, std::uint64_t seed);
  static MlpT zeros(const MlpArchitecture& arch);
  static MlpT from_parameters(const MlpArchitecture& arch, std::span<const Real> params);

  const MlpArchitecture& architecture() const { return arch_; }
  std::size_t parameter_count() const { return arch_.parameter_count(); }

  // layer-major; per layer the weight matrix in row-major order, then the bias
  std::vector<Real> flatten() const;

  // batch rows are independent samples; throws NumericError on non-finite output
  Matrix forward(const Matrix& batch) const;

  // MSE loss (mean over batch of squared Euclidean error) and exact parameter
  // gradients; pass nullptr to get the loss alone
  Real forward_backward(const Matrix& batch, const Matrix& targets, MlpT* gradients) const;

  // exact d(output)/d(input) at one point, by forward-mode tangent propagation
  Eigen::Matrix<Real, 3, Eigen::Dynamic> input_jacobian(const Vector& point) const;

  Vec3 evaluate(const Vec3& point) const;  // single-point convenience, input_dim == 3

  std::vector<Matrix> weights;  // [0]: Wxin, [1..H-1]: WxW, [H]: 3xW
  std::vector<Vector> biases;

 private:
  explicit MlpT(const MlpArchitecture& arch);
  MlpArchitecture arch_;
};

using Mlp = MlpT<float>;
using MlpD = MlpT<double>;

// Splits batch rows into fixed-size chunks so results are identical for any
// worker count.
template <typename Real>
typename MlpT<Real>::Matrix forward_chunked(const MlpT<Real>& mlp,
                                            const typename MlpT<Real>::Matrix& batch, int workers,
                                            int chunk_rows = 8192);

template <typename Real>
typename MlpT<Real>::Matrix positional_encode_batch(
    const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& points, int levels);

struct AdamWParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-4;
};

// Decoupled weight decay applied before the moment update, then the
// bias-corrected Adam step.
template <typename Real>
class AdamWT {
 public:
  explicit AdamWT(const MlpArchitecture& arch, const AdamWParams& params = {});

  void step(MlpT<Real>& mlp, const MlpT<Real>& gradients, Real step_lr);
  int step_count() const { return step_; }
  const AdamWParams& params() const { return params_; }

 private:
  AdamWParams params_;
  MlpT<Real> first_moment_;
  MlpT<Real> second_moment_;
  int step_ = 0;
};

using AdamW = AdamWT<float>;

}  // namespace hns
