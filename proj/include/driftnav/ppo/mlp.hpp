#pragma once

#include <random>
#include <vector>

#include <Eigen/Core>

namespace driftnav::ppo {

/// Topology of one fully connected network: ReLU hidden layers, linear head.
struct MlpSpec {
  int input_dim{13};
  std::vector<int> hidden{64, 64, 32, 32, 16, 16};
  int output_dim{20};

  /// Throws ValidationError when a width is non-positive.
  void validate() const;
  [[nodiscard]] std::vector<int> layer_widths() const;  // input, hidden..., output
  [[nodiscard]] std::size_t parameter_count() const;
  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

/// Weights are (out x in); layer l maps widths[l] -> widths[l + 1].
struct MlpParams {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  static MlpParams zeros(const MlpSpec& spec);
  /// Orthogonal rows/columns scaled by `gain` for hidden layers and
  /// `head_gain` for the last layer; zero biases.
  static MlpParams orthogonal(const MlpSpec& spec, std::mt19937_64& rng, double gain, double head_gain);

  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
  /// Throws std::invalid_argument on a shape that disagrees with spec.
  void check_shapes(const MlpSpec& spec) const;

  MlpParams& operator+=(const MlpParams& other);
  void set_zero();
};

/// Activations kept by a batched forward pass for the backward pass.
struct MlpTape {
  std::vector<Eigen::MatrixXd> inputs;  // input to each layer (widths[l] x batch)
  std::vector<Eigen::MatrixXd> pre;     // pre-activation of each layer
};

/// Columns of `x` are samples. Returns (output_dim x batch).
Eigen::MatrixXd mlp_forward(const MlpParams& params, const Eigen::MatrixXd& x, MlpTape* tape = nullptr);

/// Accumulates dLoss/dParams into `grad` given dLoss/dOutput.
void mlp_backward(const MlpParams& params, const MlpTape& tape, const Eigen::MatrixXd& d_output, MlpParams& grad);

}  // namespace driftnav::ppo
