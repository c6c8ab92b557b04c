#include "driftnav/ppo/mlp.hpp"

#include <stdexcept>
#include <string>

#include <Eigen/QR>

#include "driftnav/core/error.hpp"

namespace driftnav::ppo {

void MlpSpec::validate() const {
  if (input_dim <= 0) throw ValidationError("input_dim", "must be positive");
  if (output_dim <= 0) throw ValidationError("output_dim", "must be positive");
  for (int w : hidden)
    if (w <= 0) throw ValidationError("hidden", "widths must be positive");
}

std::vector<int> MlpSpec::layer_widths() const {
  std::vector<int> w{input_dim};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(output_dim);
  return w;
}

std::size_t MlpSpec::parameter_count() const {
  const auto w = layer_widths();
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < w.size(); ++l) n += static_cast<std::size_t>(w[l + 1]) * static_cast<std::size_t>(w[l] + 1);
  return n;
}

MlpParams MlpParams::zeros(const MlpSpec& spec) {
  spec.validate();
  MlpParams p;
  const auto w = spec.layer_widths();
  for (std::size_t l = 0; l + 1 < w.size(); ++l) {
    p.weights.push_back(Eigen::MatrixXd::Zero(w[l + 1], w[l]));
    p.biases.push_back(Eigen::VectorXd::Zero(w[l + 1]));
  }
  return p;
}

MlpParams MlpParams::orthogonal(const MlpSpec& spec, std::mt19937_64& rng, double gain, double head_gain) {
  MlpParams p = zeros(spec);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    auto& W = p.weights[l];
    const auto rows = W.rows();
    const auto cols = W.cols();
    const bool tall = rows >= cols;
    Eigen::MatrixXd g(tall ? rows : cols, tall ? cols : rows);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
    // Sign fix so the distribution is uniform over orthogonal matrices.
    const Eigen::MatrixXd r = qr.matrixQR();
    for (Eigen::Index j = 0; j < q.cols(); ++j)
      if (r(j, j) < 0.0) q.col(j) *= -1.0;
    const double scale = (l + 1 == p.weights.size()) ? head_gain : gain;
    W = scale * (tall ? q : Eigen::MatrixXd(q.transpose()));
  }
  return p;
}

std::size_t MlpParams::size() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return n;
}

Eigen::VectorXd MlpParams::flatten() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    out.segment(k, weights[l].size()) = Eigen::Map<const Eigen::VectorXd>(weights[l].data(), weights[l].size());
    k += weights[l].size();
    out.segment(k, biases[l].size()) = biases[l];
    k += biases[l].size();
  }
  return out;
}

void MlpParams::assign(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(size())) throw std::invalid_argument("parameter vector size mismatch");
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(weights[l].data(), weights[l].size()) = flat.segment(k, weights[l].size());
    k += weights[l].size();
    biases[l] = flat.segment(k, biases[l].size());
    k += biases[l].size();
  }
}

void MlpParams::check_shapes(const MlpSpec& spec) const {
  const auto w = spec.layer_widths();
  if (weights.size() + 1 != w.size() || biases.size() != weights.size())
    throw std::invalid_argument("layer count does not match the network spec");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != w[l + 1] || weights[l].cols() != w[l] || biases[l].size() != w[l + 1])
      throw std::invalid_argument("layer " + std::to_string(l) + " shape does not match the network spec");
  }
}

MlpParams& MlpParams::operator+=(const MlpParams& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += other.weights[l];
    biases[l] += other.biases[l];
  }
  return *this;
}

void MlpParams::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

Eigen::MatrixXd mlp_forward(const MlpParams& params, const Eigen::MatrixXd& x, MlpTape* tape) {
  if (x.rows() != params.weights.front().cols())
    throw std::invalid_argument("input width " + std::to_string(x.rows()) + " does not match network input " +
                                std::to_string(params.weights.front().cols()));
  if (tape) {
    tape->inputs.clear();
    tape->pre.clear();
  }
  Eigen::MatrixXd a = x;
  const std::size_t n = params.weights.size();
  for (std::size_t l = 0; l < n; ++l) {
    Eigen::MatrixXd z = params.weights[l] * a;
    z.colwise() += params.biases[l];
    if (tape) tape->inputs.push_back(a);
    if (l + 1 == n) return z;
    if (tape) tape->pre.push_back(z);
    a = z.cwiseMax(0.0);
  }
  return a;
}

void mlp_backward(const MlpParams& params, const MlpTape& tape, const Eigen::MatrixXd& d_output, MlpParams& grad) {
  Eigen::MatrixXd dz = d_output;
  for (std::size_t l = params.weights.size(); l-- > 0;) {
    grad.weights[l].noalias() += dz * tape.inputs[l].transpose();
    grad.biases[l] += dz.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd da = params.weights[l].transpose() * dz;
    dz = (tape.pre[l - 1].array() > 0.0).select(da, 0.0);
  }
}

}  // namespace driftnav::ppo
