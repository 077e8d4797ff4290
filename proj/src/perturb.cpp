#include "rdkw/perturb.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rdkw/error.hpp"

namespace rdkw {

PerturbationCycle::PerturbationCycle(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  if (columns_.rows() == 0 || columns_.cols() == 0) {
    throw InvalidDimension("perturbation cycle must have at least one row and one column");
  }
}

Eigen::VectorXd PerturbationCycle::next_direction() {
  Eigen::VectorXd d(columns_.rows());
  next_direction(d);
  return d;
}

void PerturbationCycle::next_direction(Eigen::Ref<Eigen::VectorXd> out) {
  const auto column = static_cast<Eigen::Index>(cursor_ % cycle_length());
  out = columns_.col(column);
  ++cursor_;
}

Eigen::MatrixXd circulant_inverse_sqrt(std::size_t p) {
  if (p == 0) {
    throw InvalidDimension("circulant_inverse_sqrt: dimension must be >= 1");
  }
  const double pd = static_cast<double>(p);
  // Off-diagonal value shared by every entry of the rank-one part.
  const double rank_one = -1.0 / pd + 1.0 / (pd * std::sqrt(1.0 + pd));
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, rank_one);
  m.diagonal().array() += 1.0;
  return m;
}

PerturbationCycle build_circulant_cycle(const CirculantSpec& spec) {
  const std::size_t p = spec.dimension;
  if (p == 0) {
    throw InvalidDimension("circulant cycle: dimension must be >= 1");
  }
  const auto n = static_cast<Eigen::Index>(p);
  const double scale = std::sqrt(static_cast<double>(p) + 1.0);

  Eigen::MatrixXd y(n, n + 1);
  y.leftCols(n) = scale * circulant_inverse_sqrt(p);
  // -sqrt(p+1) C^{-1/2} u collapses to -u because C^{-1/2} u = u / sqrt(p+1).
  y.col(n).setConstant(-1.0);
  return PerturbationCycle(std::move(y));
}

std::size_t hadamard_cycle_length(std::size_t p) {
  std::size_t length = 1;
  while (length < p + 1) {
    length <<= 1U;
  }
  return length;
}

Eigen::MatrixXd sylvester_hadamard(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw InvalidDimension("Sylvester Hadamard order must be a power of two, got " + std::to_string(n));
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
  while (static_cast<std::size_t>(h.rows()) < n) {
    const Eigen::Index k = h.rows();
    Eigen::MatrixXd next(2 * k, 2 * k);
    next.topLeftCorner(k, k) = h;
    next.topRightCorner(k, k) = h;
    next.bottomLeftCorner(k, k) = h;
    next.bottomRightCorner(k, k) = -h;
    h = std::move(next);
  }
  return h;
}

PerturbationCycle build_hadamard_cycle(std::size_t p) {
  if (p == 0) {
    throw InvalidDimension("Hadamard cycle: dimension must be >= 1");
  }
  const Eigen::MatrixXd h = sylvester_hadamard(hadamard_cycle_length(p));
  return PerturbationCycle(h.middleRows(1, static_cast<Eigen::Index>(p)));
}

BernoulliGenerator::BernoulliGenerator(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), engine_(seed) {
  if (dimension == 0) {
    throw InvalidDimension("Bernoulli generator: dimension must be >= 1");
  }
}

Eigen::VectorXd BernoulliGenerator::bernoulli_direction() {
  Eigen::VectorXd d(static_cast<Eigen::Index>(dimension_));
  bernoulli_direction(d);
  return d;
}

void BernoulliGenerator::bernoulli_direction(Eigen::Ref<Eigen::VectorXd> out) {
  // One engine word yields 64 independent fair signs.
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (bits_left_ == 0) {
      bits_ = engine_();
      bits_left_ = 64;
    }
    out[i] = (bits_ & 1U) != 0 ? 1.0 : -1.0;
    bits_ >>= 1U;
    --bits_left_;
  }
}

CycleReport verify_cycle(const PerturbationCycle& cycle) {
  const Eigen::MatrixXd& y = cycle.columns();
  const auto p = y.rows();
  const double period = static_cast<double>(y.cols());

  CycleReport report;
  const Eigen::MatrixXd gram = y * y.transpose() - period * Eigen::MatrixXd::Identity(p, p);
  report.p1_residual = gram.cwiseAbs().maxCoeff();
  report.p2_residual = y.rowwise().sum().cwiseAbs().maxCoeff();
  report.max_col_norm = y.colwise().norm().maxCoeff();
  return report;
}

double stacked_orthogonality_residual(const PerturbationCycle& cycle) {
  const Eigen::MatrixXd& y = cycle.columns();
  Eigen::MatrixXd x(y.rows() + 1, y.cols());
  x.row(0).setOnes();
  x.bottomRows(y.rows()) = y;
  const double period = static_cast<double>(y.cols());
  const Eigen::MatrixXd r = x * x.transpose() - period * Eigen::MatrixXd::Identity(x.rows(), x.rows());
  return r.cwiseAbs().maxCoeff();
}

}  // namespace rdkw
