#pragma once

// Perturbation direction sequences for random-direction Kiefer-Wolfowitz
// gradient estimation.
//
// A deterministic sequence d_1..d_P is usable in place of random directions
// when, over one cycle,
//
//   sum_n d_n d_n^T = P I      (bias cancellation for both estimators)
//   sum_n d_n       = 0        (needed additionally by the one-sided one)
//
// Two constructions are provided. The circulant one has the minimal cycle
// length P = p + 1; the Sylvester-Hadamard one has P = 2^ceil(log2(p + 1)).

#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace rdkw {

/// A p x P matrix of directions plus a read cursor.
///
/// The matrix is immutable once built; only the cursor moves. An optimizer
/// run owns its cycle exclusively.
class PerturbationCycle {
 public:
  /// Wraps an arbitrary direction matrix. Throws InvalidDimension when the
  /// matrix is empty. No P1/P2 check is performed here; use verify_cycle.
  explicit PerturbationCycle(Eigen::MatrixXd columns);

  std::size_t dimension() const { return static_cast<std::size_t>(columns_.rows()); }
  std::size_t cycle_length() const { return static_cast<std::size_t>(columns_.cols()); }
  std::uint64_t cursor() const { return cursor_; }
  const Eigen::MatrixXd& columns() const { return columns_; }

  /// Column (cursor mod P), then advances the cursor.
  Eigen::VectorXd next_direction();

  /// Same as next_direction() without allocating.
  void next_direction(Eigen::Ref<Eigen::VectorXd> out);

  void reset() { cursor_ = 0; }

 private:
  Eigen::MatrixXd columns_;
  std::uint64_t cursor_ = 0;
};

struct CirculantSpec {
  std::size_t dimension = 0;
};

/// Closed form of (I + u u^T)^{-1/2} for u the all-ones p-vector:
///   I - u u^T / p + u u^T / (p sqrt(p + 1)).
/// Throws InvalidDimension for p == 0.
Eigen::MatrixXd circulant_inverse_sqrt(std::size_t p);

/// Y = sqrt(p + 1) [C^{-1/2}, -C^{-1/2} u], C = I + u u^T. Cycle length p + 1.
PerturbationCycle build_circulant_cycle(const CirculantSpec& spec);

/// Smallest power of two >= p + 1.
std::size_t hadamard_cycle_length(std::size_t p);

/// Sylvester Hadamard matrix of order n (n must be a power of two).
Eigen::MatrixXd sylvester_hadamard(std::size_t n);

/// Rows 2..p+1 of the Sylvester matrix of order hadamard_cycle_length(p).
/// Row 1 (all ones) is the one that makes the remaining rows sum to zero.
PerturbationCycle build_hadamard_cycle(std::size_t p);

/// Symmetric Bernoulli (+1/-1) directions from an explicitly seeded stream.
class BernoulliGenerator {
 public:
  BernoulliGenerator(std::size_t dimension, std::uint64_t seed);

  std::size_t dimension() const { return dimension_; }

  Eigen::VectorXd bernoulli_direction();
  void bernoulli_direction(Eigen::Ref<Eigen::VectorXd> out);

 private:
  std::size_t dimension_;
  std::mt19937_64 engine_;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
};

struct CycleReport {
  double p1_residual = 0.0;   ///< max |sum d d^T - P I|
  double p2_residual = 0.0;   ///< max |sum d|
  double max_col_norm = 0.0;  ///< max ||d_n||_2
};

CycleReport verify_cycle(const PerturbationCycle& cycle);

/// Residual of X X^T = P I where X stacks a row of ones on top of the
/// direction matrix.
double stacked_orthogonality_residual(const PerturbationCycle& cycle);

}  // namespace rdkw
