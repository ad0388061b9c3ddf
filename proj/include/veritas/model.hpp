#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace veritas {

inline constexpr double kProbabilityFloor = 1e-12;

// Layered Bernoulli model: inputs -> up to two tanh hidden layers -> sigmoid.
// With no hidden layers it is logistic regression. Parameters are one flat
// vector, laid out layer by layer as a row-major weight matrix followed by
// the layer's bias vector; the output layer comes last.
struct ModelShape {
  std::size_t input_dim = 1;
  std::vector<std::size_t> hidden;  // unit counts J_1..J_K, K <= 2

  std::size_t parameter_count() const;
};

// Throws DomainError for input_dim 0, more than two hidden layers, or a zero-width layer.
void validate(const ModelShape& shape);

struct Sample {
  std::vector<double> x;
  std::uint8_t y = 0;
};

// Pre-squash output of the network.
double logit(const ModelShape& shape, std::span<const double> params, std::span<const double> x);
// P(Y=1 | x), clamped to [kProbabilityFloor, 1 - kProbabilityFloor].
double probability(const ModelShape& shape, std::span<const double> params, std::span<const double> x);

struct LikelihoodValue {
  double value = 0.0;            // sum_t log P(Y_t | X_t)
  std::uint64_t floor_hits = 0;  // terms clamped at kProbabilityFloor
};

// Throws NonFiniteLikelihood when the result is NaN or infinite.
LikelihoodValue log_likelihood(const ModelShape& shape, std::span<const double> params,
                               std::span<const Sample> data);

// Analytic gradient of the (unclamped) log-likelihood sum, by backpropagation.
std::vector<double> log_likelihood_gradient(const ModelShape& shape, std::span<const double> params,
                                            std::span<const Sample> data);

struct FitOptions {
  double step_size = 1.0;  // applied to the per-sample mean gradient
  std::uint64_t iterations = 2000;
  std::uint64_t init_seed = 0;
  double init_scale = 0.5;  // initial parameters uniform in [-init_scale, init_scale]
  int max_halvings = 30;
  double tolerance = 1e-9;  // allowed per-step decrease of the log-likelihood
};

struct FitResult {
  std::vector<double> params;
  std::vector<double> ll_trace;  // initial value, then one entry per iteration
  std::uint64_t floor_hits = 0;  // at the final parameters
  std::uint64_t halvings = 0;
  std::uint64_t rejected_steps = 0;  // iterations where every halving failed
};

// Full-batch gradient ascent. A step that lowers the log-likelihood by more
// than `tolerance` is retried with half the step size, at most max_halvings
// times; if all fail the parameters stay put. Consecutive trace entries
// therefore never drop by more than `tolerance`.
FitResult mle_fit(const ModelShape& shape, std::span<const Sample> data, const FitOptions& options);

std::vector<double> initial_parameters(const ModelShape& shape, std::uint64_t seed, double scale);

// Max over coordinates of |analytic - central difference| / max(1, |a|, |n|).
double grad_check(const ModelShape& shape, std::span<const double> params,
                  std::span<const Sample> data, double h);

double training_accuracy(const ModelShape& shape, std::span<const double> params,
                         std::span<const Sample> data);

}  // namespace veritas
