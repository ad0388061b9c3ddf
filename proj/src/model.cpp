#include "veritas/model.hpp"

#include <algorithm>
#include <cmath>

#include "veritas/error.hpp"
#include "veritas/rng.hpp"

namespace veritas {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Layer widths from input to output, e.g. {I, J_1, J_2, 1}.
std::vector<std::size_t> widths(const ModelShape& shape) {
  std::vector<std::size_t> w{shape.input_dim};
  w.insert(w.end(), shape.hidden.begin(), shape.hidden.end());
  w.push_back(1);
  return w;
}

struct Forward {
  // activations[0] = input, activations[l] = output of layer l (tanh for
  // hidden layers); the final logit is kept separately.
  std::vector<std::vector<double>> activations;
  double logit = 0.0;
};

Forward forward(const ModelShape& shape, std::span<const double> params, std::span<const double> x) {
  if (x.size() != shape.input_dim) throw DomainError("sample input dimension mismatch");
  if (params.size() != shape.parameter_count()) throw DomainError("parameter vector size mismatch");
  const auto w = widths(shape);
  Forward f;
  f.activations.emplace_back(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t l = 1; l < w.size(); ++l) {
    const auto& in = f.activations.back();
    std::vector<double> out(w[l]);
    const std::size_t bias = offset + w[l] * w[l - 1];
    for (std::size_t j = 0; j < w[l]; ++j) {
      double z = params[bias + j];
      for (std::size_t i = 0; i < w[l - 1]; ++i) z += params[offset + j * w[l - 1] + i] * in[i];
      out[j] = z;
    }
    offset = bias + w[l];
    if (l + 1 == w.size()) {
      f.logit = out[0];
    } else {
      for (double& v : out) v = std::tanh(v);
      f.activations.push_back(std::move(out));
    }
  }
  return f;
}

}  // namespace

std::size_t ModelShape::parameter_count() const {
  const auto w = widths(*this);
  std::size_t n = 0;
  for (std::size_t l = 1; l < w.size(); ++l) n += w[l] * w[l - 1] + w[l];
  return n;
}

void validate(const ModelShape& shape) {
  if (shape.input_dim == 0) throw DomainError("model input_dim must be >= 1");
  if (shape.hidden.size() > 2) throw DomainError("model supports at most two hidden layers");
  for (auto j : shape.hidden)
    if (j == 0) throw DomainError("hidden layer width must be >= 1");
}

double logit(const ModelShape& shape, std::span<const double> params, std::span<const double> x) {
  if (shape.hidden.empty()) {
    if (x.size() != shape.input_dim) throw DomainError("sample input dimension mismatch");
    if (params.size() != shape.parameter_count()) throw DomainError("parameter vector size mismatch");
    double z = params[shape.input_dim];
    for (std::size_t i = 0; i < x.size(); ++i) z += params[i] * x[i];
    return z;
  }
  return forward(shape, params, x).logit;
}

double probability(const ModelShape& shape, std::span<const double> params, std::span<const double> x) {
  const double p = sigmoid(logit(shape, params, x));
  return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

LikelihoodValue log_likelihood(const ModelShape& shape, std::span<const double> params,
                               std::span<const Sample> data) {
  LikelihoodValue ll;
  for (const auto& s : data) {
    const double z = logit(shape, params, s.x);
    // P(y | x) = sigmoid(z) for y = 1, sigmoid(-z) for y = 0.
    double p = sigmoid(s.y ? z : -z);
    if (p < kProbabilityFloor) {
      p = kProbabilityFloor;
      ++ll.floor_hits;
    }
    ll.value += std::log(p);
  }
  if (!std::isfinite(ll.value)) throw NonFiniteLikelihood("log-likelihood is not finite");
  return ll;
}

std::vector<double> log_likelihood_gradient(const ModelShape& shape, std::span<const double> params,
                                            std::span<const Sample> data) {
  const auto w = widths(shape);
  std::vector<double> grad(shape.parameter_count(), 0.0);

  // Parameter offset of each layer's weight block.
  std::vector<std::size_t> offsets(w.size(), 0);
  for (std::size_t l = 1; l < w.size(); ++l)
    offsets[l] = (l == 1 ? 0 : offsets[l - 1] + w[l - 1] * w[l - 2] + w[l - 1]);

  if (shape.hidden.empty()) {
    for (const auto& s : data) {
      const double delta = static_cast<double>(s.y) - sigmoid(logit(shape, params, s.x));
      for (std::size_t i = 0; i < shape.input_dim; ++i) grad[i] += delta * s.x[i];
      grad[shape.input_dim] += delta;
    }
    return grad;
  }

  for (const auto& s : data) {
    const Forward f = forward(shape, params, s.x);
    // d log P / d logit
    std::vector<double> delta{static_cast<double>(s.y) - sigmoid(f.logit)};
    for (std::size_t l = w.size() - 1; l >= 1; --l) {
      const auto& in = f.activations[l - 1];
      const std::size_t off = offsets[l];
      const std::size_t bias = off + w[l] * w[l - 1];
      for (std::size_t j = 0; j < w[l]; ++j) {
        grad[bias + j] += delta[j];
        for (std::size_t i = 0; i < w[l - 1]; ++i) grad[off + j * w[l - 1] + i] += delta[j] * in[i];
      }
      if (l == 1) break;
      // Back through tanh of layer l-1.
      std::vector<double> prev(w[l - 1], 0.0);
      for (std::size_t i = 0; i < w[l - 1]; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < w[l]; ++j) sum += params[off + j * w[l - 1] + i] * delta[j];
        prev[i] = sum * (1.0 - in[i] * in[i]);
      }
      delta = std::move(prev);
    }
  }
  return grad;
}

std::vector<double> initial_parameters(const ModelShape& shape, std::uint64_t seed, double scale) {
  Rng rng = Rng::from_seed(seed);
  std::vector<double> params(shape.parameter_count());
  for (double& p : params) p = (2.0 * rng.uniform() - 1.0) * scale;
  return params;
}

FitResult mle_fit(const ModelShape& shape, std::span<const Sample> data, const FitOptions& options) {
  validate(shape);
  if (data.empty()) throw DomainError("mle_fit: no data");
  if (!(options.step_size > 0.0)) throw DomainError("mle_fit: step_size must be > 0");

  FitResult result;
  result.params = initial_parameters(shape, options.init_seed, options.init_scale);
  for (double p : result.params)
    if (!std::isfinite(p)) throw DomainError("mle_fit: non-finite initial parameter");

  const double n = static_cast<double>(data.size());
  double current = log_likelihood(shape, result.params, data).value;
  result.ll_trace.push_back(current);

  std::vector<double> candidate(result.params.size());
  for (std::uint64_t it = 0; it < options.iterations; ++it) {
    const auto grad = log_likelihood_gradient(shape, result.params, data);
    double step = options.step_size;
    bool accepted = false;
    for (int attempt = 0; attempt <= options.max_halvings; ++attempt) {
      for (std::size_t k = 0; k < candidate.size(); ++k)
        candidate[k] = result.params[k] + step * grad[k] / n;
      double value;
      try {
        value = log_likelihood(shape, candidate, data).value;
      } catch (const NonFiniteLikelihood&) {
        value = -INFINITY;
      }
      if (value >= current - options.tolerance) {
        result.params.swap(candidate);
        current = value;
        accepted = true;
        break;
      }
      step *= 0.5;
      ++result.halvings;
    }
    if (!accepted) ++result.rejected_steps;
    result.ll_trace.push_back(current);
  }
  result.floor_hits = log_likelihood(shape, result.params, data).floor_hits;
  return result;
}

double grad_check(const ModelShape& shape, std::span<const double> params,
                  std::span<const Sample> data, double h) {
  if (!(h > 0.0)) throw DomainError("grad_check: h must be > 0");
  const auto analytic = log_likelihood_gradient(shape, params, data);
  std::vector<double> probe(params.begin(), params.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    const double saved = probe[k];
    probe[k] = saved + h;
    const double up = log_likelihood(shape, probe, data).value;
    probe[k] = saved - h;
    const double down = log_likelihood(shape, probe, data).value;
    probe[k] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({1.0, std::abs(analytic[k]), std::abs(numeric)});
    worst = std::max(worst, std::abs(analytic[k] - numeric) / denom);
  }
  return worst;
}

double training_accuracy(const ModelShape& shape, std::span<const double> params,
                         std::span<const Sample> data) {
  if (data.empty()) throw DomainError("training_accuracy: no data");
  std::size_t correct = 0;
  for (const auto& s : data) {
    const bool predicted = logit(shape, params, s.x) > 0.0;
    if (predicted == (s.y == 1)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace veritas
