#include "imfs/sample_size.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace imfs {

namespace {

std::uint64_t saturating_ceil(double x) {
  if (!(x < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace

std::string to_string(SampleSizeTask task) {
  switch (task) {
    case SampleSizeTask::IcEstimation: return "ic-estimation";
    case SampleSizeTask::IcStructure: return "ic-structure";
    case SampleSizeTask::ImsIcA1: return "ims-ic-a1";
    case SampleSizeTask::ImsIcA2: return "ims-ic-a2";
    case SampleSizeTask::LtEstimation: return "lt-estimation";
    case SampleSizeTask::LtRescaled: return "lt-rescaled";
    case SampleSizeTask::ImsLt: return "ims-lt";
  }
  return "?";
}

SampleSizeTask parse_sample_size_task(const std::string& text) {
  for (auto task : {SampleSizeTask::IcEstimation, SampleSizeTask::IcStructure,
                    SampleSizeTask::ImsIcA1, SampleSizeTask::ImsIcA2,
                    SampleSizeTask::LtEstimation, SampleSizeTask::LtRescaled,
                    SampleSizeTask::ImsLt}) {
    if (to_string(task) == text) return task;
  }
  throw std::invalid_argument("unknown sample-size task '" + text + "'");
}

SampleSizeResult sample_size_formula(SampleSizeTask task, const AssumptionParams& p,
                                     int n_nodes, int max_in_degree) {
  const double n = n_nodes;
  const double k = p.k;
  const double d = std::max(max_in_degree, 1);
  const double eps = p.epsilon;
  const double delta = p.delta;
  const double alpha = p.alpha;
  const double gamma = p.gamma;
  const double log12 = std::log(12.0 * n / delta);

  SampleSizeResult r;
  switch (task) {
    case SampleSizeTask::IcEstimation:
      r.accuracy = eps;
      r.eta = eps * alpha * gamma / 4.0;
      r.bound = 256.0 / (eps * eps * alpha * alpha * std::pow(gamma, 3)) * log12;
      break;
    case SampleSizeTask::IcStructure:
      r.accuracy = p.beta / 2.0;
      r.eta = r.accuracy * alpha * gamma / 4.0;
      r.bound = 1024.0 / (alpha * alpha * p.beta * p.beta * std::pow(gamma, 3)) *
                std::log(4.0 * n / delta);
      break;
    case SampleSizeTask::ImsIcA1:
      r.accuracy = eps * k / (2.0 * std::pow(n, 3));
      r.eta = r.accuracy * alpha * gamma / 4.0;
      r.bound = 1024.0 / (eps * eps * alpha * alpha * std::pow(gamma, 3)) *
                (std::pow(n, 6) / (k * k)) * log12;
      break;
    case SampleSizeTask::ImsIcA2: {
      r.accuracy = eps * k / (2.0 * std::pow(n, 3));
      const double implied_alpha = delta / (6.0 * n);
      r.eta = r.accuracy * implied_alpha * gamma / 4.0;
      const double prefix = 72.0 * n * n / (delta * delta) * log12;
      r.bound = 36864.0 / (eps * eps * delta * delta * std::pow(gamma, 3)) *
                    (std::pow(n, 8) / (k * k)) * std::log(36.0 * n / delta) +
                prefix;
      r.t_prime = saturating_ceil(prefix);
      break;
    }
    case SampleSizeTask::LtEstimation:
      r.accuracy = eps;
      r.eta = eps * gamma * gamma / 4.0;
      r.bound = 256.0 / (eps * eps * std::pow(gamma, 6)) * log12;
      break;
    case SampleSizeTask::LtRescaled:
      r.accuracy = eps / (2.0 * d);
      r.eta = r.accuracy * gamma * gamma / 4.0;
      r.bound = 1024.0 / (eps * eps * std::pow(gamma, 6)) * d * d * log12;
      break;
    case SampleSizeTask::ImsLt:
      r.accuracy = eps * k / (2.0 * d * std::pow(n, 3));
      r.eta = r.accuracy * gamma * gamma / 4.0;
      r.bound = 4096.0 / (eps * eps * std::pow(gamma, 3)) *
                (d * d * std::pow(n, 6) / (k * k)) * log12;
      break;
  }
  r.t = saturating_ceil(r.bound);
  return r;
}

SampleSizeResult sample_size(SampleSizeTask task, const AssumptionParams& params, int n,
                             int max_in_degree) {
  if (n < 1) throw std::invalid_argument("node count must be positive");
  if (max_in_degree < 0 || max_in_degree >= n) {
    throw std::invalid_argument("max in-degree must lie in [0, n-1]");
  }
  const auto problems = params.violations(n);
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  return sample_size_formula(task, params, n, max_in_degree);
}

}  // namespace imfs
