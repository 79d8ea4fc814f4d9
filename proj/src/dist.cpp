// Copyright 2026 The Proposal Programs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "propprog/dist.hpp"

#include <cmath>

#include "propprog/errors.hpp"
#include "propprog/math.hpp"

namespace propprog::dist {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))
constexpr double kMaxExactInt = 9007199254740992.0;     // 2^53

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidParamsError(message);
}

double sample_gamma_impl(RandomStream& rng, double shape, double scale) {
  if (shape < 1.0) {
    // Boost a shape < 1 draw from shape + 1 (Marsaglia-Tsang).
    double u = rng.uniform_pos();
    return sample_gamma_impl(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = rng.uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

}  // namespace

double ParamGrad::at(const std::string& name) const {
  auto it = partials.find(name);
  if (it == partials.end()) throw DomainError("no partial named " + name);
  return it->second;
}

double normal_log_density(double x, double mean, double stddev) {
  double z = (x - mean) / stddev;
  return -kLogSqrt2Pi - std::log(stddev) - 0.5 * z * z;
}

Distribution Distribution::bernoulli(double p) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "bernoulli: p must lie in [0, 1]");
  return Distribution(Kind::kBernoulli, {p});
}

Distribution Distribution::categorical(std::vector<double> probs) {
  require(!probs.empty(), "categorical: probs must be nonempty");
  double sum = 0.0;
  for (double p : probs) {
    require(std::isfinite(p) && p >= 0.0, "categorical: probs must be nonnegative");
    sum += p;
  }
  require(std::fabs(sum - 1.0) <= 1e-9, "categorical: probs must sum to 1");
  return Distribution(Kind::kCategorical, std::move(probs));
}

Distribution Distribution::uniform_discrete(std::int64_t lo, std::int64_t hi) {
  require(lo <= hi, "uniform_discrete: lo must not exceed hi");
  require(std::fabs(static_cast<double>(lo)) <= kMaxExactInt &&
              std::fabs(static_cast<double>(hi)) <= kMaxExactInt,
          "uniform_discrete: bounds too large");
  return Distribution(Kind::kUniformDiscrete,
                      {static_cast<double>(lo), static_cast<double>(hi)});
}

Distribution Distribution::normal(double mean, double stddev) {
  require(std::isfinite(mean), "normal: mean must be finite");
  require(std::isfinite(stddev) && stddev > 0.0, "normal: stddev must be positive");
  return Distribution(Kind::kNormal, {mean, stddev});
}

Distribution Distribution::cauchy(double location, double scale) {
  require(std::isfinite(location), "cauchy: location must be finite");
  require(std::isfinite(scale) && scale > 0.0, "cauchy: scale must be positive");
  return Distribution(Kind::kCauchy, {location, scale});
}

Distribution Distribution::gamma(double shape, double scale) {
  require(std::isfinite(shape) && shape > 0.0, "gamma: shape must be positive");
  require(std::isfinite(scale) && scale > 0.0, "gamma: scale must be positive");
  return Distribution(Kind::kGamma, {shape, scale});
}

Distribution Distribution::mvnormal_iid(int dim) {
  require(dim >= 1, "mvnormal_iid: dim must be at least 1");
  return Distribution(Kind::kMvNormalIid, {static_cast<double>(dim)});
}

Value Distribution::sample(RandomStream& rng) const {
  switch (kind_) {
    case Kind::kBernoulli:
      return Value(rng.uniform() < params_[0]);
    case Kind::kCategorical: {
      double u = rng.uniform();
      double acc = 0.0;
      std::int64_t last_positive = 0;
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i] > 0.0) last_positive = static_cast<std::int64_t>(i);
        acc += params_[i];
        if (u < acc && params_[i] > 0.0) return Value(static_cast<std::int64_t>(i));
      }
      for (std::size_t i = params_.size(); i-- > 0;) {
        if (params_[i] > 0.0) return Value(static_cast<std::int64_t>(i));
      }
      return Value(last_positive);
    }
    case Kind::kUniformDiscrete:
      return Value(rng.uniform_int(static_cast<std::int64_t>(params_[0]),
                                   static_cast<std::int64_t>(params_[1])));
    case Kind::kNormal:
      return Value(params_[0] + params_[1] * rng.normal());
    case Kind::kCauchy:
      return Value(params_[0] + params_[1] * std::tan(M_PI * (rng.uniform_pos() - 0.5)));
    case Kind::kGamma:
      return Value(sample_gamma_impl(rng, params_[0], params_[1]));
    case Kind::kMvNormalIid: {
      std::vector<double> out(static_cast<std::size_t>(params_[0]));
      for (double& x : out) x = rng.normal();
      return Value(std::move(out));
    }
  }
  throw DomainError("unreachable distribution kind");
}

double Distribution::log_density(const Value& value) const {
  switch (kind_) {
    case Kind::kBernoulli: {
      if (!value.is_boolean()) return kNegInf;
      double p = params_[0];
      if (value.as_boolean()) return p > 0.0 ? std::log(p) : kNegInf;
      return p < 1.0 ? std::log1p(-p) : kNegInf;
    }
    case Kind::kCategorical: {
      if (!value.is_integer()) return kNegInf;
      std::int64_t i = value.as_integer();
      if (i < 0 || i >= static_cast<std::int64_t>(params_.size())) return kNegInf;
      double p = params_[static_cast<std::size_t>(i)];
      return p > 0.0 ? std::log(p) : kNegInf;
    }
    case Kind::kUniformDiscrete: {
      if (!value.is_integer()) return kNegInf;
      double v = static_cast<double>(value.as_integer());
      if (v < params_[0] || v > params_[1]) return kNegInf;
      return -std::log(params_[1] - params_[0] + 1.0);
    }
    case Kind::kNormal: {
      if (!value.is_real()) return kNegInf;
      return normal_log_density(value.as_real(), params_[0], params_[1]);
    }
    case Kind::kCauchy: {
      if (!value.is_real()) return kNegInf;
      double t = (value.as_real() - params_[0]) / params_[1];
      return -std::log(M_PI * params_[1] * (1.0 + t * t));
    }
    case Kind::kGamma: {
      if (!value.is_real()) return kNegInf;
      double x = value.as_real();
      if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
      double shape = params_[0];
      double scale = params_[1];
      return (shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) -
             shape * std::log(scale);
    }
    case Kind::kMvNormalIid: {
      if (!value.is_real_vector()) return kNegInf;
      const auto& xs = value.as_real_vector();
      if (xs.size() != static_cast<std::size_t>(params_[0])) return kNegInf;
      double total = 0.0;
      for (double x : xs) total += normal_log_density(x, 0.0, 1.0);
      return total;
    }
  }
  throw DomainError("unreachable distribution kind");
}

ParamGrad Distribution::grad_log_density(const Value& value) const {
  if (log_density(value) == kNegInf) {
    throw OutOfSupportError("grad_log_density at a value outside the support of " +
                            describe());
  }
  ParamGrad grad;
  switch (kind_) {
    case Kind::kBernoulli: {
      double p = params_[0];
      grad.partials["p"] = value.as_boolean() ? 1.0 / p : -1.0 / (1.0 - p);
      break;
    }
    case Kind::kCategorical: {
      std::size_t v = static_cast<std::size_t>(value.as_integer());
      for (std::size_t i = 0; i < params_.size(); ++i) {
        grad.partials["probs[" + std::to_string(i) + "]"] =
            (i == v) ? 1.0 / params_[v] : 0.0;
      }
      break;
    }
    case Kind::kUniformDiscrete:
      break;
    case Kind::kNormal: {
      double mean = params_[0];
      double sd = params_[1];
      double d = value.as_real() - mean;
      grad.partials["mean"] = d / (sd * sd);
      grad.partials["stddev"] = -1.0 / sd + d * d / (sd * sd * sd);
      break;
    }
    case Kind::kCauchy: {
      double s = params_[1];
      double t = (value.as_real() - params_[0]) / s;
      double denom = s * (1.0 + t * t);
      grad.partials["location"] = 2.0 * t / denom;
      grad.partials["scale"] = -1.0 / s + 2.0 * t * t / denom;
      break;
    }
    case Kind::kGamma: {
      double shape = params_[0];
      double scale = params_[1];
      double x = value.as_real();
      grad.partials["shape"] = std::log(x) - std::log(scale) - digamma(shape);
      grad.partials["scale"] = x / (scale * scale) - shape / scale;
      break;
    }
    case Kind::kMvNormalIid:
      break;
  }
  return grad;
}

bool Distribution::has_finite_support() const {
  switch (kind_) {
    case Kind::kBernoulli:
    case Kind::kCategorical:
    case Kind::kUniformDiscrete:
      return true;
    default:
      return false;
  }
}

std::vector<Value> Distribution::support() const {
  switch (kind_) {
    case Kind::kBernoulli: {
      double p = params_[0];
      std::vector<Value> out;
      if (p < 1.0) out.push_back(Value(false));
      if (p > 0.0) out.push_back(Value(true));
      return out;
    }
    case Kind::kCategorical: {
      std::vector<Value> out;
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i] > 0.0) out.push_back(Value(static_cast<std::int64_t>(i)));
      }
      return out;
    }
    case Kind::kUniformDiscrete: {
      std::int64_t lo = static_cast<std::int64_t>(params_[0]);
      std::int64_t hi = static_cast<std::int64_t>(params_[1]);
      if (hi - lo + 1 > 10000000) {
        throw BranchLimitError("uniform_discrete support too large to enumerate");
      }
      std::vector<Value> out;
      for (std::int64_t v = lo; v <= hi; ++v) out.push_back(Value(v));
      return out;
    }
    default:
      throw NonEnumerableError("support() on a continuous distribution: " + describe());
  }
}

std::string Distribution::describe() const {
  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return std::string(buf);
  };
  switch (kind_) {
    case Kind::kBernoulli:
      return "bernoulli(" + fmt(params_[0]) + ")";
    case Kind::kCategorical:
      return "categorical(" + std::to_string(params_.size()) + " cells)";
    case Kind::kUniformDiscrete:
      return "uniform_discrete(" + fmt(params_[0]) + ", " + fmt(params_[1]) + ")";
    case Kind::kNormal:
      return "normal(" + fmt(params_[0]) + ", " + fmt(params_[1]) + ")";
    case Kind::kCauchy:
      return "cauchy(" + fmt(params_[0]) + ", " + fmt(params_[1]) + ")";
    case Kind::kGamma:
      return "gamma(" + fmt(params_[0]) + ", " + fmt(params_[1]) + ")";
    case Kind::kMvNormalIid:
      return "mvnormal_iid(" + fmt(params_[0]) + ")";
  }
  return "unknown";
}

double digamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("digamma requires a positive finite argument");
  }
  double result = 0.0;
  while (x < 8.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  // Asymptotic series through the x^-10 term.
  double tail = inv2 * (1.0 / 12.0 -
                        inv2 * (1.0 / 120.0 -
                                inv2 * (1.0 / 252.0 -
                                        inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
  return result + std::log(x) - 0.5 * inv - tail;
}

}  // namespace propprog::dist
