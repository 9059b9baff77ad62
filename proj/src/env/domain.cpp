#include "tbandit/env/domain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tbandit/core/error.hpp"

namespace tbandit::env {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Binary: return "binary";
    case Variant::LinearGaussian: return "linear_gaussian";
    case Variant::NonlinearProxy: return "nonlinear_proxy";
  }
  return "unknown";
}

std::string to_string(Truncation t) {
  switch (t) {
    case Truncation::None: return "none";
    case Truncation::PositiveOnly: return "positive";
    case Truncation::NegativeOnly: return "negative";
  }
  return "unknown";
}

ProxyGenerator::ProxyGenerator(std::size_t dim_z, const ProxyParams& params)
    : dim_z_(dim_z), dim_w_(params.dim_w), gain_(params.output_gain) {
  Rng rng(params.generator_seed, stream::kGenerator);
  std::vector<std::size_t> widths;
  widths.push_back(dim_z);
  widths.insert(widths.end(), params.hidden_widths.begin(), params.hidden_widths.end());
  widths.push_back(dim_w_);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.in = widths[l];
    layer.out = widths[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.in));
    layer.weight.resize(layer.in * layer.out);
    for (double& v : layer.weight) v = scale * rng.normal();
    layer.bias.resize(layer.out);
    for (double& v : layer.bias) v = 0.5 * rng.normal();
    layers_.push_back(std::move(layer));
  }
}

void ProxyGenerator::apply(std::span<const double> z, std::span<double> out) const {
  std::vector<double> current(z.begin(), z.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    next.assign(layer.out, 0.0);
    for (std::size_t o = 0; o < layer.out; ++o) {
      double acc = layer.bias[o];
      for (std::size_t i = 0; i < layer.in; ++i) acc += layer.weight[o * layer.in + i] * current[i];
      next[o] = (l + 1 < layers_.size()) ? std::tanh(acc) : acc;
    }
    current.swap(next);
  }
  for (std::size_t i = 0; i < dim_w_; ++i) out[i] = gain_ * current[i];
}

DomainSpec DomainSpec::binary(double c) {
  DomainSpec spec;
  spec.variant_ = Variant::Binary;
  spec.proxy_.dim_w = 1;
  spec.dim_z_ = 1;
  spec.validate_context(ContextParams::bernoulli(c));
  spec.context_ = ContextParams::bernoulli(c);
  return spec;
}

DomainSpec DomainSpec::linear_gaussian(ContextParams context, ProxyParams proxy, RewardParams reward) {
  DomainSpec spec;
  spec.variant_ = Variant::LinearGaussian;
  if (proxy.dim_w == 0) throw std::invalid_argument("linear_gaussian: dim_w must be >= 1");
  if (proxy.a.empty()) proxy.a.assign(proxy.dim_w, 1.0);
  if (proxy.b.empty()) proxy.b.assign(proxy.dim_w, 0.0);
  if (proxy.a.size() != proxy.dim_w || proxy.b.size() != proxy.dim_w) {
    throw std::invalid_argument("linear_gaussian: a and b must have dim_w entries");
  }
  spec.dim_z_ = context.mean.size();
  if (spec.dim_z_ != 1 && spec.dim_z_ != proxy.dim_w) {
    throw std::invalid_argument("linear_gaussian: dim_z must be 1 (broadcast) or dim_w");
  }
  spec.proxy_ = std::move(proxy);
  spec.reward_ = reward;
  spec.validate_context(context);
  spec.context_ = std::move(context);
  return spec;
}

DomainSpec DomainSpec::nonlinear_proxy(ContextParams context, ProxyParams proxy, RewardParams reward) {
  DomainSpec spec;
  spec.variant_ = Variant::NonlinearProxy;
  spec.dim_z_ = context.mean.size();
  if (spec.dim_z_ == 0) throw std::invalid_argument("nonlinear_proxy: context mean must be nonempty");
  if (proxy.dim_w < spec.dim_z_) throw std::invalid_argument("nonlinear_proxy: requires dim_w >= dim_z");
  for (std::size_t width : proxy.hidden_widths) {
    if (width == 0) throw std::invalid_argument("nonlinear_proxy: hidden widths must be >= 1");
  }
  if (!(reward.scale > 0.0)) throw std::invalid_argument("nonlinear_proxy: reward scale must be > 0");
  if (!(proxy.noise_std >= 0.0)) throw std::invalid_argument("nonlinear_proxy: noise std must be >= 0");
  spec.proxy_ = std::move(proxy);
  spec.reward_ = reward;
  spec.validate_context(context);
  spec.context_ = std::move(context);
  spec.generator_ = std::make_shared<const ProxyGenerator>(spec.dim_z_, spec.proxy_);
  return spec;
}

void DomainSpec::validate_context(const ContextParams& context) const {
  if (variant_ == Variant::Binary) {
    if (!(context.c >= 0.0 && context.c <= 1.0)) {
      throw std::invalid_argument("binary domain: c must lie in [0, 1]");
    }
    return;
  }
  if (context.mean.size() != dim_z_) throw std::invalid_argument("context mean has wrong dimension");
  for (double m : context.mean) {
    if (!std::isfinite(m)) throw std::invalid_argument("context mean must be finite");
  }
}

DomainSpec DomainSpec::with_context(ContextParams context) const {
  validate_context(context);
  DomainSpec copy = *this;
  copy.context_ = std::move(context);
  return copy;
}

std::string DomainSpec::tag() const {
  std::ostringstream os;
  os << to_string(variant_) << '(';
  if (variant_ == Variant::Binary) {
    os << "c=" << context_.c;
  } else {
    os << "mean=";
    for (std::size_t i = 0; i < context_.mean.size(); ++i) os << (i ? ";" : "") << context_.mean[i];
    os << ",trunc=" << to_string(context_.truncation) << ",dim_w=" << proxy_.dim_w;
  }
  os << ')';
  return os.str();
}

bool DomainSpec::same_mechanisms(const DomainSpec& other) const {
  return variant_ == other.variant_ && dim_z_ == other.dim_z_ && proxy_.dim_w == other.proxy_.dim_w &&
         proxy_.a == other.proxy_.a && proxy_.b == other.proxy_.b &&
         proxy_.generator_seed == other.proxy_.generator_seed &&
         proxy_.hidden_widths == other.proxy_.hidden_widths &&
         proxy_.output_gain == other.proxy_.output_gain && proxy_.noise_std == other.proxy_.noise_std &&
         reward_.threshold == other.reward_.threshold && reward_.scale == other.reward_.scale &&
         generator_ == other.generator_;
}

DomainPair make_domain_pair(const DomainSpec& mechanisms, ContextParams source, ContextParams target) {
  DomainPair pair{mechanisms.with_context(std::move(source)), mechanisms.with_context(std::move(target))};
  if (!pair.source.same_mechanisms(pair.target)) {
    throw ConfigError("domain pair violates covariate shift: mechanisms differ");
  }
  return pair;
}

}  // namespace tbandit::env
