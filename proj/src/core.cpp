#include "ofdr/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace ofdr {

void validate_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ConfigError("delta must lie in (0, 1], got " + std::to_string(delta));
  }
}

void validate_e_value(double e) {
  if (!(e >= 0.0)) throw DomainError("e-value must be a nonnegative number");
}

void validate_p_value(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p-value must lie in [0, 1]");
}

// ---------------------------------------------------------------------------

GammaSequence::GammaSequence(std::string name, Rule rule)
    : name_(std::move(name)), rule_(std::make_shared<const Rule>(std::move(rule))) {}

GammaSequence GammaSequence::default_rule() {
  return GammaSequence("default", [](std::size_t t) { return gamma_default(t); });
}

GammaSequence GammaSequence::constant(double value) {
  return GammaSequence("constant:" + std::to_string(value), [value](std::size_t) { return value; });
}

GammaSequence GammaSequence::power_law(double exponent) {
  if (!(exponent > 1.0)) throw ConfigError("power-law gamma needs exponent > 1");
  const double scale = (exponent - 1.0) / exponent;
  return GammaSequence("power:" + std::to_string(exponent), [scale, exponent](std::size_t t) {
    return scale * std::pow(static_cast<double>(t), -exponent);
  });
}

GammaSequence GammaSequence::tabulated(std::vector<double> head, GammaSequence tail) {
  auto table = std::make_shared<const std::vector<double>>(std::move(head));
  std::string name = "table(" + std::to_string(table->size()) + ")+" + tail.name();
  return GammaSequence(std::move(name), [table, tail = std::move(tail)](std::size_t t) {
    return t <= table->size() ? (*table)[t - 1] : tail(t);
  });
}

GammaSequence GammaSequence::from_name(std::string_view spec) {
  auto parse_number = [&](std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ConfigError("bad numeric parameter in gamma rule '" + std::string(spec) + "'");
    }
    return value;
  };
  if (spec == "default") return default_rule();
  if (spec.starts_with("constant:")) return constant(parse_number(spec.substr(9)));
  if (spec.starts_with("power:")) return power_law(parse_number(spec.substr(6)));
  throw ConfigError("unknown gamma rule '" + std::string(spec) + "'");
}

double GammaSequence::operator()(std::size_t t) const {
  if (t == 0) throw DomainError("gamma index must be >= 1");
  return (*rule_)(t);
}

double gamma_default(std::size_t t) {
  if (t == 0) throw DomainError("gamma index must be >= 1");
  const double x = static_cast<double>(t);
  return 1.0 / (x * (x + 1.0));
}

void GammaCache::extend(std::size_t t) {
  while (weights_.size() < t) {
    const double w = seq_(weights_.size() + 1);
    weights_.push_back(w);
    prefix_.push_back(prefix_.back() + w);
  }
}

double GammaCache::weight(std::size_t t) {
  if (t == 0) throw DomainError("gamma index must be >= 1");
  extend(t);
  return weights_[t - 1];
}

double GammaCache::prefix(std::size_t t) {
  extend(t);
  return prefix_[t];
}

void GammaCache::reserve(std::size_t horizon) {
  weights_.reserve(horizon);
  prefix_.reserve(horizon + 1);
  extend(horizon);
}

GammaReport gamma_validate(const GammaSequence& seq, std::size_t horizon) {
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  GammaReport report;
  double sum = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double g = seq(t);
    sum += g;
    if (!(g >= 0.0)) {
      return {false, t, sum, "negative weight"};
    }
    if (sum > 1.0 + 1e-12) {
      return {false, t, sum, "prefix sum exceeds one"};
    }
  }
  report.prefix_sum = sum;
  return report;
}

// ---------------------------------------------------------------------------

double harmonic(std::size_t t) {
  if (t == 0) throw DomainError("harmonic index must be >= 1");
  double h = 0.0;
  for (std::size_t i = 1; i <= t; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

double HarmonicSeries::value(std::size_t t) {
  if (t == 0) throw DomainError("harmonic index must be >= 1");
  while (values_.size() <= t) {
    values_.push_back(values_.back() + 1.0 / static_cast<double>(values_.size()));
  }
  return values_[t];
}

// ---------------------------------------------------------------------------

std::string_view to_string(EvidenceKind kind) {
  return kind == EvidenceKind::e_value ? "e" : "p";
}

void Observation::validate() const {
  const std::string where = " at index " + std::to_string(index);
  if (index == 0) throw InputError("observation index must be >= 1");
  if (kind == EvidenceKind::e_value && !(value >= 0.0)) {
    throw InputError("e-value must be nonnegative" + where);
  }
  if (kind == EvidenceKind::p_value && !(value >= 0.0 && value <= 1.0)) {
    throw InputError("p-value must lie in [0, 1]" + where);
  }
  if (deadline && *deadline < index) throw InputError("deadline precedes arrival" + where);
}

// ---------------------------------------------------------------------------

double fdp(std::span<const std::size_t> candidate_nulls, std::span<const std::size_t> rejections) {
  if (rejections.empty()) return 0.0;
  const std::set<std::size_t> nulls(candidate_nulls.begin(), candidate_nulls.end());
  const std::set<std::size_t> rejected(rejections.begin(), rejections.end());
  std::size_t false_count = 0;
  for (std::size_t i : rejected) false_count += nulls.count(i);
  return static_cast<double>(false_count) / static_cast<double>(rejected.size());
}

double sup_fdp(std::span<const std::size_t> null_set, std::span<const IndexSet> trajectory) {
  double best = 0.0;
  for (const auto& r : trajectory) best = std::max(best, fdp(null_set, r));
  return best;
}

}  // namespace ofdr
