#include "pentree/data.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "pentree/error.hpp"

namespace pentree {

Dataset::Dataset(std::size_t n, std::size_t p, std::vector<double> features,
                 std::vector<Label> labels)
    : n_(n), p_(p), features_(std::move(features)), labels_(std::move(labels)) {
  if (n_ < 1) throw InputError("dataset needs at least one row");
  if (p_ < 2) throw InputError(fmt::format("dataset needs p >= 2 features, got {}", p_));
  if (labels_.size() != n_)
    throw InputError(fmt::format("{} labels for {} rows", labels_.size(), n_));
  if (features_.size() != n_ * p_)
    throw InputError(fmt::format("feature table has {} values, expected {}x{}",
                                 features_.size(), n_, p_));
  for (Label y : labels_)
    if (y > 1) throw InputError("labels must be 0 or 1");
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> x;
  std::vector<Label> y;
  x.reserve(rows.size() * p_);
  y.reserve(rows.size());
  for (std::size_t i : rows) {
    if (i >= n_) throw InputError(fmt::format("row {} out of range", i));
    auto r = row(i);
    x.insert(x.end(), r.begin(), r.end());
    y.push_back(labels_[i]);
  }
  return Dataset(rows.size(), p_, std::move(x), std::move(y));
}

std::size_t Dataset::count_label(Label label) const noexcept {
  std::size_t c = 0;
  for (Label y : labels_) c += (y == label);
  return c;
}

void DesignSpec::validate() const {
  if (design < 1 || design > 4)
    throw ParameterError(fmt::format("unknown design {}", design));
  if (n < 1) throw ParameterError("n must be positive");
  if (p < 2) throw ParameterError("p must be at least 2");
  if (design == 4 && p < 3) throw ParameterError("design 4 needs p >= 3");
  if (design == 1) {
    if (!(noise > 0.0 && noise < 0.5))
      throw ParameterError(fmt::format("design 1 needs q in (0, 1/2), got {}", noise));
  } else if (!(noise > 0.0) || !std::isfinite(noise)) {
    throw ParameterError(fmt::format("design {} needs sigma^2 > 0, got {}", design, noise));
  }
}

std::size_t core_columns(int design) noexcept {
  switch (design) {
    case 1: return 2;
    case 2: return 1;
    case 3: return 2;
    default: return 3;
  }
}

Label draw_observation(const DesignSpec& spec, Engine& engine, std::span<double> x,
                       std::span<const bool> wanted) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t p = x.size();
  const std::size_t core = core_columns(spec.design);
  auto want = [&](std::size_t j) { return wanted.empty() || wanted[j]; };

  switch (spec.design) {
    case 1: {
      for (std::size_t j = 0; j < core; ++j) x[j] = gauss(engine);
      for (std::size_t j = core; j < p; ++j)
        if (want(j)) x[j] = gauss(engine);
      const bool quadrant = x[0] > 0.0 && x[1] > 0.0;
      std::bernoulli_distribution flip(quadrant ? spec.noise : 1.0 - spec.noise);
      return flip(engine) ? 1 : 0;
    }
    case 2:
    case 3: {
      std::bernoulli_distribution coin(0.5);
      const Label y = coin(engine) ? 1 : 0;
      const double sigma = std::sqrt(spec.noise);
      for (std::size_t j = 0; j < core; ++j) x[j] = y + sigma * gauss(engine);
      for (std::size_t j = core; j < p; ++j)
        if (want(j)) x[j] = gauss(engine);
      return y;
    }
    default: {
      for (std::size_t j = 0; j < core; ++j) x[j] = gauss(engine);
      const double mean = (x[0] + x[1] + x[2]) / std::numbers::sqrt3;
      const double sigma = std::sqrt(spec.noise);
      for (std::size_t j = core; j < p; ++j)
        if (want(j)) x[j] = mean + sigma * gauss(engine);
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      return r2 > 2.5 ? 1 : 0;
    }
  }
}

Dataset generate(const DesignSpec& spec) {
  spec.validate();
  Engine engine = make_engine(spec.seed);
  std::vector<double> x(spec.n * spec.p);
  std::vector<Label> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    y[i] = draw_observation(spec, engine, std::span<double>(x.data() + i * spec.p, spec.p));
  return Dataset(spec.n, spec.p, std::move(x), std::move(y));
}

namespace {

double logistic_of_neg(double a) { return 1.0 / (1.0 + std::exp(a)); }

void check_dimension(const DesignSpec& spec, std::span<const double> x) {
  if (x.size() != spec.p)
    throw InputError(fmt::format("point has {} coordinates, design has p = {}", x.size(), spec.p));
}

}  // namespace

double eta(const DesignSpec& spec, std::span<const double> x) {
  spec.validate();
  check_dimension(spec, x);
  switch (spec.design) {
    case 1:
      return (x[0] > 0.0 && x[1] > 0.0) ? spec.noise : 1.0 - spec.noise;
    case 2:
      return logistic_of_neg((1.0 - 2.0 * x[0]) / (2.0 * spec.noise));
    case 3:
      return logistic_of_neg((1.0 - x[0] - x[1]) / spec.noise);
    default:
      return (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) > 2.5 ? 1.0 : 0.0;
  }
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double bayes_risk(const DesignSpec& spec) {
  spec.validate();
  const double sigma = std::sqrt(spec.noise);
  switch (spec.design) {
    case 1: return spec.noise;
    case 2: return normal_cdf(-1.0 / (2.0 * sigma));
    case 3: return normal_cdf(-1.0 / (std::numbers::sqrt2 * sigma));
    default: return 0.0;
  }
}

double margin_mass(const DesignSpec& spec, double t) {
  spec.validate();
  if (!(t >= 0.0)) throw ParameterError("margin threshold t must be >= 0");
  if (t >= 1.0) return 1.0;
  switch (spec.design) {
    case 1:
      return t >= std::abs(1.0 - 2.0 * spec.noise) ? 1.0 : 0.0;
    case 2: {
      // |2 eta - 1| <= t  <=>  |x1 - 1/2| <= 2 sigma^2 atanh(t); the two
      // class-conditional normals contribute equally by symmetry.
      const double sigma = std::sqrt(spec.noise);
      const double w = 2.0 * spec.noise * std::atanh(t);
      return normal_cdf((0.5 + w) / sigma) - normal_cdf((0.5 - w) / sigma);
    }
    case 3: {
      // Same with S = x1 + x2 ~ N(0 or 2, 2 sigma^2) and |S - 1| <= 2 sigma^2 atanh(t).
      const double tau = std::sqrt(2.0 * spec.noise);
      const double w = 2.0 * spec.noise * std::atanh(t);
      return normal_cdf((1.0 + w) / tau) - normal_cdf((1.0 - w) / tau);
    }
    default:
      return 0.0;
  }
}

MarginSpec MarginSpec::ma1(double c0, double kappa) {
  if (!(c0 > 0.0)) throw ParameterError("MA1 needs C0 > 0");
  if (!(kappa > 1.0)) throw ParameterError("MA1 needs kappa > 1");
  return MarginSpec{Kind::MA1, c0, kappa, 0.0};
}

MarginSpec MarginSpec::ma2(double h) {
  if (!(h > 0.0 && h < 1.0)) throw ParameterError("MA2 needs h in (0, 1)");
  return MarginSpec{Kind::MA2, 0.0, 1.0, h};
}

bool satisfies_margin(const DesignSpec& spec, const MarginSpec& margin) {
  if (margin.kind == MarginSpec::Kind::MA2) return margin_mass(spec, margin.h) == 0.0;
  constexpr int kGrid = 2000;
  const double exponent = 1.0 / (margin.kappa - 1.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double t = static_cast<double>(i) / kGrid;
    if (margin_mass(spec, t) > margin.c0 * std::pow(t, exponent)) return false;
  }
  return true;
}

}  // namespace pentree
