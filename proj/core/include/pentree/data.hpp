#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pentree/random.hpp"

namespace pentree {

using Label = std::uint8_t;

/// n observations of p ordered real features with binary labels.
///
/// Features are stored row-major. Invariants: n >= 1, p >= 2, every label
/// is 0 or 1.
class Dataset {
 public:
  Dataset(std::size_t n, std::size_t p, std::vector<double> features,
          std::vector<Label> labels);

  std::size_t rows() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return p_; }

  double x(std::size_t i, std::size_t j) const noexcept { return features_[i * p_ + j]; }
  Label y(std::size_t i) const noexcept { return labels_[i]; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {features_.data() + i * p_, p_};
  }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const double> features() const noexcept { return features_; }

  /// Rows selected by index, in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;

  std::size_t count_label(Label label) const noexcept;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> features_;
  std::vector<Label> labels_;
};

/// One of the four simulation designs.
///
/// `noise` is the flip probability q in (0, 1/2) for design 1 and the
/// class-conditional variance sigma^2 > 0 for designs 2-4.
struct DesignSpec {
  int design = 1;
  std::size_t n = 100;
  std::size_t p = 2;
  double noise = 0.1;
  std::uint64_t seed = 0;

  /// Throws ParameterError when the spec is out of range.
  void validate() const;
};

/// Columns whose law does not depend on any other column being drawn.
/// Drawing only these (plus the requested extras) keeps every row
/// distributed exactly as in the full design.
std::size_t core_columns(int design) noexcept;

/// Draws one observation of `spec` into `x` (length p) and returns its label.
/// Non-core columns whose `wanted` flag is false are left untouched; an
/// empty `wanted` draws every column.
Label draw_observation(const DesignSpec& spec, Engine& engine, std::span<double> x,
                       std::span<const bool> wanted = {});

/// Simulated dataset of exactly (spec.n, spec.p); a pure function of spec.
Dataset generate(const DesignSpec& spec);

/// Regression function P(Y = 1 | X = x) of the design.
double eta(const DesignSpec& spec, std::span<const double> x);

/// Misclassification rate of the Bayes rule 1{eta >= 1/2}.
double bayes_risk(const DesignSpec& spec);

/// P(|2 eta(X) - 1| <= t), in closed form for every design.
double margin_mass(const DesignSpec& spec, double t);

/// Margin assumptions: MA1 bounds the mass by C0 t^(1/(kappa-1)); MA2 asks
/// for zero mass below some h in (0,1).
struct MarginSpec {
  enum class Kind { MA1, MA2 };
  Kind kind = Kind::MA2;
  double c0 = 1.0;
  double kappa = 2.0;
  double h = 0.5;

  static MarginSpec ma1(double c0, double kappa);
  static MarginSpec ma2(double h);
};

/// Analytic check of a margin assumption for a design. MA2 is exact; MA1 is
/// checked on a fine grid of t in (0, 1].
bool satisfies_margin(const DesignSpec& spec, const MarginSpec& margin);

/// Standard normal CDF.
double normal_cdf(double z) noexcept;

// CSV with header `x1,...,xp,y`. The label column must be named "y";
// every other column is a feature, kept in file order.
Dataset read_csv(const std::string& path);
Dataset parse_csv(const std::string& text);
std::string to_csv(const Dataset& data);
void write_csv(const Dataset& data, const std::string& path);

}  // namespace pentree
