#include <cmath>

#include <fmt/format.h>

#include "pentree/error.hpp"
#include "pentree/select.hpp"

namespace pentree {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double c, const char* what) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError(fmt::format("{} must be > 0", what));
}

void check(const MarginAdaptivePenalty& m) {
  if (!(m.kappa >= 1.0) || !std::isfinite(m.kappa)) throw ParameterError("kappa must be >= 1");
  require_positive(m.c1, "c1");
  require_positive(m.c2, "c2");
}

void check(const VCPenalty& v) {
  require_positive(v.c1, "c1");
  require_positive(v.c2, "c2");
}

double margin_value(const MarginAdaptivePenalty& m, double k, double n, double p) {
  if (m.kappa == 1.0) return k * (m.c1 * std::log(2.0 * n) + m.c2 * std::log(p)) / n;
  const double e = m.kappa / (2.0 * m.kappa - 1.0);
  return m.c1 * std::pow(k * std::log(2.0 * n) / n, e) + m.c2 * std::pow(k * std::log(p) / n, e);
}

double vc_value(const VCPenalty& v, double k, double n) {
  return v.c1 * std::sqrt(k * std::log(n) / n) + v.c2 * k / n;
}

}  // namespace

void validate(const PenaltySpec& spec) {
  std::visit(Overloaded{
                 [](const LinearPenalty& l) {
                   if (!(l.alpha >= 0.0) || !std::isfinite(l.alpha))
                     throw ParameterError("alpha must be >= 0");
                 },
                 [](const MarginAdaptivePenalty& m) { check(m); },
                 [](const VCPenalty& v) { check(v); },
                 [](const MinCombinedPenalty& mc) {
                   check(mc.margin);
                   check(mc.vc);
                 },
                 [](const NobelPenalty& nb) { require_positive(nb.c1, "c1"); },
                 [](const GeyPenalty& g) { require_positive(g.c2, "c2"); },
             },
             spec);
}

std::string penalty_name(const PenaltySpec& spec) {
  return std::visit(Overloaded{
                        [](const LinearPenalty&) { return std::string("linear"); },
                        [](const MarginAdaptivePenalty&) { return std::string("margin"); },
                        [](const VCPenalty&) { return std::string("vc"); },
                        [](const MinCombinedPenalty&) { return std::string("min"); },
                        [](const NobelPenalty&) { return std::string("nobel"); },
                        [](const GeyPenalty&) { return std::string("gey"); },
                    },
                    spec);
}

double strong_margin_alpha(double c1, double c2, std::size_t n, std::size_t p) {
  const auto nn = static_cast<double>(n);
  return (c1 * std::log(2.0 * nn) + c2 * std::log(static_cast<double>(p))) / nn;
}

double penalty_value(const PenaltySpec& spec, std::size_t k, std::size_t n, std::size_t p) {
  validate(spec);
  if (k < 1) throw ParameterError("tree size k must be >= 1");
  if (n < 1) throw ParameterError("n must be >= 1");
  if (p < 2) throw ParameterError("p must be >= 2");
  const auto kk = static_cast<double>(k);
  const auto nn = static_cast<double>(n);
  const auto pp = static_cast<double>(p);
  return std::visit(
      Overloaded{
          [&](const LinearPenalty& l) { return l.alpha * kk; },
          [&](const MarginAdaptivePenalty& m) { return margin_value(m, kk, nn, pp); },
          [&](const VCPenalty& v) { return vc_value(v, kk, nn); },
          [&](const MinCombinedPenalty& mc) {
            return std::min(margin_value(mc.margin, kk, nn, pp), vc_value(mc.vc, kk, nn));
          },
          [&](const NobelPenalty& nb) { return nb.c1 * std::sqrt(kk * pp * std::log(nn) / nn); },
          [&](const GeyPenalty& g) {
            const double lp = std::log(pp);
            return g.c2 * pp * lp * (1.0 + std::log(nn / lp)) * kk / nn;
          },
      },
      spec);
}

}  // namespace pentree
