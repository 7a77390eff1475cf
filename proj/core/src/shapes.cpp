#include <limits>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pentree/error.hpp"
#include "pentree/oracle.hpp"

namespace pentree {

std::uint64_t catalan(std::size_t k) {
  if (k < 1) throw ParameterError("catalan needs k >= 1");
  // C(2m, m) built as C(m + i, i) for i = 1..m; each step stays integral.
  const std::size_t m = k - 1;
  UInt128 c = 1;
  constexpr auto kMax128 = std::numeric_limits<UInt128>::max();
  for (std::size_t i = 1; i <= m; ++i) {
    if (c > kMax128 / (m + i)) throw ArithmeticError(fmt::format("catalan({}) overflows", k));
    c = c * (m + i) / i;
  }
  c /= k;
  if (c > std::numeric_limits<std::uint64_t>::max())
    throw ArithmeticError(fmt::format("catalan({}) overflows 64 bits", k));
  return static_cast<std::uint64_t>(c);
}

std::uint64_t class_count(std::size_t p, std::size_t k) {
  if (p < 2) throw ParameterError("class_count needs p >= 2");
  std::uint64_t count = catalan(k);
  for (std::size_t i = 1; i < k; ++i)
    if (__builtin_mul_overflow(count, static_cast<std::uint64_t>(p), &count))
      throw ArithmeticError(fmt::format("class_count({}, {}) overflows", p, k));
  return count;
}

std::vector<Shape> enumerate_shapes(std::size_t k) {
  if (k < 1) throw ParameterError("shapes need k >= 1");
  // codes[m] holds the pre-order codes of all shapes with m leaves.
  std::vector<std::vector<std::string>> codes(k + 1);
  codes[1] = {"L"};
  for (std::size_t m = 2; m <= k; ++m)
    for (std::size_t left = 1; left < m; ++left)
      for (const auto& a : codes[left])
        for (const auto& b : codes[m - left]) codes[m].push_back("I" + a + b);
  std::vector<Shape> out;
  out.reserve(codes[k].size());
  for (const auto& code : codes[k]) out.push_back(Shape::from_preorder(code));
  return out;
}

ClassEnumeration enumerate_classes(std::size_t p, std::size_t k, const OracleLimits& limits) {
  std::uint64_t total = 0;
  try {
    total = class_count(p, k);
  } catch (const ArithmeticError&) {
    throw ResourceError(fmt::format("class count for p={}, k={} exceeds 64 bits", p, k));
  }
  if (total > limits.max_classes)
    throw ResourceError(
        fmt::format("{} classes for p={}, k={} exceed the cap {}", total, p, k, limits.max_classes));

  ClassEnumeration out;
  out.k = k;
  out.configurations = enumerate_shapes(k);
  out.classes.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> list(k - 1, 0);
  for (const Shape& shape : out.configurations) {
    std::fill(list.begin(), list.end(), 0);
    while (true) {
      out.classes.push_back(ClassDescriptor{shape, list});
      // Odometer, last entry fastest.
      std::size_t pos = list.size();
      while (pos > 0 && ++list[pos - 1] == p) list[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return out;
}

}  // namespace pentree
