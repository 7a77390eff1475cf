#include "pentree/config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "number_text.hpp"
#include "pentree/error.hpp"

namespace pentree {

namespace {

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  std::optional<T> v;
  if constexpr (std::is_floating_point_v<T>)
    v = detail::parse_double(text);
  else
    v = detail::parse_int<T>(text);
  if (!v) throw ParameterError(fmt::format("{}: cannot parse '{}'", key, detail::trim(text)));
  return *v;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_value<T>(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

// Design number from a key like "noise_design3", or 0 when the key does not
// carry that prefix.
int design_suffix(std::string_view key, std::string_view prefix) {
  if (key.size() != prefix.size() + 1 || key.substr(0, prefix.size()) != prefix) return 0;
  const char d = key.back();
  return d >= '1' && d <= '4' ? d - '0' : 0;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  value = detail::trim(value);
  if (key == "designs") {
    cfg.designs = parse_list<int>(key, value);
  } else if (key == "n_grid") {
    cfg.n_grid = parse_list<std::size_t>(key, value);
  } else if (key == "p_grid") {
    cfg.p_grid = parse_list<std::size_t>(key, value);
  } else if (key == "replications") {
    cfg.replications = parse_value<std::size_t>(key, value);
  } else if (key == "folds") {
    cfg.folds = parse_value<std::size_t>(key, value);
  } else if (key == "test_samples") {
    cfg.test_samples = parse_value<std::size_t>(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_value<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.master_seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "output") {
    if (value.empty()) throw ParameterError("output: empty path");
    cfg.output_dir = std::string(value);
  } else if (key == "rule") {
    if (value == "min")
      cfg.rule = CVRule::Min;
    else if (value == "1se")
      cfg.rule = CVRule::OneSE;
    else
      throw ParameterError(fmt::format("rule: expected 'min' or '1se', got '{}'", value));
  } else if (int d = design_suffix(key, "noise_design")) {
    cfg.noise_grid[d] = parse_list<double>(key, value);
  } else if (int d = design_suffix(key, "replications_design")) {
    cfg.design_replications[d] = parse_value<std::size_t>(key, value);
  } else {
    throw ParameterError(fmt::format("unknown configuration key '{}'", key));
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParameterError(fmt::format("line {}: expected key = value", line_no));
    try {
      apply_setting(base, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ParameterError& e) {
      throw ParameterError(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config file {}", path));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

}  // namespace pentree
