#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "number_text.hpp"
#include "pentree/data.hpp"
#include "pentree/error.hpp"

namespace pentree {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(detail::trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Dataset parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!detail::trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw InputError("empty CSV input");
  const auto header = split_fields(line);
  std::size_t label_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == "y") {
      if (label_col != header.size()) throw InputError("CSV header has two 'y' columns");
      label_col = c;
    }
  if (label_col == header.size()) throw InputError("CSV header lacks the label column 'y'");
  const std::size_t p = header.size() - 1;

  std::vector<double> x;
  std::vector<Label> y;
  while (next_line()) {
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw InputError(fmt::format("line {}: {} fields, header has {}", line_no, fields.size(),
                                   header.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_col) {
        const auto label = detail::parse_int<int>(fields[c]);
        if (!label || (*label != 0 && *label != 1))
          throw InputError(fmt::format("line {}: label '{}' is not 0 or 1", line_no, fields[c]));
        y.push_back(static_cast<Label>(*label));
      } else {
        const auto v = detail::parse_double(fields[c]);
        if (!v) throw InputError(fmt::format("line {}: bad number '{}'", line_no, fields[c]));
        x.push_back(*v);
      }
    }
  }
  if (y.empty()) throw InputError("CSV has a header but no rows");
  const std::size_t n = y.size();
  return Dataset(n, p, std::move(x), std::move(y));
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t j = 0; j < data.dimension(); ++j) out += fmt::format("x{},", j + 1);
  out += "y\n";
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (double v : data.row(i)) {
      out += detail::format_double(v);
      out += ',';
    }
    out += data.y(i) ? "1\n" : "0\n";
  }
  return out;
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << to_csv(data);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

}  // namespace pentree
