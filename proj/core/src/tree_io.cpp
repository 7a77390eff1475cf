#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "number_text.hpp"
#include "pentree/error.hpp"
#include "pentree/tree.hpp"

namespace pentree {

namespace {

void write_node(const TreeClassifier& tree, NodeId id, std::string& out) {
  const Node& nd = tree.node(id);
  if (nd.is_leaf()) {
    out += nd.label ? "leaf(1)" : "leaf(0)";
    return;
  }
  out += fmt::format("node({}, {}, ", nd.feature + 1, detail::format_double(nd.threshold));
  write_node(tree, nd.left, out);
  out += ", ";
  write_node(tree, nd.right, out);
  out += ')';
}

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  TreeClassifier parse() {
    parse_node();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return TreeClassifier(std::move(nodes_));
  }

 private:
  NodeId parse_node() {
    skip_space();
    if (consume("leaf")) {
      expect('(');
      const std::string_view tok = token();
      if (tok != "0" && tok != "1") fail("leaf label must be 0 or 1");
      expect(')');
      Node nd;
      nd.label = tok == "1" ? 1 : 0;
      nodes_.push_back(nd);
      return static_cast<NodeId>(nodes_.size() - 1);
    }
    if (!consume("node")) fail("expected 'node' or 'leaf'");
    expect('(');
    const auto j = detail::parse_int<std::size_t>(token());
    if (!j || *j < 1) fail("variable index must be a positive integer");
    expect(',');
    const auto s = detail::parse_double(token());
    if (!s) fail("bad threshold");
    expect(',');
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{*j - 1, *s, kNoChild, kNoChild, 0});
    const NodeId l = parse_node();
    expect(',');
    const NodeId r = parse_node();
    expect(')');
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  std::string_view token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError(fmt::format("tree text, offset {}: {}", pos_, what));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace

std::string to_text(const TreeClassifier& tree) {
  std::string out;
  write_node(tree, tree.root(), out);
  return out;
}

TreeClassifier parse_tree(std::string_view text) { return TreeParser(text).parse(); }

}  // namespace pentree
