#include "mafkit/newick.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "mafkit/forest.hpp"

namespace mafkit {

namespace {

bool is_name_char(char c) {
  switch (c) {
    case '(': case ')': case ',': case ';': case ':': case '\'': case '[': case ']':
      return false;
    default:
      return !std::isspace(static_cast<unsigned char>(c));
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PhyloTree run() {
    Vertex root = parse_subtree();
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ';') fail("expected ';'");
    ++pos_;
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    if (leaf_seen_ == 0) fail("empty tree");
    for (const auto& node : nodes_)
      if (node.children.empty() && node.label.empty())
        fail("unlabelled leaf");
    return PhyloTree::from_nodes(std::move(nodes_), root);
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  std::vector<PhyloTree::Node> nodes_;
  std::set<std::string, std::less<>> labels_;
  int leaf_seen_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw NewickError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Vertex add_node() {
    nodes_.push_back({});
    return static_cast<Vertex>(nodes_.size() - 1);
  }

  std::string parse_name() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      ++pos_;
      std::string out;
      while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (c == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {  // escaped quote
            out.push_back('\'');
            pos_ += 2;
            continue;
          }
          ++pos_;
          return out;
        }
        out.push_back(c);
        ++pos_;
      }
      fail("unterminated quoted name");
    }
    std::string out;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) out.push_back(text_[pos_++]);
    return out;
  }

  void skip_branch_length() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      skip_ws();
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+' ||
              text_[pos_] == 'e' || text_[pos_] == 'E'))
        ++pos_;
      if (pos_ == start) fail("expected branch length after ':'");
    }
  }

  Vertex parse_subtree() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '(') {
      ++pos_;
      Vertex v = add_node();
      for (;;) {
        Vertex c = parse_subtree();
        nodes_[c].parent = v;
        nodes_[v].children.push_back(c);
        skip_ws();
        if (pos_ >= text_.size()) fail("unterminated '('");
        if (text_[pos_] == ',') { ++pos_; continue; }
        if (text_[pos_] == ')') { ++pos_; break; }
        fail("expected ',' or ')'");
      }
      parse_name();  // internal name, discarded
      skip_branch_length();
      return v;
    }
    size_t at = pos_;
    std::string name = parse_name();
    if (name.empty()) fail("expected leaf name");
    if (!labels_.insert(name).second) {
      pos_ = at;
      fail("duplicate leaf label '" + name + "'");
    }
    ++leaf_seen_;
    Vertex v = add_node();
    nodes_[v].label = std::move(name);
    skip_branch_length();
    return v;
  }
};

bool needs_quoting(const std::string& name) {
  if (name.empty()) return true;
  for (char c : name)
    if (!is_name_char(c)) return true;
  return false;
}

void write_label(std::ostream& os, const std::string& name) {
  if (!needs_quoting(name)) {
    os << name;
    return;
  }
  os << '\'';
  for (char c : name) {
    if (c == '\'') os << "''";
    else os << c;
  }
  os << '\'';
}

void write_subtree(std::ostream& os, const PhyloTree& t, Vertex v) {
  if (t.is_leaf(v)) {
    write_label(os, t.label(v));
    return;
  }
  os << '(';
  const auto& ch = t.children(v);
  for (size_t i = 0; i < ch.size(); ++i) {
    if (i) os << ',';
    write_subtree(os, t, ch[i]);
  }
  os << ')';
}

}  // namespace

PhyloTree parse_newick(std::string_view text) { return Parser(text).run(); }

std::string write_newick(const PhyloTree& t) {
  PhyloTree c = t;
  c.canonicalize();
  std::ostringstream os;
  write_subtree(os, c, c.root());
  os << ';';
  return os.str();
}

std::vector<PhyloTree> read_newick_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<PhyloTree> out;
  std::string line;
  while (std::getline(in, line)) {
    size_t a = line.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) continue;
    out.push_back(parse_newick(line));
  }
  if (out.empty()) throw std::runtime_error("no trees in '" + path + "'");
  return out;
}

Forest read_forest_file(const std::string& path) {
  Forest f;
  f.components = read_newick_file(path);
  return f;
}

std::string write_forest(const Forest& f) {
  std::string out;
  for (const PhyloTree& c : f.components) {
    out += write_newick(c);
    out += '\n';
  }
  return out;
}

}  // namespace mafkit
