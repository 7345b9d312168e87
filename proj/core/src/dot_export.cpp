#include "novelty/dot_export.hpp"

#include <charconv>
#include <sstream>

namespace novelty {
namespace {

// Light-to-dark blues, one bucket per two levels, saturating at the end.
constexpr const char* kDepthColors[] = {"#fde0dd", "#deebf7", "#c6dbef",
                                        "#9ecae1", "#6baed6", "#4292c6"};

const char* depth_color(std::size_t depth) {
  constexpr std::size_t n = std::size(kDepthColors);
  const std::size_t bucket = (depth + 1) / 2;
  return kDepthColors[bucket < n ? bucket : n - 1];
}

std::string num(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

class Writer {
 public:
  explicit Writer(const std::string& name) {
    out_ << "digraph \"" << escape(name) << "\" {\n"
         << "  node [shape=box, style=filled, fontname=\"Helvetica\"];\n";
  }

  std::size_t node(const std::string& label, std::size_t depth) {
    const std::size_t id = next_++;
    out_ << "  n" << id << " [label=\"" << escape(label) << "\", fillcolor=\""
         << depth_color(depth) << "\"];\n";
    return id;
  }

  void edge(std::size_t from, std::size_t to, const std::string& label) {
    out_ << "  n" << from << " -> n" << to << " [label=\"" << escape(label)
         << "\"];\n";
  }

  std::string finish() {
    out_ << "}\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
  std::size_t next_ = 0;
};

std::size_t emit(Writer& w, const OriginalNode& node, std::size_t depth) {
  std::string label = to_string(node.rect);
  if (node.is_leaf()) {
    label += "\ndepth " + std::to_string(depth) + ", n=" +
             std::to_string(node.count);
    if (node.leaf_kind == LeafKind::kDuplicate) label += " (duplicates)";
    if (node.leaf_kind == LeafKind::kTruncated) label += " (truncated)";
    return w.node(label, depth);
  }
  const std::string dim = "x" + std::to_string(node.rule->dim);
  const std::string thr = num(node.rule->threshold);
  label += "\nsplit " + dim + " at " + thr;
  const std::size_t id = w.node(label, depth);
  w.edge(id, emit(w, *node.left, depth + 1), dim + " <= " + thr);
  w.edge(id, emit(w, *node.right, depth + 1), dim + " > " + thr);
  return id;
}

std::size_t emit(Writer& w, const HstNode& node, std::size_t depth) {
  std::string label = to_string(node.rect);
  if (node.is_leaf()) {
    label += "\ndepth " + std::to_string(depth) + ", n=" +
             std::to_string(node.sample_count);
    if (node.truncated) label += " (truncated)";
    return w.node(label, depth);
  }
  const std::size_t d = *node.split_dim;
  const std::string dim = "x" + std::to_string(d);
  const std::string mid = num(node.left->rect[d].hi);
  label += "\nhalve " + dim + " at " + mid;
  const std::size_t id = w.node(label, depth);
  w.edge(id, emit(w, *node.left, depth + 1), dim + " < " + mid);
  w.edge(id, emit(w, *node.right, depth + 1), dim + " >= " + mid);
  return id;
}

}  // namespace

std::string to_dot(const OriginalTree& tree, const std::string& name) {
  Writer w(name);
  emit(w, tree.root(), 0);
  return w.finish();
}

std::string to_dot(const HalfSpaceTree& tree, const std::string& name) {
  Writer w(name);
  emit(w, tree.root(), 0);
  return w.finish();
}

std::string to_dot(const Tree& tree, const std::string& name) {
  return std::visit([&](const auto& t) { return to_dot(t, name); }, tree);
}

}  // namespace novelty
