#include "kcut/tree.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kcut/errors.hpp"

namespace kcut {

Tree build_tree(const std::vector<std::int32_t>& parents) { return build_tree(parents, nullptr); }

Tree build_tree(const std::vector<std::int32_t>& parents,
                const std::vector<std::vector<std::int32_t>>& child_order) {
  return build_tree(parents, &child_order);
}

Tree build_tree(const std::vector<std::int32_t>& parents,
                const std::vector<std::vector<std::int32_t>>* child_order) {
  const auto n64 = parents.size();
  if (n64 == 0) throw StructureError("tree must have at least one vertex");
  if (n64 > static_cast<std::size_t>(INT32_MAX) - 1) throw SizeError("tree too large");
  const auto n = static_cast<std::int32_t>(n64);

  std::int32_t root = kNoParent;
  for (std::int32_t v = 0; v < n; ++v) {
    const auto p = parents[v];
    if (p == kNoParent) {
      if (root != kNoParent)
        throw StructureError("multiple roots: " + std::to_string(root) + " and " + std::to_string(v));
      root = v;
    } else if (p < 0 || p >= n) {
      throw StructureError("orphan vertex " + std::to_string(v) + ": parent " + std::to_string(p) +
                           " does not exist");
    } else if (p == v) {
      throw StructureError("cycle detected: vertex " + std::to_string(v) + " is its own parent");
    }
  }
  if (root == kNoParent) throw StructureError("no root (every vertex has a parent, so there is a cycle)");

  // Input-label children lists in CSR form.
  std::vector<std::int32_t> off(n + 1, 0), kids(n - 1);
  for (std::int32_t v = 0; v < n; ++v)
    if (parents[v] != kNoParent) ++off[parents[v] + 1];
  for (std::int32_t v = 0; v < n; ++v) off[v + 1] += off[v];
  if (child_order) {
    if (child_order->size() != n64) throw StructureError("child_order must have one list per vertex");
    for (std::int32_t v = 0; v < n; ++v) {
      const auto& list = (*child_order)[v];
      if (static_cast<std::int32_t>(list.size()) != off[v + 1] - off[v])
        throw StructureError("child_order of vertex " + std::to_string(v) + " disagrees with parents");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto c = list[i];
        if (c < 0 || c >= n || parents[c] != v)
          throw StructureError("child_order lists " + std::to_string(c) + " under " + std::to_string(v) +
                               " but its parent differs");
        kids[off[v] + i] = c;
      }
    }
  } else {
    std::vector<std::int32_t> fill(off.begin(), off.end() - 1);
    for (std::int32_t v = 0; v < n; ++v)
      if (parents[v] != kNoParent) kids[fill[parents[v]]++] = v;
  }

  // Preorder with an explicit stack; children pushed in reverse.
  Tree t;
  t.label_.reserve(n);
  std::vector<std::int32_t> canon(n, kNoParent);
  std::vector<std::int32_t> stack{root};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (canon[v] != kNoParent) throw StructureError("cycle detected at vertex " + std::to_string(v));
    canon[v] = static_cast<std::int32_t>(t.label_.size());
    t.label_.push_back(v);
    for (auto i = off[v + 1]; i > off[v]; --i) stack.push_back(kids[i - 1]);
  }
  if (static_cast<std::int32_t>(t.label_.size()) != n) {
    for (std::int32_t v = 0; v < n; ++v)
      if (canon[v] == kNoParent)
        throw StructureError("cycle detected: vertex " + std::to_string(v) + " is not reachable from the root");
  }

  t.parent_.resize(n);
  t.depth_.resize(n);
  t.subtree_.assign(n, 1);
  t.child_offset_.assign(n + 1, 0);
  t.child_list_.resize(n - 1);
  t.parent_[0] = kNoParent;
  t.depth_[0] = 0;
  for (std::int32_t c = 1; c < n; ++c) {
    const auto p = canon[parents[t.label_[c]]];
    t.parent_[c] = p;
    t.depth_[c] = t.depth_[p] + 1;
    if (t.depth_[c] > t.max_depth_) t.max_depth_ = t.depth_[c];
    ++t.child_offset_[p + 1];
  }
  for (std::int32_t v = 0; v < n; ++v) t.child_offset_[v + 1] += t.child_offset_[v];
  // Preorder visits siblings in order, so appending keeps sibling order.
  std::vector<std::int32_t> fill(t.child_offset_.begin(), t.child_offset_.end() - 1);
  for (std::int32_t c = 1; c < n; ++c) t.child_list_[fill[t.parent_[c]]++] = c;
  for (std::int32_t c = n - 1; c > 0; --c) t.subtree_[t.parent_[c]] += t.subtree_[c];
  return t;
}

Profile profile(const Tree& t) {
  Profile p;
  p.n = t.size();
  p.counts.assign(static_cast<std::size_t>(t.max_depth()) + 1, 0);
  for (auto d : t.depths()) ++p.counts[d];
  return p;
}

DfsWalk dfs_walk(const Tree& t) {
  DfsWalk w;
  const auto n = t.size();
  w.values.reserve(2 * static_cast<std::size_t>(n) - 1);
  w.visit_order.reserve(2 * static_cast<std::size_t>(n) - 1);
  // In preorder labelling the walk goes down to v, then back up to the
  // parent of the next vertex before stepping into it.
  w.values.push_back(0);
  w.visit_order.push_back(0);
  std::int32_t cur = 0;
  for (std::int32_t v = 1; v < n; ++v) {
    while (cur != t.parent(v)) {
      cur = t.parent(cur);
      w.values.push_back(t.depth(cur));
      w.visit_order.push_back(cur);
    }
    cur = v;
    w.values.push_back(t.depth(v));
    w.visit_order.push_back(v);
  }
  while (cur != 0) {
    cur = t.parent(cur);
    w.values.push_back(t.depth(cur));
    w.visit_order.push_back(cur);
  }
  return w;
}

namespace {

void check_vertices(const Tree& t, std::span<const std::int32_t> vs) {
  if (vs.empty()) throw ParameterError("spanned_edges needs at least one vertex");
  for (auto v : vs)
    if (v < 0 || v >= t.size()) throw ParameterError("vertex " + std::to_string(v) + " out of range");
}

// New edges on v's root path: climb until reaching a vertex whose subtree
// already holds an earlier query point (that vertex's root path is spanned).
std::int64_t new_edges(const Tree& t, std::int32_t v, std::span<const std::int32_t> earlier) {
  std::int64_t added = 0;
  for (; v != 0; v = t.parent(v)) {
    for (auto u : earlier)
      if (t.is_ancestor(v, u)) return added;
    ++added;
  }
  return added;
}

}  // namespace

std::vector<std::int64_t> incremental_spans(const Tree& t, std::span<const std::int32_t> vs) {
  check_vertices(t, vs);
  std::vector<std::int64_t> out;
  out.reserve(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) out.push_back(new_edges(t, vs[i], vs.first(i)));
  return out;
}

std::int64_t spanned_edges(const Tree& t, std::span<const std::int32_t> vs) {
  std::int64_t total = 0;
  for (auto d : incremental_spans(t, vs)) total += d;
  return total;
}

void write_tree(std::ostream& os, const Tree& t) {
  std::string buf;
  buf.reserve(static_cast<std::size_t>(t.size()) * 8);
  for (std::int32_t v = 0; v < t.size(); ++v) {
    if (t.parent(v) == kNoParent)
      buf += '-';
    else
      buf += std::to_string(t.parent(v));
    buf += '\n';
  }
  os << buf;
}

Tree read_tree(std::istream& is) {
  std::vector<std::int32_t> parents;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (line == "-") {
      parents.push_back(kNoParent);
      continue;
    }
    try {
      std::size_t used = 0;
      const long p = std::stol(line, &used);
      if (used != line.size() || p < 0 || p > INT32_MAX) throw std::invalid_argument(line);
      parents.push_back(static_cast<std::int32_t>(p));
    } catch (const std::logic_error&) {
      throw StructureError("line " + std::to_string(lineno) + ": expected a parent index or '-', got '" +
                           line + "'");
    }
  }
  return build_tree(parents);
}

void save_tree(const std::string& path, const Tree& t) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_tree(os, t);
}

Tree load_tree(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read_tree(is);
}

}  // namespace kcut
