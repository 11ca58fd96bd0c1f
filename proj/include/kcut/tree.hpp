#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kcut {

inline constexpr std::int32_t kNoParent = -1;

/// Rooted ordered tree in flat-array form.
///
/// Vertices are relabelled in depth-first preorder (root = 0), so the
/// subtree of v is the index range [v, v + subtree_size(v)).
class Tree {
 public:
  std::int32_t size() const { return static_cast<std::int32_t>(parent_.size()); }
  std::int32_t parent(std::int32_t v) const { return parent_[v]; }
  std::int32_t depth(std::int32_t v) const { return depth_[v]; }
  std::int32_t subtree_size(std::int32_t v) const { return subtree_[v]; }
  std::span<const std::int32_t> children(std::int32_t v) const {
    return {child_list_.data() + child_offset_[v],
            static_cast<std::size_t>(child_offset_[v + 1] - child_offset_[v])};
  }
  std::int32_t degree(std::int32_t v) const { return child_offset_[v + 1] - child_offset_[v]; }
  /// True when u is v or an ancestor of v.
  bool is_ancestor(std::int32_t u, std::int32_t v) const {
    return u <= v && v < u + subtree_[u];
  }
  std::int32_t max_depth() const { return max_depth_; }

  const std::vector<std::int32_t>& parents() const { return parent_; }
  const std::vector<std::int32_t>& depths() const { return depth_; }
  /// source_label(v) is the index v had in the input to build_tree.
  std::int32_t source_label(std::int32_t v) const { return label_[v]; }
  const std::vector<std::int32_t>& source_labels() const { return label_; }

 private:
  friend Tree build_tree(const std::vector<std::int32_t>&, const std::vector<std::vector<std::int32_t>>*);
  std::vector<std::int32_t> parent_, depth_, subtree_, child_offset_, child_list_, label_;
  std::int32_t max_depth_ = 0;
};

/// Children are ordered by increasing input index.
Tree build_tree(const std::vector<std::int32_t>& parents);

/// child_order[v] lists the children of v in sibling order; it must agree
/// with parents.
Tree build_tree(const std::vector<std::int32_t>& parents,
                const std::vector<std::vector<std::int32_t>>& child_order);

Tree build_tree(const std::vector<std::int32_t>& parents,
                const std::vector<std::vector<std::int32_t>>* child_order);

struct Profile {
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;
};

Profile profile(const Tree& t);

struct DfsWalk {
  std::vector<std::int32_t> values;       // V_n at integer times, length 2(n-1)+1
  std::vector<std::int32_t> visit_order;  // vertex occupied at each integer time
};

/// Depth-first walk; for n = 1 it is the single value 0.
DfsWalk dfs_walk(const Tree& t);

/// Edges in the subtree spanned by the root and vs.
std::int64_t spanned_edges(const Tree& t, std::span<const std::int32_t> vs);

/// (D(v1), D(v1,v2), ...): new edges contributed by each successive vertex.
std::vector<std::int64_t> incremental_spans(const Tree& t, std::span<const std::int32_t> vs);

/// Text format: line i holds the parent of vertex i, "-" for the root.
void write_tree(std::ostream& os, const Tree& t);
Tree read_tree(std::istream& is);
void save_tree(const std::string& path, const Tree& t);
Tree load_tree(const std::string& path);

}  // namespace kcut
