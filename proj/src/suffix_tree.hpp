#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace seqnature {

// Maps per-packet token strings to dense non-negative ints so sequences
// can be indexed as integer strings. Ids are assigned in first-seen order.
class TokenInterner {
 public:
  int32_t intern(const std::string& token);
  std::vector<int32_t> intern_all(const std::vector<std::string>& tokens);
  size_t size() const { return ids_.size(); }

 private:
  std::unordered_map<std::string, int32_t> ids_;
};

// Generalized suffix tree over integer token strings (Ukkonen). Member
// sequences are separated by unique negative sentinels, so a sentinel-free
// query matches iff it is a contiguous subsequence of one member.
class GeneralizedSuffixTree {
 public:
  GeneralizedSuffixTree();

  void add(std::span<const int32_t> tokens);
  bool contains(std::span<const int32_t> tokens) const;
  size_t sequence_count() const { return sequences_added_; }

 private:
  struct Node {
    std::map<int32_t, int32_t> next;
    int32_t start;
    int32_t end;  // exclusive; INT32_MAX marks an open leaf edge
    int32_t link = 0;
  };

  int32_t new_node(int32_t start, int32_t end);
  int32_t edge_length(const Node& n) const;
  void extend(int32_t token);

  std::vector<int32_t> text_;
  std::vector<Node> nodes_;
  int32_t active_node_ = 0;
  int32_t active_edge_ = 0;  // index into text_
  int32_t active_len_ = 0;
  int32_t remainder_ = 0;
  int32_t next_sentinel_ = -1;
  size_t sequences_added_ = 0;
};

// The fingerprint-so-far index used by cluster selection: one suffix tree
// per accepted cluster, queried for contiguous-subsequence containment.
// The linear backend is the reference implementation the tree must agree
// with; refinement uses the tree.
class SequenceIndex {
 public:
  enum class Backend { suffix_tree, linear_scan };

  explicit SequenceIndex(Backend backend = Backend::suffix_tree)
      : backend_(backend) {}

  void add_cluster(const std::vector<std::vector<std::string>>& member_tokens);
  bool contains_subsequence(const std::vector<std::string>& tokens) const;
  size_t cluster_count() const { return trees_.size() + raw_.size(); }

 private:
  Backend backend_;
  mutable TokenInterner interner_;
  std::vector<GeneralizedSuffixTree> trees_;                // suffix_tree backend
  std::vector<std::vector<std::vector<int32_t>>> raw_;      // linear backend
};

}  // namespace seqnature
