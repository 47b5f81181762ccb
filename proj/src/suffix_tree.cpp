#include "suffix_tree.hpp"

#include <algorithm>
#include <limits>

namespace seqnature {

int32_t TokenInterner::intern(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<int32_t>(ids_.size()));
  return it->second;
}

std::vector<int32_t> TokenInterner::intern_all(const std::vector<std::string>& tokens) {
  std::vector<int32_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(intern(t));
  return out;
}

GeneralizedSuffixTree::GeneralizedSuffixTree() {
  nodes_.push_back(Node{{}, -1, -1, 0});  // root
}

int32_t GeneralizedSuffixTree::new_node(int32_t start, int32_t end) {
  nodes_.push_back(Node{{}, start, end, 0});
  return static_cast<int32_t>(nodes_.size()) - 1;
}

int32_t GeneralizedSuffixTree::edge_length(const Node& n) const {
  return std::min(n.end, static_cast<int32_t>(text_.size())) - n.start;
}

void GeneralizedSuffixTree::extend(int32_t token) {
  text_.push_back(token);
  const int32_t pos = static_cast<int32_t>(text_.size()) - 1;
  ++remainder_;
  int32_t last_internal = 0;  // node awaiting a suffix link this step

  while (remainder_ > 0) {
    if (active_len_ == 0) active_edge_ = pos;
    auto it = nodes_[active_node_].next.find(text_[active_edge_]);
    if (it == nodes_[active_node_].next.end()) {
      nodes_[active_node_].next[text_[active_edge_]] =
          new_node(pos, std::numeric_limits<int32_t>::max());
      if (last_internal) nodes_[last_internal].link = active_node_;
      last_internal = 0;
    } else {
      const int32_t nxt = it->second;
      const int32_t len = edge_length(nodes_[nxt]);
      if (active_len_ >= len) {
        active_node_ = nxt;
        active_edge_ += len;
        active_len_ -= len;
        continue;  // walk down, re-examine from the deeper node
      }
      if (text_[nodes_[nxt].start + active_len_] == token) {
        ++active_len_;
        if (last_internal) nodes_[last_internal].link = active_node_;
        break;  // current suffix already present; rule 3 stops the phase
      }
      const int32_t split = new_node(nodes_[nxt].start, nodes_[nxt].start + active_len_);
      nodes_[active_node_].next[text_[active_edge_]] = split;
      nodes_[split].next[token] = new_node(pos, std::numeric_limits<int32_t>::max());
      nodes_[nxt].start += active_len_;
      nodes_[split].next[text_[nodes_[nxt].start]] = nxt;
      if (last_internal) nodes_[last_internal].link = split;
      last_internal = split;
    }
    --remainder_;
    if (active_node_ == 0 && active_len_ > 0) {
      --active_len_;
      active_edge_ = pos - remainder_ + 1;
    } else if (active_node_ != 0) {
      active_node_ = nodes_[active_node_].link;
    }
  }
}

void GeneralizedSuffixTree::add(std::span<const int32_t> tokens) {
  for (int32_t t : tokens) extend(t);
  // Unique terminator flushes every pending suffix of this sequence.
  extend(next_sentinel_--);
  ++sequences_added_;
}

bool GeneralizedSuffixTree::contains(std::span<const int32_t> tokens) const {
  if (tokens.empty()) return true;
  int32_t node = 0;
  size_t i = 0;
  while (i < tokens.size()) {
    auto it = nodes_[node].next.find(tokens[i]);
    if (it == nodes_[node].next.end()) return false;
    const Node& child = nodes_[it->second];
    const int32_t len = edge_length(child);
    for (int32_t k = 0; k < len && i < tokens.size(); ++k, ++i)
      if (text_[child.start + k] != tokens[i]) return false;
    node = it->second;
  }
  return true;
}

void SequenceIndex::add_cluster(const std::vector<std::vector<std::string>>& member_tokens) {
  if (backend_ == Backend::suffix_tree) {
    GeneralizedSuffixTree tree;
    for (const auto& m : member_tokens) tree.add(interner_.intern_all(m));
    trees_.push_back(std::move(tree));
  } else {
    std::vector<std::vector<int32_t>> members;
    members.reserve(member_tokens.size());
    for (const auto& m : member_tokens) members.push_back(interner_.intern_all(m));
    raw_.push_back(std::move(members));
  }
}

bool SequenceIndex::contains_subsequence(const std::vector<std::string>& tokens) const {
  const std::vector<int32_t> q = interner_.intern_all(tokens);
  if (backend_ == Backend::suffix_tree) {
    for (const auto& tree : trees_)
      if (tree.contains(q)) return true;
    return false;
  }
  for (const auto& cluster : raw_) {
    for (const auto& member : cluster) {
      if (q.size() > member.size()) continue;
      for (size_t off = 0; off + q.size() <= member.size(); ++off) {
        if (std::equal(q.begin(), q.end(), member.begin() + off)) return true;
      }
    }
  }
  return false;
}

}  // namespace seqnature
