#include "eolo/deduction.hpp"

#include <algorithm>
#include <map>

namespace eolo {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Match: return "match";
    case Verdict::NonMatch: return "nonmatch";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

std::shared_ptr<const RecordIndex> make_index(std::vector<RecordId> records) {
  if (records.empty()) throw InvalidArgument("a cluster graph needs at least one record");
  return std::make_shared<RecordIndex>(std::move(records));
}

}  // namespace

ClusterGraph::ClusterGraph(std::vector<RecordId> records)
    : ClusterGraph(make_index(std::move(records))) {}

ClusterGraph::ClusterGraph(std::shared_ptr<const RecordIndex> index)
    : index_(std::move(index)) {
  if (!index_ || index_->size() == 0) {
    throw InvalidArgument("a cluster graph needs at least one record");
  }
  const auto n = index_->size();
  parent_.resize(n);
  for (Node i = 0; i < n; ++i) parent_[i] = i;
  size_.assign(n, 1);
  cluster_count_ = n;
}

AssertResult ClusterGraph::assert_label(std::string_view a, std::string_view b, Label label) {
  return assert_label(index_->at(a), index_->at(b), label);
}

Verdict ClusterGraph::deduce(std::string_view a, std::string_view b) const {
  return deduce(index_->at(a), index_->at(b));
}

AssertResult ClusterGraph::assert_label(Node a, Node b, Label label) {
  if (a >= parent_.size() || b >= parent_.size()) {
    throw InvalidArgument("record number out of range");
  }
  const Node ra = find(a);
  const Node rb = find(b);
  if (label == Label::Match) {
    if (ra == rb) return AssertResult::Accepted;
    if (has_edge(ra, rb)) return AssertResult::Contradiction;
    merge(ra, rb);
  } else {
    if (ra == rb) return AssertResult::Contradiction;
    const auto key = edge_key(ra, rb);
    auto it = std::lower_bound(nonmatch_.begin(), nonmatch_.end(), key);
    if (it != nonmatch_.end() && *it == key) return AssertResult::Accepted;
    nonmatch_.insert(it, key);
  }
  ++assertions_;
  return AssertResult::Accepted;
}

bool ClusterGraph::has_edge(Node ra, Node rb) const {
  return std::binary_search(nonmatch_.begin(), nonmatch_.end(), edge_key(ra, rb));
}

void ClusterGraph::merge(Node ra, Node rb) {
  if (size_[ra] < size_[rb]) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] += size_[rb];
  --cluster_count_;

  // Re-root every edge that touched the absorbed root.
  bool touched = false;
  for (auto& key : nonmatch_) {
    Node lo = static_cast<Node>(key >> 32);
    Node hi = static_cast<Node>(key & 0xffffffffu);
    if (lo != rb && hi != rb) continue;
    if (lo == rb) lo = ra;
    if (hi == rb) hi = ra;
    key = edge_key(lo, hi);
    touched = true;
  }
  if (touched) {
    std::sort(nonmatch_.begin(), nonmatch_.end());
    nonmatch_.erase(std::unique(nonmatch_.begin(), nonmatch_.end()), nonmatch_.end());
  }
}

std::vector<std::vector<RecordId>> ClusterGraph::clusters() const {
  std::map<Node, std::vector<RecordId>> by_root;
  for (Node i = 0; i < parent_.size(); ++i) by_root[find(i)].push_back(index_->id(i));
  std::vector<std::vector<RecordId>> out;
  out.reserve(by_root.size());
  for (auto& [root, members] : by_root) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairKey> ClusterGraph::nonmatch_edges() const {
  std::map<Node, const RecordId*> leader;
  for (Node i = 0; i < parent_.size(); ++i) {
    const Node r = find(i);
    const RecordId& id = index_->id(i);
    auto [it, inserted] = leader.emplace(r, &id);
    if (!inserted && id < *it->second) it->second = &id;
  }
  std::vector<PairKey> out;
  out.reserve(nonmatch_.size());
  for (auto key : nonmatch_) {
    const Node lo = static_cast<Node>(key >> 32);
    const Node hi = static_cast<Node>(key & 0xffffffffu);
    out.push_back(canonical_pair_key(*leader.at(lo), *leader.at(hi)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace eolo
