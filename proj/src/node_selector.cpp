#include "cmm/node_selector.hpp"

#include "cmm/error.hpp"

namespace cmm {

NodeSelector::NodeSelector(std::size_t n_nodes) : pos_(n_nodes, kAbsent), key_(n_nodes, 0), bpos_(n_nodes, 0) {}

void NodeSelector::bucket_add(std::uint32_t v, Degree key) {
    if (key >= buckets_.size()) buckets_.resize(static_cast<std::size_t>(key) + 1);
    bpos_[v] = static_cast<std::uint32_t>(buckets_[key].size());
    buckets_[key].push_back(v);
    key_[v] = key;
    if (key < min_hint_) min_hint_ = key;
    if (key > max_hint_) max_hint_ = key;
}

void NodeSelector::bucket_remove(std::uint32_t v) {
    auto& b = buckets_[key_[v]];
    std::uint32_t last = b.back();
    b[bpos_[v]] = last;
    bpos_[last] = bpos_[v];
    b.pop_back();
}

void NodeSelector::insert(std::uint32_t v, Degree key) {
    if (contains(v)) throw Error(Errc::InvalidArgument, "node already selected");
    pos_[v] = static_cast<std::uint32_t>(members_.size());
    members_.push_back(v);
    bucket_add(v, key);
}

void NodeSelector::erase(std::uint32_t v) {
    if (!contains(v)) throw Error(Errc::InvalidArgument, "node not in selector");
    bucket_remove(v);
    std::uint32_t last = members_.back();
    members_[pos_[v]] = last;
    pos_[last] = pos_[v];
    members_.pop_back();
    pos_[v] = kAbsent;
}

void NodeSelector::update(std::uint32_t v, Degree key) {
    if (key_[v] == key) return;
    bucket_remove(v);
    bucket_add(v, key);
}

std::uint32_t NodeSelector::choose(Pick rule, Rng& rng) {
    if (members_.empty()) throw Error(Errc::EmptyChoiceSet, "selector is empty");
    if (rule == Pick::Uniform) return members_[rng.uniform_index(members_.size())];
    if (rule == Pick::Min) {
        while (buckets_[min_hint_].empty()) ++min_hint_;
        const auto& b = buckets_[min_hint_];
        return b[rng.uniform_index(b.size())];
    }
    while (buckets_[max_hint_].empty()) --max_hint_;
    const auto& b = buckets_[max_hint_];
    return b[rng.uniform_index(b.size())];
}

}  // namespace cmm
