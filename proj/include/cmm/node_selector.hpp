#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "cmm/criteria.hpp"
#include "cmm/measure.hpp"
#include "cmm/rng.hpp"

namespace cmm {

// Dynamic set of nodes keyed by a positive integer (degree or availability).
// choose() has the same law as choose_first over the keys of the members,
// in O(1) for the uniform rule and amortized O(1) for argmin/argmax when keys
// only decrease.
class NodeSelector {
public:
    static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();

    explicit NodeSelector(std::size_t n_nodes = 0);

    void insert(std::uint32_t v, Degree key);
    void erase(std::uint32_t v);
    void update(std::uint32_t v, Degree key);

    bool contains(std::uint32_t v) const { return pos_[v] != kAbsent; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    Degree key(std::uint32_t v) const { return key_[v]; }

    std::uint32_t choose(Pick rule, Rng& rng);

private:
    void bucket_add(std::uint32_t v, Degree key);
    void bucket_remove(std::uint32_t v);

    std::vector<std::uint32_t> members_;
    std::vector<std::uint32_t> pos_;
    std::vector<Degree> key_;
    std::vector<std::vector<std::uint32_t>> buckets_;
    std::vector<std::uint32_t> bpos_;
    Degree min_hint_ = std::numeric_limits<Degree>::max();
    Degree max_hint_ = 0;
};

}  // namespace cmm
