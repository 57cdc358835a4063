#pragma once

#include <cstdint>
#include <vector>

#include "netd/errors.hpp"

namespace netd {

// Set of element ids over a fixed universe [0, universe).
// Elements are edge ids for the edge-weighted families and node ids for the
// node-weighted and facility ones.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(int universe) : universe_(universe), bits_((universe + 63) / 64, 0) {
    if (universe < 0) throw input_error("ElementSet: negative universe");
  }

  static ElementSet full(int universe) {
    ElementSet s(universe);
    for (int e = 0; e < universe; ++e) s.insert(e);
    return s;
  }

  int universe() const { return universe_; }

  void insert(int e) {
    check(e);
    bits_[e >> 6] |= std::uint64_t(1) << (e & 63);
  }

  void erase(int e) {
    check(e);
    bits_[e >> 6] &= ~(std::uint64_t(1) << (e & 63));
  }

  bool contains(int e) const {
    check(e);
    return (bits_[e >> 6] >> (e & 63)) & 1;
  }

  bool empty() const {
    for (auto b : bits_)
      if (b) return false;
    return true;
  }

  int count() const {
    int c = 0;
    for (auto b : bits_) c += __builtin_popcountll(b);
    return c;
  }

  ElementSet& operator|=(const ElementSet& o) {
    require_same_universe(o);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }

  ElementSet operator|(const ElementSet& o) const {
    ElementSet r = *this;
    r |= o;
    return r;
  }

  bool is_subset_of(const ElementSet& o) const {
    require_same_universe(o);
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] & ~o.bits_[i]) return false;
    return true;
  }

  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(count());
    for (int e = 0; e < universe_; ++e)
      if (contains(e)) out.push_back(e);
    return out;
  }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

 private:
  void check(int e) const {
    if (e < 0 || e >= universe_) throw input_error("element id out of range");
  }
  void require_same_universe(const ElementSet& o) const {
    if (universe_ != o.universe_) throw input_error("element sets over different universes");
  }

  int universe_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace netd
