// Copyright 2026 cdnsim contributors
// Licensed under the terms of the Apache 2.0 open source license
// See LICENSE file for terms.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdnsim/scenario.hpp"

namespace cdnsim {

/// Size-aware cache with LRU or LFU replacement.
///
/// Eviction picks the entry with the smallest policy metric (last touch time
/// for LRU, touch count for LFU); ties go to the earlier admission time, then
/// to the lexicographically smaller content id. Admission counts as the first
/// touch. An item larger than the whole cache is bypassed: admit() reports it
/// as not cached and evicts nothing.
class CacheState {
 public:
  CacheState(std::uint64_t capacity_bits, CachePolicy policy)
      : capacity_bits_(capacity_bits), policy_(policy) {}

  struct AdmitResult {
    bool admitted = false;
    std::vector<std::string> evicted;
  };

  AdmitResult admit(const std::string& id, std::uint64_t size_bits, double t) {
    AdmitResult result;
    if (auto it = entries_.find(id); it != entries_.end()) {
      // already resident: treat as a touch
      it->second.last_touch_t = t;
      it->second.touch_count += 1;
      result.admitted = true;
      return result;
    }
    if (size_bits > capacity_bits_) return result;  // bypass
    while (used_bits_ + size_bits > capacity_bits_) {
      auto victim = pick_victim();
      result.evicted.push_back(victim->first);
      used_bits_ -= victim->second.size_bits;
      entries_.erase(victim);
    }
    entries_.emplace(id, Entry{size_bits, t, 1, t});
    used_bits_ += size_bits;
    if (used_bits_ > capacity_bits_)
      throw std::logic_error("cache invariant violated: used_bits > capacity");
    return result;
  }

  bool touch(const std::string& id, double t) {
    auto it = entries_.find(id);
    if (it == entries_.end()) return false;
    it->second.last_touch_t = t;
    it->second.touch_count += 1;
    return true;
  }

  bool contains(const std::string& id) const { return entries_.count(id) > 0; }

  void erase(const std::string& id) {
    auto it = entries_.find(id);
    if (it == entries_.end()) return;
    used_bits_ -= it->second.size_bits;
    entries_.erase(it);
  }

  std::uint64_t used_bits() const { return used_bits_; }
  std::uint64_t capacity_bits() const { return capacity_bits_; }
  std::size_t resident_count() const { return entries_.size(); }

  std::vector<std::string> resident_ids() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) out.push_back(id);
    return out;
  }

 private:
  struct Entry {
    std::uint64_t size_bits;
    double last_touch_t;
    std::uint64_t touch_count;
    double admit_t;
  };

  using Map = std::map<std::string, Entry>;

  Map::iterator pick_victim() {
    if (entries_.empty())
      throw std::logic_error("cache invariant violated: eviction from empty cache");
    auto best = entries_.begin();
    for (auto it = std::next(entries_.begin()); it != entries_.end(); ++it) {
      if (worse_than(it, best)) best = it;
    }
    return best;
  }

  // true when a should be evicted before b
  bool worse_than(Map::const_iterator a, Map::const_iterator b) const {
    double ma, mb;
    if (policy_ == CachePolicy::Lru) {
      ma = a->second.last_touch_t;
      mb = b->second.last_touch_t;
    } else {
      ma = static_cast<double>(a->second.touch_count);
      mb = static_cast<double>(b->second.touch_count);
    }
    if (ma != mb) return ma < mb;
    if (a->second.admit_t != b->second.admit_t)
      return a->second.admit_t < b->second.admit_t;
    return a->first < b->first;
  }

  std::uint64_t capacity_bits_;
  CachePolicy policy_;
  std::uint64_t used_bits_ = 0;
  Map entries_;
};

}  // namespace cdnsim
