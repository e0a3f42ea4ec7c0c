#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace qdp {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

// Fixed-universe vertex subset as a packed bit vector. The workhorse of all
// enumeration: set algebra is word-wise and exact.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(u64 universe)
      : n_(universe), w_((universe + 63) / 64, 0) {}
  static VertexSet single(u64 universe, u64 v) {
    VertexSet s(universe);
    s.add(v);
    return s;
  }
  static VertexSet from_mask(u64 universe, u64 mask) {
    VertexSet s(universe);
    if (!s.w_.empty()) s.w_[0] = mask;
    return s;
  }

  u64 universe() const { return n_; }
  bool contains(u64 v) const { return (w_[v >> 6] >> (v & 63)) & 1; }
  void add(u64 v) { w_[v >> 6] |= 1ull << (v & 63); }
  void remove(u64 v) { w_[v >> 6] &= ~(1ull << (v & 63)); }
  bool empty() const {
    for (u64 w : w_)
      if (w) return false;
    return true;
  }
  u64 count() const {
    u64 c = 0;
    for (u64 w : w_) c += std::popcount(w);
    return c;
  }
  // Single-word view, valid when universe() <= 64.
  u64 low_mask() const { return w_.empty() ? 0 : w_[0]; }

  VertexSet& operator|=(const VertexSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.n_ == b.n_ && a.w_ == b.w_;
  }
  bool subset_of(const VertexSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const VertexSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  template <class F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      u64 w = w_[i];
      while (w) {
        f((i << 6) + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }
  std::vector<u64> to_vector() const {
    std::vector<u64> out;
    out.reserve(count());
    for_each([&](u64 v) { out.push_back(v); });
    return out;
  }

 private:
  u64 n_ = 0;
  std::vector<u64> w_;
};

}  // namespace qdp
