#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace amcdes {

// User-facing errors (bad input, malformed files, ill-formed formulas).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Resource limits hit; distinct from both verdicts everywhere.
class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// Violations of internal contracts; never caused by user input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

// Fixed-universe bitset; all operands of a binary op must share the size.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}
  static Bitset full(int n) {
    Bitset b(n);
    for (int i = 0; i < n; ++i) b.set(i);
    return b;
  }

  int size() const { return n_; }
  void set(int i) { w_[i >> 6] |= (uint64_t{1} << (i & 63)); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  bool any() const {
    for (uint64_t w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }
  int count() const {
    int c = 0;
    for (uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }
  // Smallest set bit, or -1.
  int first() const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return int(i * 64 + __builtin_ctzll(w_[i]));
    return -1;
  }

  Bitset& operator&=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bitset operator&(const Bitset& o) const {
    Bitset r = *this;
    r &= o;
    return r;
  }
  Bitset operator|(const Bitset& o) const {
    Bitset r = *this;
    r |= o;
    return r;
  }
  // Set difference this \ o.
  Bitset minus(const Bitset& o) const {
    Bitset r = *this;
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] &= ~o.w_[i];
    return r;
  }
  Bitset complement() const { return full(n_).minus(*this); }
  bool intersects(const Bitset& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool subsetOf(const Bitset& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Bitset& o) const { return !(*this == o); }
  bool operator<(const Bitset& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return w_ < o.w_;
  }

  template <typename F>
  void forEach(F f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t w = w_[i];
      while (w) {
        int b = __builtin_ctzll(w);
        f(int(i * 64 + b));
        w &= w - 1;
      }
    }
  }
  std::vector<int> toVector() const {
    std::vector<int> v;
    forEach([&](int i) { v.push_back(i); });
    return v;
  }

  size_t hash() const {
    size_t h = size_t(n_);
    for (uint64_t w : w_) h ^= std::hash<uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
  const std::vector<uint64_t>& words() const { return w_; }

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

inline void hashCombine(size_t& h, size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

// Mixed-radix counter over the given radices; returns false once exhausted.
inline bool nextTuple(std::vector<int>& t, const std::vector<int>& radix) {
  for (size_t i = 0; i < t.size(); ++i) {
    if (++t[i] < radix[i]) return true;
    t[i] = 0;
  }
  return false;
}

inline long long tupleCount(const std::vector<int>& radix) {
  long long c = 1;
  for (int r : radix) c *= r;
  return c;
}

inline int tupleIndex(const std::vector<int>& t, const std::vector<int>& radix) {
  int idx = 0;
  for (size_t i = 0; i < t.size(); ++i) idx = idx * radix[i] + t[i];
  return idx;
}

inline std::vector<int> tupleFromIndex(int idx, const std::vector<int>& radix) {
  std::vector<int> t(radix.size());
  for (int i = int(radix.size()) - 1; i >= 0; --i) {
    t[i] = idx % radix[i];
    idx /= radix[i];
  }
  return t;
}

inline std::string joinStrings(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace amcdes
