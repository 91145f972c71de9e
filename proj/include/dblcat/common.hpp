#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dblcat {

// Precondition or schema violation on an operation's input.
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Enumeration exceeded the configured cell cap.
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Violation {
  std::string law;
  std::string witness;
};

struct Report {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string law, std::string witness) {
    violations.push_back({std::move(law), std::move(witness)});
  }
};

// Partial binary table on cell indices. Dense storage for small index ranges,
// hashed otherwise. Missing entries read as -1.
class CompTable {
 public:
  CompTable() = default;
  explicit CompTable(std::size_t n) { reset(n); }

  void reset(std::size_t n) {
    n_ = n;
    count_ = 0;
    sparse_.clear();
    dense_.clear();
    if (n <= kDenseLimit) dense_.assign(n * n, -1);
  }

  std::size_t range() const { return n_; }
  std::size_t size() const { return count_; }

  int get(int a, int b) const {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n_ ||
        static_cast<std::size_t>(b) >= n_)
      return -1;
    if (!dense_.empty() || n_ == 0)
      return n_ == 0 ? -1 : dense_[static_cast<std::size_t>(a) * n_ + b];
    auto it = sparse_.find(key(a, b));
    return it == sparse_.end() ? -1 : it->second;
  }

  void set(int a, int b, int v) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n_ ||
        static_cast<std::size_t>(b) >= n_)
      throw ContractError("composition table index out of range");
    if (!dense_.empty()) {
      int& slot = dense_[static_cast<std::size_t>(a) * n_ + b];
      if (slot < 0 && v >= 0) ++count_;
      if (slot >= 0 && v < 0) --count_;
      slot = v;
      return;
    }
    if (v < 0) {
      count_ -= sparse_.erase(key(a, b));
      return;
    }
    auto [it, inserted] = sparse_.insert_or_assign(key(a, b), v);
    (void)it;
    if (inserted) ++count_;
  }

  // Calls fn(a, b, value) for every defined entry, in ascending (a, b) order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    if (!dense_.empty()) {
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
          int v = dense_[a * n_ + b];
          if (v >= 0) fn(static_cast<int>(a), static_cast<int>(b), v);
        }
      return;
    }
    std::vector<std::pair<std::uint64_t, int>> items(sparse_.begin(), sparse_.end());
    std::sort(items.begin(), items.end());
    for (auto& [k, v] : items)
      fn(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu), v);
  }

  bool operator==(const CompTable& o) const {
    if (n_ != o.n_ || count_ != o.count_) return false;
    bool same = true;
    for_each([&](int a, int b, int v) {
      if (same && o.get(a, b) != v) same = false;
    });
    return same;
  }

 private:
  static constexpr std::size_t kDenseLimit = 512;
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }
  std::size_t n_ = 0;
  std::size_t count_ = 0;
  std::vector<int> dense_;
  std::unordered_map<std::uint64_t, int> sparse_;
};

inline std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Enumeration cap in cells; reads DBLCAT_MAX_CELLS, defaults to 10^6.
std::size_t default_cell_cap();

}  // namespace dblcat
