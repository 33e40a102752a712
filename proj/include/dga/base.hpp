#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dga {

/// Error category carried by every exception this library throws.
/// The CLI maps categories to exit codes.
enum class ErrorKind {
  invalid_input,  ///< malformed data, failed validation, unsupported operand
  resource_cap,   ///< a configured search or expansion cap was exceeded
  internal,       ///< broken invariant inside the library itself
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Error invalid_input(std::string message) {
  return Error(ErrorKind::invalid_input, std::move(message));
}

inline Error resource_cap(std::string message) {
  return Error(ErrorKind::resource_cap, std::move(message));
}

inline Error internal_error(std::string message) {
  return Error(ErrorKind::internal, std::move(message));
}

/// Dynamically sized bitset used for state sets and node sets.
/// Word count is fixed at construction; all operands of a binary
/// operation must share the same universe size.
class Bits {
public:
  Bits() = default;
  explicit Bits(int universe) : n_(universe), w_((universe + 63) / 64, 0) {}

  int universe() const { return n_; }

  void set(int i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  int count() const {
    int c = 0;
    for (uint64_t x : w_) c += __builtin_popcountll(x);
    return c;
  }

  bool empty() const {
    for (uint64_t x : w_) if (x) return false;
    return true;
  }

  bool subset_of(const Bits& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  Bits& operator|=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  Bits& operator&=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }

  /// Members in ascending order.
  std::vector<int> members() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  const std::vector<uint64_t>& words() const { return w_; }

private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

/// Comparison operator of a cardinality test.
enum class CardRel { lt, le, eq, ge, gt };

inline bool card_rel_holds(CardRel rel, int value, int bound) {
  switch (rel) {
    case CardRel::lt: return value < bound;
    case CardRel::le: return value <= bound;
    case CardRel::eq: return value == bound;
    case CardRel::ge: return value >= bound;
    case CardRel::gt: return value > bound;
  }
  return false;
}

inline const char* card_rel_token(CardRel rel) {
  switch (rel) {
    case CardRel::lt: return "<";
    case CardRel::le: return "<=";
    case CardRel::eq: return "=";
    case CardRel::ge: return ">=";
    case CardRel::gt: return ">";
  }
  return "?";
}

}  // namespace dga
