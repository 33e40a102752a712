#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "dga/base.hpp"

namespace dga {

/// Finite, nonempty symbol set with deterministic (lexicographic) iteration
/// order. Symbols are arbitrary nonempty strings.
class Alphabet {
public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) {
    if (symbols.empty()) throw invalid_input("alphabet must be nonempty");
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    for (const auto& s : symbols)
      if (s.empty()) throw invalid_input("alphabet symbol must be nonempty");
    symbols_ = std::move(symbols);
    for (int i = 0; i < (int)symbols_.size(); ++i) index_[symbols_[i]] = i;
  }

  int size() const { return (int)symbols_.size(); }

  /// Index of a symbol, or -1 when absent.
  int index(const std::string& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
  }

  bool contains(const std::string& s) const { return index(s) >= 0; }

  const std::string& at(int i) const { return symbols_.at(i); }

  const std::vector<std::string>& symbols() const { return symbols_; }

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }
  bool operator!=(const Alphabet& o) const { return !(*this == o); }

private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace dga
