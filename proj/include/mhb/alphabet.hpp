#ifndef MHB_ALPHABET_HPP
#define MHB_ALPHABET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mhb/error.hpp"

namespace mhb {

using Sym = uint32_t;
using Word = std::vector<Sym>;

/// Finite ordered set of symbol names. Symbols are referred to by their index
/// in declaration order. "eps" and "$" are reserved and cannot be declared.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  Sym add(const std::string& name);
  std::optional<Sym> find(const std::string& name) const;
  Sym require(const std::string& name) const;

  size_t size() const { return names_.size(); }
  const std::string& name(Sym s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

  std::string format_word(const Word& word) const;

  /// True when every symbol name is a single character, in which case words
  /// may be written without separators.
  bool all_single_char() const;

  /// Parses a word written either as '.'-separated symbol names or, when the
  /// alphabet is single-character, as a plain string of symbols.
  Word parse_word(const std::string& text) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Sym> index_;
};

/// Parikh image of `word`: occurrence count per symbol of `alphabet`.
std::vector<uint64_t> parikh(const Word& word, const Alphabet& alphabet);

}  // namespace mhb

#endif
