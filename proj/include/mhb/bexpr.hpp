#ifndef MHB_BEXPR_HPP
#define MHB_BEXPR_HPP

#include <string>
#include <vector>

#include "mhb/alphabet.hpp"

namespace mhb {

/// Bounded expression w1* w2* ... wn* over an alphabet. Every segment is
/// non-empty and there is at least one segment.
struct BoundedExpression {
  Alphabet alphabet;
  std::vector<Word> segments;

  size_t arity() const { return segments.size(); }

  /// 1 + sum of segment lengths, the size measure used by the size envelopes.
  size_t size() const;

  /// True when every segment is a single letter.
  bool letter_bounded() const;

  std::string to_string() const;
};

/// Parses "w1 w2 ... wn": segments separated by single whitespace characters,
/// each segment '.'-separated symbol names or a plain string over a
/// single-character alphabet. Empty segments (doubled or trailing separators)
/// are errors, as is an empty expression.
BoundedExpression parse_bounded_expression(const std::string& text,
                                           const Alphabet& alphabet);

/// w1^{k1} ... wn^{kn}; `exponents` must have one entry per segment.
Word expand(const BoundedExpression& expr, const std::vector<uint64_t>& exponents);

/// Membership u ∈ w1* w2* ... wn* (symbols compared by id).
bool bexpr_contains(const BoundedExpression& expr, const Word& u);

}  // namespace mhb

#endif
