#include "mhb/bexpr.hpp"

#include <algorithm>
#include <sstream>

namespace mhb {

size_t BoundedExpression::size() const {
  size_t total = 1;
  for (const auto& seg : segments) total += seg.size();
  return total;
}

bool BoundedExpression::letter_bounded() const {
  for (const auto& seg : segments)
    if (seg.size() != 1) return false;
  return true;
}

std::string BoundedExpression::to_string() const {
  std::ostringstream out;
  for (size_t i = 0; i < segments.size(); ++i) {
    if (i > 0) out << ' ';
    out << alphabet.format_word(segments[i]);
  }
  return out.str();
}

BoundedExpression parse_bounded_expression(const std::string& text,
                                           const Alphabet& alphabet) {
  BoundedExpression expr;
  expr.alphabet = alphabet;
  std::vector<std::string> tokens;
  std::string current;
  bool any = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n') {
      tokens.push_back(current);
      current.clear();
      any = true;
    } else {
      current.push_back(c);
      any = true;
    }
  }
  if (any) tokens.push_back(current);
  if (tokens.empty()) fail(ErrorKind::NoSegments, "bounded expression is empty");
  for (const auto& token : tokens) {
    if (token.empty())
      fail(ErrorKind::EmptySegment, "empty segment in '" + text + "'");
    Word seg = alphabet.parse_word(token);
    if (seg.empty())
      fail(ErrorKind::EmptySegment, "segment 'eps' in '" + text + "'");
    expr.segments.push_back(std::move(seg));
  }
  return expr;
}

bool bexpr_contains(const BoundedExpression& expr, const Word& u) {
  std::vector<bool> reach(u.size() + 1, false);
  reach[0] = true;
  for (const Word& seg : expr.segments) {
    std::vector<bool> next = reach;
    for (size_t p = 0; p <= u.size(); ++p) {
      if (!reach[p]) continue;
      size_t q = p;
      while (q + seg.size() <= u.size() &&
             std::equal(seg.begin(), seg.end(), u.begin() + q)) {
        q += seg.size();
        next[q] = true;
      }
    }
    reach = std::move(next);
  }
  return reach[u.size()];
}

Word expand(const BoundedExpression& expr, const std::vector<uint64_t>& exponents) {
  if (exponents.size() != expr.segments.size())
    fail(ErrorKind::DimensionMismatch,
         "expected " + std::to_string(expr.segments.size()) + " exponents, got " +
             std::to_string(exponents.size()));
  Word word;
  for (size_t i = 0; i < expr.segments.size(); ++i)
    for (uint64_t rep = 0; rep < exponents[i]; ++rep)
      word.insert(word.end(), expr.segments[i].begin(), expr.segments[i].end());
  return word;
}

}  // namespace mhb
