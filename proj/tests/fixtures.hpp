#ifndef MHB_TESTS_FIXTURES_HPP
#define MHB_TESTS_FIXTURES_HPP

#include <string>

#include "mhb/bexpr.hpp"
#include "mhb/tpda.hpp"

namespace fixtures {

/// Two-head palindrome checker over {0,1,&}: head 2 verifies the block before
/// '&' is a palindrome against the stack, then states qs/qsp compare head 1's
/// first block with head 2's second block one letter at a time. Includes a
/// middle-skip move at qup so odd-length palindromes are covered.
inline mhb::Tpda make_fig1() {
  using mhb::ReadLabel;
  mhb::Tpda p;
  p.heads = 2;
  mhb::Sym l0 = p.alphabet.add("0");
  mhb::Sym l1 = p.alphabet.add("1");
  mhb::Sym amp = p.alphabet.add("&");
  uint32_t bot = p.stack.add(".");
  uint32_t s0 = p.stack.add("0");
  uint32_t s1 = p.stack.add("1");
  uint32_t qup = p.add_state("qup", 1);
  uint32_t qdn = p.add_state("qdown", 1);
  uint32_t qs = p.add_state("qs", 0);
  uint32_t qsp = p.add_state("qsp", 1);
  uint32_t q = p.add_state("q", 1);
  uint32_t qf = p.add_state("qf", 0, true);
  p.initial = qup;
  p.initial_stack = bot;
  for (uint32_t g : {bot, s0, s1}) {
    p.add_transition(qup, g, ReadLabel::eps(), qdn, {g});
    p.add_transition(qup, g, ReadLabel::letter(l1), qup, {s1, g});
    p.add_transition(qup, g, ReadLabel::letter(l0), qup, {s0, g});
    p.add_transition(qup, g, ReadLabel::letter(l0), qdn, {g});  // middle skip
    p.add_transition(qup, g, ReadLabel::letter(l1), qdn, {g});  // middle skip
  }
  p.add_transition(qdn, s1, ReadLabel::letter(l1), qdn, {});
  p.add_transition(qdn, s0, ReadLabel::letter(l0), qdn, {});
  p.add_transition(qdn, bot, ReadLabel::letter(amp), qs, {bot});
  for (uint32_t g : {bot, s0, s1}) {
    p.add_transition(qs, g, ReadLabel::letter(l0), qsp, {s0, g});
    p.add_transition(qs, g, ReadLabel::letter(l1), qsp, {s1, g});
  }
  p.add_transition(qsp, s1, ReadLabel::letter(l1), qs, {});
  p.add_transition(qsp, s0, ReadLabel::letter(l0), qs, {});
  for (uint32_t g : {bot, s0, s1}) {
    p.add_transition(qs, g, ReadLabel::letter(amp), q, {g});
    p.add_transition(q, g, ReadLabel::end(), qf, {g});
    p.add_transition(qf, g, ReadLabel::letter(l0), qf, {g});
    p.add_transition(qf, g, ReadLabel::letter(l1), qf, {g});
    p.add_transition(qf, g, ReadLabel::end(), qf, {g});
  }
  return p;
}

inline mhb::BoundedExpression fig1_expr() {
  return mhb::parse_bounded_expression("0 1 0 & 0 1 0", make_fig1().alphabet);
}

/// Direct predicate for the fixture language: w&w with w a palindrome.
inline bool fig1_reference(const std::string& s) {
  size_t amp = s.find('&');
  if (amp == std::string::npos || s.find('&', amp + 1) != std::string::npos)
    return false;
  std::string left = s.substr(0, amp), right = s.substr(amp + 1);
  if (left != right) return false;
  std::string rev(left.rbegin(), left.rend());
  return left == rev;
}

/// One-head machine for a^n b^n c^*.
inline mhb::Tpda make_anbn_cstar() {
  using mhb::ReadLabel;
  mhb::Tpda p;
  p.heads = 1;
  mhb::Sym a = p.alphabet.add("a");
  mhb::Sym b = p.alphabet.add("b");
  mhb::Sym c = p.alphabet.add("c");
  uint32_t bot = p.stack.add(".");
  uint32_t cnt = p.stack.add("A");
  uint32_t u = p.add_state("u", 0);
  uint32_t v = p.add_state("v", 0);
  uint32_t w = p.add_state("w", 0);
  uint32_t f = p.add_state("f", 0, true);
  p.initial = u;
  p.initial_stack = bot;
  for (uint32_t g : {bot, cnt}) {
    p.add_transition(u, g, ReadLabel::letter(a), u, {cnt, g});
    p.add_transition(u, g, ReadLabel::eps(), v, {g});
  }
  p.add_transition(v, cnt, ReadLabel::letter(b), v, {});
  p.add_transition(v, bot, ReadLabel::eps(), w, {bot});
  p.add_transition(w, bot, ReadLabel::letter(c), w, {bot});
  p.add_transition(w, bot, ReadLabel::end(), f, {bot});
  return p;
}

/// One-head machine for a^* b^n c^n.
inline mhb::Tpda make_astar_bncn() {
  using mhb::ReadLabel;
  mhb::Tpda p;
  p.heads = 1;
  mhb::Sym a = p.alphabet.add("a");
  mhb::Sym b = p.alphabet.add("b");
  mhb::Sym c = p.alphabet.add("c");
  uint32_t bot = p.stack.add(".");
  uint32_t cnt = p.stack.add("B");
  uint32_t u = p.add_state("u", 0);
  uint32_t v = p.add_state("v", 0);
  uint32_t w = p.add_state("w", 0);
  uint32_t f = p.add_state("f", 0, true);
  p.initial = u;
  p.initial_stack = bot;
  p.add_transition(u, bot, ReadLabel::letter(a), u, {bot});
  p.add_transition(u, bot, ReadLabel::eps(), v, {bot});
  for (uint32_t g : {bot, cnt}) {
    p.add_transition(v, g, ReadLabel::letter(b), v, {cnt, g});
    p.add_transition(v, g, ReadLabel::eps(), w, {g});
  }
  p.add_transition(w, cnt, ReadLabel::letter(c), w, {});
  p.add_transition(w, bot, ReadLabel::end(), f, {bot});
  return p;
}

/// Every word over `alphabet` with length <= max_len, shortlex order.
inline std::vector<mhb::Word> words_upto(const mhb::Alphabet& alphabet,
                                         size_t max_len) {
  std::vector<mhb::Word> out{{}};
  size_t begin = 0;
  for (size_t len = 1; len <= max_len; ++len) {
    size_t end = out.size();
    for (size_t i = begin; i < end; ++i)
      for (mhb::Sym s = 0; s < alphabet.size(); ++s) {
        mhb::Word w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace fixtures

#endif
