#include <set>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "mhb/nfa.hpp"

using namespace mhb;

namespace {

// a* b, with an epsilon hop in front of the final letter.
Nfa astar_b() {
  Nfa n;
  n.alphabet = Alphabet{{"a", "b"}};
  uint32_t p = n.add_state("p");
  uint32_t q = n.add_state("q");
  uint32_t f = n.add_state("f", true);
  n.add_transition(p, ReadLabel::letter(0), p);
  n.add_transition(p, ReadLabel::eps(), q);
  n.add_transition(q, ReadLabel::letter(1), f);
  return n;
}

Nfa word_nfa(const std::string& w) {
  Nfa n;
  n.alphabet = Alphabet{{"a", "b"}};
  uint32_t prev = n.add_state("s0");
  for (size_t i = 0; i < w.size(); ++i) {
    uint32_t next = n.add_state("s" + std::to_string(i + 1));
    n.add_transition(prev, ReadLabel::letter(n.alphabet.require(std::string(1, w[i]))), next);
    prev = next;
  }
  n.is_final[prev] = true;
  return n;
}

}  // namespace

TEST_SUITE("nfa") {
  TEST_CASE("subset simulation with epsilon moves") {
    Nfa n = astar_b();
    CHECK(nfa_accepts(n, n.alphabet.parse_word("b")));
    CHECK(nfa_accepts(n, n.alphabet.parse_word("aaab")));
    CHECK(!nfa_accepts(n, n.alphabet.parse_word("a")));
    CHECK(!nfa_accepts(n, n.alphabet.parse_word("ba")));
    CHECK(!nfa_accepts(n, Word{}));
  }

  TEST_CASE("endmarker transitions only fire when requested") {
    Nfa n;
    n.alphabet = Alphabet{{"a"}};
    uint32_t p = n.add_state("p");
    uint32_t f = n.add_state("f", true);
    n.add_transition(p, ReadLabel::letter(0), p);
    n.add_transition(p, ReadLabel::end(), f);
    CHECK(nfa_accepts(n, n.alphabet.parse_word("aa"), /*read_end=*/true));
    CHECK(!nfa_accepts(n, n.alphabet.parse_word("aa"), /*read_end=*/false));
  }

  TEST_CASE("label formatting") {
    Alphabet a{{"x"}};
    CHECK(format_label(ReadLabel::eps(), a) == "eps");
    CHECK(format_label(ReadLabel::end(), a) == "$");
    CHECK(format_label(ReadLabel::letter(0), a) == "x");
  }

  TEST_CASE("indexed shuffle of {ab} and {b} is exactly three words") {
    Nfa shuffled = indexed_shuffle_nfa({word_nfa("ab"), word_nfa("b")});
    const Alphabet& tagged = shuffled.alphabet;
    std::set<std::string> accepted;
    for (const Word& w : fixtures::words_upto(tagged, 4))
      if (nfa_accepts(shuffled, w)) accepted.insert(tagged.format_word(w));
    CHECK(accepted == std::set<std::string>{
                          "a@1.b@1.b@2", "a@1.b@2.b@1", "b@2.a@1.b@1"});
  }

  TEST_CASE("indexed shuffle of a single member tags its letters") {
    Nfa shuffled = indexed_shuffle_nfa({astar_b()});
    const Alphabet& tagged = shuffled.alphabet;
    CHECK(nfa_accepts(shuffled, tagged.parse_word("a@1.a@1.b@1")));
    CHECK(nfa_accepts(shuffled, tagged.parse_word("b@1")));
    CHECK(!nfa_accepts(shuffled, tagged.parse_word("a@1")));
  }

  TEST_CASE("indexed shuffle preserves per-member order across interleavings") {
    Nfa shuffled = indexed_shuffle_nfa({word_nfa("ab"), word_nfa("ba")});
    const Alphabet& tagged = shuffled.alphabet;
    CHECK(nfa_accepts(shuffled, tagged.parse_word("a@1.b@2.b@1.a@2")));
    CHECK(nfa_accepts(shuffled, tagged.parse_word("b@2.a@2.a@1.b@1")));
    // Member order violated: b@1 before a@1.
    CHECK(!nfa_accepts(shuffled, tagged.parse_word("b@1.a@1.b@2.a@2")));
    // Missing one member's word entirely.
    CHECK(!nfa_accepts(shuffled, tagged.parse_word("a@1.b@1")));
  }
}
