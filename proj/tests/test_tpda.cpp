#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "mhb/error.hpp"
#include "mhb/tpda.hpp"

using namespace mhb;

namespace {

std::string word_str(const Alphabet& a, const Word& w) { return a.format_word(w); }

}  // namespace

TEST_SUITE("tpda") {
  TEST_CASE("fig1 validates without warnings") {
    Tpda p = fixtures::make_fig1();
    CHECK(tpda_validate(p).empty());
    CHECK(p.heads == 2);
    CHECK(p.state_count() == 6);
  }

  TEST_CASE("validation rejects hard violations") {
    Tpda p;
    p.heads = 0;
    CHECK_THROWS_AS(tpda_validate(p), Error);
    Tpda q = fixtures::make_fig1();
    q.transitions[0].dst = 99;
    CHECK_THROWS_AS(tpda_validate(q), Error);
    Tpda r = fixtures::make_fig1();
    r.head_of[2] = 7;
    CHECK_THROWS_AS(tpda_validate(r), Error);
  }

  TEST_CASE("validation warns when heads exceed states") {
    Tpda p;
    p.heads = 3;
    p.stack.add("Z");
    p.alphabet.add("a");
    p.add_state("s", 0, true);
    p.initial = 0;
    p.initial_stack = 0;
    CHECK(!tpda_validate(p).empty());
  }

  TEST_CASE("fig1 accepts palindromic w&w words and nothing else, length <= 5") {
    Tpda p = fixtures::make_fig1();
    for (const Word& w : fixtures::words_upto(p.alphabet, 5)) {
      CAPTURE(word_str(p.alphabet, w));
      CHECK(accepts_shared(p, w) == fixtures::fig1_reference(word_str(p.alphabet, w)));
    }
  }

  TEST_CASE("fig1 spot checks") {
    Tpda p = fixtures::make_fig1();
    const Alphabet& a = p.alphabet;
    CHECK(accepts_shared(p, a.parse_word("&")));
    CHECK(accepts_shared(p, a.parse_word("0&0")));
    CHECK(accepts_shared(p, a.parse_word("11&11")));
    CHECK(accepts_shared(p, a.parse_word("010&010")));
    CHECK(!accepts_shared(p, a.parse_word("01&01")));   // not a palindrome
    CHECK(!accepts_shared(p, a.parse_word("0&1")));
    CHECK(!accepts_shared(p, a.parse_word("0&00")));
    CHECK(!accepts_shared(p, Word{}));
  }

  TEST_CASE("step fires epsilon moves without touching tapes") {
    Tpda p = fixtures::make_fig1();
    Id id = initial_id(p, {p.alphabet.parse_word("&"), p.alphabet.parse_word("&")});
    std::vector<Id> next = step(p, id);
    bool saw_eps = false;
    for (const Id& n : next)
      if (n.state == 1 && n.tapes[0].pos == 0 && n.tapes[1].pos == 0 &&
          n.stack == id.stack)
        saw_eps = true;
    CHECK(saw_eps);
  }

  TEST_CASE("accepting IDs require every head off its tape") {
    Tpda p = fixtures::make_fig1();
    SimResult sim = simulate_budgeted(
        p, {p.alphabet.parse_word("0&0"), p.alphabet.parse_word("0&0")}, 100000);
    REQUIRE(sim.verdict == SimVerdict::Accepting);
    const Id& last = sim.trace.back();
    CHECK(id_accepting(p, last));
    for (const TapeConfig& t : last.tapes) CHECK(t.off());
    // Every accepting run read the endmarker on each tape.
    CHECK(p.is_final[last.state]);
  }

  TEST_CASE("simulation reports rejection and budget exhaustion") {
    Tpda p = fixtures::make_fig1();
    SimResult rej = simulate_budgeted(p, {Word{}, Word{}}, 100000);
    CHECK(rej.verdict == SimVerdict::Rejecting);
    SimResult tight = simulate_budgeted(
        p, {p.alphabet.parse_word("0&0"), p.alphabet.parse_word("0&0")}, 1);
    CHECK(tight.verdict == SimVerdict::BudgetExceeded);
  }

  TEST_CASE("trace rendering marks head and endmarker") {
    Tpda p = fixtures::make_fig1();
    Id id = initial_id(p, {p.alphabet.parse_word("0&0"), p.alphabet.parse_word("0&0")});
    std::string s = format_id(p, id);
    CHECK(s.find('#') != std::string::npos);
    CHECK(s.find('$') != std::string::npos);
    CHECK(s.find("qup") != std::string::npos);
  }

  TEST_CASE("tuple acceptance is not restricted to the diagonal") {
    Tpda p = fixtures::make_fig1();
    const Alphabet& a = p.alphabet;
    CHECK(accepts_tuple_exact(p, {a.parse_word("&"), a.parse_word("&")}));
    // Head 2 skips the middle letter of its tape; head 1 drains after &.
    CHECK(accepts_tuple_exact(p, {a.parse_word("&0"), a.parse_word("0&")}));
    CHECK(!accepts_shared(p, a.parse_word("&0")));
    CHECK(!accepts_shared(p, a.parse_word("0&")));
    CHECK(!accepts_tuple_exact(p, {a.parse_word("0&0"), a.parse_word("&")}));
  }

  TEST_CASE("shared acceptance equals tuple acceptance on the diagonal") {
    Tpda p = fixtures::make_fig1();
    for (const Word& w : fixtures::words_upto(p.alphabet, 4))
      CHECK(accepts_shared(p, w) == accepts_tuple_exact(p, {w, w}));
  }

  TEST_CASE("union and intersection match word-level truth tables") {
    Tpda m1 = fixtures::make_anbn_cstar();
    Tpda m2 = fixtures::make_astar_bncn();
    Tpda u = tpda_union(m1, m2);
    Tpda i = tpda_intersection(m1, m2);
    CHECK(u.heads == m1.heads + m2.heads);
    CHECK(i.heads == m1.heads + m2.heads);
    for (const Word& w : fixtures::words_upto(m1.alphabet, 4)) {
      bool in1 = accepts_shared(m1, w);
      bool in2 = accepts_shared(m2, w);
      CAPTURE(word_str(m1.alphabet, w));
      CHECK(accepts_shared(u, w) == (in1 || in2));
      CHECK(accepts_shared(i, w) == (in1 && in2));
    }
  }

  TEST_CASE("union and intersection require matching alphabets") {
    Tpda m1 = fixtures::make_anbn_cstar();
    Tpda other = fixtures::make_fig1();
    CHECK_THROWS_AS(tpda_union(m1, other), Error);
    CHECK_THROWS_AS(tpda_intersection(m1, other), Error);
  }

  TEST_CASE("intersection of the section-one machines is a^k b^k c^k") {
    Tpda i = tpda_intersection(fixtures::make_anbn_cstar(),
                               fixtures::make_astar_bncn());
    const Alphabet& a = i.alphabet;
    CHECK(accepts_shared(i, Word{}));
    CHECK(accepts_shared(i, a.parse_word("abc")));
    CHECK(accepts_shared(i, a.parse_word("aabbcc")));
    CHECK(!accepts_shared(i, a.parse_word("aabbc")));
    CHECK(!accepts_shared(i, a.parse_word("abcc")));
    CHECK(!accepts_shared(i, a.parse_word("ab")));
  }
}
