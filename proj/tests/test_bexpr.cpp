#include <string>
#include <vector>

#include "doctest.h"
#include "mhb/alphabet.hpp"
#include "mhb/bexpr.hpp"
#include "mhb/error.hpp"

using namespace mhb;

namespace {

Alphabet abc() { return Alphabet{{"a", "b", "c"}}; }

}  // namespace

TEST_SUITE("bexpr") {
  TEST_CASE("alphabet declaration order and lookup") {
    Alphabet a = abc();
    CHECK(a.size() == 3);
    CHECK(a.require("a") == 0);
    CHECK(a.require("c") == 2);
    CHECK(!a.find("d").has_value());
    CHECK_THROWS_AS(a.require("d"), Error);
    Alphabet dup{{"a", "a"}};  // add() is idempotent
    CHECK(dup.size() == 1);
    CHECK_THROWS_AS((Alphabet{{"eps"}}), Error);
    CHECK_THROWS_AS((Alphabet{{"$"}}), Error);
  }

  TEST_CASE("word parsing and formatting round-trip") {
    Alphabet a = abc();
    CHECK(a.all_single_char());
    CHECK(a.parse_word("abc") == Word{0, 1, 2});
    CHECK(a.parse_word("a.b.c") == Word{0, 1, 2});
    CHECK(a.parse_word("") == Word{});
    CHECK(a.format_word(Word{2, 2, 0}) == "cca");
    CHECK_THROWS_AS(a.parse_word("abd"), Error);

    Alphabet multi{{"inc", "dec"}};
    CHECK(!multi.all_single_char());
    CHECK(multi.parse_word("inc.dec.inc") == Word{0, 1, 0});
    CHECK(multi.format_word(Word{1, 0}) == "dec.inc");
  }

  TEST_CASE("parikh image counts occurrences per declared symbol") {
    Alphabet a = abc();
    CHECK(parikh(a.parse_word("abacab"), a) == std::vector<uint64_t>{3, 2, 1});
    CHECK(parikh(Word{}, a) == std::vector<uint64_t>{0, 0, 0});
  }

  TEST_CASE("parsing bounded expressions") {
    Alphabet a = abc();
    BoundedExpression e = parse_bounded_expression("ab c", a);
    REQUIRE(e.arity() == 2);
    CHECK(e.segments[0] == a.parse_word("ab"));
    CHECK(e.segments[1] == a.parse_word("c"));
    CHECK(e.size() == 4);  // 1 + |ab| + |c|
    CHECK(!e.letter_bounded());
    CHECK(e.to_string() == "ab c");

    BoundedExpression lb = parse_bounded_expression("a b c", a);
    CHECK(lb.letter_bounded());

    CHECK_THROWS_AS(parse_bounded_expression("", a), Error);
    CHECK_THROWS_AS(parse_bounded_expression("ab  c", a), Error);
    CHECK_THROWS_AS(parse_bounded_expression("ab c ", a), Error);
    CHECK_THROWS_AS(parse_bounded_expression("xy", a), Error);
  }

  TEST_CASE("expansion substitutes one exponent per segment") {
    Alphabet a = abc();
    BoundedExpression e = parse_bounded_expression("ab c", a);
    CHECK(expand(e, {0, 0}) == Word{});
    CHECK(expand(e, {2, 1}) == a.parse_word("ababc"));
    CHECK(expand(e, {1, 3}) == a.parse_word("abccc"));
    CHECK_THROWS_AS(expand(e, {1}), Error);
    CHECK_THROWS_AS(expand(e, {1, 2, 3}), Error);
  }

  TEST_CASE("membership in the bounded language") {
    Alphabet a = abc();
    BoundedExpression e = parse_bounded_expression("ab c ba", a);
    CHECK(bexpr_contains(e, Word{}));
    CHECK(bexpr_contains(e, a.parse_word("abab")));
    CHECK(bexpr_contains(e, a.parse_word("abcba")));
    CHECK(bexpr_contains(e, a.parse_word("ccbaba")));
    CHECK(!bexpr_contains(e, a.parse_word("ba" "ab")));   // wrong order
    CHECK(!bexpr_contains(e, a.parse_word("abc" "b")));   // partial segment
    CHECK(!bexpr_contains(e, a.parse_word("cab")));
  }

  TEST_CASE("membership agrees with expansion on small exponent boxes") {
    Alphabet a = abc();
    BoundedExpression e = parse_bounded_expression("ab c ba", a);
    for (uint64_t i = 0; i <= 2; ++i)
      for (uint64_t j = 0; j <= 2; ++j)
        for (uint64_t k = 0; k <= 2; ++k) {
          Word u = expand(e, {i, j, k});
          CAPTURE(a.format_word(u));
          CHECK(bexpr_contains(e, u));
        }
  }

  TEST_CASE("segments sharing letters keep order-sensitivity") {
    Alphabet a = abc();
    BoundedExpression e = parse_bounded_expression("a ab a", a);
    CHECK(bexpr_contains(e, a.parse_word("aaba")));
    CHECK(bexpr_contains(e, a.parse_word("aabab")));
    CHECK(!bexpr_contains(e, a.parse_word("aabb")));
  }
}
