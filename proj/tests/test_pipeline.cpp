#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "mhb/cfg.hpp"
#include "mhb/error.hpp"
#include "mhb/oracle.hpp"
#include "mhb/pipeline.hpp"

using namespace mhb;

namespace {

// T = {(a^m, a^n) : m == n}; with `positive`, additionally m >= 1.
Tpda make_equal_counts(bool positive) {
  Tpda p;
  p.heads = 2;
  p.alphabet = Alphabet{{"a"}};
  p.stack = Alphabet{{"Z", "A"}};
  const uint32_t Z = 0, A = 1;
  const Sym a = 0;
  uint32_t push_state;
  if (positive) {
    uint32_t s = p.add_state("s", 0);
    push_state = p.add_state("p", 0);
    p.initial = s;
    p.add_transition(s, Z, ReadLabel::letter(a), push_state, {A, Z});
  } else {
    push_state = p.add_state("p", 0);
    p.initial = push_state;
    p.add_transition(push_state, Z, ReadLabel::letter(a), push_state, {A, Z});
  }
  uint32_t q = p.add_state("q", 1);
  uint32_t f = p.add_state("f", 1, true);
  p.add_transition(push_state, A, ReadLabel::letter(a), push_state, {A, A});
  p.add_transition(push_state, Z, ReadLabel::end(), q, {Z});
  p.add_transition(push_state, A, ReadLabel::end(), q, {A});
  p.add_transition(q, A, ReadLabel::letter(a), q, {});
  p.add_transition(q, Z, ReadLabel::end(), f, {Z});
  return p;
}

// {a^n b^(2n) : n >= 1} (single head).
Tpda make_abb_pump() {
  Tpda p;
  p.heads = 1;
  p.alphabet = Alphabet{{"a", "b"}};
  p.stack = Alphabet{{"Z", "A"}};
  const uint32_t Z = 0, A = 1;
  const Sym a = 0, b = 1;
  uint32_t s = p.add_state("s", 0);
  uint32_t u = p.add_state("u", 0);
  uint32_t v = p.add_state("v", 0);
  uint32_t f = p.add_state("f", 0, true);
  p.add_transition(s, Z, ReadLabel::letter(a), u, {A, A, Z});
  p.add_transition(u, A, ReadLabel::letter(a), u, {A, A, A});
  p.add_transition(u, A, ReadLabel::eps(), v, {A});
  p.add_transition(v, A, ReadLabel::letter(b), v, {});
  p.add_transition(v, Z, ReadLabel::end(), f, {Z});
  return p;
}

// {a^n b^n : n >= 1} (single head).
Tpda make_ab_pump() {
  Tpda p;
  p.heads = 1;
  p.alphabet = Alphabet{{"a", "b"}};
  p.stack = Alphabet{{"Z", "A"}};
  const uint32_t Z = 0, A = 1;
  const Sym a = 0, b = 1;
  uint32_t s = p.add_state("s", 0);
  uint32_t u = p.add_state("u", 0);
  uint32_t v = p.add_state("v", 0);
  uint32_t f = p.add_state("f", 0, true);
  p.add_transition(s, Z, ReadLabel::letter(a), u, {A, Z});
  p.add_transition(u, A, ReadLabel::letter(a), u, {A, A});
  p.add_transition(u, A, ReadLabel::eps(), v, {A});
  p.add_transition(v, A, ReadLabel::letter(b), v, {});
  p.add_transition(v, Z, ReadLabel::end(), f, {Z});
  return p;
}

Word canonical(const Alphabet&, const std::vector<uint64_t>& k) {
  Word u;
  for (size_t i = 0; i < k.size(); ++i)
    for (uint64_t c = 0; c < k[i]; ++c) u.push_back(static_cast<Sym>(i));
  return u;
}

void all_interleavings(const Word& u, const Word& v, Word& cur,
                       size_t i, size_t j, std::vector<Word>& out) {
  if (i == u.size() && j == v.size()) {
    out.push_back(cur);
    return;
  }
  if (i < u.size()) {
    cur.push_back(u[i]);
    all_interleavings(u, v, cur, i + 1, j, out);
    cur.pop_back();
  }
  if (j < v.size()) {
    cur.push_back(v[j]);
    all_interleavings(u, v, cur, i, j + 1, out);
    cur.pop_back();
  }
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("segmented automaton recognizes exactly the bounded language") {
    Alphabet sigma{{"a", "b", "c"}};
    BoundedExpression e = parse_bounded_expression("ab c ba", sigma);
    SegmentedNfa w = build_w(e);
    CHECK(w.designated.size() == 3);
    for (const Word& u : fixtures::words_upto(sigma, 5)) {
      CAPTURE(sigma.format_word(u));
      CHECK(nfa_accepts(w.nfa, u, /*read_end=*/true) == bexpr_contains(e, u));
    }
    // Without the endmarker the final state stays unreachable.
    CHECK(!nfa_accepts(w.nfa, sigma.parse_word("ab"), /*read_end=*/false));
  }

  TEST_CASE("contraction matches the machine on expanded exponent vectors") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("a b c", a.alphabet);
    ContractionResult cr = contract(a, e);
    CHECK(cr.b.heads == a.heads);
    CHECK(cr.b.alphabet.names() == std::vector<std::string>{"a1", "a2", "a3"});
    for (uint64_t i = 0; i <= 3; ++i)
      for (uint64_t j = 0; j <= 3; ++j)
        for (uint64_t l = 0; l <= 3; ++l) {
          std::vector<uint64_t> k{i, j, l};
          bool direct = accepts_shared(a, expand(e, k));
          CAPTURE(i); CAPTURE(j); CAPTURE(l);
          CHECK(direct == (i == j));
          CHECK(accepts_shared(cr.b, canonical(cr.b.alphabet, k)) == direct);
        }
  }

  TEST_CASE("contraction only accepts segment-ordered words") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("a b c", a.alphabet);
    Tpda b = contract(a, e).b;
    for (const Word& u : fixtures::words_upto(b.alphabet, 4)) {
      bool ordered = std::is_sorted(u.begin(), u.end());
      uint64_t n1 = std::count(u.begin(), u.end(), Sym{0});
      uint64_t n2 = std::count(u.begin(), u.end(), Sym{1});
      CAPTURE(b.alphabet.format_word(u));
      CHECK(accepts_shared(b, u) == (ordered && n1 == n2));
    }
  }

  TEST_CASE("contraction preserves tuple acceptance over two heads") {
    Tpda a = make_equal_counts(false);
    BoundedExpression e = parse_bounded_expression("a", a.alphabet);
    Tpda b = contract(a, e).b;
    for (uint64_t m = 0; m <= 3; ++m)
      for (uint64_t n = 0; n <= 3; ++n) {
        Word am(m, Sym{0}), an(n, Sym{0});
        CAPTURE(m); CAPTURE(n);
        CHECK(accepts_tuple_exact(a, {am, an}) == (m == n));
        CHECK(accepts_tuple_exact(b, {am, an}) == (m == n));
      }
  }

  TEST_CASE("single-head shuffle is a relabeling") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("a b c", a.alphabet);
    Tpda b = contract(a, e).b;
    Pda c = shuffle_pda(b);
    CHECK(c.alphabet.names() ==
          std::vector<std::string>{"a1@1", "a2@1", "a3@1"});
    for (const Word& u : fixtures::words_upto(c.alphabet, 4)) {
      Sim3 got = pda_accepts_budgeted(c, u, 500000);
      REQUIRE(got != Sim3::BudgetExceeded);
      // Tags carry no information at one head: same symbol indices.
      CHECK((got == Sim3::Yes) == accepts_shared(b, u));
    }
  }

  TEST_CASE("two-head shuffle language projects to tuple acceptance") {
    Tpda a = make_equal_counts(false);
    BoundedExpression e = parse_bounded_expression("a", a.alphabet);
    Tpda b = contract(a, e).b;
    Pda c = shuffle_pda(b);
    REQUIRE(c.alphabet.names() == std::vector<std::string>{"a1@1", "a1@2"});

    // Exact language slice: runs read the whole tape-1 block first.
    std::set<Word> got;
    for (const Word& u : fixtures::words_upto(c.alphabet, 4))
      if (pda_accepts_budgeted(c, u, 500000) == Sim3::Yes) got.insert(u);
    std::set<Word> want{Word{}, Word{0, 1}, Word{0, 0, 1, 1}};
    CHECK(got == want);

    // Tuple membership equals some interleaving being accepted.
    for (uint64_t m = 0; m <= 2; ++m)
      for (uint64_t n = 0; n <= 2; ++n) {
        Word u(m, Sym{0}), v(n, Sym{1});  // a1@1^m, a1@2^n
        std::vector<Word> inters;
        Word cur;
        all_interleavings(u, v, cur, 0, 0, inters);
        bool any = false;
        for (const Word& w : inters)
          if (pda_accepts_budgeted(c, w, 500000) == Sim3::Yes) any = true;
        Word am(m, Sym{0}), an(n, Sym{0});
        CAPTURE(m); CAPTURE(n);
        CHECK(any == accepts_tuple_exact(b, {am, an}));
      }
  }

  TEST_CASE("pipeline artifacts are trimmed and named canonically") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("a b c", a.alphabet);
    PipelineArtifacts art = emptiness_pipeline(a, e);
    CHECK(cfg_is_trimmed(art.g));
    CHECK(art.psi.free_vars == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(!art.psi.has_forall());
  }

  TEST_CASE("solved formula agrees with the membership oracle pointwise") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("a b c", a.alphabet);
    PresburgerFormula psi = emptiness_formula(a, e);
    uint64_t bound = derived_inner_bound(psi, 2);
    for (uint64_t i = 0; i <= 2; ++i)
      for (uint64_t j = 0; j <= 2; ++j)
        for (uint64_t l = 0; l <= 2; ++l) {
          EvalResult r = evaluate(psi, {i, j, l}, bound);
          CAPTURE(i); CAPTURE(j); CAPTURE(l);
          CHECK(r.value == (i == j));
        }
  }

  TEST_CASE("palindrome machine formula matches membership at spot vectors") {
    Tpda a = fixtures::make_fig1();
    BoundedExpression e = fixtures::fig1_expr();
    PresburgerFormula psi = emptiness_formula(a, e);
    REQUIRE(psi.free_vars.size() == 7);
    uint64_t bound = derived_inner_bound(psi, 1);
    auto probe = [&](std::vector<uint64_t> k) {
      bool direct = accepts_shared(a, expand(e, k));
      EvalResult r = evaluate(psi, k, bound);
      CAPTURE(a.alphabet.format_word(expand(e, k)));
      CHECK(r.value == direct);
      return r.value;
    };
    CHECK(probe({0, 0, 0, 1, 0, 0, 0}));   // &
    CHECK(probe({1, 0, 0, 1, 1, 0, 0}));   // 0&0
    CHECK(probe({1, 0, 1, 1, 1, 0, 1}));   // 00&00
    CHECK(probe({0, 1, 0, 1, 0, 1, 0}));   // 1&1
    CHECK(!probe({1, 0, 0, 1, 0, 0, 0}));  // 0&
    CHECK(!probe({1, 1, 0, 1, 1, 1, 0}));  // 01&01: equal halves, no palindrome
    CHECK(!probe({1, 1, 0, 1, 0, 1, 1}));  // 01&10
    CHECK(!probe({0, 0, 0, 0, 0, 0, 0}));  // empty word
  }

  TEST_CASE("family formula conjoins member constraints over shared counters") {
    Tpda m1 = fixtures::make_anbn_cstar();
    Tpda m2 = fixtures::make_astar_bncn();
    BoundedExpression e = parse_bounded_expression("a b c", m1.alphabet);
    PresburgerFormula fam = family_emptiness_formula({m1, m2}, e);
    CHECK(fam.free_vars == std::vector<std::string>{"x1", "x2", "x3"});
    uint64_t bound = derived_inner_bound(fam, 2);
    for (uint64_t i = 0; i <= 2; ++i)
      for (uint64_t j = 0; j <= 2; ++j)
        for (uint64_t l = 0; l <= 2; ++l) {
          CAPTURE(i); CAPTURE(j); CAPTURE(l);
          CHECK(evaluate(fam, {i, j, l}, bound).value == (i == j && j == l));
        }
    SolveResult first = solve_box(fam, 2, bound);
    REQUIRE(first.found);
    CHECK(first.assignment == std::vector<uint64_t>{0, 0, 0});
  }

  TEST_CASE("decision on the palindrome machine finds the least witness") {
    Tpda a = fixtures::make_fig1();
    BoundedExpression e = fixtures::fig1_expr();
    DecisionConfig cfg;
    cfg.box = 2;
    DecisionRun run = run_decision(a, e, cfg);
    REQUIRE(run.verdict.kind == EmptinessVerdict::Kind::NonEmpty);
    CHECK(run.verdict.exponents ==
          std::vector<uint64_t>{0, 0, 0, 1, 0, 0, 0});
    CHECK(a.alphabet.format_word(run.verdict.word) == "&");
    CHECK(run.verdict.verified);
    CHECK(run.artifacts.has_value());
    CHECK(run.chains_tried == 0);

    EmptinessVerdict ref = brute_force_emptiness(a, e, cfg.box);
    REQUIRE(ref.kind == EmptinessVerdict::Kind::NonEmpty);
    CHECK(ref.exponents == run.verdict.exponents);
  }

  TEST_CASE("disjoint pump languages come out empty within the bound") {
    Tpda inter = tpda_intersection(make_abb_pump(), make_ab_pump());
    BoundedExpression e = parse_bounded_expression("a b", inter.alphabet);
    DecisionConfig cfg;
    cfg.box = 6;
    EmptinessVerdict got = decide_emptiness(inter, e, cfg);
    CHECK(got.kind == EmptinessVerdict::Kind::EmptyWithinBound);
    CHECK(got.bound == 6);
    EmptinessVerdict ref = brute_force_emptiness(inter, e, cfg.box);
    CHECK(ref.kind == EmptinessVerdict::Kind::EmptyWithinBound);
  }

  TEST_CASE("nonempty intersection is witnessed through the product machine") {
    Tpda inter = tpda_intersection(fixtures::make_anbn_cstar(),
                                   fixtures::make_astar_bncn());
    BoundedExpression e = parse_bounded_expression("a b c", inter.alphabet);
    DecisionConfig cfg;
    cfg.box = 2;
    DecisionRun run = run_decision(inter, e, cfg);
    REQUIRE(run.verdict.kind == EmptinessVerdict::Kind::NonEmpty);
    CHECK(run.verdict.exponents == std::vector<uint64_t>{0, 0, 0});
    CHECK(run.verdict.word.empty());
    // Ascending box sweep: (1,1,1) is the least strictly positive witness.
    PresburgerFormula psi = run.psi;
    uint64_t bound = derived_inner_bound(psi, 2);
    CHECK(evaluate(psi, {1, 1, 1}, bound).value);
    CHECK(!evaluate(psi, {2, 1, 1}, bound).value);
  }

  TEST_CASE("chain family enumerates multiset permutations") {
    Tpda a = make_equal_counts(true);
    BoundedExpression e = parse_bounded_expression("a", a.alphabet);
    LetterBoundedFamily fam(a, e);
    std::vector<ChainMember> members;
    while (auto m = fam.next()) members.push_back(std::move(*m));
    REQUIRE(members.size() == 2);
    CHECK(members[0].advance == std::vector<uint32_t>{0, 1});
    CHECK(members[1].advance == std::vector<uint32_t>{1, 0});
    for (const ChainMember& m : members) {
      CAPTURE(m.advance[0]);
      CHECK(letter_bounded_member(a, e, m.b));
    }
    CHECK(!letter_bounded_member(a, e, a));
    Tpda doctored = members[0].b;
    REQUIRE(!doctored.is_final.empty());
    doctored.is_final[0] = !doctored.is_final[0];
    CHECK(!letter_bounded_member(a, e, doctored));
  }

  TEST_CASE("chain decomposition rejects non-letter-bounded expressions") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("ab c", a.alphabet);
    CHECK_THROWS_AS(LetterBoundedFamily(a, e), Error);
    CHECK(!letter_bounded_member(a, e, a));
  }

  TEST_CASE("chain route decides letter-bounded instances") {
    Tpda a = make_equal_counts(true);
    BoundedExpression e = parse_bounded_expression("a", a.alphabet);
    DecisionConfig cfg;
    cfg.box = 3;
    cfg.letter_bounded_auto = true;
    DecisionRun run = run_decision(a, e, cfg);
    CHECK(run.chains_tried == 2);
    CHECK(!run.artifacts.has_value());
    REQUIRE(run.verdict.kind == EmptinessVerdict::Kind::NonEmpty);
    CHECK(run.verdict.exponents == std::vector<uint64_t>{1});
    CHECK(a.alphabet.format_word(run.verdict.word) == "a");
    CHECK(run.verdict.verified);

    Tpda inter = tpda_intersection(make_abb_pump(), make_ab_pump());
    BoundedExpression e2 = parse_bounded_expression("a b", inter.alphabet);
    DecisionConfig cfg2;
    cfg2.box = 4;
    cfg2.letter_bounded_auto = true;
    DecisionRun run2 = run_decision(inter, e2, cfg2);
    CHECK(run2.chains_tried == 6);  // 4!/(2!2!) interleavings of two heads
    CHECK(run2.verdict.kind == EmptinessVerdict::Kind::EmptyWithinBound);
  }

  TEST_CASE("chain route equals the monolithic route on the palindrome machine") {
    Tpda a = fixtures::make_fig1();
    // "0 1 0 & 0 1 0" is letter-bounded, so both routes are available.
    BoundedExpression e = fixtures::fig1_expr();
    DecisionConfig mono;
    mono.box = 1;
    DecisionConfig chain = mono;
    chain.letter_bounded_auto = true;
    chain.chain_cap = 10000;  // 14!/(7!7!) = 3432 chains
    DecisionRun r1 = run_decision(a, e, mono);
    DecisionRun r2 = run_decision(a, e, chain);
    CHECK(r2.chains_tried == 3432);
    REQUIRE(r1.verdict.kind == EmptinessVerdict::Kind::NonEmpty);
    REQUIRE(r2.verdict.kind == EmptinessVerdict::Kind::NonEmpty);
    CHECK(r1.verdict.exponents == r2.verdict.exponents);
  }

  TEST_CASE("external models are replayed before being trusted") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("a b c", a.alphabet);
    EmptinessVerdict ok = verify_external_model(
        a, e, true, {{"x1", 2}, {"x2", 2}, {"x3", 1}});
    CHECK(ok.kind == EmptinessVerdict::Kind::NonEmpty);
    CHECK(a.alphabet.format_word(ok.word) == "aabbc");
    CHECK(ok.verified);

    EmptinessVerdict defaulted = verify_external_model(a, e, true, {});
    CHECK(defaulted.kind == EmptinessVerdict::Kind::NonEmpty);
    CHECK(defaulted.word.empty());

    CHECK_THROWS_AS(verify_external_model(a, e, true, {{"x1", 1}}), Error);

    EmptinessVerdict uns = verify_external_model(a, e, false, {});
    CHECK(uns.kind == EmptinessVerdict::Kind::EmptyProvedExternally);
  }

  TEST_CASE("export mode emits a script instead of deciding") {
    Tpda a = fixtures::make_anbn_cstar();
    BoundedExpression e = parse_bounded_expression("a b c", a.alphabet);
    DecisionConfig cfg;
    cfg.mode = DecisionConfig::Mode::ExportSmt;
    DecisionRun run = run_decision(a, e, cfg);
    CHECK(run.verdict.kind == EmptinessVerdict::Kind::Unknown);
    CHECK(run.smt.find("(set-logic LIA)") != std::string::npos);
    CHECK(run.smt.find("(check-sat)") != std::string::npos);
    CHECK(run.smt.find("declare-const x1") != std::string::npos);
  }
}
