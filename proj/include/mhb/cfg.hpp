#ifndef MHB_CFG_HPP
#define MHB_CFG_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mhb/alphabet.hpp"

namespace mhb {

struct CfgSym {
  bool terminal = false;
  uint32_t id = 0;

  static CfgSym term(uint32_t t) { return {true, t}; }
  static CfgSym nonterm(uint32_t n) { return {false, n}; }
  bool operator==(const CfgSym& o) const {
    return terminal == o.terminal && id == o.id;
  }
};

struct CfgProduction {
  uint32_t lhs = 0;
  std::vector<CfgSym> rhs;
};

/// Context-free grammar. The terminal alphabet is declared (it may contain
/// letters no production uses); nonterminals are indices into `nonterminals`.
struct Cfg {
  Alphabet terminals;
  std::vector<std::string> nonterminals;
  uint32_t start = 0;
  std::vector<CfgProduction> productions;

  uint32_t add_nonterminal(const std::string& name);
  void add_production(uint32_t lhs, std::vector<CfgSym> rhs);
  /// Number of nonterminals plus total production length, the size measure
  /// used by the size envelopes.
  size_t size() const;
};

struct CfgAnalysis {
  std::vector<bool> generating;        // per nonterminal
  std::vector<bool> reachable;         // per nonterminal, through generating productions
  std::vector<bool> useful_production; // per production
  bool empty = true;                   // start derives no terminal word
};

CfgAnalysis cfg_analyze(const Cfg& g);

/// Restriction of `g` to useful symbols; the terminal alphabet is kept as
/// declared. An empty-language grammar trims to the bare start symbol.
Cfg cfg_trim(const Cfg& g);

/// Language-preserving compaction: repeatedly inlines a non-start
/// nonterminal with exactly one production wherever its body has at most one
/// symbol or the nonterminal is referenced at most once. Triple grammars of
/// PDAs with many silent moves collapse by orders of magnitude.
Cfg cfg_inline_trivial(const Cfg& g);

bool cfg_is_trimmed(const Cfg& g);

/// CYK over an internal normalized copy; `g` itself is never rewritten.
bool cfg_membership(const Cfg& g, const Word& word);

/// All Parikh vectors of L(g) with every component <= box, computed as a
/// least fixpoint over per-nonterminal vector sets with saturation at box+1
/// (so clipping never loses an in-box answer). Sorted lexicographically.
std::vector<std::vector<uint64_t>> cfg_parikh_box(const Cfg& g, uint64_t box);

/// Exact enumeration of L(g) restricted to words of length <= max_len.
std::set<Word> cfg_language_upto(const Cfg& g, size_t max_len);

/// Text format: one rule per line, "S -> a S b | eps", '#' comments, tokens
/// whitespace-separated, first left-hand side is the start symbol. A token is
/// a nonterminal iff it occurs on some left-hand side.
Cfg parse_cfg(const std::string& text);
std::string serialize_cfg(const Cfg& g);

}  // namespace mhb

#endif
