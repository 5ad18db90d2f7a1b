#ifndef MHB_PRESBURGER_HPP
#define MHB_PRESBURGER_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mhb/error.hpp"

namespace mhb {

struct PTerm;
using TermPtr = std::shared_ptr<const PTerm>;

/// Integer term: constants, variables, sum, difference. Variables range over
/// the naturals; term values live in Z. Constant arithmetic is checked and
/// raises Overflow instead of wrapping.
struct PTerm {
  enum class Kind { Const, Var, Add, Sub };
  Kind kind = Kind::Const;
  int64_t value = 0;
  std::string var;
  TermPtr lhs, rhs;

  static TermPtr constant(int64_t v);
  static TermPtr variable(std::string name);
  static TermPtr add(TermPtr a, TermPtr b);
  static TermPtr sub(TermPtr a, TermPtr b);
};

enum class Rel { Eq, Ne, Le, Lt, Ge, Gt };

struct PFormula;
using FormulaPtr = std::shared_ptr<const PFormula>;

/// Positive-form Presburger formula: atoms t ~ 0, conjunction, disjunction
/// and quantifiers. Negation is the separate `negate` transform.
struct PFormula {
  enum class Kind { True, False, Atom, And, Or, Exists, Forall };
  Kind kind = Kind::True;
  TermPtr atom;
  Rel rel = Rel::Eq;
  std::vector<FormulaPtr> children;
  std::string var;
  FormulaPtr body;

  static FormulaPtr truth(bool value);
  /// t1 ~ t2, stored as (t1 - t2) ~ 0.
  static FormulaPtr atom_rel(TermPtr t1, Rel rel, TermPtr t2);
  static FormulaPtr conj(std::vector<FormulaPtr> children);
  static FormulaPtr disj(std::vector<FormulaPtr> children);
  static FormulaPtr exists(std::string var, FormulaPtr body);
  static FormulaPtr forall(std::string var, FormulaPtr body);
};

struct PresburgerFormula {
  FormulaPtr root;
  std::vector<std::string> free_vars;

  /// Formula plus term node count, the size measure for |Phi| and |Psi|.
  size_t node_count() const;
  size_t existential_count() const;
  bool has_forall() const;
};

struct EvalResult {
  bool value = false;
  /// False when the verdict may depend on the instantiation bound (an
  /// existential that came out false within the bound, or a universal that
  /// came out true within it).
  bool exact = false;
};

/// Bounded evaluation: free variables from `assignment` (one value per
/// declared free variable, in order), quantifiers instantiated over
/// [0, bound]. Connectives and atoms are evaluated exactly.
EvalResult evaluate(const PresburgerFormula& f,
                    const std::vector<uint64_t>& assignment, uint64_t bound);

/// The documented heuristic bound (box*n + 1) * (existential count + 2) used
/// for inner quantifiers when solving over a free-variable box.
uint64_t derived_inner_bound(const PresburgerFormula& f, uint64_t box);

struct SolveResult {
  bool found = false;
  std::vector<uint64_t> assignment;  // per free variable when found
};

/// First satisfying free-variable assignment in [0, box]^n, ordered by sum
/// then lexicographically; inner existentials range over [0, inner_bound].
SolveResult solve_box(const PresburgerFormula& f, uint64_t box,
                      uint64_t inner_bound);

/// De Morgan negation down to atoms, dualizing quantifiers; involutive.
PresburgerFormula negate(const PresburgerFormula& f);

/// SMT-LIB 2 script: declarations with >= 0 guards, the assertion, check-sat
/// and get-model. logic is "LIA" (quantifiers kept) or "QF_LIA" (requires a
/// purely existential formula; the existential block is hoisted into
/// declarations).
std::string to_smtlib(const PresburgerFormula& f, const std::string& logic);

struct SmtResult {
  bool known = false;  // text contained sat or unsat
  bool sat = false;
  std::map<std::string, uint64_t> values;
};

/// Reads solver output: "sat"/"unsat", plus model values either as
/// "(define-fun name () Int value)" forms or plain "name value" lines.
SmtResult parse_smt_result(const std::string& text);

struct Cfg;

/// Existential formula for the Parikh image of a trimmed grammar: one free
/// variable per declared terminal (in declaration order), existentially bound
/// production counters with flow balance per nonterminal plus depth-variable
/// connectivity. `prefix` is prepended to every variable name (free and
/// bound), letting several instances coexist under one quantifier scope.
PresburgerFormula parikh_formula(const Cfg& g, const std::string& prefix = "");

}  // namespace mhb

#endif
