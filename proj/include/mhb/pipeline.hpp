#ifndef MHB_PIPELINE_HPP
#define MHB_PIPELINE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhb/bexpr.hpp"
#include "mhb/nfa.hpp"
#include "mhb/pda.hpp"
#include "mhb/presburger.hpp"
#include "mhb/tpda.hpp"
#include "mhb/verdict.hpp"

namespace mhb {

/// NFA for w̄·$ together with one designated state per segment, entered
/// exactly when the last letter of a copy of that segment is read.
struct SegmentedNfa {
  Nfa nfa;
  std::vector<uint32_t> designated;
};

SegmentedNfa build_w(const BoundedExpression& w);

/// Contraction of a machine against a bounded expression: the synchronized
/// product with one W copy per tape, non-endmarker reads relabeled to a_i
/// wherever copy of segment i completes (everything else to ε). `product` is
/// the fragment of W^d induced by the states reached jointly with the
/// machine, over the indexed alphabet ("σ@2" is σ on tape 2, "$@2" its
/// endmarker read).
struct ContractionResult {
  Tpda b;  // over {a1..an}
  SegmentedNfa w;
  Nfa product;
};

ContractionResult contract(const Tpda& a, const BoundedExpression& w);

/// Single-stack shuffle recognizer: same states/stack as b; a read of σ on
/// tape ℓ becomes the plain letter "σ@ℓ+1", endmarker and ε reads become ε.
Pda shuffle_pda(const Tpda& b);

struct PipelineArtifacts {
  ContractionResult contraction;
  Pda c;
  Cfg g;                  // trimmed grammar for c
  PresburgerFormula psi;  // free variables x1..xn, one per segment
};

/// Full chain machine -> contraction -> shuffle PDA -> grammar -> formula.
/// `prefix` is prepended to every bound variable name so several instances
/// can live under one root formula.
PipelineArtifacts emptiness_pipeline(const Tpda& m, const BoundedExpression& w,
                                     const std::string& prefix = "");

/// Ψ(x1..xn): satisfiable at k iff the machine accepts expand(w,k) on all
/// tapes.
PresburgerFormula emptiness_formula(const Tpda& m, const BoundedExpression& w);

/// Conjunction over the member formulas: Ψ(k) certifies one word of w̄
/// accepted by every machine in the family.
PresburgerFormula family_emptiness_formula(const std::vector<Tpda>& machines,
                                           const BoundedExpression& w);

/// One member of the letter-bounded decomposition: the monotone chain through
/// the segment-position grid (entry t advanced coordinate advance[t]) and the
/// machine contracted against that chain.
struct ChainMember {
  std::vector<uint32_t> advance;
  Tpda b;
};

/// Lazy enumeration of the chain family of a letter-bounded expression, in
/// lexicographic order of the coordinate-advance sequence. Throws
/// NotLetterBounded up front.
class LetterBoundedFamily {
 public:
  LetterBoundedFamily(const Tpda& a, const BoundedExpression& b);
  std::optional<ChainMember> next();

 private:
  Tpda a_;
  BoundedExpression b_;
  std::vector<uint32_t> advance_;
  bool exhausted_ = false;
};

/// Whether x is (verbatim) one of the machines LetterBoundedFamily(a,b)
/// yields; recovers the chain from x instead of enumerating the family.
bool letter_bounded_member(const Tpda& a, const BoundedExpression& b,
                           const Tpda& x);

struct DecisionConfig {
  enum class Mode { Bounded, ExportSmt };
  Mode mode = Mode::Bounded;
  uint64_t box = 4;
  /// Route letter-bounded expressions through the chain family.
  bool letter_bounded_auto = false;
  /// Chains tried before falling back to the monolithic formula.
  uint64_t chain_cap = 64;
  std::string smt_logic = "LIA";
};

struct DecisionRun {
  EmptinessVerdict verdict;
  PresburgerFormula psi;  // the formula that was solved or exported
  std::optional<PipelineArtifacts> artifacts;  // monolithic route only
  size_t chains_tried = 0;
  std::string smt;  // script text in export mode
};

DecisionRun run_decision(const Tpda& m, const BoundedExpression& w,
                         const DecisionConfig& config);

/// Bounded mode searches [0,box]^n and re-verifies any witness against the
/// exact membership oracle (VerificationMismatch if the machine disagrees);
/// export mode returns Unknown alongside the SMT-LIB script.
EmptinessVerdict decide_emptiness(const Tpda& m, const BoundedExpression& w,
                                  const DecisionConfig& config);

/// Re-checks an external solver model: sat models must name the segment
/// counters x1..xn (missing ones default to 0) and are replayed through the
/// membership oracle; unsat yields EmptyProvedExternally.
EmptinessVerdict verify_external_model(const Tpda& m,
                                       const BoundedExpression& w, bool sat,
                                       const std::map<std::string, uint64_t>& values);

}  // namespace mhb

#endif
