#ifndef MHB_REACH_HPP
#define MHB_REACH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mhb/bexpr.hpp"
#include "mhb/machine.hpp"
#include "mhb/presburger.hpp"
#include "mhb/verdict.hpp"

namespace mhb {

struct ReachConfig {
  enum class Mode { Bounded, ExportSmt };
  Mode mode = Mode::Bounded;
  uint64_t box = 4;
  std::string smt_logic = "LIA";
};

struct ReachRun {
  EmptinessVerdict verdict;
  PresburgerFormula psi;           // conjunction over the compiled family
  std::vector<size_t> member_sizes;
  std::string smt;                 // ExportSmt only
};

/// Bounded reachability of `target` modulo the expression: compiles the
/// checker family, solves the family formula over [0,box]^n and replays any
/// witness under the reference interpreter, which must end at `target`
/// (VerificationMismatch otherwise).
ReachRun run_reach(const Machine& m, uint32_t target, const BoundedExpression& w,
                   const ReachConfig& config = {});

EmptinessVerdict bounded_reach(const Machine& m, uint32_t target,
                               const BoundedExpression& w, uint64_t box);
EmptinessVerdict cm_bounded_reach(const Machine& m, uint32_t target,
                                  const BoundedExpression& w, uint64_t box);
EmptinessVerdict cfsm_bounded_reach(const Machine& m, uint32_t target,
                                    const BoundedExpression& w, uint64_t box);
EmptinessVerdict mixed_bounded_reach(const Machine& m, uint32_t target,
                                     const BoundedExpression& w, uint64_t box);

}  // namespace mhb

#endif
