#include "mhb/reach.hpp"

#include "mhb/error.hpp"
#include "mhb/pipeline.hpp"

namespace mhb {

ReachRun run_reach(const Machine& m, uint32_t target, const BoundedExpression& w,
                   const ReachConfig& config) {
  Alphabet letters = m.transition_alphabet();
  if (w.alphabet.names() != letters.names())
    fail(ErrorKind::AlphabetMismatch,
         "expression alphabet must be the machine's transition alphabet");
  std::vector<Tpda> family = compile_machine(m, target);
  ReachRun run;
  for (const Tpda& member : family) run.member_sizes.push_back(member.size());
  run.psi = family_emptiness_formula(family, w);
  if (config.mode == ReachConfig::Mode::ExportSmt) {
    run.smt = to_smtlib(run.psi, config.smt_logic);
    run.verdict = EmptinessVerdict::unknown();
    return run;
  }
  SolveResult sol =
      solve_box(run.psi, config.box, derived_inner_bound(run.psi, config.box));
  if (!sol.found) {
    run.verdict = EmptinessVerdict::empty_within(config.box);
    return run;
  }
  Word pi = expand(w, sol.assignment);
  MachineRun replay = run_machine(m, pi);
  if (!replay.feasible || replay.config.state != target)
    fail(ErrorKind::VerificationMismatch,
         "solver witness rejected by the reference interpreter");
  run.verdict = EmptinessVerdict::non_empty(sol.assignment, pi, true);
  return run;
}

EmptinessVerdict bounded_reach(const Machine& m, uint32_t target,
                               const BoundedExpression& w, uint64_t box) {
  ReachConfig config;
  config.box = box;
  return run_reach(m, target, w, config).verdict;
}

EmptinessVerdict cm_bounded_reach(const Machine& m, uint32_t target,
                                  const BoundedExpression& w, uint64_t box) {
  return bounded_reach(m, target, w, box);
}

EmptinessVerdict cfsm_bounded_reach(const Machine& m, uint32_t target,
                                    const BoundedExpression& w, uint64_t box) {
  return bounded_reach(m, target, w, box);
}

EmptinessVerdict mixed_bounded_reach(const Machine& m, uint32_t target,
                                     const BoundedExpression& w, uint64_t box) {
  return bounded_reach(m, target, w, box);
}

}  // namespace mhb
