#ifndef MHB_GEN_HPP
#define MHB_GEN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mhb/bexpr.hpp"
#include "mhb/machine.hpp"
#include "mhb/tpda.hpp"

namespace mhb {

/// CNF in DIMACS convention: literals are ±v with 1 <= v <= vars.
struct Cnf {
  uint32_t vars = 0;
  std::vector<std::vector<int32_t>> clauses;
};

Cnf parse_dimacs(const std::string& text);
std::string serialize_dimacs(const Cnf& cnf);

/// Exhaustive satisfiability over at most 2^20 assignments.
bool brute_force_sat(const Cnf& cnf);

/// A reachability instance produced from a CNF: machine, target state, and a
/// covering expression for the (flat by construction) control graph.
struct GadgetInstance {
  Machine machine;
  uint32_t target = 0;
  BoundedExpression expr;
};

/// Counter-machine reduction: counters {t_x, f_x} per variable and one per
/// clause; each variable gadget commits to exactly one of t_x/f_x, each
/// clause gadget earns credit through zero-tests of complemented literals and
/// spends one credit to exit. The target is reachable iff the CNF is
/// satisfiable (within gadget loop bounds <= 3).
GadgetInstance sat_to_cm(const Cnf& cnf);

/// Communicating-FSM reduction: channels {x_i, x^_i} per variable plus one
/// per clause over messages {0,1}; the x^_i protocol forces exactly one guess
/// loop exactly once, clause loops dequeue-requeue the guess and enqueue
/// clause credit.
GadgetInstance sat_to_cfsm(const Cnf& cnf);

struct InstanceLimits {
  uint32_t states = 5;
  uint32_t heads = 3;
  uint32_t segments = 3;
  uint32_t segment_len = 2;
};

struct RandomInstance {
  Tpda machine;
  BoundedExpression expr;
};

/// Seed-deterministic random machine + expression within the limits; the
/// machine always passes validation.
RandomInstance random_instance(uint64_t seed, const InstanceLimits& limits = {});

/// Seed-deterministic random 3CNF with 1..max_vars variables and
/// 0..max_clauses clauses of exactly three literals.
Cnf random_cnf(uint64_t seed, uint32_t max_vars, uint32_t max_clauses);

}  // namespace mhb

#endif
