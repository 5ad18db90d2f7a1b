#ifndef MHB_ORACLE_HPP
#define MHB_ORACLE_HPP

#include <cstdint>
#include <functional>

#include "mhb/bexpr.hpp"
#include "mhb/tpda.hpp"
#include "mhb/verdict.hpp"

namespace mhb {

/// Exhaustive reference decision: enumerates every exponent vector in
/// [0,box]^n ordered by sum then lexicographically and tests the expanded
/// word with the exact membership oracle. Deliberately independent of the
/// formula pipeline (enforced at build level), so its verdicts can anchor
/// tests of that pipeline.
EmptinessVerdict brute_force_emptiness(const Tpda& m,
                                       const BoundedExpression& w,
                                       uint64_t box);

/// Calls `visit` for every vector in [0,box]^n, ordered by sum then
/// lexicographically, until visit returns false. Shared enumeration order for
/// oracle sweeps and witness-minimality checks.
void for_each_sum_lex(size_t n, uint64_t box,
                      const std::function<bool(const std::vector<uint64_t>&)>& visit);

}  // namespace mhb

#endif
