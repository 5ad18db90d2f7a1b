#ifndef MHB_VERDICT_HPP
#define MHB_VERDICT_HPP

#include <cstdint>
#include <vector>

#include "mhb/alphabet.hpp"

namespace mhb {

/// Outcome of an emptiness query over a bounded expression. NonEmpty carries
/// the exponent witness and the expanded word; verified means the word was
/// re-checked against the machine's exact membership oracle.
struct EmptinessVerdict {
  enum class Kind { NonEmpty, EmptyWithinBound, EmptyProvedExternally, Unknown };
  Kind kind = Kind::Unknown;
  std::vector<uint64_t> exponents;
  Word word;
  bool verified = false;
  uint64_t bound = 0;  // the searched box for EmptyWithinBound

  static EmptinessVerdict non_empty(std::vector<uint64_t> k, Word w,
                                    bool checked) {
    EmptinessVerdict v;
    v.kind = Kind::NonEmpty;
    v.exponents = std::move(k);
    v.word = std::move(w);
    v.verified = checked;
    return v;
  }
  static EmptinessVerdict empty_within(uint64_t box) {
    EmptinessVerdict v;
    v.kind = Kind::EmptyWithinBound;
    v.bound = box;
    return v;
  }
  static EmptinessVerdict empty_externally() {
    EmptinessVerdict v;
    v.kind = Kind::EmptyProvedExternally;
    return v;
  }
  static EmptinessVerdict unknown() { return EmptinessVerdict{}; }
};

}  // namespace mhb

#endif
