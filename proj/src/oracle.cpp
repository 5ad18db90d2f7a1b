#include "mhb/oracle.hpp"

#include <functional>

namespace mhb {

void for_each_sum_lex(
    size_t n, uint64_t box,
    const std::function<bool(const std::vector<uint64_t>&)>& visit) {
  if (n == 0) {
    std::vector<uint64_t> empty;
    visit(empty);
    return;
  }
  std::vector<uint64_t> k(n, 0);
  bool stop = false;
  // Within one total sum, assign positions left to right from the smallest
  // feasible value: that is exactly lexicographic order.
  std::function<void(size_t, uint64_t)> assign = [&](size_t pos,
                                                     uint64_t rest) {
    if (stop) return;
    if (pos + 1 == n) {
      if (rest > box) return;
      k[pos] = rest;
      if (!visit(k)) stop = true;
      return;
    }
    uint64_t tail_cap = box * (n - pos - 1);
    uint64_t lo = rest > tail_cap ? rest - tail_cap : 0;
    uint64_t hi = std::min(box, rest);
    for (uint64_t v = lo; v <= hi && !stop; ++v) {
      k[pos] = v;
      assign(pos + 1, rest - v);
    }
  };
  for (uint64_t s = 0; s <= box * n && !stop; ++s) assign(0, s);
}

EmptinessVerdict brute_force_emptiness(const Tpda& m,
                                       const BoundedExpression& w,
                                       uint64_t box) {
  if (!(m.alphabet == w.alphabet))
    fail(ErrorKind::AlphabetMismatch,
         "machine and bounded expression use different alphabets");
  EmptinessVerdict out = EmptinessVerdict::empty_within(box);
  for_each_sum_lex(w.arity(), box, [&](const std::vector<uint64_t>& k) {
    Word word = expand(w, k);
    if (accepts_shared(m, word)) {
      out = EmptinessVerdict::non_empty(k, std::move(word), true);
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace mhb
