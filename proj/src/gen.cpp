#include "mhb/gen.hpp"

#include <random>
#include <sstream>

#include "mhb/error.hpp"

namespace mhb {

Cnf parse_dimacs(const std::string& text) {
  Cnf cnf;
  bool header = false;
  size_t declared_clauses = 0;
  std::vector<int32_t> clause;
  bool in_clause = false;
  std::istringstream lines(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    std::istringstream in(line);
    std::string first;
    if (!(in >> first)) continue;
    if (first == "c") continue;
    std::string where = "line " + std::to_string(lineno);
    if (first == "p") {
      std::string kind;
      long long vars = -1, clauses = -1;
      if (header || !(in >> kind >> vars >> clauses) || kind != "cnf" ||
          vars < 0 || clauses < 0)
        fail(ErrorKind::MalformedCnf, "bad problem line at " + where);
      cnf.vars = static_cast<uint32_t>(vars);
      declared_clauses = static_cast<size_t>(clauses);
      header = true;
      continue;
    }
    if (!header)
      fail(ErrorKind::MalformedCnf, "clause before the problem line at " + where);
    in.clear();
    in.str(line);
    int64_t lit;
    while (in >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(clause);
        clause.clear();
        in_clause = false;
      } else {
        if (lit > cnf.vars || -lit > cnf.vars)
          fail(ErrorKind::MalformedCnf,
               "literal " + std::to_string(lit) + " out of range at " + where);
        clause.push_back(static_cast<int32_t>(lit));
        in_clause = true;
      }
    }
    if (!in.eof())
      fail(ErrorKind::MalformedCnf, "non-integer literal at " + where);
  }
  if (!header) fail(ErrorKind::MalformedCnf, "missing problem line");
  if (in_clause) fail(ErrorKind::MalformedCnf, "unterminated clause at end of input");
  if (cnf.clauses.size() != declared_clauses)
    fail(ErrorKind::MalformedCnf,
         "problem line declares " + std::to_string(declared_clauses) +
             " clauses, found " + std::to_string(cnf.clauses.size()));
  return cnf;
}

std::string serialize_dimacs(const Cnf& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int32_t lit : clause) out << lit << ' ';
    out << "0\n";
  }
  return out.str();
}

bool brute_force_sat(const Cnf& cnf) {
  if (cnf.vars > 20)
    fail(ErrorKind::Overflow, "brute-force satisfiability limited to 20 variables");
  for (uint64_t bits = 0; bits < (uint64_t{1} << cnf.vars); ++bits) {
    bool all = true;
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      for (int32_t lit : clause) {
        uint32_t v = static_cast<uint32_t>(lit > 0 ? lit : -lit);
        bool value = (bits >> (v - 1)) & 1;
        if ((lit > 0) == value) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

namespace {

void check_3cnf(const Cnf& cnf) {
  for (size_t j = 0; j < cnf.clauses.size(); ++j) {
    if (cnf.clauses[j].size() > 3)
      fail(ErrorKind::MalformedCnf,
           "clause " + std::to_string(j + 1) + " has more than 3 literals");
    for (int32_t lit : cnf.clauses[j]) {
      int64_t v = lit > 0 ? lit : -static_cast<int64_t>(lit);
      if (lit == 0 || v > static_cast<int64_t>(cnf.vars))
        fail(ErrorKind::MalformedCnf,
             "literal out of range in clause " + std::to_string(j + 1));
    }
  }
}

GadgetInstance finish_gadget(Machine machine, uint32_t target) {
  // A transition-free machine (empty CNF) still needs a nonempty covering
  // expression; one stutter step at the start keeps the language unchanged.
  if (machine.transitions.empty())
    machine.add_transition(machine.initial, 0, MachineOp::nop(), machine.initial, {0});
  GadgetInstance out;
  out.machine = std::move(machine);
  out.target = target;
  out.expr = flat_bounded_expression(out.machine);
  return out;
}

}  // namespace

GadgetInstance sat_to_cm(const Cnf& cnf) {
  check_3cnf(cnf);
  Machine m;
  m.stack.add(".");
  for (uint32_t i = 1; i <= cnf.vars; ++i) {
    m.counters.push_back("t" + std::to_string(i));
    m.counters.push_back("f" + std::to_string(i));
  }
  for (size_t j = 1; j <= cnf.clauses.size(); ++j)
    m.counters.push_back("c" + std::to_string(j));
  auto t_of = [](uint32_t v) { return 2 * (v - 1); };
  auto f_of = [](uint32_t v) { return 2 * (v - 1) + 1; };
  uint32_t c_base = 2 * cnf.vars;

  uint32_t cur = m.add_state("q0");
  for (uint32_t i = 1; i <= cnf.vars; ++i) {
    std::string x = "x" + std::to_string(i);
    uint32_t head = m.add_state(x);
    m.add_transition(cur, 0, MachineOp::inc(f_of(i)), head, {0});
    uint32_t mid = m.add_state(x + "m");
    m.add_transition(head, 0, MachineOp::inc(t_of(i)), mid, {0});
    m.add_transition(mid, 0, MachineOp::dec(f_of(i)), head, {0});
    uint32_t next = m.add_state("q" + std::to_string(i));
    m.add_transition(head, 0, MachineOp::nop(), next, {0});
    cur = next;
  }
  for (size_t j = 0; j < cnf.clauses.size(); ++j) {
    const auto& clause = cnf.clauses[j];
    uint32_t credit = c_base + static_cast<uint32_t>(j);
    std::string k = "k" + std::to_string(j + 1);
    for (size_t li = 0; li < clause.size(); ++li) {
      int32_t lit = clause[li];
      uint32_t v = static_cast<uint32_t>(lit > 0 ? lit : -lit);
      // A satisfied literal leaves its complementary counter at zero.
      uint32_t complement = lit > 0 ? f_of(v) : t_of(v);
      uint32_t mid = m.add_state(k + "l" + std::to_string(li + 1));
      m.add_transition(cur, 0, MachineOp::zero(complement), mid, {0});
      m.add_transition(mid, 0, MachineOp::inc(credit), cur, {0});
      if (li + 1 < clause.size()) {
        uint32_t next = m.add_state(k + "b" + std::to_string(li + 1));
        m.add_transition(cur, 0, MachineOp::nop(), next, {0});
        cur = next;
      }
    }
    uint32_t done = m.add_state(k + "e");
    m.add_transition(cur, 0, MachineOp::dec(credit), done, {0});
    cur = done;
  }
  return finish_gadget(std::move(m), cur);
}

GadgetInstance sat_to_cfsm(const Cnf& cnf) {
  check_3cnf(cnf);
  Machine m;
  m.stack.add(".");
  Sym zero = m.messages.add("0");
  Sym one = m.messages.add("1");
  for (uint32_t i = 1; i <= cnf.vars; ++i) m.channels.push_back("x" + std::to_string(i));
  for (uint32_t i = 1; i <= cnf.vars; ++i) m.channels.push_back("xh" + std::to_string(i));
  for (size_t j = 1; j <= cnf.clauses.size(); ++j)
    m.channels.push_back("c" + std::to_string(j));
  auto x_of = [](uint32_t v) { return v - 1; };
  auto xh_of = [&](uint32_t v) { return cnf.vars + v - 1; };
  uint32_t c_base = 2 * cnf.vars;

  uint32_t cur = m.add_state("q0");
  for (uint32_t i = 1; i <= cnf.vars; ++i) {
    std::string x = "x" + std::to_string(i);
    uint32_t guess_false = m.add_state(x + "a");
    m.add_transition(cur, 0, MachineOp::send(xh_of(i), zero), guess_false, {0});
    uint32_t f1 = m.add_state(x + "f1");
    uint32_t f2 = m.add_state(x + "f2");
    m.add_transition(guess_false, 0, MachineOp::send(x_of(i), zero), f1, {0});
    m.add_transition(f1, 0, MachineOp::recv(xh_of(i), zero), f2, {0});
    m.add_transition(f2, 0, MachineOp::send(xh_of(i), one), guess_false, {0});
    uint32_t guess_true = m.add_state(x + "b");
    m.add_transition(guess_false, 0, MachineOp::nop(), guess_true, {0});
    uint32_t t1 = m.add_state(x + "t1");
    uint32_t t2 = m.add_state(x + "t2");
    m.add_transition(guess_true, 0, MachineOp::send(x_of(i), one), t1, {0});
    m.add_transition(t1, 0, MachineOp::recv(xh_of(i), zero), t2, {0});
    m.add_transition(t2, 0, MachineOp::send(xh_of(i), one), guess_true, {0});
    uint32_t next = m.add_state("q" + std::to_string(i));
    m.add_transition(guess_true, 0, MachineOp::recv(xh_of(i), one), next, {0});
    cur = next;
  }
  for (size_t j = 0; j < cnf.clauses.size(); ++j) {
    const auto& clause = cnf.clauses[j];
    uint32_t credit = c_base + static_cast<uint32_t>(j);
    std::string k = "k" + std::to_string(j + 1);
    for (size_t li = 0; li < clause.size(); ++li) {
      int32_t lit = clause[li];
      uint32_t v = static_cast<uint32_t>(lit > 0 ? lit : -lit);
      Sym bit = lit > 0 ? one : zero;
      uint32_t a = m.add_state(k + "l" + std::to_string(li + 1) + "a");
      uint32_t b = m.add_state(k + "l" + std::to_string(li + 1) + "b");
      // Dequeue-requeue keeps the guess intact while earning clause credit.
      m.add_transition(cur, 0, MachineOp::recv(x_of(v), bit), a, {0});
      m.add_transition(a, 0, MachineOp::send(x_of(v), bit), b, {0});
      m.add_transition(b, 0, MachineOp::send(credit, one), cur, {0});
      if (li + 1 < clause.size()) {
        uint32_t next = m.add_state(k + "b" + std::to_string(li + 1));
        m.add_transition(cur, 0, MachineOp::nop(), next, {0});
        cur = next;
      }
    }
    uint32_t done = m.add_state(k + "e");
    m.add_transition(cur, 0, MachineOp::recv(credit, one), done, {0});
    cur = done;
  }
  return finish_gadget(std::move(m), cur);
}

RandomInstance random_instance(uint64_t seed, const InstanceLimits& limits) {
  if (limits.states == 0 || limits.heads == 0 || limits.segments == 0 ||
      limits.segment_len == 0)
    fail(ErrorKind::MalformedModel, "instance limits must be positive");
  std::mt19937_64 rng(seed);
  auto pick = [&](uint64_t lo, uint64_t hi) { return lo + rng() % (hi - lo + 1); };

  RandomInstance out;
  Tpda& p = out.machine;
  static const char* kLetters[] = {"a", "b", "c"};
  uint64_t letters = pick(1, 3);
  for (uint64_t i = 0; i < letters; ++i) p.alphabet.add(kLetters[i]);
  static const char* kStack[] = {"Z", "A"};
  uint64_t stack = pick(1, 2);
  for (uint64_t i = 0; i < stack; ++i) p.stack.add(kStack[i]);
  p.heads = static_cast<uint32_t>(pick(1, limits.heads));
  uint64_t states = pick(1, limits.states);
  for (uint64_t s = 0; s < states; ++s)
    p.add_state("s" + std::to_string(s + 1),
                static_cast<uint32_t>(pick(0, p.heads - 1)), pick(0, 3) == 0);
  p.initial = 0;
  p.initial_stack = 0;
  uint64_t count = pick(states, 3 * states);
  for (uint64_t t = 0; t < count; ++t) {
    uint32_t src = static_cast<uint32_t>(pick(0, states - 1));
    uint32_t pop = static_cast<uint32_t>(pick(0, stack - 1));
    uint64_t kind = pick(0, 9);
    ReadLabel read = kind < 2   ? ReadLabel::eps()
                     : kind < 3 ? ReadLabel::end()
                                : ReadLabel::letter(static_cast<Sym>(pick(0, letters - 1)));
    uint32_t dst = static_cast<uint32_t>(pick(0, states - 1));
    std::vector<uint32_t> push;
    uint64_t len = pick(0, 2);
    for (uint64_t i = 0; i < len; ++i)
      push.push_back(static_cast<uint32_t>(pick(0, stack - 1)));
    p.add_transition(src, pop, read, dst, push);
  }
  tpda_validate(p);

  out.expr.alphabet = p.alphabet;
  uint64_t segments = pick(1, limits.segments);
  for (uint64_t i = 0; i < segments; ++i) {
    Word seg;
    uint64_t len = pick(1, limits.segment_len);
    for (uint64_t j = 0; j < len; ++j)
      seg.push_back(static_cast<Sym>(pick(0, letters - 1)));
    out.expr.segments.push_back(seg);
  }
  return out;
}

Cnf random_cnf(uint64_t seed, uint32_t max_vars, uint32_t max_clauses) {
  if (max_vars == 0) fail(ErrorKind::MalformedCnf, "need at least one variable");
  std::mt19937_64 rng(seed);
  auto pick = [&](uint64_t lo, uint64_t hi) { return lo + rng() % (hi - lo + 1); };
  Cnf cnf;
  cnf.vars = static_cast<uint32_t>(pick(1, max_vars));
  uint64_t clauses = pick(0, max_clauses);
  for (uint64_t j = 0; j < clauses; ++j) {
    std::vector<int32_t> clause;
    for (int li = 0; li < 3; ++li) {
      int32_t v = static_cast<int32_t>(pick(1, cnf.vars));
      clause.push_back(pick(0, 1) ? v : -v);
    }
    cnf.clauses.push_back(clause);
  }
  return cnf;
}

}  // namespace mhb
