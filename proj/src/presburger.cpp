#include "mhb/presburger.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mhb/cfg.hpp"

namespace mhb {

namespace {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::Overflow, "term constant overflow");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::Overflow, "term constant overflow");
  return r;
}

}  // namespace

TermPtr PTerm::constant(int64_t v) {
  auto t = std::make_shared<PTerm>();
  t->kind = Kind::Const;
  t->value = v;
  return t;
}

TermPtr PTerm::variable(std::string name) {
  if (name.empty()) fail(ErrorKind::MalformedExpression, "empty variable name");
  auto t = std::make_shared<PTerm>();
  t->kind = Kind::Var;
  t->var = std::move(name);
  return t;
}

TermPtr PTerm::add(TermPtr a, TermPtr b) {
  auto t = std::make_shared<PTerm>();
  t->kind = Kind::Add;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}

TermPtr PTerm::sub(TermPtr a, TermPtr b) {
  auto t = std::make_shared<PTerm>();
  t->kind = Kind::Sub;
  t->lhs = std::move(a);
  t->rhs = std::move(b);
  return t;
}

FormulaPtr PFormula::truth(bool value) {
  auto f = std::make_shared<PFormula>();
  f->kind = value ? Kind::True : Kind::False;
  return f;
}

FormulaPtr PFormula::atom_rel(TermPtr t1, Rel rel, TermPtr t2) {
  auto f = std::make_shared<PFormula>();
  f->kind = Kind::Atom;
  f->rel = rel;
  f->atom = PTerm::sub(std::move(t1), std::move(t2));
  return f;
}

FormulaPtr PFormula::conj(std::vector<FormulaPtr> children) {
  if (children.empty()) return truth(true);
  if (children.size() == 1) return children[0];
  auto f = std::make_shared<PFormula>();
  f->kind = Kind::And;
  f->children = std::move(children);
  return f;
}

FormulaPtr PFormula::disj(std::vector<FormulaPtr> children) {
  if (children.empty()) return truth(false);
  if (children.size() == 1) return children[0];
  auto f = std::make_shared<PFormula>();
  f->kind = Kind::Or;
  f->children = std::move(children);
  return f;
}

FormulaPtr PFormula::exists(std::string var, FormulaPtr body) {
  auto f = std::make_shared<PFormula>();
  f->kind = Kind::Exists;
  f->var = std::move(var);
  f->body = std::move(body);
  return f;
}

FormulaPtr PFormula::forall(std::string var, FormulaPtr body) {
  auto f = std::make_shared<PFormula>();
  f->kind = Kind::Forall;
  f->var = std::move(var);
  f->body = std::move(body);
  return f;
}

namespace {

size_t term_nodes(const TermPtr& t) {
  if (!t) return 0;
  return 1 + term_nodes(t->lhs) + term_nodes(t->rhs);
}

size_t formula_nodes(const FormulaPtr& f) {
  if (!f) return 0;
  size_t n = 1 + term_nodes(f->atom) + formula_nodes(f->body);
  for (const auto& c : f->children) n += formula_nodes(c);
  return n;
}

void count_quantifiers(const FormulaPtr& f, size_t& exists, size_t& forall) {
  if (!f) return;
  if (f->kind == PFormula::Kind::Exists) ++exists;
  if (f->kind == PFormula::Kind::Forall) ++forall;
  count_quantifiers(f->body, exists, forall);
  for (const auto& c : f->children) count_quantifiers(c, exists, forall);
}

}  // namespace

size_t PresburgerFormula::node_count() const { return formula_nodes(root); }

size_t PresburgerFormula::existential_count() const {
  size_t e = 0, a = 0;
  count_quantifiers(root, e, a);
  return e;
}

bool PresburgerFormula::has_forall() const {
  size_t e = 0, a = 0;
  count_quantifiers(root, e, a);
  return a > 0;
}

uint64_t derived_inner_bound(const PresburgerFormula& f, uint64_t box) {
  uint64_t n = f.free_vars.size();
  return (box * n + 1) * (f.existential_count() + 2);
}

namespace {

FormulaPtr negate_node(const FormulaPtr& f) {
  auto g = std::make_shared<PFormula>();
  switch (f->kind) {
    case PFormula::Kind::True:
      g->kind = PFormula::Kind::False;
      break;
    case PFormula::Kind::False:
      g->kind = PFormula::Kind::True;
      break;
    case PFormula::Kind::Atom: {
      g->kind = PFormula::Kind::Atom;
      g->atom = f->atom;
      switch (f->rel) {
        case Rel::Eq: g->rel = Rel::Ne; break;
        case Rel::Ne: g->rel = Rel::Eq; break;
        case Rel::Le: g->rel = Rel::Gt; break;
        case Rel::Lt: g->rel = Rel::Ge; break;
        case Rel::Ge: g->rel = Rel::Lt; break;
        case Rel::Gt: g->rel = Rel::Le; break;
      }
      break;
    }
    case PFormula::Kind::And:
    case PFormula::Kind::Or: {
      g->kind = f->kind == PFormula::Kind::And ? PFormula::Kind::Or
                                               : PFormula::Kind::And;
      for (const auto& c : f->children) g->children.push_back(negate_node(c));
      break;
    }
    case PFormula::Kind::Exists:
    case PFormula::Kind::Forall: {
      g->kind = f->kind == PFormula::Kind::Exists ? PFormula::Kind::Forall
                                                  : PFormula::Kind::Exists;
      g->var = f->var;
      g->body = negate_node(f->body);
      break;
    }
  }
  return g;
}

}  // namespace

PresburgerFormula negate(const PresburgerFormula& f) {
  if (!f.root) fail(ErrorKind::MalformedExpression, "formula has no root");
  return PresburgerFormula{negate_node(f.root), f.free_vars};
}

// --- constraint search over a finite box ------------------------------------
//
// Quantifier-free skeleton with linear atoms; bounded existentials become
// additional box variables, which is equivalent to instantiating them over
// [0, bound] but scales to the formulas the pipeline produces. The search is
// interval propagation plus branching; branching fixes free variables first,
// in declaration order theneach ascending, so the first model found matches
// plain enumeration order.

namespace {

struct LinAtom {
  std::vector<std::pair<uint32_t, int64_t>> terms;  // (variable, coefficient)
  int64_t constant = 0;
  Rel rel = Rel::Eq;  // Eq / Ne / Le / Ge after normalization
};

struct SkeletonNode {
  enum class Kind { True, False, Atom, And, Or };
  Kind kind = Kind::True;
  uint32_t atom = 0;
  std::vector<uint32_t> children;
};

struct Compiled {
  std::vector<std::string> var_names;
  std::vector<uint64_t> var_hi;  // initial upper bound per variable
  std::vector<LinAtom> atoms;
  std::vector<SkeletonNode> nodes;
  uint32_t root = 0;
  uint32_t free_count = 0;  // variables 0..free_count-1 are the free ones
};

class Compiler {
 public:
  Compiler(uint64_t inner_bound) : inner_bound_(inner_bound) {}

  Compiled run(const PresburgerFormula& f,
               const std::vector<uint64_t>& free_hi) {
    for (size_t i = 0; i < f.free_vars.size(); ++i) {
      const std::string& name = f.free_vars[i];
      if (scope_.count(name))
        fail(ErrorKind::MalformedExpression, "duplicate free variable " + name);
      uint32_t v = new_var(name, free_hi[i]);
      scope_[name] = v;
    }
    out_.free_count = static_cast<uint32_t>(f.free_vars.size());
    out_.root = walk(f.root);
    return std::move(out_);
  }

 private:
  uint32_t new_var(const std::string& name, uint64_t hi) {
    out_.var_names.push_back(name);
    out_.var_hi.push_back(hi);
    return static_cast<uint32_t>(out_.var_names.size() - 1);
  }

  uint32_t add_node(SkeletonNode node) {
    out_.nodes.push_back(std::move(node));
    return static_cast<uint32_t>(out_.nodes.size() - 1);
  }

  void linearize(const TermPtr& t, int64_t sign,
                 std::unordered_map<uint32_t, int64_t>& coeffs,
                 int64_t& constant) {
    switch (t->kind) {
      case PTerm::Kind::Const:
        constant = checked_add(constant, checked_mul(sign, t->value));
        break;
      case PTerm::Kind::Var: {
        auto it = scope_.find(t->var);
        if (it == scope_.end())
          fail(ErrorKind::UnassignedVariable, "unbound variable " + t->var);
        coeffs[it->second] = checked_add(coeffs[it->second], sign);
        break;
      }
      case PTerm::Kind::Add:
        linearize(t->lhs, sign, coeffs, constant);
        linearize(t->rhs, sign, coeffs, constant);
        break;
      case PTerm::Kind::Sub:
        linearize(t->lhs, sign, coeffs, constant);
        linearize(t->rhs, -sign, coeffs, constant);
        break;
    }
  }

  uint32_t walk(const FormulaPtr& f) {
    switch (f->kind) {
      case PFormula::Kind::True:
        return add_node({SkeletonNode::Kind::True, 0, {}});
      case PFormula::Kind::False:
        return add_node({SkeletonNode::Kind::False, 0, {}});
      case PFormula::Kind::Atom: {
        LinAtom atom;
        std::unordered_map<uint32_t, int64_t> coeffs;
        linearize(f->atom, 1, coeffs, atom.constant);
        for (const auto& [v, c] : coeffs)
          if (c != 0) atom.terms.push_back({v, c});
        std::sort(atom.terms.begin(), atom.terms.end());
        switch (f->rel) {
          case Rel::Eq: atom.rel = Rel::Eq; break;
          case Rel::Ne: atom.rel = Rel::Ne; break;
          case Rel::Le: atom.rel = Rel::Le; break;
          case Rel::Ge: atom.rel = Rel::Ge; break;
          case Rel::Lt:  // t < 0  <=>  t + 1 <= 0
            atom.rel = Rel::Le;
            atom.constant = checked_add(atom.constant, 1);
            break;
          case Rel::Gt:  // t > 0  <=>  t - 1 >= 0
            atom.rel = Rel::Ge;
            atom.constant = checked_add(atom.constant, -1);
            break;
        }
        out_.atoms.push_back(std::move(atom));
        return add_node({SkeletonNode::Kind::Atom,
                         static_cast<uint32_t>(out_.atoms.size() - 1),
                         {}});
      }
      case PFormula::Kind::And:
      case PFormula::Kind::Or: {
        SkeletonNode node;
        node.kind = f->kind == PFormula::Kind::And ? SkeletonNode::Kind::And
                                                   : SkeletonNode::Kind::Or;
        for (const auto& c : f->children) node.children.push_back(walk(c));
        return add_node(std::move(node));
      }
      case PFormula::Kind::Exists: {
        if (scope_.count(f->var))
          fail(ErrorKind::MalformedExpression,
               "variable bound twice on one path: " + f->var);
        uint32_t v = new_var(f->var, inner_bound_);
        scope_[f->var] = v;
        uint32_t body = walk(f->body);
        scope_.erase(f->var);
        return body;
      }
      case PFormula::Kind::Forall:
        fail(ErrorKind::Internal, "universal quantifier in box search");
    }
    fail(ErrorKind::Internal, "unreachable");
  }

  uint64_t inner_bound_;
  Compiled out_;
  std::unordered_map<std::string, uint32_t> scope_;
};

enum class Status : uint8_t { Unknown, Sat, Unsat };

class BoxSolver {
 public:
  // `canonical_frees` pins the free variables first, in declaration order,
  // so the first model is the lexicographically least one; turning it off
  // lets the solver order all variables fail-first, which is considerably
  // faster when only satisfiability matters.
  explicit BoxSolver(const Compiled& c, bool canonical_frees = true)
      : c_(c), canonical_frees_(canonical_frees) {
    lo_.assign(c_.var_hi.size(), 0);
    hi_ = c_.var_hi;
    atoms_ = c_.atoms;
  }

  // Adds sum(free variables) = target as an extra root constraint.
  void require_free_sum(uint64_t target) {
    LinAtom atom;
    for (uint32_t v = 0; v < c_.free_count; ++v) atom.terms.push_back({v, 1});
    atom.constant = checked_mul(-1, static_cast<int64_t>(target));
    atom.rel = Rel::Eq;
    sum_atom_ = static_cast<uint32_t>(atoms_.size());
    atoms_.push_back(std::move(atom));
    has_sum_ = true;
  }

  bool solve(std::vector<uint64_t>* model) {
    const uint32_t nnodes = static_cast<uint32_t>(c_.nodes.size());
    const uint32_t natoms = static_cast<uint32_t>(atoms_.size());
    var_atoms_.assign(lo_.size(), {});
    for (uint32_t a = 0; a < natoms; ++a)
      for (const auto& t : atoms_[a].terms)
        var_atoms_[t.first].push_back({a, t.second});

    // Every atom carries the min/max of its linear form over the current
    // box; bound moves adjust them by the moved term alone, so the status
    // of an atom is always available in constant time.
    minsum_.assign(natoms, 0);
    maxsum_.assign(natoms, 0);
    astat_.assign(natoms, Status::Unknown);
    for (uint32_t a = 0; a < natoms; ++a) {
      int64_t mn = atoms_[a].constant;
      int64_t mx = atoms_[a].constant;
      for (const auto& t : atoms_[a].terms) {
        mn = checked_add(mn, min_contrib(t));
        mx = checked_add(mx, max_contrib(t));
      }
      minsum_[a] = mn;
      maxsum_[a] = mx;
      astat_[a] = atom_status(a);
    }

    // The skeleton is a tree (children precede parents in the node array),
    // so status changes bubble up a single parent chain.
    parent_.assign(nnodes, UINT32_MAX);
    for (uint32_t n = 0; n < nnodes; ++n)
      for (uint32_t ch : c_.nodes[n].children) parent_[ch] = n;
    anode_.assign(natoms, UINT32_MAX);
    for (uint32_t n = 0; n < nnodes; ++n)
      if (c_.nodes[n].kind == SkeletonNode::Kind::Atom)
        anode_[c_.nodes[n].atom] = n;
    conj_of_.assign(nnodes, UINT32_MAX);
    if (c_.nodes[c_.root].kind == SkeletonNode::Kind::And) {
      const auto& top = c_.nodes[c_.root].children;
      for (uint32_t i = 0; i < top.size(); ++i) stamp_conjunct(top[i], i);
    }

    forced_.assign(nnodes, -1);
    nstat_.assign(nnodes, Status::Unknown);
    for (uint32_t n = 0; n < nnodes; ++n) nstat_[n] = node_status(n);

    rq_.assign(nnodes, false);
    nqueued_.assign(nnodes, false);
    pqueued_.assign(natoms, false);
    trail_.clear();
    ftrail_.clear();
    rtrail_.clear();
    plist_.clear();
    dqueue_.clear();
    open_.clear();
    groups_.clear();
    conjunct_vars_.clear();

    // Root conjuncts that share only free variables become independent
    // subproblems once the frees are pinned; group the rest by shared
    // quantified variables.
    if (c_.nodes[c_.root].kind == SkeletonNode::Kind::And) {
      const auto& top = c_.nodes[c_.root].children;
      conjunct_vars_.assign(top.size(), {});
      std::vector<uint32_t> owner(lo_.size(), UINT32_MAX);
      std::vector<uint32_t> rep(top.size());
      for (uint32_t i = 0; i < top.size(); ++i) rep[i] = i;
      std::function<uint32_t(uint32_t)> find = [&](uint32_t x) {
        while (rep[x] != x) x = rep[x] = rep[rep[x]];
        return x;
      };
      for (uint32_t i = 0; i < top.size(); ++i) {
        collect_subtree_vars(top[i], conjunct_vars_[i]);
        std::sort(conjunct_vars_[i].begin(), conjunct_vars_[i].end());
        conjunct_vars_[i].erase(
            std::unique(conjunct_vars_[i].begin(), conjunct_vars_[i].end()),
            conjunct_vars_[i].end());
        for (uint32_t v : conjunct_vars_[i]) {
          if (v < c_.free_count) continue;
          if (owner[v] == UINT32_MAX)
            owner[v] = i;
          else
            rep[find(i)] = find(owner[v]);
        }
      }
      std::unordered_map<uint32_t, size_t> slot;
      for (uint32_t i = 0; i < top.size(); ++i) {
        uint32_t r = find(i);
        auto it = slot.find(r);
        if (it == slot.end()) {
          slot.emplace(r, groups_.size());
          groups_.push_back({i});
        } else {
          groups_[it->second].push_back(i);
        }
      }
    }

    // Seed the required frontier from the root; the sum constraint, having
    // no tree node, is required from the start.
    dqueue_.push_back(c_.root);
    if (has_sum_ && astat_[sum_atom_] == Status::Unknown)
      enqueue_atom(sum_atom_);

    if (!search()) return false;
    if (model) {
      model->assign(lo_.begin(), lo_.begin() + c_.free_count);
    }
    return true;
  }

 private:
  struct TrailEntry {
    uint32_t var;
    bool is_lo;
    uint64_t old_value;
  };

  int64_t min_contrib(const std::pair<uint32_t, int64_t>& t) const {
    return t.second > 0 ? checked_mul(t.second, static_cast<int64_t>(lo_[t.first]))
                        : checked_mul(t.second, static_cast<int64_t>(hi_[t.first]));
  }

  int64_t max_contrib(const std::pair<uint32_t, int64_t>& t) const {
    return t.second > 0 ? checked_mul(t.second, static_cast<int64_t>(hi_[t.first]))
                        : checked_mul(t.second, static_cast<int64_t>(lo_[t.first]));
  }

  Status atom_status(uint32_t a) const {
    int64_t minv = minsum_[a];
    int64_t maxv = maxsum_[a];
    switch (atoms_[a].rel) {
      case Rel::Eq:
        if (minv == 0 && maxv == 0) return Status::Sat;
        if (minv > 0 || maxv < 0) return Status::Unsat;
        return Status::Unknown;
      case Rel::Ne:
        if (minv > 0 || maxv < 0) return Status::Sat;
        if (minv == 0 && maxv == 0) return Status::Unsat;
        return Status::Unknown;
      case Rel::Le:
        if (maxv <= 0) return Status::Sat;
        if (minv > 0) return Status::Unsat;
        return Status::Unknown;
      case Rel::Ge:
        if (minv >= 0) return Status::Sat;
        if (maxv < 0) return Status::Unsat;
        return Status::Unknown;
      default:
        fail(ErrorKind::Internal, "unnormalized relation");
    }
  }

  bool is_req_atom(uint32_t a) const {
    if (has_sum_ && a == sum_atom_) return true;
    uint32_t n = anode_[a];
    return n != UINT32_MAX && rq_[n];
  }

  void enqueue_atom(uint32_t a) {
    if (!pqueued_[a]) {
      pqueued_[a] = true;
      plist_.push_back(a);
    }
  }

  void dirty(uint32_t n) {
    if (!nqueued_[n]) {
      nqueued_[n] = true;
      nheap_.push(n);
    }
  }

  // Folds a move of one variable bound into the cached ranges of the atoms
  // mentioning it. `tighten` is false when undoing: relaxed bounds never
  // enable further pruning, so no propagation is scheduled.
  void apply_lo(uint32_t v, uint64_t oldv, uint64_t newv, bool tighten) {
    int64_t d = static_cast<int64_t>(newv) - static_cast<int64_t>(oldv);
    for (const auto& [a, coeff] : var_atoms_[v]) {
      int64_t step = checked_mul(coeff, d);
      if (coeff > 0)
        minsum_[a] = checked_add(minsum_[a], step);
      else
        maxsum_[a] = checked_add(maxsum_[a], step);
      after_shift(a, tighten);
    }
  }

  void apply_hi(uint32_t v, uint64_t oldv, uint64_t newv, bool tighten) {
    int64_t d = static_cast<int64_t>(newv) - static_cast<int64_t>(oldv);
    for (const auto& [a, coeff] : var_atoms_[v]) {
      int64_t step = checked_mul(coeff, d);
      if (coeff > 0)
        maxsum_[a] = checked_add(maxsum_[a], step);
      else
        minsum_[a] = checked_add(minsum_[a], step);
      after_shift(a, tighten);
    }
  }

  void after_shift(uint32_t a, bool tighten) {
    Status s = atom_status(a);
    if (s != astat_[a]) {
      astat_[a] = s;
      if (anode_[a] != UINT32_MAX) dirty(anode_[a]);
    }
    if (tighten && astat_[a] == Status::Unknown && is_req_atom(a))
      enqueue_atom(a);
  }

  bool set_lo(uint32_t v, uint64_t value) {
    if (value <= lo_[v]) return true;
    trail_.push_back({v, true, lo_[v]});
    uint64_t old = lo_[v];
    lo_[v] = value;
    apply_lo(v, old, value, true);
    return lo_[v] <= hi_[v];
  }

  bool set_hi(uint32_t v, uint64_t value) {
    if (value >= hi_[v]) return true;
    trail_.push_back({v, false, hi_[v]});
    uint64_t old = hi_[v];
    hi_[v] = value;
    apply_hi(v, old, value, true);
    return lo_[v] <= hi_[v];
  }

  static int64_t floor_div(int64_t a, int64_t b) {  // b > 0
    int64_t q = a / b;
    if ((a % b != 0) && (a < 0)) --q;
    return q;
  }

  static int64_t ceil_div(int64_t a, int64_t b) {  // b > 0
    int64_t q = a / b;
    if ((a % b != 0) && (a > 0)) ++q;
    return q;
  }

  // Tightens variable bounds so that the linear form can still reach <= 0
  // (ge false) or >= 0 (ge true). Returns false on an emptied domain. The
  // cached range is read live: bounds set for an earlier term of the same
  // atom already sharpen the residual for the later ones.
  bool propagate_ineq(uint32_t ai, bool ge) {
    const LinAtom& a = atoms_[ai];
    for (const auto& t : a.terms) {
      if (!ge) {
        // sum <= 0: c*x <= -rest_min
        int64_t rest_min = checked_add(minsum_[ai], -min_contrib(t));
        int64_t limit = checked_mul(-1, rest_min);
        if (t.second > 0) {
          int64_t ub = floor_div(limit, t.second);
          if (ub < 0) return false;
          if (!set_hi(t.first, static_cast<uint64_t>(ub))) return false;
        } else {
          int64_t lb = ceil_div(checked_mul(-1, limit), -t.second);
          if (lb > 0 && !set_lo(t.first, static_cast<uint64_t>(lb))) return false;
        }
      } else {
        // sum >= 0: c*x >= -rest_max
        int64_t rest_max = checked_add(maxsum_[ai], -max_contrib(t));
        int64_t limit = checked_mul(-1, rest_max);
        if (t.second > 0) {
          int64_t lb = ceil_div(limit, t.second);
          if (lb > 0 && !set_lo(t.first, static_cast<uint64_t>(lb))) return false;
        } else {
          int64_t ub = floor_div(checked_mul(-1, limit), -t.second);
          if (ub < 0) return false;
          if (!set_hi(t.first, static_cast<uint64_t>(ub))) return false;
        }
      }
    }
    return true;
  }

  bool propagate_atom(uint32_t ai) {
    switch (atoms_[ai].rel) {
      case Rel::Le: return propagate_ineq(ai, false);
      case Rel::Ge: return propagate_ineq(ai, true);
      case Rel::Eq:
        return propagate_ineq(ai, false) && propagate_ineq(ai, true);
      case Rel::Ne: return true;  // no interval information
      default: fail(ErrorKind::Internal, "unnormalized relation");
    }
  }

  Status node_status(uint32_t n) const {
    const SkeletonNode& node = c_.nodes[n];
    switch (node.kind) {
      case SkeletonNode::Kind::True: return Status::Sat;
      case SkeletonNode::Kind::False: return Status::Unsat;
      case SkeletonNode::Kind::Atom: return astat_[node.atom];
      case SkeletonNode::Kind::And: {
        Status s = Status::Sat;
        for (uint32_t ch : node.children) {
          if (nstat_[ch] == Status::Unsat) return Status::Unsat;
          if (nstat_[ch] == Status::Unknown) s = Status::Unknown;
        }
        return s;
      }
      case SkeletonNode::Kind::Or: {
        if (forced_[n] >= 0) return nstat_[forced_[n]];
        Status s = Status::Unsat;
        for (uint32_t ch : node.children) {
          if (nstat_[ch] == Status::Sat) return Status::Sat;
          if (nstat_[ch] == Status::Unknown) s = Status::Unknown;
        }
        return s;
      }
    }
    fail(ErrorKind::Internal, "unreachable");
  }

  void stamp_conjunct(uint32_t n, uint32_t idx) {
    conj_of_[n] = idx;
    for (uint32_t ch : c_.nodes[n].children) stamp_conjunct(ch, idx);
  }

  static bool in_list(const std::vector<uint32_t>& g, uint32_t x) {
    return std::find(g.begin(), g.end(), x) != g.end();
  }

  bool in_group(uint32_t n, const std::vector<uint32_t>& g) const {
    return conj_of_[n] != UINT32_MAX && in_list(g, conj_of_[n]);
  }

  // Marks `n` as lying on every remaining solution path and pushes the mark
  // downward: an And requires all unsettled children, an Or only its forced
  // or single surviving child. An Or with a genuine choice left is
  // registered as a branch candidate; the registration is validated at pick
  // time, so later status flips need not maintain the set eagerly.
  void descend_require(uint32_t n) {
    if (rq_[n] || nstat_[n] != Status::Unknown) return;
    rq_[n] = true;
    rtrail_.push_back(n);
    const SkeletonNode& node = c_.nodes[n];
    switch (node.kind) {
      case SkeletonNode::Kind::Atom:
        if (astat_[node.atom] == Status::Unknown) enqueue_atom(node.atom);
        break;
      case SkeletonNode::Kind::And:
        for (uint32_t ch : node.children)
          if (nstat_[ch] == Status::Unknown) descend_require(ch);
        break;
      case SkeletonNode::Kind::Or: {
        if (forced_[n] >= 0) {
          uint32_t ch = static_cast<uint32_t>(forced_[n]);
          if (nstat_[ch] == Status::Unknown) descend_require(ch);
          break;
        }
        uint32_t last = UINT32_MAX;
        int viable = 0;
        for (uint32_t ch : node.children) {
          if (nstat_[ch] == Status::Unsat) continue;
          ++viable;
          last = ch;
          if (viable > 1) break;
        }
        if (viable == 1 && nstat_[last] == Status::Unknown)
          descend_require(last);
        else if (viable > 1)
          open_.insert(n);
        break;
      }
      default:
        break;  // True/False never stay Unknown
    }
  }

  // Re-walks the required frontier at `n` after a force or after a child of
  // a required Or died: the committed or last surviving child becomes
  // required in turn. Stale queue entries (their branch has been undone)
  // are recognized by the cleared mark and skipped.
  void process_require(uint32_t n) {
    if (!rq_[n]) {
      if (n == c_.root) descend_require(n);
      return;
    }
    const SkeletonNode& node = c_.nodes[n];
    if (node.kind != SkeletonNode::Kind::Or) return;
    if (nstat_[n] != Status::Unknown) return;
    if (forced_[n] >= 0) {
      uint32_t ch = static_cast<uint32_t>(forced_[n]);
      if (nstat_[ch] == Status::Unknown) descend_require(ch);
      return;
    }
    uint32_t last = UINT32_MAX;
    int viable = 0;
    for (uint32_t ch : node.children) {
      if (nstat_[ch] == Status::Unsat) continue;
      ++viable;
      last = ch;
      if (viable > 1) return;
    }
    if (viable == 1 && nstat_[last] == Status::Unknown) descend_require(last);
  }

  // Recomputes dirty node statuses; node ids are topological, so draining
  // the min-heap updates children before parents. A child going Unsat under
  // a required open Or queues the Or for re-examination: its last viable
  // child may have just become required.
  void refresh_statuses() {
    while (!nheap_.empty()) {
      uint32_t n = nheap_.top();
      nheap_.pop();
      nqueued_[n] = false;
      Status s = node_status(n);
      if (s == nstat_[n]) continue;
      nstat_[n] = s;
      uint32_t p = parent_[n];
      if (p != UINT32_MAX) {
        dirty(p);
        if (s == Status::Unsat && rq_[p] && forced_[p] < 0 &&
            c_.nodes[p].kind == SkeletonNode::Kind::Or)
          dqueue_.push_back(p);
      }
    }
  }

  // Propagation to fixpoint; returns the combined root status. Statuses,
  // cached ranges and required marks persist across calls: set_lo/set_hi,
  // undo_to and force record exactly what moved, so each round costs time
  // proportional to the change, not to the live formula.
  Status propagate() {
    for (;;) {
      refresh_statuses();
      while (!dqueue_.empty()) {
        uint32_t n = dqueue_.back();
        dqueue_.pop_back();
        process_require(n);
      }
      Status root = nstat_[c_.root];
      if (has_sum_) {
        Status sum = astat_[sum_atom_];
        if (sum == Status::Unsat || root == Status::Unsat) return Status::Unsat;
        if (root == Status::Sat && sum == Status::Sat) return Status::Sat;
      } else {
        if (root != Status::Unknown) return root;
      }
      if (plist_.empty()) return Status::Unknown;
      while (!plist_.empty()) {
        uint32_t a = plist_.back();
        plist_.pop_back();
        pqueued_[a] = false;
        if (astat_[a] != Status::Unknown || !is_req_atom(a)) continue;
        if (!propagate_atom(a)) {
          dqueue_.clear();
          return Status::Unsat;
        }
      }
    }
  }

  void force(uint32_t node, uint32_t child) {
    forced_[node] = static_cast<int32_t>(child);
    ftrail_.push_back(node);
    dirty(node);
    dqueue_.push_back(node);
  }

  void undo_to(size_t mark, size_t fmark, size_t rmark) {
    while (trail_.size() > mark) {
      TrailEntry e = trail_.back();
      trail_.pop_back();
      if (e.is_lo) {
        uint64_t cur = lo_[e.var];
        lo_[e.var] = e.old_value;
        apply_lo(e.var, cur, e.old_value, false);
      } else {
        uint64_t cur = hi_[e.var];
        hi_[e.var] = e.old_value;
        apply_hi(e.var, cur, e.old_value, false);
      }
    }
    while (ftrail_.size() > fmark) {
      uint32_t n = ftrail_.back();
      ftrail_.pop_back();
      forced_[n] = -1;
      dirty(n);
    }
    while (rtrail_.size() > rmark) {
      uint32_t n = rtrail_.back();
      rtrail_.pop_back();
      rq_[n] = false;
      if (c_.nodes[n].kind == SkeletonNode::Kind::Or) open_.erase(n);
    }
  }

  bool branch_on_var(uint32_t v, const std::vector<uint32_t>* group) {
    size_t mark = trail_.size();
    size_t fmark = ftrail_.size();
    size_t rmark = rtrail_.size();
    // Split off the least value first: models are sparse (most counts sit at
    // the lower bound), so v = lo commits in one step instead of a bisection
    // ladder, and leaves are still visited in ascending value order, which
    // keeps the first model canonical.
    uint64_t low = lo_[v];
    if (set_hi(v, low) && search(group)) return true;
    undo_to(mark, fmark, rmark);
    if (set_lo(v, low + 1) && search(group)) return true;
    undo_to(mark, fmark, rmark);
    return false;
  }

  bool frees_pinned() const {
    for (uint32_t v = 0; v < c_.free_count; ++v)
      if (lo_[v] < hi_[v]) return false;
    return true;
  }

  // Searches within `group` (indices into the root conjunct list), or the
  // whole formula when null. A group succeeds once all its conjuncts hold
  // over the remaining box; its tightenings stay on the trail for the
  // following groups.
  bool search(const std::vector<uint32_t>* group = nullptr) {
    Status s = propagate();
    if (s == Status::Unsat) return false;
    if (s == Status::Sat) {
      // A satisfied skeleton admits every point left in the box; report the
      // least corner, which the branching order has made canonical.
      return true;
    }
    const auto& top = c_.nodes[c_.root].children;
    if (group) {
      bool done = true;
      for (uint32_t idx : *group)
        if (nstat_[top[idx]] != Status::Sat) { done = false; break; }
      if (done) return true;
    }

    if (!group) {
      // In canonical mode the free variables are fixed before anything else,
      // in declaration order with the least value first: the first model is
      // then the lexicographically least one. The fail-first mode leaves
      // them to propagation and the ordinary heuristics — refuting an empty
      // intersection corner by corner would enumerate the whole box, so the
      // search has to work on the structure while the frees are still
      // intervals.
      if (canonical_frees_) {
        for (uint32_t v = 0; v < c_.free_count; ++v)
          if (lo_[v] < hi_[v]) return branch_on_var(v, nullptr);
      }
      // Root conjuncts that no longer share an undecided variable are
      // independent subproblems: solve them in sequence, never revisiting a
      // solved one when a later one fails. (Conjuncts only ever share free
      // variables, so this is sound once those are pinned.)
      if (frees_pinned() && groups_.size() > 1) {
        for (const auto& g : groups_)
          if (!search(&g)) return false;
        if (propagate() != Status::Sat)
          fail(ErrorKind::Internal, "independent conjuncts left the root open");
        return true;
      }
    }

    // Case split on a disjunction every remaining model must resolve; take
    // the one with the fewest viable children. Disjunctions go before plain
    // variables: committing one propagates through the whole conjunct, while
    // enumerating an undecided variable point by point decides nothing the
    // structure would not have forced anyway. Registered choices are
    // validated here: a settled, forced or since-collapsed Or is skipped.
    uint32_t pick = UINT32_MAX;
    size_t pick_viable = SIZE_MAX;
    for (uint32_t n : open_) {
      if (group && !in_group(n, *group)) continue;
      if (!rq_[n] || forced_[n] >= 0 || nstat_[n] != Status::Unknown) continue;
      size_t viable = 0;
      for (uint32_t ch : c_.nodes[n].children)
        if (nstat_[ch] != Status::Unsat) ++viable;
      if (viable >= 2 && viable < pick_viable) {
        pick = n;
        pick_viable = viable;
      }
    }
    if (pick != UINT32_MAX) {
      std::vector<uint32_t> viable_children;
      for (uint32_t ch : c_.nodes[pick].children)
        if (nstat_[ch] != Status::Unsat) viable_children.push_back(ch);
      size_t mark = trail_.size();
      size_t fmark = ftrail_.size();
      size_t rmark = rtrail_.size();
      for (uint32_t ch : viable_children) {
        force(pick, ch);
        if (search(group)) return true;
        undo_to(mark, fmark, rmark);
      }
      return false;
    }

    // No disjunction left to resolve: label the narrowest variable of an
    // atom every remaining model must satisfy. The required marks on the
    // trail double as the candidate list.
    uint32_t v = UINT32_MAX;
    uint64_t best_width = 0;
    for (uint32_t n : rtrail_) {
      const SkeletonNode& node = c_.nodes[n];
      if (node.kind != SkeletonNode::Kind::Atom) continue;
      if (group && !in_group(n, *group)) continue;
      if (astat_[node.atom] != Status::Unknown) continue;
      for (const auto& t : atoms_[node.atom].terms) {
        uint32_t u = t.first;
        if (lo_[u] >= hi_[u]) continue;
        uint64_t width = hi_[u] - lo_[u];
        if (v == UINT32_MAX || width < best_width) {
          v = u;
          best_width = width;
        }
      }
    }
    if (v != UINT32_MAX) return branch_on_var(v, group);

    // No required atom either: fall back to any undecided atom in scope,
    // then to any unpinned variable in scope.
    for (uint32_t a = 0; a < atoms_.size() && v == UINT32_MAX; ++a) {
      if (astat_[a] != Status::Unknown) continue;
      uint32_t n = anode_[a];
      if (group && (n == UINT32_MAX || !in_group(n, *group))) continue;
      for (const auto& t : atoms_[a].terms)
        if (lo_[t.first] < hi_[t.first]) { v = t.first; break; }
    }
    if (v == UINT32_MAX) {
      if (group) {
        for (uint32_t idx : *group) {
          for (uint32_t u : conjunct_vars_[idx])
            if (lo_[u] < hi_[u]) { v = u; break; }
          if (v != UINT32_MAX) break;
        }
      } else {
        for (uint32_t u = 0; u < lo_.size(); ++u)
          if (lo_[u] < hi_[u]) { v = u; break; }
      }
    }
    if (v == UINT32_MAX)
      fail(ErrorKind::Internal, "no branch variable in unknown state");
    return branch_on_var(v, group);
  }

  void collect_subtree_vars(uint32_t n, std::vector<uint32_t>& vars) const {
    const SkeletonNode& node = c_.nodes[n];
    if (node.kind == SkeletonNode::Kind::Atom) {
      for (const auto& t : atoms_[node.atom].terms) vars.push_back(t.first);
      return;
    }
    for (uint32_t ch : node.children) collect_subtree_vars(ch, vars);
  }

  const Compiled& c_;
  bool canonical_frees_;
  std::vector<LinAtom> atoms_;  // compiled atoms plus the optional sum atom
  std::vector<std::vector<std::pair<uint32_t, int64_t>>> var_atoms_;
  std::vector<uint64_t> lo_, hi_;
  std::vector<int64_t> minsum_, maxsum_;  // linear form range over the box
  std::vector<TrailEntry> trail_;
  std::vector<Status> astat_, nstat_;
  std::vector<uint32_t> parent_;   // tree parent per node, UINT32_MAX at root
  std::vector<uint32_t> anode_;    // atom -> its node; UINT32_MAX for sum atom
  std::vector<uint32_t> conj_of_;  // node -> root conjunct index
  std::vector<bool> nqueued_;      // node queued in nheap_
  std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> nheap_;
  std::vector<bool> pqueued_;      // atom queued for retightening
  std::vector<uint32_t> plist_;
  std::vector<bool> rq_;           // node lies on every remaining model path
  std::vector<uint32_t> rtrail_;   // required marks, for backtracking
  std::vector<uint32_t> dqueue_;   // nodes whose required frontier moved
  std::set<uint32_t> open_;        // required Ors registered as choices
  std::vector<int32_t> forced_;    // Or node -> committed child, -1 if open
  std::vector<uint32_t> ftrail_;   // forced Or nodes, for backtracking
  std::vector<std::vector<uint32_t>> conjunct_vars_;  // per root conjunct
  std::vector<std::vector<uint32_t>> groups_;  // conjuncts joined by shared
                                               // non-free variables
  uint32_t sum_atom_ = 0;
  bool has_sum_ = false;
};

}  // namespace

namespace {

// Fixing free variables for evaluate(): substitute them as constants so the
// box search only sees the quantified variables.
FormulaPtr substitute(const FormulaPtr& f,
                      const std::unordered_map<std::string, uint64_t>& env);

TermPtr substitute_term(const TermPtr& t,
                        const std::unordered_map<std::string, uint64_t>& env) {
  switch (t->kind) {
    case PTerm::Kind::Const:
      return t;
    case PTerm::Kind::Var: {
      auto it = env.find(t->var);
      if (it == env.end()) return t;
      return PTerm::constant(static_cast<int64_t>(it->second));
    }
    case PTerm::Kind::Add:
      return PTerm::add(substitute_term(t->lhs, env), substitute_term(t->rhs, env));
    case PTerm::Kind::Sub:
      return PTerm::sub(substitute_term(t->lhs, env), substitute_term(t->rhs, env));
  }
  fail(ErrorKind::Internal, "unreachable");
}

FormulaPtr substitute(const FormulaPtr& f,
                      const std::unordered_map<std::string, uint64_t>& env) {
  auto g = std::make_shared<PFormula>(*f);
  g->children.clear();
  switch (f->kind) {
    case PFormula::Kind::Atom:
      g->atom = substitute_term(f->atom, env);
      break;
    case PFormula::Kind::And:
    case PFormula::Kind::Or:
      for (const auto& c : f->children) g->children.push_back(substitute(c, env));
      break;
    case PFormula::Kind::Exists:
    case PFormula::Kind::Forall: {
      if (env.count(f->var)) {
        auto inner = env;
        inner.erase(f->var);
        g->body = substitute(f->body, inner);
      } else {
        g->body = substitute(f->body, env);
      }
      break;
    }
    default:
      break;
  }
  return g;
}

int64_t eval_term(const TermPtr& t,
                  const std::unordered_map<std::string, int64_t>& env) {
  switch (t->kind) {
    case PTerm::Kind::Const:
      return t->value;
    case PTerm::Kind::Var: {
      auto it = env.find(t->var);
      if (it == env.end())
        fail(ErrorKind::UnassignedVariable, "unbound variable " + t->var);
      return it->second;
    }
    case PTerm::Kind::Add:
      return checked_add(eval_term(t->lhs, env), eval_term(t->rhs, env));
    case PTerm::Kind::Sub:
      return checked_add(eval_term(t->lhs, env), -eval_term(t->rhs, env));
  }
  fail(ErrorKind::Internal, "unreachable");
}

bool atom_holds(int64_t v, Rel rel) {
  switch (rel) {
    case Rel::Eq: return v == 0;
    case Rel::Ne: return v != 0;
    case Rel::Le: return v <= 0;
    case Rel::Lt: return v < 0;
    case Rel::Ge: return v >= 0;
    case Rel::Gt: return v > 0;
  }
  fail(ErrorKind::Internal, "unreachable");
}

// Literal bounded instantiation, used when quantifiers alternate. Exactness:
// a quantifier verdict is exact only when witnessed (Exists true via an exact
// child, Forall false via an exact child); the bounded blanket verdicts are
// marked inexact.
EvalResult eval_instantiate(const FormulaPtr& f,
                            std::unordered_map<std::string, int64_t>& env,
                            uint64_t bound) {
  switch (f->kind) {
    case PFormula::Kind::True: return {true, true};
    case PFormula::Kind::False: return {false, true};
    case PFormula::Kind::Atom:
      return {atom_holds(eval_term(f->atom, env), f->rel), true};
    case PFormula::Kind::And: {
      bool value = true, exact_true = true, exact_false = false;
      for (const auto& c : f->children) {
        EvalResult r = eval_instantiate(c, env, bound);
        if (!r.value) {
          value = false;
          if (r.exact) exact_false = true;
        } else if (!r.exact) {
          exact_true = false;
        }
      }
      return {value, value ? exact_true : exact_false};
    }
    case PFormula::Kind::Or: {
      bool value = false, exact_true = false, exact_false = true;
      for (const auto& c : f->children) {
        EvalResult r = eval_instantiate(c, env, bound);
        if (r.value) {
          value = true;
          if (r.exact) exact_true = true;
        } else if (!r.exact) {
          exact_false = false;
        }
      }
      return {value, value ? exact_true : exact_false};
    }
    case PFormula::Kind::Exists: {
      auto saved = env.find(f->var) != env.end()
                       ? std::optional<int64_t>(env[f->var])
                       : std::nullopt;
      bool found = false, found_exact = false;
      for (uint64_t v = 0; v <= bound; ++v) {
        env[f->var] = static_cast<int64_t>(v);
        EvalResult r = eval_instantiate(f->body, env, bound);
        if (r.value) {
          found = true;
          found_exact = r.exact;
          if (found_exact) break;
        }
      }
      if (saved)
        env[f->var] = *saved;
      else
        env.erase(f->var);
      if (found) return {true, found_exact};
      return {false, false};
    }
    case PFormula::Kind::Forall: {
      auto saved = env.find(f->var) != env.end()
                       ? std::optional<int64_t>(env[f->var])
                       : std::nullopt;
      bool holds = true, refuted_exact = false;
      for (uint64_t v = 0; v <= bound; ++v) {
        env[f->var] = static_cast<int64_t>(v);
        EvalResult r = eval_instantiate(f->body, env, bound);
        if (!r.value) {
          holds = false;
          refuted_exact = r.exact;
          if (refuted_exact) break;
        }
      }
      if (saved)
        env[f->var] = *saved;
      else
        env.erase(f->var);
      if (!holds) return {false, refuted_exact};
      return {true, false};
    }
  }
  fail(ErrorKind::Internal, "unreachable");
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (f->kind == PFormula::Kind::Exists || f->kind == PFormula::Kind::Forall)
    return false;
  if (f->body && !is_quantifier_free(f->body)) return false;
  for (const auto& c : f->children)
    if (!is_quantifier_free(c)) return false;
  return true;
}

void quantifier_kinds(const FormulaPtr& f, bool& any_exists, bool& any_forall) {
  if (f->kind == PFormula::Kind::Exists) any_exists = true;
  if (f->kind == PFormula::Kind::Forall) any_forall = true;
  if (f->body) quantifier_kinds(f->body, any_exists, any_forall);
  for (const auto& c : f->children) quantifier_kinds(c, any_exists, any_forall);
}

bool solve_closed_existential(const FormulaPtr& root, uint64_t bound) {
  PresburgerFormula closed{root, {}};
  Compiler compiler(bound);
  Compiled compiled = compiler.run(closed, {});
  BoxSolver solver(compiled);
  return solver.solve(nullptr);
}

}  // namespace

EvalResult evaluate(const PresburgerFormula& f,
                    const std::vector<uint64_t>& assignment, uint64_t bound) {
  if (!f.root) fail(ErrorKind::MalformedExpression, "formula has no root");
  if (assignment.size() != f.free_vars.size())
    fail(ErrorKind::UnassignedVariable,
         "assignment covers " + std::to_string(assignment.size()) +
             " of " + std::to_string(f.free_vars.size()) + " free variables");
  std::unordered_map<std::string, uint64_t> env;
  for (size_t i = 0; i < f.free_vars.size(); ++i)
    env[f.free_vars[i]] = assignment[i];

  bool any_exists = false, any_forall = false;
  quantifier_kinds(f.root, any_exists, any_forall);

  if (!any_exists && !any_forall) {
    std::unordered_map<std::string, int64_t> ienv;
    for (const auto& [k, v] : env) ienv[k] = static_cast<int64_t>(v);
    EvalResult r = eval_instantiate(f.root, ienv, bound);
    return {r.value, true};
  }

  FormulaPtr closed = substitute(f.root, env);
  if (any_exists && !any_forall) {
    bool sat = solve_closed_existential(closed, bound);
    return {sat, sat};
  }
  if (any_forall && !any_exists) {
    // Dual search: a counterexample within the bound refutes exactly; no
    // counterexample only certifies the bounded universal.
    PresburgerFormula dual = negate(PresburgerFormula{closed, {}});
    bool counterexample = solve_closed_existential(dual.root, bound);
    return {!counterexample, counterexample};
  }
  std::unordered_map<std::string, int64_t> ienv;
  for (const auto& [k, v] : env) ienv[k] = static_cast<int64_t>(v);
  return eval_instantiate(f.root, ienv, bound);
}

SolveResult solve_box(const PresburgerFormula& f, uint64_t box,
                      uint64_t inner_bound) {
  if (!f.root) fail(ErrorKind::MalformedExpression, "formula has no root");
  size_t n = f.free_vars.size();
  if (f.has_forall()) {
    // Rare path (the pipeline emits purely existential formulas): plain
    // enumeration in sum-then-lex order.
    if (n == 0) {
      if (evaluate(f, {}, inner_bound).value) return {true, {}};
      return {false, {}};
    }
    uint64_t max_sum = box * n;
    for (uint64_t s = 0; s <= max_sum; ++s) {
      std::vector<uint64_t> cur(n, 0);
      // Enumerate points with the given sum in lexicographic order.
      std::function<bool(size_t, uint64_t)> rec = [&](size_t i,
                                                      uint64_t rest) -> bool {
        if (i + 1 == n) {
          if (rest > box) return false;
          cur[i] = rest;
          return evaluate(f, cur, inner_bound).value;
        }
        for (uint64_t v = 0; v <= std::min(box, rest); ++v) {
          cur[i] = v;
          if (rec(i + 1, rest - v)) return true;
        }
        return false;
      };
      if (rec(0, s)) return {true, cur};
    }
    return {false, {}};
  }

  std::vector<uint64_t> free_hi(n, box);
  Compiler compiler(inner_bound);
  Compiled compiled = compiler.run(f, free_hi);

  // One unordered feasibility search settles emptiness; its model's sum then
  // caps the canonical sum-then-lex scan below.
  std::vector<uint64_t> some_model;
  {
    BoxSolver feasibility(compiled, /*canonical_frees=*/false);
    if (!feasibility.solve(&some_model)) return {false, {}};
  }
  if (n == 0) return {true, {}};
  uint64_t cap = 0;
  for (uint64_t v : some_model) cap += v;
  for (uint64_t s = 0; s <= cap; ++s) {
    BoxSolver solver(compiled);
    solver.require_free_sum(s);
    std::vector<uint64_t> model;
    if (solver.solve(&model)) return {true, std::move(model)};
  }
  fail(ErrorKind::Internal, "feasible box admitted no slice model");
}

// --- SMT-LIB export ----------------------------------------------------------

namespace {

bool simple_symbol(const std::string& s) {
  if (s.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char ch : s) {
    if (std::isalnum(static_cast<unsigned char>(ch))) continue;
    if (std::string("~!@$%^&*_-+=<>.?/").find(ch) != std::string::npos) continue;
    return false;
  }
  return true;
}

std::string smt_symbol(const std::string& s) {
  if (simple_symbol(s)) return s;
  std::string out = "|";
  for (char ch : s) {
    if (ch == '|' || ch == '\\') out += '_';
    else out += ch;
  }
  out += "|";
  return out;
}

std::string smt_term(const TermPtr& t) {
  switch (t->kind) {
    case PTerm::Kind::Const:
      if (t->value < 0) return "(- " + std::to_string(-t->value) + ")";
      return std::to_string(t->value);
    case PTerm::Kind::Var:
      return smt_symbol(t->var);
    case PTerm::Kind::Add:
      return "(+ " + smt_term(t->lhs) + " " + smt_term(t->rhs) + ")";
    case PTerm::Kind::Sub:
      return "(- " + smt_term(t->lhs) + " " + smt_term(t->rhs) + ")";
  }
  fail(ErrorKind::Internal, "unreachable");
}

std::string smt_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case PFormula::Kind::True: return "true";
    case PFormula::Kind::False: return "false";
    case PFormula::Kind::Atom: {
      std::string t = smt_term(f->atom);
      switch (f->rel) {
        case Rel::Eq: return "(= " + t + " 0)";
        case Rel::Ne: return "(not (= " + t + " 0))";
        case Rel::Le: return "(<= " + t + " 0)";
        case Rel::Lt: return "(< " + t + " 0)";
        case Rel::Ge: return "(>= " + t + " 0)";
        case Rel::Gt: return "(> " + t + " 0)";
      }
      fail(ErrorKind::Internal, "unreachable");
    }
    case PFormula::Kind::And:
    case PFormula::Kind::Or: {
      std::string out = f->kind == PFormula::Kind::And ? "(and" : "(or";
      for (const auto& c : f->children) out += "\n  " + smt_formula(c);
      out += ")";
      return out;
    }
    case PFormula::Kind::Exists:
    case PFormula::Kind::Forall: {
      std::string head = f->kind == PFormula::Kind::Exists ? "exists" : "forall";
      std::string v = smt_symbol(f->var);
      std::string guard = "(>= " + v + " 0)";
      std::string body = smt_formula(f->body);
      if (f->kind == PFormula::Kind::Exists)
        return "(" + head + " ((" + v + " Int)) (and " + guard + " " + body + "))";
      return "(" + head + " ((" + v + " Int)) (=> " + guard + " " + body + "))";
    }
  }
  fail(ErrorKind::Internal, "unreachable");
}

// Strips a formula to its quantifier-free matrix, collecting existential
// binder names; fails if any Forall is present or a binder name repeats.
FormulaPtr strip_existentials(const FormulaPtr& f,
                              std::vector<std::string>& binders) {
  switch (f->kind) {
    case PFormula::Kind::Forall:
      fail(ErrorKind::MalformedExpression,
           "QF_LIA export requires an existential formula");
    case PFormula::Kind::Exists: {
      if (std::find(binders.begin(), binders.end(), f->var) != binders.end())
        fail(ErrorKind::MalformedExpression,
             "QF_LIA export requires globally unique binders: " + f->var);
      binders.push_back(f->var);
      return strip_existentials(f->body, binders);
    }
    case PFormula::Kind::And:
    case PFormula::Kind::Or: {
      auto g = std::make_shared<PFormula>(*f);
      g->children.clear();
      for (const auto& c : f->children)
        g->children.push_back(strip_existentials(c, binders));
      return g;
    }
    default:
      return f;
  }
}

}  // namespace

std::string to_smtlib(const PresburgerFormula& f, const std::string& logic) {
  if (!f.root) fail(ErrorKind::MalformedExpression, "formula has no root");
  if (logic != "LIA" && logic != "QF_LIA")
    fail(ErrorKind::MalformedExpression, "unsupported logic " + logic);
  std::ostringstream out;
  out << "(set-logic " << logic << ")\n";
  std::vector<std::string> declared = f.free_vars;
  FormulaPtr body = f.root;
  if (logic == "QF_LIA") {
    std::vector<std::string> binders;
    body = strip_existentials(f.root, binders);
    for (const auto& b : binders) declared.push_back(b);
  }
  for (const auto& v : declared)
    out << "(declare-const " << smt_symbol(v) << " Int)\n";
  for (const auto& v : declared)
    out << "(assert (>= " << smt_symbol(v) << " 0))\n";
  out << "(assert " << smt_formula(body) << ")\n";
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

namespace {

struct Tokenizer {
  const std::string& text;
  size_t pos = 0;

  std::optional<std::string> next() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos >= text.size()) return std::nullopt;
    char c = text[pos];
    if (c == '(' || c == ')') {
      ++pos;
      return std::string(1, c);
    }
    if (c == '|') {
      size_t end = text.find('|', pos + 1);
      if (end == std::string::npos) fail(ErrorKind::MalformedExpression, "unterminated quoted symbol");
      std::string sym = text.substr(pos + 1, end - pos - 1);
      pos = end + 1;
      return sym;
    }
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    return text.substr(start, pos - start);
  }
};

}  // namespace

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

}  // namespace

SmtResult parse_smt_result(const std::string& text) {
  SmtResult result;
  Tokenizer tok{text};
  std::vector<std::string> window;           // depth-0 "name value" pairing
  std::vector<std::vector<std::string>> frames;  // open parenthesized forms
  for (auto t = tok.next(); t; t = tok.next()) {
    const std::string& s = *t;
    if (frames.empty()) {
      if (s == "sat") {
        result.known = true;
        result.sat = true;
        continue;
      }
      if (s == "unsat") {
        result.known = true;
        result.sat = false;
        continue;
      }
    }
    if (s == "(") {
      frames.emplace_back();
      continue;
    }
    if (s == ")") {
      if (frames.empty()) continue;
      std::vector<std::string> frame = std::move(frames.back());
      frames.pop_back();
      if (!frame.empty() && frame[0] == "define-fun" && frame.size() >= 4) {
        // define-fun NAME () Int VALUE, VALUE possibly as "- N" from (- N).
        const std::string& name = frame[1];
        const std::string& value = frame.back();
        bool negative = frame[frame.size() - 2] == "-";
        if (all_digits(value)) {
          if (negative)
            fail(ErrorKind::MalformedExpression,
                 "negative model value for " + name);
          result.values[name] = std::stoull(value);
        }
      } else if (!frames.empty()) {
        // Splice inner tokens into the parent so (- N) stays visible.
        for (auto& f : frame) frames.back().push_back(std::move(f));
      }
      continue;
    }
    if (!frames.empty()) {
      frames.back().push_back(s);
      continue;
    }
    // Plain "name value" pairs outside any parentheses.
    window.push_back(s);
    if (window.size() == 2) {
      if (all_digits(window[1]) && !all_digits(window[0])) {
        result.values[window[0]] = std::stoull(window[1]);
        window.clear();
      } else {
        window.erase(window.begin());
      }
    }
  }
  return result;
}

namespace {

// acc + count * var, with nullptr standing for an empty sum.
TermPtr scaled_sum(TermPtr acc, const std::string& var, uint64_t count) {
  for (uint64_t i = 0; i < count; ++i) {
    TermPtr v = PTerm::variable(var);
    acc = acc ? PTerm::add(std::move(acc), std::move(v)) : std::move(v);
  }
  return acc;
}

TermPtr sum_or_zero(TermPtr acc) {
  return acc ? std::move(acc) : PTerm::constant(0);
}

}  // namespace

PresburgerFormula parikh_formula(const Cfg& g, const std::string& prefix) {
  if (!cfg_is_trimmed(g))
    fail(ErrorKind::UntrimmedGrammar,
         "Parikh formula requires a trimmed grammar");
  const size_t nterm = g.terminals.size();
  const size_t nnt = g.nonterminals.size();
  const size_t nprod = g.productions.size();

  std::vector<std::string> frees;
  std::unordered_set<std::string> taken;
  frees.reserve(nterm);
  for (size_t t = 0; t < nterm; ++t) {
    frees.push_back(prefix + g.terminals.name(static_cast<Sym>(t)));
    taken.insert(frees.back());
  }
  auto fresh = [&taken](std::string base) {
    while (taken.count(base)) base += '\'';
    taken.insert(base);
    return base;
  };
  // One production counter y and one depth variable z per nonterminal; both
  // carry the nonterminal name for readable dumps.
  std::vector<std::string> yname(nprod), zname(nnt);
  for (size_t p = 0; p < nprod; ++p)
    yname[p] = fresh(prefix + "y" + std::to_string(p + 1) + "@" +
                     g.nonterminals[g.productions[p].lhs]);
  for (size_t a = 0; a < nnt; ++a)
    zname[a] = fresh(prefix + "z@" + g.nonterminals[a]);

  // Occurrence lists (production, multiplicity), ascending by production, so
  // every sum below is linear in the grammar rather than |N|x|P| dense.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> by_term(nterm);
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> in_nt(nnt);
  std::vector<std::vector<uint32_t>> out_nt(nnt);
  for (size_t p = 0; p < nprod; ++p) {
    out_nt[g.productions[p].lhs].push_back(static_cast<uint32_t>(p));
    for (const CfgSym& s : g.productions[p].rhs) {
      auto& list = s.terminal ? by_term[s.id] : in_nt[s.id];
      if (!list.empty() && list.back().first == p)
        ++list.back().second;
      else
        list.push_back({static_cast<uint32_t>(p), 1});
    }
  }

  std::vector<FormulaPtr> core;
  // Terminal counting: every declared terminal gets its atom, so unused
  // terminals are pinned to zero rather than left unconstrained.
  for (size_t t = 0; t < nterm; ++t) {
    TermPtr sum;
    for (const auto& [p, cnt] : by_term[t])
      sum = scaled_sum(std::move(sum), yname[p], cnt);
    core.push_back(PFormula::atom_rel(PTerm::variable(frees[t]), Rel::Eq,
                                      sum_or_zero(std::move(sum))));
  }
  // Flow balance: occurrences offered to a nonterminal (plus one for the
  // start) equal the productions applied from it.
  for (size_t a = 0; a < nnt; ++a) {
    TermPtr in = a == g.start ? PTerm::constant(1) : nullptr;
    for (const auto& [p, cnt] : in_nt[a])
      in = scaled_sum(std::move(in), yname[p], cnt);
    TermPtr out;
    for (uint32_t p : out_nt[a]) out = scaled_sum(std::move(out), yname[p], 1);
    core.push_back(PFormula::atom_rel(sum_or_zero(std::move(in)), Rel::Eq,
                                      sum_or_zero(std::move(out))));
  }
  // Connectivity: z values record shortest chains of applied productions from
  // the start, ruling out flow-balanced but disconnected cycles.
  core.push_back(PFormula::atom_rel(PTerm::variable(zname[g.start]), Rel::Eq,
                                    PTerm::constant(1)));
  for (size_t a = 0; a < nnt; ++a) {
    if (a == g.start) continue;
    // Depths strictly increase along a chain, so they pass through distinct
    // nonterminals; z <= |N| holds in every model and keeps solver domains
    // proportional to the grammar rather than to the instantiation bound.
    core.push_back(PFormula::atom_rel(
        PTerm::variable(zname[a]), Rel::Le,
        PTerm::constant(static_cast<int64_t>(nnt))));
    std::vector<FormulaPtr> branches;
    TermPtr out;
    for (uint32_t p : out_nt[a]) out = scaled_sum(std::move(out), yname[p], 1);
    branches.push_back(PFormula::conj(
        {PFormula::atom_rel(sum_or_zero(std::move(out)), Rel::Eq,
                            PTerm::constant(0)),
         PFormula::atom_rel(PTerm::variable(zname[a]), Rel::Eq,
                            PTerm::constant(0))}));
    for (const auto& [p, cnt] : in_nt[a]) {
      const std::string& zparent = zname[g.productions[p].lhs];
      branches.push_back(PFormula::conj(
          {PFormula::atom_rel(PTerm::variable(yname[p]), Rel::Ge,
                              PTerm::constant(1)),
           PFormula::atom_rel(PTerm::variable(zparent), Rel::Ge,
                              PTerm::constant(1)),
           PFormula::atom_rel(PTerm::variable(zname[a]), Rel::Eq,
                              PTerm::add(PTerm::variable(zparent),
                                         PTerm::constant(1)))}));
    }
    core.push_back(PFormula::disj(std::move(branches)));
  }

  FormulaPtr body = PFormula::conj(std::move(core));
  for (size_t a = nnt; a-- > 0;) body = PFormula::exists(zname[a], body);
  for (size_t p = nprod; p-- > 0;) body = PFormula::exists(yname[p], body);
  return PresburgerFormula{std::move(body), std::move(frees)};
}

}  // namespace mhb
