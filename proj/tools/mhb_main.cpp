#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mhb/cfg.hpp"
#include "mhb/error.hpp"
#include "mhb/gen.hpp"
#include "mhb/io.hpp"
#include "mhb/machine.hpp"
#include "mhb/pipeline.hpp"
#include "mhb/reach.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) mhb::fail(mhb::ErrorKind::MalformedModel, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) mhb::fail(mhb::ErrorKind::MalformedModel, "cannot write '" + path + "'");
  out << text;
}

struct ModeSpec {
  bool smt = false;
  uint64_t box = 4;
};

ModeSpec parse_mode(const std::string& text) {
  ModeSpec mode;
  if (text == "smt") {
    mode.smt = true;
    return mode;
  }
  std::string prefix = "bounded";
  if (text == prefix) return mode;
  if (text.rfind(prefix + ":", 0) == 0) {
    std::string k = text.substr(prefix.size() + 1);
    try {
      size_t used = 0;
      mode.box = std::stoull(k, &used);
      if (used == k.size()) return mode;
    } catch (const std::exception&) {
    }
  }
  mhb::fail(mhb::ErrorKind::MalformedModel,
            "bad --mode '" + text + "' (expected bounded:K or smt)");
}

json verdict_json(const mhb::EmptinessVerdict& v, const mhb::Alphabet& alphabet) {
  json j;
  switch (v.kind) {
    case mhb::EmptinessVerdict::Kind::NonEmpty: {
      j["verdict"] = "non-empty";
      json w;
      w["exponents"] = v.exponents;
      w["word"] = alphabet.format_word(v.word);
      j["witness"] = w;
      j["verified"] = v.verified;
      break;
    }
    case mhb::EmptinessVerdict::Kind::EmptyWithinBound:
      j["verdict"] = "empty-within-bound";
      j["bound"] = v.bound;
      j["verified"] = false;
      break;
    case mhb::EmptinessVerdict::Kind::EmptyProvedExternally:
      j["verdict"] = "empty-proved-externally";
      j["verified"] = false;
      break;
    case mhb::EmptinessVerdict::Kind::Unknown:
      j["verdict"] = "unknown";
      j["verified"] = false;
      break;
  }
  return j;
}

void print_verdict(const json& j) {
  std::cout << j.dump(2) << '\n';
  std::string line = "verdict: " + j["verdict"].get<std::string>();
  if (j.contains("witness"))
    line += ", word \"" + j["witness"]["word"].get<std::string>() + "\"";
  std::cerr << line << '\n';
}

const mhb::Tpda& require_mhpda(const mhb::ParsedModel& model, const char* cmd) {
  if (model.kind != mhb::ModelKind::Mhpda)
    mhb::fail(mhb::ErrorKind::MalformedModel,
              std::string(cmd) + " expects an mhpda model (use reach for cm/cfsm)");
  return model.tpda;
}

const mhb::Machine& require_machine(const mhb::ParsedModel& model, const char* cmd) {
  if (model.kind == mhb::ModelKind::Mhpda)
    mhb::fail(mhb::ErrorKind::MalformedModel,
              std::string(cmd) + " expects a cm or cfsm model (use check for mhpda)");
  return model.machine;
}

struct CheckArgs {
  std::string model, bexpr, mode = "bounded:4";
  std::string dump_grammar, dump_formula, emit_smt;
  std::string smt_logic = "LIA";
  bool letter_bounded = false;
  uint64_t chain_cap = 64;
  unsigned jobs = 1;
};

int run_check(const CheckArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  mhb::ParsedModel model = mhb::parse_model(read_file(args.model));
  const mhb::Tpda& a = require_mhpda(model, "check");
  mhb::BoundedExpression w = mhb::parse_bounded_expression(args.bexpr, a.alphabet);
  ModeSpec mode = parse_mode(args.mode);
  mhb::DecisionConfig config;
  config.mode = mode.smt ? mhb::DecisionConfig::Mode::ExportSmt
                         : mhb::DecisionConfig::Mode::Bounded;
  config.box = mode.box;
  config.letter_bounded_auto = args.letter_bounded;
  config.chain_cap = args.chain_cap;
  config.smt_logic = args.smt_logic;
  mhb::DecisionRun run = mhb::run_decision(a, w, config);
  if (!args.emit_smt.empty()) {
    if (run.smt.empty())
      mhb::fail(mhb::ErrorKind::MalformedModel, "--emit-smt requires --mode smt");
    write_output(args.emit_smt, run.smt);
  }
  if (!args.dump_formula.empty())
    write_output(args.dump_formula, mhb::to_smtlib(run.psi, args.smt_logic));
  if (!args.dump_grammar.empty()) {
    if (!run.artifacts)
      mhb::fail(mhb::ErrorKind::MalformedModel,
                "--dump-grammar needs the monolithic route (chain route taken)");
    write_output(args.dump_grammar, mhb::serialize_cfg(run.artifacts->g));
  }
  json j = verdict_json(run.verdict, a.alphabet);
  json stats;
  stats["a"] = a.size();
  if (run.artifacts) {
    stats["b"] = run.artifacts->contraction.b.size();
    stats["c"] = run.artifacts->c.size();
    stats["g"] = run.artifacts->g.size();
  }
  if (run.chains_tried > 0) stats["chains"] = run.chains_tried;
  stats["psi"] = run.psi.node_count();
  stats["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  j["stats"] = stats;
  print_verdict(j);
  return 0;
}

struct SimulateArgs {
  std::string model, word;
  uint64_t budget = 100000;
};

int run_simulate(const SimulateArgs& args) {
  mhb::ParsedModel model = mhb::parse_model(read_file(args.model));
  const mhb::Tpda& a = require_mhpda(model, "simulate");
  mhb::Word word = a.alphabet.parse_word(args.word);
  std::vector<mhb::Word> tapes(a.heads, word);
  mhb::SimResult sim = mhb::simulate_budgeted(a, tapes, args.budget);
  switch (sim.verdict) {
    case mhb::SimVerdict::Accepting:
      std::cout << "accepting run (" << sim.trace.size() - 1 << " steps):\n";
      for (const mhb::Id& id : sim.trace) std::cout << "  " << mhb::format_id(a, id) << '\n';
      break;
    case mhb::SimVerdict::Rejecting:
      std::cout << "rejected: no accepting run (explored " << sim.explored
                << " ids)\n";
      break;
    case mhb::SimVerdict::BudgetExceeded:
      std::cout << "budget exceeded after " << sim.explored << " ids\n";
      break;
  }
  return 0;
}

struct ReachArgs {
  std::string model, target, bexpr, mode = "bounded:4";
  std::string emit_smt, dump_formula;
  std::string smt_logic = "LIA";
  bool flat = false;
  unsigned jobs = 1;
};

int run_reach(const ReachArgs& args) {
  auto t0 = std::chrono::steady_clock::now();
  mhb::ParsedModel model = mhb::parse_model(read_file(args.model));
  const mhb::Machine& m = require_machine(model, "reach");
  uint32_t target = mhb::state_index(m.state_names, args.target);
  if (args.flat == args.bexpr.empty())
    mhb::fail(mhb::ErrorKind::MalformedModel,
              "reach needs exactly one of --bexpr or --flat");
  mhb::BoundedExpression w =
      args.flat ? mhb::flat_bounded_expression(m)
                : mhb::parse_bounded_expression(args.bexpr, m.transition_alphabet());
  ModeSpec mode = parse_mode(args.mode);
  mhb::ReachConfig config;
  config.mode = mode.smt ? mhb::ReachConfig::Mode::ExportSmt
                         : mhb::ReachConfig::Mode::Bounded;
  config.box = mode.box;
  config.smt_logic = args.smt_logic;
  mhb::ReachRun run = mhb::run_reach(m, target, w, config);
  if (!args.emit_smt.empty()) {
    if (run.smt.empty())
      mhb::fail(mhb::ErrorKind::MalformedModel, "--emit-smt requires --mode smt");
    write_output(args.emit_smt, run.smt);
  }
  if (!args.dump_formula.empty())
    write_output(args.dump_formula, mhb::to_smtlib(run.psi, args.smt_logic));
  json j = verdict_json(run.verdict, m.transition_alphabet());
  json stats;
  stats["members"] = run.member_sizes;
  stats["segments"] = w.arity();
  stats["psi"] = run.psi.node_count();
  stats["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  j["stats"] = stats;
  print_verdict(j);
  return 0;
}

struct GenArgs {
  std::string kind, cnf_path, out = "-";
  uint64_t seed = 42;
  mhb::InstanceLimits limits;
};

int run_gen(const GenArgs& args) {
  std::ostringstream text;
  if (args.kind == "sat-cm" || args.kind == "sat-cfsm") {
    if (args.cnf_path.empty())
      mhb::fail(mhb::ErrorKind::MalformedCnf, "gen " + args.kind + " needs --cnf");
    mhb::Cnf cnf = mhb::parse_dimacs(read_file(args.cnf_path));
    mhb::GadgetInstance inst =
        args.kind == "sat-cm" ? mhb::sat_to_cm(cnf) : mhb::sat_to_cfsm(cnf);
    text << "# target " << inst.machine.state_names[inst.target] << '\n';
    text << "# bexpr " << inst.expr.to_string() << '\n';
    text << mhb::serialize_machine(inst.machine);
  } else if (args.kind == "random") {
    mhb::RandomInstance inst = mhb::random_instance(args.seed, args.limits);
    text << "# bexpr " << inst.expr.to_string() << '\n';
    text << mhb::serialize_tpda(inst.machine);
  } else {
    mhb::fail(mhb::ErrorKind::MalformedModel,
              "unknown generator '" + args.kind + "' (sat-cm, sat-cfsm, random)");
  }
  write_output(args.out, text.str());
  if (args.out != "-") std::cerr << "wrote " << args.out << '\n';
  return 0;
}

struct ExportArgs {
  std::string model, bexpr, target, emit_smt = "-";
  std::string smt_logic = "LIA";
  std::string verify_model;
  bool flat = false;
};

int run_export(const ExportArgs& args) {
  mhb::ParsedModel model = mhb::parse_model(read_file(args.model));
  if (model.kind == mhb::ModelKind::Mhpda) {
    const mhb::Tpda& a = model.tpda;
    mhb::BoundedExpression w = mhb::parse_bounded_expression(args.bexpr, a.alphabet);
    mhb::PresburgerFormula psi = mhb::emptiness_formula(a, w);
    if (args.verify_model.empty()) {
      write_output(args.emit_smt, mhb::to_smtlib(psi, args.smt_logic));
      std::cerr << "wrote formula with " << psi.free_vars.size() << " free variables\n";
      return 0;
    }
    mhb::SmtResult result = mhb::parse_smt_result(read_file(args.verify_model));
    if (!result.known)
      mhb::fail(mhb::ErrorKind::MalformedModel,
                "solver result in '" + args.verify_model + "' is neither sat nor unsat");
    mhb::EmptinessVerdict verdict =
        mhb::verify_external_model(a, w, result.sat, result.values);
    print_verdict(verdict_json(verdict, a.alphabet));
    return 0;
  }
  const mhb::Machine& m = model.machine;
  if (args.target.empty())
    mhb::fail(mhb::ErrorKind::MalformedModel, "export for cm/cfsm needs --target");
  uint32_t target = mhb::state_index(m.state_names, args.target);
  if (args.flat == args.bexpr.empty())
    mhb::fail(mhb::ErrorKind::MalformedModel,
              "export needs exactly one of --bexpr or --flat");
  mhb::BoundedExpression w =
      args.flat ? mhb::flat_bounded_expression(m)
                : mhb::parse_bounded_expression(args.bexpr, m.transition_alphabet());
  mhb::PresburgerFormula psi =
      mhb::family_emptiness_formula(mhb::compile_machine(m, target), w);
  if (args.verify_model.empty()) {
    write_output(args.emit_smt, mhb::to_smtlib(psi, args.smt_logic));
    std::cerr << "wrote formula with " << psi.free_vars.size() << " free variables\n";
    return 0;
  }
  mhb::SmtResult result = mhb::parse_smt_result(read_file(args.verify_model));
  if (!result.known)
    mhb::fail(mhb::ErrorKind::MalformedModel,
              "solver result in '" + args.verify_model + "' is neither sat nor unsat");
  if (!result.sat) {
    print_verdict(verdict_json(mhb::EmptinessVerdict::empty_externally(),
                               m.transition_alphabet()));
    return 0;
  }
  std::vector<uint64_t> k;
  for (const std::string& v : psi.free_vars) {
    auto it = result.values.find(v);
    k.push_back(it == result.values.end() ? 0 : it->second);
  }
  mhb::Word pi = mhb::expand(w, k);
  mhb::MachineRun replay = mhb::run_machine(m, pi);
  if (!replay.feasible || replay.config.state != target)
    mhb::fail(mhb::ErrorKind::VerificationMismatch,
              "external model rejected by the reference interpreter");
  print_verdict(verdict_json(mhb::EmptinessVerdict::non_empty(k, pi, true),
                             m.transition_alphabet()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emptiness of multi-head pushdown automata modulo bounded expressions"};
  app.require_subcommand(1);

  CheckArgs check;
  CLI::App* c = app.add_subcommand("check", "Decide emptiness modulo a bounded expression");
  c->add_option("model", check.model, "model file (mhpda format)")->required();
  c->add_option("--bexpr", check.bexpr, "bounded expression w1 w2 ... wn")->required();
  c->add_option("--mode", check.mode, "bounded:K (default bounded:4) or smt");
  c->add_option("--dump-grammar", check.dump_grammar, "write the trimmed grammar here");
  c->add_option("--dump-formula", check.dump_formula, "write the formula here");
  c->add_option("--emit-smt", check.emit_smt, "write the SMT-LIB script here (mode smt)");
  c->add_option("--smt-logic", check.smt_logic, "SMT logic header (default LIA)");
  c->add_flag("--letter-bounded", check.letter_bounded,
              "solve letter-bounded expressions through the chain family");
  c->add_option("--chain-cap", check.chain_cap, "max chain members before falling back");
  c->add_option("--jobs", check.jobs, "reserved; output is canonical for any value")
      ->check(CLI::Range(1u, 1024u));

  SimulateArgs simulate;
  CLI::App* s = app.add_subcommand("simulate", "Trace a shared-word run");
  s->add_option("model", simulate.model, "model file (mhpda format)")->required();
  s->add_option("--word", simulate.word, "input word fed to every head");
  s->add_option("--budget", simulate.budget, "max distinct IDs to explore");

  ReachArgs reach;
  CLI::App* r = app.add_subcommand("reach", "Bounded reachability for cm/cfsm models");
  r->add_option("model", reach.model, "model file (cm or cfsm format)")->required();
  r->add_option("--target", reach.target, "target control state")->required();
  r->add_option("--bexpr", reach.bexpr, "bounded expression over transitions t1..tm");
  r->add_flag("--flat", reach.flat, "derive the expression from the flat control graph");
  r->add_option("--mode", reach.mode, "bounded:K (default bounded:4) or smt");
  r->add_option("--emit-smt", reach.emit_smt, "write the SMT-LIB script here (mode smt)");
  r->add_option("--dump-formula", reach.dump_formula, "write the formula here");
  r->add_option("--smt-logic", reach.smt_logic, "SMT logic header (default LIA)");
  r->add_option("--jobs", reach.jobs, "reserved; output is canonical for any value")
      ->check(CLI::Range(1u, 1024u));

  GenArgs gen;
  CLI::App* g = app.add_subcommand("gen", "Generate benchmark instances");
  g->add_option("kind", gen.kind, "sat-cm | sat-cfsm | random")->required();
  g->add_option("--cnf", gen.cnf_path, "DIMACS CNF input (sat-cm / sat-cfsm)");
  g->add_option("--seed", gen.seed, "random seed (random)");
  g->add_option("--states", gen.limits.states, "max states (random)");
  g->add_option("--heads", gen.limits.heads, "max heads (random)");
  g->add_option("--segments", gen.limits.segments, "max segments (random)");
  g->add_option("--seglen", gen.limits.segment_len, "max segment length (random)");
  g->add_option("--out", gen.out, "output file ('-' = stdout)");

  ExportArgs exp;
  CLI::App* e = app.add_subcommand("export", "Emit or re-verify an SMT-LIB script");
  e->add_option("model", exp.model, "model file")->required();
  e->add_option("--bexpr", exp.bexpr, "bounded expression");
  e->add_option("--target", exp.target, "target state (cm/cfsm)");
  e->add_flag("--flat", exp.flat, "derive the expression from the flat control graph");
  e->add_option("--emit-smt", exp.emit_smt, "output file ('-' = stdout)");
  e->add_option("--smt-logic", exp.smt_logic, "SMT logic header (default LIA)");
  e->add_option("--verify-model", exp.verify_model,
                "solver output file to re-verify instead of emitting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c)) return run_check(check);
    if (app.got_subcommand(s)) return run_simulate(simulate);
    if (app.got_subcommand(r)) return run_reach(reach);
    if (app.got_subcommand(g)) return run_gen(gen);
    if (app.got_subcommand(e)) return run_export(exp);
  } catch (const mhb::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    bool internal = err.kind() == mhb::ErrorKind::VerificationMismatch ||
                    err.kind() == mhb::ErrorKind::Internal;
    return internal ? 3 : 2;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return 3;
  }
  return 2;
}
