#include "mhb/io.hpp"

#include <map>
#include <sstream>

#include "mhb/error.hpp"

namespace mhb {

namespace {

struct TextLine {
  size_t no = 0;
  std::vector<std::string> tokens;
};

std::vector<TextLine> tokenize(const std::string& text) {
  std::vector<TextLine> lines;
  std::istringstream in(text);
  std::string raw;
  size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    TextLine line;
    line.no = no;
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail_at(size_t no, ErrorKind kind, const std::string& msg) {
  fail(kind, "line " + std::to_string(no) + ": " + msg);
}

template <typename F>
auto at_line(size_t no, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    fail(e.kind(), "line " + std::to_string(no) + ": " + e.what());
  }
}

size_t find_arrow(const TextLine& line) {
  for (size_t i = 0; i < line.tokens.size(); ++i)
    if (line.tokens[i] == "->") return i;
  return line.tokens.size();
}

uint64_t parse_number(const TextLine& line, const std::string& tok) {
  try {
    size_t used = 0;
    uint64_t value = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return value;
  } catch (const std::exception&) {
    fail_at(line.no, ErrorKind::MalformedModel, "expected a number, got '" + tok + "'");
  }
}

std::vector<uint32_t> parse_push(const TextLine& line, const Alphabet& stack,
                                 size_t from) {
  std::vector<uint32_t> push;
  if (from >= line.tokens.size()) return push;
  if (line.tokens.size() == from + 1 && line.tokens[from] == "eps") return push;
  for (size_t i = from; i < line.tokens.size(); ++i) {
    const std::string& tok = line.tokens[i];
    if (auto sym = stack.find(tok)) {
      push.push_back(*sym);
    } else if (tok.size() > 1 && stack.all_single_char()) {
      for (char c : tok)
        push.push_back(at_line(line.no, [&] { return stack.require(std::string(1, c)); }));
    } else {
      fail_at(line.no, ErrorKind::UnknownSymbol, "unknown stack symbol '" + tok + "'");
    }
  }
  return push;
}

std::string format_push(const Alphabet& stack, const std::vector<uint32_t>& push) {
  if (push.empty()) return "eps";
  std::string out;
  bool compact = stack.all_single_char();
  for (size_t i = 0; i < push.size(); ++i) {
    if (i > 0 && !compact) out += ' ';
    out += stack.name(push[i]);
  }
  return out;
}

Tpda parse_mhpda(const std::vector<TextLine>& lines) {
  Tpda p;
  bool saw_heads = false, saw_init = false;
  std::string init_state, init_stack;
  size_t init_line = 0;
  std::vector<std::string> finals;
  size_t finals_line = 0;
  std::map<std::string, uint32_t> states;
  std::vector<const TextLine*> transitions;
  for (size_t li = 1; li < lines.size(); ++li) {
    const TextLine& line = lines[li];
    const std::string& key = line.tokens[0];
    if (key == "heads") {
      if (line.tokens.size() != 2)
        fail_at(line.no, ErrorKind::MalformedModel, "usage: heads <count>");
      p.heads = static_cast<uint32_t>(parse_number(line, line.tokens[1]));
      saw_heads = true;
    } else if (key == "alphabet") {
      for (size_t i = 1; i < line.tokens.size(); ++i)
        at_line(line.no, [&] { return p.alphabet.add(line.tokens[i]); });
    } else if (key == "stack") {
      for (size_t i = 1; i < line.tokens.size(); ++i)
        at_line(line.no, [&] { return p.stack.add(line.tokens[i]); });
    } else if (key == "init") {
      if (line.tokens.size() != 3)
        fail_at(line.no, ErrorKind::MalformedModel, "usage: init <state> <stack-symbol>");
      init_state = line.tokens[1];
      init_stack = line.tokens[2];
      init_line = line.no;
      saw_init = true;
    } else if (key == "final") {
      finals.assign(line.tokens.begin() + 1, line.tokens.end());
      finals_line = line.no;
    } else if (key == "select") {
      if (line.tokens.size() != 3)
        fail_at(line.no, ErrorKind::MalformedModel, "usage: select <state> <head>");
      if (!saw_heads)
        fail_at(line.no, ErrorKind::MalformedModel, "select before the heads line");
      uint64_t head = parse_number(line, line.tokens[2]);
      if (head < 1 || head > p.heads)
        fail_at(line.no, ErrorKind::MalformedModel,
                "head must be in [1," + std::to_string(p.heads) + "]");
      if (states.count(line.tokens[1]))
        fail_at(line.no, ErrorKind::MalformedModel,
                "state '" + line.tokens[1] + "' selected twice");
      states[line.tokens[1]] =
          p.add_state(line.tokens[1], static_cast<uint32_t>(head - 1), false);
    } else if (find_arrow(line) < line.tokens.size()) {
      transitions.push_back(&line);
    } else {
      fail_at(line.no, ErrorKind::MalformedModel, "unrecognized line '" + key + "'");
    }
  }
  if (!saw_heads) fail(ErrorKind::MalformedModel, "missing heads line");
  if (!saw_init) fail(ErrorKind::MalformedModel, "missing init line");
  auto state_of = [&](size_t no, const std::string& name) {
    auto it = states.find(name);
    if (it == states.end())
      fail_at(no, ErrorKind::MalformedModel, "state '" + name + "' has no select line");
    return it->second;
  };
  p.initial = state_of(init_line, init_state);
  p.initial_stack = at_line(init_line, [&] { return p.stack.require(init_stack); });
  for (const auto& name : finals) p.is_final[state_of(finals_line, name)] = true;
  for (const TextLine* linep : transitions) {
    const TextLine& line = *linep;
    size_t arrow = find_arrow(line);
    if (arrow != 3 || line.tokens.size() < 5)
      fail_at(line.no, ErrorKind::MalformedModel,
              "usage: <src> <pop> <read> -> <dst> <push>");
    uint32_t src = state_of(line.no, line.tokens[0]);
    uint32_t pop = at_line(line.no, [&] { return p.stack.require(line.tokens[1]); });
    const std::string& readtok = line.tokens[2];
    ReadLabel read = readtok == "eps" ? ReadLabel::eps()
                     : readtok == "$"
                         ? ReadLabel::end()
                         : ReadLabel::letter(at_line(
                               line.no, [&] { return p.alphabet.require(readtok); }));
    uint32_t dst = state_of(line.no, line.tokens[4]);
    p.add_transition(src, pop, read, dst, parse_push(line, p.stack, 5));
  }
  tpda_validate(p);
  return p;
}

MachineOp parse_op(const TextLine& line, const Machine& m,
                   const std::vector<std::string>& toks) {
  auto index_of = [&](const std::vector<std::string>& names, const std::string& name,
                      const char* what) {
    for (uint32_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    fail_at(line.no, ErrorKind::UnknownSymbol,
            std::string("unknown ") + what + " '" + name + "'");
  };
  if (toks.empty())
    fail_at(line.no, ErrorKind::MalformedModel, "missing operation");
  const std::string& op = toks[0];
  if (op == "nop") {
    if (toks.size() != 1)
      fail_at(line.no, ErrorKind::MalformedModel, "nop takes no arguments");
    return MachineOp::nop();
  }
  if (op == "inc" || op == "dec" || op == "zerotest") {
    if (toks.size() != 2)
      fail_at(line.no, ErrorKind::MalformedModel, "usage: " + op + " <counter>");
    uint32_t c = index_of(m.counters, toks[1], "counter");
    return op == "inc" ? MachineOp::inc(c)
           : op == "dec" ? MachineOp::dec(c)
                         : MachineOp::zero(c);
  }
  if (op == "send" || op == "recv") {
    if (toks.size() != 3)
      fail_at(line.no, ErrorKind::MalformedModel, "usage: " + op + " <channel> <message>");
    uint32_t ch = index_of(m.channels, toks[1], "channel");
    Sym msg = at_line(line.no, [&] { return m.messages.require(toks[2]); });
    return op == "send" ? MachineOp::send(ch, msg) : MachineOp::recv(ch, msg);
  }
  fail_at(line.no, ErrorKind::MalformedModel, "unknown operation '" + op + "'");
}

Machine parse_machine_text(const std::vector<TextLine>& lines, bool with_stack) {
  Machine m;
  bool saw_init = false, pinned_states = false;
  std::string init_state, init_stack;
  size_t init_line = 0;
  std::map<std::string, uint32_t> states;
  std::vector<const TextLine*> transitions;
  for (size_t li = 1; li < lines.size(); ++li) {
    const TextLine& line = lines[li];
    const std::string& key = line.tokens[0];
    if (key == "counters") {
      m.counters.assign(line.tokens.begin() + 1, line.tokens.end());
    } else if (key == "channels") {
      m.channels.assign(line.tokens.begin() + 1, line.tokens.end());
    } else if (key == "msgs") {
      for (size_t i = 1; i < line.tokens.size(); ++i)
        at_line(line.no, [&] { return m.messages.add(line.tokens[i]); });
    } else if (key == "stack") {
      if (!with_stack)
        fail_at(line.no, ErrorKind::MalformedModel, "cfsm models have no stack line");
      for (size_t i = 1; i < line.tokens.size(); ++i)
        at_line(line.no, [&] { return m.stack.add(line.tokens[i]); });
    } else if (key == "states") {
      pinned_states = true;
      for (size_t i = 1; i < line.tokens.size(); ++i) {
        if (states.count(line.tokens[i]))
          fail_at(line.no, ErrorKind::MalformedModel,
                  "state '" + line.tokens[i] + "' declared twice");
        states[line.tokens[i]] = m.add_state(line.tokens[i]);
      }
    } else if (key == "init") {
      size_t expect = with_stack ? 3 : 2;
      if (line.tokens.size() != expect)
        fail_at(line.no, ErrorKind::MalformedModel,
                with_stack ? "usage: init <state> <stack-symbol>" : "usage: init <state>");
      init_state = line.tokens[1];
      if (with_stack) init_stack = line.tokens[2];
      init_line = line.no;
      saw_init = true;
    } else if (find_arrow(line) < line.tokens.size()) {
      transitions.push_back(&line);
    } else {
      fail_at(line.no, ErrorKind::MalformedModel, "unrecognized line '" + key + "'");
    }
  }
  if (!with_stack) m.stack.add(".");
  if (m.stack.size() == 0)
    fail(ErrorKind::MalformedModel, "missing stack line");
  if (!saw_init) fail(ErrorKind::MalformedModel, "missing init line");
  auto state_of = [&](size_t no, const std::string& name) {
    auto it = states.find(name);
    if (it != states.end()) return it->second;
    if (pinned_states)
      fail_at(no, ErrorKind::MalformedModel, "state '" + name + "' is not declared");
    uint32_t id = m.add_state(name);
    states[name] = id;
    return id;
  };
  m.initial = state_of(init_line, init_state);
  m.initial_stack =
      with_stack ? at_line(init_line, [&] { return m.stack.require(init_stack); }) : 0;
  for (const TextLine* linep : transitions) {
    const TextLine& line = *linep;
    size_t arrow = find_arrow(line);
    size_t op_from = with_stack ? 2 : 1;
    if (arrow < op_from + 1 || arrow + 1 >= line.tokens.size())
      fail_at(line.no, ErrorKind::MalformedModel,
              with_stack ? "usage: <src> <pop> <op> -> <dst> <push>"
                         : "usage: <src> <op> -> <dst>");
    uint32_t src = state_of(line.no, line.tokens[0]);
    uint32_t pop =
        with_stack ? at_line(line.no, [&] { return m.stack.require(line.tokens[1]); }) : 0;
    std::vector<std::string> op_toks(line.tokens.begin() + op_from,
                                     line.tokens.begin() + arrow);
    MachineOp op = parse_op(line, m, op_toks);
    uint32_t dst = state_of(line.no, line.tokens[arrow + 1]);
    std::vector<uint32_t> push =
        with_stack ? parse_push(line, m.stack, arrow + 2) : std::vector<uint32_t>{0};
    if (!with_stack && line.tokens.size() > arrow + 2)
      fail_at(line.no, ErrorKind::MalformedModel, "trailing tokens after destination");
    m.add_transition(src, pop, op, dst, std::move(push));
  }
  machine_validate(m);
  return m;
}

std::string format_op(const Machine& m, const MachineOp& op) {
  switch (op.kind) {
    case MachineOp::Kind::Nop:
      return "nop";
    case MachineOp::Kind::Inc:
      return "inc " + m.counters[op.target];
    case MachineOp::Kind::Dec:
      return "dec " + m.counters[op.target];
    case MachineOp::Kind::Zero:
      return "zerotest " + m.counters[op.target];
    case MachineOp::Kind::Send:
      return "send " + m.channels[op.target] + " " + m.messages.name(op.msg);
    case MachineOp::Kind::Recv:
      return "recv " + m.channels[op.target] + " " + m.messages.name(op.msg);
  }
  fail(ErrorKind::Internal, "unhandled operation kind");
}

void write_names(std::ostringstream& out, const char* key,
                 const std::vector<std::string>& names) {
  if (names.empty()) return;
  out << key;
  for (const auto& n : names) out << ' ' << n;
  out << '\n';
}

}  // namespace

ParsedModel parse_model(const std::string& text) {
  std::vector<TextLine> lines = tokenize(text);
  if (lines.empty()) fail(ErrorKind::MalformedModel, "empty model file");
  const std::string& tag = lines[0].tokens[0];
  if (lines[0].tokens.size() != 1)
    fail_at(lines[0].no, ErrorKind::MalformedModel,
            "format tag line must be a single token");
  ParsedModel model;
  if (tag == "mhpda") {
    model.kind = ModelKind::Mhpda;
    model.tpda = parse_mhpda(lines);
  } else if (tag == "cm") {
    model.kind = ModelKind::Cm;
    model.machine = parse_machine_text(lines, true);
  } else if (tag == "cfsm") {
    model.kind = ModelKind::Cfsm;
    model.machine = parse_machine_text(lines, false);
  } else {
    fail_at(lines[0].no, ErrorKind::MalformedModel,
            "unknown format '" + tag + "' (expected mhpda, cm or cfsm)");
  }
  return model;
}

std::string serialize_tpda(const Tpda& p) {
  std::ostringstream out;
  out << "mhpda\n";
  out << "heads " << p.heads << '\n';
  write_names(out, "alphabet", p.alphabet.names());
  write_names(out, "stack", p.stack.names());
  out << "init " << p.state_names[p.initial] << ' ' << p.stack.name(p.initial_stack)
      << '\n';
  std::vector<std::string> finals;
  for (size_t s = 0; s < p.state_names.size(); ++s)
    if (p.is_final[s]) finals.push_back(p.state_names[s]);
  write_names(out, "final", finals);
  for (size_t s = 0; s < p.state_names.size(); ++s)
    out << "select " << p.state_names[s] << ' ' << p.head_of[s] + 1 << '\n';
  for (const TpdaTransition& t : p.transitions) {
    std::string read = t.read.is_eps() ? "eps"
                       : t.read.is_end() ? "$"
                                         : p.alphabet.name(t.read.sym);
    out << p.state_names[t.src] << ' ' << p.stack.name(t.pop) << ' ' << read << " -> "
        << p.state_names[t.dst] << ' ' << format_push(p.stack, t.push) << '\n';
  }
  return out.str();
}

std::string serialize_machine(const Machine& m) {
  bool cfsm_form = m.counters.empty() && m.stack.size() == 1;
  std::ostringstream out;
  out << (cfsm_form ? "cfsm" : "cm") << '\n';
  write_names(out, "counters", m.counters);
  write_names(out, "channels", m.channels);
  write_names(out, "msgs", m.messages.names());
  if (!cfsm_form) write_names(out, "stack", m.stack.names());
  write_names(out, "states", m.state_names);
  out << "init " << m.state_names[m.initial];
  if (!cfsm_form) out << ' ' << m.stack.name(m.initial_stack);
  out << '\n';
  for (const MachineTransition& t : m.transitions) {
    out << m.state_names[t.src] << ' ';
    if (!cfsm_form) out << m.stack.name(t.pop) << ' ';
    out << format_op(m, t.op) << " -> " << m.state_names[t.dst];
    if (!cfsm_form) out << ' ' << format_push(m.stack, t.push);
    out << '\n';
  }
  return out.str();
}

uint32_t state_index(const std::vector<std::string>& names, const std::string& name) {
  for (uint32_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  fail(ErrorKind::UnknownTargetState, "no state named '" + name + "'");
}

}  // namespace mhb
