#include "gridsim/machine_text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace gridsim {

bool is_symbol_char(char c) {
  if (!std::isprint(static_cast<unsigned char>(c))) return false;
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  switch (c) {
    case '*': case '-': case '@': case '>': case '#': return false;
    default: return true;
  }
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line;
  if (auto pos = body.find('#'); pos != std::string::npos) body.resize(pos);
  std::istringstream is(body);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

struct Parser {
  std::string file;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file, line, msg); }

  Symbol symbol(const std::string& tok) const {
    if (tok.size() != 1 || (tok[0] != kBlank && !is_symbol_char(tok[0])))
      fail("bad symbol token '" + tok + "'");
    return tok[0];
  }

  std::optional<Symbol> read_pattern(const std::string& tok) const {
    if (tok == "*") return std::nullopt;
    return symbol(tok);
  }

  HeadMove move(const std::string& tok) const {
    if (tok == "L") return HeadMove::Left;
    if (tok == "R") return HeadMove::Right;
    if (tok == "S") return HeadMove::Stay;
    fail("bad move token '" + tok + "' (expected L, R or S)");
  }
};

int out_tape_index(const std::string& name) {
  if (name.size() < 4 || name.compare(0, 3, "out") != 0) return -1;
  int v = 0;
  for (size_t i = 3; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
    v = v * 10 + (name[i] - '0');
  }
  return v >= 1 ? v : -1;
}

}  // namespace

MachineSpec parse_machine_text(const std::string& text, const std::string& name) {
  MachineSpec spec;
  Parser p{name};
  bool saw_tapes = false;
  bool saw_alphabet = false, saw_states = false, saw_output = false, saw_final = false,
       saw_start = false;

  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    ++p.line;
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    std::vector<std::string> args(toks.begin() + 1, toks.end());

    if (key == "alphabet:") {
      if (saw_alphabet) p.fail("duplicate alphabet line");
      saw_alphabet = true;
      for (const auto& t : args) spec.alphabet.push_back(p.symbol(t));
    } else if (key == "states:") {
      if (saw_states) p.fail("duplicate states line");
      saw_states = true;
      spec.states = args;
    } else if (key == "output_states:") {
      if (saw_output) p.fail("duplicate output_states line");
      saw_output = true;
      spec.output_states = args;
    } else if (key == "final_states:") {
      if (saw_final) p.fail("duplicate final_states line");
      saw_final = true;
      spec.final_states = args;
    } else if (key == "start:") {
      if (saw_start) p.fail("duplicate start line");
      if (args.size() != 1) p.fail("start line expects exactly one state");
      saw_start = true;
      spec.start_state = args[0];
    } else if (key == "tapes:") {
      if (saw_tapes) p.fail("duplicate tapes line");
      saw_tapes = true;
      size_t i = 0;
      if (i >= args.size() || args[i] != "input") p.fail("tape roster must begin with 'input'");
      ++i;
      if (i >= args.size() || args[i] != "work") p.fail("tape roster needs 'work' after 'input'");
      ++i;
      if (i < args.size() && args[i] == "comm") {
        spec.has_comm = true;
        ++i;
      }
      int expect = 1;
      for (; i < args.size(); ++i, ++expect)
        if (out_tape_index(args[i]) != expect)
          p.fail("output tapes must be named out1..outK in order, got '" + args[i] + "'");
      spec.output_tapes = expect - 1;
    } else if (key == "rule:") {
      if (!saw_tapes) p.fail("rule before the tapes line");
      Rule r;
      size_t i = 0;
      auto need = [&](const char* what) -> const std::string& {
        if (i >= args.size()) p.fail(std::string("rule truncated, expected ") + what);
        return args[i++];
      };
      r.from = need("a from-state");
      r.read.input = p.read_pattern(need("an input read token"));
      r.read.work = p.read_pattern(need("a work read token"));
      if (spec.has_comm) r.read.comm = p.read_pattern(need("a comm read token"));
      if (need("'->'") != "->") p.fail("expected '->' in rule");
      r.to = need("a to-state");
      {
        const std::string& w = need("a work write token");
        if (w != "-") r.act.write_work = p.symbol(w);
      }
      if (spec.has_comm) {
        const std::string& w = need("a comm write token");
        if (w == "-") {
          r.act.write_comm.kind = CommWrite::Kind::None;
        } else if (w.size() == 2 && w[0] == '@') {
          r.act.write_comm = {CommWrite::Kind::FirstFree, p.symbol(w.substr(1))};
        } else {
          r.act.write_comm = {CommWrite::Kind::At, p.symbol(w)};
        }
      }
      r.act.move_input = p.move(need("an input move"));
      r.act.move_work = p.move(need("a work move"));
      if (spec.has_comm) r.act.move_comm = p.move(need("a comm move"));
      if (i < args.size()) {
        if (need("'emit'") != "emit") p.fail("unexpected trailing tokens in rule");
        Emit e;
        e.sym = p.symbol(need("an emitted symbol"));
        if (need("'->'") != "->") p.fail("expected '->' after the emitted symbol");
        int tape = out_tape_index(need("an output tape name"));
        if (tape < 1 || tape > spec.output_tapes) p.fail("emission targets an unknown output tape");
        e.tape = tape - 1;
        r.act.emit = e;
      }
      if (i != args.size()) p.fail("unexpected trailing tokens in rule");
      spec.rules.push_back(std::move(r));
    } else {
      p.fail("unknown line '" + key + "'");
    }
  }

  p.line = 0;
  if (!saw_alphabet) p.fail("missing alphabet line");
  if (!saw_states) p.fail("missing states line");
  if (!saw_start) p.fail("missing start line");
  if (!saw_tapes) p.fail("missing tapes line");
  return spec;
}

MachineSpec parse_machine_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open machine file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_machine_text(buf.str(), path);
}

namespace {
std::string write_token(const std::optional<Symbol>& w) {
  return w ? std::string(1, *w) : std::string("-");
}
std::string pattern_token(const std::optional<Symbol>& r) {
  return r ? std::string(1, *r) : std::string("*");
}
char move_token(HeadMove m) { return char(m); }
}  // namespace

std::string print_machine(const MachineSpec& spec) {
  std::ostringstream os;
  os << "alphabet:";
  for (Symbol c : spec.alphabet) os << ' ' << c;
  os << "\nstates:";
  for (const auto& q : spec.states) os << ' ' << q;
  os << "\noutput_states:";
  for (const auto& q : spec.output_states) os << ' ' << q;
  os << "\nfinal_states:";
  for (const auto& q : spec.final_states) os << ' ' << q;
  os << "\nstart: " << spec.start_state;
  os << "\ntapes: input work";
  if (spec.has_comm) os << " comm";
  for (int i = 1; i <= spec.output_tapes; ++i) os << " out" << i;
  os << '\n';
  for (const Rule& r : spec.rules) {
    os << "rule: " << r.from << ' ' << pattern_token(r.read.input) << ' '
       << pattern_token(r.read.work);
    if (spec.has_comm) os << ' ' << pattern_token(r.read.comm);
    os << " -> " << r.to << ' ' << write_token(r.act.write_work);
    if (spec.has_comm) {
      switch (r.act.write_comm.kind) {
        case CommWrite::Kind::None: os << " -"; break;
        case CommWrite::Kind::At: os << ' ' << r.act.write_comm.sym; break;
        case CommWrite::Kind::FirstFree: os << " @" << r.act.write_comm.sym; break;
      }
    }
    os << ' ' << move_token(r.act.move_input) << ' ' << move_token(r.act.move_work);
    if (spec.has_comm) os << ' ' << move_token(r.act.move_comm);
    if (r.act.emit) os << " emit " << r.act.emit->sym << " -> out" << (r.act.emit->tape + 1);
    os << '\n';
  }
  return os.str();
}

}  // namespace gridsim
