#include "gridsim/machine.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gridsim {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool in_alphabet(const MachineSpec& s, Symbol c) {
  return std::find(s.alphabet.begin(), s.alphabet.end(), c) != s.alphabet.end();
}

std::string pattern_str(const MachineSpec& s, const RulePattern& p) {
  std::string out = "(";
  auto tok = [](std::optional<Symbol> o) { return o ? std::string(1, *o) : std::string("*"); };
  out += tok(p.input);
  out += "," + tok(p.work);
  if (s.has_comm) out += "," + tok(p.comm);
  out += ")";
  return out;
}

// Patterns overlap iff every slot intersects; a wildcard intersects anything.
bool slots_overlap(const std::optional<Symbol>& a, const std::optional<Symbol>& b) {
  return !a || !b || *a == *b;
}

bool patterns_overlap(const MachineSpec& s, const RulePattern& a, const RulePattern& b) {
  if (!slots_overlap(a.input, b.input)) return false;
  if (!slots_overlap(a.work, b.work)) return false;
  if (s.has_comm && !slots_overlap(a.comm, b.comm)) return false;
  return true;
}

}  // namespace

ValidationReport validate(const MachineSpec& spec) {
  ValidationReport rep;
  auto bad = [&rep](const std::string& msg) { rep.problems.push_back(msg); };

  if (!in_alphabet(spec, kBlank)) bad("alphabet missing the blank symbol '_'");
  {
    std::set<Symbol> seen;
    for (Symbol c : spec.alphabet)
      if (!seen.insert(c).second) bad(std::string("duplicate alphabet symbol '") + c + "'");
  }
  {
    std::set<std::string> seen;
    for (const auto& q : spec.states)
      if (!seen.insert(q).second) bad("duplicate state '" + q + "'");
  }
  if (spec.output_tapes < 0) bad("negative output tape count");

  if (!contains(spec.states, spec.start_state))
    bad("start-state violation: '" + spec.start_state + "' not in the state set");
  for (const auto& q : spec.output_states)
    if (!contains(spec.states, q)) bad("output state '" + q + "' not in the state set");
  for (const auto& q : spec.final_states)
    if (!contains(spec.states, q)) bad("final state '" + q + "' not in the state set");

  for (size_t i = 0; i < spec.rules.size(); ++i) {
    const Rule& r = spec.rules[i];
    std::string where = "rule " + std::to_string(i + 1);
    if (!contains(spec.states, r.from)) bad(where + ": unknown state '" + r.from + "'");
    if (!contains(spec.states, r.to)) bad(where + ": unknown state '" + r.to + "'");
    auto check_sym = [&](std::optional<Symbol> o, const char* slot) {
      if (o && !in_alphabet(spec, *o))
        bad(where + ": symbol '" + std::string(1, *o) + "' in " + slot + " not in the alphabet");
    };
    check_sym(r.read.input, "input pattern");
    check_sym(r.read.work, "work pattern");
    check_sym(r.act.write_work, "work write");
    if (spec.has_comm) {
      check_sym(r.read.comm, "comm pattern");
      if (r.act.write_comm.kind != CommWrite::Kind::None)
        check_sym(r.act.write_comm.sym, "comm write");
    } else {
      if (r.read.comm) bad(where + ": comm pattern without a comm connection");
      if (r.act.write_comm.kind != CommWrite::Kind::None)
        bad(where + ": comm write without a comm connection");
    }
    if (r.act.emit) {
      check_sym(r.act.emit->sym, "emission");
      if (r.act.emit->sym == kBlank) bad(where + ": blank may not be emitted to an output tape");
      if (r.act.emit->tape < 0 || r.act.emit->tape >= spec.output_tapes)
        bad(where + ": emission targets a tape outside the roster");
      if (!contains(spec.output_states, r.to))
        bad(where + ": emission requires the target state '" + r.to + "' to be an output state");
    }
  }

  // Determinism: within a from-state, no two rules may have overlapping
  // read patterns (a shared key is the special case of two equal patterns).
  for (size_t i = 0; i < spec.rules.size(); ++i)
    for (size_t j = i + 1; j < spec.rules.size(); ++j) {
      const Rule& a = spec.rules[i];
      const Rule& b = spec.rules[j];
      if (a.from != b.from) continue;
      if (patterns_overlap(spec, a.read, b.read))
        bad("nondeterminism at (" + a.from + ", " + pattern_str(spec, a.read) + " vs " +
            pattern_str(spec, b.read) + ")");
    }

  return rep;
}

CompiledMachine compile(const MachineSpec& spec) {
  ValidationReport rep = validate(spec);
  if (!rep.ok()) {
    std::ostringstream os;
    os << "cannot compile an ill-formed machine:";
    for (const auto& p : rep.problems) os << " [" << p << "]";
    throw std::invalid_argument(os.str());
  }
  CompiledMachine m;
  m.spec = spec;
  for (size_t i = 0; i < spec.states.size(); ++i) m.state_ids[spec.states[i]] = StateId(i);
  m.is_output_state.assign(spec.states.size(), false);
  m.is_final_state.assign(spec.states.size(), false);
  for (const auto& q : spec.output_states) m.is_output_state[size_t(m.state_ids[q])] = true;
  for (const auto& q : spec.final_states) m.is_final_state[size_t(m.state_ids[q])] = true;
  m.rules_by_state.assign(spec.states.size(), {});
  m.state_reads_comm.assign(spec.states.size(), false);
  for (size_t i = 0; i < spec.rules.size(); ++i) {
    size_t from = size_t(m.state_ids[spec.rules[i].from]);
    m.rules_by_state[from].push_back(int(i));
    if (spec.rules[i].read.comm) m.state_reads_comm[from] = true;
  }
  m.start = m.state_ids[spec.start_state];
  return m;
}

MachineConfig initial_config(const CompiledMachine& m, const Word& input,
                             const Word& comm_preload) {
  for (Symbol c : input)
    if (c == kBlank || std::find(m.spec.alphabet.begin(), m.spec.alphabet.end(), c) ==
                           m.spec.alphabet.end())
      throw std::invalid_argument(std::string("input symbol '") + c + "' outside alphabet\\{blank}");
  MachineConfig c;
  c.state = m.start;
  c.input.cells.assign(input.begin(), input.end());
  c.priv_comm.cells.assign(comm_preload.begin(), comm_preload.end());
  c.outputs.assign(size_t(m.spec.output_tapes), Word{});
  return c;
}

const Rule* match_rule(const CompiledMachine& m, const MachineConfig& c, Symbol comm_sym) {
  Symbol in_sym = c.input.at(c.input_head);
  Symbol wk_sym = c.work.at(c.work_head);
  for (int ri : m.rules_by_state[size_t(c.state)]) {
    const Rule& r = m.spec.rules[size_t(ri)];
    if (r.read.input && *r.read.input != in_sym) continue;
    if (r.read.work && *r.read.work != wk_sym) continue;
    if (m.spec.has_comm && r.read.comm && *r.read.comm != comm_sym) continue;
    return &r;
  }
  return nullptr;
}

namespace {
uint64_t moved(uint64_t head, HeadMove mv) {
  switch (mv) {
    case HeadMove::Left: return head == 0 ? 0 : head - 1;  // one-sided tape, clamp at 0
    case HeadMove::Right: return head + 1;
    case HeadMove::Stay: return head;
  }
  return head;
}
}  // namespace

void apply_rule(const CompiledMachine& m, MachineConfig& c, const Rule& r,
                const CommHooks& hooks) {
  if (r.act.write_work) c.work.set(c.work_head, *r.act.write_work);
  switch (r.act.write_comm.kind) {
    case CommWrite::Kind::None: break;
    case CommWrite::Kind::At: hooks.write_at(c.comm_head, r.act.write_comm.sym); break;
    case CommWrite::Kind::FirstFree: hooks.write_first_free(r.act.write_comm.sym); break;
  }
  c.input_head = moved(c.input_head, r.act.move_input);
  c.work_head = moved(c.work_head, r.act.move_work);
  if (m.spec.has_comm) c.comm_head = moved(c.comm_head, r.act.move_comm);
  if (r.act.emit) c.outputs[size_t(r.act.emit->tape)].push_back(r.act.emit->sym);
  c.state = m.id_of(r.to);
  c.local_clock += 1;
}

namespace {
CommHooks private_hooks(MachineConfig& c) {
  CommHooks h;
  h.read = [&c](uint64_t cell) { return c.priv_comm.at(cell); };
  h.write_at = [&c](uint64_t cell, Symbol s) { c.priv_comm.set(cell, s); };
  h.write_first_free = [&c](Symbol s) {
    uint64_t cell = 0;
    while (c.priv_comm.at(cell) != kBlank) ++cell;
    c.priv_comm.set(cell, s);
  };
  return h;
}
}  // namespace

StepStatus step(const CompiledMachine& m, MachineConfig& c) {
  if (m.is_final_state[size_t(c.state)]) return StepStatus::Halted;
  Symbol comm_sym = m.spec.has_comm ? c.priv_comm.at(c.comm_head) : kBlank;
  const Rule* r = match_rule(m, c, comm_sym);
  if (!r) return StepStatus::Stuck;
  CommHooks hooks = private_hooks(c);
  apply_rule(m, c, *r, hooks);
  return StepStatus::Applied;
}

RunOutcome run(const CompiledMachine& m, const Word& input, uint64_t horizon,
               const Word& comm_preload) {
  RunOutcome out;
  out.config = initial_config(m, input, comm_preload);
  for (uint64_t moves = 0; moves < horizon; ++moves) {
    switch (step(m, out.config)) {
      case StepStatus::Applied: break;
      case StepStatus::Halted: out.status = RunStatus::Halted; return out;
      case StepStatus::Stuck: out.status = RunStatus::Stuck; return out;
    }
  }
  out.status = RunStatus::HorizonExhausted;  // zero budget lands here for any machine
  return out;
}

}  // namespace gridsim
