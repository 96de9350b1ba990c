#include "gridsim/grid.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gridsim {

const MachineEntry* GridConfig::find_machine(const std::string& id) const {
  for (const auto& m : machines)
    if (m.id == id) return &m;
  return nullptr;
}

namespace {

bool valid_id(const std::string& id) {
  if (id.empty() || id == "-") return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'))
      return false;
  return true;
}

bool spec_writes_comm(const MachineSpec& s) {
  for (const auto& r : s.rules)
    if (r.act.write_comm.kind != CommWrite::Kind::None) return true;
  return false;
}

}  // namespace

std::vector<std::string> validate_grid(const GridConfig& config) {
  std::vector<std::string> problems;
  auto bad = [&problems](const std::string& m) { problems.push_back(m); };

  if (config.machines.empty()) bad("a grid needs at least one machine");
  std::set<std::string> ids;
  for (const auto& m : config.machines) {
    if (!valid_id(m.id)) bad("bad machine id '" + m.id + "'");
    if (!ids.insert(m.id).second) bad("duplicate machine id '" + m.id + "'");
    ValidationReport r = validate(m.spec);
    for (const auto& p : r.problems) bad(m.id + ": " + p);
    for (const auto& p : validate_scale(m.scale)) bad(m.id + ": " + p);
    if (r.ok())
      for (Symbol c : m.input)
        if (c == kBlank || std::find(m.spec.alphabet.begin(), m.spec.alphabet.end(), c) ==
                               m.spec.alphabet.end()) {
          bad(m.id + ": input symbol '" + std::string(1, c) + "' outside alphabet\\{blank}");
          break;
        }
  }
  if (config.controller) {
    const auto& c = *config.controller;
    if (!valid_id(c.id)) bad("bad controller id '" + c.id + "'");
    if (ids.count(c.id)) bad("controller id '" + c.id + "' collides with a member id");
    ValidationReport r = validate(c.spec);
    for (const auto& p : r.problems) bad(c.id + ": " + p);
    if (c.mode == ControlMode::Global) {
      if (spec_writes_comm(c.spec)) bad("a global controller may not write the shared space");
      for (const auto& m : config.machines)
        if (m.scale.kind == TimeScale::Kind::Irrational)
          bad(m.id + ": global control requires member scales commensurable with the controller");
    }
  }
  if (config.effective_policy() == ConflictPolicy::ControllerArbitrated && !config.controller)
    bad("controller-arbitrated conflict policy without a controller");
  if (config.schedule.source == ExchangeSchedule::Source::Injected)
    for (const auto& id : config.schedule.injected)
      if (!ids.count(id)) {
        bad("injected schedule names unknown machine '" + id + "'");
        break;
      }
  for (const auto& t : config.oracles) {
    if (t.bits.empty()) bad("oracle tag with empty bit stream");
    bool needs_machine = t.role != OracleRole::ExchangeSchedule;
    if (needs_machine && !ids.count(t.machine))
      bad("oracle tag names unknown machine '" + t.machine + "'");
  }
  return problems;
}

Regime classify(const GridConfig& config) {
  if (config.has_global_controller()) return Regime::ExplicitlyProcedural;
  bool all_ruled = true, none_ruled = true;
  for (const auto& m : config.machines) {
    if (m.rule_sets.empty())
      all_ruled = false;
    else
      none_ruled = false;
  }
  if (all_ruled) return Regime::ImplicitlyProcedural;
  if (!config.controller && none_ruled) return Regime::Free;
  return Regime::PartiallyFree;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Free: return "free";
    case Regime::PartiallyFree: return "partially_free";
    case Regime::ImplicitlyProcedural: return "implicitly_procedural";
    case Regime::ExplicitlyProcedural: return "explicitly_procedural";
  }
  return "?";
}

// --- directives -------------------------------------------------------------

namespace {
void push_bits(Word& w, uint64_t value, int bits) {
  for (int b = bits - 1; b >= 0; --b) w.push_back((value >> b) & 1 ? '1' : '0');
}
uint64_t pull_bits(const Word& w, size_t& pos, int bits) {
  uint64_t v = 0;
  for (int b = 0; b < bits; ++b) v = (v << 1) | uint64_t(w[pos++] == '1');
  return v;
}
}  // namespace

Word encode_directives(const std::vector<Directive>& ds) {
  Word w;
  w.reserve(ds.size() * kDirectiveBits);
  for (const auto& d : ds) {
    push_bits(w, uint64_t(d.mode), 2);
    push_bits(w, d.machine, 6);
    push_bits(w, d.tick_lo, 20);
    push_bits(w, d.tick_hi, 20);
    push_bits(w, d.cell_lo, 15);
    push_bits(w, d.cell_hi, 15);
  }
  return w;
}

void DirectiveSet::ingest(const Word& controller_out1) {
  while (controller_out1.size() - consumed_bits >= kDirectiveBits) {
    size_t pos = consumed_bits;
    Directive d;
    d.mode = int(pull_bits(controller_out1, pos, 2));
    d.machine = size_t(pull_bits(controller_out1, pos, 6));
    d.tick_lo = pull_bits(controller_out1, pos, 20);
    d.tick_hi = pull_bits(controller_out1, pos, 20);
    d.cell_lo = pull_bits(controller_out1, pos, 15);
    d.cell_hi = pull_bits(controller_out1, pos, 15);
    consumed_bits = pos;
    active.push_back(d);
  }
}

namespace {
// Last directive covering (machine, tick) decides; default is full access.
const Directive* covering(const std::vector<Directive>& ds, size_t machine, uint64_t tick) {
  const Directive* hit = nullptr;
  for (const auto& d : ds)
    if (d.machine == machine && tick >= d.tick_lo && tick <= d.tick_hi) hit = &d;
  return hit;
}
}  // namespace

bool DirectiveSet::read_ok(size_t machine, uint64_t tick, uint64_t cell) const {
  const Directive* d = covering(active, machine, tick);
  if (!d) return true;
  return (d->mode & 1) != 0 && cell >= d->cell_lo && cell <= d->cell_hi;
}

bool DirectiveSet::write_ok(size_t machine, uint64_t tick, uint64_t cell) const {
  const Directive* d = covering(active, machine, tick);
  if (!d) return true;
  return (d->mode & 2) != 0 && cell >= d->cell_lo && cell <= d->cell_hi;
}

// --- trace replay -----------------------------------------------------------

CommSpace replay(const Trace& trace, ConflictPolicy policy) {
  CommSpace s(policy);
  for (const auto& e : trace.events)
    if (e.kind == TraceEvent::Kind::Write) s.commit(e.tick, e.machine, e.a, e.sym);
  return s;
}

std::optional<std::string> replay_divergence(const Trace& trace, const CommSpace& final_space) {
  CommSpace replayed = replay(trace);
  if (replayed.same_cells(final_space)) return std::nullopt;
  uint64_t top = std::max(replayed.highest_written_cell(), final_space.highest_written_cell());
  for (uint64_t c = 0; c <= top; ++c)
    if (replayed.read(c) != final_space.read(c)) {
      std::ostringstream os;
      os << "cell " << c << ": replayed '" << replayed.read(c) << "' vs final '"
         << final_space.read(c) << "'";
      return os.str();
    }
  return "cell map mismatch";
}

// --- engine -----------------------------------------------------------------

GridEngine::GridEngine(const GridConfig& config,
                       const std::map<std::string, Word>& input_overrides, bool record_trace)
    : config_(config),
      policy_(config.effective_policy()),
      space_(config.effective_policy()),
      record_trace_(record_trace) {
  auto problems = validate_grid(config);
  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid grid config:";
    for (const auto& p : problems) os << " [" << p << "]";
    throw std::invalid_argument(os.str());
  }
  for (const auto& entry : config.machines) {
    Member m;
    m.id = entry.id;
    m.machine = compile(entry.spec);
    auto it = input_overrides.find(entry.id);
    const Word& input = it != input_overrides.end() ? it->second : entry.input;
    m.config = initial_config(m.machine, input);
    members_.push_back(std::move(m));
  }
  if (config.controller) {
    Member c;
    c.id = config.controller->id;
    c.machine = compile(config.controller->spec);
    c.config = initial_config(c.machine, "");
    controller_ = std::move(c);
    arbiter_ = compile(config.controller->spec);
  }
  for (uint64_t i = 0; i < config.space_preload.size(); ++i)
    if (config.space_preload[i] != kBlank) {
      space_.commit(0, "-", i, config.space_preload[i]);
      record({TraceEvent::Kind::Write, 0, "-", i, "", "", config.space_preload[i], {}, ""});
    }
}

void GridEngine::record(TraceEvent e) {
  if (record_trace_) trace_.events.push_back(std::move(e));
}

uint64_t GridEngine::next_free_cell() const {
  uint64_t c = space_.first_unwritten();
  auto staged_at = [this](uint64_t cell) {
    for (const auto& s : staged_)
      if (s.cell == cell) return true;
    return false;
  };
  while (staged_at(c) || space_.cells().count(c)) ++c;
  return c;
}

void GridEngine::run_slot(uint64_t tick, Member& m, size_t member_index, bool is_controller) {
  if (m.state != MemberState::Running) return;  // occupies the slot, does nothing
  if (m.machine.is_final_state[size_t(m.config.state)]) {
    m.state = MemberState::Halted;
    if (!m.terminal_recorded)
      record({TraceEvent::Kind::Halt, tick, m.id, 0, "", "", kBlank, {}, ""});
    m.terminal_recorded = true;
    return;
  }
  bool has_comm = m.machine.spec.has_comm;
  Symbol comm_sym = has_comm ? space_.read(m.config.comm_head) : kBlank;
  const Rule* rule = match_rule(m.machine, m.config, comm_sym);
  if (!rule) {
    m.state = MemberState::Stuck;
    if (!m.terminal_recorded)
      record({TraceEvent::Kind::Stuck, tick, m.id, 0, "", "", kBlank, {}, ""});
    m.terminal_recorded = true;
    return;
  }
  if (!is_controller && config_.has_global_controller()) {
    bool wants_read = has_comm && m.machine.state_reads_comm[size_t(m.config.state)];
    if (wants_read && !directives_.read_ok(member_index, tick, m.config.comm_head)) {
      record({TraceEvent::Kind::Deny, tick, m.id, 0, "", "", kBlank, {}, "directive"});
      return;
    }
    if (rule->act.write_comm.kind != CommWrite::Kind::None) {
      uint64_t target = rule->act.write_comm.kind == CommWrite::Kind::At ? m.config.comm_head
                                                                         : next_free_cell();
      if (!directives_.write_ok(member_index, tick, target)) {
        record({TraceEvent::Kind::Deny, tick, m.id, 0, "", "", kBlank, {}, "directive"});
        return;
      }
    }
  }
  std::string from = m.machine.name_of(m.config.state);
  CommHooks hooks;
  hooks.read = [this](uint64_t cell) { return space_.read(cell); };
  if (is_controller) {
    hooks.write_at = [](uint64_t, Symbol) {
      throw std::logic_error("controller writes are rejected by validation");
    };
    hooks.write_first_free = [](Symbol) {
      throw std::logic_error("controller writes are rejected by validation");
    };
  } else {
    hooks.write_at = [this, member_index, &m](uint64_t cell, Symbol s) {
      staged_.push_back({member_index, m.id, cell, s});
    };
    hooks.write_first_free = [this, member_index, &m](Symbol s) {
      staged_.push_back({member_index, m.id, next_free_cell(), s});
    };
  }
  apply_rule(m.machine, m.config, *rule, hooks);
  record({TraceEvent::Kind::Move, tick, m.id, m.config.local_clock, from,
          m.machine.name_of(m.config.state), kBlank, {}, ""});
  if (rule->act.emit)
    record({TraceEvent::Kind::Emit, tick, m.id, uint64_t(rule->act.emit->tape), "", "",
            rule->act.emit->sym, {}, ""});
}

void GridEngine::controller_slot(uint64_t tick) {
  if (!controller_) return;
  run_slot(tick, *controller_, size_t(-1), true);
}

void GridEngine::member_slot(uint64_t tick, size_t member_index, bool admitted) {
  Member& m = members_.at(member_index);
  if (m.state != MemberState::Running) return;
  if (!admitted && !m.machine.is_final_state[size_t(m.config.state)]) {
    record({TraceEvent::Kind::Deny, tick, m.id, 0, "", "", kBlank, {}, "schedule"});
    return;
  }
  run_slot(tick, m, member_index, false);  // halt detection happens regardless of admission
}

std::optional<size_t> GridEngine::arbitrate(const Staged& a, const Staged& b) {
  if (!arbiter_) return std::nullopt;
  Word encoded;
  encoded.push_back(a.sym);
  encoded.push_back(b.sym);
  for (Symbol c : encoded)
    if (std::find(arbiter_->spec.alphabet.begin(), arbiter_->spec.alphabet.end(), c) ==
        arbiter_->spec.alphabet.end())
      return std::nullopt;
  RunOutcome out = run(*arbiter_, encoded, 256);
  if (out.config.outputs.empty() || out.config.outputs[0].empty()) return std::nullopt;
  Symbol verdict = out.config.outputs[0][0];
  if (verdict == a.sym) return 0;
  if (verdict == b.sym) return 1;
  return std::nullopt;
}

bool GridEngine::commit_tick(uint64_t tick) {
  bool fatal = false;
  std::map<uint64_t, std::vector<size_t>> by_cell;  // staged indices, mover order
  for (size_t i = 0; i < staged_.size(); ++i) by_cell[staged_[i].cell].push_back(i);
  std::vector<char> commit(staged_.size(), 1);
  for (auto& [cell, group] : by_cell) {
    bool all_same = std::all_of(group.begin(), group.end(), [&](size_t i) {
      return staged_[i].sym == staged_[group[0]].sym;
    });
    if (all_same) continue;
    std::optional<size_t> winner;
    switch (policy_) {
      case ConflictPolicy::Reject:
        break;
      case ConflictPolicy::PriorityOrder:
        winner = group[0];  // earliest mover in declared order
        break;
      case ConflictPolicy::ControllerArbitrated: {
        size_t cur = group[0];
        bool resolved = true;
        for (size_t j = 1; j < group.size() && resolved; ++j) {
          if (staged_[group[j]].sym == staged_[cur].sym) continue;
          auto w = arbitrate(staged_[cur], staged_[group[j]]);
          if (!w) {
            resolved = false;
            break;
          }
          if (*w == 1) cur = group[j];
        }
        if (resolved) winner = cur;
        break;
      }
    }
    TraceEvent conflict{TraceEvent::Kind::Conflict, tick, "", cell, "", "", kBlank, {}, "-"};
    for (size_t i : group) conflict.contenders.emplace_back(staged_[i].id, staged_[i].sym);
    if (winner) conflict.detail = staged_[*winner].id;
    record(std::move(conflict));
    for (size_t i : group) commit[i] = 0;
    if (winner)
      commit[*winner] = 1;
    else
      fatal = true;
  }
  // Same-tick log entries keep the mover order: the declared writer order
  // is the tie-break the log promises.
  for (size_t i = 0; i < staged_.size(); ++i) {
    if (!commit[i]) continue;
    space_.commit(tick, staged_[i].id, staged_[i].cell, staged_[i].sym);
    record({TraceEvent::Kind::Write, tick, staged_[i].id, staged_[i].cell, "", "", staged_[i].sym,
            {}, ""});
  }
  staged_.clear();
  if (controller_ && config_.has_global_controller() && !controller_->config.outputs.empty())
    directives_.ingest(controller_->config.outputs[0]);
  return !fatal;
}

GridOutcome GridEngine::take_outcome(uint64_t final_tick, bool unresolved) {
  GridOutcome out;
  out.status = unresolved ? GridOutcome::Status::UnresolvedConflict : GridOutcome::Status::Completed;
  out.trace = std::move(trace_);
  out.trace.final_tick = final_tick;
  out.trace.unresolved_conflict = unresolved;
  out.space = std::move(space_);
  for (auto& m : members_) {
    out.outputs.emplace_back(m.id, m.config.outputs);
    MemberState st = m.state;
    if (st == MemberState::Running && m.machine.is_final_state[size_t(m.config.state)])
      st = MemberState::Halted;
    out.member_states[m.id] = st;
  }
  return out;
}

GridOutcome run_grid(const GridConfig& config, const std::map<std::string, Word>& input_overrides,
                     uint64_t horizon) {
  GridEngine engine(config, input_overrides, true);

  struct Cursor {
    uint64_t next_index = 1;
    std::optional<uint64_t> next_tick;
  };
  std::vector<Cursor> cursors(config.machines.size());
  for (size_t m = 0; m < cursors.size(); ++m)
    cursors[m].next_tick = move_tick_opt(config.machines[m].scale, 1);

  bool unresolved = false;
  uint64_t tick = 0;
  for (tick = 1; tick <= horizon && !unresolved; ++tick) {
    engine.controller_slot(tick);
    for (size_t m = 0; m < cursors.size(); ++m) {
      if (!cursors[m].next_tick || *cursors[m].next_tick != tick) continue;
      cursors[m].next_index += 1;
      cursors[m].next_tick = move_tick_opt(config.machines[m].scale, cursors[m].next_index);
      engine.member_slot(tick, m, admits(config.schedule, tick, config.machines[m].id));
    }
    if (!engine.commit_tick(tick)) unresolved = true;
  }
  return engine.take_outcome(unresolved ? tick - 1 : horizon, unresolved);
}

}  // namespace gridsim
