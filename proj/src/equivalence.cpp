#include "gridsim/equivalence.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gridsim {

const char* flatten_token(FlattenObstacle o) {
  switch (o) {
    case FlattenObstacle::None: return "flattenable";
    case FlattenObstacle::InjectedSchedule: return "injected-schedule";
    case FlattenObstacle::OracleInitialInformation: return "oracle-initial-information";
    case FlattenObstacle::OraclePartnerOutput: return "oracle-partner-output";
    case FlattenObstacle::OracleCellChoice: return "oracle-cell-choice";
    case FlattenObstacle::IrrationalScale: return "irrational-scale";
    case FlattenObstacle::NoGlobalController: return "no-global-controller";
  }
  return "?";
}

FlattenResult flatten(const GridConfig& config) {
  auto problems = validate_grid(config);
  if (!problems.empty()) throw std::invalid_argument("flatten: invalid config: " + problems[0]);

  FlattenResult res;
  bool schedule_injected = config.schedule.source == ExchangeSchedule::Source::Injected;
  for (const auto& t : config.oracles)
    if (t.role == OracleRole::ExchangeSchedule) schedule_injected = true;
  if (schedule_injected) {
    res.obstacle = FlattenObstacle::InjectedSchedule;
    return res;
  }
  for (const auto& t : config.oracles) {
    if (t.role == OracleRole::InitialInformation) {
      res.obstacle = FlattenObstacle::OracleInitialInformation;
      return res;
    }
    if (t.role == OracleRole::PartnerOutput) {
      res.obstacle = FlattenObstacle::OraclePartnerOutput;
      return res;
    }
    if (t.role == OracleRole::CellChoice) {
      res.obstacle = FlattenObstacle::OracleCellChoice;
      return res;
    }
  }
  for (const auto& m : config.machines)
    if (m.scale.kind == TimeScale::Kind::Irrational) {
      res.obstacle = FlattenObstacle::IrrationalScale;
      return res;
    }
  if (!config.has_global_controller()) {
    res.obstacle = FlattenObstacle::NoGlobalController;
    return res;
  }
  res.plan = FlatPlan{config};
  return res;
}

std::vector<FlatInstruction> FlatPlan::instructions_up_to(uint64_t horizon) const {
  std::vector<TimeScale> scales;
  for (const auto& m : config.machines) scales.push_back(m.scale);
  auto merged = interleaving(scales, horizon);

  std::vector<FlatInstruction> out;
  size_t next = 0;
  for (uint64_t tick = 1; tick <= horizon; ++tick) {
    out.push_back({tick, kControllerActor, true});
    while (next < merged.size() && merged[next].first == tick) {
      size_t m = merged[next].second;
      out.push_back({tick, m, admits(config.schedule, tick, config.machines[m].id)});
      ++next;
    }
  }
  return out;
}

GridOutcome run_flat(const FlatPlan& plan, const std::map<std::string, Word>& input_overrides,
                     uint64_t horizon) {
  std::vector<FlatInstruction> instructions = plan.instructions_up_to(horizon);
  GridEngine engine(plan.config, input_overrides, false);
  size_t i = 0;
  for (uint64_t tick = 1; tick <= horizon; ++tick) {
    while (i < instructions.size() && instructions[i].tick == tick) {
      const FlatInstruction& ins = instructions[i++];
      if (ins.actor == kControllerActor)
        engine.controller_slot(tick);
      else
        engine.member_slot(tick, ins.actor, ins.admitted);
    }
    if (!engine.commit_tick(tick)) return engine.take_outcome(tick, true);
  }
  return engine.take_outcome(horizon, false);
}

EquivalenceVerdict check_equivalence(const GridConfig& config,
                                     const std::map<std::string, Word>& inputs, uint64_t horizon) {
  FlattenResult f = flatten(config);
  if (!f.flattenable())
    throw std::invalid_argument(std::string("check_equivalence: config is not flattenable: ") +
                                flatten_token(f.obstacle));
  GridOutcome concurrent = run_grid(config, inputs, horizon);
  GridOutcome flat = run_flat(*f.plan, inputs, horizon);

  EquivalenceVerdict v;
  auto diverge = [&v](const std::string& what) {
    v.equal = false;
    v.divergence = what;
  };
  if (concurrent.status != flat.status) {
    diverge("run status differs");
    return v;
  }
  if (!concurrent.space.same_cells(flat.space)) {
    uint64_t top = std::max(concurrent.space.highest_written_cell(),
                            flat.space.highest_written_cell());
    for (uint64_t c = 0; c <= top; ++c)
      if (concurrent.space.read(c) != flat.space.read(c)) {
        std::ostringstream os;
        os << "cell " << c << ": grid '" << concurrent.space.read(c) << "' vs flat '"
           << flat.space.read(c) << "'";
        diverge(os.str());
        return v;
      }
  }
  for (size_t m = 0; m < concurrent.outputs.size(); ++m) {
    const auto& [id, grid_words] = concurrent.outputs[m];
    const auto& flat_words = flat.outputs[m].second;
    for (size_t t = 0; t < grid_words.size(); ++t)
      if (grid_words[t] != flat_words[t]) {
        std::ostringstream os;
        os << id << " out" << (t + 1) << ": grid '" << grid_words[t] << "' vs flat '"
           << flat_words[t] << "'";
        diverge(os.str());
        return v;
      }
  }
  return v;
}

// --- enumeration -------------------------------------------------------------

WordOrder WordOrder::length_lex(const MachineSpec& for_machine) {
  WordOrder o;
  for (Symbol c : for_machine.alphabet)
    if (c != kBlank) o.symbols.push_back(c);
  return o;
}

WordOrder WordOrder::machine_order(MachineSpec order_machine, uint64_t per_index_budget) {
  WordOrder o;
  o.kind = Kind::Machine;
  o.order_machine = std::move(order_machine);
  o.order_budget = per_index_budget;
  return o;
}

std::optional<Word> WordOrder::word_at(uint64_t index) const {
  if (kind == Kind::Machine) {
    CompiledMachine cm = compile(*order_machine);
    Symbol unary = kBlank;
    for (Symbol c : cm.spec.alphabet)
      if (c != kBlank) {
        unary = c;
        break;
      }
    if (unary == kBlank) return std::nullopt;
    RunOutcome out = run(cm, Word(index, unary), order_budget);
    if (out.status != RunStatus::Halted) return std::nullopt;
    return out.config.outputs.empty() ? Word{} : out.config.outputs[0];
  }
  size_t k = symbols.size();
  if (k == 0) return index == 0 ? std::optional<Word>(Word{}) : std::nullopt;
  uint64_t len = 0, count = 1, start = 0;
  while (index >= start + count) {
    start += count;
    len += 1;
    count *= k;
  }
  uint64_t r = index - start;
  Word w(len, symbols[0]);
  for (size_t i = len; i-- > 0;) {
    w[i] = symbols[r % k];
    r /= k;
  }
  return w;
}

EnumerationCertificate enumerate_outputs(const MachineSpec& spec, const WordOrder& order,
                                         uint64_t diagonal_budget) {
  EnumerationCertificate cert;
  CompiledMachine cm = compile(spec);
  std::vector<bool> recorded;
  for (uint64_t d = 0; d <= diagonal_budget; ++d) {
    for (uint64_t budget = 0; budget <= d; ++budget) {
      uint64_t index = d - budget;
      if (index < recorded.size() && recorded[index]) continue;
      auto w = order.word_at(index);
      if (!w) continue;
      RunOutcome out = run(cm, *w, budget);
      if (out.status != RunStatus::Halted) continue;
      if (index >= recorded.size()) recorded.resize(index + 1, false);
      recorded[index] = true;
      if (cm.spec.output_tapes > 0)
        cert.entries.push_back({index, out.config.outputs[0], budget});
    }
  }
  return cert;
}

std::string print_certificate(const EnumerationCertificate& cert) {
  std::ostringstream os;
  for (const auto& e : cert.entries)
    os << e.input_index << ' ' << (e.output.empty() ? "-" : e.output) << ' ' << e.budget << "\n";
  return os.str();
}

MachineSpec finite_set_emitter(const std::vector<Word>& words) {
  std::set<Word> members(words.begin(), words.end());
  if (members.size() != words.size())
    throw std::invalid_argument("finite_set_emitter: duplicate words");
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("finite_set_emitter: the empty word is not admissible");
    for (Symbol c : w)
      if (c != '0' && c != '1')
        throw std::invalid_argument("finite_set_emitter: words must be over {0,1}");
  }
  std::set<Word> prefixes{""};
  for (const auto& w : words)
    for (size_t len = 1; len <= w.size(); ++len) prefixes.insert(w.substr(0, len));

  // One trie state per live prefix. The input is mirrored onto the working
  // tape behind a start marker; on acceptance the work head rewinds to the
  // marker and replays the word onto the output tape.
  MachineSpec m;
  m.alphabet = {kBlank, '0', '1', 'm'};
  auto state_of = [](const Word& prefix) { return "t" + prefix; };
  m.states = {"init"};
  for (const auto& p : prefixes) m.states.push_back(state_of(p));
  m.states.insert(m.states.end(), {"rw", "say", "done", "rej"});
  m.start_state = "init";
  m.output_states = {"say"};
  m.final_states = {"done", "rej"};
  m.output_tapes = 1;

  {
    Rule r;  // drop the marker, then start scanning
    r.from = "init";
    r.to = state_of("");
    r.act.write_work = 'm';
    r.act.move_work = HeadMove::Right;
    m.rules.push_back(r);
  }
  for (const auto& p : prefixes) {
    for (Symbol c : {'0', '1', 'm'}) {
      Rule r;
      r.from = state_of(p);
      r.read.input = c;
      if (c != 'm' && prefixes.count(p + c)) {
        r.to = state_of(p + c);
        r.act.write_work = c;
        r.act.move_input = HeadMove::Right;
        r.act.move_work = HeadMove::Right;
      } else {
        r.to = "rej";
      }
      m.rules.push_back(r);
    }
    Rule at_end;
    at_end.from = state_of(p);
    at_end.read.input = kBlank;
    at_end.to = members.count(p) ? "rw" : "rej";
    m.rules.push_back(at_end);
  }
  for (Symbol c : {'0', '1', kBlank}) {
    Rule r;
    r.from = "rw";
    r.to = "rw";
    r.read.work = c;
    r.act.move_work = HeadMove::Left;
    m.rules.push_back(r);
  }
  {
    Rule r;
    r.from = "rw";
    r.to = "say";
    r.read.work = 'm';
    r.act.move_work = HeadMove::Right;
    m.rules.push_back(r);
  }
  for (Symbol c : {'0', '1'}) {
    Rule r;
    r.from = "say";
    r.to = "say";
    r.read.work = c;
    r.act.move_work = HeadMove::Right;
    r.act.emit = Emit{c, 0};
    m.rules.push_back(r);
  }
  {
    Rule r;
    r.from = "say";
    r.to = "done";
    r.read.work = kBlank;
    m.rules.push_back(r);
  }
  return m;
}

std::vector<Word> partition_harness(const Word& stream_prefix, const std::vector<uint64_t>& cuts,
                                    const MachineSpec& spec, uint64_t per_segment_budget) {
  uint64_t prev = 0;
  for (size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] > stream_prefix.size())
      throw std::invalid_argument("cut position beyond the stream prefix");
    if (i > 0 && cuts[i] <= cuts[i - 1])
      throw std::invalid_argument("cut positions must be strictly increasing");
    prev = cuts[i];
  }
  (void)prev;
  CompiledMachine cm = compile(spec);
  std::vector<Word> outputs;
  uint64_t begin = 0;
  auto run_segment = [&](uint64_t from, uint64_t to) {
    Word segment = stream_prefix.substr(from, to - from);
    RunOutcome out = run(cm, segment, per_segment_budget);
    outputs.push_back(cm.spec.output_tapes > 0 ? out.config.outputs[0] : Word{});
  };
  for (uint64_t cut : cuts) {
    run_segment(begin, cut);
    begin = cut;
  }
  run_segment(begin, stream_prefix.size());
  return outputs;
}

}  // namespace gridsim
