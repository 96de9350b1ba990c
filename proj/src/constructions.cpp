#include "gridsim/constructions.hpp"

#include <stdexcept>

namespace gridsim::construct {

namespace {

constexpr auto kAt = CommWrite::Kind::At;
constexpr auto kPush = CommWrite::Kind::FirstFree;
constexpr auto L = HeadMove::Left;
constexpr auto R = HeadMove::Right;
constexpr auto S = HeadMove::Stay;

MachineSpec base_spec(std::vector<std::string> states, std::string start, bool has_comm,
                      int output_tapes) {
  MachineSpec m;
  m.alphabet = {kBlank, '0', '1'};
  m.states = std::move(states);
  m.start_state = std::move(start);
  m.has_comm = has_comm;
  m.output_tapes = output_tapes;
  return m;
}

Rule rule(std::string from, std::string to) {
  Rule r;
  r.from = std::move(from);
  r.to = std::move(to);
  return r;
}

void check_oracle(const Word& bits) {
  if (bits.empty()) throw std::invalid_argument("oracle word must be nonempty");
  for (Symbol c : bits)
    if (c != '0' && c != '1')
      throw std::invalid_argument("oracle word must be over {0,1}");
}

}  // namespace

MachineSpec even_move_writer(Symbol sym) {
  MachineSpec m = base_spec({"a1", "a2"}, "a1", true, 0);
  m.rules.push_back(rule("a1", "a2"));
  Rule w = rule("a2", "a1");
  w.act.write_comm = {kPush, sym};
  m.rules.push_back(w);
  return m;
}

MachineSpec odd_move_writer(Symbol sym) {
  MachineSpec m = base_spec({"b1", "b2"}, "b1", true, 0);
  Rule w = rule("b1", "b2");
  w.act.write_comm = {kPush, sym};
  m.rules.push_back(w);
  m.rules.push_back(rule("b2", "b1"));
  return m;
}

MachineSpec every_move_writer(Symbol sym) {
  MachineSpec m = base_spec({"w"}, "w", true, 0);
  Rule w = rule("w", "w");
  w.act.write_comm = {kPush, sym};
  m.rules.push_back(w);
  return m;
}

MachineSpec head_marker(Symbol sym) {
  MachineSpec m = base_spec({"m"}, "m", true, 0);
  Rule w = rule("m", "m");
  w.act.write_comm = {kAt, sym};
  w.act.move_comm = R;
  m.rules.push_back(w);
  return m;
}

MachineSpec input_copier() {
  MachineSpec m = base_spec({"scan", "done"}, "scan", false, 1);
  m.output_states = {"scan"};
  m.final_states = {"done"};
  for (Symbol c : {'0', '1'}) {
    Rule r = rule("scan", "scan");
    r.read.input = c;
    r.act.move_input = R;
    r.act.emit = Emit{c, 0};
    m.rules.push_back(r);
  }
  Rule halt = rule("scan", "done");
  halt.read.input = kBlank;
  m.rules.push_back(halt);
  return m;
}

MachineSpec comm_copier() {
  MachineSpec m = base_spec({"c"}, "c", true, 1);
  m.output_states = {"c"};
  for (Symbol c : {'0', '1'}) {
    Rule r = rule("c", "c");
    r.read.comm = c;
    r.act.move_comm = R;
    r.act.emit = Emit{c, 0};
    m.rules.push_back(r);
  }
  Rule wait = rule("c", "c");
  wait.read.comm = kBlank;
  m.rules.push_back(wait);
  return m;
}

MachineSpec scripted_emitter(const Word& w) {
  check_oracle(w);
  std::vector<std::string> states;
  for (size_t i = 0; i < w.size(); ++i) states.push_back("e" + std::to_string(i));
  states.push_back("done");
  MachineSpec m = base_spec(std::move(states), "e0", true, 0);
  m.final_states = {"done"};
  for (size_t i = 0; i < w.size(); ++i) {
    Rule r = rule("e" + std::to_string(i),
                  i + 1 < w.size() ? "e" + std::to_string(i + 1) : "done");
    r.act.write_comm = {kPush, w[i]};
    m.rules.push_back(r);
  }
  return m;
}

MachineSpec pair_cell_writer() {
  MachineSpec m = base_spec({"rd", "s1", "s0", "done"}, "rd", true, 0);
  m.final_states = {"done"};
  {
    Rule r = rule("rd", "s1");  // bit 1: mark the first cell of the pair
    r.read.input = '1';
    r.act.write_comm = {kAt, '1'};
    r.act.move_input = R;
    r.act.move_comm = R;
    m.rules.push_back(r);
  }
  {
    Rule r = rule("s1", "rd");
    r.act.move_comm = R;
    m.rules.push_back(r);
  }
  {
    Rule r = rule("rd", "s0");  // bit 0: mark the second cell
    r.read.input = '0';
    r.act.move_input = R;
    r.act.move_comm = R;
    m.rules.push_back(r);
  }
  {
    Rule r = rule("s0", "rd");
    r.act.write_comm = {kAt, '1'};
    r.act.move_comm = R;
    m.rules.push_back(r);
  }
  {
    Rule r = rule("rd", "done");
    r.read.input = kBlank;
    m.rules.push_back(r);
  }
  return m;
}

MachineSpec sibling_filler() {
  MachineSpec m = base_spec({"look0", "look1", "f1", "f0", "sk"}, "look0", true, 0);
  auto add = [&m](const char* from, const char* to, std::optional<Symbol> comm_read,
                  CommWrite write, HeadMove move) {
    Rule r = rule(from, to);
    r.read.comm = comm_read;
    r.act.write_comm = write;
    r.act.move_comm = move;
    m.rules.push_back(r);
  };
  add("look0", "f1", '1', {}, R);           // writer marked the first cell
  add("f1", "look0", std::nullopt, {kAt, '0'}, R);
  add("look0", "look1", kBlank, {}, R);     // first cell still empty: check the second
  add("look1", "f0", '1', {}, L);           // writer marked the second cell
  add("f0", "sk", std::nullopt, {kAt, '0'}, R);
  add("sk", "look0", std::nullopt, {}, R);
  add("look1", "look0", kBlank, {}, L);     // pair untouched so far: poll
  return m;
}

MachineSpec pair_cell_decoder() {
  MachineSpec m = base_spec({"p0", "d0", "d1"}, "p0", true, 1);
  m.output_states = {"p0"};
  auto add = [&m](const char* from, const char* to, Symbol comm_read, HeadMove move,
                  std::optional<Emit> emit) {
    Rule r = rule(from, to);
    r.read.comm = comm_read;
    r.act.move_comm = move;
    r.act.emit = emit;
    m.rules.push_back(r);
  };
  add("p0", "d0", '0', R, std::nullopt);
  add("p0", "d1", '1', R, std::nullopt);
  add("p0", "p0", kBlank, S, std::nullopt);
  add("d0", "p0", '1', R, Emit{'0', 0});
  add("d0", "d0", kBlank, S, std::nullopt);
  add("d1", "p0", '0', R, Emit{'1', 0});
  add("d1", "d1", kBlank, S, std::nullopt);
  return m;
}

MachineSpec trivial_controller() {
  MachineSpec m = base_spec({"c"}, "c", false, 0);
  m.rules.push_back(rule("c", "c"));
  return m;
}

MachineSpec first_symbol_arbiter() {
  MachineSpec m = base_spec({"r", "h"}, "r", false, 1);
  m.output_states = {"h"};
  m.final_states = {"h"};  // output and final may coincide
  for (Symbol c : {'0', '1'}) {
    Rule r = rule("r", "h");
    r.read.input = c;
    r.act.emit = Emit{c, 0};
    m.rules.push_back(r);
  }
  Rule idle = rule("r", "r");  // keeps the machine quiet when run with no input
  idle.read.input = kBlank;
  m.rules.push_back(idle);
  return m;
}

MachineSpec second_symbol_arbiter() {
  MachineSpec m = base_spec({"r", "r2", "h"}, "r", false, 1);
  m.output_states = {"h"};
  m.final_states = {"h"};
  Rule idle = rule("r", "r");
  idle.read.input = kBlank;
  m.rules.push_back(idle);
  for (Symbol c : {'0', '1'}) {
    Rule skip = rule("r", "r2");
    skip.read.input = c;
    skip.act.move_input = R;
    m.rules.push_back(skip);
  }
  for (Symbol c : {'0', '1'}) {
    Rule r = rule("r2", "h");
    r.read.input = c;
    r.act.emit = Emit{c, 0};
    m.rules.push_back(r);
  }
  return m;
}

MachineSpec directive_controller(const std::vector<Directive>& ds) {
  Word bits = encode_directives(ds);
  std::vector<std::string> states;
  for (size_t i = 0; i <= bits.size(); ++i) states.push_back("g" + std::to_string(i));
  MachineSpec m = base_spec(std::move(states), "g0", false, 1);
  for (size_t i = 1; i <= bits.size(); ++i) m.output_states.push_back("g" + std::to_string(i));
  for (size_t i = 0; i < bits.size(); ++i) {
    Rule r = rule("g" + std::to_string(i), "g" + std::to_string(i + 1));
    r.act.emit = Emit{bits[i], 0};
    m.rules.push_back(r);
  }
  m.rules.push_back(rule("g" + std::to_string(bits.size()), "g" + std::to_string(bits.size())));
  return m;
}

// --- configurations -----------------------------------------------------------

namespace {
MachineEntry member(std::string id, MachineSpec spec, TimeScale scale = TimeScale::identity(),
                    Word input = "") {
  MachineEntry e;
  e.id = std::move(id);
  e.spec = std::move(spec);
  e.scale = scale;
  e.input = std::move(input);
  return e;
}
}  // namespace

GridConfig alternating_writers() {
  GridConfig c;
  c.machines.push_back(member("A", even_move_writer('0')));
  c.machines.push_back(member("B", odd_move_writer('1')));
  c.horizon = 16;
  c.declared_source = "no-global-controller";
  return c;
}

GridConfig controlled_alternating_writers() {
  GridConfig c = alternating_writers();
  ControllerEntry ctrl;
  ctrl.id = "C";
  ctrl.spec = trivial_controller();
  ctrl.mode = ControlMode::Global;
  c.controller = std::move(ctrl);
  c.declared_source = "flattenable";
  return c;
}

GridConfig desync_writers(uint64_t horizon) {
  GridConfig c = alternating_writers();
  std::vector<uint64_t> table;  // one move at tick 10, synchronous afterwards
  for (uint64_t t = 10; t <= horizon; ++t) table.push_back(t);
  c.machines[1].scale = TimeScale::explicit_table(std::move(table));
  c.horizon = horizon;
  return c;
}

GridConfig incommensurable_writers() {
  GridConfig c = alternating_writers();
  c.machines[0].scale = TimeScale::irrational(IrrationalConstant::Sqrt2);
  c.horizon = 20;
  c.declared_source = "irrational-scale";
  return c;
}

uint64_t pair_cell_fill_horizon(size_t oracle_len) { return 6 * uint64_t(oracle_len) + 12; }

GridConfig pair_cell_encoder(const Word& oracle_bits) {
  check_oracle(oracle_bits);
  GridConfig c;
  c.machines.push_back(member("A", sibling_filler()));
  c.machines.push_back(member("B", pair_cell_writer(), TimeScale::identity(), oracle_bits));
  c.horizon = pair_cell_fill_horizon(oracle_bits.size());
  c.oracles.push_back({OracleRole::CellChoice, "B", oracle_bits});
  c.declared_source = "oracle-cell-choice";
  return c;
}

GridConfig oracle_initial_info(const Word& oracle_bits) {
  check_oracle(oracle_bits);
  GridConfig c;
  c.machines.push_back(member("A", input_copier(), TimeScale::identity(), oracle_bits));
  c.horizon = oracle_bits.size() + 2;
  c.oracles.push_back({OracleRole::InitialInformation, "A", oracle_bits});
  c.declared_source = "oracle-initial-information";
  return c;
}

GridConfig oracle_partner(const Word& oracle_bits) {
  check_oracle(oracle_bits);
  GridConfig c;
  c.machines.push_back(member("A", comm_copier()));
  c.machines.push_back(member("B", scripted_emitter(oracle_bits)));
  c.horizon = 2 * oracle_bits.size() + 4;
  c.oracles.push_back({OracleRole::PartnerOutput, "B", oracle_bits});
  c.declared_source = "oracle-partner-output";
  return c;
}

GridConfig scheduled_exchange(const Word& oracle_bits) {
  check_oracle(oracle_bits);
  GridConfig c;
  c.machines.push_back(member("A", every_move_writer('0')));
  c.machines.push_back(member("B", every_move_writer('1')));
  std::vector<std::string> admit;
  for (Symbol b : oracle_bits) admit.push_back(b == '1' ? "A" : "B");
  c.schedule = ExchangeSchedule::injected_ids(std::move(admit));
  c.horizon = oracle_bits.size();
  c.oracles.push_back({OracleRole::ExchangeSchedule, "", oracle_bits});
  c.declared_source = "injected-schedule";
  return c;
}

GridConfig random_rational_grid(uint64_t seed) {
  uint64_t s = mix64(seed ^ 0x6772696473696dull);  // distinct stream per seed
  auto next = [&s] { return s = mix64(s); };

  GridConfig c;
  size_t count = 2 + next() % 2;
  for (size_t i = 0; i < count; ++i) {
    MachineSpec spec;
    Word input;
    switch (next() % 6) {
      case 0: spec = every_move_writer('0'); break;
      case 1: spec = every_move_writer('1'); break;
      case 2: spec = head_marker('0'); break;
      case 3: spec = head_marker('1'); break;
      case 4: spec = comm_copier(); break;
      default: {
        spec = input_copier();
        size_t len = next() % 6;
        for (size_t j = 0; j < len; ++j) input.push_back(next() % 2 ? '1' : '0');
        break;
      }
    }
    uint64_t m = 1 + next() % 4;
    uint64_t n = 1 + next() % m;
    TimeScale scale = (next() % 2) ? TimeScale::identity() : TimeScale::rational(n, m);
    c.machines.push_back(member("M" + std::to_string(i + 1), std::move(spec), scale, input));
  }
  if (next() % 2) {
    // Half the grids carry a colliding marker pair on a shared clock, so the
    // controller's arbitration path sees steady traffic.
    c.machines[0].spec = head_marker('0');
    c.machines[1].spec = head_marker('1');
    c.machines[1].scale = c.machines[0].scale;
  }
  c.schedule = (next() % 2) ? ExchangeSchedule::always() : ExchangeSchedule::seeded(next());
  ControllerEntry ctrl;
  ctrl.id = "C";
  ctrl.spec = (next() % 2) ? first_symbol_arbiter() : second_symbol_arbiter();
  ctrl.mode = ControlMode::Global;
  c.controller = std::move(ctrl);
  c.policy = ConflictPolicy::ControllerArbitrated;
  c.declared_source = "flattenable";
  return c;
}

// --- catalog -------------------------------------------------------------------

const std::vector<ConstructionInfo>& catalog() {
  static const std::vector<ConstructionInfo> entries = {
      {"alternating-writers", false}, {"controlled-alternating-writers", false},
      {"desync", false},              {"incommensurable", false},
      {"pair-cell", true},            {"oracle-initial-info", true},
      {"oracle-partner", true},       {"scheduled-exchange", true},
  };
  return entries;
}

GridConfig make_construction(const std::string& name, const Word& oracle,
                             std::optional<uint64_t> horizon) {
  const ConstructionInfo* info = nullptr;
  for (const auto& e : catalog())
    if (e.name == name) info = &e;
  if (!info) throw std::invalid_argument("unknown construction '" + name + "'");
  if (info->needs_oracle && oracle.empty())
    throw std::invalid_argument("construction '" + name + "' needs --oracle");

  GridConfig c;
  if (name == "alternating-writers")
    c = alternating_writers();
  else if (name == "controlled-alternating-writers")
    c = controlled_alternating_writers();
  else if (name == "desync")
    c = desync_writers(horizon.value_or(20));
  else if (name == "incommensurable")
    c = incommensurable_writers();
  else if (name == "pair-cell")
    c = pair_cell_encoder(oracle);
  else if (name == "oracle-initial-info")
    c = oracle_initial_info(oracle);
  else if (name == "oracle-partner")
    c = oracle_partner(oracle);
  else
    c = scheduled_exchange(oracle);
  if (horizon) c.horizon = *horizon;
  return c;
}

}  // namespace gridsim::construct
