#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "gridsim/constructions.hpp"
#include "gridsim/equivalence.hpp"
#include "gridsim/grid_text.hpp"
#include "test_support.hpp"

using namespace gridsim;
namespace cons = gridsim::construct;

namespace {

MachineSpec parity_machine() {
  // Emits 1 for even-length inputs, nothing for odd ones.
  MachineSpec m;
  m.alphabet = {kBlank, '0', '1'};
  m.states = {"e", "o", "done"};
  m.start_state = "e";
  m.output_states = {"done"};
  m.final_states = {"done"};
  m.output_tapes = 1;
  auto toggle = [&m](const char* from, const char* to) {
    for (Symbol c : {'0', '1'}) {
      Rule r;
      r.from = from;
      r.to = to;
      r.read.input = c;
      r.act.move_input = HeadMove::Right;
      m.rules.push_back(r);
    }
  };
  toggle("e", "o");
  toggle("o", "e");
  Rule even;
  even.from = "e";
  even.to = "done";
  even.read.input = kBlank;
  even.act.emit = Emit{'1', 0};
  m.rules.push_back(even);
  Rule odd;
  odd.from = "o";
  odd.to = "done";
  odd.read.input = kBlank;
  m.rules.push_back(odd);
  return m;
}

MachineSpec silent_halter() {
  MachineSpec m;
  m.alphabet = {kBlank, '0', '1'};
  m.states = {"q0"};
  m.start_state = "q0";
  m.final_states = {"q0"};
  return m;  // no output tapes, halts instantly on every input
}

}  // namespace

TEST_CASE("flatten names the ingredient that blocks it") {
  CHECK(flatten(cons::controlled_alternating_writers()).flattenable());

  GridConfig irr = cons::controlled_alternating_writers();
  irr.controller->mode = ControlMode::Local;  // keep the config valid
  irr.machines[0].scale = TimeScale::irrational(IrrationalConstant::Sqrt2);
  CHECK(flatten(irr).obstacle == FlattenObstacle::IrrationalScale);

  CHECK(flatten(cons::scheduled_exchange("101")).obstacle == FlattenObstacle::InjectedSchedule);
  CHECK(flatten(cons::oracle_partner("101")).obstacle == FlattenObstacle::OraclePartnerOutput);
  CHECK(flatten(cons::oracle_initial_info("101")).obstacle ==
        FlattenObstacle::OracleInitialInformation);
  CHECK(flatten(cons::pair_cell_encoder("101")).obstacle == FlattenObstacle::OracleCellChoice);
  CHECK(flatten(cons::alternating_writers()).obstacle == FlattenObstacle::NoGlobalController);
  CHECK(flatten(cons::incommensurable_writers()).obstacle == FlattenObstacle::IrrationalScale);
}

TEST_CASE("flatten verdicts agree with each construction's declared source") {
  for (const auto& info : cons::catalog()) {
    GridConfig c = cons::make_construction(info.name, info.needs_oracle ? "1101" : "", {});
    CHECK(flatten_token(flatten(c).obstacle) == c.declared_source);
  }
  for (uint64_t seed = 0; seed < 20; ++seed) {
    GridConfig c = cons::random_rational_grid(seed);
    CHECK(flatten_token(flatten(c).obstacle) == c.declared_source);
  }
}

TEST_CASE("flat instruction streams pre-resolve every slot") {
  FlattenResult f = flatten(cons::controlled_alternating_writers());
  REQUIRE(f.flattenable());
  auto instrs = f.plan->instructions_up_to(4);
  // Per tick: the controller, then both identity-scale members, all admitted.
  REQUIRE(instrs.size() == 12);
  for (uint64_t t = 1; t <= 4; ++t) {
    CHECK(instrs[(t - 1) * 3] == FlatInstruction{t, kControllerActor, true});
    CHECK(instrs[(t - 1) * 3 + 1] == FlatInstruction{t, 0, true});
    CHECK(instrs[(t - 1) * 3 + 2] == FlatInstruction{t, 1, true});
  }
}

TEST_CASE("grid and flat executions agree on the controlled writer pair") {
  GridConfig c = cons::controlled_alternating_writers();
  CHECK(check_equivalence(c, {}, 100).equal);
  CHECK(check_equivalence(c, {}, 0).equal);
}

TEST_CASE("grid and flat executions agree on random arbitrated grids") {
  for (uint64_t seed = 0; seed < 12; ++seed) {
    GridConfig c = cons::random_rational_grid(seed);
    EquivalenceVerdict v = check_equivalence(c, {}, 150);
    INFO("seed ", seed, ": ", v.divergence);
    CHECK(v.equal);
  }
}

TEST_CASE("check_equivalence refuses configs that do not flatten") {
  CHECK_THROWS_AS(check_equivalence(cons::alternating_writers(), {}, 10), std::invalid_argument);
}

TEST_CASE("flat runs reproduce unresolved conflicts as well") {
  GridConfig c;
  MachineEntry a;
  a.id = "A";
  a.spec = cons::head_marker('0');
  MachineEntry b;
  b.id = "B";
  b.spec = cons::head_marker('1');
  c.machines = {a, b};
  c.policy = ConflictPolicy::Reject;
  ControllerEntry ctrl;
  ctrl.id = "C";
  ctrl.mode = ControlMode::Global;
  ctrl.spec = cons::trivial_controller();
  c.controller = ctrl;
  FlattenResult f = flatten(c);
  REQUIRE(f.flattenable());
  auto grid = run_grid(c, {}, 5);
  auto flat = run_flat(*f.plan, {}, 5);
  CHECK(grid.status == GridOutcome::Status::UnresolvedConflict);
  CHECK(flat.status == GridOutcome::Status::UnresolvedConflict);
  CHECK(grid.space.same_cells(flat.space));
}

TEST_CASE("length-lex order enumerates words by length, then lexicographically") {
  WordOrder order = WordOrder::length_lex(cons::input_copier());
  std::vector<Word> expect = {"", "0", "1", "00", "01", "10", "11", "000"};
  for (size_t i = 0; i < expect.size(); ++i) CHECK(order.word_at(i) == expect[i]);
}

TEST_CASE("a machine-defined order maps unary indices through its outputs") {
  // Indices reach the order machine in unary over its first non-blank symbol.
  WordOrder order = WordOrder::machine_order(cons::input_copier(), 50);
  CHECK(order.word_at(0) == Word{});
  CHECK(order.word_at(5) == "00000");
}

TEST_CASE("the copier certificate lists the enumeration itself") {
  // The copier halts on w after |w|+1 moves and the halt is observed with one
  // spare move, so word index j completes at diagonal j + |w_j| + 2; diagonal
  // 10 covers exactly the first seven words.
  EnumerationCertificate cert =
      enumerate_outputs(cons::input_copier(), WordOrder::length_lex(cons::input_copier()), 10);
  REQUIRE(cert.entries.size() == 7);
  std::vector<Word> outputs;
  for (const auto& e : cert.entries) outputs.push_back(e.output);
  std::sort(outputs.begin(), outputs.end());
  CHECK(outputs == std::vector<Word>{"", "0", "00", "01", "1", "10", "11"});
}

TEST_CASE("a machine that halts without emitting certifies nothing") {
  EnumerationCertificate cert =
      enumerate_outputs(silent_halter(), WordOrder::length_lex(silent_halter()), 40);
  CHECK(cert.entries.empty());
}

TEST_CASE("the parity machine emits 1 with many witnesses") {
  EnumerationCertificate cert =
      enumerate_outputs(parity_machine(), WordOrder::length_lex(parity_machine()), 30);
  std::set<Word> nonempty;
  int ones = 0;
  for (const auto& e : cert.entries)
    if (!e.output.empty()) {
      nonempty.insert(e.output);
      ++ones;
    }
  CHECK(nonempty == std::set<Word>{"1"});
  CHECK(ones > 1);
}

TEST_CASE("certificate entries replay through direct runs") {
  WordOrder order = WordOrder::length_lex(cons::input_copier());
  EnumerationCertificate cert = enumerate_outputs(cons::input_copier(), order, 40);
  CompiledMachine cm = compile(cons::input_copier());
  for (const auto& e : cert.entries) {
    auto direct = run(cm, *order.word_at(e.input_index), e.budget);
    CHECK(direct.status == RunStatus::Halted);
    CHECK(direct.outputs()[0] == e.output);
  }
}

TEST_CASE("certificates grow as list prefixes with the diagonal budget") {
  WordOrder order = WordOrder::length_lex(parity_machine());
  EnumerationCertificate small = enumerate_outputs(parity_machine(), order, 12);
  EnumerationCertificate large = enumerate_outputs(parity_machine(), order, 25);
  REQUIRE(small.entries.size() <= large.entries.size());
  for (size_t i = 0; i < small.entries.size(); ++i)
    CHECK(small.entries[i] == large.entries[i]);
}

TEST_CASE("certificates print one line per entry") {
  EnumerationCertificate cert;
  cert.entries.push_back({0, "", 1});
  cert.entries.push_back({3, "01", 3});
  CHECK(print_certificate(cert) == "0 - 1\n3 01 3\n");
}

TEST_CASE("a finite set emitter certifies exactly its presented set") {
  std::vector<Word> set = {"0", "10", "111"};
  MachineSpec emitter = finite_set_emitter(set);
  REQUIRE(validate(emitter).ok());
  CompiledMachine cm = compile(emitter);
  CHECK(run(cm, "10", 40).outputs()[0] == "10");
  CHECK(run(cm, "11", 40).outputs()[0] == "");
  CHECK(run(cm, "100", 40).outputs()[0] == "");
  CHECK(run(cm, "10", 40).status == RunStatus::Halted);

  EnumerationCertificate cert = enumerate_outputs(emitter, WordOrder::length_lex(emitter), 70);
  std::set<Word> emitted;
  for (const auto& e : cert.entries)
    if (!e.output.empty()) emitted.insert(e.output);
  CHECK(emitted == std::set<Word>(set.begin(), set.end()));

  CHECK_THROWS_AS(finite_set_emitter({"0", "0"}), std::invalid_argument);
  CHECK_THROWS_AS(finite_set_emitter({""}), std::invalid_argument);
  CHECK_THROWS_AS(finite_set_emitter({"2"}), std::invalid_argument);
}

TEST_CASE("budgets never decrease along a dovetail diagonal") {
  WordOrder order = WordOrder::length_lex(cons::input_copier());
  EnumerationCertificate cert = enumerate_outputs(cons::input_copier(), order, 30);
  for (size_t i = 1; i < cert.entries.size(); ++i) {
    uint64_t d_prev = cert.entries[i - 1].input_index + cert.entries[i - 1].budget;
    uint64_t d_here = cert.entries[i].input_index + cert.entries[i].budget;
    CHECK(d_here >= d_prev);
    if (d_here == d_prev) CHECK(cert.entries[i].budget >= cert.entries[i - 1].budget);
  }
}

TEST_CASE("partition harness slices the stream and feeds each segment") {
  auto outs = partition_harness("101101", {2, 4}, cons::input_copier(), 20);
  CHECK(outs == std::vector<Word>{"10", "11", "01"});
}

TEST_CASE("a periodic partition of a periodic stream is constant") {
  Word stream;
  for (int i = 0; i < 12; ++i) stream += "10";
  std::vector<uint64_t> cuts;
  for (uint64_t c = 2; c < stream.size(); c += 2) cuts.push_back(c);
  auto outs = partition_harness(stream, cuts, cons::input_copier(), 20);
  CHECK(outs.size() == 12);
  for (const auto& w : outs) CHECK(w == "10");
}

TEST_CASE("random partitions agree with direct slicing") {
  testsup::Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    Word stream = rng.bits(1 + rng.below(60));
    std::vector<uint64_t> cuts;
    for (uint64_t c = 1; c < stream.size(); ++c)
      if (rng.below(3) == 0) cuts.push_back(c);
    auto outs = partition_harness(stream, cuts, cons::input_copier(), 200);
    std::vector<Word> expect;
    uint64_t begin = 0;
    for (uint64_t c : cuts) {
      expect.push_back(stream.substr(begin, c - begin));
      begin = c;
    }
    expect.push_back(stream.substr(begin));
    CHECK(outs == expect);
  }
}

TEST_CASE("partition harness validates its cut list") {
  CHECK_THROWS_AS(partition_harness("1010", {3, 2}, cons::input_copier(), 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(partition_harness("1010", {5}, cons::input_copier(), 10),
                  std::invalid_argument);
}
