// Acceptance suite: every criterion prints one PASS/FAIL line with its
// runtime. Budgets and expected values are fixed here, not configurable.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <set>

#include "gridsim/constructions.hpp"
#include "gridsim/equivalence.hpp"
#include "gridsim/grid_text.hpp"
#include "test_support.hpp"

using namespace gridsim;
namespace cons = gridsim::construct;

namespace {

struct Criterion {
  std::string name;
  double time_budget_s;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  int failures = 0;
  std::string first_failure;

  Criterion(std::string n, double budget) : name(std::move(n)), time_budget_s(budget) {}
  void fail(const std::string& msg) {
    if (failures++ == 0) first_failure = msg;
  }
  void check(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(Criterion& c) {
  double secs = c.elapsed();
  bool in_time = c.time_budget_s <= 0 || secs < c.time_budget_s;
  bool ok = c.failures == 0 && in_time;
  std::printf("[acceptance] %-34s %s (%.2fs)\n", c.name.c_str(), ok ? "PASS" : "FAIL", secs);
  std::fflush(stdout);
  if (!in_time)
    c.fail("time budget exceeded: " + std::to_string(secs) + "s >= " +
           std::to_string(c.time_budget_s) + "s");
  INFO(c.first_failure);
  REQUIRE(c.failures == 0);
}

bool replay_clean(const GridOutcome& out) {
  return replay_divergence(out.trace, out.space) == std::nullopt;
}

Word expand_pairs(const Word& bits) {
  Word out;
  for (Symbol b : bits) out += (b == '1') ? "10" : "01";
  return out;
}

Word flip_bits(const Word& bits) {
  Word out;
  for (Symbol b : bits) out.push_back(b == '1' ? '0' : '1');
  return out;
}

}  // namespace

TEST_CASE("criterion 1: synchrony reproduction") {
  Criterion c("1 synchrony-reproduction", 1.0);
  GridConfig config = cons::alternating_writers();
  Word expect;
  for (uint64_t k = 1; k <= 500; ++k) {
    expect += "10";
    auto out = run_grid(config, {}, 2 * k);
    if (space_word(out.space) != expect) {
      c.fail("k=" + std::to_string(k) + ": got " + space_word(out.space));
      break;
    }
    if (!replay_clean(out)) c.fail("k=" + std::to_string(k) + ": replay mismatch");
  }
  report(c);
}

TEST_CASE("criterion 2: desynchronized start reproduction") {
  Criterion c("2 desync-reproduction", 0);
  auto out = run_grid(cons::desync_writers(20), {}, 20);
  Word word = space_word(out.space);
  c.check(word.substr(0, 13) == "0000010101010", "prefix was " + word);
  c.check(replay_clean(out), "replay mismatch");
  report(c);
}

TEST_CASE("criterion 3: pair-cell transduction round trip") {
  Criterion c("3 pair-cell-transduction", 10.0);
  testsup::Rng rng(1234);
  CompiledMachine decoder = compile(cons::pair_cell_decoder());
  for (int trial = 0; trial < 1000 && c.failures == 0; ++trial) {
    Word bits = rng.bits(1 + rng.below(1000));
    auto grid = run_grid(cons::pair_cell_encoder(bits), {},
                         cons::pair_cell_fill_horizon(bits.size()));
    Word space = space_word(grid.space);
    if (space != expand_pairs(bits)) {
      c.fail("trial " + std::to_string(trial) + ": space != expansion");
      break;
    }
    auto decoded = run(decoder, "", 3 * space.size() + 6, space);
    if (decoded.outputs()[0] != bits) {
      c.fail("trial " + std::to_string(trial) + ": decode mismatch");
      break;
    }
    if (!replay_clean(grid)) c.fail("trial " + std::to_string(trial) + ": replay mismatch");
  }
  report(c);
}

TEST_CASE("criterion 4: scheduled-exchange transduction") {
  Criterion c("4 exchange-transduction", 0);
  testsup::Rng rng(4321);
  for (int trial = 0; trial < 1000 && c.failures == 0; ++trial) {
    Word bits = rng.bits(1 + rng.below(400));
    auto out = run_grid(cons::scheduled_exchange(bits), {}, bits.size());
    if (space_word(out.space) != flip_bits(bits))
      c.fail("trial " + std::to_string(trial) + ": word != flipped oracle");
    if (!replay_clean(out)) c.fail("trial " + std::to_string(trial) + ": replay mismatch");
  }
  report(c);
}

TEST_CASE("criterion 5: controlled grids equal their flat executions") {
  Criterion c("5 recursive-control-equivalence", 60.0);
  for (uint64_t seed = 1; seed <= 50 && c.failures == 0; ++seed) {
    GridConfig config = cons::random_rational_grid(seed);
    for (uint64_t horizon : {10ull, 100ull, 500ull}) {
      EquivalenceVerdict v = check_equivalence(config, {}, horizon);
      if (!v.equal) {
        c.fail("seed " + std::to_string(seed) + " horizon " + std::to_string(horizon) + ": " +
               v.divergence);
        break;
      }
    }
  }
  report(c);
}

TEST_CASE("criterion 6: flatten names each superrecursiveness source") {
  Criterion c("6 source-taxonomy", 0);
  // Built-in harnesses, one per source, plus premise-satisfying configs.
  for (const auto& info : cons::catalog()) {
    GridConfig config = cons::make_construction(info.name, info.needs_oracle ? "1011" : "", {});
    std::string verdict = flatten_token(flatten(config).obstacle);
    c.check(verdict == config.declared_source,
            info.name + ": flatten said " + verdict + ", declared " + config.declared_source);
  }
  for (uint64_t seed = 100; seed < 120; ++seed) {
    GridConfig config = cons::random_rational_grid(seed);
    c.check(flatten(config).flattenable(),
            "random grid seed " + std::to_string(seed) + " should flatten");
  }
  report(c);
}

TEST_CASE("criterion 7: exact irrational stretch up to a million moves") {
  Criterion c("7 beatty-exactness", 5.0);
  TimeScale s = TimeScale::irrational(IrrationalConstant::Sqrt2);
  for (uint64_t i = 1; i <= 1000000; ++i) {
    uint64_t expect = testsup::isqrt(2 * i * i);
    if (move_ticks(s, i) != expect) {
      c.fail("i=" + std::to_string(i));
      break;
    }
  }
  report(c);
}

TEST_CASE("criterion 8: enumeration certificate soundness and completeness") {
  Criterion c("8 enumeration-soundness", 0);
  MachineSpec copier = cons::input_copier();
  WordOrder order = WordOrder::length_lex(copier);
  // Word index j halts after |w_j|+1 moves and needs one spare move to
  // observe the halt; indices 0..63 (lengths up to 6) all fit in diagonal
  // 63 + 6 + 2 = 71, and index 64 does not.
  EnumerationCertificate cert = enumerate_outputs(copier, order, 71);
  c.check(cert.entries.size() == 64,
          "expected 64 entries, got " + std::to_string(cert.entries.size()));
  std::set<Word> outputs, expected;
  CompiledMachine cm = compile(copier);
  for (const auto& e : cert.entries) {
    outputs.insert(e.output);
    auto direct = run(cm, *order.word_at(e.input_index), e.budget);
    c.check(direct.status == RunStatus::Halted && direct.outputs()[0] == e.output,
            "entry for index " + std::to_string(e.input_index) + " does not replay");
  }
  for (uint64_t j = 0; j < 64; ++j) expected.insert(*order.word_at(j));
  c.check(outputs == expected, "certificate set differs from the first 64 words");
  report(c);
}

TEST_CASE("criterion 9: determinism and trace replay") {
  Criterion c("9 determinism-replay", 0);
  struct Fixture {
    std::string name;
    GridConfig config;
    uint64_t horizon;
  };
  std::vector<Fixture> fixtures = {
      {"synchrony", cons::alternating_writers(), 1000},
      {"desync", cons::desync_writers(20), 20},
      {"pair-cell", cons::pair_cell_encoder("110100111"), cons::pair_cell_fill_horizon(9)},
      {"exchange", cons::scheduled_exchange("10011010"), 8},
      {"grid-17", cons::random_rational_grid(17), 500},
      {"grid-18", cons::random_rational_grid(18), 500},
      {"grid-19", cons::random_rational_grid(19), 500},
  };
  for (const auto& f : fixtures) {
    auto first = run_grid(f.config, {}, f.horizon);
    auto second = run_grid(f.config, {}, f.horizon);
    c.check(print_trace(first.trace) == print_trace(second.trace),
            f.name + ": traces not byte-identical");
    c.check(replay_clean(first), f.name + ": replay diverged");
    c.check(replay(first.trace).same_cells(second.space), f.name + ": cross-run replay mismatch");
  }
  report(c);
}
