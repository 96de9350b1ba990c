#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "gridsim/constructions.hpp"
#include "gridsim/grid_text.hpp"
#include "test_support.hpp"

using namespace gridsim;

TEST_CASE("machine text round-trips through print and parse") {
  std::vector<MachineSpec> specs = {
      construct::even_move_writer('0'), construct::odd_move_writer('1'),
      construct::every_move_writer('1'), construct::head_marker('0'),
      construct::input_copier(),         construct::comm_copier(),
      construct::scripted_emitter("1011"), construct::pair_cell_writer(),
      construct::sibling_filler(),       construct::pair_cell_decoder(),
      construct::trivial_controller(),   construct::first_symbol_arbiter(),
      construct::second_symbol_arbiter(),
      construct::directive_controller({{2, 1, 5, 9, 0, 100}}),
  };
  for (const auto& spec : specs) {
    std::string text = print_machine(spec);
    MachineSpec reparsed = parse_machine_text(text);
    CHECK(reparsed == spec);
    CHECK(print_machine(reparsed) == text);  // printing is canonical
  }
}

TEST_CASE("random machines round-trip as well") {
  testsup::Rng rng(99);
  for (int i = 0; i < 25; ++i) {
    MachineSpec spec = testsup::random_machine(rng);
    CHECK(parse_machine_text(print_machine(spec)) == spec);
  }
}

TEST_CASE("machine parser reports file and line on malformed input") {
  const char* bad_rule = "alphabet: _ 0\nstates: q0\nstart: q0\ntapes: input work\nrule: q0 0 ->\n";
  try {
    parse_machine_text(bad_rule, "m.tm");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.file() == "m.tm");
    CHECK(e.line() == 5);
  }
  CHECK_THROWS_AS(parse_machine_text("tapes: work input\n", "m.tm"), ParseError);
  CHECK_THROWS_AS(parse_machine_text("rule: a * -> b -\n", "m.tm"), ParseError);  // rule before tapes
  CHECK_THROWS_AS(parse_machine_text("alphabet: _\nwat: x\n", "m.tm"), ParseError);
}

TEST_CASE("reserved characters are rejected as symbols") {
  CHECK_FALSE(is_symbol_char('*'));
  CHECK_FALSE(is_symbol_char('-'));
  CHECK_FALSE(is_symbol_char('@'));
  CHECK_FALSE(is_symbol_char('#'));
  CHECK_FALSE(is_symbol_char(' '));
  CHECK(is_symbol_char('0'));
  CHECK(is_symbol_char('x'));
  CHECK_THROWS_AS(parse_machine_text("alphabet: _ 0 **\nstates: q\nstart: q\ntapes: input work\n"),
                  ParseError);
}

TEST_CASE("grid configs round-trip through a directory") {
  testsup::TempDir dir("grid_roundtrip");
  std::vector<GridConfig> configs = {
      construct::alternating_writers(),
      construct::controlled_alternating_writers(),
      construct::desync_writers(20),
      construct::incommensurable_writers(),
      construct::pair_cell_encoder("10110"),
      construct::oracle_initial_info("110"),
      construct::oracle_partner("1011"),
      construct::scheduled_exchange("1010"),
      construct::random_rational_grid(7),
  };
  int i = 0;
  for (const auto& config : configs) {
    std::string sub = (dir.path() / ("c" + std::to_string(i++))).string();
    std::string path = write_grid_config(config, sub);
    GridConfig reparsed = parse_grid_config_file(path);
    // The writer fills in default machine file names; normalize before comparing.
    GridConfig expect = config;
    for (auto& m : expect.machines)
      if (m.file.empty()) m.file = "machines/" + m.id + ".tm";
    if (expect.controller && expect.controller->file.empty())
      expect.controller->file = "machines/" + expect.controller->id + ".tm";
    CHECK(reparsed == expect);
    CHECK(print_grid_config(reparsed) == print_grid_config(expect));
  }
}

TEST_CASE("grid config parser reports bad declarations") {
  testsup::TempDir dir("grid_errors");
  {
    std::ofstream mf(dir.path() / "a.tm");
    mf << print_machine(construct::every_move_writer('0'));
  }
  auto parse = [&](const std::string& body) {
    return parse_grid_config_text(body, "config.grid", dir.path().string());
  };
  CHECK_THROWS_AS(parse("machine A\n  input = -\nend\n"), ParseError);      // no file line
  CHECK_THROWS_AS(parse("machine A\n  file = a.tm\n"), ParseError);         // missing end
  CHECK_THROWS_AS(parse("machine A\n  file = a.tm\nend\nschedule = sometimes\n"), ParseError);
  CHECK_THROWS_AS(parse("machine A\n  file = a.tm\n  scale = rational x 2\nend\n"), ParseError);
  CHECK_THROWS_AS(parse("schedule = always\n"), ParseError);                // no machines
  CHECK_THROWS_AS(parse("machine A\n  file = missing.tm\nend\n"), ParseError);
  GridConfig ok = parse("machine A\n  file = a.tm\n  scale = rational 1 2\nend\nschedule = always\n");
  CHECK(ok.machines.size() == 1);
  CHECK(ok.machines[0].scale == TimeScale::rational(1, 2));
}

TEST_CASE("traces round-trip through print and parse") {
  Trace t;
  t.events.push_back({TraceEvent::Kind::Write, 0, "-", 2, "", "", '1', {}, ""});
  t.events.push_back({TraceEvent::Kind::Move, 1, "A", 1, "q0", "q1", kBlank, {}, ""});
  t.events.push_back({TraceEvent::Kind::Emit, 1, "A", 0, "", "", '0', {}, ""});
  t.events.push_back({TraceEvent::Kind::Write, 1, "A", 0, "", "", '0', {}, ""});
  t.events.push_back(
      {TraceEvent::Kind::Conflict, 2, "", 5, "", "", kBlank, {{"A", '0'}, {"B", '1'}}, "A"});
  t.events.push_back({TraceEvent::Kind::Deny, 3, "B", 0, "", "", kBlank, {}, "schedule"});
  t.events.push_back({TraceEvent::Kind::Halt, 4, "A", 0, "", "", kBlank, {}, ""});
  t.events.push_back({TraceEvent::Kind::Stuck, 5, "B", 0, "", "", kBlank, {}, ""});
  t.final_tick = 8;
  SUBCASE("ok ending") { t.unresolved_conflict = false; }
  SUBCASE("conflict ending") { t.unresolved_conflict = true; }
  std::string text = print_trace(t);
  Trace reparsed = parse_trace_text(text);
  CHECK(reparsed == t);
  CHECK(print_trace(reparsed) == text);
}

TEST_CASE("trace parser rejects malformed lines") {
  CHECK_THROWS_AS(parse_trace_text("write 1 A x 0\nend 1 ok\n"), ParseError);
  CHECK_THROWS_AS(parse_trace_text("write 1 A 0 0\n"), ParseError);  // missing end line
  CHECK_THROWS_AS(parse_trace_text("end 1 maybe\n"), ParseError);
  CHECK_THROWS_AS(parse_trace_text("end 1 ok\nmove 2 A 1 a b\n"), ParseError);
}

TEST_CASE("empty words render as '-' in both directions") {
  CHECK(word_token("") == "-");
  CHECK(word_token("10") == "10");
  CHECK(parse_word_token("-") == "");
  CHECK(parse_word_token("10") == "10");
}
