#pragma once
// Deterministic multi-tape machine: one read-only input tape, one working
// tape, an optional connection to a shared cell tape, and zero or more
// append-only output tapes. Specs are plain data (possibly ill-formed until
// validated); execution runs on a compiled, index-based form.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gridsim {

using Symbol = char;
using Word = std::string;  // finite word over the alphabet, never contains kBlank

inline constexpr Symbol kBlank = '_';

enum class HeadMove : char { Left = 'L', Right = 'R', Stay = 'S' };

// Write action on the shared cell tape. At = write under the comm head;
// FirstFree = write into the lowest unwritten cell (head untouched).
struct CommWrite {
  enum class Kind { None, At, FirstFree };
  Kind kind = Kind::None;
  Symbol sym = kBlank;
  bool operator==(const CommWrite&) const = default;
};

struct Emit {
  Symbol sym = kBlank;
  int tape = 0;  // output tape index, 0-based
  bool operator==(const Emit&) const = default;
};

// Read pattern per readable head; nullopt matches any symbol.
struct RulePattern {
  std::optional<Symbol> input;
  std::optional<Symbol> work;
  std::optional<Symbol> comm;  // meaningful only when the roster has a comm connection
  bool operator==(const RulePattern&) const = default;
};

struct RuleEffect {
  std::optional<Symbol> write_work;  // nullopt = leave cell unchanged
  CommWrite write_comm;
  HeadMove move_input = HeadMove::Stay;
  HeadMove move_work = HeadMove::Stay;
  HeadMove move_comm = HeadMove::Stay;
  std::optional<Emit> emit;
  bool operator==(const RuleEffect&) const = default;
};

struct Rule {
  std::string from;
  std::string to;
  RulePattern read;
  RuleEffect act;
  bool operator==(const Rule&) const = default;
};

// The machine tuple: alphabet, states, output states, final states, start
// state, tape roster, rules. States and symbols are stored by name so that
// ill-formed specs (unknown states, foreign symbols) are representable and
// reported by validate() rather than being unconstructible.
struct MachineSpec {
  std::vector<Symbol> alphabet;  // must contain kBlank
  std::vector<std::string> states;
  std::vector<std::string> output_states;
  std::vector<std::string> final_states;
  std::string start_state;
  bool has_comm = false;  // roster includes a shared-tape connection
  int output_tapes = 0;   // k >= 0
  std::vector<Rule> rules;
  bool operator==(const MachineSpec&) const = default;
};

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

// Lists every invariant violation; empty report iff the spec is well-formed.
ValidationReport validate(const MachineSpec& spec);

// One-sided tape, index 0 upward; unwritten cells read as blank.
struct Tape {
  std::vector<Symbol> cells;
  Symbol at(uint64_t i) const { return i < cells.size() ? cells[i] : kBlank; }
  void set(uint64_t i, Symbol s) {
    if (i >= cells.size()) cells.resize(i + 1, kBlank);
    cells[i] = s;
  }
  bool operator==(const Tape&) const = default;
};

using StateId = int;

// Validated, index-based execution form. Owns a copy of the spec.
struct CompiledMachine {
  MachineSpec spec;
  std::map<std::string, StateId> state_ids;
  std::vector<bool> is_output_state;
  std::vector<bool> is_final_state;
  std::vector<std::vector<int>> rules_by_state;  // rule indices per from-state
  // Per state: does any rule inspect the comm symbol (concrete pattern)?
  std::vector<bool> state_reads_comm;
  StateId start = 0;

  StateId id_of(const std::string& name) const { return state_ids.at(name); }
  const std::string& name_of(StateId s) const { return spec.states[size_t(s)]; }
};

// Precondition: validate(spec) is empty. Throws std::invalid_argument otherwise.
CompiledMachine compile(const MachineSpec& spec);

struct MachineConfig {
  StateId state = 0;
  Tape input;
  Tape work;
  Tape priv_comm;  // standalone runs only; grids substitute the shared space
  uint64_t input_head = 0;
  uint64_t work_head = 0;
  uint64_t comm_head = 0;
  std::vector<Word> outputs;   // one word per output tape
  uint64_t local_clock = 0;    // moves executed
  bool operator==(const MachineConfig&) const = default;
};

MachineConfig initial_config(const CompiledMachine& m, const Word& input,
                             const Word& comm_preload = "");

// Shared-tape access used while applying a rule. Reads must observe the
// pre-step (grid: pre-tick) state; writes may be staged by the caller.
struct CommHooks {
  std::function<Symbol(uint64_t cell)> read;
  std::function<void(uint64_t cell, Symbol sym)> write_at;
  std::function<void(Symbol sym)> write_first_free;
};

enum class StepStatus { Applied, Halted, Stuck };

// The unique rule applicable in the current configuration, or nullptr.
// comm_sym is the symbol visible under the comm head (ignored without comm).
const Rule* match_rule(const CompiledMachine& m, const MachineConfig& c, Symbol comm_sym);

// Applies one rule: writes, head moves, state change, emission, clock + 1.
void apply_rule(const CompiledMachine& m, MachineConfig& c, const Rule& r, const CommHooks& hooks);

// Single standalone step against the private comm tape.
StepStatus step(const CompiledMachine& m, MachineConfig& c);

enum class RunStatus { Halted, Stuck, HorizonExhausted };

struct RunOutcome {
  MachineConfig config;
  RunStatus status = RunStatus::HorizonExhausted;
  const std::vector<Word>& outputs() const { return config.outputs; }
};

// Runs step() until the machine halts, gets stuck, or the move budget is
// spent. A zero budget always reports HorizonExhausted. The input word must
// be blank-free and within the alphabet.
RunOutcome run(const CompiledMachine& m, const Word& input, uint64_t horizon,
               const Word& comm_preload = "");

}  // namespace gridsim
