#pragma once
// A grid run composes member machines, the shared cell tape, per-machine
// time scales, an exchange schedule and an optional controller into one
// deterministic global tick loop. Reads observe the pre-tick space; writes
// are staged per tick and committed as a batch with conflict detection.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridsim/comm_space.hpp"
#include "gridsim/machine.hpp"
#include "gridsim/scheduling.hpp"

namespace gridsim {

struct MachineEntry {
  std::string id;
  std::string file;  // relative path used by the textual config; may be empty
  MachineSpec spec;
  Word input;  // default input word ("" = empty)
  TimeScale scale;
  std::vector<std::string> rule_sets;  // declared local interaction rule-set ids
  bool operator==(const MachineEntry&) const = default;
};

enum class ControlMode { Global, Local };

struct ControllerEntry {
  std::string id;
  std::string file;
  MachineSpec spec;
  ControlMode mode = ControlMode::Global;
  bool operator==(const ControllerEntry&) const = default;
};

enum class OracleRole { InitialInformation, PartnerOutput, ExchangeSchedule, CellChoice };

// Declares that part of the configuration replays an externally injected
// stream (the finite stand-in for a non-enumerable source).
struct OracleTag {
  OracleRole role = OracleRole::InitialInformation;
  std::string machine;  // empty for ExchangeSchedule
  Word bits;
  bool operator==(const OracleTag&) const = default;
};

struct GridConfig {
  std::vector<MachineEntry> machines;
  std::optional<ControllerEntry> controller;
  ExchangeSchedule schedule;
  std::optional<ConflictPolicy> policy;  // see effective_policy()
  std::optional<uint64_t> horizon;       // default horizon for CLI runs
  Word space_preload;                    // '_' positions stay unwritten
  std::vector<OracleTag> oracles;
  std::string declared_source;  // informational; never consulted by flatten

  // Declared policy, or controller-arbitrated when a controller exists and
  // reject otherwise.
  ConflictPolicy effective_policy() const {
    if (policy) return *policy;
    return controller ? ConflictPolicy::ControllerArbitrated : ConflictPolicy::Reject;
  }
  const MachineEntry* find_machine(const std::string& id) const;
  bool has_global_controller() const {
    return controller && controller->mode == ControlMode::Global;
  }
  bool operator==(const GridConfig&) const = default;
};

std::vector<std::string> validate_grid(const GridConfig& config);

enum class Regime { Free, PartiallyFree, ImplicitlyProcedural, ExplicitlyProcedural };
Regime classify(const GridConfig& config);
const char* regime_name(Regime r);

// ---------------------------------------------------------------------------
// Controller directives (global mode). The controller's first output tape is
// read as a bit stream of fixed-width records; each record scopes one member
// over a tick window and a cell range:
//
//   mode:2  machine:6  tick_lo:20  tick_hi:20  cell_lo:15  cell_hi:15
//
// mode 0 denies all access, 1 allows reads only, 2 writes only, 3 both. An
// all-ones tick_hi/cell_hi leaves the window open. The last record covering
// (machine, tick) decides; uncovered pairs default to full access. Records
// take effect the tick after they are completely emitted.

struct Directive {
  int mode = 3;
  size_t machine = 0;
  uint64_t tick_lo = 1, tick_hi = kOpen20;
  uint64_t cell_lo = 0, cell_hi = kOpen15;
  static constexpr uint64_t kOpen20 = (1u << 20) - 1;
  static constexpr uint64_t kOpen15 = (1u << 15) - 1;
  bool operator==(const Directive&) const = default;
};

inline constexpr size_t kDirectiveBits = 2 + 6 + 20 + 20 + 15 + 15;

Word encode_directives(const std::vector<Directive>& ds);  // '0'/'1' word

struct DirectiveSet {
  std::vector<Directive> active;
  size_t consumed_bits = 0;

  void ingest(const Word& controller_out1);
  bool read_ok(size_t machine, uint64_t tick, uint64_t cell) const;
  bool write_ok(size_t machine, uint64_t tick, uint64_t cell) const;
};

// ---------------------------------------------------------------------------
// Trace: the replayable per-tick event record.

struct TraceEvent {
  enum class Kind { Write, Move, Emit, Conflict, Deny, Halt, Stuck };
  Kind kind = Kind::Write;
  uint64_t tick = 0;
  std::string machine;  // writer / mover / emitter; empty for Conflict
  uint64_t a = 0;       // Write,Conflict: cell; Move: move index; Emit: 0-based tape
  std::string from, to;                                    // Move
  Symbol sym = kBlank;                                     // Write, Emit
  std::vector<std::pair<std::string, Symbol>> contenders;  // Conflict
  std::string detail;  // Deny reason; Conflict winner id ("-" = none)
  bool operator==(const TraceEvent&) const = default;
};

struct Trace {
  std::vector<TraceEvent> events;
  uint64_t final_tick = 0;
  bool unresolved_conflict = false;
  bool operator==(const Trace&) const = default;
};

// Rebuilds the final space from the trace's write events alone.
CommSpace replay(const Trace& trace, ConflictPolicy policy = ConflictPolicy::Reject);

// Description of the first cell mismatch, if any. Must never fire for a
// trace produced by run_grid over the space it returned.
std::optional<std::string> replay_divergence(const Trace& trace, const CommSpace& final_space);

// ---------------------------------------------------------------------------

enum class MemberState { Running, Halted, Stuck };

struct GridOutcome {
  enum class Status { Completed, UnresolvedConflict };
  Status status = Status::Completed;
  Trace trace;
  CommSpace space{ConflictPolicy::Reject};
  std::vector<std::pair<std::string, std::vector<Word>>> outputs;  // declared order
  std::map<std::string, MemberState> member_states;
};

// Deterministic global run. Precondition: validate_grid(config) is empty
// (throws std::invalid_argument otherwise). input_overrides replace the
// per-machine default inputs by id.
GridOutcome run_grid(const GridConfig& config, const std::map<std::string, Word>& input_overrides,
                     uint64_t horizon);

// ---------------------------------------------------------------------------
// Shared per-tick engine. Both the scheduler-driven loop above and the
// pre-expanded flat execution drive this directly; only the source of the
// (tick, mover, admitted) stream differs between the two.

class GridEngine {
 public:
  GridEngine(const GridConfig& config, const std::map<std::string, Word>& input_overrides,
             bool record_trace);

  void controller_slot(uint64_t tick);  // global mode: one controller move
  void member_slot(uint64_t tick, size_t member_index, bool admitted);
  bool commit_tick(uint64_t tick);  // false = unresolved write conflict

  GridOutcome take_outcome(uint64_t final_tick, bool unresolved);
  const CommSpace& space() const { return space_; }
  size_t member_count() const { return members_.size(); }

 private:
  struct Member {
    std::string id;
    CompiledMachine machine;
    MachineConfig config;
    MemberState state = MemberState::Running;
    bool terminal_recorded = false;
  };
  struct Staged {
    size_t member;
    std::string id;
    uint64_t cell;
    Symbol sym;
  };

  uint64_t next_free_cell() const;
  std::optional<size_t> arbitrate(const Staged& a, const Staged& b);
  void record(TraceEvent e);
  void run_slot(uint64_t tick, Member& m, size_t member_index, bool is_controller);

  const GridConfig& config_;
  ConflictPolicy policy_;
  std::vector<Member> members_;
  std::optional<Member> controller_;
  std::optional<CompiledMachine> arbiter_;  // controller spec compiled for conflict calls
  CommSpace space_;
  DirectiveSet directives_;
  std::vector<Staged> staged_;
  Trace trace_;
  bool record_trace_;
};

}  // namespace gridsim
