#pragma once
// Flattening a controller-governed grid into a single pre-resolved
// sequential execution, the grid/flat equivalence check, the dovetailing
// output enumerator and the stream-partition harness.

#include <optional>
#include <string>
#include <vector>

#include "gridsim/grid.hpp"

namespace gridsim {

// Why a configuration cannot be flattened. Each value names the ingredient
// that breaks the "members and control are ordinary machines on a common
// clock" premise; tokens are stable across the CLI and tests.
enum class FlattenObstacle {
  None,
  InjectedSchedule,
  OracleInitialInformation,
  OraclePartnerOutput,
  OracleCellChoice,
  IrrationalScale,
  NoGlobalController,
};
const char* flatten_token(FlattenObstacle o);  // "flattenable" for None

// One pre-resolved slot: who acts at which tick, and whether the exchange
// schedule admits them. actor == kControllerActor is the controller's slot.
struct FlatInstruction {
  uint64_t tick = 0;
  size_t actor = 0;
  bool admitted = true;
  bool operator==(const FlatInstruction&) const = default;
};
inline constexpr size_t kControllerActor = size_t(-1);

// A flattenable configuration plus the instruction expansion. After
// expansion no scale or schedule object is consulted again; the flat
// interpreter walks the instruction list only.
struct FlatPlan {
  GridConfig config;
  std::vector<FlatInstruction> instructions_up_to(uint64_t horizon) const;
};

struct FlattenResult {
  FlattenObstacle obstacle = FlattenObstacle::None;
  std::optional<FlatPlan> plan;  // engaged iff obstacle == None
  bool flattenable() const { return obstacle == FlattenObstacle::None; }
};

FlattenResult flatten(const GridConfig& config);

// Runs the pre-expanded instruction stream through one sequential
// interpreter. Defined to produce the same final space and outputs as
// run_grid at every horizon.
GridOutcome run_flat(const FlatPlan& plan, const std::map<std::string, Word>& input_overrides,
                     uint64_t horizon);

struct EquivalenceVerdict {
  bool equal = true;
  std::string divergence;  // first differing item when !equal
};

// Runs both routes and compares final spaces and all outputs. Precondition:
// flatten(config) succeeds (throws std::invalid_argument otherwise).
EquivalenceVerdict check_equivalence(const GridConfig& config,
                                     const std::map<std::string, Word>& inputs, uint64_t horizon);

// ---------------------------------------------------------------------------
// Output enumeration (dovetailing over input index x move budget).

struct WordOrder {
  enum class Kind { LengthLex, Machine };
  Kind kind = Kind::LengthLex;
  std::vector<Symbol> symbols;  // LengthLex: sub-alphabet in enumeration order
  std::optional<MachineSpec> order_machine;  // Machine: unary index in, word out
  uint64_t order_budget = 0;

  // Blank-free alphabet of the machine under enumeration, declared order.
  static WordOrder length_lex(const MachineSpec& for_machine);
  static WordOrder machine_order(MachineSpec order_machine, uint64_t per_index_budget);

  // Word at the given index; nullopt once the order is exhausted (finite
  // orders only). Indexes are 0-based; length-lex starts at the empty word.
  std::optional<Word> word_at(uint64_t index) const;
};

struct CertificateEntry {
  uint64_t input_index = 0;
  Word output;
  uint64_t budget = 0;  // move budget at which the output first appeared
  bool operator==(const CertificateEntry&) const = default;
};

struct EnumerationCertificate {
  std::vector<CertificateEntry> entries;
  bool operator==(const EnumerationCertificate&) const = default;
};

// Dovetails (input index, move budget) pairs along diagonals d = index +
// budget for d <= diagonal_budget, budget ascending within a diagonal, and
// records the first completed (halting) run per input. Machines without
// output tapes never produce entries.
EnumerationCertificate enumerate_outputs(const MachineSpec& spec, const WordOrder& order,
                                         uint64_t diagonal_budget);

// Line-per-entry text: `<index> <output|-> <budget>`.
std::string print_certificate(const EnumerationCertificate& cert);

// Splits the stream prefix at the given strictly increasing cut positions
// and runs the machine on each segment with the given move budget,
// collecting first-output-tape words.
std::vector<Word> partition_harness(const Word& stream_prefix, const std::vector<uint64_t>& cuts,
                                    const MachineSpec& spec, uint64_t per_segment_budget);

// The constructive converse for finitely presented sets: builds a machine
// that copies its input word to out1 when the word belongs to the given set
// and halts silently otherwise, so the nonempty outputs of its enumeration
// certificate are exactly the set. Words must be nonempty, duplicate-free
// and over {0,1}; arbitrary listable sets have no finite presentation and
// are out of reach by design.
MachineSpec finite_set_emitter(const std::vector<Word>& words);

}  // namespace gridsim
