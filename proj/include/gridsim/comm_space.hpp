#pragma once
// The shared medium: a one-sided linear tape of single-symbol cells with a
// complete write log. Cells are never erased; replaying the log from an
// empty tape reproduces the cell contents exactly.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gridsim/machine.hpp"

namespace gridsim {

enum class ConflictPolicy { Reject, PriorityOrder, ControllerArbitrated };

// Writer id "-" is reserved for preloaded cells (tick 0).
struct WriteEvent {
  uint64_t tick = 0;
  std::string writer;
  uint64_t cell = 0;
  Symbol sym = kBlank;
  bool operator==(const WriteEvent&) const = default;
};

struct WriteConflict {
  std::vector<WriteEvent> contenders;  // in arrival order
};

using WriteResult = std::variant<std::monostate, WriteConflict>;  // monostate = Ok

inline bool write_ok(const WriteResult& r) { return std::holds_alternative<std::monostate>(r); }

class CommSpace {
 public:
  explicit CommSpace(ConflictPolicy policy = ConflictPolicy::Reject) : policy_(policy) {}

  ConflictPolicy policy() const { return policy_; }
  Symbol read(uint64_t cell) const;

  // Single-event write with same-tick conflict detection against events
  // already in the log. Under Reject and ControllerArbitrated a same-tick
  // same-cell write of a different symbol returns the conflict (arbitration
  // is the grid's job); under PriorityOrder the earlier write stands and the
  // later one is dropped. Across ticks, later writes overwrite earlier ones.
  WriteResult write(uint64_t tick, const std::string& writer, uint64_t cell, Symbol sym);

  // Commits an already-resolved event: appends to the log and sets the cell.
  void commit(uint64_t tick, const std::string& writer, uint64_t cell, Symbol sym);

  // Lowest cell with no committed write. Written blanks count as occupied.
  uint64_t first_unwritten() const { return first_unwritten_; }
  uint64_t highest_written_cell() const;  // 0 when nothing is written
  bool anything_written() const { return !log_.empty(); }

  // Word over cells 0..upto_cell inclusive; blanks render as '_'.
  std::string snapshot(uint64_t upto_cell) const;

  const std::map<uint64_t, Symbol>& cells() const { return cells_; }
  const std::vector<WriteEvent>& log() const { return log_; }

  // Log sorted by tick (commit order must never go back in time).
  bool log_tick_monotone() const;

  static CommSpace replay(const std::vector<WriteEvent>& log, ConflictPolicy policy);

  bool same_cells(const CommSpace& other) const { return cells_ == other.cells_; }

 private:
  ConflictPolicy policy_;
  std::map<uint64_t, Symbol> cells_;
  std::vector<WriteEvent> log_;
  uint64_t first_unwritten_ = 0;
};

}  // namespace gridsim
