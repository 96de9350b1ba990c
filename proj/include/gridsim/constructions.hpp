#pragma once
// Stock machines and ready-made grid configurations: the alternating writer
// pair with its synchronous and delayed-start variants, the pair-cell
// encoder/decoder, injected-stream harnesses (initial information, scripted
// partner, externally scheduled exchange) and seeded random grids under an
// arbitrating controller. Oracle-driven harnesses carry an OracleTag naming
// the injection point; `declared_source` records the flatten verdict each
// construction is built to exhibit.

#include <optional>
#include <string>
#include <vector>

#include "gridsim/grid.hpp"

namespace gridsim::construct {

// --- stock machines (alphabet {_, 0, 1}) ------------------------------------

MachineSpec even_move_writer(Symbol sym);   // pushes sym into the lowest free cell on moves 2,4,6,...
MachineSpec odd_move_writer(Symbol sym);    // ... on moves 1,3,5,...
MachineSpec every_move_writer(Symbol sym);  // ... on every move
MachineSpec head_marker(Symbol sym);        // writes sym under its comm head, then moves right
MachineSpec input_copier();                 // copies the input word to out1, then halts
MachineSpec comm_copier();                  // copies the shared tape to out1, polling on blanks
MachineSpec scripted_emitter(const Word& w);  // replays w into the shared tape, then halts

// Reads one bit per round from its input; writes 1 into the first cell of
// pair n on bit 1, into the second on bit 0 (cells 2n-1 / 2n, 1-based; the
// stored index is one lower). Two moves per round.
MachineSpec pair_cell_writer();
// Completes each pair by writing 0 into whichever cell the writer left blank.
MachineSpec sibling_filler();
// Scans completed pairs left to right, emitting 0 for "01" and 1 for "10";
// idles without emission while a pair is incomplete.
MachineSpec pair_cell_decoder();

MachineSpec trivial_controller();        // moves forever, emits nothing
MachineSpec first_symbol_arbiter();      // emits the first symbol of a conflict pair
MachineSpec second_symbol_arbiter();     // emits the second
MachineSpec directive_controller(const std::vector<Directive>& ds);

// --- harness configurations --------------------------------------------------

GridConfig alternating_writers();                  // identity scales, no controller
GridConfig controlled_alternating_writers();       // + trivial global controller
GridConfig desync_writers(uint64_t horizon);       // B's first move at tick 10, then tick by tick
GridConfig incommensurable_writers();              // A stretched by sqrt2
GridConfig pair_cell_encoder(const Word& oracle_bits);
GridConfig oracle_initial_info(const Word& oracle_bits);
GridConfig oracle_partner(const Word& oracle_bits);
GridConfig scheduled_exchange(const Word& oracle_bits);
GridConfig random_rational_grid(uint64_t seed);    // 2-3 members, rational scales, arbitrating controller

// Horizon at which the pair-cell grid is guaranteed to have filled every pair.
uint64_t pair_cell_fill_horizon(size_t oracle_len);

// --- catalog for the CLI ------------------------------------------------------

struct ConstructionInfo {
  std::string name;
  bool needs_oracle = false;
};
const std::vector<ConstructionInfo>& catalog();

// Builds a catalog entry by name; `horizon` overrides the default stored in
// the config (and sizes the desync table). Throws std::invalid_argument for
// unknown names, missing oracles or oracle words outside {0,1}+.
GridConfig make_construction(const std::string& name, const Word& oracle,
                             std::optional<uint64_t> horizon);

}  // namespace gridsim::construct
