#pragma once
// Textual grid configuration and trace formats.
//
//   machine A
//     file = machines/A.tm
//     input = -
//     scale = rational 1 10
//     rules = -
//   end
//   controller C
//     file = machines/C.tm
//     mode = global
//   end
//   schedule = always
//   policy = controller
//   horizon = 16
//
// '-' denotes the empty word everywhere. Machine files are resolved
// relative to the config file. Traces serialize one line per event and are
// byte-stable across platforms; the write log uses the plain
// `tick writer cell symbol` line format.

#include <string>

#include "gridsim/grid.hpp"
#include "gridsim/machine_text.hpp"

namespace gridsim {

std::string word_token(const Word& w);       // "" -> "-"
Word parse_word_token(const std::string& t);  // "-" -> ""

GridConfig parse_grid_config_text(const std::string& text, const std::string& name,
                                  const std::string& base_dir);
GridConfig parse_grid_config_file(const std::string& path);
std::string print_grid_config(const GridConfig& config);

// Writes config.grid plus one machine file per member (and controller) under
// dir, honoring each entry's relative `file` (default machines/<id>.tm).
// Returns the config path.
std::string write_grid_config(const GridConfig& config, const std::string& dir,
                              const std::string& filename = "config.grid");

std::string print_trace(const Trace& trace);
Trace parse_trace_text(const std::string& text, const std::string& name = "<trace>");
Trace parse_trace_file(const std::string& path);

std::string print_write_log(const CommSpace& space);

// Snapshot over cells 0..highest written cell ("" when nothing is written).
std::string space_word(const CommSpace& space);

}  // namespace gridsim
