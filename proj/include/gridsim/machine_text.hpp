#pragma once
// Line-oriented machine description format.
//
//   # comment
//   alphabet: _ 0 1
//   states: q0 q1 halt
//   output_states: q1
//   final_states: halt
//   start: q0
//   tapes: input work comm out1
//   rule: q0 0 * * -> q1 - @1 R S S emit 0 -> out1
//
// Tokens are whitespace-separated. Symbols are single printable characters;
// '_' is the blank. Reserved tokens: '*' (match any), '-' (no write / the
// empty word), '@s' (write s into the lowest unwritten shared cell), '->'.
// A rule lists one read token per readable tape (input, work, comm if
// present), one write token per writable tape (work, comm if present) and
// one move token (L/R/S) per head, in roster order. `tapes:` must precede
// the rules. parse(print(spec)) == spec.

#include <stdexcept>
#include <string>

#include "gridsim/machine.hpp"

namespace gridsim {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
        file_(std::move(file)),
        line_(line) {}
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

MachineSpec parse_machine_text(const std::string& text, const std::string& name = "<machine>");
MachineSpec parse_machine_file(const std::string& path);
std::string print_machine(const MachineSpec& spec);

// True for characters usable as alphabet symbols in the text format.
bool is_symbol_char(char c);

}  // namespace gridsim
