#include "gridsim/comm_space.hpp"

namespace gridsim {

Symbol CommSpace::read(uint64_t cell) const {
  auto it = cells_.find(cell);
  return it == cells_.end() ? kBlank : it->second;
}

void CommSpace::commit(uint64_t tick, const std::string& writer, uint64_t cell, Symbol sym) {
  log_.push_back({tick, writer, cell, sym});
  cells_[cell] = sym;
  while (cells_.count(first_unwritten_)) ++first_unwritten_;
}

WriteResult CommSpace::write(uint64_t tick, const std::string& writer, uint64_t cell, Symbol sym) {
  for (auto it = log_.rbegin(); it != log_.rend() && it->tick == tick; ++it) {
    if (it->cell != cell || it->sym == sym) continue;
    if (policy_ == ConflictPolicy::PriorityOrder) return std::monostate{};  // earlier write stands
    WriteConflict c;
    c.contenders.push_back(*it);
    c.contenders.push_back({tick, writer, cell, sym});
    return c;
  }
  commit(tick, writer, cell, sym);
  return std::monostate{};
}

uint64_t CommSpace::highest_written_cell() const {
  return cells_.empty() ? 0 : cells_.rbegin()->first;
}

std::string CommSpace::snapshot(uint64_t upto_cell) const {
  std::string out;
  out.reserve(upto_cell + 1);
  for (uint64_t i = 0; i <= upto_cell; ++i) out.push_back(read(i));
  return out;
}

bool CommSpace::log_tick_monotone() const {
  for (size_t i = 1; i < log_.size(); ++i)
    if (log_[i].tick < log_[i - 1].tick) return false;
  return true;
}

CommSpace CommSpace::replay(const std::vector<WriteEvent>& log, ConflictPolicy policy) {
  CommSpace s(policy);
  for (const auto& e : log) s.commit(e.tick, e.writer, e.cell, e.sym);
  return s;
}

}  // namespace gridsim
