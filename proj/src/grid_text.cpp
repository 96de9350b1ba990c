#include "gridsim/grid_text.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace gridsim {

namespace fs = std::filesystem;

std::string word_token(const Word& w) { return w.empty() ? "-" : w; }

Word parse_word_token(const std::string& t) { return t == "-" ? Word{} : Word{t}; }

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line;
  if (auto pos = body.find('#'); pos != std::string::npos) body.resize(pos);
  std::istringstream is(body);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

uint64_t parse_u64(const std::string& file, int line, const std::string& tok) {
  try {
    size_t used = 0;
    uint64_t v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected a number, got '" + tok + "'");
  }
}

TimeScale parse_scale(const std::string& file, int line, const std::vector<std::string>& args) {
  if (args.empty()) throw ParseError(file, line, "empty scale");
  if (args[0] == "identity" && args.size() == 1) return TimeScale::identity();
  if (args[0] == "rational" && args.size() == 3)
    return TimeScale::rational(parse_u64(file, line, args[1]), parse_u64(file, line, args[2]));
  if (args[0] == "irrational" && args.size() == 2) {
    if (args[1] == "sqrt2") return TimeScale::irrational(IrrationalConstant::Sqrt2);
    if (args[1] == "golden") return TimeScale::irrational(IrrationalConstant::Golden);
    throw ParseError(file, line, "unknown irrational constant '" + args[1] + "'");
  }
  if (args[0] == "table" && args.size() >= 2) {
    std::vector<uint64_t> ticks;
    for (size_t i = 1; i < args.size(); ++i) ticks.push_back(parse_u64(file, line, args[i]));
    return TimeScale::explicit_table(std::move(ticks));
  }
  throw ParseError(file, line, "bad scale declaration");
}

std::string print_scale(const TimeScale& s) {
  std::ostringstream os;
  switch (s.kind) {
    case TimeScale::Kind::Identity: os << "identity"; break;
    case TimeScale::Kind::Rational: os << "rational " << s.moves_n << ' ' << s.per_ticks_m; break;
    case TimeScale::Kind::Irrational:
      os << "irrational " << (s.alpha == IrrationalConstant::Sqrt2 ? "sqrt2" : "golden");
      break;
    case TimeScale::Kind::Table:
      os << "table";
      for (uint64_t t : s.table) os << ' ' << t;
      break;
  }
  return os.str();
}

const char* role_token(OracleRole r) {
  switch (r) {
    case OracleRole::InitialInformation: return "initial-information";
    case OracleRole::PartnerOutput: return "partner-output";
    case OracleRole::ExchangeSchedule: return "exchange-schedule";
    case OracleRole::CellChoice: return "cell-choice";
  }
  return "?";
}

OracleRole parse_role(const std::string& file, int line, const std::string& tok) {
  if (tok == "initial-information") return OracleRole::InitialInformation;
  if (tok == "partner-output") return OracleRole::PartnerOutput;
  if (tok == "exchange-schedule") return OracleRole::ExchangeSchedule;
  if (tok == "cell-choice") return OracleRole::CellChoice;
  throw ParseError(file, line, "unknown oracle role '" + tok + "'");
}

}  // namespace

GridConfig parse_grid_config_text(const std::string& text, const std::string& name,
                                  const std::string& base_dir) {
  GridConfig config;
  std::istringstream is(text);
  std::string raw;
  int line = 0;

  enum class Block { None, Machine, Controller };
  Block block = Block::None;
  MachineEntry entry;
  ControllerEntry ctrl;
  bool entry_has_file = false;

  auto load_spec = [&](const std::string& rel) {
    fs::path p = fs::path(base_dir) / rel;
    return parse_machine_file(p.string());
  };

  while (std::getline(is, raw)) {
    ++line;
    auto toks = tokenize(raw);
    if (toks.empty()) continue;

    if (block != Block::None) {
      if (toks[0] == "end") {
        if (toks.size() != 1) throw ParseError(name, line, "'end' takes no arguments");
        if (!entry_has_file) throw ParseError(name, line, "block is missing a 'file =' line");
        if (block == Block::Machine)
          config.machines.push_back(std::move(entry));
        else
          config.controller = std::move(ctrl);
        block = Block::None;
        continue;
      }
      if (toks.size() < 3 || toks[1] != "=")
        throw ParseError(name, line, "expected 'key = value' inside a block");
      const std::string& key = toks[0];
      std::vector<std::string> args(toks.begin() + 2, toks.end());
      if (key == "file") {
        if (args.size() != 1) throw ParseError(name, line, "file takes one path");
        if (block == Block::Machine) {
          entry.file = args[0];
          entry.spec = load_spec(args[0]);
        } else {
          ctrl.file = args[0];
          ctrl.spec = load_spec(args[0]);
        }
        entry_has_file = true;
      } else if (key == "input" && block == Block::Machine) {
        if (args.size() != 1) throw ParseError(name, line, "input takes one word");
        entry.input = parse_word_token(args[0]);
      } else if (key == "scale" && block == Block::Machine) {
        entry.scale = parse_scale(name, line, args);
      } else if (key == "rules" && block == Block::Machine) {
        entry.rule_sets.clear();
        if (!(args.size() == 1 && args[0] == "-"))
          entry.rule_sets = args;
      } else if (key == "mode" && block == Block::Controller) {
        if (args.size() != 1 || (args[0] != "global" && args[0] != "local"))
          throw ParseError(name, line, "mode is 'global' or 'local'");
        ctrl.mode = args[0] == "global" ? ControlMode::Global : ControlMode::Local;
      } else {
        throw ParseError(name, line, "unknown block key '" + key + "'");
      }
      continue;
    }

    const std::string& key = toks[0];
    if (key == "machine") {
      if (toks.size() != 2) throw ParseError(name, line, "machine block needs one id");
      block = Block::Machine;
      entry = MachineEntry{};
      entry.id = toks[1];
      entry_has_file = false;
    } else if (key == "controller") {
      if (toks.size() != 2) throw ParseError(name, line, "controller block needs one id");
      if (config.controller) throw ParseError(name, line, "duplicate controller block");
      block = Block::Controller;
      ctrl = ControllerEntry{};
      ctrl.id = toks[1];
      entry_has_file = false;
    } else if (toks.size() >= 2 && toks[1] == "=") {
      std::vector<std::string> args(toks.begin() + 2, toks.end());
      if (key == "schedule") {
        if (args.empty()) throw ParseError(name, line, "empty schedule");
        if (args[0] == "always" && args.size() == 1)
          config.schedule = ExchangeSchedule::always();
        else if (args[0] == "injected" && args.size() >= 2)
          config.schedule =
              ExchangeSchedule::injected_ids({args.begin() + 1, args.end()});
        else if (args[0] == "random" && args.size() == 2)
          config.schedule = ExchangeSchedule::seeded(parse_u64(name, line, args[1]));
        else
          throw ParseError(name, line, "bad schedule declaration");
      } else if (key == "policy") {
        if (args.size() != 1) throw ParseError(name, line, "policy takes one value");
        if (args[0] == "reject")
          config.policy = ConflictPolicy::Reject;
        else if (args[0] == "priority")
          config.policy = ConflictPolicy::PriorityOrder;
        else if (args[0] == "controller")
          config.policy = ConflictPolicy::ControllerArbitrated;
        else
          throw ParseError(name, line, "policy is reject, priority or controller");
      } else if (key == "horizon") {
        if (args.size() != 1) throw ParseError(name, line, "horizon takes one number");
        config.horizon = parse_u64(name, line, args[0]);
      } else if (key == "space") {
        if (args.size() != 1) throw ParseError(name, line, "space takes one word");
        config.space_preload = parse_word_token(args[0]);
      } else if (key == "source") {
        if (args.size() != 1) throw ParseError(name, line, "source takes one token");
        config.declared_source = args[0];
      } else if (key == "oracle") {
        if (args.empty()) throw ParseError(name, line, "empty oracle tag");
        OracleTag tag;
        tag.role = parse_role(name, line, args[0]);
        size_t i = 1;
        if (tag.role != OracleRole::ExchangeSchedule) {
          if (args.size() < 3) throw ParseError(name, line, "oracle tag needs machine and bits");
          tag.machine = args[i++];
        }
        if (i + 1 != args.size()) throw ParseError(name, line, "oracle tag needs one bit word");
        tag.bits = parse_word_token(args[i]);
        config.oracles.push_back(std::move(tag));
      } else {
        throw ParseError(name, line, "unknown config key '" + key + "'");
      }
    } else {
      throw ParseError(name, line, "unparseable line");
    }
  }
  if (block != Block::None) throw ParseError(name, line, "unterminated block (missing 'end')");
  if (config.machines.empty()) throw ParseError(name, line, "config declares no machines");
  return config;
}

GridConfig parse_grid_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid_config_text(buf.str(), path, fs::path(path).parent_path().string());
}

std::string print_grid_config(const GridConfig& config) {
  std::ostringstream os;
  for (const auto& m : config.machines) {
    os << "machine " << m.id << "\n";
    os << "  file = " << (m.file.empty() ? "machines/" + m.id + ".tm" : m.file) << "\n";
    os << "  input = " << word_token(m.input) << "\n";
    os << "  scale = " << print_scale(m.scale) << "\n";
    os << "  rules =";
    if (m.rule_sets.empty())
      os << " -";
    else
      for (const auto& r : m.rule_sets) os << ' ' << r;
    os << "\nend\n";
  }
  if (config.controller) {
    const auto& c = *config.controller;
    os << "controller " << c.id << "\n";
    os << "  file = " << (c.file.empty() ? "machines/" + c.id + ".tm" : c.file) << "\n";
    os << "  mode = " << (c.mode == ControlMode::Global ? "global" : "local") << "\n";
    os << "end\n";
  }
  os << "schedule = ";
  switch (config.schedule.source) {
    case ExchangeSchedule::Source::Always: os << "always"; break;
    case ExchangeSchedule::Source::Injected:
      os << "injected";
      for (const auto& id : config.schedule.injected) os << ' ' << id;
      break;
    case ExchangeSchedule::Source::SeededRandom: os << "random " << config.schedule.seed; break;
  }
  os << "\n";
  if (config.policy) {
    os << "policy = ";
    switch (*config.policy) {
      case ConflictPolicy::Reject: os << "reject"; break;
      case ConflictPolicy::PriorityOrder: os << "priority"; break;
      case ConflictPolicy::ControllerArbitrated: os << "controller"; break;
    }
    os << "\n";
  }
  if (config.horizon) os << "horizon = " << *config.horizon << "\n";
  if (!config.space_preload.empty()) os << "space = " << config.space_preload << "\n";
  if (!config.declared_source.empty()) os << "source = " << config.declared_source << "\n";
  for (const auto& t : config.oracles) {
    os << "oracle = " << role_token(t.role);
    if (t.role != OracleRole::ExchangeSchedule) os << ' ' << t.machine;
    os << ' ' << word_token(t.bits) << "\n";
  }
  return os.str();
}

std::string write_grid_config(const GridConfig& config, const std::string& dir,
                              const std::string& filename) {
  fs::create_directories(dir);
  auto write_spec = [&](const std::string& rel_default, const std::string& rel,
                        const MachineSpec& spec) {
    fs::path p = fs::path(dir) / (rel.empty() ? rel_default : rel);
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    out << print_machine(spec);
  };
  for (const auto& m : config.machines)
    write_spec("machines/" + m.id + ".tm", m.file, m.spec);
  if (config.controller)
    write_spec("machines/" + config.controller->id + ".tm", config.controller->file,
               config.controller->spec);
  fs::path cfg = fs::path(dir) / filename;
  std::ofstream out(cfg);
  out << print_grid_config(config);
  return cfg.string();
}

// --- trace ------------------------------------------------------------------

std::string print_trace(const Trace& trace) {
  std::ostringstream os;
  for (const auto& e : trace.events) {
    switch (e.kind) {
      case TraceEvent::Kind::Write:
        os << "write " << e.tick << ' ' << e.machine << ' ' << e.a << ' ' << e.sym << "\n";
        break;
      case TraceEvent::Kind::Move:
        os << "move " << e.tick << ' ' << e.machine << ' ' << e.a << ' ' << e.from << ' ' << e.to
           << "\n";
        break;
      case TraceEvent::Kind::Emit:
        os << "emit " << e.tick << ' ' << e.machine << " out" << (e.a + 1) << ' ' << e.sym << "\n";
        break;
      case TraceEvent::Kind::Conflict: {
        os << "conflict " << e.tick << ' ' << e.a;
        for (const auto& [id, sym] : e.contenders) os << ' ' << id << ':' << sym;
        os << " -> " << e.detail << "\n";
        break;
      }
      case TraceEvent::Kind::Deny:
        os << "deny " << e.tick << ' ' << e.machine << ' ' << e.detail << "\n";
        break;
      case TraceEvent::Kind::Halt:
        os << "halt " << e.tick << ' ' << e.machine << "\n";
        break;
      case TraceEvent::Kind::Stuck:
        os << "stuck " << e.tick << ' ' << e.machine << "\n";
        break;
    }
  }
  os << "end " << trace.final_tick << ' ' << (trace.unresolved_conflict ? "unresolved-conflict" : "ok")
     << "\n";
  return os.str();
}

Trace parse_trace_text(const std::string& text, const std::string& name) {
  Trace trace;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  bool saw_end = false;
  while (std::getline(is, raw)) {
    ++line;
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    if (saw_end) throw ParseError(name, line, "events after the end line");
    const std::string& kind = toks[0];
    auto num = [&](size_t i) { return parse_u64(name, line, toks.at(i)); };
    auto sym = [&](size_t i) -> Symbol {
      if (toks.at(i).size() != 1) throw ParseError(name, line, "expected a single symbol");
      return toks[i][0];
    };
    try {
      if (kind == "write" && toks.size() == 5) {
        trace.events.push_back(
            {TraceEvent::Kind::Write, num(1), toks[2], num(3), "", "", sym(4), {}, ""});
      } else if (kind == "move" && toks.size() == 6) {
        trace.events.push_back(
            {TraceEvent::Kind::Move, num(1), toks[2], num(3), toks[4], toks[5], kBlank, {}, ""});
      } else if (kind == "emit" && toks.size() == 5) {
        if (toks[3].size() < 4 || toks[3].compare(0, 3, "out") != 0)
          throw ParseError(name, line, "bad output tape name");
        uint64_t tape = parse_u64(name, line, toks[3].substr(3));
        if (tape == 0) throw ParseError(name, line, "output tapes are 1-based");
        trace.events.push_back(
            {TraceEvent::Kind::Emit, num(1), toks[2], tape - 1, "", "", sym(4), {}, ""});
      } else if (kind == "conflict" && toks.size() >= 6) {
        TraceEvent e{TraceEvent::Kind::Conflict, num(1), "", num(2), "", "", kBlank, {}, ""};
        size_t i = 3;
        while (i < toks.size() && toks[i] != "->") {
          auto colon = toks[i].rfind(':');
          if (colon == std::string::npos || colon + 2 != toks[i].size())
            throw ParseError(name, line, "bad contender token '" + toks[i] + "'");
          e.contenders.emplace_back(toks[i].substr(0, colon), toks[i][colon + 1]);
          ++i;
        }
        if (i + 2 != toks.size() || toks[i] != "->")
          throw ParseError(name, line, "conflict line needs '-> winner'");
        e.detail = toks[i + 1];
        trace.events.push_back(std::move(e));
      } else if (kind == "deny" && toks.size() == 4) {
        trace.events.push_back(
            {TraceEvent::Kind::Deny, num(1), toks[2], 0, "", "", kBlank, {}, toks[3]});
      } else if (kind == "halt" && toks.size() == 3) {
        trace.events.push_back({TraceEvent::Kind::Halt, num(1), toks[2], 0, "", "", kBlank, {}, ""});
      } else if (kind == "stuck" && toks.size() == 3) {
        trace.events.push_back(
            {TraceEvent::Kind::Stuck, num(1), toks[2], 0, "", "", kBlank, {}, ""});
      } else if (kind == "end" && toks.size() == 3) {
        trace.final_tick = num(1);
        if (toks[2] == "ok")
          trace.unresolved_conflict = false;
        else if (toks[2] == "unresolved-conflict")
          trace.unresolved_conflict = true;
        else
          throw ParseError(name, line, "bad end status '" + toks[2] + "'");
        saw_end = true;
      } else {
        throw ParseError(name, line, "unparseable trace line");
      }
    } catch (const std::out_of_range&) {
      throw ParseError(name, line, "truncated trace line");
    }
  }
  if (!saw_end) throw ParseError(name, line, "trace is missing its end line");
  return trace;
}

Trace parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open trace file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_text(buf.str(), path);
}

std::string print_write_log(const CommSpace& space) {
  std::ostringstream os;
  for (const auto& e : space.log())
    os << e.tick << ' ' << e.writer << ' ' << e.cell << ' ' << e.sym << "\n";
  return os.str();
}

std::string space_word(const CommSpace& space) {
  if (!space.anything_written()) return "";
  return space.snapshot(space.highest_written_cell());
}

}  // namespace gridsim
