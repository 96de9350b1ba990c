#include "gridsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gridsim/constructions.hpp"
#include "gridsim/equivalence.hpp"
#include "gridsim/grid_text.hpp"

namespace gridsim::cli {

namespace fs = std::filesystem;

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string manifest_text(const RunManifest& m, uint64_t horizon) {
  std::ostringstream os;
  os << kToolVersion << "\n";
  os << "config " << m.config_path << "\n";
  os << "horizon " << horizon << "\n";
  os << "seed " << (m.seed ? std::to_string(*m.seed) : std::string("-")) << "\n";
  for (const auto& [id, word] : m.inputs) os << "input " << id << ' ' << word_token(word) << "\n";
  return os.str();
}

std::string outputs_text(const GridOutcome& outcome) {
  std::ostringstream os;
  for (const auto& [id, words] : outcome.outputs)
    for (size_t t = 0; t < words.size(); ++t)
      os << id << " out" << (t + 1) << ' ' << word_token(words[t]) << "\n";
  return os.str();
}

int parse_failure(const ParseError& e, std::ostream& err) {
  err << "error: parse " << e.what() << "\n";
  return kExitUsage;
}

std::optional<GridConfig> load_config(const std::string& path, std::ostream& err, int& code) {
  try {
    return parse_grid_config_file(path);
  } catch (const ParseError& e) {
    code = parse_failure(e, err);
    return std::nullopt;
  }
}

int validation_failure(const std::vector<std::string>& problems, std::ostream& err) {
  err << "error: validate:";
  for (const auto& p : problems) err << " [" << p << "]";
  err << "\n";
  return kExitValidation;
}

}  // namespace

int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto config = load_config(manifest.config_path, err, code);
  if (!config) return code;
  auto problems = validate_grid(*config);
  if (!problems.empty()) return validation_failure(problems, err);
  for (const auto& [id, word] : manifest.inputs)
    if (!config->find_machine(id)) {
      err << "error: validate: [input override for unknown machine '" << id << "']\n";
      return kExitValidation;
    }
  if (manifest.seed && config->schedule.source == ExchangeSchedule::Source::SeededRandom)
    config->schedule.seed = *manifest.seed;
  std::optional<uint64_t> horizon = manifest.horizon ? manifest.horizon : config->horizon;
  if (!horizon) {
    err << "error: usage: no horizon given and the config declares none\n";
    return kExitUsage;
  }

  GridOutcome outcome;
  try {
    outcome = run_grid(*config, manifest.inputs, *horizon);
  } catch (const std::invalid_argument& e) {
    err << "error: validate: [" << e.what() << "]\n";
    return kExitValidation;
  }

  if (auto div = replay_divergence(outcome.trace, outcome.space)) {
    err << "error: divergence: replay mismatch at " << *div << "\n";
    return kExitDivergence;
  }

  fs::path dir(manifest.out_dir);
  write_text_file(dir / "manifest.txt", manifest_text(manifest, *horizon));
  write_text_file(dir / "trace.txt", print_trace(outcome.trace));
  write_text_file(dir / "writelog.txt", print_write_log(outcome.space));
  write_text_file(dir / "space.txt", word_token(space_word(outcome.space)) + "\n");
  write_text_file(dir / "outputs.txt", outputs_text(outcome));

  out << "regime " << regime_name(classify(*config)) << "\n";
  out << "flatten " << flatten_token(flatten(*config).obstacle) << "\n";
  out << "space " << word_token(space_word(outcome.space)) << "\n";
  if (outcome.status == GridOutcome::Status::UnresolvedConflict) {
    err << "error: unresolved-conflict at tick " << outcome.trace.final_tick << "\n";
    return kExitConflict;
  }
  out << "status ok\n";
  return kExitOk;
}

int cmd_classify(const std::string& config_path, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto config = load_config(config_path, err, code);
  if (!config) return code;
  out << regime_name(classify(*config)) << "\n";
  return kExitOk;
}

int cmd_flatten(const std::string& config_path, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto config = load_config(config_path, err, code);
  if (!config) return code;
  auto problems = validate_grid(*config);
  if (!problems.empty()) return validation_failure(problems, err);
  FlattenResult res = flatten(*config);
  if (res.flattenable())
    out << "flattenable\n";
  else
    out << "not-flattenable " << flatten_token(res.obstacle) << "\n";
  return kExitOk;
}

int cmd_check_eq(const std::string& config_path, std::optional<uint64_t> horizon,
                 std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  auto config = load_config(config_path, err, code);
  if (!config) return code;
  auto problems = validate_grid(*config);
  if (!problems.empty()) return validation_failure(problems, err);
  FlattenResult res = flatten(*config);
  if (!res.flattenable()) {
    err << "error: validate: [config is not flattenable: " << flatten_token(res.obstacle)
        << "]\n";
    return kExitValidation;
  }
  std::optional<uint64_t> h = horizon ? horizon : config->horizon;
  if (!h) {
    err << "error: usage: no horizon given and the config declares none\n";
    return kExitUsage;
  }
  EquivalenceVerdict v = check_equivalence(*config, {}, *h);
  if (v.equal) {
    out << "equal\n";
    return kExitOk;
  }
  err << "error: divergence: " << v.divergence << "\n";
  return kExitDivergence;
}

int cmd_enumerate(const std::string& machine_path, uint64_t diagonal_budget,
                  const std::string& out_file, std::ostream& out, std::ostream& err) {
  MachineSpec spec;
  try {
    spec = parse_machine_file(machine_path);
  } catch (const ParseError& e) {
    return parse_failure(e, err);
  }
  ValidationReport rep = validate(spec);
  if (!rep.ok()) return validation_failure(rep.problems, err);
  EnumerationCertificate cert =
      enumerate_outputs(spec, WordOrder::length_lex(spec), diagonal_budget);
  std::string text = print_certificate(cert);
  if (out_file.empty())
    out << text;
  else
    write_text_file(out_file, text);
  return kExitOk;
}

int cmd_construct(const std::string& name, const Word& oracle, std::optional<uint64_t> horizon,
                  const std::string& out_dir, bool run_after, std::ostream& out,
                  std::ostream& err) {
  GridConfig config;
  try {
    config = construct::make_construction(name, oracle, horizon);
  } catch (const std::invalid_argument& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitUsage;
  }
  std::string path = write_grid_config(config, out_dir);
  out << "wrote " << path << "\n";
  if (!run_after) return kExitOk;
  RunManifest manifest;
  manifest.config_path = path;
  manifest.out_dir = out_dir;
  return cmd_run(manifest, out, err);
}

int cmd_diff_traces(const std::string& path_a, const std::string& path_b, std::ostream& out,
                    std::ostream& err) {
  std::ifstream a(path_a), b(path_b);
  if (!a) {
    err << "error: parse " << path_a << ":0: cannot open trace file\n";
    return kExitUsage;
  }
  if (!b) {
    err << "error: parse " << path_b << ":0: cannot open trace file\n";
    return kExitUsage;
  }
  std::string la, lb;
  int line = 0;
  while (true) {
    bool got_a = bool(std::getline(a, la));
    bool got_b = bool(std::getline(b, lb));
    ++line;
    if (!got_a && !got_b) break;
    if (!got_a) la.clear();
    if (!got_b) lb.clear();
    if (la != lb || got_a != got_b) {
      out << "traces differ at line " << line << "\n";
      out << "- " << (got_a ? la : std::string("<eof>")) << "\n";
      out << "+ " << (got_b ? lb : std::string("<eof>")) << "\n";
      return kExitDivergence;
    }
  }
  out << "traces identical\n";
  return kExitOk;
}

}  // namespace gridsim::cli
