#include "dacopt/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dacopt/errors.hpp"
#include "dacopt/format.hpp"
#include "dacopt/reference.hpp"
#include "dacopt/rng.hpp"

namespace dacopt {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
  return out;
}

std::string sanitize_name(std::string name) {
  for (char& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      c = '_';
    }
  }
  return name.empty() ? std::string("arch") : name;
}

struct ArchSpec {
  enum class Kind { kBinary, kThermometer, kSegmented, kFile, kOptimize };
  Kind kind;
  int param = 0;     // M for segmented, L for optimize
  std::string path;  // file kind
};

ArchSpec parse_arch_spec(const std::string& spec) {
  if (spec == "binary") return {ArchSpec::Kind::kBinary, 0, {}};
  if (spec == "thermometer") return {ArchSpec::Kind::kThermometer, 0, {}};
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string tail =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "segmented" || head == "optimize") {
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(tail);
    } catch (const std::exception&) {
      throw ConfigError("architecture spec '" + spec +
                        "' needs an integer after the colon");
    }
    return {head == "segmented" ? ArchSpec::Kind::kSegmented
                                : ArchSpec::Kind::kOptimize,
            value,
            {}};
  }
  if (head == "file") {
    if (tail.empty()) {
      throw ConfigError("architecture spec 'file:' needs a path");
    }
    return {ArchSpec::Kind::kFile, 0, tail};
  }
  throw ConfigError(
      "unknown architecture spec '" + spec +
      "' (expected binary | thermometer | segmented:<M> | file:<path> | "
      "optimize:<L>)");
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.n_bits < 1 || config.n_bits > 16) {
    throw ConfigError("n_bits must lie in [1, 16]");
  }
  if (config.architectures.empty()) {
    throw ConfigError("architecture list is empty");
  }
  for (const auto& spec : config.architectures) {
    parse_arch_spec(spec);
  }
  if (!(config.sigma_delta > 0.0)) {
    throw ConfigError("sigma_delta must be > 0");
  }
  if (config.realizations < 1) {
    throw ConfigError("realizations must be >= 1");
  }
  if (!(config.quantile > 0.0 && config.quantile < 1.0)) {
    throw ConfigError("quantile must lie in (0, 1)");
  }
  if (config.mode != "exact" && config.mode != "sampled") {
    throw ConfigError("mode must be 'exact' or 'sampled'");
  }
  if (config.waveform_samples < 10000) {
    throw ConfigError("waveform_samples must be >= 10000");
  }
  if (config.descent_restarts < 1 || config.descent_sweeps < 1 ||
      config.sa_restarts < 1 || config.sa_steps_per_temperature < 1 ||
      config.sa_inner_sweeps < 1) {
    throw ConfigError("restart and sweep counts must be >= 1");
  }
  if (!(config.sa_cooling > 0.0 && config.sa_cooling < 1.0)) {
    throw ConfigError("sa_cooling must lie in (0, 1)");
  }
  if (!(config.sa_min_temperature_ratio > 0.0 &&
        config.sa_min_temperature_ratio < 1.0)) {
    throw ConfigError("sa_min_temperature_ratio must lie in (0, 1)");
  }
  if (config.pmf != "uniform" && config.pmf != "gaussian:auto") {
    if (config.pmf.rfind("gaussian:", 0) != 0) {
      throw ConfigError("pmf must be uniform | gaussian:auto | gaussian:<rms>");
    }
    try {
      const std::string tail = config.pmf.substr(9);
      std::size_t used = 0;
      const double v = std::stod(tail, &used);
      if (used != tail.size() || !(v > 0.0)) throw std::invalid_argument(tail);
    } catch (const std::exception&) {
      throw ConfigError("pmf spec '" + config.pmf +
                        "' needs a positive rms after 'gaussian:'");
    }
  }
}

namespace {

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["n_bits"] = c.n_bits;
  j["architectures"] = c.architectures;
  j["pmf"] = c.pmf;
  j["sigma_delta"] = c.sigma_delta;
  j["realizations"] = c.realizations;
  j["quantile"] = c.quantile;
  j["mode"] = c.mode;
  j["waveform_samples"] = c.waveform_samples;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["threads"] = c.threads;
  j["descent_restarts"] = c.descent_restarts;
  j["descent_sweeps"] = c.descent_sweeps;
  j["sa_restarts"] = c.sa_restarts;
  j["sa_initial_temperature"] = c.sa_initial_temperature;
  j["sa_cooling"] = c.sa_cooling;
  j["sa_steps_per_temperature"] = c.sa_steps_per_temperature;
  j["sa_min_temperature_ratio"] = c.sa_min_temperature_ratio;
  j["sa_inner_sweeps"] = c.sa_inner_sweeps;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config).dump();
}

std::string config_to_json_pretty(const ExperimentConfig& config) {
  return config_json(config).dump(2) + "\n";
}

ExperimentConfig parse_config_json(const std::string& text,
                                   const std::string& source_name) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source_name + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError(source_name + ": config must be a JSON object");
  }
  ExperimentConfig c;
  std::set<std::string> known;
  const auto take = [&](const char* key, auto& field) {
    known.insert(key);
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(source_name + ": field '" + std::string(key) +
                        "' has the wrong type");
    }
  };
  take("n_bits", c.n_bits);
  take("architectures", c.architectures);
  take("pmf", c.pmf);
  take("sigma_delta", c.sigma_delta);
  take("realizations", c.realizations);
  take("quantile", c.quantile);
  take("mode", c.mode);
  take("waveform_samples", c.waveform_samples);
  take("seed", c.seed);
  take("out", c.out);
  take("threads", c.threads);
  take("descent_restarts", c.descent_restarts);
  take("descent_sweeps", c.descent_sweeps);
  take("sa_restarts", c.sa_restarts);
  take("sa_initial_temperature", c.sa_initial_temperature);
  take("sa_cooling", c.sa_cooling);
  take("sa_steps_per_temperature", c.sa_steps_per_temperature);
  take("sa_min_temperature_ratio", c.sa_min_temperature_ratio);
  take("sa_inner_sweeps", c.sa_inner_sweeps);
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw ConfigError(source_name + ": unknown field '" + item.key() + "'");
    }
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_json(text.str(), path.string());
}

InputPmf resolve_pmf(const ExperimentConfig& config) {
  if (config.pmf == "uniform") {
    return uniform_pmf(config.n_bits);
  }
  if (config.pmf == "gaussian:auto") {
    return gaussian_pmf(config.n_bits, optimal_rms(config.n_bits));
  }
  return gaussian_pmf(config.n_bits, std::stod(config.pmf.substr(9)));
}

namespace {

// Best of `restarts` random-init descents; ties keep the lowest restart.
DescentResult best_descended(const RepresentationIndex& index,
                             const Basis& basis, const InputPmf& pmf,
                             int restarts, int max_sweeps,
                             std::uint64_t arch_seed, double* raw_out) {
  DescentResult best;
  double best_raw = 0.0;
  for (int r = 0; r < restarts; ++r) {
    DescentConfig cfg{max_sweeps,
                      derive_seed(arch_seed, RngStream::kDescentInit,
                                  static_cast<std::uint64_t>(r))};
    DescentResult res = descend_representations(index, basis, pmf, cfg);
    const double raw =
        raw_mismatch_metric(activation_profile(res.table, pmf), basis);
    if (r == 0 || raw < best_raw) {
      best_raw = raw;
      best = std::move(res);
    }
  }
  if (raw_out != nullptr) *raw_out = best_raw;
  return best;
}

Architecture resolve_one(const ExperimentConfig& config, const InputPmf& pmf,
                         const std::string& spec_text) {
  const ArchSpec spec = parse_arch_spec(spec_text);
  Architecture arch;
  switch (spec.kind) {
    case ArchSpec::Kind::kBinary: {
      arch.name = "binary";
      arch.series = "canonical";
      arch.basis = binary_basis(config.n_bits);
      arch.table = canonical_mapping(arch.basis, ArchKind::kBinary);
      break;
    }
    case ArchSpec::Kind::kThermometer: {
      arch.name = "thermometer";
      arch.series = "canonical";
      arch.basis = thermometer_basis(config.n_bits);
      arch.table = canonical_mapping(arch.basis, ArchKind::kThermometer);
      break;
    }
    case ArchSpec::Kind::kSegmented: {
      const int m = spec.param;
      if (m < 0 || m > config.n_bits) {
        throw ConfigError("segmented:" + std::to_string(m) +
                          " is inconsistent with n_bits=" +
                          std::to_string(config.n_bits));
      }
      arch.name = "segmented_" + std::to_string(m) + "t" +
                  std::to_string(config.n_bits - m) + "b";
      arch.series = "segmented";
      arch.basis =
          segmented_basis(SegmentSpec{m, config.n_bits - m}, config.n_bits);
      arch.table = canonical_mapping(arch.basis, ArchKind::kSegmented);
      break;
    }
    case ArchSpec::Kind::kFile: {
      arch.basis = load_basis_file(spec.path);
      if (arch.basis.n_bits != config.n_bits) {
        throw ConfigError("basis file " + spec.path + " has n_bits=" +
                          std::to_string(arch.basis.n_bits) +
                          ", config expects " + std::to_string(config.n_bits));
      }
      if (!is_complete(arch.basis)) {
        throw InfeasibleError("basis file " + spec.path +
                              " is incomplete: some codeword in [0, " +
                              std::to_string(arch.basis.full_scale()) +
                              "] has no representation");
      }
      arch.name = sanitize_name(
          std::filesystem::path(spec.path).stem().string());
      arch.series = "optimized";
      const std::uint64_t arch_seed = derive_seed(
          config.seed, RngStream::kArchitecture, fnv1a64(arch.name));
      const RepresentationIndex index = enumerate_all(arch.basis);
      DescentResult res =
          best_descended(index, arch.basis, pmf, config.descent_restarts,
                         config.descent_sweeps, arch_seed, nullptr);
      arch.table = std::move(res.table);
      arch.trace = std::move(res.trace);
      arch.has_trace = true;
      break;
    }
    case ArchSpec::Kind::kOptimize: {
      arch.name = "optimized_" + std::to_string(spec.param);
      arch.series = "optimized";
      AnnealConfig sa;
      sa.restarts = config.sa_restarts;
      sa.initial_temperature = config.sa_initial_temperature;
      sa.cooling_factor = config.sa_cooling;
      sa.steps_per_temperature = config.sa_steps_per_temperature;
      sa.min_temperature_ratio = config.sa_min_temperature_ratio;
      sa.inner_descent = DescentConfig{config.sa_inner_sweeps, 0};
      sa.polish_sweeps = config.descent_sweeps;
      sa.seed = derive_seed(config.seed, RngStream::kArchitecture,
                            fnv1a64(arch.name));
      sa.threads = config.threads;
      AnnealResult res =
          anneal_basis(config.n_bits, spec.param, pmf, sa);
      arch.basis = std::move(res.basis);
      arch.table = std::move(res.table);
      arch.trace = std::move(res.trace);
      arch.has_trace = true;
      arch.annealed = true;
      break;
    }
  }
  return arch;
}

}  // namespace

std::vector<Architecture> resolve_architectures(const ExperimentConfig& config,
                                                const InputPmf& pmf) {
  validate_config(config);
  std::vector<Architecture> archs;
  std::set<std::string> used;
  for (const auto& spec : config.architectures) {
    Architecture arch = resolve_one(config, pmf, spec);
    std::string name = arch.name;
    for (int k = 2; used.contains(name); ++k) {
      name = arch.name + "_" + std::to_string(k);
    }
    arch.name = name;
    used.insert(name);
    archs.push_back(std::move(arch));
  }
  return archs;
}

void save_mapping_csv(std::ostream& out, const RepresentationTable& table,
                      const Basis& basis) {
  out << "# schema dacopt/mapping v1\n";
  out << "# basis";
  for (int w : basis.weights) out << ' ' << w;
  out << "\n# bit order: basis index 0 is leftmost\n";
  out << "codeword,bits,value\n";
  for (int x = 0; x < table.codeword_count(); ++x) {
    const auto& row = table.rows[static_cast<std::size_t>(x)];
    out << x << ',' << row.to_string() << ',' << row.value(basis) << '\n';
  }
}

RepresentationTable load_mapping_csv(std::istream& in, const Basis& basis,
                                     const std::string& source_name) {
  RepresentationTable table;
  table.n_bits = basis.n_bits;
  table.basis_length = basis.length();
  table.rows.assign(static_cast<std::size_t>(table.codeword_count()),
                    SelectionVector(basis.length()));
  std::vector<bool> seen(static_cast<std::size_t>(table.codeword_count()),
                         false);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "codeword,bits,value") {
        throw ConfigError(source_name + ":" + std::to_string(line_no) +
                          ": expected header 'codeword,bits,value'");
      }
      header_seen = true;
      continue;
    }
    const std::string where = source_name + ":" + std::to_string(line_no);
    std::istringstream ls(line);
    std::string cw_text, bits_text, value_text;
    if (!std::getline(ls, cw_text, ',') || !std::getline(ls, bits_text, ',') ||
        !std::getline(ls, value_text)) {
      throw ConfigError(where + ": malformed row");
    }
    int codeword = 0;
    long long claimed = 0;
    try {
      codeword = std::stoi(cw_text);
      claimed = std::stoll(value_text);
    } catch (const std::exception&) {
      throw ConfigError(where + ": non-integer codeword or value");
    }
    if (codeword < 0 || codeword >= table.codeword_count()) {
      throw ConfigError(where + ": codeword " + std::to_string(codeword) +
                        " out of range");
    }
    if (static_cast<int>(bits_text.size()) != basis.length()) {
      throw ConfigError(where + ": bit string length " +
                        std::to_string(bits_text.size()) + " != basis length " +
                        std::to_string(basis.length()));
    }
    SelectionVector row = SelectionVector::from_string(bits_text);
    const long long value = row.value(basis);
    if (value != codeword || claimed != codeword) {
      throw ConfigError(where + ": row for codeword " +
                        std::to_string(codeword) + " decodes to " +
                        std::to_string(value));
    }
    table.rows[static_cast<std::size_t>(codeword)] = std::move(row);
    seen[static_cast<std::size_t>(codeword)] = true;
  }
  for (int x = 0; x < table.codeword_count(); ++x) {
    if (!seen[static_cast<std::size_t>(x)]) {
      throw ConfigError(source_name + ": missing row for codeword " +
                        std::to_string(x));
    }
  }
  return table;
}

RepresentationTable load_mapping_csv_file(const std::filesystem::path& path,
                                          const Basis& basis) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open mapping file " + path.string());
  }
  return load_mapping_csv(in, basis, path.string());
}

void save_lut(std::ostream& out, const RepresentationTable& table,
              const Basis& basis) {
  out << "# schema dacopt/lut v1\n";
  out << "# n_bits " << basis.n_bits << "\n";
  out << "# basis";
  for (int w : basis.weights) out << ' ' << w;
  out << "\n# bit order: basis index 0 is leftmost; line k holds the switch "
         "word for codeword k\n";
  for (const auto& row : table.rows) {
    out << row.to_string() << '\n';
  }
}

std::pair<Basis, RepresentationTable> load_lut(std::istream& in,
                                               const std::string& source_name) {
  Basis basis;
  bool have_bits = false;
  bool have_basis = false;
  std::vector<std::string> words;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line);
      std::string hash, key;
      ls >> hash >> key;
      if (key == "n_bits") {
        if (!(ls >> basis.n_bits)) {
          throw ConfigError(source_name + ":" + std::to_string(line_no) +
                            ": malformed n_bits header");
        }
        have_bits = true;
      } else if (key == "basis") {
        int w = 0;
        while (ls >> w) basis.weights.push_back(w);
        have_basis = true;
      }
      continue;
    }
    words.push_back(line);
  }
  if (!have_bits || !have_basis) {
    throw ConfigError(source_name + ": missing n_bits or basis header");
  }
  validate_basis(basis);
  RepresentationTable table;
  table.n_bits = basis.n_bits;
  table.basis_length = basis.length();
  if (static_cast<int>(words.size()) != table.codeword_count()) {
    throw ConfigError(source_name + ": expected " +
                      std::to_string(table.codeword_count()) + " words, got " +
                      std::to_string(words.size()));
  }
  for (int x = 0; x < table.codeword_count(); ++x) {
    const std::string& bits = words[static_cast<std::size_t>(x)];
    if (static_cast<int>(bits.size()) != basis.length()) {
      throw ConfigError(source_name + ": word for codeword " +
                        std::to_string(x) + " has length " +
                        std::to_string(bits.size()));
    }
    SelectionVector row = SelectionVector::from_string(bits);
    if (row.value(basis) != x) {
      throw ConfigError(source_name + ": word for codeword " +
                        std::to_string(x) + " decodes to " +
                        std::to_string(row.value(basis)));
    }
    table.rows.push_back(std::move(row));
  }
  return {std::move(basis), std::move(table)};
}

std::pair<Basis, RepresentationTable> load_lut_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open LUT file " + path.string());
  }
  return load_lut(in, path.string());
}

void save_trace_csv(std::ostream& out, const OptimizationTrace& trace) {
  if (trace.temperature.empty()) {
    out << "# schema dacopt/trace-descent v1\n";
    out << "# initial_objective " << fmt_double(trace.initial_objective)
        << "\n";
    out << "sweep,objective,moves\n";
    for (std::size_t k = 0; k < trace.objective.size(); ++k) {
      out << (k + 1) << ',' << fmt_double(trace.objective[k]) << ','
          << trace.accepted[k] << '\n';
    }
  } else {
    out << "# schema dacopt/trace-anneal v1\n";
    out << "# winning_restart " << trace.winning_restart << "\n";
    out << "step,temperature,best_raw_metric,accepted,rejected\n";
    for (std::size_t k = 0; k < trace.objective.size(); ++k) {
      out << (k + 1) << ',' << fmt_double(trace.temperature[k]) << ','
          << fmt_double(trace.objective[k]) << ',' << trace.accepted[k] << ','
          << trace.rejected[k] << '\n';
    }
  }
}

namespace {

void write_preamble(std::ostream& out, const std::string& schema,
                    const ExperimentConfig& config, const InputPmf& pmf) {
  out << "# schema " << schema << "\n";
  out << "# config " << config_to_json(config) << "\n";
  out << "# pmf " << pmf.description << "\n";
}

void write_config_echo(const ExperimentConfig& config) {
  auto out = open_output(std::filesystem::path(config.out) /
                         "config_echo.json");
  out << config_to_json_pretty(config);
}

void write_pmf_artifact(const ExperimentConfig& config, const InputPmf& pmf) {
  auto out = open_output(std::filesystem::path(config.out) / "pmf.csv");
  out << "# schema dacopt/pmf v1\n";
  out << "# pmf " << pmf.description << "\n";
  write_pmf_csv(out, pmf);
}

ordered_json report_json(const ArchReport& report, const SndrDistribution& dist,
                         const ExperimentConfig& config) {
  ordered_json j;
  j["name"] = report.name;
  j["switches"] = report.switches;
  j["raw_metric"] = report.raw;
  j["normalized_metric"] = report.normalized;
  j["sigma_delta"] = config.sigma_delta;
  j["realizations"] = dist.realizations();
  j["mean_sndr_db"] = dist.mean_db();
  j["linear_mean_sndr_db"] = dist.linear_mean_db();
  j["yield_quantile"] = config.quantile;
  j["yield_sndr_db"] = dist.yield_db(config.quantile);
  j["min_sndr_db"] = dist.min_db();
  j["max_sndr_db"] = dist.max_db();
  j["zero_error_realizations"] = dist.infinite_count;
  return j;
}

SimConfig sim_config_for(const ExperimentConfig& config,
                         const std::string& arch_name) {
  SimConfig sim;
  sim.realizations = config.realizations;
  sim.sigma_delta = config.sigma_delta;
  sim.yield_quantile = config.quantile;
  sim.mode = config.mode == "exact" ? SimMode::kExactExpectation
                                    : SimMode::kSampledWaveform;
  sim.waveform_samples = config.waveform_samples;
  sim.threads = config.threads;
  sim.seed =
      derive_seed(config.seed, RngStream::kArchitecture, fnv1a64(arch_name)) ^
      0x53494d0ull;  // separate the simulation stream from the search streams
  return sim;
}

}  // namespace

void cmd_metric(const ExperimentConfig& config) {
  validate_config(config);
  const InputPmf pmf = resolve_pmf(config);
  const std::vector<Architecture> archs = resolve_architectures(config, pmf);
  const std::filesystem::path out_dir(config.out);

  auto csv = open_output(out_dir / "metric.csv");
  write_preamble(csv, "dacopt/metric v1", config, pmf);
  csv << "name,switches,raw_metric,normalized_metric\n";
  for (const auto& arch : archs) {
    const ArchReport report = evaluate_architecture(
        arch.name, arch.basis, arch.table, pmf, config.sigma_delta);
    csv << report.name << ',' << report.switches << ','
        << fmt_double(report.raw) << ',' << fmt_double(report.normalized)
        << '\n';
    std::cout << report.name << ": switches=" << report.switches
              << " raw=" << fmt_double(report.raw)
              << " normalized=" << fmt_double(report.normalized) << "\n";
  }
  write_pmf_artifact(config, pmf);
  write_config_echo(config);
}

void cmd_optimize(const ExperimentConfig& config) {
  validate_config(config);
  bool any = false;
  for (const auto& spec : config.architectures) {
    const auto kind = parse_arch_spec(spec).kind;
    if (kind == ArchSpec::Kind::kFile || kind == ArchSpec::Kind::kOptimize) {
      any = true;
    }
  }
  if (!any) {
    throw ConfigError(
        "optimize needs at least one file:<path> or optimize:<L> "
        "architecture");
  }
  const InputPmf pmf = resolve_pmf(config);
  const std::vector<Architecture> archs = resolve_architectures(config, pmf);
  const std::filesystem::path out_dir(config.out);

  for (const auto& arch : archs) {
    if (!arch.has_trace) continue;  // canonical entries have nothing to write
    {
      auto out = open_output(out_dir / (arch.name + ".basis"));
      out << "# " << arch.name << " (n_bits " << config.n_bits << ", "
          << arch.basis.length() << " switches)\n";
      save_basis(out, arch.basis);
    }
    {
      auto out = open_output(out_dir / (arch.name + "_mapping.csv"));
      save_mapping_csv(out, arch.table, arch.basis);
    }
    {
      auto out = open_output(out_dir / (arch.name + "_trace.csv"));
      save_trace_csv(out, arch.trace);
    }
    const ArchReport report = evaluate_architecture(
        arch.name, arch.basis, arch.table, pmf, config.sigma_delta);
    std::cout << report.name << ": switches=" << report.switches
              << " raw=" << fmt_double(report.raw)
              << " normalized=" << fmt_double(report.normalized) << "\n";
  }
  write_pmf_artifact(config, pmf);
  write_config_echo(config);
}

void cmd_simulate(const ExperimentConfig& config) {
  validate_config(config);
  const InputPmf pmf = resolve_pmf(config);
  const std::vector<Architecture> archs = resolve_architectures(config, pmf);
  const std::filesystem::path out_dir(config.out);

  ordered_json summary;
  summary["schema"] = "dacopt/summary v1";
  summary["config"] = ordered_json::parse(config_to_json(config));
  summary["pmf"] = pmf.description;
  summary["architectures"] = ordered_json::array();

  for (const auto& arch : archs) {
    const SndrDistribution dist = run_simulation(
        arch.table, arch.basis, pmf, sim_config_for(config, arch.name));
    const ArchReport report = evaluate_architecture(
        arch.name, arch.basis, arch.table, pmf, config.sigma_delta);
    {
      auto out = open_output(out_dir / (arch.name + "_sndr.csv"));
      write_preamble(out, "dacopt/sndr v1", config, pmf);
      out << "# architecture " << arch.name << "\n";
      write_distribution_csv(out, dist);
    }
    summary["architectures"].push_back(report_json(report, dist, config));
    std::cout << arch.name << ": mean=" << fmt_double(dist.mean_db())
              << " dB, yield-" << fmt_double(config.quantile) << "="
              << fmt_double(dist.yield_db(config.quantile)) << " dB\n";
  }
  {
    auto out = open_output(out_dir / "summary.json");
    out << summary.dump(2) << "\n";
  }
  write_pmf_artifact(config, pmf);
  write_config_echo(config);
}

void cmd_export_lut(const ExperimentConfig& config,
                    const std::filesystem::path& basis_path,
                    const std::filesystem::path& mapping_path,
                    std::filesystem::path output_path) {
  const Basis basis = load_basis_file(basis_path);
  const RepresentationTable table = load_mapping_csv_file(mapping_path, basis);
  verify_table_decodes(table, basis);
  if (output_path.empty()) {
    output_path = std::filesystem::path(config.out) /
                  (mapping_path.stem().string() + ".lut");
  }
  auto out = open_output(output_path);
  save_lut(out, table, basis);
  std::cout << "wrote " << output_path.string() << " ("
            << table.codeword_count() << " words of " << basis.length()
            << " bits)\n";
}

void cmd_reproduce(const ExperimentConfig& config) {
  validate_config(config);
  if (config.n_bits != 8) {
    throw ConfigError("reproduce: the bundled reference bases are 8-bit");
  }
  const InputPmf pmf = resolve_pmf(config);
  const std::filesystem::path out_dir(config.out);
  const double thermo_raw = thermometer_reference_raw(pmf);

  struct Entry {
    std::string series;
    std::string name;
    Basis basis;
    RepresentationTable table;
    double raw = 0.0;
  };
  std::vector<Entry> entries;

  for (int length : reference_basis_lengths()) {
    Entry e;
    e.series = "optimized";
    e.name = "optimized_" + std::to_string(length);
    e.basis = reference_basis(length);
    const RepresentationIndex index = enumerate_all(e.basis);
    const std::uint64_t arch_seed =
        derive_seed(config.seed, RngStream::kArchitecture, fnv1a64(e.name));
    DescentResult res =
        best_descended(index, e.basis, pmf, config.descent_restarts,
                       config.descent_sweeps, arch_seed, &e.raw);
    e.table = std::move(res.table);
    entries.push_back(std::move(e));
  }
  for (int m : {2, 3, 4}) {
    Entry e;
    e.series = "segmented";
    e.name = "segmented_" + std::to_string(m) + "t" + std::to_string(8 - m) +
             "b";
    e.basis = segmented_basis(SegmentSpec{m, 8 - m}, 8);
    e.table = canonical_mapping(e.basis, ArchKind::kSegmented);
    e.raw = raw_mismatch_metric(activation_profile(e.table, pmf), e.basis);
    entries.push_back(std::move(e));
  }

  {
    auto out = open_output(out_dir / "fig2_metric.csv");
    write_preamble(out, "dacopt/fig2 v1", config, pmf);
    out << "series,name,switches,raw_metric,normalized_metric\n";
    for (const auto& e : entries) {
      out << e.series << ',' << e.name << ',' << e.basis.length() << ','
          << fmt_double(e.raw) << ',' << fmt_double(e.raw / thermo_raw)
          << '\n';
    }
  }

  std::vector<SndrDistribution> dists;
  dists.reserve(entries.size());
  for (const auto& e : entries) {
    dists.push_back(
        run_simulation(e.table, e.basis, pmf, sim_config_for(config, e.name)));
  }
  {
    auto out = open_output(out_dir / "fig3_mean_sndr.csv");
    write_preamble(out, "dacopt/fig3 v1", config, pmf);
    out << "series,name,switches,mean_sndr_db,linear_mean_sndr_db\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out << entries[i].series << ',' << entries[i].name << ','
          << entries[i].basis.length() << ','
          << fmt_double(dists[i].mean_db()) << ','
          << fmt_double(dists[i].linear_mean_db()) << '\n';
    }
  }
  {
    auto out = open_output(out_dir / "fig4_yield_sndr.csv");
    write_preamble(out, "dacopt/fig4 v1", config, pmf);
    out << "series,name,switches,yield_quantile,yield_sndr_db\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      out << entries[i].series << ',' << entries[i].name << ','
          << entries[i].basis.length() << ',' << fmt_double(config.quantile)
          << ',' << fmt_double(dists[i].yield_db(config.quantile)) << '\n';
    }
  }

  {
    auto out = open_output(out_dir / "table1_check.txt");
    out << "reference basis check (n_bits 8, pmf " << pmf.description
        << ")\n";
    int complete_count = 0;
    for (const auto& e : entries) {
      if (e.series != "optimized") continue;
      const bool complete = is_complete(e.basis);
      complete_count += complete ? 1 : 0;
      out << "L=" << e.basis.length() << ": weights";
      for (int w : e.basis.weights) out << ' ' << w;
      out << " | complete " << (complete ? "yes" : "NO") << " | raw "
          << fmt_double(e.raw) << " | normalized "
          << fmt_double(e.raw / thermo_raw) << "\n";
    }
    out << "result: " << (complete_count == 5 ? "PASS" : "FAIL") << " ("
        << complete_count << "/5 complete)\n";
  }

  {
    auto out = open_output(out_dir / "table2_check.txt");
    const Basis b13 = reference_basis(13);
    out << "13-switch reference mapping excerpt decode check\n";
    out << "basis:";
    for (int w : b13.weights) out << ' ' << w;
    out << "\n";
    int ok = 0;
    int total = 0;
    for (const auto& row : reference_mapping_excerpt()) {
      ++total;
      const SelectionVector v = SelectionVector::from_string(row.bits);
      const long long value = v.value(b13);
      const bool good = value == row.codeword;
      ok += good ? 1 : 0;
      out << "codeword " << row.codeword << ": bits " << row.bits << " -> "
          << value << (good ? " OK" : " MISMATCH") << "\n";
    }
    out << "result: " << (ok == total ? "PASS" : "FAIL") << " (" << ok << "/"
        << total << " decode)\n";
  }

  // The 13-switch mapping in full, diffable against the bundled excerpt.
  for (const auto& e : entries) {
    if (e.name != "optimized_13") continue;
    auto out = open_output(out_dir / "optimized_13_mapping.csv");
    save_mapping_csv(out, e.table, e.basis);
  }

  write_pmf_artifact(config, pmf);
  write_config_echo(config);
  std::cout << "wrote reproduction artifacts to " << out_dir.string() << "\n";
}

}  // namespace dacopt
