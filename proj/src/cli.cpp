#include "geoclust/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "geoclust/error.hpp"
#include "geoclust/sim.hpp"

namespace geoclust::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

double round10(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::strtod(buf, nullptr);
}

namespace {

std::string fmt10(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round10(x);
}

json num_array(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("config key '" + key + "' expects true/false, got '" + v + "'");
}

double parse_number(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || !std::isfinite(x))
    throw InputError("config key '" + key + "' expects a number, got '" + v + "'");
  return x;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  char* end = nullptr;
  if (v.empty() || v[0] == '-') throw InputError("config key '" + key + "' expects a nonnegative integer");
  const auto x = std::strtoull(v.c_str(), &end, 10);
  if (*end != '\0') throw InputError("config key '" + key + "' expects a nonnegative integer, got '" + v + "'");
  return x;
}

std::vector<std::string> parse_list(std::string v) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw InputError("unterminated list value '" + v + "'");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string file_stem(const std::string& label) {
  std::string s = label;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const fs::path& base_dir) {
  RunConfig cfg;
  bool have_panel = false;
  bool have_k_max = false;
  std::map<std::string, bool> seen;
  std::stringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // blank or table header
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    const std::string v = unquote(raw);
    if (seen[key]) throw InputError("config key '" + key + "' given twice");
    seen[key] = true;
    if (key == "panel") {
      cfg.panel = resolve(v);
      have_panel = true;
    } else if (key == "layout") {
      cfg.layout = io::parse_layout(v);
    } else if (key == "coords") {
      if (!v.empty()) cfg.coords = resolve(v);
    } else if (key == "variables") {
      cfg.variables = parse_list(raw);
    } else if (key == "include_spatial") {
      cfg.include_spatial = parse_bool(key, v);
    } else if (key == "delta_alpha") {
      cfg.delta_alpha = parse_number(key, v);
    } else if (key == "k") {
      cfg.k = parse_unsigned(key, v);
    } else if (key == "k_max") {
      cfg.k_max = parse_unsigned(key, v);
      have_k_max = true;
    } else if (key == "criterion") {
      if (v != "morelli" && v != "chavent") throw InputError("criterion must be 'morelli' or 'chavent'");
      cfg.criterion = v;
    } else if (key == "seed") {
      cfg.seed = parse_unsigned(key, v);
    } else if (key == "normalize") {
      cfg.normalize = parse_bool(key, v);
    } else if (key == "standardize") {
      cfg.standardize = parse_bool(key, v);
    } else {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  if (!have_panel) throw InputError("config needs a 'panel' entry");
  if (cfg.k && have_k_max) throw InputError("config sets both 'k' and 'k_max'");
  grid_steps(cfg.delta_alpha);
  if (cfg.include_spatial && !cfg.coords) throw InputError("include_spatial = true needs 'coords'");
  if (cfg.criterion == "chavent" && !cfg.k) throw InputError("criterion 'chavent' needs a fixed 'k'");
  if (cfg.k && *cfg.k < 2) throw InputError("k must be at least 2");
  if (!cfg.k && cfg.k_max < 2) throw InputError("k_max must be at least 2");
  if (!fs::exists(cfg.panel)) throw InputError("panel file not found: " + cfg.panel.string());
  if (cfg.coords && !fs::exists(*cfg.coords)) throw InputError("coordinates file not found: " + cfg.coords->string());
  return cfg;
}

RunConfig RunConfig::load(const fs::path& path) {
  return parse(io::read_file(path), path.parent_path());
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["panel"] = panel.generic_string();
  kv["layout"] = io::to_string(layout);
  kv["coords"] = coords ? coords->generic_string() : "";
  std::string vars;
  for (const auto& v : variables) vars += (vars.empty() ? "" : ",") + v;
  kv["variables"] = vars;
  kv["include_spatial"] = include_spatial ? "true" : "false";
  kv["delta_alpha"] = fmt10(delta_alpha);
  kv[k ? "k" : "k_max"] = std::to_string(k ? *k : k_max);
  kv["criterion"] = criterion;
  kv["seed"] = std::to_string(seed);
  kv["normalize"] = normalize ? "true" : "false";
  kv["standardize"] = standardize ? "true" : "false";
  std::string out;
  for (const auto& [key, value] : kv) out += key + "=" + value + "\n";
  return out;
}

namespace {

struct Inputs {
  TimeSeriesPanel panel;
  std::uint64_t panel_hash = 0;
  std::uint64_t input_hash = 0;
  std::optional<CoordinateSet> coords;
};

Inputs load_inputs(const fs::path& panel_path, io::PanelLayout layout, const std::optional<fs::path>& coords_path,
                   bool standardize) {
  Inputs in;
  const std::string bytes = io::read_file(panel_path);
  std::istringstream ss(bytes);
  in.panel = io::parse_panel(ss, layout);
  if (standardize) in.panel = standardize_series(std::move(in.panel));
  in.panel_hash = fnv1a64(bytes);
  in.input_hash = in.panel_hash;
  if (coords_path) {
    const std::string cbytes = io::read_file(*coords_path);
    std::istringstream cs(cbytes);
    in.coords = io::align_coords(io::parse_coords(cs), in.panel.unit_ids);
    in.input_hash = fnv1a64(cbytes, in.input_hash);
  }
  return in;
}

// DTW matrices are cached under cache_dir keyed by panel content, layout,
// standardization and variable.
DissimMatrix cached_feature_dissim(const Inputs& in, io::PanelLayout layout, bool standardize,
                                   const std::string& var, const fs::path& cache_dir) {
  const std::string key = hex64(in.panel_hash) + "|" + io::to_string(layout) + "|" + (standardize ? "z" : "raw") +
                          "|" + var + "|" + kVersion;
  const fs::path path = cache_dir / ("dtw-" + file_stem(var) + "-" + hex64(fnv1a64(key)) + ".csv");
  if (fs::exists(path)) {
    std::ifstream f(path, std::ios::binary);
    std::vector<std::string> ids;
    auto d = io::read_matrix(f, var, &ids);
    if (ids == in.panel.unit_ids) return DissimMatrix(var, d.size(), {d.entries().begin(), d.entries().end()});
  }
  auto d = feature_dissim(in.panel, var);
  std::ostringstream os;
  io::write_matrix(os, d, in.panel.unit_ids);
  io::write_file_atomic(path, os.str());
  return d;
}

std::string alpha_header(const std::vector<DissimMatrix>& ms, const std::string& prefix) {
  std::string h;
  for (const auto& m : ms) h += "," + prefix + m.label();
  return h;
}

}  // namespace

ClusterOutcome cmd_cluster(const RunConfig& cfg, const fs::path& out_dir) {
  const auto in = load_inputs(cfg.panel, cfg.layout, cfg.include_spatial ? cfg.coords : std::nullopt, cfg.standardize);
  const std::size_t n = in.panel.units();
  const auto w = UnitWeights::uniform(n);

  std::vector<std::string> vars = cfg.variables.empty() ? in.panel.variable_names : cfg.variables;
  std::vector<DissimMatrix> matrices;
  for (const auto& v : vars) {
    in.panel.variable_index(v);
    if (v == "spatial") throw InputError("variable name 'spatial' is reserved");
    matrices.push_back(cached_feature_dissim(in, cfg.layout, cfg.standardize, v, out_dir / "cache"));
  }
  if (cfg.include_spatial) matrices.push_back(spatial_dissim(*in.coords));
  if (cfg.normalize)
    for (auto& m : matrices) m = normalize_max(m);
  const std::size_t count = matrices.size();
  if (count < 2) throw InputError("clustering needs at least two dissimilarity matrices");

  const std::size_t k_top = cfg.k ? *cfg.k : cfg.k_max;
  if (k_top >= n) throw InputError("K must be smaller than the number of units (" + std::to_string(n) + ")");

  std::optional<SearchResult> elbow;
  std::optional<ChaventResult> chavent;
  std::optional<GridTrace> fixed_trace;
  std::size_t k = 0;
  std::size_t g = 0;
  if (cfg.criterion == "chavent") {
    if (count != 2) throw InputError("criterion 'chavent' needs exactly two matrices");
    k = *cfg.k;
    fixed_trace.emplace(evaluate_grid(matrices, simplex_grid(2, cfg.delta_alpha), k, w));
    chavent = chavent_alpha(*fixed_trace, k);
    g = chavent->grid_index;
  } else if (cfg.k) {
    k = *cfg.k;
    fixed_trace.emplace(evaluate_grid(matrices, simplex_grid(count, cfg.delta_alpha), k, w));
    g = best_alpha(*fixed_trace, k).grid_index;
  } else {
    elbow = elbow_table(matrices, cfg.delta_alpha, cfg.k_max, w);
    k = elbow->k_selected;
    g = elbow->row(k).best.grid_index;
  }
  const GridTrace& trace = elbow ? elbow->trace : *fixed_trace;
  const MixVector& alpha = trace.grid()[g];

  ClusterOutcome out;
  out.unit_ids = in.panel.unit_ids;
  out.report = report_at(matrices, trace, g, k, w, &out.restricted);
  out.partition = mixed_partition(matrices, alpha, k, w);

  // Matrices as used, so the run can be re-examined without the inputs.
  json jmatrices = json::array();
  for (std::size_t p = 0; p < count; ++p) {
    const std::string rel = "matrices/" + file_stem(matrices[p].label()) + ".csv";
    std::ostringstream os;
    io::write_matrix(os, matrices[p], out.unit_ids);
    io::write_file_atomic(out_dir / rel, os.str());
    const auto& row = out.report.matrices[p];
    json jm;
    jm["label"] = row.label;
    jm["file"] = rel;
    jm["alpha"] = num(row.alpha);
    jm["q"] = num(row.q);
    jm["q_tilde"] = num(row.q_tilde);
    jm["q_tilde_complement"] = num(row.q_tilde_complement);
    jm["joint_inertia"] = num(row.joint_inertia);
    jm["restricted_alpha"] = num_array(out.restricted[p].alpha.weights());
    jmatrices.push_back(jm);
  }

  {
    std::ostringstream os;
    os << "unit_id,cluster\n";
    for (std::size_t i = 0; i < n; ++i) os << io::csv_field(out.unit_ids[i]) << ',' << out.partition[i] + 1 << '\n';
    io::write_file_atomic(out_dir / "assignments.csv", os.str());
  }

  json jelbow = json::array();
  {
    std::ostringstream os;
    os << "k,q_bar,delta_q_bar" << alpha_header(matrices, "alpha_") << '\n';
    double prev = 0.0;
    for (std::size_t kk = 2; kk <= trace.k_max(); ++kk) {
      const auto best = best_alpha(trace, kk);
      const double delta = best.q_bar - prev;
      prev = best.q_bar;
      os << kk << ',' << fmt10(best.q_bar) << ',' << fmt10(delta);
      for (double a : best.alpha.weights()) os << ',' << fmt10(a);
      os << '\n';
      jelbow.push_back({{"k", kk}, {"q_bar", num(best.q_bar)}, {"delta_q_bar", num(delta)},
                        {"alpha", num_array(best.alpha.weights())}});
    }
    io::write_file_atomic(out_dir / "elbow.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "grid_index,k" << alpha_header(matrices, "alpha_") << ",q_bar" << alpha_header(matrices, "q_") << '\n';
    for (std::size_t gi = 0; gi < trace.grid().size(); ++gi)
      for (std::size_t kk = 2; kk <= trace.k_max(); ++kk) {
        os << gi << ',' << kk;
        for (double a : trace.grid()[gi].weights()) os << ',' << fmt10(a);
        os << ',' << fmt10(trace.q_bar(gi, kk));
        for (std::size_t p = 0; p < count; ++p) os << ',' << fmt10(trace.q(gi, kk, p));
        os << '\n';
      }
    io::write_file_atomic(out_dir / "grid.csv", os.str());
  }

  json jsearch;
  jsearch["criterion"] = cfg.criterion;
  jsearch["delta_alpha"] = num(cfg.delta_alpha);
  jsearch["k_fixed"] = cfg.k.has_value();
  jsearch["k_max"] = trace.k_max();
  jsearch["k_selected"] = k;
  jsearch["knee_tied"] = elbow ? elbow->knee_tied : false;
  jsearch["grid_size"] = trace.grid().size();
  jsearch["elbow"] = jelbow;
  if (chavent) {
    std::ostringstream os;
    os << "grid_index,alpha,q_tilde_0,q_tilde_1,objective\n";
    for (std::size_t i = 0; i < chavent->trace.size(); ++i) {
      const auto& pt = chavent->trace[i];
      os << i << ',' << fmt10(pt.alpha) << ',' << fmt10(pt.q_tilde0) << ',' << fmt10(pt.q_tilde1) << ','
         << fmt10(pt.objective) << '\n';
    }
    io::write_file_atomic(out_dir / "chavent.csv", os.str());
    jsearch["chavent"] = {{"alpha", num(chavent->alpha)}, {"objective", num(chavent->objective)}};
  }

  json jassign = json::object();
  for (std::size_t i = 0; i < n; ++i) jassign[out.unit_ids[i]] = out.partition[i] + 1;

  std::vector<std::uint32_t> parts(alpha.parts().begin(), alpha.parts().end());
  json report;
  report["assignments"] = jassign;
  report["units"] = n;
  report["search"] = jsearch;
  report["inertia"] = {{"k", k},
                       {"q_bar", num(out.report.q_bar)},
                       {"alpha", num_array(alpha.weights())},
                       {"alpha_parts", parts},
                       {"alpha_steps", alpha.steps()},
                       {"matrices", jmatrices}};
  const std::string canon = cfg.canonical();
  json jconfig = json::object();
  {
    std::stringstream cs(canon);
    std::string line;
    while (std::getline(cs, line)) {
      const auto eq = line.find('=');
      jconfig[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  report["config"] = jconfig;
  report["provenance"] = {{"version", kVersion},
                          {"config_hash", hex64(fnv1a64(canon))},
                          {"input_hash", hex64(in.input_hash)},
                          {"seed", cfg.seed}};
  out.report_json = report.dump(2) + "\n";
  io::write_file_atomic(out_dir / "report.json", out.report_json);
  out.matrices = std::move(matrices);
  return out;
}

std::vector<fs::path> cmd_dissim(const fs::path& panel, io::PanelLayout layout, const std::optional<fs::path>& coords,
                                 const fs::path& out_dir, bool standardize) {
  const auto in = load_inputs(panel, layout, coords, standardize);
  std::vector<DissimMatrix> ms;
  for (const auto& v : in.panel.variable_names) ms.push_back(feature_dissim(in.panel, v));
  if (in.coords) ms.push_back(spatial_dissim(*in.coords));
  std::vector<fs::path> written;
  for (const auto& m : ms) {
    std::ostringstream os;
    io::write_matrix(os, m, in.panel.unit_ids);
    const auto path = out_dir / (file_stem(m.label()) + ".csv");
    io::write_file_atomic(path, os.str());
    written.push_back(path);
  }
  return written;
}

namespace {

void append_outcome(std::ostream& os, const sim::ScenarioOutcome& o) {
  os << ',' << fmt10(o.alpha) << ',' << fmt10(o.score.accuracy) << ',' << fmt10(o.score.precision) << ','
     << fmt10(o.score.sensitivity) << ',' << fmt10(o.score.adjusted_rand) << ',' << fmt10(o.joint_inertia);
}

const char* kOutcomeColumns =
    "chavent_alpha,chavent_accuracy,chavent_precision,chavent_sensitivity,chavent_adjusted_rand,"
    "chavent_joint_inertia,morelli_alpha,morelli_accuracy,morelli_precision,morelli_sensitivity,"
    "morelli_adjusted_rand,morelli_joint_inertia";

std::string trace_csv(std::span<const sim::TraceRow> rows, bool with_pi) {
  std::ostringstream os;
  os << "rep,d,v";
  if (with_pi) os << ",pi_1,pi_2,pi_3,pi_4";
  os << ',' << kOutcomeColumns << '\n';
  for (const auto& r : rows) {
    os << r.rep << ',' << fmt10(r.d) << ',' << fmt10(r.v);
    if (with_pi)
      for (double p : r.pi) os << ',' << fmt10(p);
    append_outcome(os, r.result.chavent);
    append_outcome(os, r.result.morelli);
    os << '\n';
  }
  return os.str();
}

json correlations(std::span<const sim::TraceRow> rows) {
  std::vector<double> d, ji_c, ji_m, a_c, a_m;
  for (const auto& r : rows) {
    d.push_back(r.d);
    ji_c.push_back(r.result.chavent.joint_inertia);
    ji_m.push_back(r.result.morelli.joint_inertia);
    a_c.push_back(r.result.chavent.alpha);
    a_m.push_back(r.result.morelli.alpha);
  }
  if (rows.size() < 2) return json::object();
  return {{"spearman_d_joint_inertia_chavent", num(sim::spearman(d, ji_c))},
          {"spearman_d_joint_inertia_morelli", num(sim::spearman(d, ji_m))},
          {"spearman_d_alpha_chavent", num(sim::spearman(d, a_c))},
          {"spearman_d_alpha_morelli", num(sim::spearman(d, a_m))}};
}

}  // namespace

void cmd_simulate(const SimulateOptions& opt, const fs::path& out_dir) {
  if (opt.reps < 1) throw InputError("reps must be at least 1");
  const auto reading = sim::parse_spread_reading(opt.reading);
  grid_steps(opt.delta_alpha);
  json meta;
  meta["mode"] = opt.mode;
  meta["reading"] = sim::to_string(reading);
  meta["reps"] = opt.reps;
  meta["seed"] = opt.seed;
  meta["delta_alpha"] = num(opt.delta_alpha);
  meta["n"] = opt.n;
  meta["version"] = kVersion;

  if (opt.mode == "sweep") {
    sim::SimConfig base;
    base.n = opt.n;
    base.seed = opt.seed;
    base.delta_alpha = opt.delta_alpha;
    base.reading = reading;
    const std::vector<double> ds{0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    const auto res = sim::run_sweep(base, ds, opt.reps);
    std::ostringstream os;
    os << "d,chavent_alpha,chavent_accuracy,chavent_adjusted_rand,morelli_alpha,morelli_accuracy,"
          "morelli_adjusted_rand,joint_inertia,chavent_joint_inertia,reps,reading\n";
    for (const auto& r : res.rows) {
      os << fmt10(r.d) << ',' << fmt10(r.chavent_alpha_mode) << ',' << fmt10(r.chavent.accuracy.mean) << ','
         << fmt10(r.chavent.adjusted_rand.mean) << ',' << fmt10(r.morelli_alpha_mode) << ','
         << fmt10(r.morelli.accuracy.mean) << ',' << fmt10(r.morelli.adjusted_rand.mean) << ','
         << fmt10(r.morelli.joint_inertia.mean) << ',' << fmt10(r.chavent.joint_inertia.mean) << ',' << r.reps
         << ',' << sim::to_string(reading) << '\n';
    }
    io::write_file_atomic(out_dir / "summary.csv", os.str());
    io::write_file_atomic(out_dir / "trace.csv", trace_csv(res.trace, false));
    meta["correlations"] = correlations(res.trace);
  } else if (opt.mode == "montecarlo") {
    sim::MonteCarloConfig mc;
    mc.reps = opt.reps;
    mc.seed = opt.seed;
    mc.n = opt.n;
    mc.delta_alpha = opt.delta_alpha;
    mc.reading = reading;
    const auto res = sim::run_monte_carlo(mc);
    std::ostringstream os;
    os << "statistic,accuracy_chavent,accuracy_morelli,precision_chavent,precision_morelli,"
          "sensitivity_chavent,sensitivity_morelli,adjusted_rand_chavent,adjusted_rand_morelli\n";
    auto row = [&](const char* name, auto pick) {
      os << name;
      for (auto field : {&sim::CriterionSummary::accuracy, &sim::CriterionSummary::precision,
                         &sim::CriterionSummary::sensitivity, &sim::CriterionSummary::adjusted_rand})
        os << ',' << fmt10(pick(res.chavent.*field)) << ',' << fmt10(pick(res.morelli.*field));
      os << '\n';
    };
    row("mean", [](const sim::Summary& s) { return s.mean; });
    row("median", [](const sim::Summary& s) { return s.median; });
    row("sd", [](const sim::Summary& s) { return s.sd; });
    io::write_file_atomic(out_dir / "summary.csv", os.str());
    io::write_file_atomic(out_dir / "trace.csv", trace_csv(res.trace, true));
    meta["correlations"] = correlations(res.trace);
  } else {
    throw InputError("mode must be 'sweep' or 'montecarlo'");
  }
  io::write_file_atomic(out_dir / "run.json", meta.dump(2) + "\n");
}

JointInertiaBreakdown cmd_joint_inertia(const fs::path& run_dir, const std::string& matrix) {
  json report;
  try {
    report = json::parse(io::read_file(run_dir / "report.json"));
  } catch (const json::exception& e) {
    throw InputError(std::string("cannot parse report.json: ") + e.what());
  }
  try {
    const auto& jin = report.at("inertia");
    std::vector<DissimMatrix> ms;
    std::optional<std::size_t> m;
    std::vector<std::string> ids;
    for (const auto& jm : jin.at("matrices")) {
      const auto label = jm.at("label").get<std::string>();
      std::ifstream f(run_dir / jm.at("file").get<std::string>(), std::ios::binary);
      if (!f) throw InputError("missing matrix file for '" + label + "'");
      ms.push_back(io::read_matrix(f, label, &ids));
      if (label == matrix) m = ms.size() - 1;
    }
    if (!m) {
      std::string known;
      for (const auto& d : ms) known += " " + d.label();
      throw InputError("unknown matrix '" + matrix + "'; run has:" + known);
    }
    const auto k = jin.at("k").get<std::size_t>();
    const MixVector alpha(jin.at("alpha_parts").get<std::vector<std::uint32_t>>(),
                          jin.at("alpha_steps").get<std::uint32_t>());
    const double delta_alpha = 1.0 / alpha.steps();
    const auto w = UnitWeights::uniform(ms.front().size());

    std::vector<std::uint32_t> vertex(ms.size(), 0);
    vertex[*m] = alpha.steps();
    const auto part = mixed_partition(ms, alpha, k, w);
    const auto pure = mixed_partition(ms, MixVector(vertex, alpha.steps()), k, w);
    const auto restricted = best_alpha_restricted(ms, *m, k, delta_alpha, w);

    JointInertiaBreakdown b;
    b.label = matrix;
    b.k = k;
    b.alpha.assign(alpha.weights().begin(), alpha.weights().end());
    b.restricted_alpha.assign(restricted.choice.alpha.weights().begin(), restricted.choice.alpha.weights().end());
    b.q = prop_explained(ms[*m], part, w);
    b.q_tilde = norm_prop_explained(ms[*m], part, pure, w);
    const double base = complement_explained(ms, *m, restricted.partition, w);
    if (base < kBaselineFloor) throw DegenerateError("complement baseline is zero");
    b.q_tilde_complement = complement_explained(ms, *m, part, w) / base;
    b.joint_inertia = joint_inertia_multi(ms, *m, part, pure, restricted.partition, w);
    return b;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report.json: ") + e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatiotemporal hierarchical clustering with mixed dissimilarities", "geoclust"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string panel, coords, layout = "long", out_dir, config, run_dir, matrix;
  bool standardize = false;
  auto* dissim = app.add_subcommand("dissim", "Compute raw DTW and spatial dissimilarity matrices");
  dissim->add_option("--panel", panel, "Panel CSV")->required();
  dissim->add_option("--layout", layout, "long or wide")->capture_default_str();
  dissim->add_option("--coords", coords, "Coordinates CSV (unit_id, lat, lon)");
  dissim->add_option("--out", out_dir, "Output directory")->required();
  dissim->add_flag("--standardize", standardize, "z-score each series before DTW");

  auto* cluster = app.add_subcommand("cluster", "Search the mixing weights and cluster count, then cluster");
  cluster->add_option("--config", config, "key = value run configuration")->required();
  cluster->add_option("--out", out_dir, "Output directory")->required();

  SimulateOptions sopt;
  auto* simulate = app.add_subcommand("simulate", "Run the simulation study");
  simulate->add_option("--mode", sopt.mode, "sweep or montecarlo")->capture_default_str();
  simulate->add_option("--reps", sopt.reps, "Replicates (per d in sweep mode)")->capture_default_str();
  simulate->add_option("--seed", sopt.seed, "Master seed")->capture_default_str();
  simulate->add_option("--reading", sopt.reading, "Spread reading: variance, literal or sd")->capture_default_str();
  simulate->add_option("--delta-alpha", sopt.delta_alpha, "Grid step")->capture_default_str();
  simulate->add_option("--n", sopt.n, "Units per replicate")->capture_default_str();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* ji = app.add_subcommand("joint-inertia", "Joint inertia breakdown for one matrix of a cluster run");
  ji->add_option("--run", run_dir, "Directory written by 'cluster'")->required();
  ji->add_option("--matrix", matrix, "Matrix label")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dissim) {
      std::optional<fs::path> c;
      if (!coords.empty()) c = coords;
      for (const auto& p : cmd_dissim(panel, io::parse_layout(layout), c, out_dir, standardize))
        out << p.string() << '\n';
    } else if (*cluster) {
      const auto r = cmd_cluster(RunConfig::load(config), out_dir);
      out << "K = " << r.report.k << ", alpha =";
      for (double a : r.report.alpha) out << ' ' << fmt10(a);
      out << ", Q_bar = " << fmt10(r.report.q_bar) << '\n';
    } else if (*simulate) {
      cmd_simulate(sopt, out_dir);
      out << "wrote " << (fs::path(out_dir) / "summary.csv").string() << '\n';
    } else if (*ji) {
      const auto b = cmd_joint_inertia(run_dir, matrix);
      out << "matrix: " << b.label << '\n' << "k: " << b.k << '\n' << "alpha:";
      for (double a : b.alpha) out << ' ' << fmt10(a);
      out << '\n' << "restricted_alpha:";
      for (double a : b.restricted_alpha) out << ' ' << fmt10(a);
      out << '\n'
          << "q: " << fmt10(b.q) << '\n'
          << "q_tilde: " << fmt10(b.q_tilde) << '\n'
          << "q_tilde_complement: " << fmt10(b.q_tilde_complement) << '\n'
          << "joint_inertia: " << fmt10(b.joint_inertia) << '\n';
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateError& e) {
    err << "degenerate data: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace geoclust::cli
