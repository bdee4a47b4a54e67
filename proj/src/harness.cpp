#include "tvm/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "tvm/ballgame.hpp"
#include "tvm/configuration.hpp"
#include "tvm/coupling.hpp"
#include "tvm/errors.hpp"
#include "tvm/observables.hpp"
#include "tvm/oracle.hpp"
#include "tvm/parallel.hpp"
#include "tvm/simulator.hpp"
#include "tvm/stats.hpp"

namespace tvm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("invalid value for " + std::string(key) + ": '" + std::string(text) +
                          "'");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (auto item : split(text, ',')) out.push_back(parse_value<T>(key, item));
  return out;
}

// ---------------------------------------------------------------------------
// Collected data. A group is one (d, p) combination; untimed modes use a
// single NaN time.

struct Schema {
  std::vector<std::string> time_cols;
  std::vector<std::string> replica_cols;
};

struct ReplicaData {
  std::vector<std::vector<double>> at_time;  // [k][col]
  std::vector<double> values;                // [col]
};

struct Group {
  int dim = 0;
  double p = 0.0;
  std::vector<double> times;
  std::vector<ReplicaData> replicas;
  Json extra = Json::object();
};

std::vector<double> time_grid(const ExperimentSpec& spec) {
  std::vector<double> out;
  for (int k = 0; k <= spec.grid; ++k) out.push_back(spec.horizon * k / spec.grid);
  return out;
}

Json describe(std::span<const double> xs) {
  std::vector<double> v;
  for (double x : xs) {
    if (!std::isnan(x)) v.push_back(x);
  }
  Json j;
  j["n"] = v.size();
  if (v.empty()) return j;
  j["mean"] = stats::mean(v);
  j["se"] = stats::std_error(v);
  j["median"] = stats::median(v);
  j["q90"] = stats::quantile(v, 0.9);
  return j;
}

Json summarize(const Group& g, const Schema& schema) {
  Json j;
  j["d"] = g.dim;
  j["p"] = g.p;
  j["replicas"] = g.replicas.size();
  Json per_time = Json::array();
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    Json row;
    row["t"] = std::isnan(g.times[k]) ? Json(nullptr) : Json(g.times[k]);
    for (std::size_t c = 0; c < schema.time_cols.size(); ++c) {
      std::vector<double> xs;
      for (const auto& r : g.replicas) xs.push_back(r.at_time[k][c]);
      row[schema.time_cols[c]] = describe(xs);
    }
    per_time.push_back(std::move(row));
  }
  j["per_time"] = std::move(per_time);
  Json per_rep;
  for (std::size_t c = 0; c < schema.replica_cols.size(); ++c) {
    std::vector<double> xs;
    for (const auto& r : g.replicas) xs.push_back(r.values[c]);
    per_rep[schema.replica_cols[c]] = describe(xs);
  }
  j["per_replica"] = std::move(per_rep);
  if (!g.extra.empty()) j["reference"] = g.extra;
  return j;
}

Configuration initial_state(const ExperimentSpec& spec, const TorusShape& shape, double p,
                            RngStream& rng) {
  if (spec.init.empty()) return sample_product(shape, p, rng);
  if (spec.init.size() != shape.size()) {
    throw ValidationError("init has " + std::to_string(spec.init.size()) + " spins, torus has " +
                          std::to_string(shape.size()));
  }
  std::vector<std::uint8_t> bits;
  for (char c : spec.init) bits.push_back(c == '1');
  return Configuration(shape, std::move(bits));
}

/// Density used for the fluid curve: the spec's p, or the fraction of ones
/// of a fixed initial state.
double effective_density(const ExperimentSpec& spec, double p) {
  if (spec.init.empty()) return p;
  return static_cast<double>(std::count(spec.init.begin(), spec.init.end(), '1')) /
         static_cast<double>(spec.init.size());
}

Json exact_ones_fraction(const ExperimentSpec& spec, const TorusShape& shape, double p,
                         const std::vector<double>& times) {
  const CtmcModel model(shape);
  RngStream unused(0, 0);
  const auto dist = spec.init.empty()
                        ? model.product_distribution(p)
                        : model.point_distribution(initial_state(spec, shape, p, unused));
  Json out = Json::array();
  for (double m : model.mean_ones(dist, times)) out.push_back(m / shape.size());
  return out;
}

// ---------------------------------------------------------------------------
// Modes.

const Schema kTrajectorySchema{{"frac_ones", "fluid", "deviation", "explored_frac"},
                               {"sup_deviation", "final_ones"}};

Group run_trajectories(const ExperimentSpec& spec, int dim, double p, std::uint16_t combo) {
  const TorusShape shape(dim, spec.side);
  const double n = shape.size();
  const double pe = effective_density(spec, p);
  Group g{dim, pe, time_grid(spec), {}, Json::object()};
  g.replicas.resize(spec.replicas);
  parallel_for(spec.replicas, spec.workers, [&](std::uint64_t i) {
    RngStream rng(spec.seed, i, combo);
    Simulator sim(initial_state(spec, shape, p, rng), Dynamics::kThreshold);
    ExploredSetTracker explored;
    OnesCountRecorder ones;
    Observer* observers[] = {&explored, &ones};
    run(sim, spec.horizon, observers, rng, RunOptions{.record_events = false});
    const auto frac = ones.series().scaled(1.0 / n);
    ReplicaData& out = g.replicas[i];
    for (double t : g.times) {
      const double f = frac.value_at(t);
      const double fl = fluid(pe, t).value;
      out.at_time.push_back({f, fl, std::abs(f - fl), explored.series().value_at(t) / n});
    }
    out.values = {sup_deviation(frac, pe, spec.horizon), ones.series().final_value()};
  });
  if (shape.size() <= CtmcModel::kMaxSpins) {
    g.extra["frac_ones"] = exact_ones_fraction(spec, shape, p, g.times);
  }
  return g;
}

const Schema kCoupleSchema{{"frac_ones", "fluid", "deviation", "partner_frac", "survivor_frac",
                            "unexplored_survival", "death_martingale"},
                           {"sup_deviation", "violations"}};

/// Feeds the upper marginal of a coupled run to an explored-set tracker.
class UpperExplored : public PairObserver {
 public:
  void on_start(const Configuration& upper, const Configuration&, double time) override {
    tracker.on_start(upper, time);
  }
  void on_event(const Configuration& upper, const Configuration&,
                const CoupledEvent& e) override {
    if (e.flipped & kUpperFlipped) tracker.on_flip(upper, FlipEvent{e.time, e.vertex, e.upper_value});
  }
  void on_finish(const Configuration& upper, const Configuration&, double horizon) override {
    tracker.on_finish(upper, horizon);
  }
  ExploredSetTracker tracker;
};

Group run_coupled(const ExperimentSpec& spec, int dim, double p, std::uint16_t combo) {
  const TorusShape shape(dim, spec.side);
  const double n = shape.size();
  const double pe = effective_density(spec, p);
  Group g{dim, pe, time_grid(spec), {}, Json::object()};
  g.replicas.resize(spec.replicas);
  parallel_for(spec.replicas, spec.workers, [&](std::uint64_t i) {
    RngStream rng(spec.seed, i, combo);
    ReplicaData& out = g.replicas[i];
    if (spec.p2) {
      const auto pt = coupled_run_monotone(shape, p, *spec.p2, spec.horizon, rng);
      const auto lower = ones_series(pt.lower()).scaled(1.0 / n);
      const auto upper = ones_series(pt.upper()).scaled(1.0 / n);
      for (double t : g.times) {
        const double f = lower.value_at(t);
        const double fl = fluid(p, t).value;
        out.at_time.push_back({f, fl, std::abs(f - fl), upper.value_at(t), kNaN, kNaN, kNaN});
      }
      out.values = {sup_deviation(lower, p, spec.horizon),
                    static_cast<double>(pt.domination_violations)};
      return;
    }
    const Configuration start = initial_state(spec, shape, p, rng);
    UpperExplored explored;
    PairObserver* observers[] = {&explored};
    const auto pt = coupled_run_eta_zeta(start, start, spec.horizon, rng, observers);
    const auto upper = ones_series(pt.upper()).scaled(1.0 / n);
    const auto rec = survival_times(pt);
    for (double t : g.times) {
      const double f = upper.value_at(t);
      const double fl = fluid(pe, t).value;
      std::uint64_t alive = 0;
      std::uint64_t outside = 0;
      std::uint64_t outside_alive = 0;
      for (std::size_t j = 0; j < rec.vertices.size(); ++j) {
        alive += rec.first_ring[j] > t;
        if (!explored.tracker.contains(rec.vertices[j])) {
          ++outside;
          outside_alive += rec.tau[j] > t;
        }
      }
      const double decay = pe * std::exp(-t);
      out.at_time.push_back({f, fl, std::abs(f - fl), alive / n,
                             static_cast<double>(rec.surviving_at(t)) / n,
                             outside ? static_cast<double>(outside_alive) / outside : kNaN,
                             decay > 0.0 ? alive / decay : kNaN});
    }
    out.values = {sup_deviation(upper, pe, spec.horizon),
                  static_cast<double>(pt.domination_violations)};
  });
  g.extra["coupling"] = spec.p2 ? "monotone" : "eta-zeta";
  if (spec.p2) {
    g.extra["upper_p"] = *spec.p2;
  } else {
    Json death = Json::array();
    for (double t : g.times) {
      const auto law = spec.init.empty() ? death_law(shape, p, t) : death_law(shape, pe, t);
      death.push_back({{"t", t}, {"mean", law.mean}, {"variance", law.variance}});
    }
    g.extra["death_law"] = std::move(death);
  }
  return g;
}

const Schema kBallgameSchema{{"frac_ones", "fluid", "deviation"},
                             {"explored", "greedy", "lumped", "single_box"}};

Group run_ballgame(const ExperimentSpec& spec, int dim, double p, std::uint16_t combo,
                   CsvTable& dominance) {
  const TorusShape shape(dim, spec.side);
  const auto report = dominance_experiment(shape, p, spec.horizon, spec.replicas,
                                           default_m_grid(shape), spec.seed,
                                           std::uint64_t{combo} * spec.replicas, spec.workers);
  Group g{dim, p, {kNaN}, {}, Json::object()};
  for (std::uint64_t i = 0; i < spec.replicas; ++i) {
    ReplicaData r;
    r.at_time.push_back({kNaN, kNaN, kNaN});
    for (int a = 0; a < 4; ++a) r.values.push_back(report.samples[a][i]);
    g.replicas.push_back(std::move(r));
  }
  dominance.header = {"approach", "M", "survival", "stderr", "replicas"};
  for (int a = 0; a < 4; ++a) {
    for (const auto& s : report.survival[a]) {
      dominance.rows.push_back({DominanceReport::kNames[a], format_number(s.m),
                                format_number(s.survival), format_number(s.std_error),
                                std::to_string(spec.replicas)});
    }
  }
  Json violations = Json::array();
  for (const auto& v : report.violations()) {
    violations.push_back({{"lower", DominanceReport::kNames[v.lower_approach]},
                          {"upper", DominanceReport::kNames[v.lower_approach + 1]},
                          {"M", v.m},
                          {"gap", v.gap},
                          {"combined_se", v.combined_se}});
  }
  g.extra["m_grid"] = report.m_grid;
  g.extra["violations"] = std::move(violations);
  return g;
}

const Schema kOracleSchema{{"frac_ones", "fluid", "deviation", "death_frac"},
                           {"expected_c0", "var_c0", "expected_c0_frac"}};

Group run_oracle(const ExperimentSpec& spec, int dim, double p) {
  const TorusShape shape(dim, spec.side);
  const double pe = effective_density(spec, p);
  Group g{dim, pe, time_grid(spec), {}, Json::object()};
  ReplicaData r;
  std::vector<double> exact(g.times.size(), kNaN);
  if (shape.size() <= CtmcModel::kMaxSpins) {
    const auto j = exact_ones_fraction(spec, shape, p, g.times);
    for (std::size_t k = 0; k < exact.size(); ++k) exact[k] = j[k].get<double>();
  } else if (!spec.init.empty()) {
    throw CapacityError("exact transient solution needs at most " +
                        std::to_string(CtmcModel::kMaxSpins) + " spins");
  }
  for (std::size_t k = 0; k < g.times.size(); ++k) {
    const double fl = fluid(pe, g.times[k]).value;
    r.at_time.push_back({exact[k], fl, std::abs(exact[k] - fl), pe * std::exp(-g.times[k])});
  }
  const auto counts = expected_counts(shape, pe, dim);
  r.values = {counts.threshold_set, exact_var_threshold_set(shape, pe),
              counts.threshold_set / shape.size()};
  g.replicas.push_back(std::move(r));
  return g;
}

const Schema kLdpSchema{{"frac_ones", "fluid", "deviation"},
                        {"rate_value", "rate_limit", "drift", "growth", "admissible"}};

std::vector<Group> run_ldp(const ExperimentSpec& spec, double p) {
  const int d_max = *std::max_element(spec.dims.begin(), spec.dims.end());
  const auto constants = ldp_constants(p, spec.side);
  std::vector<Group> out;
  for (const auto& pt : ldp_convergence(p, d_max)) {
    Group g{pt.dim, p, {kNaN}, {}, Json::object()};
    ReplicaData r;
    r.at_time.push_back({kNaN, kNaN, kNaN});
    r.values = {pt.value, constants.rate, pt.drift, constants.growth,
                constants.admissible ? 1.0 : 0.0};
    g.replicas.push_back(std::move(r));
    out.push_back(std::move(g));
  }
  return out;
}

const Schema& schema_for(Mode mode) {
  switch (mode) {
    case Mode::kCouple: return kCoupleSchema;
    case Mode::kBallgame: return kBallgameSchema;
    case Mode::kOracle: return kOracleSchema;
    case Mode::kLdp: return kLdpSchema;
    default: return kTrajectorySchema;
  }
}

/// Kendall's tau between position and value; -1 for a strictly decreasing sequence.
double kendall_tau(const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      s += (v[j] > v[i]) - (v[j] < v[i]);
    }
  }
  const double pairs = v.size() * (v.size() - 1) / 2.0;
  return pairs > 0 ? s / pairs : 0.0;
}

Json sweep_trend(const std::vector<Group>& groups, const ExperimentSpec& spec) {
  Json out = Json::array();
  const auto sup_col = 0;  // sup_deviation is the first replica column
  for (double p : spec.densities) {
    Json entry;
    std::vector<double> medians;
    std::vector<double> q90s;
    Json dims = Json::array();
    for (const auto& g : groups) {
      if (g.p != effective_density(spec, p)) continue;
      std::vector<double> sups;
      for (const auto& r : g.replicas) sups.push_back(r.values[sup_col]);
      medians.push_back(stats::median(sups));
      q90s.push_back(stats::quantile(sups, 0.9));
      dims.push_back(g.dim);
    }
    bool decreasing = true;
    int drops = 0;
    for (std::size_t i = 1; i < medians.size(); ++i) {
      decreasing = decreasing && medians[i] < medians[i - 1];
      drops += medians[i] < medians[i - 1];
    }
    entry["p"] = effective_density(spec, p);
    entry["d"] = std::move(dims);
    entry["median_sup_deviation"] = medians;
    entry["q90_sup_deviation"] = q90s;
    entry["strictly_decreasing"] = decreasing;
    entry["decreasing_steps"] = drops;
    entry["kendall_tau"] = kendall_tau(medians);
    out.push_back(std::move(entry));
  }
  return out;
}

Json spec_json(const ExperimentSpec& spec) {
  Json j;
  j["mode"] = mode_name(spec.mode);
  j["d"] = spec.dims;
  j["r"] = spec.side;
  j["p"] = spec.densities;
  j["T"] = spec.horizon;
  j["replicas"] = spec.replicas;
  j["seed"] = spec.seed;
  j["grid"] = spec.grid;
  j["init"] = spec.init;
  j["p2"] = spec.p2 ? Json(*spec.p2) : Json(nullptr);
  return j;
}

std::string file_token(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

}  // namespace

std::string_view mode_name(Mode mode) noexcept {
  switch (mode) {
    case Mode::kSimulate: return "simulate";
    case Mode::kCouple: return "couple";
    case Mode::kSweep: return "sweep";
    case Mode::kBallgame: return "ballgame";
    case Mode::kOracle: return "oracle";
    case Mode::kLdp: return "ldp";
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::kSimulate, Mode::kCouple, Mode::kSweep, Mode::kBallgame, Mode::kOracle,
                 Mode::kLdp}) {
    if (mode_name(m) == name) return m;
  }
  throw ValidationError("mode: unknown mode '" + std::string(name) + "'");
}

void validate(const ExperimentSpec& spec) {
  std::vector<std::string> problems;
  auto bad = [&](std::string field, std::string why) {
    problems.push_back(std::move(field) + ": " + std::move(why));
  };
  if (spec.dims.empty()) bad("d", "at least one dimension required");
  for (int d : spec.dims) {
    if (d < 1) bad("d", "dimension " + std::to_string(d) + " below 1");
  }
  if (spec.mode == Mode::kSweep) {
    if (spec.dims.size() < 3) bad("d", "a sweep needs at least three dimensions");
    if (!std::is_sorted(spec.dims.begin(), spec.dims.end(), std::less_equal<>{}) ||
        std::adjacent_find(spec.dims.begin(), spec.dims.end()) != spec.dims.end()) {
      bad("d", "sweep dimensions must be strictly increasing");
    }
  }
  if (spec.side < 2) bad("r", "side length must be at least 2");
  if (spec.densities.empty()) bad("p", "at least one density required");
  for (double p : spec.densities) {
    if (!(p >= 0.0 && p <= 1.0)) bad("p", "density " + format_number(p) + " outside [0, 1]");
    if (spec.mode == Mode::kLdp && !(p > 0.0 && p < 0.5)) {
      bad("p", "rate sequence needs 0 < p < 1/2");
    }
    if (spec.mode == Mode::kBallgame) {
      if (!(p > 0.0 && p < 0.5)) bad("p", "ball games need 0 < p < 1/2");
      if (!(4.0 * p * (1.0 - p) * spec.side > 1.0)) bad("p", "ball games need 4p(1-p) > 1/r");
    }
  }
  if (!(spec.horizon > 0.0 && std::isfinite(spec.horizon))) bad("T", "horizon must be positive");
  if (spec.replicas < 1) bad("replicas", "at least one replica required");
  if (spec.grid < 1) bad("grid", "grid needs at least one interval");
  if (spec.out.empty()) bad("out", "output directory required");
  if (spec.dims.size() * spec.densities.size() > 65535) bad("d", "too many combinations");
  if (!spec.init.empty()) {
    if (spec.init.find_first_not_of("01") != std::string::npos) bad("init", "only 0 and 1 allowed");
    if (spec.mode != Mode::kSimulate && spec.mode != Mode::kCouple && spec.mode != Mode::kOracle) {
      bad("init", "fixed initial state only for simulate, couple and oracle");
    }
    if (spec.dims.size() != 1) bad("init", "fixed initial state needs a single dimension");
    if (spec.p2) bad("init", "the monotone coupling samples its own initial states");
  }
  if (spec.p2) {
    if (spec.mode != Mode::kCouple) bad("p2", "only used by couple");
    if (!(*spec.p2 >= 0.0 && *spec.p2 <= 1.0)) bad("p2", "density outside [0, 1]");
    for (double p : spec.densities) {
      if (p > *spec.p2) bad("p2", "must be at least every p");
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid experiment specification";
    for (const auto& s : problems) msg += "\n  " + s;
    throw ValidationError(msg);
  }
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "mode") {
    spec.mode = parse_mode(value);
  } else if (key == "d") {
    spec.dims = parse_list<int>(key, value);
  } else if (key == "r") {
    spec.side = parse_value<int>(key, value);
  } else if (key == "p") {
    spec.densities = parse_list<double>(key, value);
  } else if (key == "T") {
    spec.horizon = parse_value<double>(key, value);
  } else if (key == "replicas") {
    spec.replicas = parse_value<std::uint64_t>(key, value);
  } else if (key == "seed") {
    spec.seed = parse_value<std::uint64_t>(key, value);
  } else if (key == "grid") {
    spec.grid = parse_value<int>(key, value);
  } else if (key == "out") {
    spec.out = std::string(value);
  } else if (key == "init") {
    spec.init = std::string(value);
  } else if (key == "p2") {
    spec.p2 = parse_value<double>(key, value);
  } else if (key == "workers") {
    spec.workers = parse_value<unsigned>(key, value);
  } else {
    throw ValidationError("unknown setting '" + std::string(key) + "'");
  }
}

ExperimentSpec load_config(const std::filesystem::path& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config", path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    text = trim(text.substr(0, text.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(number) + ": expected key=value");
    }
    apply_setting(base, text.substr(0, eq), text.substr(eq + 1));
  }
  return base;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column " + std::string(name));
}

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read", path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    for (auto c : split(line, ',')) cells.emplace_back(c);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const Schema& schema = schema_for(spec.mode);
  ExperimentResult result;
  std::vector<Group> groups;

  const bool multiple = spec.dims.size() * spec.densities.size() > 1;
  std::uint16_t combo = 0;
  if (spec.mode == Mode::kLdp) {
    for (double p : spec.densities) {
      for (auto& g : run_ldp(spec, p)) groups.push_back(std::move(g));
    }
  } else {
    for (double p : spec.densities) {
      for (int d : spec.dims) {
        switch (spec.mode) {
          case Mode::kSimulate:
          case Mode::kSweep: groups.push_back(run_trajectories(spec, d, p, combo)); break;
          case Mode::kCouple: groups.push_back(run_coupled(spec, d, p, combo)); break;
          case Mode::kOracle: groups.push_back(run_oracle(spec, d, p)); break;
          case Mode::kBallgame: {
            CsvTable table;
            groups.push_back(run_ballgame(spec, d, p, combo, table));
            std::string name = multiple ? "dominance_d" + std::to_string(d) + "_p" +
                                              file_token(p) + ".csv"
                                        : "dominance.csv";
            result.dominance.emplace_back(std::move(name), std::move(table));
            break;
          }
          case Mode::kLdp: break;
        }
        ++combo;
      }
    }
  }

  CsvTable& rows = result.rows;
  rows.header = {"mode", "d", "r", "p", "replica", "t"};
  rows.header.insert(rows.header.end(), schema.time_cols.begin(), schema.time_cols.end());
  rows.header.insert(rows.header.end(), schema.replica_cols.begin(), schema.replica_cols.end());
  const std::string mode(mode_name(spec.mode));
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.replicas.size(); ++i) {
      const auto& rep = g.replicas[i];
      for (std::size_t k = 0; k < g.times.size(); ++k) {
        std::vector<std::string> row{mode, std::to_string(g.dim), std::to_string(spec.side),
                                     format_number(g.p), std::to_string(i),
                                     format_number(g.times[k])};
        for (double v : rep.at_time[k]) row.push_back(format_number(v));
        for (double v : rep.values) row.push_back(format_number(v));
        rows.rows.push_back(std::move(row));
      }
    }
  }

  Json& summary = result.summary;
  summary["spec"] = spec_json(spec);
  summary["columns"] = rows.header;
  Json out_groups = Json::array();
  for (const auto& g : groups) out_groups.push_back(summarize(g, schema));
  summary["groups"] = std::move(out_groups);
  if (spec.mode == Mode::kSweep) summary["trend"] = sweep_trend(groups, spec);
  if (spec.mode == Mode::kCouple) {
    double total = 0.0;
    for (const auto& g : groups) {
      for (const auto& r : g.replicas) total += r.values[1];
    }
    summary["domination_violations"] = total;
  }
  return result;
}

void write_result(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory (" + ec.message() + ")", dir.string());
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing", path.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed", path.string());
  };
  write(dir / "rows.csv", result.rows.to_string());
  write(dir / "summary.json", result.summary.dump(2) + "\n");
  for (const auto& [name, table] : result.dominance) write(dir / name, table.to_string());
}

}  // namespace tvm
