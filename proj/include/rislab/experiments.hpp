#ifndef RISLAB_EXPERIMENTS_HPP
#define RISLAB_EXPERIMENTS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "estimation.hpp"
#include "montecarlo.hpp"
#include "power_allocation.hpp"
#include "precoding.hpp"
#include "random.hpp"
#include "rates.hpp"
#include "types.hpp"

namespace rislab {

inline constexpr const char* kVersion = "0.3.0";

/// Circle-of-users layout: BS at the origin, circle centre on the x axis,
/// RIS offset from the centre towards the BS side.
struct ScenarioGeometry {
  double circle_radius = 50.0;
  double bs_center_distance = 200.0;
  double ris_center_distance = 100.0;
  double ris_angle_deg = 30.0;  // RIS bearing from the centre, measured from the -x axis
  double zeta_r = 2.1;
  double zeta_d = 3.2;
  double j0_db = -20.0;
  double j1 = 1.0;
  /// Divide direct and BS-RIS path losses by the direct loss at the circle
  /// centre, so P_t in dB reads as the SNR of that reference link.
  bool normalize = true;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  SystemDimensions dims{};
  CorrelationSpec correlation{};
  ScenarioGeometry geometry{};
  HardwareProfile hw = default_hardware();
  double snr_db = 0.0;        // P_t / sigma_k^2
  double pilot_snr_db = 0.0;  // rho / sigma_u^2
  double xi = 0.5;
  double e_u_db = 20.0;       // power-scaling constant
  int user = 0;
  std::size_t trials = 200;   // Monte Carlo blocks per grid point, 0 disables
  int batches = 20;
  std::vector<double> sweep;   // empty: experiment default
  std::vector<double> series;  // empty: experiment default

  static HardwareProfile default_hardware() {
    HardwareProfile hw = HardwareProfile::uniform_kappa(0.01);
    hw.phase_noise = {PhaseNoiseKind::VonMises, 0.1};
    return hw;
  }

  static ExperimentConfig desk_scale() {
    ExperimentConfig c;
    c.dims.bs_antennas = 64;
    c.dims.ris_horizontal = c.dims.ris_vertical = 10;
    c.dims.users = 6;
    c.dims.eve_antennas = 4;
    c.dims.pilot_length = 6;
    return c;
  }

  void apply_paper_scale() {
    dims.bs_antennas = 128;
    dims.ris_horizontal = dims.ris_vertical = 14;
  }

  double total_power() const { return std::pow(10.0, snr_db / 10.0); }
  double pilot_power() const { return std::pow(10.0, pilot_snr_db / 10.0); }

  void validate() const {
    dims.validate();
    correlation.validate();
    hw.validate();
    require(xi >= 0.0 && xi <= 1.0, "xi must lie in [0,1]");
    require(user >= 0 && user < dims.users, "target user index out of range");
    require(trials == 0 || trials >= 2, "trials must be 0 or at least 2");
    require(trials == 0 || (batches >= 2 && static_cast<std::size_t>(batches) <= trials),
            "batches must lie in [2, trials]");
    require(geometry.circle_radius > 0.0, "circle radius must be positive");
    require(geometry.bs_center_distance >= 0.0 && geometry.ris_center_distance >= 0.0,
            "centre distances must be non-negative");
  }
};

// ---- JSON -----------------------------------------------------------------

using Json = nlohmann::json;

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["dims"] = {{"bs_antennas", c.dims.bs_antennas},   {"ris_horizontal", c.dims.ris_horizontal},
               {"ris_vertical", c.dims.ris_vertical}, {"users", c.dims.users},
               {"eve_antennas", c.dims.eve_antennas}, {"pilot_length", c.dims.pilot_length}};
  j["correlation"] = {{"bs_index", c.correlation.bs_index},
                      {"wavelength", c.correlation.wavelength},
                      {"ris_spacing_h", c.correlation.ris_spacing_h},
                      {"ris_spacing_v", c.correlation.ris_spacing_v},
                      {"bs_spacing", c.correlation.bs_spacing},
                      {"ris_spacing", c.correlation.ris_spacing},
                      {"correlated_ris", c.correlation.correlated_ris}};
  j["geometry"] = {{"circle_radius", c.geometry.circle_radius},
                   {"bs_center_distance", c.geometry.bs_center_distance},
                   {"ris_center_distance", c.geometry.ris_center_distance},
                   {"ris_angle_deg", c.geometry.ris_angle_deg},
                   {"zeta_r", c.geometry.zeta_r},
                   {"zeta_d", c.geometry.zeta_d},
                   {"j0_db", c.geometry.j0_db},
                   {"j1", c.geometry.j1},
                   {"normalize", c.geometry.normalize}};
  j["hardware"] = {{"kappa_t_ue", c.hw.kappa_t_ue},
                   {"kappa_r_bs", c.hw.kappa_r_bs},
                   {"kappa_t_bs", c.hw.kappa_t_bs},
                   {"kappa_r_ue", c.hw.kappa_r_ue},
                   {"sigma_u2", c.hw.sigma_u2},
                   {"sigma_k2", c.hw.sigma_k2},
                   {"phase_noise", to_string(c.hw.phase_noise.kind)},
                   {"phase_noise_variance", c.hw.phase_noise.variance}};
  j["snr_db"] = c.snr_db;
  j["pilot_snr_db"] = c.pilot_snr_db;
  j["xi"] = c.xi;
  j["e_u_db"] = c.e_u_db;
  j["user"] = c.user;
  j["trials"] = c.trials;
  j["batches"] = c.batches;
  j["sweep"] = c.sweep;
  j["series"] = c.series;
  return j;
}

namespace detail {

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("config field '") + key + "': " + e.what());
  }
}

inline void check_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InvalidParameter("config section '" + where + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw InvalidParameter("unknown config field '" + where + (where.empty() ? "" : ".") + it.key() + "'");
}

}  // namespace detail

/// Overlays the fields present in j onto base. Unknown keys are rejected.
inline ExperimentConfig from_json(const Json& j, ExperimentConfig c = ExperimentConfig::desk_scale()) {
  using detail::read;
  detail::check_keys(j,
                     {"seed", "dims", "correlation", "geometry", "hardware", "snr_db", "pilot_snr_db", "xi", "e_u_db",
                      "user", "trials", "batches", "sweep", "series", "kappa"},
                     "");
  read(j, "seed", c.seed);
  if (j.contains("dims")) {
    const Json& d = j["dims"];
    detail::check_keys(d, {"bs_antennas", "ris_horizontal", "ris_vertical", "users", "eve_antennas", "pilot_length"},
                       "dims");
    const int users_before = c.dims.users;
    const int tau_before = c.dims.pilot_length;
    read(d, "bs_antennas", c.dims.bs_antennas);
    read(d, "ris_horizontal", c.dims.ris_horizontal);
    read(d, "ris_vertical", c.dims.ris_vertical);
    read(d, "users", c.dims.users);
    read(d, "eve_antennas", c.dims.eve_antennas);
    read(d, "pilot_length", c.dims.pilot_length);
    // pilot length follows K unless set explicitly
    if (!d.contains("pilot_length") && c.dims.users != users_before && tau_before == users_before)
      c.dims.pilot_length = c.dims.users;
  }
  if (j.contains("correlation")) {
    const Json& d = j["correlation"];
    detail::check_keys(d,
                       {"bs_index", "wavelength", "ris_spacing_h", "ris_spacing_v", "bs_spacing", "ris_spacing",
                        "correlated_ris"},
                       "correlation");
    read(d, "bs_index", c.correlation.bs_index);
    read(d, "wavelength", c.correlation.wavelength);
    read(d, "ris_spacing_h", c.correlation.ris_spacing_h);
    read(d, "ris_spacing_v", c.correlation.ris_spacing_v);
    read(d, "bs_spacing", c.correlation.bs_spacing);
    read(d, "ris_spacing", c.correlation.ris_spacing);
    read(d, "correlated_ris", c.correlation.correlated_ris);
  }
  if (j.contains("geometry")) {
    const Json& d = j["geometry"];
    detail::check_keys(d,
                       {"circle_radius", "bs_center_distance", "ris_center_distance", "ris_angle_deg", "zeta_r",
                        "zeta_d", "j0_db", "j1", "normalize"},
                       "geometry");
    read(d, "circle_radius", c.geometry.circle_radius);
    read(d, "bs_center_distance", c.geometry.bs_center_distance);
    read(d, "ris_center_distance", c.geometry.ris_center_distance);
    read(d, "ris_angle_deg", c.geometry.ris_angle_deg);
    read(d, "zeta_r", c.geometry.zeta_r);
    read(d, "zeta_d", c.geometry.zeta_d);
    read(d, "j0_db", c.geometry.j0_db);
    read(d, "j1", c.geometry.j1);
    read(d, "normalize", c.geometry.normalize);
  }
  if (j.contains("kappa")) {
    double k = 0.0;
    read(j, "kappa", k);
    c.hw.kappa_t_ue = c.hw.kappa_r_bs = c.hw.kappa_t_bs = c.hw.kappa_r_ue = k;
  }
  if (j.contains("hardware")) {
    const Json& d = j["hardware"];
    detail::check_keys(d,
                       {"kappa_t_ue", "kappa_r_bs", "kappa_t_bs", "kappa_r_ue", "sigma_u2", "sigma_k2", "phase_noise",
                        "phase_noise_variance"},
                       "hardware");
    read(d, "kappa_t_ue", c.hw.kappa_t_ue);
    read(d, "kappa_r_bs", c.hw.kappa_r_bs);
    read(d, "kappa_t_bs", c.hw.kappa_t_bs);
    read(d, "kappa_r_ue", c.hw.kappa_r_ue);
    read(d, "sigma_u2", c.hw.sigma_u2);
    read(d, "sigma_k2", c.hw.sigma_k2);
    if (d.contains("phase_noise")) {
      std::string kind;
      read(d, "phase_noise", kind);
      c.hw.phase_noise.kind = phase_noise_kind_from_string(kind);
    }
    read(d, "phase_noise_variance", c.hw.phase_noise.variance);
  }
  read(j, "snr_db", c.snr_db);
  read(j, "pilot_snr_db", c.pilot_snr_db);
  read(j, "xi", c.xi);
  read(j, "e_u_db", c.e_u_db);
  read(j, "user", c.user);
  read(j, "trials", c.trials);
  read(j, "batches", c.batches);
  read(j, "sweep", c.sweep);
  read(j, "series", c.series);
  return c;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = ExperimentConfig::desk_scale()) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw InvalidParameter("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j, std::move(base));
}

/// FNV-1a over the canonical (sorted-key) JSON dump, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& c) {
  const std::string s = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- scenario -------------------------------------------------------------

struct Point {
  double x = 0.0, y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Scenario {
  Point bs, ris, center;
  std::vector<Point> users;
  Point eve;
  LargeScaleFading fading;
  double reference_gain = 1.0;  // applied to direct and BS-RIS losses
};

/// K users and Eve evenly spaced on the circle with a seeded rotation; Eve
/// takes the last slot.
inline Scenario generate_scenario(const ExperimentConfig& cfg, std::uint64_t seed) {
  const ScenarioGeometry& g = cfg.geometry;
  const int k = cfg.dims.users;
  require(k >= 1, "need at least one user");
  Scenario s;
  s.bs = {0.0, 0.0};
  s.center = {g.bs_center_distance, 0.0};
  const double a = g.ris_angle_deg * kPi / 180.0;
  s.ris = {s.center.x - g.ris_center_distance * std::cos(a), s.center.y + g.ris_center_distance * std::sin(a)};
  Rng rng(seed, Stream::Geometry, 0);
  const double offset = rng.uniform(0.0, 2.0 * kPi);
  const double j0 = std::pow(10.0, g.j0_db / 10.0);
  // reference link: BS to circle centre, or to the circle when the BS sits at the centre
  const double ref_distance = g.bs_center_distance > 0.0 ? g.bs_center_distance : g.circle_radius;
  s.reference_gain = g.normalize ? 1.0 / path_loss(ref_distance, g.zeta_d, j0, g.j1) : 1.0;
  auto direct = [&](Point p) { return path_loss(distance(s.bs, p), g.zeta_d, j0, g.j1) * s.reference_gain; };
  auto reflected = [&](Point p) { return path_loss(distance(s.ris, p), g.zeta_r, j0, g.j1); };
  s.fading.beta_1 = path_loss(distance(s.bs, s.ris), g.zeta_r, j0, g.j1) * s.reference_gain;
  for (int i = 0; i <= k; ++i) {
    const double ang = offset + 2.0 * kPi * i / (k + 1);
    const Point p{s.center.x + g.circle_radius * std::cos(ang), s.center.y + g.circle_radius * std::sin(ang)};
    if (i < k) {
      s.users.push_back(p);
      s.fading.beta_I.push_back(reflected(p));
      s.fading.beta_2.push_back(direct(p));
    } else {
      s.eve = p;
      s.fading.beta_IE = reflected(p);
      s.fading.beta_3 = direct(p);
    }
  }
  return s;
}

// ---- results ---------------------------------------------------------------

struct ResultTable {
  std::vector<std::string> columns;      // value columns, sweep variables first
  std::vector<std::vector<double>> rows;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> warnings;
  Json extra = Json::object();           // experiment-specific manifest fields
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_text(const ResultTable& t) {
  std::string out;
  for (const auto& c : t.columns) out += c + ",";
  out += "seed,config_hash\n";
  for (const auto& row : t.rows) {
    for (double v : row) out += format_number(v) + ",";
    out += std::to_string(t.seed) + "," + t.config_hash + "\n";
  }
  return out;
}

/// Writes via a temporary file and rename, so readers never see a partial CSV.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

inline void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw InvalidParameter("result table is empty, nothing written to '" + path.string() + "'");
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size()) throw InvalidParameter("result row width does not match header");
  write_atomic(path, csv_text(table));
}

// ---- experiment plumbing ----------------------------------------------------

/// Statistics, estimator and trace summary of one grid point.
struct Evaluation {
  ChannelStatistics stats;
  EstimatorStatistics est;
  PilotConfig pilots;
  TraceSummary trace;
};

inline Evaluation evaluate(const ExperimentConfig& cfg, const LargeScaleFading& fading) {
  Evaluation e;
  e.stats = build_statistics(cfg.dims, cfg.correlation, fading, cfg.hw, cfg.seed, nullptr, cfg.trials > 0);
  e.pilots = PilotConfig::dft(cfg.dims.pilot_length, cfg.dims.users, cfg.pilot_power());
  e.est = estimator_statistics(e.stats, cfg.hw, e.pilots);
  e.trace = trace_summary(e.stats, e.est, cfg.user);
  return e;
}

inline TrialPlan plan_for(const ExperimentConfig& cfg, std::size_t row, bool downlink = true) {
  TrialPlan p;
  p.blocks = cfg.trials;
  p.seed = substream_seed(cfg.seed, Stream::Scratch, row);
  p.batches = cfg.batches;
  p.downlink = downlink;
  p.eve = downlink;
  return p;
}

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SecrecyPoint {
  double user = kNaN, eve = kNaN, r_sec = kNaN, difference = kNaN, split = kNaN;
};

/// Closed-form secrecy quantities. Infinite Eve capacity is written as inf
/// with a warning; an invalid bound propagates.
inline SecrecyPoint closed_secrecy(const TraceSummary& t, const PowerAllocation& alloc, const HardwareProfile& hw,
                                   std::vector<std::string>& warnings, const std::string& where) {
  SecrecyPoint s;
  s.user = user_rate(t, alloc, hw).rate;
  try {
    const SecrecyReport r = secrecy_rate(t, alloc, hw);
    s.eve = r.eve.capacity;
    s.difference = r.difference;
    s.r_sec = r.r_sec;
    s.split = r.r_sec_xi_form;
    if (!r.eve.inverse_mean_margin)
      warnings.push_back(where + ": Wishart degrees of freedom within one of M_E");
  } catch (const InfiniteCapacity& e) {
    s.eve = INFINITY;
    s.difference = -INFINITY;
    s.r_sec = 0.0;
    s.split = 0.0;
    warnings.push_back(where + ": " + e.what());
  }
  return s;
}

struct OraclePoint {
  double user = kNaN, user_se = kNaN, eve = kNaN, eve_se = kNaN, r_sec = kNaN, r_sec_se = kNaN;
  double nmse = kNaN, nmse_se = kNaN;
};

inline OraclePoint run_point_oracle(const ExperimentConfig& cfg, const Evaluation& e, const PowerAllocation& alloc,
                                    std::size_t row, bool downlink, ResultTable& table) {
  OraclePoint o;
  if (cfg.trials == 0) return o;
  OracleSetup setup{&e.stats, cfg.hw, e.pilots, &e.est, alloc};
  const OracleEstimates est = run_oracle(setup, plan_for(cfg, row, downlink));
  const UserOracle& u = est.users[cfg.user];
  o.nmse = u.nmse.mean;
  o.nmse_se = u.nmse.se;
  if (!downlink) return o;
  o.user = u.rate.mean;
  o.user_se = u.rate.se;
  o.eve = u.eve_capacity.mean;
  o.eve_se = u.eve_capacity.se;
  o.r_sec = std::max(0.0, o.user - o.eve);
  o.r_sec_se = std::hypot(o.user_se, o.eve_se);
  if (est.regularized)
    table.warnings.push_back("row " + std::to_string(row) + ": Eve noise regularized with sigma_E^2 = " +
                             format_number(est.sigma_e2));
  if (est.rank_deficient_blocks > 0)
    table.warnings.push_back("row " + std::to_string(row) + ": " + std::to_string(est.rank_deficient_blocks) +
                             " blocks with rank-deficient channel estimates");
  return o;
}

inline std::vector<double> or_default(const std::vector<double>& v, std::vector<double> d) {
  return v.empty() ? d : v;
}

inline void set_uplink_kappa(HardwareProfile& hw, double k) { hw.kappa_t_ue = hw.kappa_r_bs = k; }
inline void set_all_kappa(HardwareProfile& hw, double k) {
  hw.kappa_t_ue = hw.kappa_r_bs = hw.kappa_t_bs = hw.kappa_r_ue = k;
}

inline int side_to_int(double side) {
  const long v = std::lround(side);
  require(v >= 1 && std::abs(side - v) < 1e-9, "RIS side length must be a positive integer");
  return static_cast<int>(v);
}

// ---- experiments -----------------------------------------------------------

inline ResultTable nmse_vs_snr(const ExperimentConfig& base) {
  ResultTable t;
  t.columns = {"kappa", "snr_db", "nmse_closed", "nmse_floor", "nmse_mc", "nmse_mc_se"};
  const Scenario sc = generate_scenario(base, base.seed);
  for (double kappa : or_default(base.series, {0.0, 0.05 * 0.05, 0.01}))
    for (double snr : or_default(base.sweep, {-10, -5, 0, 5, 10, 15, 20, 25, 30})) {
      ExperimentConfig c = base;
      set_uplink_kappa(c.hw, kappa);
      c.pilot_snr_db = snr;
      const Evaluation e = evaluate(c, sc.fading);
      const double floor = nmse_high_power_limit(e.stats, c.hw, c.dims.pilot_length, c.user);
      const OraclePoint o = run_point_oracle(c, e, PowerAllocation(c.total_power(), c.xi, c.dims.bs_antennas,
                                                                   c.dims.users),
                                             t.rows.size(), false, t);
      t.rows.push_back({kappa, snr, e.est.nmse[c.user], floor, o.nmse, o.nmse_se});
    }
  return t;
}

inline ResultTable nmse_vs_n(const ExperimentConfig& base) {
  ResultTable t;
  t.columns = {"kappa", "n", "nmse_closed", "nmse_large_n", "nmse_mc", "nmse_mc_se"};
  const Scenario sc = generate_scenario(base, base.seed);
  for (double kappa : or_default(base.series, {0.0, 0.01}))
    for (double side : or_default(base.sweep, {4, 6, 8, 10, 12, 16})) {
      ExperimentConfig c = base;
      set_uplink_kappa(c.hw, kappa);
      c.dims.ris_horizontal = c.dims.ris_vertical = side_to_int(side);
      const int n = c.dims.ris_elements();
      const Evaluation e = evaluate(c, sc.fading);
      const double large = nmse_large_n_limit(sc.fading.beta_2[c.user], sc.fading.beta_I[c.user], sc.fading.beta_1, n,
                                              c.pilot_power(), c.dims.pilot_length, c.hw.sigma_u2);
      const OraclePoint o = run_point_oracle(
          c, e, PowerAllocation(c.total_power(), c.xi, c.dims.bs_antennas, c.dims.users), t.rows.size(), false, t);
      t.rows.push_back({kappa, static_cast<double>(n), e.est.nmse[c.user], large, o.nmse, o.nmse_se});
    }
  return t;
}

/// Shared body of the three secrecy sweeps; apply() sets the swept value.
inline ResultTable secrecy_sweep(const ExperimentConfig& base, const std::string& variable,
                                 const std::vector<double>& sweep,
                                 const std::function<void(ExperimentConfig&, double)>& apply) {
  ResultTable t;
  t.columns = {"kappa",       variable,         "r_user_closed", "c_eve_closed", "r_sec_closed", "r_user_mc",
               "r_user_mc_se", "c_eve_mc", "c_eve_mc_se",   "r_sec_mc",     "r_sec_mc_se"};
  const Scenario sc = generate_scenario(base, base.seed);
  for (double kappa : or_default(base.series, {0.0, 0.05 * 0.05, 0.01}))
    for (double v : sweep) {
      ExperimentConfig c = base;
      set_all_kappa(c.hw, kappa);
      apply(c, v);
      c.validate();
      const Evaluation e = evaluate(c, sc.fading);
      const PowerAllocation alloc(c.total_power(), c.xi, c.dims.bs_antennas, c.dims.users);
      const std::string where = "kappa=" + format_number(kappa) + " " + variable + "=" + format_number(v);
      const SecrecyPoint s = closed_secrecy(e.trace, alloc, c.hw, t.warnings, where);
      const OraclePoint o = run_point_oracle(c, e, alloc, t.rows.size(), true, t);
      t.rows.push_back(
          {kappa, v, s.user, s.eve, s.r_sec, o.user, o.user_se, o.eve, o.eve_se, o.r_sec, o.r_sec_se});
    }
  return t;
}

inline ResultTable secrecy_vs_snr(const ExperimentConfig& base) {
  return secrecy_sweep(base, "snr_db", or_default(base.sweep, {-10, -5, 0, 5, 10, 15, 20}),
                       [](ExperimentConfig& c, double v) { c.snr_db = v; });
}

inline ResultTable secrecy_vs_m(const ExperimentConfig& base) {
  return secrecy_sweep(base, "m", or_default(base.sweep, {16, 32, 64, 128}), [](ExperimentConfig& c, double v) {
    c.dims.bs_antennas = side_to_int(v);
  });
}

inline ResultTable secrecy_vs_n(const ExperimentConfig& base) {
  ResultTable t = secrecy_sweep(base, "ris_side", or_default(base.sweep, {4, 6, 8, 10, 12, 16, 20, 24}),
                                [](ExperimentConfig& c, double v) {
                                  c.dims.ris_horizontal = c.dims.ris_vertical = side_to_int(v);
                                });
  // report N rather than the side length
  t.columns[1] = "n";
  for (auto& row : t.rows) row[1] = row[1] * row[1];
  return t;
}

/// Identity correlations, ideal uplink hardware, P_t = E_u / N.
inline ResultTable asymptotic_vs_n(const ExperimentConfig& base) {
  ResultTable t;
  t.columns = {"kappa", "n", "r_sec_closed", "r_sec_uncorrelated", "r_sec_large_n", "r_sec_power_scaled",
               "r_sec_limit"};
  const Scenario sc = generate_scenario(base, base.seed);
  const double e_u = std::pow(10.0, base.e_u_db / 10.0);
  for (double kappa : or_default(base.series, {0.0, 0.01}))
    for (double side : or_default(base.sweep, {8, 16, 32, 48, 64})) {
      ExperimentConfig c = base;
      c.correlation.correlated_ris = false;
      c.correlation.bs_index = 0.0;
      c.hw.kappa_t_ue = c.hw.kappa_r_bs = 0.0;
      c.hw.kappa_t_bs = c.hw.kappa_r_ue = kappa;
      c.dims.ris_horizontal = c.dims.ris_vertical = side_to_int(side);
      const int n = c.dims.ris_elements();
      const double pt = e_u / n;
      c.snr_db = 10.0 * std::log10(pt);
      const std::string where = "kappa=" + format_number(kappa) + " n=" + std::to_string(n);
      const Evaluation e = evaluate(c, sc.fading);
      const PowerAllocation alloc(pt, c.xi, c.dims.bs_antennas, c.dims.users);
      const SecrecyPoint s = closed_secrecy(e.trace, alloc, c.hw, t.warnings, where);
      double unc = kNaN, large = kNaN, scaled = kNaN, limit = kNaN;
      try {
        UncorrelatedInputs in{e.stats.h1 * e.stats.h1.adjoint(), sc.fading, c.dims.bs_antennas, c.dims.users,
                              c.dims.eve_antennas, c.dims.pilot_length, c.pilot_power()};
        unc = secrecy_uncorrelated(in, alloc, c.hw, c.user).r_sec;
        LargeNInputs ln{sc.fading.beta_1, sc.fading.beta_I[c.user], sc.fading.beta_2[c.user], sc.fading.beta_3,
                        sc.fading.beta_IE, n, c.dims.bs_antennas, c.dims.users, c.dims.eve_antennas,
                        c.dims.pilot_length, c.pilot_power()};
        large = secrecy_large_n(ln, alloc, c.hw).r_sec;
        scaled = secrecy_power_scaled(e_u, sc.fading.beta_I[c.user], sc.fading.beta_1, c.dims.bs_antennas,
                                      c.dims.users, c.dims.eve_antennas, c.xi, c.hw)
                     .r_sec;
        limit = secrecy_limit(c.dims.bs_antennas, c.dims.users, c.dims.eve_antennas, c.xi, c.hw).r_sec;
      } catch (const InfiniteCapacity& ex) {
        unc = large = scaled = limit = 0.0;
        t.warnings.push_back(where + ": " + ex.what());
      }
      t.rows.push_back({kappa, static_cast<double>(n), s.r_sec, unc, large, scaled, limit});
    }
  return t;
}

inline ResultTable xi_sweep(const ExperimentConfig& base) {
  ResultTable t;
  t.columns = {"xi", "r_sec_closed", "r_sec_split", "r_sec_mc", "r_sec_mc_se"};
  const Scenario sc = generate_scenario(base, base.seed);
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.05 * i);
  const Evaluation e = evaluate(base, sc.fading);
  for (double xi : or_default(base.sweep, grid)) {
    const PowerAllocation alloc(base.total_power(), xi, base.dims.bs_antennas, base.dims.users);
    const SecrecyPoint s = closed_secrecy(e.trace, alloc, base.hw, t.warnings, "xi=" + format_number(xi));
    const OraclePoint o = run_point_oracle(base, e, alloc, t.rows.size(), true, t);
    t.rows.push_back({xi, s.r_sec, s.split, o.r_sec, o.r_sec_se});
  }
  try {
    const AnTerms terms = an_terms(e.trace, base.hw, base.total_power());
    const GridSearch g = grid_search_xi(terms, 1e-3);
    t.extra["xi_grid_argmax"] = g.best_xi;
    t.extra["xi_grid_local_maxima"] = g.local_maxima;
    const XiSolution sol = optimal_xi(terms);
    t.extra["xi_optimal"] = sol.xi;
    t.extra["xi_optimal_valid"] = sol.valid;
    if (!sol.note.empty()) t.extra["xi_optimal_note"] = sol.note;
  } catch (const Error& ex) {
    t.warnings.push_back(std::string("optimal split: ") + ex.what());
  }
  return t;
}

inline ResultTable kappa_t_sweep(const ExperimentConfig& base) {
  ResultTable t;
  t.columns = {"xi", "kappa_t_bs", "r_sec_closed", "difference_closed", "r_sec_mc", "r_sec_mc_se"};
  const Scenario sc = generate_scenario(base, base.seed);
  for (double xi : or_default(base.series, {0.2, 0.9}))
    for (double kt : or_default(base.sweep, {0.0, 0.05 * 0.05, 0.01, 0.15 * 0.15})) {
      ExperimentConfig c = base;
      c.xi = xi;
      c.hw.kappa_t_bs = kt;
      const Evaluation e = evaluate(c, sc.fading);
      const PowerAllocation alloc(c.total_power(), xi, c.dims.bs_antennas, c.dims.users);
      const SecrecyPoint s =
          closed_secrecy(e.trace, alloc, c.hw, t.warnings, "xi=" + format_number(xi) + " kappa_t=" + format_number(kt));
      const OraclePoint o = run_point_oracle(c, e, alloc, t.rows.size(), true, t);
      t.rows.push_back({xi, kt, s.r_sec, s.difference, o.r_sec, o.r_sec_se});
    }
  return t;
}

/// Ideal transceivers; R_sec against N for several phase-noise powers.
inline ResultTable phase_noise_sweep(const ExperimentConfig& base, double target = 1.6) {
  ResultTable t;
  t.columns = {"phase_noise_variance", "n", "r_sec_closed", "r_sec_mc", "r_sec_mc_se"};
  const Scenario sc = generate_scenario(base, base.seed);
  Json needed = Json::object();
  for (double var : or_default(base.series, {0.0, 0.5, 1.0})) {
    double first = kNaN;
    for (double side : or_default(base.sweep, {4, 6, 8, 10, 12, 14, 16, 20, 24, 28, 32})) {
      ExperimentConfig c = base;
      set_all_kappa(c.hw, 0.0);
      c.hw.phase_noise.variance = var;
      c.dims.ris_horizontal = c.dims.ris_vertical = side_to_int(side);
      const int n = c.dims.ris_elements();
      const Evaluation e = evaluate(c, sc.fading);
      const PowerAllocation alloc(c.total_power(), c.xi, c.dims.bs_antennas, c.dims.users);
      const SecrecyPoint s = closed_secrecy(e.trace, alloc, c.hw, t.warnings,
                                            "variance=" + format_number(var) + " n=" + std::to_string(n));
      const OraclePoint o = run_point_oracle(c, e, alloc, t.rows.size(), true, t);
      if (std::isnan(first) && s.r_sec >= target) first = n;
      t.rows.push_back({var, static_cast<double>(n), s.r_sec, o.r_sec, o.r_sec_se});
    }
    needed[format_number(var)] = std::isnan(first) ? Json(nullptr) : Json(first);
  }
  t.extra["target_r_sec"] = target;
  t.extra["n_needed"] = needed;
  return t;
}

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"nmse_vs_snr",   "nmse_vs_N", "secrecy_vs_snr",
                                                 "secrecy_vs_M",  "secrecy_vs_N", "asymptotic_vs_N",
                                                 "xi_sweep",      "kappa_t_sweep", "phase_noise_sweep"};
  return names;
}

inline ResultTable run_experiment(const std::string& name, const ExperimentConfig& cfg) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw InvalidParameter("unknown experiment '" + name + "'; available: " + list);
  }
  cfg.validate();
  ResultTable t;
  if (name == "nmse_vs_snr") t = nmse_vs_snr(cfg);
  else if (name == "nmse_vs_N") t = nmse_vs_n(cfg);
  else if (name == "secrecy_vs_snr") t = secrecy_vs_snr(cfg);
  else if (name == "secrecy_vs_M") t = secrecy_vs_m(cfg);
  else if (name == "secrecy_vs_N") t = secrecy_vs_n(cfg);
  else if (name == "asymptotic_vs_N") t = asymptotic_vs_n(cfg);
  else if (name == "xi_sweep") t = xi_sweep(cfg);
  else if (name == "kappa_t_sweep") t = kappa_t_sweep(cfg);
  else t = phase_noise_sweep(cfg);
  t.seed = cfg.seed;
  t.config_hash = config_hash(cfg);
  if (t.rows.empty()) throw InvalidParameter("experiment '" + name + "' produced no rows (empty sweep)");
  return t;
}

inline Json manifest(const std::string& name, const ExperimentConfig& cfg, const ResultTable& t,
                     const std::string& csv_file, double wall_seconds) {
  Json m;
  m["experiment"] = name;
  m["csv"] = csv_file;
  m["config_hash"] = t.config_hash;
  m["seed"] = cfg.seed;
  m["version"] = kVersion;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["threads"] = worker_count();
  m["wall_seconds"] = wall_seconds;
  m["rows"] = t.rows.size();
  m["warnings"] = t.warnings;
  m["config"] = to_json(cfg);
  for (auto it = t.extra.begin(); it != t.extra.end(); ++it) m[it.key()] = it.value();
  return m;
}

}  // namespace rislab

#endif  // RISLAB_EXPERIMENTS_HPP
