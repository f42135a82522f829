#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nsmlimit/diagnostics.hpp"
#include "nsmlimit/grid.hpp"
#include "nsmlimit/integrator.hpp"
#include "nsmlimit/model.hpp"
#include "nsmlimit/params.hpp"

namespace nsmlimit {

struct InitialSpec {
  std::uint64_t seed = 1;
  double amplitude = 0.1;       ///< density amplitude of the limit data
  double velocity_scale = 0.1;  ///< max |u0|
  double C0 = 1.0;
  bool perturb_n = true, perturb_u = true, perturb_j = true, perturb_E = true, perturb_B = true;
  bool ill_prepared = false;
};

struct AuditSpec {
  double t_center = 0.05;
};

struct MoserSpec {
  int pairs = 100;
  int s = 4;
  int dims = 1;
  int points = 64;  ///< compared against twice this resolution
  double decay = 0.7;
};

struct ReformSpec {
  int samples = 10;
  int dims = 2;
  int points = 64;
};

struct RunConfig {
  Grid grid{};
  Params params{};
  StepControl step{};
  InitialSpec initial{};
  std::vector<double> kappa_list{0.4, 0.2, 0.1, 0.05};
  int l = 4;
  std::string output_dir = "out";
  AuditSpec audit{};
  MoserSpec moser{};
  ReformSpec reform{};
  std::string source;  ///< configuration text exactly as read

  /// Throws ConfigError.
  void validate() const;
};

/// INI-style text with sections [grid] [params] [step] [initial] [sweep]
/// [diagnostics] [output] [audit] [moser] [reform]. Unknown sections or keys
/// and malformed values throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string config_hash(const std::string& text);

struct RunRecord {
  std::string config_echo;
  double kappa = 0.0;
  std::vector<EnergyLedger> rows;
  double hypothesis_norm = 0.0;
  double hypothesis_bound = 0.0;
  double initial_divE = 0.0, initial_divB = 0.0;
  double max_divE = 0.0, max_divB = 0.0, max_mass_err = 0.0;
  std::string status = "ok";  ///< ok | blow-up | vacuum | constraint-drift
  std::string message;
  double wall_seconds = 0.0;  ///< kept out of the CSV/JSON outputs

  bool ok() const { return status == "ok"; }
  /// sup_t √Γ over the recorded rows.
  double sup_error() const;
  std::vector<std::pair<double, double>> gamma_samples() const;
};

/// Paired full/limit evolution from well-prepared data at the given κ.
/// Failures are recorded in `status`; rows up to the failure are kept.
RunRecord run_single(const RunConfig& config, double kappa);

struct FitResult {
  bool valid = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t used = 0;
  std::vector<std::string> warnings;
};

/// Least squares of log(error) on log(κ). Pairs with a nonpositive entry are
/// skipped with a warning; fewer than two usable pairs give valid = false.
FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs);

struct SweepSummary {
  std::vector<double> kappa;
  std::vector<double> sup_error;
  FitResult fit;
  std::vector<RunRecord> records;
  std::vector<BoundVerdict> bounds;
  bool bounds_stable = true;
  std::vector<std::string> warnings;
  std::string config_hash;
};

/// Runs run_single for every κ on up to `jobs` threads and fits the rate
/// on the runs that finished (at least three are required).
SweepSummary run_sweep(const RunConfig& config, unsigned jobs);
/// Builds the summary from existing records, without simulating.
SweepSummary summarize(const RunConfig& config, std::vector<RunRecord> records);

struct AuditRun {
  AuditReport coarse;  ///< snapshots at spacing dt
  AuditReport fine;    ///< snapshots at spacing dt/2
  AuditReport faulty;  ///< fine window with the pressure term dropped
  double ratio = 0.0;        ///< coarse / fine residual
  double fault_ratio = 0.0;  ///< faulty / fine residual
  std::vector<AuditSnapshot> window;  ///< the fine window
};

/// Snapshots around audit.t_center at dt and dt/2, at κ = params.kappa.
std::vector<AuditSnapshot> capture_window(const RunConfig& config, double kappa, double dt);
AuditRun run_audit(const RunConfig& config);
AuditRun audit_window(const std::vector<AuditSnapshot>& fine, const std::vector<AuditSnapshot>& coarse,
                      const Params& p);

struct MoserRun {
  MoserConstants base;
  MoserConstants doubled;
  double growth = 0.0;  ///< largest relative increase of a constant
};
MoserRun run_moser(const RunConfig& config);

struct ReformRun {
  std::vector<ReformulationReport> reports;
  double max_residual = 0.0;
};
ReformRun run_reform_check(const RunConfig& config);

// -- output --------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "t,gamma,norm_N,norm_U,norm_J,norm_E,norm_B,enthalpy_fn,weighted_high,diss_U,diss_J,divE,divB,mass_err";

std::string ledger_csv(const RunRecord& r);
std::string record_json(const RunRecord& r);
std::string summary_json(const SweepSummary& s);
std::string snapshots_json(const std::vector<AuditSnapshot>& window);
std::vector<AuditSnapshot> parse_snapshots(const std::string& text);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::filesystem::path& path, const std::string& content);
/// record_<i>.json and run_<i>.csv per κ, summary.json and timing.txt.
void write_sweep(const SweepSummary& s, const std::filesystem::path& dir);

}  // namespace nsmlimit
