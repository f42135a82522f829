#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/harness.hpp"
#include "nsmlimit/initdata.hpp"
#include "nsmlimit/model.hpp"

namespace nsmlimit {
namespace {

Params with_kappa(Params p, double kappa) {
  p.kappa = kappa;
  return p;
}

WellPreparedSpec prepared_spec(const RunConfig& c, double kappa) {
  WellPreparedSpec w;
  w.base = make_limit_data(c.initial.seed, c.initial.amplitude, c.grid, c.initial.velocity_scale);
  w.seed = c.initial.seed;
  w.C0 = c.initial.C0;
  w.kappa = kappa;
  w.l = c.l;
  w.perturb_n = c.initial.perturb_n;
  w.perturb_u = c.initial.perturb_u;
  w.perturb_j = c.initial.perturb_j;
  w.perturb_E = c.initial.perturb_E;
  w.perturb_B = c.initial.perturb_B;
  w.ill_prepared = c.initial.ill_prepared;
  return w;
}

}  // namespace

double RunRecord::sup_error() const {
  double sup = 0.0;
  for (const auto& r : rows) sup = std::max(sup, std::sqrt(r.gamma));
  return sup;
}

std::vector<std::pair<double, double>> RunRecord::gamma_samples() const {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : rows) out.emplace_back(r.t, r.gamma);
  return out;
}

RunRecord run_single(const RunConfig& config, double kappa) {
  const auto start = std::chrono::steady_clock::now();
  const Params p = with_kappa(config.params, kappa);
  RunRecord rec;
  rec.config_echo = config.source;
  rec.kappa = kappa;

  const WellPreparedSpec spec = prepared_spec(config, kappa);
  PairedState s{make_well_prepared(spec), spec.base};
  rec.hypothesis_norm = hypothesis_norm(s.full, spec.base, config.l);
  rec.hypothesis_bound = spec.ill_prepared ? spec.C0 : spec.C0 * kappa;
  const MassReference mass0{s.full.n.integral(), s.limit.n0.integral()};

  auto record = [&](const PairedState& st, double t) {
    const EnergyLedger row = energy_ledger(t, st.full, st.limit, p, config.l, mass0);
    rec.max_divE = std::max(rec.max_divE, row.divE);
    rec.max_divB = std::max(rec.max_divB, row.divB);
    rec.max_mass_err = std::max(rec.max_mass_err, row.mass_err);
    rec.rows.push_back(row);
  };
  record(s, 0.0);
  rec.initial_divE = rec.rows.front().divE;
  rec.initial_divB = rec.rows.front().divB;
  if (rec.hypothesis_norm > rec.hypothesis_bound * (1.0 + 1e-10)) {
    rec.status = "hypothesis-violated";
    rec.message = "initial data exceed the well-prepared bound";
  }

  try {
    PairedStepper stepper(p, s.full.n.mean());
    evolve(std::move(s), config.step, stepper,
           [&](const PairedState& st, double t, std::size_t) { record(st, t); });
  } catch (const BlowUp& e) {
    rec.status = "blow-up";
    rec.message = e.what();
  } catch (const VacuumError& e) {
    rec.status = "vacuum";
    rec.message = e.what();
  } catch (const ConstraintDrift& e) {
    rec.status = "constraint-drift";
    rec.message = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

FitResult fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  FitResult f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> used;
  for (const auto& [k, e] : pairs) {
    if (!(k > 0.0) || !(e > 0.0) || !std::isfinite(e)) {
      f.warnings.push_back("excluded nonpositive pair (" + std::to_string(k) + ", " + std::to_string(e) + ")");
      continue;
    }
    const double x = std::log(k), y = std::log(e);
    used.emplace_back(x, y);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  f.used = used.size();
  const double n = static_cast<double>(used.size());
  const double den = n * sxx - sx * sx;
  if (used.size() < 2 || !(den > 0.0)) {
    f.warnings.push_back("fewer than two distinct usable pairs");
    return f;
  }
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  const double mean = sy / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [x, y] : used) {
    ss_res += std::pow(y - (f.intercept + f.slope * x), 2);
    ss_tot += std::pow(y - mean, 2);
  }
  f.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  f.valid = true;
  return f;
}

SweepSummary summarize(const RunConfig& config, std::vector<RunRecord> records) {
  SweepSummary s;
  s.config_hash = config_hash(config.source);
  std::vector<std::pair<double, double>> pairs;
  double prev = -1.0;
  for (const auto& r : records) {
    if (r.rows.empty()) throw std::invalid_argument("empty record");
    s.kappa.push_back(r.kappa);
    s.sup_error.push_back(r.sup_error());
    s.bounds.push_back(bound_monitor(r.gamma_samples(), config.initial.C0, r.kappa));
    if (!r.ok()) {
      s.warnings.push_back("run at kappa=" + std::to_string(r.kappa) + " failed: " + r.status);
      continue;
    }
    if (prev >= 0.0 && r.sup_error() > prev)
      s.warnings.push_back("sup error increased as kappa decreased at kappa=" + std::to_string(r.kappa));
    prev = r.sup_error();
    pairs.emplace_back(r.kappa, r.sup_error());
  }
  if (pairs.size() >= 3) {
    s.fit = fit_rate(pairs);
  } else {
    s.fit.warnings.push_back("fewer than three successful runs");
  }
  s.bounds_stable = bounds_stable(s.bounds, config.step.t_end);
  s.records = std::move(records);
  return s;
}

SweepSummary run_sweep(const RunConfig& config, unsigned jobs) {
  const std::size_t n = config.kappa_list.size();
  std::vector<RunRecord> records(n);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        records[i] = run_single(config, config.kappa_list[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return summarize(config, std::move(records));
}

std::vector<AuditSnapshot> capture_window(const RunConfig& config, double kappa, double dt) {
  const Params p = with_kappa(config.params, kappa);
  const WellPreparedSpec spec = prepared_spec(config, kappa);
  PairedState s{make_well_prepared(spec), spec.base};
  PairedStepper stepper(p, s.full.n.mean());
  const long centre = std::lround(config.audit.t_center / dt);
  if (centre < 1) throw ConfigError("audit: t_center must exceed the step");
  std::vector<AuditSnapshot> out;
  for (long i = 0; i <= centre + 1; ++i) {
    if (i >= centre - 1) out.push_back(AuditSnapshot{i * dt, s.full, s.limit});
    if (i <= centre) s = stepper.step(s, i * dt, dt);
  }
  return out;
}

AuditRun audit_window(const std::vector<AuditSnapshot>& fine, const std::vector<AuditSnapshot>& coarse,
                      const Params& p) {
  AuditRun r;
  r.coarse = energy_identity_audit(coarse, p);
  r.fine = energy_identity_audit(fine, p);
  r.faulty = energy_identity_audit(fine, p, AuditTerm::pressure);
  r.ratio = r.fine.max_residual == 0.0 ? 0.0 : r.coarse.max_residual / r.fine.max_residual;
  r.fault_ratio = r.fine.max_residual == 0.0 ? 0.0 : r.faulty.max_residual / r.fine.max_residual;
  r.window = fine;
  return r;
}

AuditRun run_audit(const RunConfig& config) {
  const double kappa = config.params.kappa;
  const auto coarse = capture_window(config, kappa, config.step.dt);
  const auto fine = capture_window(config, kappa, 0.5 * config.step.dt);
  return audit_window(fine, coarse, config.params);
}

MoserRun run_moser(const RunConfig& config) {
  const MoserSpec& m = config.moser;
  MoserRun r;
  r.base = moser_suite(config.initial.seed, m.pairs, m.s, Grid{m.dims, m.points, config.grid.period}, m.decay);
  r.doubled = moser_suite(config.initial.seed, m.pairs, m.s, Grid{m.dims, 2 * m.points, config.grid.period}, m.decay);
  r.growth = std::max(r.doubled.product / r.base.product, r.doubled.commutator / r.base.commutator) - 1.0;
  return r;
}

ReformRun run_reform_check(const RunConfig& config) {
  const Grid g{config.reform.dims, config.reform.points, config.grid.period};
  ReformRun r;
  for (int i = 0; i < config.reform.samples; ++i) {
    r.reports.push_back(reformulation_check(make_twofluid_sample(config.initial.seed + i, g, config.params.kappa),
                                            config.params));
    r.max_residual = std::max(r.max_residual, r.reports.back().max_residual());
  }
  return r;
}

}  // namespace nsmlimit
