#include "floatlink/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "floatlink/errors.hpp"

namespace floatlink {

using namespace layout;

namespace {

constexpr double kTimeEps = 1e-9;

MpcOutput hold_output(const PlantState & s, int n)
{
  MpcOutput out;
  out.usv_traj.assign(static_cast<std::size_t>(n), UsvReference{s.usv.eta, Vec3::Zero()});
  out.uav_traj.assign(static_cast<std::size_t>(n), UavReference{s.uav.position(), Vec3::Zero()});
  out.inputs.assign(static_cast<std::size_t>(n - 1), InputVec::Zero());
  return out;
}

UsvReference lerp(const UsvReference & a, const UsvReference & b, double f)
{
  UsvReference r;
  r.eta    = a.eta + f * (b.eta - a.eta);
  r.eta(2) = a.eta(2) + f * wrap_angle(b.eta(2) - a.eta(2));
  r.nu     = a.nu + f * (b.nu - a.nu);
  return r;
}

UavReference lerp(const UavReference & a, const UavReference & b, double f)
{
  return {a.p + f * (b.p - a.p), a.v + f * (b.v - a.v)};
}

Vec6 as_wrench(const Vec3 & f)
{
  Vec6 w = Vec6::Zero();
  w.head<3>() = f;
  return w;
}

}  // namespace

PlantState initial_state(const MissionPlan & plan, const ExperimentConfig & cfg)
{
  const GuidanceParams g = cfg.guidance_params();
  const RefSample r0     = sample_reference(plan, 0.0);
  Vec2 tangent           = Vec2::UnitX();
  if (!plan.segments.empty()) { tangent = plan.segments.front().tangent_at(0.0); }
  const double phi = uav_offset_angle(plan, 0.0, g);
  const Vec2 side  = std::cos(phi) * tangent + std::sin(phi) * Vec2(-tangent(1), tangent(0));

  PlantState s;
  const Vec2 obj         = r0.p.head<2>();
  s.object.eta.head<2>() = obj;

  // USV on the path with the tether just taut, facing along the path
  const double usv_offset = cfg.tether.l_usv - cfg.plant.usv_attach(0);
  Vec2 usv                = obj + usv_offset * tangent;
  double psi              = std::atan2(tangent(1), tangent(0));
  if (!plan.segments.empty()) {
    const double speed = plan.segments.front().speed;
    const RefSample ahead = sample_reference(plan, std::min(usv_offset / speed, plan.path_time()));
    Vec2 chord            = ahead.p.head<2>() - obj;
    const double v_ahead  = ahead.v.head<2>().norm();
    if (v_ahead > 1e-9) {
      const Vec2 left(-ahead.v(1) / v_ahead, ahead.v(0) / v_ahead);
      chord -= g.usv_counter_offset * std::sin(uav_offset_angle(plan, 0.0, g)) * left;
    }
    if (chord.norm() > 1e-6) {
      if (v_ahead > 1e-9) { psi = std::atan2(ahead.v(1), ahead.v(0)); }
      // stern eye exactly one tether length from the object
      const Vec2 h(std::cos(psi), std::sin(psi));
      const Vec2 eye = obj + cfg.tether.l_usv * chord.normalized();
      usv            = eye - cfg.plant.usv_attach(0) * h;
    }
  }
  s.usv.eta << usv(0), usv(1), psi;

  const Vec2 uav = obj + g.uav_radius * side;
  s.uav          = UavState::from(Vec3(uav(0), uav(1), g.uav_height), Vec3::Zero());
  if (cfg.start_underway) {
    s.object.nu.head<3>() = r0.v;
    s.usv.nu(0)           = r0.v.head<2>().norm();
    s.uav                 = UavState::from(Vec3(uav(0), uav(1), g.uav_height), r0.v);
  }
  s.t            = 0.0;
  return s;
}

RunLog run_experiment(const ExperimentConfig & cfg)
{
  cfg.validate();
  const MissionPlan plan     = cfg.plan();
  const Plant plant(cfg.plant_params());
  const MpcConfig mpc_cfg    = cfg.mpc_config();
  const GuidanceParams guide = cfg.guidance_params();
  const bool multi           = cfg.mode == RobotMode::MultiRobot;
  MpcController ctrl(cfg.model, mpc_cfg, cfg.mode);

  RunLog log;
  log.mode = cfg.mode;
  PlantState state = initial_state(plan, cfg);

  const long steps = std::lround(plan.duration / kPlantStep);
  log.rows.reserve(static_cast<std::size_t>(steps / kInnerDivider + 2));

  std::optional<MpcOutput> traj;
  double t_mpc = 0.0;
  UsvCommand usv_cmd;
  UavCommand uav_cmd;
  int last_iters          = 0;
  std::string last_status = "none";

  auto record = [&](double t) {
    LogRow row;
    row.t       = t;
    row.obj_p   = state.object.position();
    row.obj_v   = state.object.world_velocity();
    row.usv_eta = state.usv.eta;
    row.usv_nu  = state.usv.nu;
    row.uav_p   = state.uav.position();
    row.uav_v   = state.uav.velocity();
    row.ref_p   = sample_reference(plan, t).p;
    row.distance = (row.obj_p - row.ref_p).head<2>().norm();

    const TetherLoads loads = plant.tether_loads(state);
    row.usv_tether_length   = loads.usv_length;
    row.uav_tether_length   = multi ? loads.uav_length : 0.0;
    row.usv_tension         = loads.usv_on_object.norm();
    row.uav_tension         = loads.uav_on_object.norm();
    row.usv_taut            = check_taut(as_wrench(loads.usv_on_object));
    row.uav_taut            = !multi || check_taut(as_wrench(loads.uav_on_object));

    const Mat6 j     = euler_to_transform(state.object.attitude());
    row.lift_force   = (j * loads.object_wrench)(2);
    row.lift_ok      = check_no_lifting(loads.object_wrench, state.object.eta, cfg.model.object);

    row.tau_port      = usv_cmd.tau_port;
    row.tau_starboard = usv_cmd.tau_starboard;
    row.uav_accel     = uav_cmd.accel;
    row.qp_iterations = last_iters;
    row.qp_status     = last_status;
    row.disturbance_active =
      std::any_of(plan.disturbances.begin(), plan.disturbances.end(), [t](const Disturbance & d) { return d.active(t); });
    log.rows.push_back(std::move(row));
  };

  const int n     = mpc_cfg.n;
  const double dt = mpc_cfg.dt;

  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * kPlantStep;
    if (i == steps) {
      record(t);
      break;
    }

    if (i % kMpcDivider == 0) {
      ReferenceWindow window = build_reference_window(plan, t - dt, n, dt);
      if (cfg.vertical_step) {
        for (int k = 0; k < n; ++k) {
          if (t + k * dt >= cfg.vertical_step->t_start - kTimeEps) {
            window.x_r[static_cast<std::size_t>(k)](kObjPos + 2) += cfg.vertical_step->height;
          }
        }
      }
      apply_robot_guidance(window, plan, t - dt, dt, state.usv.eta.head<2>(), guide);
      try {
        MpcOutput out = ctrl.control_step(state.object, state.usv, state.uav, window);
        log.solve_times.push_back(out.solve_time);
        last_iters  = out.iterations;
        last_status = std::string(to_string(out.qp_status));
        traj        = std::move(out);
        t_mpc       = t;
      } catch (const SolverFailed & e) {
        ++log.mpc_failures;
        log.solve_times.push_back(e.partial().solve_time);
        last_iters  = e.partial().iterations;
        last_status = std::string(to_string(e.status()));
        if (!traj) {
          traj  = hold_output(state, n);
          t_mpc = t;
        }
      }
      ++log.mpc_updates;
    }

    if (i % kInnerDivider == 0) {
      const double tau = t - t_mpc;
      int k            = static_cast<int>(std::floor(tau / dt + kTimeEps));
      k                = std::clamp(k, 0, n - 2);
      const double f   = std::clamp((tau - k * dt) / dt, 0.0, 1.0);
      const auto ks    = static_cast<std::size_t>(k);
      const InputVec & ff = traj->inputs[ks];

      const UsvReference usv_ref = lerp(traj->usv_traj[ks], traj->usv_traj[ks + 1], f);
      usv_cmd = usv_reference_controller(state.usv, usv_ref, cfg.usv_gains, cfg.model.usv, ff.head<2>());
      if (multi) {
        const UavReference uav_ref = lerp(traj->uav_traj[ks], traj->uav_traj[ks + 1], f);
        uav_cmd = uav_reference_controller(state.uav, uav_ref, cfg.uav_gains, cfg.model.uav.u_max,
                                           ff.segment<3>(kUavInput));
      }
      ++log.inner_updates;
      record(t);
    }

    try {
      state = plant.step(state, usv_cmd.as_vector(), uav_cmd.accel, plan.disturbances, kPlantStep);
    } catch (const NumericBlowup & e) {
      throw SimulationDiverged(e.what(), std::move(log));
    }
    state.t = static_cast<double>(i + 1) * kPlantStep;
    ++log.plant_steps;
  }
  return log;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

double mean_distance(const RunLog & log, double skip)
{
  double sum  = 0.0;
  long count  = 0;
  for (const auto & r : log.rows) {
    if (r.t >= skip - kTimeEps) {
      sum += r.distance;
      ++count;
    }
  }
  if (count == 0) { throw EmptyWindow("no log rows after t = " + std::to_string(skip) + " s"); }
  return sum / static_cast<double>(count);
}

std::optional<double> recovery_time(const RunLog & log, const Disturbance & d, double threshold, double hold)
{
  const double t_end = d.t_start + d.duration;
  const auto & rows  = log.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].t < t_end - kTimeEps || !(rows[i].distance < threshold)) { continue; }
    bool held = false;
    std::size_t j = i;
    for (; j < rows.size(); ++j) {
      if (!(rows[j].distance < threshold)) { break; }
      if (rows[j].t - rows[i].t >= hold - kTimeEps) {
        held = true;
        break;
      }
    }
    if (held) { return rows[i].t - t_end; }
    if (j == rows.size()) { return std::nullopt; }
    i = j;  // restart after the row that broke the streak
  }
  return std::nullopt;
}

std::optional<double> recovery_time(const RunLog & log, const Disturbance & d)
{
  double sum = 0.0;
  long count = 0;
  for (const auto & r : log.rows) {
    if (r.t < d.t_start - kTimeEps) {
      sum += r.distance;
      ++count;
    }
  }
  if (count == 0) { throw EmptyWindow("no log rows before the disturbance"); }
  return recovery_time(log, d, sum / static_cast<double>(count));
}

int count_slack_events(const RunLog & log, double min_duration)
{
  int events = 0;
  for (int which = 0; which < 2; ++which) {
    std::optional<double> since;
    bool counted = false;
    for (const auto & r : log.rows) {
      const bool taut = which == 0 ? r.usv_taut : r.uav_taut;
      if (taut) {
        since.reset();
        counted = false;
        continue;
      }
      if (!since) { since = r.t; }
      if (!counted && r.t - *since + kLogPeriod > min_duration + kTimeEps) {
        ++events;
        counted = true;
      }
    }
  }
  return events;
}

int count_lift_violations(const RunLog & log)
{
  int events = 0;
  bool prev  = true;
  for (const auto & r : log.rows) {
    if (!r.lift_ok && prev) { ++events; }
    prev = r.lift_ok;
  }
  return events;
}

std::optional<Disturbance> logged_disturbance(const RunLog & log)
{
  std::optional<Disturbance> d;
  for (const auto & r : log.rows) {
    if (!r.disturbance_active) {
      if (d) { break; }
      continue;
    }
    if (!d) {
      d          = Disturbance{};
      d->t_start = r.t;
    }
    d->duration = r.t + kLogPeriod - d->t_start;
  }
  return d;
}

Metrics compute_metrics(const RunLog & log, double skip)
{
  Metrics m;
  if (log.rows.empty()) { throw EmptyWindow("empty run log"); }
  try {
    m.mean_distance = mean_distance(log, skip);
  } catch (const EmptyWindow &) {
    m.mean_distance = std::numeric_limits<double>::quiet_NaN();
  }
  m.mean_distance_full = mean_distance(log, 0.0);
  for (const auto & r : log.rows) { m.max_distance = std::max(m.max_distance, r.distance); }

  if (const auto d = logged_disturbance(log)) {
    try {
      double sum = 0.0;
      long count = 0;
      for (const auto & r : log.rows) {
        if (r.t < d->t_start - kTimeEps) {
          sum += r.distance;
          ++count;
        }
      }
      if (count > 0) {
        m.recovery_threshold = sum / static_cast<double>(count);
        m.recovery_time      = recovery_time(log, *d, *m.recovery_threshold);
      }
    } catch (const EmptyWindow &) {
    }
  }
  m.slack_events    = count_slack_events(log);
  m.lift_violations = count_lift_violations(log);
  m.mpc_failures    = log.mpc_failures;

  if (!log.solve_times.empty()) {
    std::vector<double> st = log.solve_times;
    std::sort(st.begin(), st.end());
    const auto idx = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(st.size()))) - 1;
    m.solve_time_p95 = st[std::min(idx, st.size() - 1)];
  }
  return m;
}

NormalFit fit_normal(const std::vector<double> & samples)
{
  if (samples.size() < 2) { throw TooFewSamples("fit_normal needs at least 2 samples"); }
  NormalFit f;
  f.n_samples = static_cast<int>(samples.size());
  double sum  = 0.0;
  for (double s : samples) { sum += s; }
  f.mu       = sum / static_cast<double>(samples.size());
  double ss  = 0.0;
  for (double s : samples) { ss += (s - f.mu) * (s - f.mu); }
  f.sigma = std::sqrt(ss / static_cast<double>(samples.size() - 1));
  return f;
}

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

const std::vector<std::string> & csv_columns()
{
  static const std::vector<std::string> cols = {
    "t",           "obj_x",        "obj_y",        "obj_z",         "obj_vx",          "obj_vy",
    "obj_vz",      "usv_x",        "usv_y",        "usv_psi",       "usv_u",           "usv_v",
    "usv_r",       "uav_x",        "uav_y",        "uav_z",         "uav_vx",          "uav_vy",
    "uav_vz",      "ref_x",        "ref_y",        "ref_z",         "distance",        "usv_tether_len",
    "uav_tether_len", "usv_tension", "uav_tension", "tau_port",     "tau_starboard",   "uav_ax",
    "uav_ay",      "uav_az",       "qp_iterations", "qp_status",    "lift_force",      "lift_ok",
    "disturbance_active", "usv_taut", "uav_taut"};
  return cols;
}

void write_csv(const RunLog & log, std::ostream & os)
{
  os << kCsvVersionLine << '\n';
  const auto & cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) { os << (i ? "," : "") << cols[i]; }
  os << '\n';

  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    os << buf << ',';
  };
  auto vec = [&](const Vec3 & v) {
    num(v(0));
    num(v(1));
    num(v(2));
  };
  for (const auto & r : log.rows) {
    num(r.t);
    vec(r.obj_p);
    vec(r.obj_v);
    vec(r.usv_eta);
    vec(r.usv_nu);
    vec(r.uav_p);
    vec(r.uav_v);
    vec(r.ref_p);
    num(r.distance);
    num(r.usv_tether_length);
    num(r.uav_tether_length);
    num(r.usv_tension);
    num(r.uav_tension);
    num(r.tau_port);
    num(r.tau_starboard);
    vec(r.uav_accel);
    os << r.qp_iterations << ',' << r.qp_status << ',';
    num(r.lift_force);
    os << int(r.lift_ok) << ',' << int(r.disturbance_active) << ',' << int(r.usv_taut) << ',' << int(r.uav_taut)
       << '\n';
  }
}

RunLog read_csv(std::istream & is)
{
  std::string line;
  if (!std::getline(is, line) || line != kCsvVersionLine) { throw IoFailure("run log: missing version line"); }
  if (!std::getline(is, line)) { throw IoFailure("run log: missing header"); }
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) { header.push_back(c); }
  }
  if (header != csv_columns()) { throw IoFailure("run log: header does not match the v1 schema"); }

  RunLog log;
  long lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) { continue; }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) { f.push_back(c); }
    if (f.size() != header.size()) { throw IoFailure("run log line " + std::to_string(lineno) + ": wrong field count"); }
    std::size_t i = 0;
    auto num = [&]() {
      const std::string & s = f[i++];
      char * end            = nullptr;
      const double v        = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0') { throw IoFailure("run log line " + std::to_string(lineno) + ": bad number"); }
      return v;
    };
    auto vec = [&]() {
      const double x = num();
      const double y = num();
      const double z = num();
      return Vec3(x, y, z);
    };
    LogRow r;
    r.t                 = num();
    r.obj_p             = vec();
    r.obj_v             = vec();
    r.usv_eta           = vec();
    r.usv_nu            = vec();
    r.uav_p             = vec();
    r.uav_v             = vec();
    r.ref_p             = vec();
    r.distance          = num();
    r.usv_tether_length = num();
    r.uav_tether_length = num();
    r.usv_tension       = num();
    r.uav_tension       = num();
    r.tau_port          = num();
    r.tau_starboard     = num();
    r.uav_accel         = vec();
    r.qp_iterations     = static_cast<int>(num());
    r.qp_status         = f[i++];
    r.lift_force        = num();
    r.lift_ok            = num() != 0.0;
    r.disturbance_active = num() != 0.0;
    r.usv_taut           = num() != 0.0;
    r.uav_taut           = num() != 0.0;
    log.rows.push_back(std::move(r));
  }
  // single-robot runs never attach the UAV tether
  const bool any_uav = std::any_of(log.rows.begin(), log.rows.end(), [](const LogRow & r) { return r.uav_tether_length > 0.0; });
  log.mode = any_uav || log.rows.empty() ? RobotMode::MultiRobot : RobotMode::SingleRobot;
  return log;
}

void export_csv(const RunLog & log, const std::string & path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) { throw IoFailure("cannot write '" + path + "'"); }
  write_csv(log, f);
  if (!f) { throw IoFailure("write to '" + path + "' failed"); }
}

RunLog import_csv(const std::string & path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f) { throw IoFailure("cannot read '" + path + "'"); }
  return read_csv(f);
}

std::string summary_text(const Metrics & m, RobotMode mode)
{
  std::ostringstream os;
  char buf[64];
  auto kv = [&](const char * k, double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    os << k << " = " << buf << '\n';
  };
  os << "mode = " << to_string(mode) << '\n';
  kv("mean_distance", m.mean_distance);
  kv("mean_distance_full", m.mean_distance_full);
  kv("max_distance", m.max_distance);
  if (m.recovery_time) {
    kv("recovery_time", *m.recovery_time);
  } else {
    os << "recovery_time = none\n";
  }
  if (m.recovery_threshold) { kv("recovery_threshold", *m.recovery_threshold); }
  os << "slack_events = " << m.slack_events << '\n';
  os << "lift_violations = " << m.lift_violations << '\n';
  kv("solve_time_p95", m.solve_time_p95);
  os << "mpc_failures = " << m.mpc_failures << '\n';
  return os.str();
}

void export_summary(const Metrics & m, RobotMode mode, const std::string & path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) { throw IoFailure("cannot write '" + path + "'"); }
  f << summary_text(m, mode);
  if (!f) { throw IoFailure("write to '" + path + "' failed"); }
}

void export_plot_data(const RunLog & log, const std::string & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) { throw IoFailure("cannot create '" + dir + "': " + ec.message()); }

  auto write = [&](const std::string & name, auto value) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) { throw IoFailure("cannot write '" + path + "'"); }
    char buf[64];
    for (const auto & r : log.rows) {
      std::snprintf(buf, sizeof buf, "%.10g %.10g\n", r.t, value(r));
      f << buf;
    }
  };
  write("distance.dat", [](const LogRow & r) { return r.distance; });
  write("object_speed.dat", [](const LogRow & r) { return r.obj_v.head<2>().norm(); });
  write("usv_speed.dat", [](const LogRow & r) { return r.usv_nu.head<2>().norm(); });
  write("uav_speed.dat", [](const LogRow & r) { return r.uav_v.norm(); });
}

// ---------------------------------------------------------------------------
// campaign
// ---------------------------------------------------------------------------

ExperimentConfig campaign_config(const ExperimentConfig & base, int trajectory_id, std::uint64_t base_seed,
                                 RobotMode mode)
{
  ExperimentConfig c = base;
  c.mission          = "random";
  c.seed             = trajectory_seed(base_seed, trajectory_id);
  c.mode             = mode;
  c.duration.reset();
  return c;
}

namespace {

CampaignRun run_one(const ExperimentConfig & base, int id, std::uint64_t base_seed, RobotMode mode)
{
  CampaignRun run;
  run.trajectory_id = id;
  run.mode          = mode;
  const auto t0     = std::chrono::steady_clock::now();
  try {
    const ExperimentConfig cfg = campaign_config(base, id, base_seed, mode);
    run.seed                   = cfg.seed;
    const RunLog log           = run_experiment(cfg);
    run.mean_distance          = mean_distance(log, cfg.metrics_skip);
    run.ok                     = std::isfinite(run.mean_distance);
  } catch (const std::exception & e) {
    run.ok    = false;
    run.error = e.what();
  }
  run.run_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

RobotMode job_mode(int job) { return job % 2 == 0 ? RobotMode::MultiRobot : RobotMode::SingleRobot; }

CampaignReport aggregate(std::vector<CampaignRun> runs, int pairs)
{
  std::sort(runs.begin(), runs.end(), [](const CampaignRun & a, const CampaignRun & b) {
    if (a.trajectory_id != b.trajectory_id) { return a.trajectory_id < b.trajectory_id; }
    return a.mode == RobotMode::MultiRobot && b.mode == RobotMode::SingleRobot;
  });
  CampaignReport r;
  r.pairs = pairs;
  std::vector<double> multi, single;
  std::map<int, std::pair<std::optional<double>, std::optional<double>>> by_id;
  for (const auto & run : runs) {
    if (!run.ok) { continue; }
    if (run.mode == RobotMode::MultiRobot) {
      multi.push_back(run.mean_distance);
      by_id[run.trajectory_id].first = run.mean_distance;
    } else {
      single.push_back(run.mean_distance);
      by_id[run.trajectory_id].second = run.mean_distance;
    }
  }
  auto fit = [](const std::vector<double> & v) {
    if (v.size() < 2) {
      NormalFit f;
      f.n_samples = static_cast<int>(v.size());
      f.mu        = v.empty() ? std::numeric_limits<double>::quiet_NaN() : v.front();
      return f;
    }
    return fit_normal(v);
  };
  r.multi  = fit(multi);
  r.single = fit(single);
  for (const auto & [id, p] : by_id) {
    if (p.first && p.second) {
      ++r.valid_pairs;
      if (*p.first < *p.second) { ++r.multi_wins; }
    }
  }
  r.runs = std::move(runs);
  return r;
}

}  // namespace

CampaignReport run_campaign(const ExperimentConfig & base, int pairs, std::uint64_t base_seed)
{
  if (pairs < 1) { throw ConfigError("campaign needs at least one pair"); }
  const int jobs = 2 * pairs;
  std::vector<CampaignRun> runs(static_cast<std::size_t>(jobs));
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < jobs; ++j) {
    runs[static_cast<std::size_t>(j)] = run_one(base, j / 2, base_seed, job_mode(j));
  }
  return aggregate(std::move(runs), pairs);
}

CampaignReport run_campaign_serial(const ExperimentConfig & base, int pairs, std::uint64_t base_seed)
{
  if (pairs < 1) { throw ConfigError("campaign needs at least one pair"); }
  std::vector<CampaignRun> runs;
  for (int j = 0; j < 2 * pairs; ++j) { runs.push_back(run_one(base, j / 2, base_seed, job_mode(j))); }
  return aggregate(std::move(runs), pairs);
}

std::string campaign_text(const CampaignReport & r)
{
  std::ostringstream os;
  char buf[96];
  os << "pairs = " << r.pairs << '\n';
  os << "valid_pairs = " << r.valid_pairs << '\n';
  os << "multi_wins = " << r.multi_wins << '\n';
  std::snprintf(buf, sizeof buf, "win_fraction = %.6g\n", r.win_fraction());
  os << buf;
  auto fit = [&](const char * name, const NormalFit & f) {
    std::snprintf(buf, sizeof buf, "fit.%s = mu %.6g sigma %.6g n %d\n", name, f.mu, f.sigma, f.n_samples);
    os << buf;
  };
  fit("multi", r.multi);
  fit("single", r.single);
  const double reduction = 1.0 - r.multi.mu / r.single.mu;
  std::snprintf(buf, sizeof buf, "mean_reduction = %.6g\n", reduction);
  os << buf;
  return os.str();
}

void export_campaign(const CampaignReport & r, const std::string & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) { throw IoFailure("cannot create '" + dir + "': " + ec.message()); }
  const auto base = std::filesystem::path(dir);
  {
    std::ofstream f(base / "campaign.csv", std::ios::binary);
    if (!f) { throw IoFailure("cannot write campaign.csv"); }
    f << "trajectory_id,seed,mode,ok,mean_distance,run_time,error\n";
    char buf[64];
    for (const auto & run : r.runs) {
      std::snprintf(buf, sizeof buf, "%.10g,%.4g", run.mean_distance, run.run_time);
      std::string err = run.error;
      std::replace(err.begin(), err.end(), ',', ';');
      f << run.trajectory_id << ',' << run.seed << ',' << to_string(run.mode) << ',' << int(run.ok) << ',' << buf << ','
        << err << '\n';
    }
  }
  std::ofstream s(base / "summary.txt", std::ios::binary);
  if (!s) { throw IoFailure("cannot write summary.txt"); }
  s << campaign_text(r);
}

}  // namespace floatlink
