#include "floatlink/config.hpp"

#include <algorithm>
#include <cmath>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "floatlink/errors.hpp"

namespace floatlink {

using namespace layout;

namespace {

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) { return {}; }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string & key, const std::string & text)
{
  errno           = 0;
  char * end      = nullptr;
  const double v  = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_ws(const std::string & s)
{
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) { out.push_back(tok); }
  return out;
}

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Eigen::VectorXd & v)
{
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) { out += ' '; }
    out += fmt(v(i));
  }
  return out;
}

template<int N>
Eigen::Matrix<double, N, 1> fixed_vec(const ConfigMap & m, const std::string & key)
{
  const auto v = m.get_doubles(key);
  if (static_cast<int>(v.size()) != N) {
    throw ConfigError("config: '" + key + "' expects " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) { out(i) = v[static_cast<std::size_t>(i)]; }
  return out;
}

template<typename T>
void read(const ConfigMap & m, const std::string & key, T & out)
{
  if (!m.has(key)) { return; }
  if constexpr (std::is_same_v<T, double>) {
    out = m.get_double(key);
  } else if constexpr (std::is_same_v<T, bool>) {
    out = m.get_bool(key);
  } else if constexpr (std::is_same_v<T, int>) {
    out = static_cast<int>(m.get_int(key));
  } else if constexpr (std::is_same_v<T, std::string>) {
    out = m.get_string(key);
  } else {
    out = fixed_vec<T::RowsAtCompileTime>(m, key);
  }
}

PathSegment parse_segment(const std::string & key, const std::vector<double> & v, const std::string & kind,
                          double speed)
{
  if (kind == "line") {
    if (v.size() != 4) { throw ConfigError("config: '" + key + "' line needs x0 y0 x1 y1"); }
    return {LineSegment{Vec2(v[0], v[1]), Vec2(v[2], v[3])}, speed};
  }
  if (kind == "arc") {
    if (v.size() != 5) { throw ConfigError("config: '" + key + "' arc needs cx cy radius angle_start angle_sweep"); }
    return {ArcSegment{Vec2(v[0], v[1]), v[2], v[3], v[4]}, speed};
  }
  throw ConfigError("config: '" + key + "' has unknown segment kind '" + kind + "'");
}

/// Index-ordered list keys such as mission.segment.0, mission.segment.1, ...
std::vector<std::string> indexed_keys(const ConfigMap & m, const std::string & prefix)
{
  std::vector<std::pair<long, std::string>> idx;
  for (const auto & k : m.keys_with_prefix(prefix)) {
    const std::string tail = k.substr(prefix.size());
    char * end             = nullptr;
    const long i           = std::strtol(tail.c_str(), &end, 10);
    if (tail.empty() || *end != '\0' || i < 0) { throw ConfigError("config: bad list index in '" + k + "'"); }
    idx.emplace_back(i, k);
  }
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  for (auto & [i, k] : idx) { out.push_back(k); }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConfigMap
// ---------------------------------------------------------------------------

ConfigMap ConfigMap::parse(std::istream & is)
{
  ConfigMap m;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) { line.erase(hash); }
    line = trim(line);
    if (line.empty()) { continue; }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) { throw ConfigError("config line " + std::to_string(lineno) + ": empty key"); }
    if (m.values_.count(key) != 0) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    m.values_[key] = val;
  }
  return m;
}

ConfigMap ConfigMap::parse_string(const std::string & text)
{
  std::istringstream is(text);
  return parse(is);
}

ConfigMap ConfigMap::load(const std::string & path)
{
  std::ifstream f(path);
  if (!f) { throw ConfigError("cannot open config file '" + path + "'"); }
  return parse(f);
}

const std::string & ConfigMap::raw(const std::string & key) const
{
  const auto it = values_.find(key);
  if (it == values_.end()) { throw ConfigError("config: missing key '" + key + "'"); }
  used_.insert(key);
  return it->second;
}

std::string ConfigMap::get_string(const std::string & key) const { return raw(key); }

double ConfigMap::get_double(const std::string & key) const { return to_double(key, raw(key)); }

long long ConfigMap::get_int(const std::string & key) const
{
  const std::string & s = raw(key);
  errno                 = 0;
  char * end            = nullptr;
  const long long v     = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t ConfigMap::get_uint64(const std::string & key) const
{
  const std::string & s = raw(key);
  errno                 = 0;
  char * end            = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s.front() == '-' || *end != '\0' || errno == ERANGE) {
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

bool ConfigMap::get_bool(const std::string & key) const
{
  const std::string & s = raw(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") { return true; }
  if (s == "false" || s == "0" || s == "no" || s == "off") { return false; }
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + s + "'");
}

std::vector<double> ConfigMap::get_doubles(const std::string & key) const
{
  std::vector<double> out;
  for (const auto & tok : split_ws(raw(key))) { out.push_back(to_double(key, tok)); }
  return out;
}

std::vector<std::string> ConfigMap::keys_with_prefix(const std::string & prefix) const
{
  std::vector<std::string> out;
  for (auto it = values_.lower_bound(prefix); it != values_.end() && it->first.rfind(prefix, 0) == 0; ++it) {
    out.push_back(it->first);
  }
  return out;
}

std::vector<std::string> ConfigMap::unused_keys() const
{
  std::vector<std::string> out;
  for (const auto & [k, v] : values_) {
    if (used_.count(k) == 0) { out.push_back(k); }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ExperimentConfig
// ---------------------------------------------------------------------------

RobotMode parse_mode(const std::string & s)
{
  if (s == "multi") { return RobotMode::MultiRobot; }
  if (s == "single") { return RobotMode::SingleRobot; }
  throw ConfigError("mode must be 'multi' or 'single', got '" + s + "'");
}

MpcConfig ExperimentConfig::mpc_config() const
{
  MpcConfig c = MpcConfig::defaults(model);
  c.n         = horizon;
  c.dt        = mpc_dt;
  c.q.setZero();
  c.q.segment<3>(kObjPos).setConstant(weights.object_position);
  c.q(kObjPos) = weights.object_along;
  c.q.segment<3>(kObjVel).setConstant(weights.object_velocity);
  c.q(kUsvEta) = c.q(kUsvEta + 1) = weights.usv_position;
  c.q(kUsvEta + 2) = weights.usv_heading;
  c.q.segment<3>(kUsvNu).setConstant(weights.usv_velocity);
  c.q(uav_pos(0)) = c.q(uav_pos(1)) = weights.uav_position;
  c.q(uav_pos(2)) = weights.uav_altitude;
  for (int axis = 0; axis < 3; ++axis) { c.q(uav_vel(axis)) = weights.uav_velocity; }
  c.s = weights.terminal_scale * c.q;
  c.r.head<2>().setConstant(weights.thrust);
  c.r.segment<3>(kUavInput).setConstant(weights.uav_input);
  c.tether             = tether;
  c.tether_relax_steps = tether_relax_steps;
  c.solver             = solver;
  return c;
}

MissionPlan ExperimentConfig::plan() const
{
  MissionPlan p;
  if (mission == "custom") {
    p = custom_plan;
    if (p.duration == 0.0) { p.duration = p.path_time(); }
  } else if (mission == "random") {
    RandomPlanSpec spec = random;
    spec.speed          = speed;
    p                   = random_plan(seed, spec);
  } else {
    const auto all = builtin_missions(speed);
    const auto it  = all.find(mission);
    if (it == all.end()) { throw ConfigError("unknown mission '" + mission + "'"); }
    p = it->second;
    p.disturbances.insert(p.disturbances.end(), custom_plan.disturbances.begin(), custom_plan.disturbances.end());
  }
  if (duration) { p.duration = *duration; }
  return p;
}

PlantParams ExperimentConfig::plant_params() const
{
  PlantParams p = plant;
  p.object      = model.object;
  p.usv         = model.usv;
  p.uav         = model.uav;
  p.with_uav    = mode == RobotMode::MultiRobot;
  p.usv_tether.rest_length = tether.l_usv;
  p.uav_tether.rest_length = tether.l_uav;
  return p;
}

void ExperimentConfig::validate() const
{
  try {
    floatlink::validate(model.object);
    floatlink::validate(model.usv);
    floatlink::validate(model.uav);
    floatlink::validate(tether);
    mpc_config().validate(kNx, kNu);
    const MissionPlan p = plan();
    for (const auto & seg : p.segments) {
      if (!(seg.speed > 0.0)) { throw ConfigError("segment speed must be positive"); }
    }
    if (!(p.duration >= 0.0)) { throw ConfigError("duration must be non-negative"); }
    MissionPlan check = p;
    check.duration    = std::max(p.duration, p.path_time());
    check.validate();
  } catch (const ConfigError &) {
    throw;
  } catch (const Error & e) {
    throw ConfigError(e.what());
  }
  if (!(plant.uav_mass > 0.0) || !(plant.uav_max_hold_force >= 0.0)) {
    throw ConfigError("plant: UAV mass must be positive and hold force non-negative");
  }
  if (!(plant.usv_tether.stiffness > 0.0) || !(plant.uav_tether.stiffness > 0.0)) {
    throw ConfigError("plant: tether stiffness must be positive");
  }
  if (!(metrics_skip >= 0.0)) { throw ConfigError("metrics.skip must be non-negative"); }
  if (!(speed > 0.0)) { throw ConfigError("mission.speed must be positive"); }
  if (!(guidance.uav_height > 0.0) || guidance.uav_height >= tether.l_uav) {
    throw ConfigError("guidance.uav_height must lie in (0, tether.l_uav)");
  }
  if (guidance.uav_side != 1.0 && guidance.uav_side != -1.0) { throw ConfigError("guidance.uav_side must be 1 or -1"); }
  if (!(guidance.side_switch_time >= 0.0)) { throw ConfigError("guidance.side_switch_time must be non-negative"); }
  if (!(guidance.uav_standoff >= 0.0) || guidance.uav_standoff >= tether.epsilon) {
    throw ConfigError("guidance.uav_standoff must lie in [0, tether.epsilon)");
  }
  if (!(guidance.usv_counter_offset >= 0.0) || guidance.usv_counter_offset >= guidance.tow_length) {
    throw ConfigError("guidance.usv_counter_offset must lie in [0, guidance.tow_length)");
  }
}

GuidanceParams ExperimentConfig::guidance_params() const
{
  GuidanceParams g = guidance;
  g.uav_radius     = std::sqrt(tether.l_uav * tether.l_uav - g.uav_height * g.uav_height);
  if (mode == RobotMode::SingleRobot) { g.usv_counter_offset = 0.0; }
  return g;
}

ExperimentConfig parse_experiment_config(const ConfigMap & m, ExperimentConfig c)
{
  read(m, "mission", c.mission);
  read(m, "mission.speed", c.speed);
  read(m, "mission.start_underway", c.start_underway);
  if (m.has("mission.duration")) { c.duration = m.get_double("mission.duration"); }
  if (m.has("mission.vertical_step")) {
    const auto v = m.get_doubles("mission.vertical_step");
    if (v.size() != 2) { throw ConfigError("config: 'mission.vertical_step' needs t_start height"); }
    c.vertical_step = VerticalStep{v[0], v[1]};
  }
  const auto seg_keys = indexed_keys(m, "mission.segment.");
  if (!seg_keys.empty()) {
    c.custom_plan.segments.clear();
    for (const auto & k : seg_keys) {
      auto toks = split_ws(m.get_string(k));
      if (toks.empty()) { throw ConfigError("config: '" + k + "' is empty"); }
      std::vector<double> nums;
      for (std::size_t i = 1; i < toks.size(); ++i) { nums.push_back(to_double(k, toks[i])); }
      c.custom_plan.segments.push_back(parse_segment(k, nums, toks[0], c.speed));
    }
  }
  const auto dist_keys = indexed_keys(m, "mission.disturbance.");
  if (!dist_keys.empty()) {
    c.custom_plan.disturbances.clear();
    for (const auto & k : dist_keys) {
      const auto v = m.get_doubles(k);
      if (v.size() != 5) { throw ConfigError("config: '" + k + "' needs fx fy fz t_start duration"); }
      c.custom_plan.disturbances.push_back({Vec3(v[0], v[1], v[2]), v[3], v[4]});
    }
  }

  if (m.has("mode")) { c.mode = parse_mode(m.get_string("mode")); }
  if (m.has("seed")) { c.seed = m.get_uint64("seed"); }

  // object
  const bool reshape = m.has("object.radius") || m.has("object.mass");
  read(m, "object.radius", c.object_radius);
  double mass = c.model.object.mass;
  read(m, "object.mass", mass);
  if (reshape) {
    if (!(c.object_radius > 0.0) || !(mass > 0.0)) { throw ConfigError("object radius and mass must be positive"); }
    const Mat6 damping  = c.model.object.damping;
    c.model.object      = sphere_object(c.object_radius, mass);
    c.model.object.damping = damping;
  }
  if (m.has("object.damping")) { c.model.object.damping = fixed_vec<6>(m, "object.damping").asDiagonal(); }

  // USV
  if (m.has("usv.inertia")) { c.model.usv.inertia = fixed_vec<3>(m, "usv.inertia").asDiagonal(); }
  if (m.has("usv.added_mass")) { c.model.usv.added_mass = fixed_vec<3>(m, "usv.added_mass").asDiagonal(); }
  if (m.has("usv.damping")) { c.model.usv.damping = fixed_vec<3>(m, "usv.damping").asDiagonal(); }
  read(m, "usv.d_tau", c.model.usv.d_tau);
  read(m, "usv.tau_max", c.model.usv.tau_max);

  // UAV
  read(m, "uav.a1", c.model.uav.a1);
  read(m, "uav.b1", c.model.uav.b1);
  read(m, "uav.u_max", c.model.uav.u_max);
  read(m, "uav.v_max", c.model.uav.v_max);

  read(m, "tether.l_usv", c.tether.l_usv);
  read(m, "tether.l_uav", c.tether.l_uav);
  read(m, "tether.epsilon", c.tether.epsilon);

  // plant-only
  read(m, "plant.tether.stiffness", c.plant.usv_tether.stiffness);
  read(m, "plant.tether.damping", c.plant.usv_tether.damping);
  c.plant.uav_tether.stiffness = c.plant.usv_tether.stiffness;
  c.plant.uav_tether.damping   = c.plant.usv_tether.damping;
  read(m, "plant.usv_attach", c.plant.usv_attach);
  read(m, "plant.object_drag", c.plant.object_quadratic_drag);
  read(m, "plant.uav_mass", c.plant.uav_mass);
  read(m, "plant.uav_hold_force", c.plant.uav_max_hold_force);

  // controller
  read(m, "mpc.horizon", c.horizon);
  read(m, "mpc.dt", c.mpc_dt);
  read(m, "mpc.weight.object_position", c.weights.object_position);
  read(m, "mpc.weight.object_along", c.weights.object_along);
  read(m, "mpc.weight.object_velocity", c.weights.object_velocity);
  read(m, "mpc.weight.usv_position", c.weights.usv_position);
  read(m, "mpc.weight.usv_heading", c.weights.usv_heading);
  read(m, "mpc.weight.usv_velocity", c.weights.usv_velocity);
  read(m, "mpc.weight.uav_position", c.weights.uav_position);
  read(m, "mpc.weight.uav_altitude", c.weights.uav_altitude);
  read(m, "mpc.weight.uav_velocity", c.weights.uav_velocity);
  read(m, "mpc.weight.thrust", c.weights.thrust);
  read(m, "mpc.weight.uav_input", c.weights.uav_input);
  read(m, "mpc.weight.terminal_scale", c.weights.terminal_scale);
  read(m, "mpc.tether_relax_steps", c.tether_relax_steps);

  read(m, "solver.rho", c.solver.rho);
  read(m, "solver.sigma", c.solver.sigma);
  read(m, "solver.alpha", c.solver.alpha);
  read(m, "solver.eps_abs", c.solver.eps_abs);
  read(m, "solver.eps_rel", c.solver.eps_rel);
  read(m, "solver.max_iter", c.solver.max_iter);
  read(m, "solver.adaptive_rho_interval", c.solver.adaptive_rho_interval);
  read(m, "solver.polish", c.solver.polish);

  read(m, "gains.usv.kp_surge", c.usv_gains.kp_surge);
  read(m, "gains.usv.kd_surge", c.usv_gains.kd_surge);
  read(m, "gains.usv.kp_yaw", c.usv_gains.kp_yaw);
  read(m, "gains.usv.kd_yaw", c.usv_gains.kd_yaw);
  read(m, "gains.uav.kp", c.uav_gains.kp);
  read(m, "gains.uav.kd", c.uav_gains.kd);

  read(m, "guidance.tow_length", c.guidance.tow_length);
  read(m, "guidance.lookahead", c.guidance.lookahead);
  read(m, "guidance.uav_side", c.guidance.uav_side);
  read(m, "guidance.uav_height", c.guidance.uav_height);
  read(m, "guidance.uav_standoff", c.guidance.uav_standoff);
  read(m, "guidance.usv_counter_offset", c.guidance.usv_counter_offset);
  read(m, "guidance.adaptive_side", c.guidance.adaptive_side);
  read(m, "guidance.side_switch_time", c.guidance.side_switch_time);

  read(m, "random.min_segments", c.random.min_segments);
  read(m, "random.max_segments", c.random.max_segments);
  read(m, "random.min_length", c.random.min_length);
  read(m, "random.max_length", c.random.max_length);
  read(m, "random.min_radius", c.random.min_radius);
  read(m, "random.max_radius", c.random.max_radius);
  read(m, "random.settle_time", c.random.settle_time);

  read(m, "metrics.skip", c.metrics_skip);

  const auto unused = m.unused_keys();
  if (!unused.empty()) { throw ConfigError("config: unknown key '" + unused.front() + "'"); }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string & path)
{
  return parse_experiment_config(ConfigMap::load(path));
}

std::string to_text(const ExperimentConfig & c)
{
  std::ostringstream os;
  auto kv = [&os](const std::string & k, const std::string & v) { os << k << " = " << v << '\n'; };

  kv("mission", c.mission);
  kv("mission.speed", fmt(c.speed));
  kv("mission.start_underway", c.start_underway ? "true" : "false");
  if (c.duration) { kv("mission.duration", fmt(*c.duration)); }
  if (c.vertical_step) { kv("mission.vertical_step", fmt(c.vertical_step->t_start) + " " + fmt(c.vertical_step->height)); }
  for (std::size_t i = 0; i < c.custom_plan.segments.size(); ++i) {
    const auto & seg = c.custom_plan.segments[i];
    std::string v;
    if (const auto * l = std::get_if<LineSegment>(&seg.shape)) {
      v = "line " + fmt(l->start(0)) + " " + fmt(l->start(1)) + " " + fmt(l->end(0)) + " " + fmt(l->end(1));
    } else {
      const auto & a = std::get<ArcSegment>(seg.shape);
      v = "arc " + fmt(a.center(0)) + " " + fmt(a.center(1)) + " " + fmt(a.radius) + " " + fmt(a.angle_start) + " " +
          fmt(a.angle_sweep);
    }
    kv("mission.segment." + std::to_string(i), v);
  }
  for (std::size_t i = 0; i < c.custom_plan.disturbances.size(); ++i) {
    const auto & d = c.custom_plan.disturbances[i];
    kv("mission.disturbance." + std::to_string(i), fmt(Eigen::VectorXd(d.force)) + " " + fmt(d.t_start) + " " +
                                                     fmt(d.duration));
  }
  kv("mode", std::string(to_string(c.mode)));
  kv("seed", std::to_string(c.seed));

  kv("object.radius", fmt(c.object_radius));
  kv("object.mass", fmt(c.model.object.mass));
  kv("object.damping", fmt(Eigen::VectorXd(c.model.object.damping.diagonal())));
  kv("usv.inertia", fmt(Eigen::VectorXd(c.model.usv.inertia.diagonal())));
  kv("usv.added_mass", fmt(Eigen::VectorXd(c.model.usv.added_mass.diagonal())));
  kv("usv.damping", fmt(Eigen::VectorXd(c.model.usv.damping.diagonal())));
  kv("usv.d_tau", fmt(c.model.usv.d_tau));
  kv("usv.tau_max", fmt(c.model.usv.tau_max));
  kv("uav.a1", fmt(c.model.uav.a1));
  kv("uav.b1", fmt(c.model.uav.b1));
  kv("uav.u_max", fmt(c.model.uav.u_max));
  kv("uav.v_max", fmt(c.model.uav.v_max));
  kv("tether.l_usv", fmt(c.tether.l_usv));
  kv("tether.l_uav", fmt(c.tether.l_uav));
  kv("tether.epsilon", fmt(c.tether.epsilon));

  kv("plant.tether.stiffness", fmt(c.plant.usv_tether.stiffness));
  kv("plant.tether.damping", fmt(c.plant.usv_tether.damping));
  kv("plant.usv_attach", fmt(Eigen::VectorXd(c.plant.usv_attach)));
  kv("plant.object_drag", fmt(Eigen::VectorXd(c.plant.object_quadratic_drag)));
  kv("plant.uav_mass", fmt(c.plant.uav_mass));
  kv("plant.uav_hold_force", fmt(c.plant.uav_max_hold_force));

  kv("mpc.horizon", std::to_string(c.horizon));
  kv("mpc.dt", fmt(c.mpc_dt));
  kv("mpc.weight.object_position", fmt(c.weights.object_position));
  kv("mpc.weight.object_along", fmt(c.weights.object_along));
  kv("mpc.weight.object_velocity", fmt(c.weights.object_velocity));
  kv("mpc.weight.usv_position", fmt(c.weights.usv_position));
  kv("mpc.weight.usv_heading", fmt(c.weights.usv_heading));
  kv("mpc.weight.usv_velocity", fmt(c.weights.usv_velocity));
  kv("mpc.weight.uav_position", fmt(c.weights.uav_position));
  kv("mpc.weight.uav_altitude", fmt(c.weights.uav_altitude));
  kv("mpc.weight.uav_velocity", fmt(c.weights.uav_velocity));
  kv("mpc.weight.thrust", fmt(c.weights.thrust));
  kv("mpc.weight.uav_input", fmt(c.weights.uav_input));
  kv("mpc.weight.terminal_scale", fmt(c.weights.terminal_scale));
  kv("mpc.tether_relax_steps", std::to_string(c.tether_relax_steps));

  kv("solver.rho", fmt(c.solver.rho));
  kv("solver.sigma", fmt(c.solver.sigma));
  kv("solver.alpha", fmt(c.solver.alpha));
  kv("solver.eps_abs", fmt(c.solver.eps_abs));
  kv("solver.eps_rel", fmt(c.solver.eps_rel));
  kv("solver.max_iter", std::to_string(c.solver.max_iter));
  kv("solver.adaptive_rho_interval", std::to_string(c.solver.adaptive_rho_interval));
  kv("solver.polish", c.solver.polish ? "true" : "false");

  kv("gains.usv.kp_surge", fmt(c.usv_gains.kp_surge));
  kv("gains.usv.kd_surge", fmt(c.usv_gains.kd_surge));
  kv("gains.usv.kp_yaw", fmt(c.usv_gains.kp_yaw));
  kv("gains.usv.kd_yaw", fmt(c.usv_gains.kd_yaw));
  kv("gains.uav.kp", fmt(c.uav_gains.kp));
  kv("gains.uav.kd", fmt(c.uav_gains.kd));

  kv("guidance.tow_length", fmt(c.guidance.tow_length));
  kv("guidance.lookahead", fmt(c.guidance.lookahead));
  kv("guidance.uav_side", fmt(c.guidance.uav_side));
  kv("guidance.uav_height", fmt(c.guidance.uav_height));
  kv("guidance.uav_standoff", fmt(c.guidance.uav_standoff));
  kv("guidance.usv_counter_offset", fmt(c.guidance.usv_counter_offset));
  kv("guidance.adaptive_side", c.guidance.adaptive_side ? "true" : "false");
  kv("guidance.side_switch_time", fmt(c.guidance.side_switch_time));

  kv("random.min_segments", std::to_string(c.random.min_segments));
  kv("random.max_segments", std::to_string(c.random.max_segments));
  kv("random.min_length", fmt(c.random.min_length));
  kv("random.max_length", fmt(c.random.max_length));
  kv("random.min_radius", fmt(c.random.min_radius));
  kv("random.max_radius", fmt(c.random.max_radius));
  kv("random.settle_time", fmt(c.random.settle_time));

  kv("metrics.skip", fmt(c.metrics_skip));
  return os.str();
}

}  // namespace floatlink
