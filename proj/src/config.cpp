#include "vpa/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace vpa {
namespace {

constexpr double kDeg = M_PI / 180.0;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// value := number [unit]; angle units are converted to radians.
double parse_number(const std::string& key, const std::string& value) {
  static const std::map<std::string, double> units = {
      {"s", 1.0},     {"ms", 1e-3},    {"Hz", 1.0},   {"m", 1.0},
      {"m/s", 1.0},   {"m/s2", 1.0},   {"m/s^2", 1.0},
      {"rad", 1.0},   {"deg", kDeg},   {"rad/s", 1.0}, {"deg/s", kDeg}};
  std::istringstream ss(trim(value));
  double x;
  if (!(ss >> x)) {
    throw Error("config: bad numeric value for " + key + ": '" + value + "'");
  }
  std::string unit;
  ss >> unit;
  if (!unit.empty()) {
    const auto it = units.find(unit);
    if (it == units.end()) {
      throw Error("config: unknown unit '" + unit + "' for " + key);
    }
    x *= it->second;
  }
  std::string rest;
  if (ss >> rest) {
    throw Error("config: trailing junk in value for " + key);
  }
  return x;
}

std::vector<Segment> parse_segments(const std::string& value) {
  std::vector<Segment> out;
  std::istringstream ss(value);
  std::string tok;
  while (ss >> tok) {
    const auto parts = split(tok, ':');
    Segment seg;
    if (parts.size() == 3 && parts[0] == "straight") {
      seg.kind = Segment::Kind::Straight;
    } else if (parts.size() == 4 && parts[0] == "turn") {
      seg.kind = Segment::Kind::Turn;
      seg.yaw_rate = std::stod(parts[3]);
    } else {
      throw Error("config: bad segment '" + tok + "'");
    }
    seg.duration = std::stod(parts[1]);
    seg.speed = std::stod(parts[2]);
    if (!(seg.duration > 0.0) || seg.speed < 0.0) {
      throw Error("config: segment duration/speed out of range in '" + tok +
                  "'");
    }
    out.push_back(seg);
  }
  if (out.empty()) throw Error("config: traj.segments is empty");
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error("config: out of range: " + what);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool have_traj = false;
  bool have_segments = false;

  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config: expected 'section.key = value': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("traj.", 0) == 0) have_traj = true;

    if (key == "ahrs.tau_att") cfg.ahrs.tau_att = parse_number(key, value);
    else if (key == "ahrs.g") cfg.ahrs.g = parse_number(key, value);
    else if (key == "ahrs.heading_gain") cfg.ahrs.heading_gain = parse_number(key, value);
    else if (key == "est.tau_g") cfg.est.tau_g = parse_number(key, value);
    else if (key == "est.tau_a") cfg.est.tau_a = parse_number(key, value);
    else if (key == "est.turn_threshold") cfg.est.turn_threshold = parse_number(key, value);
    else if (key == "est.straight_threshold") cfg.est.straight_threshold = parse_number(key, value);
    else if (key == "est.dwell") cfg.est.dwell = parse_number(key, value);
    else if (key == "est.omega_smooth_tau") cfg.est.omega_smooth_tau = parse_number(key, value);
    else if (key == "traj.initial_heading") cfg.traj.initial_heading = parse_number(key, value);
    else if (key == "traj.imu_rate") cfg.traj.imu_rate = parse_number(key, value);
    else if (key == "traj.aid_rate") cfg.traj.aid_rate = parse_number(key, value);
    else if (key == "traj.segments") { cfg.traj.segments = parse_segments(value); have_segments = true; }
    else if (key == "err.bg_x") cfg.err.b_g.x() = parse_number(key, value);
    else if (key == "err.bg_y") cfg.err.b_g.y() = parse_number(key, value);
    else if (key == "err.bg_z") cfg.err.b_g.z() = parse_number(key, value);
    else if (key == "err.ba_x") cfg.err.b_a.x() = parse_number(key, value);
    else if (key == "err.ba_y") cfg.err.b_a.y() = parse_number(key, value);
    else if (key == "err.ba_z") cfg.err.b_a.z() = parse_number(key, value);
    else if (key == "err.gyro_noise") cfg.err.gyro_noise_density = parse_number(key, value);
    else if (key == "err.accel_noise") cfg.err.accel_noise_density = parse_number(key, value);
    else if (key == "err.aid_vel_noise") cfg.err.aid_vel_noise = parse_number(key, value);
    else if (key == "err.mis_roll") cfg.err.misalignment.x() = parse_number(key, value);
    else if (key == "err.mis_pitch") cfg.err.misalignment.y() = parse_number(key, value);
    else if (key == "err.mis_heading") cfg.err.misalignment.z() = parse_number(key, value);
    else if (key == "err.seed") cfg.err.seed = static_cast<std::uint64_t>(parse_number(key, value));
    else if (key == "aid.smooth_tau") cfg.aid_smooth_tau = parse_number(key, value);
    else if (key == "run.metrics_window") cfg.metrics_window = parse_number(key, value);
    else if (key == "run.mode") {
      if (value == "feedback") cfg.mode = RunMode::Feedback;
      else if (value == "blackbox") cfg.mode = RunMode::BlackBox;
      else throw Error("config: run.mode must be feedback|blackbox");
    }
    else throw Error("config: unknown key '" + key + "'");
  }

  if (!have_traj) throw Error("config: missing required section 'traj'");
  if (!have_segments) throw Error("config: missing required key traj.segments");

  require(cfg.ahrs.tau_att > 0.0, "ahrs.tau_att");
  require(cfg.ahrs.g > 0.0, "ahrs.g");
  require(cfg.ahrs.heading_gain >= 0.0, "ahrs.heading_gain");
  require(cfg.est.tau_g > 0.0, "est.tau_g");
  require(cfg.est.tau_a > 0.0, "est.tau_a");
  require(cfg.est.straight_threshold > 0.0 &&
              cfg.est.straight_threshold < cfg.est.turn_threshold,
          "est thresholds");
  require(cfg.est.dwell >= 0.0, "est.dwell");
  require(cfg.est.omega_smooth_tau >= 0.0, "est.omega_smooth_tau");
  require(cfg.traj.imu_rate > 0.0 && cfg.traj.aid_rate > 0.0 &&
              cfg.traj.imu_rate >= cfg.traj.aid_rate,
          "traj rates");
  require(cfg.err.gyro_noise_density >= 0.0 &&
              cfg.err.accel_noise_density >= 0.0 &&
              cfg.err.aid_vel_noise >= 0.0,
          "err noise");
  require(cfg.err.misalignment.cwiseAbs().maxCoeff() <= 0.35,
          "err.mis_* (max 0.35 rad)");
  require(cfg.err.b_g.norm() <= kGyroBiasBound, "err.bg_* (max 0.1 rad/s)");
  require(cfg.err.b_a.norm() <= kAccelBiasBound, "err.ba_* (max 2 m/s2)");
  require(cfg.aid_smooth_tau >= 0.0, "aid.smooth_tau");
  require(cfg.metrics_window > 0.0, "run.metrics_window");

  // Estimator inherits the attitude loop constants.
  cfg.est.tau_att = cfg.ahrs.tau_att;
  cfg.est.g = cfg.ahrs.g;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_text(const RunConfig& cfg) {
  std::ostringstream os;
  const auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  os << "ahrs.tau_att = " << num(cfg.ahrs.tau_att) << " s\n"
     << "ahrs.g = " << num(cfg.ahrs.g) << " m/s2\n"
     << "ahrs.heading_gain = " << num(cfg.ahrs.heading_gain) << "\n"
     << "est.tau_g = " << num(cfg.est.tau_g) << " s\n"
     << "est.tau_a = " << num(cfg.est.tau_a) << " s\n"
     << "est.turn_threshold = " << num(cfg.est.turn_threshold) << " rad/s\n"
     << "est.straight_threshold = " << num(cfg.est.straight_threshold)
     << " rad/s\n"
     << "est.dwell = " << num(cfg.est.dwell) << " s\n"
     << "est.omega_smooth_tau = " << num(cfg.est.omega_smooth_tau) << " s\n"
     << "traj.initial_heading = " << num(cfg.traj.initial_heading) << " rad\n"
     << "traj.imu_rate = " << num(cfg.traj.imu_rate) << " Hz\n"
     << "traj.aid_rate = " << num(cfg.traj.aid_rate) << " Hz\n"
     << "traj.segments =";
  for (const auto& s : cfg.traj.segments) {
    if (s.kind == Segment::Kind::Straight) {
      os << " straight:" << num(s.duration) << ":" << num(s.speed);
    } else {
      os << " turn:" << num(s.duration) << ":" << num(s.speed) << ":"
         << num(s.yaw_rate);
    }
  }
  os << "\n"
     << "err.bg_x = " << num(cfg.err.b_g.x()) << " rad/s\n"
     << "err.bg_y = " << num(cfg.err.b_g.y()) << " rad/s\n"
     << "err.bg_z = " << num(cfg.err.b_g.z()) << " rad/s\n"
     << "err.ba_x = " << num(cfg.err.b_a.x()) << " m/s2\n"
     << "err.ba_y = " << num(cfg.err.b_a.y()) << " m/s2\n"
     << "err.ba_z = " << num(cfg.err.b_a.z()) << " m/s2\n"
     << "err.gyro_noise = " << num(cfg.err.gyro_noise_density) << "\n"
     << "err.accel_noise = " << num(cfg.err.accel_noise_density) << "\n"
     << "err.aid_vel_noise = " << num(cfg.err.aid_vel_noise) << " m/s\n"
     << "err.mis_roll = " << num(cfg.err.misalignment.x()) << " rad\n"
     << "err.mis_pitch = " << num(cfg.err.misalignment.y()) << " rad\n"
     << "err.mis_heading = " << num(cfg.err.misalignment.z()) << " rad\n"
     << "err.seed = " << cfg.err.seed << "\n"
     << "aid.smooth_tau = " << num(cfg.aid_smooth_tau) << " s\n"
     << "run.mode = "
     << (cfg.mode == RunMode::Feedback ? "feedback" : "blackbox") << "\n"
     << "run.metrics_window = " << num(cfg.metrics_window) << " s\n";
  return os.str();
}

}  // namespace vpa
