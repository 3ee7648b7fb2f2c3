#include "vpa/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace vpa {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_out(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw Error("csv: cannot open for writing: " + path);
  return f;
}

const char* regime_name(RegimeKind k) {
  switch (k) {
    case RegimeKind::Straight: return "straight";
    case RegimeKind::Turning: return "turning";
    case RegimeKind::Excluded: return "excluded";
  }
  return "excluded";
}

std::vector<std::vector<double>> read_table(const std::string& path,
                                            const std::string& header) {
  std::ifstream f(path);
  if (!f) throw Error("csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw Error("csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw Error("csv: unexpected header in " + path + ": '" + line + "'");
  }
  const auto ncols =
      static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) +
      1;
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != ncols) {
      throw Error("csv: bad column count in " + path);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_imu_csv(const std::string& path,
                   const std::vector<ImuSample>& imu) {
  auto f = open_out(path);
  std::fputs("t,wx,wy,wz,fx,fy,fz\n", f.get());
  for (const auto& s : imu) {
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                 s.omega_b.x(), s.omega_b.y(), s.omega_b.z(), s.f_b.x(),
                 s.f_b.y(), s.f_b.z());
  }
}

std::vector<ImuSample> read_imu_csv(const std::string& path) {
  const auto rows = read_table(path, "t,wx,wy,wz,fx,fy,fz");
  std::vector<ImuSample> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back({r[0], {r[1], r[2], r[3]}, {r[4], r[5], r[6]}});
  }
  return out;
}

void write_aid_csv(const std::string& path,
                   const std::vector<VelSample>& vel) {
  auto f = open_out(path);
  std::fputs("t,vn,ve,vd\n", f.get());
  for (const auto& s : vel) {
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g\n", s.t, s.v.x(), s.v.y(),
                 s.v.z());
  }
}

std::vector<VelSample> read_aid_csv(const std::string& path) {
  const auto rows = read_table(path, "t,vn,ve,vd");
  std::vector<VelSample> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r[0], {r[1], r[2], r[3]}});
  return out;
}

void write_truth_csv(const std::string& path,
                     const std::vector<TruthSample>& truth,
                     const SensorErrorSpec& err) {
  auto f = open_out(path);
  std::fputs("t,roll,pitch,heading,wzb,bg_x,bg_y,bg_z,ba_x,ba_y,ba_z\n",
             f.get());
  for (const auto& s : truth) {
    const Vec3 rpy = euler_from_dcm(s.attitude);
    std::fprintf(f.get(),
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g\n",
                 s.t, rpy.x(), rpy.y(), rpy.z(), s.omega_b.z(), err.b_g.x(),
                 err.b_g.y(), err.b_g.z(), err.b_a.x(), err.b_a.y(),
                 err.b_a.z());
  }
}

void write_est_csv(const std::string& path, const std::vector<EstRow>& rows) {
  auto f = open_out(path);
  std::fputs(
      "t,regime,ux,uy,uz,bg_x,bg_y,bg_z,ba_x,ba_y,ba_z,roll,pitch,heading\n",
      f.get());
  for (const auto& r : rows) {
    std::fprintf(f.get(),
                 "%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                 "%.17g,%.17g,%.17g,%.17g\n",
                 r.t, regime_name(r.regime.kind), r.u.x(), r.u.y(), r.u.z(),
                 r.b_g.x(), r.b_g.y(), r.b_g.z(), r.b_a.x(), r.b_a.y(),
                 r.b_a.z(), r.roll, r.pitch, r.heading);
  }
}

}  // namespace vpa
