// CSV readers/writers for the pipeline file formats. All values SI
// (rad, rad/s, m/s, m/s^2), full decimal precision, header row mandatory.
#pragma once

#include "vpa/estimator.hpp"
#include "vpa/sim.hpp"

#include <string>
#include <vector>

namespace vpa {

struct EstRow {
  double t = 0;
  Regime regime;
  Vec3 u = Vec3::Zero();
  Vec3 b_g = Vec3::Zero();
  Vec3 b_a = Vec3::Zero();
  double roll = 0, pitch = 0, heading = 0;
};

// imu.csv: t,wx,wy,wz,fx,fy,fz
void write_imu_csv(const std::string& path, const std::vector<ImuSample>& imu);
std::vector<ImuSample> read_imu_csv(const std::string& path);

// aid.csv: t,vn,ve,vd
void write_aid_csv(const std::string& path, const std::vector<VelSample>& vel);
std::vector<VelSample> read_aid_csv(const std::string& path);

// truth.csv: t,roll,pitch,heading,wzb,bg_x,bg_y,bg_z,ba_x,ba_y,ba_z
void write_truth_csv(const std::string& path,
                     const std::vector<TruthSample>& truth,
                     const SensorErrorSpec& err);

// est.csv: t,regime,ux,uy,uz,bg_x,bg_y,bg_z,ba_x,ba_y,ba_z,roll,pitch,heading
void write_est_csv(const std::string& path, const std::vector<EstRow>& rows);

}  // namespace vpa
