#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace cti {

// Resolution order: explicit override > CTI_DATA_DIR env var > compiled-in
// source-tree default.
std::string data_dir();
void set_data_dir(const std::string& dir);

struct Csv {
  std::vector<std::string> header;
  Eigen::MatrixXd rows;
};

Csv load_csv(const std::string& path);

struct RadiataData {
  Eigen::VectorXd y, x, z;  // strength, density, resin-adjusted density
};

struct LinRegKnownData {
  Eigen::MatrixXd X;  // 100 x 3
  Eigen::VectorXd y;
};

struct GoodwinData {
  Eigen::VectorXd s;   // observation times, 41..80
  Eigen::MatrixXd y;   // T x 2, observed first two species
};

struct PimaData {
  // columns: npreg, glu, bp, skin, bmi, ped, age; outcome in {0,1}
  Eigen::MatrixXd covariates;  // 532 x 7
  Eigen::VectorXd outcome;
  static const std::vector<std::string>& covariate_names();
};

RadiataData load_radiata();
LinRegKnownData load_linreg_known();
GoodwinData load_goodwin(int species);
PimaData load_pima();

}  // namespace cti
