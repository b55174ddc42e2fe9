#include "cti/data.hpp"

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace cti {

namespace {
std::string g_data_dir;  // explicit override
std::mutex g_mu;
}  // namespace

std::string data_dir() {
  std::lock_guard lk(g_mu);
  if (!g_data_dir.empty()) return g_data_dir;
  if (const char* env = std::getenv("CTI_DATA_DIR"); env && *env) return env;
#ifdef CTI_DEFAULT_DATA_DIR
  return CTI_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

void set_data_dir(const std::string& dir) {
  std::lock_guard lk(g_mu);
  g_data_dir = dir;
}

Csv load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Csv out;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.header.push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != out.header.size())
      throw std::runtime_error(path + ": row with " + std::to_string(row.size()) +
                               " cells, expected " + std::to_string(out.header.size()));
    rows.push_back(std::move(row));
  }
  out.rows.resize(rows.size(), out.header.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) out.rows(i, j) = rows[i][j];
  return out;
}

namespace {
void expect_rows(const Csv& csv, int n, const std::string& what) {
  if (csv.rows.rows() != n)
    throw std::runtime_error(what + ": expected " + std::to_string(n) + " rows, got " +
                             std::to_string(csv.rows.rows()));
}
void expect_header(const Csv& csv, const std::vector<std::string>& header,
                   const std::string& what) {
  if (csv.header != header) {
    std::string got;
    for (const auto& h : csv.header) got += h + ",";
    throw std::runtime_error(what + ": unexpected header " + got);
  }
}
}  // namespace

RadiataData load_radiata() {
  Csv csv = load_csv(data_dir() + "/radiata.csv");
  expect_header(csv, {"y", "x", "z"}, "radiata.csv");
  expect_rows(csv, 42, "radiata.csv");
  return {csv.rows.col(0), csv.rows.col(1), csv.rows.col(2)};
}

LinRegKnownData load_linreg_known() {
  Csv csv = load_csv(data_dir() + "/linreg_known.csv");
  expect_header(csv, {"x1", "x2", "x3", "y"}, "linreg_known.csv");
  expect_rows(csv, 100, "linreg_known.csv");
  return {csv.rows.leftCols(3), csv.rows.col(3)};
}

GoodwinData load_goodwin(int species) {
  if (species != 3 && species != 4)
    throw std::invalid_argument("load_goodwin: species must be 3 or 4");
  Csv csv = load_csv(data_dir() + "/goodwin_" + std::to_string(species) + ".csv");
  expect_header(csv, {"s", "y1", "y2"}, "goodwin csv");
  expect_rows(csv, 40, "goodwin csv");
  return {csv.rows.col(0), csv.rows.rightCols(2)};
}

const std::vector<std::string>& PimaData::covariate_names() {
  static const std::vector<std::string> names = {"npreg", "glu", "bp",  "skin",
                                                 "bmi",   "ped", "age"};
  return names;
}

PimaData load_pima() {
  const std::string path = data_dir() + "/pima.csv";
  Csv csv;
  try {
    csv = load_csv(path);
  } catch (const std::exception& e) {
    throw std::runtime_error(
        std::string("pima dataset unavailable: ") + e.what() +
        "\nexpected a CSV with header npreg,glu,bp,skin,bmi,ped,age,type and 532 rows "
        "(the 532 complete records of the diabetes-incidence study); place it at " +
        path + " or point CTI_DATA_DIR at a directory containing it");
  }
  expect_header(csv, {"npreg", "glu", "bp", "skin", "bmi", "ped", "age", "type"},
                "pima.csv");
  expect_rows(csv, 532, "pima.csv");
  for (int i = 0; i < csv.rows.rows(); ++i) {
    const double t = csv.rows(i, 7);
    if (t != 0.0 && t != 1.0) throw std::runtime_error("pima.csv: outcome must be 0/1");
  }
  return {csv.rows.leftCols(7), csv.rows.col(7)};
}

}  // namespace cti
