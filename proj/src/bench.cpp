#include "cti/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "cti/ladder.hpp"
#include "cti/models/goodwin.hpp"
#include "cti/models/linreg_known.hpp"
#include "cti/models/logistic.hpp"
#include "cti/models/radiata.hpp"
#include "cti/util.hpp"

namespace cti {

using nlohmann::json;

namespace {

const std::set<std::string> kEstimatorNames = {"TI", "CTI", "AIS", "CAIS"};

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("config: m must be >= 1");
  if (cfg.N < 2) throw std::invalid_argument("config: N must be >= 2");
  if (cfg.burn_frac < 0.0 || cfg.burn_frac >= 1.0)
    throw std::invalid_argument("config: burn_frac must lie in [0,1)");
  if (cfg.eps <= 0.0) throw std::invalid_argument("config: eps must be positive");
  if (cfg.replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
  if (cfg.estimators.empty()) throw std::invalid_argument("config: no estimators requested");
  for (const auto& e : cfg.estimators)
    if (!kEstimatorNames.count(e))
      throw std::invalid_argument("config: unknown estimator " + e);
  for (int d : cfg.degrees)
    if (d < 0 || d > 2) throw std::invalid_argument("config: degrees must be 0, 1, or 2");
  for (int q : cfg.quadratures)
    if (q != 1 && q != 2) throw std::invalid_argument("config: quadrature must be 1 or 2");
}

json num_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  json j = json::parse(in);
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  const std::set<std::string> known = {"model",      "m",          "N",
                                       "burn_frac",  "eps",        "estimators",
                                       "degrees",    "quadratures", "replicates",
                                       "seed",       "out_dir",    "threads",
                                       "paper_scale"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw std::invalid_argument("config: unknown key " + key);

  ExperimentConfig cfg;
  cfg.model = j.value("model", cfg.model);
  cfg.m = j.value("m", cfg.m);
  cfg.N = j.value("N", cfg.N);
  cfg.burn_frac = j.value("burn_frac", cfg.burn_frac);
  cfg.eps = j.value("eps", cfg.eps);
  if (j.contains("estimators")) cfg.estimators = j["estimators"].get<std::vector<std::string>>();
  if (j.contains("degrees")) cfg.degrees = j["degrees"].get<std::vector<int>>();
  if (j.contains("quadratures")) cfg.quadratures = j["quadratures"].get<std::vector<int>>();
  cfg.replicates = j.value("replicates", cfg.replicates);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.paper_scale = j.value("paper_scale", cfg.paper_scale);
  validate_config(cfg);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["model"] = cfg.model;
  j["m"] = cfg.m;
  j["N"] = cfg.N;
  j["burn_frac"] = cfg.burn_frac;
  j["eps"] = cfg.eps;
  j["estimators"] = cfg.estimators;
  j["degrees"] = cfg.degrees;
  j["quadratures"] = cfg.quadratures;
  j["replicates"] = cfg.replicates;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["threads"] = cfg.threads;
  j["paper_scale"] = cfg.paper_scale;
  return j.dump(2);
}

std::vector<std::string> model_registry() {
  return {"linreg-known", "radiata1", "radiata2",  "pima1",
          "pima2",        "goodwin3", "goodwin4",  "logistic-synthetic"};
}

std::unique_ptr<DifferentiableModel> make_model(const std::string& id, std::uint64_t seed) {
  if (id == "linreg-known")
    return std::make_unique<LinRegKnownModel>(LinRegKnownModel::load_default());
  if (id == "radiata1") return std::make_unique<RadiataModel>(RadiataModel::load(1));
  if (id == "radiata2") return std::make_unique<RadiataModel>(RadiataModel::load(2));
  if (id == "pima1") return std::make_unique<LogisticModel>(LogisticModel::pima(1));
  if (id == "pima2") return std::make_unique<LogisticModel>(LogisticModel::pima(2));
  if (id == "goodwin3") return std::make_unique<GoodwinModel>(GoodwinModel::load(3));
  if (id == "goodwin4") return std::make_unique<GoodwinModel>(GoodwinModel::load(4));
  if (id == "logistic-synthetic")
    return std::make_unique<LogisticModel>(LogisticModel::synthetic(seed ? seed : 7));
  std::string msg = "unknown model id " + id + "; known:";
  for (const auto& m : model_registry()) msg += " " + m;
  throw std::invalid_argument(msg);
}

namespace {

struct RowKey {
  std::string estimator;
  int degree;
  int quadrature;
  bool operator<(const RowKey& o) const {
    return std::tie(estimator, degree, quadrature) <
           std::tie(o.estimator, o.degree, o.quadrature);
  }
};

// per-estimator row layout: TI is always degree 0; CTI/CAIS take the positive
// requested degrees; AIS/CAIS carry no quadrature order
std::vector<RowKey> enumerate_rows(const ExperimentConfig& cfg) {
  std::vector<RowKey> keys;
  auto push = [&keys](RowKey k) {
    if (std::find_if(keys.begin(), keys.end(), [&](const RowKey& o) {
          return !(o < k) && !(k < o);
        }) == keys.end())
      keys.push_back(std::move(k));
  };
  for (const auto& e : cfg.estimators) {
    if (e == "TI") {
      for (int q : cfg.quadratures) push({"TI", 0, q});
    } else if (e == "CTI") {
      for (int d : cfg.degrees)
        if (d > 0)
          for (int q : cfg.quadratures) push({"CTI", d, q});
    } else if (e == "AIS") {
      push({"AIS", 0, 0});
    } else if (e == "CAIS") {
      for (int d : cfg.degrees)
        if (d > 0) push({"CAIS", d, 0});
    }
  }
  return keys;
}

int effective_replicates(const ExperimentConfig& cfg) {
  if (!cfg.paper_scale) return cfg.replicates;
  return cfg.model.rfind("goodwin", 0) == 0 ? 10 : 100;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  auto model = make_model(cfg.model, cfg.seed);
  const TemperatureLadder ladder = quintic_ladder(cfg.m);
  const int reps = effective_replicates(cfg);

  ResultTable table;
  table.config = cfg;
  table.config.replicates = reps;
  table.truth = model->closed_form_log_evidence();

  const std::vector<RowKey> keys = enumerate_rows(cfg);
  std::vector<ResultRow> rows(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    rows[i].estimator = keys[i].estimator;
    rows[i].degree = keys[i].degree;
    rows[i].quadrature = keys[i].quadrature;
    rows[i].N = cfg.N;
  }

  // degrees whose R(t) and integrand curves get tracked: 0 plus anything a
  // controlled estimator uses
  std::set<int> curve_degrees = {0};
  for (const auto& k : keys)
    if (k.estimator == "CTI" || k.estimator == "CAIS") curve_degrees.insert(k.degree);

  struct CurveAcc {
    std::vector<double> r, integrand, cvar;  // flattened per (replicate, rung)
  };
  std::map<int, std::vector<CurveAcc>> curves;  // degree -> per-rung accumulators
  for (int d : curve_degrees) curves[d].resize(size_t(cfg.m) + 1);

  McmcOptions opt;
  opt.N = cfg.N;
  opt.burn_frac = cfg.burn_frac;
  opt.eps = cfg.eps;
  opt.parallel_rungs = cfg.threads > 1;
  opt.threads = cfg.threads;

  for (int rep = 0; rep < reps; ++rep) {
    const std::uint64_t rep_seed = cfg.seed + std::uint64_t(rep);
    ChainTrace trace;
    try {
      trace = run_population(*model, ladder, opt, rep_seed);
    } catch (const std::exception& ex) {
      table.failures.push_back("replicate " + std::to_string(rep) + ": " + ex.what());
      continue;
    }

    int out_of_window = 0;
    for (double a : trace.accept_rate)
      if (a <= 0.15 || a >= 0.999) ++out_of_window;
    if (out_of_window > 0)
      std::cerr << cfg.model << " replicate " << rep << ": acceptance rate outside (0.15,0.999) at "
                << out_of_window << "/" << trace.n_rungs() << " rungs; consider tuning eps\n";

    std::map<int, EvidenceEstimate> ti_q1;  // per curve degree, reused below
    for (int d : curve_degrees) {
      EvidenceEstimate est = ti_estimate(trace, zv_degree_from_int(d), 1);
      for (int r = 0; r <= cfg.m; ++r) {
        curves[d][r].r.push_back(est.variance_ratio[r]);
        curves[d][r].integrand.push_back(est.rung_means[r]);
        curves[d][r].cvar.push_back(est.rung_variances[r]);
      }
      ti_q1.emplace(d, std::move(est));
    }

    for (size_t i = 0; i < keys.size(); ++i) {
      const RowKey& k = keys[i];
      try {
        double value = 0.0;
        if (k.estimator == "TI" || k.estimator == "CTI") {
          value = k.quadrature == 1
                      ? ti_q1.at(k.degree).log_evidence
                      : ti_estimate(trace, zv_degree_from_int(k.degree), 2).log_evidence;
        } else if (k.estimator == "AIS") {
          value = ais_estimate(trace, ladder).log_evidence;
        } else {
          value = cais_estimate(trace, ladder, zv_degree_from_int(k.degree)).log_evidence;
        }
        rows[i].estimates.push_back(value);
        rows[i].traces_hash = hash_combine(rows[i].traces_hash, trace.content_hash());
      } catch (const CaisPositivityError& ex) {
        rows[i].failed_replicates += 1;
        table.failures.push_back(rows[i].estimator + " d" + std::to_string(k.degree) +
                                 " replicate " + std::to_string(rep) + ": " + ex.what());
      }
    }
  }

  for (auto& row : rows) {
    row.replicates = int(row.estimates.size());
    Eigen::Map<const Eigen::VectorXd> v(row.estimates.data(), row.estimates.size());
    row.mean = row.estimates.empty() ? std::nan("") : v.mean();
    row.sd = row.estimates.size() < 2
                 ? std::nan("")
                 : std::sqrt((v.array() - v.mean()).square().sum() / double(v.size() - 1));
    if (table.truth && !row.estimates.empty()) {
      const Eigen::ArrayXd sq = (v.array() - *table.truth).square();
      row.mse = sq.mean();
      row.mse_se = sq.size() < 2 ? std::nan("")
                                 : std::sqrt((sq - sq.mean()).square().sum() /
                                             double(sq.size() - 1) / double(sq.size()));
    } else {
      row.mse = std::nan("");
      row.mse_se = std::nan("");
    }
  }
  table.rows = std::move(rows);

  for (const auto& [deg, acc] : curves) {
    for (int r = 0; r <= cfg.m; ++r) {
      const auto& a = acc[r];
      if (a.r.empty()) continue;
      CurvePoint p;
      p.degree = deg;
      p.rung = r;
      p.t = ladder.rungs[r];
      Eigen::Map<const Eigen::VectorXd> rv(a.r.data(), a.r.size());
      Eigen::Map<const Eigen::VectorXd> iv(a.integrand.data(), a.integrand.size());
      Eigen::Map<const Eigen::VectorXd> cv(a.cvar.data(), a.cvar.size());
      p.r_mean = rv.mean();
      p.r_se = rv.size() < 2 ? 0.0
                             : std::sqrt((rv.array() - rv.mean()).square().sum() /
                                         double(rv.size() - 1) / double(rv.size()));
      p.integrand_mean = iv.mean();
      p.integrand_sd = iv.size() < 2
                           ? 0.0
                           : std::sqrt((iv.array() - iv.mean()).square().sum() /
                                       double(iv.size() - 1));
      p.cvar_mean = cv.mean();
      table.curves.push_back(p);
    }
  }
  return table;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> pts;
};

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series) {
  const double W = 720, H = 440, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) {
    xmin -= 1;
    xmax += 1;
  }
  if (ymax == ymin) {
    ymin -= 1;
    ymax += 1;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto sy = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"15\">" << title << "</text>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymin + (ymax - ymin) * i / 5.0;
    char lab[32];
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << H - mb << "\" x2=\"" << sx(xv) << "\" y2=\""
        << mt << "\" stroke=\"#eeeeee\"/>\n";
    std::snprintf(lab, sizeof lab, "%.4g", xv);
    out << "<text x=\"" << sx(xv) << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << lab
        << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(yv) << "\" x2=\"" << W - mr << "\" y2=\""
        << sy(yv) << "\" stroke=\"#eeeeee\"/>\n";
    std::snprintf(lab, sizeof lab, "%.4g", yv);
    out << "<text x=\"" << ml - 6 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << lab
        << "</text>\n";
  }
  out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << ml << "\" y2=\"" << mt
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
      << "</text>\n"
      << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
      << " transform=\"rotate(-90 16 " << (mt + H - mb) / 2 << ")\">" << ylabel << "</text>\n";

  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
    for (const auto& [x, y] : s.pts)
      if (std::isfinite(x) && std::isfinite(y)) out << sx(x) << "," << sy(y) << " ";
    out << "\"/>\n";
  }
  double ly = mt + 12;
  for (const auto& s : series) {
    out << "<line x1=\"" << W - mr - 150 << "\" y1=\"" << ly << "\" x2=\"" << W - mr - 126
        << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << W - mr - 120 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
}

const char* palette(int i) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  return kColors[i % 6];
}

}  // namespace

void emit_outputs(const ResultTable& table, const std::string& dir, bool svg) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  {
    json j;
    j["config"] = json::parse(config_to_json(table.config));
    j["truth"] = table.truth ? json(*table.truth) : json(nullptr);
    j["rows"] = json::array();
    for (const auto& r : table.rows) {
      json row;
      row["estimator"] = r.estimator;
      row["degree"] = r.degree;
      row["quadrature"] = r.quadrature;
      row["N"] = r.N;
      row["replicates"] = r.replicates;
      row["failed_replicates"] = r.failed_replicates;
      row["mean"] = num_or_null(r.mean);
      row["sd"] = num_or_null(r.sd);
      row["mse"] = num_or_null(r.mse);
      row["mse_se"] = num_or_null(r.mse_se);
      row["traces_hash"] = r.traces_hash;
      row["estimates"] = r.estimates;
      j["rows"].push_back(std::move(row));
    }
    j["curves"] = json::array();
    for (const auto& c : table.curves) {
      json p;
      p["degree"] = c.degree;
      p["rung"] = c.rung;
      p["t"] = c.t;
      p["r_mean"] = c.r_mean;
      p["r_se"] = c.r_se;
      p["integrand_mean"] = c.integrand_mean;
      p["integrand_sd"] = c.integrand_sd;
      p["cvar_mean"] = c.cvar_mean;
      j["curves"].push_back(std::move(p));
    }
    j["failures"] = table.failures;
    std::ofstream out(fs::path(dir) / "results.json");
    out << j.dump(2) << "\n";
  }

  {
    std::ofstream out(fs::path(dir) / "results.csv");
    out << "estimator,degree,quadrature,N,replicates,failed_replicates,mean,sd,mse,mse_se,"
           "traces_hash\n";
    for (const auto& r : table.rows)
      out << r.estimator << "," << r.degree << "," << r.quadrature << "," << r.N << ","
          << r.replicates << "," << r.failed_replicates << "," << fmt(r.mean) << ","
          << fmt(r.sd) << "," << fmt(r.mse) << "," << fmt(r.mse_se) << "," << r.traces_hash
          << "\n";
  }

  {
    std::ofstream rt(fs::path(dir) / "rt_curve.csv");
    rt << "degree,rung,t,r_mean,r_se\n";
    std::ofstream ig(fs::path(dir) / "integrands.csv");
    ig << "degree,rung,t,integrand_mean,integrand_sd,cvar_mean\n";
    for (const auto& c : table.curves) {
      rt << c.degree << "," << c.rung << "," << fmt(c.t) << "," << fmt(c.r_mean) << ","
         << fmt(c.r_se) << "\n";
      ig << c.degree << "," << c.rung << "," << fmt(c.t) << "," << fmt(c.integrand_mean) << ","
         << fmt(c.integrand_sd) << "," << fmt(c.cvar_mean) << "\n";
    }
  }

  if (svg) {
    std::set<int> degs;
    for (const auto& c : table.curves) degs.insert(c.degree);
    std::vector<Series> rt_series, ig_series;
    int ci = 0;
    for (int d : degs) {
      Series sr{"degree " + std::to_string(d), palette(ci), {}};
      Series si{"degree " + std::to_string(d), palette(ci), {}};
      for (const auto& c : table.curves)
        if (c.degree == d) {
          sr.pts.emplace_back(double(c.rung), std::log10(std::max(c.r_mean, 1e-16)));
          si.pts.emplace_back(double(c.rung), c.integrand_mean);
        }
      rt_series.push_back(std::move(sr));
      ig_series.push_back(std::move(si));
      ++ci;
    }
    write_svg_chart((fs::path(dir) / "rt_curve.svg").string(),
                    "variance ratio by rung (" + table.config.model + ")", "rung index",
                    "log10 R(t)", rt_series);
    write_svg_chart((fs::path(dir) / "integrands.svg").string(),
                    "integrand by rung (" + table.config.model + ")", "rung index",
                    "mean controlled integrand", ig_series);
  }
}

std::vector<ResultRow> parse_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty results csv: " + path);
  const std::string expect =
      "estimator,degree,quadrature,N,replicates,failed_replicates,mean,sd,mse,mse_se,"
      "traces_hash";
  if (line != expect) throw std::invalid_argument("unexpected results csv header: " + line);

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 11) throw std::runtime_error("bad results csv row: " + line);
    ResultRow r;
    r.estimator = cells[0];
    r.degree = std::stoi(cells[1]);
    r.quadrature = std::stoi(cells[2]);
    r.N = std::stoi(cells[3]);
    r.replicates = std::stoi(cells[4]);
    r.failed_replicates = std::stoi(cells[5]);
    r.mean = std::stod(cells[6]);
    r.sd = std::stod(cells[7]);
    r.mse = std::stod(cells[8]);
    r.mse_se = std::stod(cells[9]);
    r.traces_hash = std::stoull(cells[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

BfResult run_bf_experiment(const ExperimentConfig& cfg1, const ExperimentConfig& cfg2,
                           ZvDegree degree, int quadrature) {
  auto with_settings = [&](ExperimentConfig c) {
    c.estimators = {degree == ZvDegree::none ? "TI" : "CTI"};
    c.degrees = {degree_int(degree)};
    c.quadratures = {quadrature};
    return c;
  };
  BfResult out;
  out.model1 = run_experiment(with_settings(cfg1));
  out.model2 = run_experiment(with_settings(cfg2));
  if (!out.model1.failures.empty() || !out.model2.failures.empty())
    throw std::runtime_error("bf experiment: replicate failures prevent pairing");

  const auto find_row = [&](const ResultTable& t) -> const ResultRow& {
    for (const auto& r : t.rows)
      if (r.degree == degree_int(degree) && r.quadrature == quadrature) return r;
    throw std::logic_error("bf experiment: estimator row missing");
  };
  const ResultRow& r1 = find_row(out.model1);
  const ResultRow& r2 = find_row(out.model2);
  if (r1.estimates.size() != r2.estimates.size())
    throw std::runtime_error("bf experiment: replicate counts differ between models");

  for (size_t i = 0; i < r1.estimates.size(); ++i)
    out.log_bf.push_back(r2.estimates[i] - r1.estimates[i]);
  Eigen::Map<const Eigen::VectorXd> v(out.log_bf.data(), out.log_bf.size());
  out.mean = v.mean();
  out.sd = out.log_bf.size() < 2
               ? std::nan("")
               : std::sqrt((v.array() - v.mean()).square().sum() / double(v.size() - 1));
  if (out.model1.truth && out.model2.truth) out.truth = *out.model2.truth - *out.model1.truth;
  return out;
}

}  // namespace cti
