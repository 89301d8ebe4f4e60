#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hesscov/config.hpp"
#include "hesscov/covariance.hpp"
#include "hesscov/csv.hpp"
#include "hesscov/experiments.hpp"
#include "hesscov/mcmc.hpp"
#include "hesscov/solver.hpp"
#include "hesscov/types.hpp"

namespace hesscov {

using Json = nlohmann::ordered_json;

inline Json to_json(const Vector& v) {
  Json array = Json::array();
  for (Index i = 0; i < v.size(); ++i) array.push_back(v(i));
  return array;
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Solver options from the [solver] section of a config file.
inline SolverOptions solver_options_from_config(const ConfigFile& config) {
  SolverOptions options;
  options.tol_kkt = config.get_double("solver.tol_kkt", options.tol_kkt);
  options.tol_feas = config.get_double("solver.tol_feas", options.tol_feas);
  options.max_iter = static_cast<int>(config.get_int("solver.max_iter", options.max_iter));
  options.regularization_initial =
      config.get_double("solver.regularization_initial", options.regularization_initial);
  const std::string backend = config.get_string("solver.backend", "auto");
  if (backend == "dense") {
    options.backend = FactorBackend::dense;
  } else if (backend == "sparse") {
    options.backend = FactorBackend::sparse;
  } else if (backend == "auto") {
    options.backend = FactorBackend::automatic;
  } else {
    throw ConfigError("solver.backend: expected auto|dense|sparse, got '" + backend + "'");
  }
  return options;
}

inline Json solution_to_json(const KktSolution& solution) {
  Json j;
  j["status"] = to_string(solution.status);
  j["iterations"] = solution.iterations;
  j["merit_value"] = solution.merit_value;
  j["kkt_residual"] = solution.kkt_residual;
  j["constraint_violation"] = solution.constraint_violation;
  j["z_star"] = to_json(solution.z_star);
  j["lambda_star"] = to_json(solution.lambda_star);
  return j;
}

inline Json covariance_report_to_json(const CovarianceReport& report) {
  Json j;
  Json variables = Json::array();
  for (std::size_t k = 0; k < report.requested.size(); ++k) {
    Json row;
    row["name"] = k < report.names.size() ? report.names[k] : std::to_string(report.requested[k]);
    row["index"] = report.requested[k];
    row["estimate"] = report.estimates(static_cast<Index>(k));
    row["std_dev"] = report.std_devs(static_cast<Index>(k));
    variables.push_back(std::move(row));
  }
  j["variables"] = std::move(variables);
  j["reduced_covariance"] = to_json(report.reduced_covariance);
  j["correlations"] = to_json(report.correlations);
  j["rcond_dependent_jacobian"] = report.rcond_dependent_jacobian;
  j["rcond_bordered_hessian"] = report.rcond_bordered_hessian;
  return j;
}

/// One row per requested variable: name, estimate, sigma_hat.
inline void write_covariance_csv(const std::string& path, const CovarianceReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < report.requested.size(); ++k) {
    rows.push_back({k < report.names.size() ? report.names[k] : std::to_string(report.requested[k]),
                    format_double(report.estimates(static_cast<Index>(k))),
                    format_double(report.std_devs(static_cast<Index>(k)))});
  }
  write_csv(path, {"name", "estimate", "std_dev"}, rows);
}

/// Correlation coefficients for every requested pair (upper triangle).
inline void write_correlation_csv(const std::string& path, const CovarianceReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < report.requested.size(); ++i) {
    for (std::size_t j = i + 1; j < report.requested.size(); ++j) {
      rows.push_back({report.names[i], report.names[j],
                      format_double(report.correlations(static_cast<Index>(i),
                                                        static_cast<Index>(j)))});
    }
  }
  write_csv(path, {"name_i", "name_j", "correlation"}, rows);
}

/// Table-1 style layout: one row per target.
inline void write_monte_carlo_csv(const std::string& path, const MonteCarloReport& report) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : report.rows) {
    rows.push_back({row.name, format_double(row.sample_std), format_double(row.mean_sigma_hat),
                    format_double(row.std_sigma_hat)});
  }
  write_csv(path, {"estimate", "sample_std", "mean_sigma_hat", "std_sigma_hat"}, rows);
}

/// Raw per-realization estimates (histogram-ready) plus solver status.
inline void write_monte_carlo_realizations_csv(const std::string& path,
                                               const MonteCarloReport& report,
                                               const std::vector<std::string>& target_names) {
  std::vector<std::string> header = {"realization", "status", "iterations"};
  for (const auto& name : target_names) header.push_back(name);
  for (const auto& name : target_names) header.push_back("sigma_hat_" + name);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < report.realizations.size(); ++r) {
    const auto& record = report.realizations[r];
    std::vector<std::string> row = {std::to_string(r), to_string(record.status),
                                    std::to_string(record.iterations)};
    const bool converged = record.status == SolveStatus::converged;
    for (std::size_t i = 0; i < target_names.size(); ++i) {
      row.push_back(converged ? format_double(record.estimates(static_cast<Index>(i))) : "nan");
    }
    for (std::size_t i = 0; i < target_names.size(); ++i) {
      row.push_back(converged ? format_double(record.sigma_hats(static_cast<Index>(i))) : "nan");
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

inline Json monte_carlo_report_to_json(const MonteCarloReport& report) {
  Json j;
  j["converged_count"] = report.converged_count;
  j["realization_count"] = report.realizations.size();
  j["convergence_rate"] = report.convergence_rate;
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json r;
    r["name"] = row.name;
    r["truth"] = row.truth;
    r["estimate_mean"] = row.estimate_mean;
    r["sample_std"] = row.sample_std;
    r["mean_sigma_hat"] = row.mean_sigma_hat;
    r["std_sigma_hat"] = row.std_sigma_hat;
    r["coverage_one_sigma"] = row.coverage;
    rows.push_back(std::move(r));
  }
  j["targets"] = std::move(rows);
  return j;
}

inline void write_state_band_csv(const std::string& path, const StateBand& band) {
  std::vector<std::vector<std::string>> rows;
  for (Index k = 0; k < band.times.size(); ++k) {
    rows.push_back({format_double(band.times(k)), format_double(band.lower(k)),
                    format_double(band.estimate(k)), format_double(band.upper(k))});
  }
  write_csv(path, {"time", "lower", "estimate", "upper"}, rows);
}

/// One row per sample: coordinates then the log target value.
inline void write_chain_csv(const std::string& path, const ChainResult& chain,
                            const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  for (Index i = 0; i < chain.dimension(); ++i) {
    out << (static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)]
                                                       : "p" + std::to_string(i))
        << ",";
  }
  out << "log_target\n";
  for (Index s = 0; s < chain.samples.rows(); ++s) {
    for (Index i = 0; i < chain.dimension(); ++i) {
      out << format_double(chain.samples(s, i)) << ",";
    }
    out << format_double(chain.log_targets(s)) << "\n";
  }
  if (!out) throw ParseError("write failed: " + path);
}

inline Json chain_summary_to_json(const ChainResult& chain,
                                  const std::vector<std::string>& names) {
  Json j;
  j["samples"] = chain.samples.rows();
  j["dimension"] = chain.dimension();
  j["overall_acceptance"] = chain.overall_acceptance;
  j["full_step_acceptance"] = chain.full_step_acceptance;
  j["burn_in_fraction"] = chain.burn_in_fraction;
  Json coords = Json::array();
  for (Index i = 0; i < chain.dimension(); ++i) {
    Json c;
    c["name"] = static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)]
                                                           : "p" + std::to_string(i);
    c["acceptance"] = chain.coordinate_acceptance(i);
    coords.push_back(std::move(c));
  }
  j["coordinates"] = std::move(coords);
  return j;
}

inline void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace hesscov
