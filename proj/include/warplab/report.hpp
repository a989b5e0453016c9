#pragma once

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

#include "warplab/warp.hpp"

namespace warplab {

using Json = nlohmann::ordered_json;

struct OperationResult {
  std::string op;
  Json params = Json::object();
  std::string status = "pass";  // pass | fail | truncated | error
  Json details = Json::object();
  // named tabular attachments, written as <index>_<op>_<name>.csv
  std::vector<std::pair<std::string, std::string>> tables;
};

struct RunReport {
  int schema_version = 1;
  std::string fixture;
  std::vector<OperationResult> operations;

  bool all_passed() const;
  Json to_json() const;
};

/// Files written by emit_report; "json", "csv" or "both". Throws before
/// touching any computation result if the directory cannot be written.
std::vector<std::string> emit_report(const RunReport& report,
                                     const std::string& format,
                                     const std::string& out_dir);

// CSV builders (fixed schemas)
std::string matrix_csv(const DistanceMatrix<Rat>& m);
std::string matrix_csv(const DistanceMatrix<double>& m);
std::string spectra_csv(const std::vector<std::array<double, 3>>& rows,
                        const std::vector<std::pair<int, int>>& n_order);
std::string profile_csv(const std::vector<double>& r,
                        const std::vector<double>& rho_minus,
                        const std::vector<double>& rho_plus);

Json rat_json(const Rat& r);
Json rat_matrix_json(const DistanceMatrix<Rat>& m);

}  // namespace warplab
