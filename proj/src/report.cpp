#include "warplab/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace warplab {

bool RunReport::all_passed() const {
  for (const auto& op : operations)
    if (op.status != "pass") return false;
  return true;
}

Json RunReport::to_json() const {
  Json doc;
  doc["schema_version"] = schema_version;
  if (!fixture.empty()) doc["fixture"] = fixture;
  doc["operations"] = Json::array();
  for (const auto& op : operations) {
    Json entry;
    entry["op"] = op.op;
    entry["status"] = op.status;
    if (!op.params.empty()) entry["params"] = op.params;
    if (!op.details.empty()) entry["details"] = op.details;
    if (!op.tables.empty()) {
      Json names = Json::array();
      for (const auto& [name, text] : op.tables) names.push_back(name);
      entry["tables"] = names;
    }
    doc["operations"].push_back(std::move(entry));
  }
  return doc;
}

std::vector<std::string> emit_report(const RunReport& report,
                                     const std::string& format,
                                     const std::string& out_dir) {
  if (format != "json" && format != "csv" && format != "both")
    throw std::invalid_argument("emit: format must be json, csv or both");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  // probe writability before anything else so the report is not lost
  const fs::path probe = fs::path(out_dir) / ".write_probe";
  {
    std::ofstream test(probe);
    if (!test)
      throw std::runtime_error("emit: output directory is not writable: " +
                               out_dir);
  }
  fs::remove(probe, ec);

  std::vector<std::string> written;
  if (format == "json" || format == "both") {
    fs::path path = fs::path(out_dir) / "report.json";
    std::ofstream out(path);
    out << report.to_json().dump(2) << "\n";
    written.push_back(path.string());
  }
  if (format == "csv" || format == "both") {
    for (std::size_t i = 0; i < report.operations.size(); ++i) {
      const auto& op = report.operations[i];
      for (const auto& [name, text] : op.tables) {
        fs::path path = fs::path(out_dir) / (std::to_string(i) + "_" + op.op +
                                             "_" + name + ".csv");
        std::ofstream out(path);
        out << text;
        written.push_back(path.string());
      }
    }
  }
  return written;
}

std::string matrix_csv(const DistanceMatrix<Rat>& m) {
  std::ostringstream out;
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j)
      out << (j ? "," : "") << rat_string(m.at(i, j));
    out << "\n";
  }
  return out.str();
}

std::string matrix_csv(const DistanceMatrix<double>& m) {
  std::ostringstream out;
  char buf[32];
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m.at(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string spectra_csv(const std::vector<std::array<double, 3>>& rows,
                        const std::vector<std::pair<int, int>>& n_order) {
  std::ostringstream out;
  out << "n,order,lambda2,cheeger_lo,cheeger_hi\n";
  char buf[32];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << n_order[i].first << "," << n_order[i].second;
    for (double v : rows[i]) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string profile_csv(const std::vector<double>& r,
                        const std::vector<double>& rho_minus,
                        const std::vector<double>& rho_plus) {
  std::ostringstream out;
  out << "r,rho_minus,rho_plus\n";
  char buf[32];
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", r[i]);
    out << buf;
    std::snprintf(buf, sizeof buf, "%.12g", rho_minus[i]);
    out << "," << buf;
    std::snprintf(buf, sizeof buf, "%.12g", rho_plus[i]);
    out << "," << buf << "\n";
  }
  return out.str();
}

Json rat_json(const Rat& r) { return Json(rat_string(r)); }

Json rat_matrix_json(const DistanceMatrix<Rat>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.n; ++j) row.push_back(rat_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace warplab
