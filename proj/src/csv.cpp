#include "eqlat/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "eqlat/errors.hpp"
#include "json.hpp"

namespace eqlat {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'", "E_IO");
    out << content;
    out.flush();
    if (!out) throw ConfigError("short write to '" + tmp.string() + "'", "E_IO");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path.string() + "'", "E_IO");
  }
}

std::string solution_csv(const Model& model, const PricingSolution& sol) {
  const Lattice& lat = model.lattice;
  std::ostringstream out;
  out << "node,time_index,shocks,regimes,C,S,gamma,D,alpha,kernel_from_parent,child_kernels\n";
  for (NodeId id = 0; id < lat.size(); ++id) {
    const Node n = lat.node(id);
    std::string shocks;
    for (std::size_t k = 0; k < n.shocks.size(); ++k) {
      if (k) shocks += '|';
      shocks += n.shocks[k].str();
    }
    std::string regimes;
    for (std::size_t k = 0; k < n.regimes.size(); ++k) {
      if (k) regimes += '|';
      regimes += lat.chain().labels[n.regimes[k]];
    }
    std::string kids;
    if (!lat.terminal(id)) {
      for (auto [c, end] = lat.children(id); c < end; ++c) {
        if (!kids.empty()) kids += ';';
        kids += format_number(sol.kernel[c]);
      }
    }
    const ForwardState& st = model.market.state(id);
    out << id << ',' << n.timeIndex << ',' << shocks << ',' << regimes << ','
        << format_number(st.c) << ',' << format_number(st.s) << ','
        << format_number(risk_aversion(lat, id)) << ',' << format_number(sol.price[id]) << ','
        << format_number(sol.alpha[id]) << ',' << format_number(sol.kernel[id]) << ',' << kids
        << '\n';
  }
  return out.str();
}

std::string table_csv(const FigureTable& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string provenance_json(const FigureTable& t) {
  nlohmann::ordered_json j;
  j["figure"] = t.id;
  j["columns"] = t.columns;
  for (const auto& [k, v] : t.provenance) j["parameters"][k] = v;
  return j.dump(2) + "\n";
}

}  // namespace eqlat
