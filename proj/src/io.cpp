#include "pxbih/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pxbih/error.hpp"

namespace pxbih {

json grid_to_json(const Grid& g) {
  json counts = json::array(), extents = json::array();
  for (int a = 0; a < g.dim(); ++a) {
    counts.push_back(g.count(a));
    extents.push_back(g.extent(a));
  }
  return {{"dim", g.dim()}, {"counts", counts}, {"extents", extents}};
}

GridPtr grid_from_json(const json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    auto counts = j.at("counts").get<std::vector<std::size_t>>();
    auto extents = j.at("extents").get<std::vector<double>>();
    return std::make_shared<const Grid>(dim, std::move(counts), std::move(extents));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("malformed grid: ") + e.what());
  }
}

json field_to_json(const ScalarField& f) {
  return {{"grid", grid_to_json(f.grid())}, {"values", f.values()}};
}

ScalarField field_from_json(const json& j) {
  try {
    GridPtr grid = grid_from_json(j.at("grid"));
    return ScalarField(std::move(grid), j.at("values").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("malformed field: ") + e.what());
  }
}

ScalarField read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open field file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, path.string() + ": " + e.what());
  }
  return field_from_json(j);
}

void write_field_file(const std::filesystem::path& path, const ScalarField& f) {
  write_text_atomic(path, field_to_json(f).dump() + "\n");
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot rename into " + path.string() + ": " + ec.message());
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json energy_to_json(const EnergyBreakdown& e) {
  return {{"phi_part", e.phi_part},         {"singular_part", e.singular_part},
          {"reaction_part", e.reaction_part}, {"lambda", e.lambda},
          {"total", e.total},               {"eps", e.eps}};
}

json solve_result_to_json(const SolveResult& r, double lambda) {
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"eps", s.eps},
                      {"iterations", s.iterations},
                      {"converged", s.converged},
                      {"roundoff_floor", s.roundoff_floor}});
  }
  return {{"lambda", lambda},
          {"status", to_string(r.status)},
          {"success", r.success()},
          {"message", r.message},
          {"m_hat", r.m_hat},
          {"norm", r.norm},
          {"residual", r.residual},
          {"energy_smoothed", energy_to_json(r.smoothed)},
          {"energy_exact", energy_to_json(r.exact)},
          {"stages", stages},
          {"iterations_total", r.trace.size()}};
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iter,eps,E,grad_norm,step\n";
  for (const auto& t : trace) {
    out << t.iteration << ',' << format_real(t.eps) << ',' << format_real(t.energy) << ','
        << format_real(t.grad_norm) << ',' << format_real(t.step) << '\n';
  }
  return out.str();
}

}  // namespace pxbih
