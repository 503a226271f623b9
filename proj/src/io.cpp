#include "lindred/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lindred::io {

namespace {

using nlohmann::json;  // std::map-backed, so dump() emits keys sorted

json check_to_json(const reduction::LindbladCheckReport& r) {
  return json{{"ok", r.ok},
              {"min_conditional_eig", r.min_conditional_eig},
              {"tp_residual", r.tp_residual},
              {"herm_residual", r.herm_residual},
              {"leak_residual", r.leak_residual}};
}

json realvec_to_json(const RealVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

void Table::add(const std::string& name, const RealVector& col) {
  if (!columns.empty() && columns.front().size() != col.size())
    throw std::invalid_argument("Table: column '" + name + "' length mismatch");
  names.push_back(name);
  columns.push_back(col);
}

void Table::add(const std::string& name, const std::vector<double>& col) {
  RealVector v(static_cast<Index>(col.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = col[static_cast<size_t>(i)];
  add(name, v);
}

Index Table::rows() const { return columns.empty() ? 0 : columns.front().size(); }

std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", x);
  // snprintf honors the locale's decimal separator; the artifact format does not
  for (char& c : buf)
    if (c == ',') c = '.';
  return buf;
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (size_t j = 0; j < table.names.size(); ++j) {
    if (j) out << ',';
    out << table.names[j];
  }
  out << '\n';
  const Index n = table.rows();
  for (Index i = 0; i < n; ++i) {
    for (size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out << ',';
      out << format_sci(table.columns[j][i]);
    }
    out << '\n';
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_text: cannot open " + path);
  f << text;
  if (!f) throw std::runtime_error("write_text: short write to " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_text: cannot open " + path);
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

std::string check_report_json(const reduction::LindbladCheckReport& report) {
  return dump(check_to_json(report));
}

std::string pipeline_json(const reduction::Pipeline& pipe, const std::string& model_name) {
  json blocks = json::array();
  for (const auto& b : pipe.wedderburn.blocks)
    blocks.push_back(json{{"dim_factor", b.dim_factor}, {"dim_mult", b.dim_mult}});
  json j{{"model", model_name},
         {"gap", pipe.gap},
         {"center_dim", pipe.center_dim},
         {"kernel_dim", pipe.kernel_dim},
         {"frequencies", realvec_to_json(pipe.frequencies)},
         {"blocks", blocks},
         {"reduced_dim", pipe.reduced_gen.dim_in},
         {"certification", check_to_json(pipe.cert)},
         {"reconstruction_residual", pipe.reduced_form.reconstruction_residual},
         {"jump_count", pipe.reduced_form.jumps.size()}};
  return dump(j);
}

std::string ae_report_json(const adiabatic::AEFirstOrder& ae,
                           const adiabatic::AECertification& cert) {
  json pass = json::array();
  for (Index i = 0; i < cert.eps_grid.size(); ++i)
    pass.push_back(json{{"eps", cert.eps_grid[i]},
                        {"ok", cert.checks[static_cast<size_t>(i)].ok},
                        {"min_conditional_eig",
                         cert.checks[static_cast<size_t>(i)].min_conditional_eig}});
  json j{{"gauge", json{{"kind", ae.strategy.name()}, {"seed", ae.strategy.seed}}},
         {"commutator_norm", ae.commutator_norm},
         {"invariance_residual", ae.invariance_residual},
         {"gauge_residual", ae.gauge_residual},
         {"lindblad_pass", pass},
         {"all_pass", cert.all_pass}};
  return dump(j);
}

std::string error_bounds_json(const perturbation::ErrorBoundReport& report) {
  json j{{"eps", report.eps},
         {"l1_norm", report.l1_norm},
         {"norm_kind", report.norm_kind},
         {"times", realvec_to_json(report.times)},
         {"lhs_projected", realvec_to_json(report.lhs_i)},
         {"rhs_projected", realvec_to_json(report.rhs_i)},
         {"lhs_symmetric", realvec_to_json(report.lhs_ii)},
         {"rhs_symmetric", realvec_to_json(report.rhs_ii)}};
  return dump(j);
}

Table error_bounds_table(const perturbation::ErrorBoundReport& report) {
  Table t;
  t.add("t", report.times);
  t.add("lhs_projected", report.lhs_i);
  t.add("rhs_projected", report.rhs_i);
  t.add("lhs_symmetric", report.lhs_ii);
  t.add("rhs_symmetric", report.rhs_ii);
  std::vector<double> wi, wii;
  for (bool b : report.in_window_i) wi.push_back(b ? 1.0 : 0.0);
  for (bool b : report.in_window_ii) wii.push_back(b ? 1.0 : 0.0);
  t.add("in_window_projected", wi);
  t.add("in_window_symmetric", wii);
  return t;
}

Table spectrum_table(const Vector& values) {
  Table t;
  RealVector re(values.size()), im(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  t.add("re", re);
  t.add("im", im);
  return t;
}

Table real_matrix_table(const RealMatrix& m) {
  Table t;
  for (Index j = 0; j < m.cols(); ++j) t.add("col_" + std::to_string(j), RealVector(m.col(j)));
  return t;
}

}  // namespace lindred::io
