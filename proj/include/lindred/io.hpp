// io.hpp — Deterministic artifact serialization: CSV tables with a fixed
// numeric format and pretty-printed JSON reports with sorted keys, so that
// identical runs produce byte-identical files.
#pragma once

#include <string>
#include <vector>

#include "lindred/adiabatic.hpp"
#include "lindred/perturbation.hpp"
#include "lindred/reduction.hpp"
#include "lindred/types.hpp"

namespace lindred::io {

// Column-oriented table; all columns must share one length.
struct Table {
  std::vector<std::string> names;
  std::vector<RealVector> columns;

  void add(const std::string& name, const RealVector& col);
  void add(const std::string& name, const std::vector<double>& col);
  Index rows() const;
};

// Scientific notation with 12 fractional digits and a '.' decimal separator
// regardless of locale.
std::string format_sci(double x);

// Header row then one line per row, comma separated, every cell format_sci.
std::string to_csv(const Table& table);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// JSON reports (pretty, two-space indent, keys sorted by the writer).
std::string check_report_json(const reduction::LindbladCheckReport& report);
std::string pipeline_json(const reduction::Pipeline& pipe, const std::string& model_name);
std::string ae_report_json(const adiabatic::AEFirstOrder& ae,
                           const adiabatic::AECertification& cert);
std::string error_bounds_json(const perturbation::ErrorBoundReport& report);

// CSV bundles for the numeric payloads of the same objects.
Table error_bounds_table(const perturbation::ErrorBoundReport& report);
Table spectrum_table(const Vector& values);             // columns re, im
Table real_matrix_table(const RealMatrix& m);           // columns col_0..col_{n-1}

}  // namespace lindred::io
