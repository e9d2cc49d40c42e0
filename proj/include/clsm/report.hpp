#pragma once

#include <string>
#include <vector>

#include "clsm/dataset.hpp"
#include "clsm/trainer.hpp"

namespace clsm {

struct EquationTerm {
  std::string feature;
  double coefficient = 0.0;
};

struct ColumnBreakpoints {
  int column = 0;
  std::vector<double> values;  // boundary estimates along this input
  int runs = 0;                // label runs after short-run absorption
};

struct EquationReport {
  double threshold = 3e-3;
  std::vector<std::vector<EquationTerm>> equations;  // per model, |beta| >= threshold
  std::vector<int> regime_counts;                    // observations won per model
  std::vector<ColumnBreakpoints> breakpoints;        // per input column
};

// Label-run boundaries along one scanned variable: rows are sorted by
// value, consecutive equal labels collapse into runs, runs shorter than
// min_run are absorbed into their predecessor, and each boundary is the
// midpoint between the extremal points of adjacent runs.
std::vector<double> scan_breakpoints(const std::vector<double>& values,
                                     const std::vector<int>& labels, int min_run,
                                     int* runs_out = nullptr);

// Thresholded coefficient tables plus per-column breakpoints. Linear
// family only; stored coefficients are left untouched.
EquationReport report_equations(const FitResult& fit, const Dataset& data,
                                double threshold = 3e-3);

// Human-readable rendering (the report.txt payload).
std::string render_report(const EquationReport& rep, const FitResult& fit);

}  // namespace clsm
