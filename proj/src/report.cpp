#include "clsm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "clsm/common.hpp"

namespace clsm {

namespace {

struct Run {
  int label;
  std::size_t begin;  // positions in the sorted order, inclusive
  std::size_t end;
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::vector<double> scan_breakpoints(const std::vector<double>& values,
                                     const std::vector<int>& labels, int min_run,
                                     int* runs_out) {
  if (values.size() != labels.size())
    throw ConfigError("scan_breakpoints: length mismatch");
  if (values.empty()) throw ConfigError("scan_breakpoints: empty scan");
  if (min_run < 1) throw ConfigError("scan_breakpoints: min_run must be >= 1");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<Run> runs;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int lab = labels[order[pos]];
    if (runs.empty() || runs.back().label != lab)
      runs.push_back({lab, pos, pos});
    else
      runs.back().end = pos;
  }

  // Absorb stray short runs into a neighbor, then re-coalesce, until every
  // remaining run is a credible regime.
  auto coalesce = [&] {
    std::vector<Run> merged;
    for (const Run& r : runs) {
      if (!merged.empty() && merged.back().label == r.label)
        merged.back().end = r.end;
      else
        merged.push_back(r);
    }
    runs = std::move(merged);
  };
  for (;;) {
    std::size_t victim = runs.size();
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (runs.size() == 1) break;
      if (runs[r].end - runs[r].begin + 1 < static_cast<std::size_t>(min_run)) {
        victim = r;
        break;
      }
    }
    if (victim == runs.size()) break;
    runs[victim].label =
        victim > 0 ? runs[victim - 1].label : runs[victim + 1].label;
    coalesce();
  }

  std::vector<double> breaks;
  for (std::size_t r = 0; r + 1 < runs.size(); ++r) {
    const double left = values[order[runs[r].end]];
    const double right = values[order[runs[r + 1].begin]];
    breaks.push_back(0.5 * (left + right));
  }
  if (runs_out) *runs_out = static_cast<int>(runs.size());
  return breaks;
}

EquationReport report_equations(const FitResult& fit, const Dataset& data,
                                double threshold) {
  if (fit.models.empty()) throw ConfigError("report_equations: empty fit");
  if (fit.models.front().family != ModelFamily::kLinear)
    throw ConfigError("report_equations: linear family only");
  if (fit.labels.size() != data.size())
    throw ConfigError("report_equations: fit does not match dataset");

  EquationReport rep;
  rep.threshold = threshold;

  const std::vector<std::string> names = fit.feature_spec.names();
  for (const TrainedModel& m : fit.models) {
    std::vector<EquationTerm> eq;
    for (std::size_t j = 0; j < m.beta.size(); ++j)
      if (std::abs(m.beta[j]) >= threshold) eq.push_back({names[j], m.beta[j]});
    rep.equations.push_back(std::move(eq));
  }

  rep.regime_counts.assign(fit.models.size(), 0);
  for (int lab : fit.labels) rep.regime_counts[lab] += 1;

  const std::size_t s = data.size();
  const int min_run = std::max<int>(
      3, static_cast<int>(std::lround(0.01 * static_cast<double>(s))));
  const Matrix inputs = data.inputs_matrix();
  for (std::size_t col = 0; col < data.n_vars(); ++col) {
    std::vector<double> values(s);
    for (std::size_t i = 0; i < s; ++i) values[i] = inputs(i, col);
    ColumnBreakpoints cb;
    cb.column = static_cast<int>(col);
    cb.values = scan_breakpoints(values, fit.labels, min_run, &cb.runs);
    rep.breakpoints.push_back(std::move(cb));
  }
  return rep;
}

std::string render_report(const EquationReport& rep, const FitResult& fit) {
  std::string out;
  const std::size_t q = rep.equations.size();
  out += "competitive fit: " + std::to_string(q) +
         (q == 1 ? " model (global model, no competition)" : " specialized models") +
         "\n";
  out += "composite MSE (hard assignment): " + fmt(fit.loss_history.back(), "%.6e") +
         "\n";
  out += fit.converged
             ? "labels converged after " + std::to_string(fit.outer_iters_run) +
                   " outer passes\n"
             : "stopped at the outer-iteration cap (" +
                   std::to_string(fit.outer_iters_run) + " passes)\n";
  out += "coefficient display threshold: " + fmt(rep.threshold, "%.3g") + "\n\n";

  for (std::size_t k = 0; k < q; ++k) {
    out += "model " + std::to_string(k + 1) + " (" +
           std::to_string(rep.regime_counts[k]) + " observations won)\n";
    if (rep.equations[k].empty()) {
      out += "  y = 0  (no coefficients above threshold)\n";
    } else {
      std::string rhs;
      for (const EquationTerm& t : rep.equations[k]) {
        const std::string mag = fmt(std::abs(t.coefficient), "%.5g");
        const std::string term =
            t.feature == "1" ? mag : mag + "*" + t.feature;
        if (rhs.empty())
          rhs = (t.coefficient < 0 ? "-" : "") + term;
        else
          rhs += (t.coefficient < 0 ? " - " : " + ") + term;
      }
      out += "  y = " + rhs + "\n";
    }
  }

  out += "\nregime boundaries (midpoints of adjacent label runs)\n";
  for (const ColumnBreakpoints& cb : rep.breakpoints) {
    out += "  x" + std::to_string(cb.column + 1) + ": ";
    if (cb.values.empty()) {
      out += "none (single regime along this input)";
    } else {
      for (std::size_t i = 0; i < cb.values.size(); ++i)
        out += (i ? ", " : "") + fmt(cb.values[i], "%.5g");
    }
    out += "  [" + std::to_string(cb.runs) + " runs]\n";
  }
  return out;
}

}  // namespace clsm
