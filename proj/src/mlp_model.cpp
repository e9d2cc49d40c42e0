#include "clsm/mlp_model.hpp"

#include <cmath>
#include <numeric>

#include "clsm/common.hpp"

namespace clsm {

namespace {

// Fixed chunk width keeps gradient reductions bitwise identical for any
// thread count: chunks accumulate independently, then combine in order.
constexpr std::size_t kChunkRows = 64;

struct Workspace {
  // activations[l] holds a^l (activations[0] is the input row);
  // deltas[l] holds dL/dz^{l+1}.
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> deltas;

  explicit Workspace(const std::vector<int>& widths) {
    activations.resize(widths.size());
    for (std::size_t l = 0; l < widths.size(); ++l)
      activations[l].resize(widths[l]);
    deltas.resize(widths.size() - 1);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
      deltas[l].resize(widths[l + 1]);
  }
};

double forward(const MlpModel& m, const double* x, Workspace& ws) {
  const std::size_t n_in = m.layers.front().w.cols;
  for (std::size_t j = 0; j < n_in; ++j) ws.activations[0][j] = x[j];
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const MlpLayer& layer = m.layers[l];
    const std::vector<double>& in = ws.activations[l];
    std::vector<double>& out = ws.activations[l + 1];
    const bool hidden = l + 1 < m.layers.size();
    for (std::size_t r = 0; r < layer.w.rows; ++r) {
      const double* wrow = layer.w.row(r);
      double z = layer.b[r];
      for (std::size_t c = 0; c < layer.w.cols; ++c) z += wrow[c] * in[c];
      out[r] = hidden ? std::tanh(z) : z;
    }
  }
  return ws.activations.back()[0];
}

// Accumulates dL/dparams for one observation into grad (flatten() order).
// dout = dL/dyhat for this row.
void backward(const MlpModel& m, Workspace& ws, double dout, double* grad) {
  const std::size_t n_layers = m.layers.size();
  ws.deltas[n_layers - 1][0] = dout;
  for (std::size_t l = n_layers; l-- > 0;) {
    const MlpLayer& layer = m.layers[l];
    const std::vector<double>& delta = ws.deltas[l];
    const std::vector<double>& in = ws.activations[l];

    // Offset of this layer's block in the flat parameter vector.
    std::size_t off = 0;
    for (std::size_t k = 0; k < l; ++k)
      off += m.layers[k].w.data.size() + m.layers[k].b.size();
    double* gw = grad + off;
    double* gb = gw + layer.w.data.size();

    for (std::size_t r = 0; r < layer.w.rows; ++r) {
      const double d = delta[r];
      double* grow = gw + r * layer.w.cols;
      for (std::size_t c = 0; c < layer.w.cols; ++c) grow[c] += d * in[c];
      gb[r] += d;
    }
    if (l == 0) break;

    std::vector<double>& prev = ws.deltas[l - 1];
    for (std::size_t c = 0; c < layer.w.cols; ++c) {
      double acc = 0.0;
      for (std::size_t r = 0; r < layer.w.rows; ++r)
        acc += layer.w(r, c) * delta[r];
      const double a = ws.activations[l][c];
      prev[c] = acc * (1.0 - a * a);
    }
  }
}

WeightedLossReport loss_grad_core(const MlpModel& m, const Matrix& inputs,
                                  const std::vector<double>& targets,
                                  const std::vector<double>& weights,
                                  const std::size_t* rows, std::size_t n_rows) {
  m.validate();
  if (inputs.cols != m.input_width())
    throw ConfigError("mlp loss: input width does not match first layer");
  if (targets.size() != inputs.rows || weights.size() != inputs.rows)
    throw ConfigError("mlp loss: row count mismatch");
  if (n_rows == 0) throw ConfigError("mlp loss: empty row subset");

  const std::size_t n_params = m.parameter_count();
  const std::vector<int> widths = m.widths();
  const double scale = 2.0 / static_cast<double>(n_rows);
  const std::size_t n_chunks = (n_rows + kChunkRows - 1) / kChunkRows;

  std::vector<std::vector<double>> chunk_grad(n_chunks);
  std::vector<double> chunk_loss(n_chunks, 0.0);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
    Workspace ws(widths);
    std::vector<double>& g = chunk_grad[c];
    g.assign(n_params, 0.0);
    const std::size_t begin = static_cast<std::size_t>(c) * kChunkRows;
    const std::size_t end = std::min(begin + kChunkRows, n_rows);
    double loss = 0.0;
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t i = rows ? rows[p] : p;
      const double yhat = forward(m, inputs.row(i), ws);
      const double r = yhat - targets[i];
      loss += weights[i] * r * r;
      backward(m, ws, scale * weights[i] * r, g.data());
    }
    chunk_loss[c] = loss;
  }

  WeightedLossReport rep;
  rep.grad.assign(n_params, 0.0);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    rep.loss += chunk_loss[c];
    for (std::size_t j = 0; j < n_params; ++j) rep.grad[j] += chunk_grad[c][j];
  }
  rep.loss /= static_cast<double>(n_rows);
  return rep;
}

}  // namespace

std::size_t MlpModel::input_width() const {
  return layers.empty() ? 0 : layers.front().w.cols;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const MlpLayer& l : layers) n += l.w.data.size() + l.b.size();
  return n;
}

std::vector<int> MlpModel::widths() const {
  std::vector<int> w;
  if (layers.empty()) return w;
  w.push_back(static_cast<int>(layers.front().w.cols));
  for (const MlpLayer& l : layers) w.push_back(static_cast<int>(l.w.rows));
  return w;
}

std::vector<double> MlpModel::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const MlpLayer& l : layers) {
    out.insert(out.end(), l.w.data.begin(), l.w.data.end());
    out.insert(out.end(), l.b.begin(), l.b.end());
  }
  return out;
}

void MlpModel::unflatten(const std::vector<double>& params) {
  if (params.size() != parameter_count())
    throw ConfigError("mlp unflatten: parameter count mismatch");
  std::size_t off = 0;
  for (MlpLayer& l : layers) {
    std::copy_n(params.begin() + off, l.w.data.size(), l.w.data.begin());
    off += l.w.data.size();
    std::copy_n(params.begin() + off, l.b.size(), l.b.begin());
    off += l.b.size();
  }
}

void MlpModel::validate() const {
  if (layers.empty()) throw ConfigError("mlp: no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].w.rows == 0 || layers[l].w.cols == 0)
      throw ConfigError("mlp: empty layer");
    if (layers[l].b.size() != layers[l].w.rows)
      throw ConfigError("mlp: bias length does not match layer rows");
    if (l > 0 && layers[l].w.cols != layers[l - 1].w.rows)
      throw ConfigError("mlp: adjacent layer dimensions do not chain");
  }
  if (layers.back().w.rows != 1)
    throw ConfigError("mlp: output dimension must be 1");
}

MlpModel make_mlp(const std::vector<int>& widths, Rng& rng) {
  if (widths.size() < 2) throw ConfigError("make_mlp: need at least two widths");
  for (int w : widths)
    if (w < 1) throw ConfigError("make_mlp: widths must be positive");
  MlpModel m;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    MlpLayer layer;
    const int fan_in = widths[l];
    const int fan_out = widths[l + 1];
    layer.w = Matrix(fan_out, fan_in);
    layer.b.assign(fan_out, 0.0);
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : layer.w.data) v = rng.uniform(-s, s);
    m.layers.push_back(std::move(layer));
  }
  m.validate();
  return m;
}

std::vector<double> predict_mlp(const MlpModel& m, const Matrix& inputs) {
  m.validate();
  if (inputs.cols != m.input_width())
    throw ConfigError("predict_mlp: input width does not match first layer");
  const std::vector<int> widths = m.widths();
  std::vector<double> out(inputs.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(inputs.rows); ++i) {
    Workspace ws(widths);
    out[i] = forward(m, inputs.row(i), ws);
  }
  return out;
}

WeightedLossReport mlp_weighted_loss_grad(const MlpModel& m, const Matrix& inputs,
                                          const std::vector<double>& targets,
                                          const std::vector<double>& weights) {
  return loss_grad_core(m, inputs, targets, weights, nullptr, inputs.rows);
}

WeightedLossReport mlp_weighted_loss_grad(const MlpModel& m, const Matrix& inputs,
                                          const std::vector<double>& targets,
                                          const std::vector<double>& weights,
                                          const std::vector<std::size_t>& rows) {
  return loss_grad_core(m, inputs, targets, weights, rows.data(), rows.size());
}

}  // namespace clsm
