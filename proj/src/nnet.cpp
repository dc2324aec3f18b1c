#include "spectune/nnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "spectune/errors.hpp"
#include "spectune/kernels/kernels.hpp"
#include "spectune/rng.hpp"

namespace spectune::nnet {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-7;
constexpr double kImprovementTol = 1e-12;

constexpr int kAllowedWidths[] = {3, 5, 7, 11, 15, 21, 29};

}  // namespace

void HyperConfig::validate() const {
  if (l2 < 1e-4 || l2 > 1.0) throw ArgumentError("l2 out of range [1e-4, 1]");
  if (n_kernels < 1 || n_kernels > 13) throw ArgumentError("n_kernels out of range [1, 13]");
  if (std::find(std::begin(kAllowedWidths), std::end(kAllowedWidths), kernel_width) ==
      std::end(kAllowedWidths))
    throw ArgumentError("kernel_width must be one of {3,5,7,11,15,21,29}");
  if (n_fc_layers < 1 || n_fc_layers > 4) throw ArgumentError("n_fc_layers out of range [1, 4]");
  if (fc_units < 4 || fc_units > 96 || fc_units % 4 != 0)
    throw ArgumentError("fc_units must be a multiple of 4 in [4, 96]");
}

std::vector<int> HyperConfig::fc_widths() const {
  std::vector<int> widths(n_fc_layers);
  for (int k = 0; k < n_fc_layers; ++k) widths[k] = std::max(1, fc_units >> k);
  return widths;
}

HyperConfig cnn_b_config() {
  HyperConfig cfg;
  cfg.l2 = 0.0055;
  cfg.n_kernels = 1;
  cfg.kernel_width = 21;
  cfg.n_fc_layers = 3;
  cfg.fc_units = 36;
  return cfg;
}

std::vector<int> cnn_b_fc_widths() { return {36, 18, 12}; }

void TrainSchedule::validate() const {
  if (max_epochs < 1) throw ArgumentError("max_epochs must be positive");
  if (batch_size < 1) throw ArgumentError("batch_size must be positive");
  if (lr_patience < 1 || es_patience < 1) throw ArgumentError("patiences must be positive");
  if (lr_min > lr_init) throw ArgumentError("lr_min must not exceed lr_init");
  if (lr_factor <= 0 || lr_factor >= 1) throw ArgumentError("lr_factor must be in (0,1)");
}

const char* stop_reason_name(StopReason r) {
  return r == StopReason::early_stop ? "early_stop" : "max_epochs";
}

template <typename T>
std::size_t ParamSet<T>::param_count() const {
  std::size_t n = conv_w.size() + conv_b.size();
  for (const auto& layer : fc) n += layer.w.size() + layer.b.size();
  return n;
}

template <typename T>
void ParamSet<T>::zero() {
  std::fill(conv_w.begin(), conv_w.end(), T(0));
  std::fill(conv_b.begin(), conv_b.end(), T(0));
  for (auto& layer : fc) {
    std::fill(layer.w.begin(), layer.w.end(), T(0));
    std::fill(layer.b.begin(), layer.b.end(), T(0));
  }
}

template <typename T>
Model<T> build_model(const HyperConfig& cfg, int input_len, std::uint64_t seed,
                     const std::vector<int>* fc_widths_override) {
  cfg.validate();
  if (input_len < cfg.kernel_width)
    throw ShapeError("input length " + std::to_string(input_len) + " shorter than kernel width " +
                     std::to_string(cfg.kernel_width));

  Model<T> m;
  m.input_len = input_len;
  m.n_kernels = cfg.n_kernels;
  m.kernel_width = cfg.kernel_width;
  m.fc_widths = fc_widths_override ? *fc_widths_override : cfg.fc_widths();
  if (m.fc_widths.empty()) throw ArgumentError("at least one fully-connected layer required");

  Rng rng(derive_seed(seed, 0x1417));
  auto he_fill = [&rng](std::vector<T>& w, int fan_in) {
    const double sd = std::sqrt(2.0 / double(fan_in));
    for (auto& x : w) x = T(rng.normal(0.0, sd));
  };

  m.params.conv_w.resize(std::size_t(cfg.n_kernels) * cfg.kernel_width);
  m.params.conv_b.assign(cfg.n_kernels, T(0));
  he_fill(m.params.conv_w, cfg.kernel_width);

  int in = m.flat_len();
  for (const int width : m.fc_widths) {
    Dense<T> layer;
    layer.in = in;
    layer.out = width;
    layer.w.resize(std::size_t(width) * in);
    layer.b.assign(width, T(0));
    he_fill(layer.w, in);
    m.params.fc.push_back(std::move(layer));
    in = width;
  }
  Dense<T> out_layer;
  out_layer.in = in;
  out_layer.out = 1;
  out_layer.w.resize(in);
  out_layer.b.assign(1, T(0));
  he_fill(out_layer.w, in);
  m.params.fc.push_back(std::move(out_layer));
  return m;
}

namespace {

// Reused buffers for forward/backward over one batch.
template <typename T>
struct Workspace {
  Matrix<T> conv_act;             // B x flat, post-ELU
  std::vector<Matrix<T>> acts;    // per hidden layer, post-ELU
  std::vector<T> preds;           // B
  Matrix<T> delta, delta_prev;    // ping-pong gradient buffers
  std::vector<T> trans;           // transpose scratch, out x B
};

template <typename T>
void forward_into(const Model<T>& m, const Matrix<T>& batch, Workspace<T>& ws) {
  if (int(batch.cols) != m.input_len) throw ShapeError("batch column count != model input length");
  const auto& K = kernels::ops<T>();
  const std::size_t B = batch.rows;
  const int cl = m.conv_len();
  const int flat = m.flat_len();

  ws.conv_act.resize(B, flat);
  for (std::size_t s = 0; s < B; ++s) {
    const T* x = batch.row(s);
    T* out = ws.conv_act.row(s);
    for (int f = 0; f < m.n_kernels; ++f) {
      K.conv1d_forward(x, m.input_len, m.params.conv_w.data() + std::size_t(f) * m.kernel_width,
                       m.kernel_width, out + std::size_t(f) * cl);
      const T bias = m.params.conv_b[f];
      for (int j = 0; j < cl; ++j) out[std::size_t(f) * cl + j] += bias;
    }
  }
  K.elu(ws.conv_act.v.data(), ws.conv_act.v.data(), ws.conv_act.v.size());

  ws.acts.resize(m.fc_widths.size());
  const Matrix<T>* cur = &ws.conv_act;
  for (std::size_t l = 0; l < m.fc_widths.size(); ++l) {
    const auto& layer = m.params.fc[l];
    ws.acts[l].resize(B, layer.out);
    K.gemm_nt(B, layer.out, layer.in, cur->v.data(), layer.in, layer.w.data(), layer.in,
              ws.acts[l].v.data(), layer.out, false);
    for (std::size_t s = 0; s < B; ++s) {
      T* row = ws.acts[l].row(s);
      for (int j = 0; j < layer.out; ++j) row[j] += layer.b[j];
    }
    K.elu(ws.acts[l].v.data(), ws.acts[l].v.data(), ws.acts[l].v.size());
    cur = &ws.acts[l];
  }

  const auto& out_layer = m.params.fc.back();
  ws.preds.resize(B);
  K.gemm_nt(B, 1, out_layer.in, cur->v.data(), out_layer.in, out_layer.w.data(), out_layer.in,
            ws.preds.data(), 1, false);
  for (auto& p : ws.preds) p += out_layer.b[0];
}

// Backpropagation from d(loss)/d(pred); accumulates into grads.
template <typename T>
void backward_into(const Model<T>& m, const Matrix<T>& batch, Workspace<T>& ws,
                   const std::vector<T>& dpred, ParamSet<T>& grads) {
  const auto& K = kernels::ops<T>();
  const std::size_t B = batch.rows;
  const int cl = m.conv_len();
  const std::size_t n_hidden = m.fc_widths.size();

  // Output layer (width 1): dpred is already delta.
  const auto& out_layer = m.params.fc.back();
  auto& g_out = grads.fc.back();
  const Matrix<T>& last_act = n_hidden ? ws.acts[n_hidden - 1] : ws.conv_act;
  K.gemm_nn(1, out_layer.in, B, dpred.data(), B, last_act.v.data(), out_layer.in, g_out.w.data(),
            out_layer.in, true);
  for (const T d : dpred) g_out.b[0] += d;

  // delta for the last hidden layer
  ws.delta.resize(B, out_layer.in);
  K.gemm_nn(B, out_layer.in, 1, dpred.data(), 1, out_layer.w.data(), out_layer.in,
            ws.delta.v.data(), out_layer.in, false);
  K.elu_grad(last_act.v.data(), ws.delta.v.data(), ws.delta.v.data(), ws.delta.v.size());

  for (std::size_t l = n_hidden; l-- > 0;) {
    const auto& layer = m.params.fc[l];
    auto& g = grads.fc[l];
    const Matrix<T>& input_act = l > 0 ? ws.acts[l - 1] : ws.conv_act;

    // weight grad: delta^T [out x B] * input [B x in]
    ws.trans.resize(std::size_t(layer.out) * B);
    for (std::size_t s = 0; s < B; ++s) {
      const T* row = ws.delta.row(s);
      for (int j = 0; j < layer.out; ++j) ws.trans[std::size_t(j) * B + s] = row[j];
    }
    K.gemm_nn(layer.out, layer.in, B, ws.trans.data(), B, input_act.v.data(), layer.in,
              g.w.data(), layer.in, true);
    for (std::size_t s = 0; s < B; ++s) {
      const T* row = ws.delta.row(s);
      for (int j = 0; j < layer.out; ++j) g.b[j] += row[j];
    }

    ws.delta_prev.resize(B, layer.in);
    K.gemm_nn(B, layer.in, layer.out, ws.delta.v.data(), layer.out, layer.w.data(), layer.in,
              ws.delta_prev.v.data(), layer.in, false);
    K.elu_grad(input_act.v.data(), ws.delta_prev.v.data(), ws.delta_prev.v.data(),
               ws.delta_prev.v.size());
    std::swap(ws.delta, ws.delta_prev);
  }

  // Conv layer: ws.delta now holds d(loss)/d(conv pre-activation), B x flat.
  for (std::size_t s = 0; s < B; ++s) {
    const T* x = batch.row(s);
    const T* d = ws.delta.row(s);
    for (int f = 0; f < m.n_kernels; ++f) {
      const T* df = d + std::size_t(f) * cl;
      K.conv1d_kernel_grad(x, df, cl, m.kernel_width,
                           grads.conv_w.data() + std::size_t(f) * m.kernel_width);
      T acc = 0;
      for (int j = 0; j < cl; ++j) acc += df[j];
      grads.conv_b[f] += acc;
    }
  }
}

template <typename T>
ParamSet<T> make_like(const Model<T>& m) {
  ParamSet<T> p;
  p.conv_w.assign(m.params.conv_w.size(), T(0));
  p.conv_b.assign(m.params.conv_b.size(), T(0));
  p.fc.resize(m.params.fc.size());
  for (std::size_t l = 0; l < m.params.fc.size(); ++l) {
    p.fc[l].in = m.params.fc[l].in;
    p.fc[l].out = m.params.fc[l].out;
    p.fc[l].w.assign(m.params.fc[l].w.size(), T(0));
    p.fc[l].b.assign(m.params.fc[l].b.size(), T(0));
  }
  return p;
}

template <typename T>
double loss_and_grads_into(const Model<T>& m, const Matrix<T>& batch, const std::vector<T>& targets,
                           double l2, Workspace<T>& ws, ParamSet<T>& grads) {
  if (batch.rows == 0) throw ArgumentError("empty batch");
  if (batch.rows != targets.size()) throw ShapeError("batch/target row count mismatch");
  const auto& K = kernels::ops<T>();
  forward_into(m, batch, ws);

  const std::size_t B = batch.rows;
  double loss = K.mse(ws.preds.data(), targets.data(), B);
  std::vector<T> dpred(B);
  for (std::size_t i = 0; i < B; ++i)
    dpred[i] = T(2) * (ws.preds[i] - targets[i]) / T(double(B));

  grads.zero();
  backward_into(m, batch, ws, dpred, grads);

  if (l2 != 0.0) {
    const T two_l2 = T(2.0 * l2);
    loss += l2 * K.sum_sq(m.params.conv_w.data(), m.params.conv_w.size());
    K.axpy(two_l2, m.params.conv_w.data(), grads.conv_w.data(), m.params.conv_w.size());
    for (std::size_t l = 0; l < m.params.fc.size(); ++l) {
      loss += l2 * K.sum_sq(m.params.fc[l].w.data(), m.params.fc[l].w.size());
      K.axpy(two_l2, m.params.fc[l].w.data(), grads.fc[l].w.data(), m.params.fc[l].w.size());
    }
  }
  return loss;
}

}  // namespace

template <typename T>
std::vector<T> forward(const Model<T>& m, const Matrix<T>& batch) {
  Workspace<T> ws;
  forward_into(m, batch, ws);
  return ws.preds;
}

template <typename T>
LossGrads<T> loss_and_grads(const Model<T>& m, const Matrix<T>& batch,
                            const std::vector<T>& targets, double l2) {
  Workspace<T> ws;
  LossGrads<T> out;
  out.grads = make_like(m);
  out.loss = loss_and_grads_into(m, batch, targets, l2, ws, out.grads);
  return out;
}

template <typename T>
AdamState<T> make_adam_state(const Model<T>& m) {
  AdamState<T> st;
  st.m = make_like(m);
  st.v = make_like(m);
  st.step = 0;
  return st;
}

template <typename T>
void adam_step(ParamSet<T>& weights, const ParamSet<T>& grads, AdamState<T>& state, double lr) {
  const auto& K = kernels::ops<T>();
  state.step += 1;
  const T bc1 = T(1.0 / (1.0 - std::pow(kAdamBeta1, double(state.step))));
  const T bc2 = T(1.0 / (1.0 - std::pow(kAdamBeta2, double(state.step))));
  auto update = [&](std::vector<T>& w, const std::vector<T>& g, std::vector<T>& mm,
                    std::vector<T>& vv) {
    if (w.size() != g.size()) throw ShapeError("adam_step shape mismatch");
    K.adam_update(w.data(), g.data(), mm.data(), vv.data(), w.size(), T(lr), T(kAdamBeta1),
                  T(kAdamBeta2), T(kAdamEps), bc1, bc2);
  };
  update(weights.conv_w, grads.conv_w, state.m.conv_w, state.v.conv_w);
  update(weights.conv_b, grads.conv_b, state.m.conv_b, state.v.conv_b);
  for (std::size_t l = 0; l < weights.fc.size(); ++l) {
    update(weights.fc[l].w, grads.fc[l].w, state.m.fc[l].w, state.v.fc[l].w);
    update(weights.fc[l].b, grads.fc[l].b, state.m.fc[l].b, state.v.fc[l].b);
  }
}

template <typename T>
TrainResult<T> train(const HyperConfig& cfg, const Matrix<T>& cal_x, const std::vector<T>& cal_y,
                     const Matrix<T>& val_x, const std::vector<T>& val_y,
                     const TrainSchedule& sched, std::uint64_t seed,
                     const std::vector<int>* fc_widths_override) {
  sched.validate();
  if (cal_x.rows == 0 || val_x.rows == 0)
    throw ArgumentError("calibration and validation sets must be non-empty");
  if (cal_x.rows != cal_y.size() || val_x.rows != val_y.size())
    throw ShapeError("feature/target row count mismatch");

  TrainResult<T> result;
  result.model = build_model<T>(cfg, int(cal_x.cols), seed, fc_widths_override);
  Model<T>& model = result.model;

  AdamState<T> adam = make_adam_state(model);
  ParamSet<T> grads = make_like(model);
  Workspace<T> ws, val_ws;
  Rng shuffle_rng(derive_seed(seed, 0x50f1e));

  const auto& K = kernels::ops<T>();
  std::vector<std::size_t> order(cal_x.rows);
  std::iota(order.begin(), order.end(), 0);
  Matrix<T> batch_x;
  std::vector<T> batch_y;

  double lr = sched.lr_init;
  double best_val = std::numeric_limits<double>::infinity();
  ParamSet<T> best_params = model.params;
  int best_epoch = 0;
  int lr_counter = 0, es_counter = 0;
  TrainRecord& rec = result.record;
  rec.stop_reason = StopReason::max_epochs;

  for (int epoch = 1; epoch <= sched.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order.begin(), order.end());
    double epoch_loss = 0.0;
    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += sched.batch_size) {
      const std::size_t bsz = std::min<std::size_t>(sched.batch_size, order.size() - start);
      batch_x.resize(bsz, cal_x.cols);
      batch_y.resize(bsz);
      for (std::size_t i = 0; i < bsz; ++i) {
        std::memcpy(batch_x.row(i), cal_x.row(order[start + i]), sizeof(T) * cal_x.cols);
        batch_y[i] = cal_y[order[start + i]];
      }
      const double loss = loss_and_grads_into(model, batch_x, batch_y, cfg.l2, ws, grads);
      if (!std::isfinite(loss)) throw DivergenceError("non-finite training loss", epoch);
      adam_step(model.params, grads, adam, lr);
      epoch_loss += loss;
      ++n_batches;
    }
    rec.cal_loss.push_back(epoch_loss / double(n_batches));

    forward_into(model, val_x, val_ws);
    const double val_mse = K.mse(val_ws.preds.data(), val_y.data(), val_y.size());
    if (!std::isfinite(val_mse)) throw DivergenceError("non-finite validation loss", epoch);
    rec.val_loss.push_back(val_mse);
    rec.epochs_run = epoch;

    if (best_val - val_mse > kImprovementTol) {
      best_val = val_mse;
      best_epoch = epoch;
      best_params = model.params;
      lr_counter = 0;
      es_counter = 0;
    } else {
      ++lr_counter;
      ++es_counter;
      if (lr_counter >= sched.lr_patience) {
        lr = std::max(lr * sched.lr_factor, sched.lr_min);
        lr_counter = 0;
      }
      if (es_counter >= sched.es_patience) {
        rec.stop_reason = StopReason::early_stop;
        break;
      }
    }
  }

  model.params = std::move(best_params);
  rec.best_epoch = best_epoch;
  rec.final_lr = lr;
  return result;
}

template <typename T>
std::vector<double> predict(const Model<T>& m, const Matrix<T>& features,
                            const data::StandardizeStats& stats) {
  const auto preds = forward(m, features);
  std::vector<double> out(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i)
    out[i] = double(preds[i]) * stats.target_std + stats.target_mean;
  return out;
}

// ----------------------------------------------------------- serialization

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void put_i32(std::string& buf, std::int32_t v) { put_u32(buf, std::uint32_t(v)); }

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  for (int i = 0; i < 8; ++i) buf.push_back(char((bits >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;
  std::uint32_t u32() {
    if (pos + 4 > buf.size()) throw Error("weights file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  std::int32_t i32() { return std::int32_t(u32()); }
  double f64() {
    if (pos + 8 > buf.size()) throw Error("weights file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(buf[pos++])) << (8 * i);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
};

constexpr std::uint32_t kWeightsMagic = 0x53545742;  // "STWB"
constexpr std::uint32_t kWeightsVersion = 1;

}  // namespace

template <typename T>
void save_weights(const Model<T>& m, const std::string& path) {
  std::string buf;
  put_u32(buf, kWeightsMagic);
  put_u32(buf, kWeightsVersion);
  put_i32(buf, m.input_len);
  put_i32(buf, m.n_kernels);
  put_i32(buf, m.kernel_width);
  put_i32(buf, int(m.fc_widths.size()));
  for (const int w : m.fc_widths) put_i32(buf, w);
  auto put_tensor = [&buf](const std::vector<T>& t) {
    for (const T v : t) put_f64(buf, double(v));
  };
  put_tensor(m.params.conv_w);
  put_tensor(m.params.conv_b);
  for (const auto& layer : m.params.fc) {
    put_tensor(layer.w);
    put_tensor(layer.b);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write weights file: " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw Error("write failed: " + path);
}

template <typename T>
Model<T> load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open weights file: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Reader r{buf};
  if (r.u32() != kWeightsMagic) throw Error("not a weights file: " + path);
  if (r.u32() != kWeightsVersion) throw Error("unsupported weights version: " + path);

  Model<T> m;
  m.input_len = r.i32();
  m.n_kernels = r.i32();
  m.kernel_width = r.i32();
  const int n_hidden = r.i32();
  if (m.input_len < m.kernel_width || m.n_kernels < 1 || n_hidden < 1)
    throw Error("corrupt weights header: " + path);
  m.fc_widths.resize(n_hidden);
  for (int& w : m.fc_widths) w = r.i32();

  auto get_tensor = [&r](std::vector<T>& t, std::size_t n) {
    t.resize(n);
    for (auto& v : t) v = T(r.f64());
  };
  get_tensor(m.params.conv_w, std::size_t(m.n_kernels) * m.kernel_width);
  get_tensor(m.params.conv_b, std::size_t(m.n_kernels));
  int in = m.flat_len();
  for (const int width : m.fc_widths) {
    Dense<T> layer;
    layer.in = in;
    layer.out = width;
    get_tensor(layer.w, std::size_t(width) * in);
    get_tensor(layer.b, std::size_t(width));
    m.params.fc.push_back(std::move(layer));
    in = width;
  }
  Dense<T> out_layer;
  out_layer.in = in;
  out_layer.out = 1;
  get_tensor(out_layer.w, std::size_t(in));
  get_tensor(out_layer.b, 1);
  m.params.fc.push_back(std::move(out_layer));
  if (r.pos != buf.size()) throw Error("trailing bytes in weights file: " + path);
  return m;
}

std::string train_record_json(const TrainRecord& r) {
  nlohmann::json j;
  j["epochs_run"] = r.epochs_run;
  j["best_epoch"] = r.best_epoch;
  j["cal_loss"] = r.cal_loss;
  j["val_loss"] = r.val_loss;
  j["final_lr"] = r.final_lr;
  j["stop_reason"] = stop_reason_name(r.stop_reason);
  return j.dump(2);
}

// ------------------------------------------------- explicit instantiations

template struct Dense<float>;
template struct Dense<double>;
template struct ParamSet<float>;
template struct ParamSet<double>;
template struct Model<float>;
template struct Model<double>;

template Model<float> build_model<float>(const HyperConfig&, int, std::uint64_t,
                                         const std::vector<int>*);
template Model<double> build_model<double>(const HyperConfig&, int, std::uint64_t,
                                           const std::vector<int>*);
template std::vector<float> forward<float>(const Model<float>&, const Matrix<float>&);
template std::vector<double> forward<double>(const Model<double>&, const Matrix<double>&);
template LossGrads<float> loss_and_grads<float>(const Model<float>&, const Matrix<float>&,
                                                const std::vector<float>&, double);
template LossGrads<double> loss_and_grads<double>(const Model<double>&, const Matrix<double>&,
                                                  const std::vector<double>&, double);
template AdamState<float> make_adam_state<float>(const Model<float>&);
template AdamState<double> make_adam_state<double>(const Model<double>&);
template void adam_step<float>(ParamSet<float>&, const ParamSet<float>&, AdamState<float>&,
                               double);
template void adam_step<double>(ParamSet<double>&, const ParamSet<double>&, AdamState<double>&,
                                double);
template TrainResult<float> train<float>(const HyperConfig&, const Matrix<float>&,
                                         const std::vector<float>&, const Matrix<float>&,
                                         const std::vector<float>&, const TrainSchedule&,
                                         std::uint64_t, const std::vector<int>*);
template TrainResult<double> train<double>(const HyperConfig&, const Matrix<double>&,
                                           const std::vector<double>&, const Matrix<double>&,
                                           const std::vector<double>&, const TrainSchedule&,
                                           std::uint64_t, const std::vector<int>*);
template std::vector<double> predict<float>(const Model<float>&, const Matrix<float>&,
                                            const data::StandardizeStats&);
template std::vector<double> predict<double>(const Model<double>&, const Matrix<double>&,
                                             const data::StandardizeStats&);
template void save_weights<float>(const Model<float>&, const std::string&);
template void save_weights<double>(const Model<double>&, const std::string&);
template Model<float> load_weights<float>(const std::string&);
template Model<double> load_weights<double>(const std::string&);

}  // namespace spectune::nnet
