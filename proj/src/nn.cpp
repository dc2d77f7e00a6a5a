#include "gumorph/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gumorph/error.hpp"
#include "gumorph/rng.hpp"

namespace gumorph::nn {

namespace {

constexpr std::array<const char*, 4> kGateNames = {"i", "f", "c", "o"};
constexpr std::uint64_t kShuffleSalt = 0x9E3779B97F4A7C15ULL;

// Activations of one direction over a sequence, in processing order.
struct DirTrace {
  std::size_t steps = 0;
  std::size_t in_dim = 0;
  std::size_t hid = 0;
  std::vector<int> ids;
  std::vector<double> x;     // steps x in_dim
  std::vector<double> h;     // (steps + 1) x hid, row 0 is the initial state
  std::vector<double> c;     // (steps + 1) x hid
  std::array<std::vector<double>, 4> gate;  // steps x hid, post-activation
  std::vector<double> tanh_c;  // steps x hid

  const double* h_at(std::size_t s) const { return h.data() + s * hid; }
  const double* c_at(std::size_t s) const { return c.data() + s * hid; }
};

struct Trace {
  DirTrace fwd;
  DirTrace bwd;
  std::size_t len = 0;
  std::size_t hid = 0;
  // Encoder output for position t: [fwd state at step t, bwd state at step len-1-t].
  const double* fwd_state(std::size_t t) const { return fwd.h_at(t + 1); }
  const double* bwd_state(std::size_t t) const { return bwd.h_at(len - t); }
};

// a[q][j] = b[q][j] + sum_k x[k] W[q][k][j] + sum_k h[k] U[q][k][j], then
// activations and the state update.
void cell_forward(const LstmWeights& w, const double* x, const double* h_prev, const double* c_prev,
                  std::array<double*, 4> gate, double* c, double* tanh_c, double* h) {
  const std::size_t in_dim = w.input_dim();
  const std::size_t hid = w.hidden_dim();
  for (std::size_t q = 0; q < 4; ++q) {
    double* a = gate[q];
    const double* bq = w.b[q].data.data();
    std::copy(bq, bq + hid, a);
    const double* Wq = w.W[q].data.data();
    for (std::size_t k = 0; k < in_dim; ++k) {
      const double xk = x[k];
      const double* row = Wq + k * hid;
      for (std::size_t j = 0; j < hid; ++j) a[j] += xk * row[j];
    }
    const double* Uq = w.U[q].data.data();
    for (std::size_t k = 0; k < hid; ++k) {
      const double hk = h_prev[k];
      const double* row = Uq + k * hid;
      for (std::size_t j = 0; j < hid; ++j) a[j] += hk * row[j];
    }
  }
  for (std::size_t j = 0; j < hid; ++j) {
    gate[kInput][j] = sigmoid(gate[kInput][j]);
    gate[kForget][j] = sigmoid(gate[kForget][j]);
    gate[kOutput][j] = sigmoid(gate[kOutput][j]);
    gate[kCell][j] = std::tanh(gate[kCell][j]);
    c[j] = gate[kForget][j] * c_prev[j] + gate[kInput][j] * gate[kCell][j];
    tanh_c[j] = std::tanh(c[j]);
    h[j] = gate[kOutput][j] * tanh_c[j];
  }
}

void check_ids(const ModelParams& params, std::span<const int> ids) {
  const auto vocab_rows = params.weights.embedding.rows();
  for (const int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_rows) {
      throw ShapeMismatch("token id " + std::to_string(id) + " outside embedding table");
    }
  }
}

DirTrace run_direction(const LstmWeights& w, const Tensor& embedding, std::span<const int> ids, bool reverse) {
  DirTrace tr;
  tr.steps = ids.size();
  tr.in_dim = w.input_dim();
  tr.hid = w.hidden_dim();
  tr.ids.resize(tr.steps);
  tr.x.resize(tr.steps * tr.in_dim);
  tr.h.assign((tr.steps + 1) * tr.hid, 0.0);
  tr.c.assign((tr.steps + 1) * tr.hid, 0.0);
  for (auto& g : tr.gate) g.resize(tr.steps * tr.hid);
  tr.tanh_c.resize(tr.steps * tr.hid);
  for (std::size_t s = 0; s < tr.steps; ++s) {
    const int id = reverse ? ids[tr.steps - 1 - s] : ids[s];
    tr.ids[s] = id;
    const double* e = embedding.data.data() + static_cast<std::size_t>(id) * tr.in_dim;
    std::copy(e, e + tr.in_dim, tr.x.data() + s * tr.in_dim);
    std::array<double*, 4> gate{};
    for (std::size_t q = 0; q < 4; ++q) gate[q] = tr.gate[q].data() + s * tr.hid;
    cell_forward(w, tr.x.data() + s * tr.in_dim, tr.h.data() + s * tr.hid, tr.c.data() + s * tr.hid, gate,
                 tr.c.data() + (s + 1) * tr.hid, tr.tanh_c.data() + s * tr.hid, tr.h.data() + (s + 1) * tr.hid);
  }
  return tr;
}

Trace encode(const ModelParams& params, std::span<const int> ids) {
  check_ids(params, ids);
  Trace t;
  t.len = ids.size();
  t.hid = params.hyper.hidden_dim;
  t.fwd = run_direction(params.weights.fwd, params.weights.embedding, ids, false);
  t.bwd = run_direction(params.weights.bwd, params.weights.embedding, ids, true);
  return t;
}

// Backpropagation through time for one direction. dh_ext holds the gradient
// arriving at each step's hidden state from the head (steps x hid).
void direction_backward(const LstmWeights& w, const DirTrace& tr, const std::vector<double>& dh_ext,
                        LstmWeights& gw, Tensor& g_embedding) {
  const std::size_t hid = tr.hid;
  const std::size_t in_dim = tr.in_dim;
  std::vector<double> dh(hid), dc(hid), dh_next(hid, 0.0), dc_next(hid, 0.0), dx(in_dim);
  std::array<std::vector<double>, 4> da;
  for (auto& v : da) v.resize(hid);

  for (std::size_t s = tr.steps; s-- > 0;) {
    const double* ig = tr.gate[kInput].data() + s * hid;
    const double* fg = tr.gate[kForget].data() + s * hid;
    const double* gg = tr.gate[kCell].data() + s * hid;
    const double* og = tr.gate[kOutput].data() + s * hid;
    const double* tc = tr.tanh_c.data() + s * hid;
    const double* c_prev = tr.c_at(s);
    const double* h_prev = tr.h_at(s);
    const double* x = tr.x.data() + s * in_dim;

    for (std::size_t j = 0; j < hid; ++j) {
      dh[j] = dh_ext[s * hid + j] + dh_next[j];
      dc[j] = dc_next[j] + dh[j] * og[j] * (1.0 - tc[j] * tc[j]);
      da[kOutput][j] = dh[j] * tc[j] * og[j] * (1.0 - og[j]);
      da[kInput][j] = dc[j] * gg[j] * ig[j] * (1.0 - ig[j]);
      da[kForget][j] = dc[j] * c_prev[j] * fg[j] * (1.0 - fg[j]);
      da[kCell][j] = dc[j] * ig[j] * (1.0 - gg[j] * gg[j]);
      dc_next[j] = dc[j] * fg[j];
    }

    std::fill(dx.begin(), dx.end(), 0.0);
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (std::size_t q = 0; q < 4; ++q) {
      const double* a = da[q].data();
      double* gb = gw.b[q].data.data();
      for (std::size_t j = 0; j < hid; ++j) gb[j] += a[j];

      const double* Wq = w.W[q].data.data();
      double* gW = gw.W[q].data.data();
      for (std::size_t k = 0; k < in_dim; ++k) {
        const double xk = x[k];
        const double* row = Wq + k * hid;
        double* grow = gW + k * hid;
        double acc = 0.0;
        for (std::size_t j = 0; j < hid; ++j) {
          grow[j] += xk * a[j];
          acc += row[j] * a[j];
        }
        dx[k] += acc;
      }

      const double* Uq = w.U[q].data.data();
      double* gU = gw.U[q].data.data();
      for (std::size_t k = 0; k < hid; ++k) {
        const double hk = h_prev[k];
        const double* row = Uq + k * hid;
        double* grow = gU + k * hid;
        double acc = 0.0;
        for (std::size_t j = 0; j < hid; ++j) {
          grow[j] += hk * a[j];
          acc += row[j] * a[j];
        }
        dh_next[k] += acc;
      }
    }

    double* erow = g_embedding.data.data() + static_cast<std::size_t>(tr.ids[s]) * in_dim;
    for (std::size_t k = 0; k < in_dim; ++k) erow[k] += dx[k];
  }
}

double bce_term(double p, std::uint8_t y) {
  const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return y ? -std::log(pc) : -std::log(1.0 - pc);
}

// Summed (unscaled) loss of one sequence. When grads is non-null the gradient
// of scale * loss is accumulated into it.
double row_loss(const ModelParams& params, std::span<const int> ids, std::span<const std::uint8_t> bits, int label,
                double scale, ParamSet* grads) {
  if (ids.empty()) return 0.0;
  const Trace tr = encode(params, ids);
  const std::size_t hid = tr.hid;
  const std::size_t T = tr.len;
  const ParamSet& w = params.weights;
  const std::size_t outputs = params.outputs;

  // Gradients on each direction's hidden states, in that direction's step order.
  std::vector<double> dh_fwd, dh_bwd;
  if (grads) {
    dh_fwd.assign(T * hid, 0.0);
    dh_bwd.assign(T * hid, 0.0);
  }

  double loss = 0.0;
  if (params.head == Head::Boundary) {
    if (bits.size() != T) throw ShapeMismatch("boundary targets do not match sequence length");
    const double* wcol = w.out_w.data.data();  // 2*hid x 1
    for (std::size_t t = 0; t < T; ++t) {
      const double* hf = tr.fwd_state(t);
      const double* hb = tr.bwd_state(t);
      double z = w.out_b.data[0];
      for (std::size_t j = 0; j < hid; ++j) z += hf[j] * wcol[j] + hb[j] * wcol[hid + j];
      const double p = sigmoid(z);
      loss += bce_term(p, bits[t]);
      if (!grads) continue;
      const bool clamped = p < kProbClamp || p > 1.0 - kProbClamp;
      const double dz = clamped ? 0.0 : scale * (p - static_cast<double>(bits[t]));
      grads->out_b.data[0] += dz;
      double* gcol = grads->out_w.data.data();
      double* dfw = dh_fwd.data() + t * hid;
      double* dbw = dh_bwd.data() + (T - 1 - t) * hid;
      for (std::size_t j = 0; j < hid; ++j) {
        gcol[j] += dz * hf[j];
        gcol[hid + j] += dz * hb[j];
        dfw[j] += dz * wcol[j];
        dbw[j] += dz * wcol[hid + j];
      }
    }
  } else {
    if (label < 0 || static_cast<std::size_t>(label) >= outputs) throw ShapeMismatch("class target out of range");
    std::vector<double> pooled(2 * hid);
    std::copy(tr.fwd_state(T - 1), tr.fwd_state(T - 1) + hid, pooled.begin());
    std::copy(tr.bwd_state(0), tr.bwd_state(0) + hid, pooled.begin() + static_cast<std::ptrdiff_t>(hid));
    std::vector<double> logits(w.out_b.data);
    for (std::size_t k = 0; k < 2 * hid; ++k) {
      const double* row = w.out_w.data.data() + k * outputs;
      for (std::size_t c = 0; c < outputs; ++c) logits[c] += pooled[k] * row[c];
    }
    const auto p = softmax(logits);
    const auto y = static_cast<std::size_t>(label);
    loss = -std::log(std::max(p[y], kProbClamp));
    if (grads && p[y] >= kProbClamp) {
      std::vector<double> dlogit(outputs);
      for (std::size_t c = 0; c < outputs; ++c) dlogit[c] = scale * (p[c] - (c == y ? 1.0 : 0.0));
      for (std::size_t c = 0; c < outputs; ++c) grads->out_b.data[c] += dlogit[c];
      double* dfw = dh_fwd.data() + (T - 1) * hid;  // forward state at its last step
      double* dbw = dh_bwd.data() + (T - 1) * hid;  // backward state at its last step
      for (std::size_t k = 0; k < 2 * hid; ++k) {
        const double* row = w.out_w.data.data() + k * outputs;
        double* grow = grads->out_w.data.data() + k * outputs;
        double acc = 0.0;
        for (std::size_t c = 0; c < outputs; ++c) {
          grow[c] += pooled[k] * dlogit[c];
          acc += row[c] * dlogit[c];
        }
        if (k < hid) {
          dfw[k] += acc;
        } else {
          dbw[k - hid] += acc;
        }
      }
    }
  }

  if (grads) {
    direction_backward(w.fwd, tr.fwd, dh_fwd, grads->fwd, grads->embedding);
    direction_backward(w.bwd, tr.bwd, dh_bwd, grads->bwd, grads->embedding);
  }
  return loss;
}

double batch_scale(const ModelParams& params, const Batch& batch) {
  if (params.head == Head::Boundary) {
    const auto positions = std::accumulate(batch.lengths.begin(), batch.lengths.end(), std::size_t{0});
    return positions == 0 ? 0.0 : 1.0 / static_cast<double>(positions);
  }
  return batch.rows() == 0 ? 0.0 : 1.0 / static_cast<double>(batch.rows());
}

double batch_loss_impl(const ModelParams& params, const Batch& batch, ParamSet* grads) {
  const double scale = batch_scale(params, batch);
  double total = 0.0;
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    const int label = batch.labels.empty() ? -1 : batch.labels[r];
    total += row_loss(params, batch.row_ids(r), batch.row_bits(r), label, scale, grads);
  }
  return total * scale;
}

template <typename F>
void for_each_pair(ParamSet& a, const ParamSet& b, F&& f) {
  auto na = a.named();
  const auto nb = b.named();
  for (std::size_t i = 0; i < na.size(); ++i) f(*na[i].second, *nb[i].second);
}

Tensor glorot(Rng& rng, std::size_t rows, std::size_t cols) {
  Tensor t = Tensor::zeros({rows, cols});
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (auto& v : t.data) v = rng.uniform(-limit, limit);
  return t;
}

LstmWeights lstm_shapes(std::size_t in_dim, std::size_t hid) {
  LstmWeights w;
  for (std::size_t q = 0; q < 4; ++q) {
    w.W[q] = Tensor::zeros({in_dim, hid});
    w.U[q] = Tensor::zeros({hid, hid});
    w.b[q] = Tensor::zeros({hid});
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  Tensor t;
  const auto n = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  t.shape = std::move(shape);
  t.data.assign(n, 0.0);
  return t;
}

std::vector<std::pair<std::string, Tensor*>> ParamSet::named() {
  std::vector<std::pair<std::string, Tensor*>> out;
  out.emplace_back("embedding", &embedding);
  for (auto [prefix, dir] : {std::pair<const char*, LstmWeights*>{"fwd", &fwd}, {"bwd", &bwd}}) {
    for (std::size_t q = 0; q < 4; ++q) {
      out.emplace_back(std::string(prefix) + ".W_" + kGateNames[q], &dir->W[q]);
      out.emplace_back(std::string(prefix) + ".U_" + kGateNames[q], &dir->U[q]);
      out.emplace_back(std::string(prefix) + ".b_" + kGateNames[q], &dir->b[q]);
    }
  }
  out.emplace_back("out_w", &out_w);
  out.emplace_back("out_b", &out_b);
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> ParamSet::named() const {
  auto mut = const_cast<ParamSet*>(this)->named();
  std::vector<std::pair<std::string, const Tensor*>> out;
  out.reserve(mut.size());
  for (auto& [name, t] : mut) out.emplace_back(std::move(name), t);
  return out;
}

ParamSet ParamSet::zeros_like() const {
  ParamSet z = *this;
  for (auto& [name, t] : z.named()) std::fill(t->data.begin(), t->data.end(), 0.0);
  return z;
}

ModelParams ModelParams::zeros(Head head, Vocab vocab, std::size_t outputs, const Hyperparams& hyper) {
  if (head == Head::Boundary) outputs = 1;
  if (outputs == 0 || hyper.embed_dim == 0 || hyper.hidden_dim == 0) {
    throw ShapeMismatch("model dimensions must be positive");
  }
  ModelParams m;
  m.head = head;
  m.hyper = hyper;
  m.outputs = outputs;
  m.weights.embedding = Tensor::zeros({vocab.size(), hyper.embed_dim});
  m.weights.fwd = lstm_shapes(hyper.embed_dim, hyper.hidden_dim);
  m.weights.bwd = lstm_shapes(hyper.embed_dim, hyper.hidden_dim);
  m.weights.out_w = Tensor::zeros({2 * hyper.hidden_dim, outputs});
  m.weights.out_b = Tensor::zeros({outputs});
  m.vocab = std::move(vocab);
  return m;
}

ModelParams ModelParams::init(Head head, Vocab vocab, std::size_t outputs, const Hyperparams& hyper) {
  ModelParams m = zeros(head, std::move(vocab), outputs, hyper);
  Rng rng(hyper.seed);
  for (auto& [name, t] : m.weights.named()) {
    if (t->shape.size() == 2) *t = glorot(rng, t->shape[0], t->shape[1]);
  }
  std::fill(m.weights.fwd.b[kForget].data.begin(), m.weights.fwd.b[kForget].data.end(), 1.0);
  std::fill(m.weights.bwd.b[kForget].data.begin(), m.weights.bwd.b[kForget].data.end(), 1.0);
  return m;
}

void ModelParams::validate() const {
  const ModelParams ref = zeros(head, vocab, outputs, hyper);
  const auto expect = ref.weights.named();
  const auto got = weights.named();
  for (std::size_t i = 0; i < expect.size(); ++i) {
    if (expect[i].second->shape != got[i].second->shape) {
      throw ShapeMismatch("tensor " + expect[i].first + " has the wrong shape");
    }
    if (got[i].second->data.size() != expect[i].second->data.size()) {
      throw ShapeMismatch("tensor " + expect[i].first + " has the wrong element count");
    }
  }
}

CellOutput lstm_cell_step(const LstmWeights& w, std::span<const double> x, std::span<const double> h_prev,
                          std::span<const double> c_prev) {
  const std::size_t hid = w.hidden_dim();
  if (x.size() != w.input_dim() || h_prev.size() != hid || c_prev.size() != hid) {
    throw ShapeMismatch("lstm_cell_step: input or state has the wrong size");
  }
  std::array<std::vector<double>, 4> gate;
  for (auto& g : gate) g.resize(hid);
  CellOutput out{std::vector<double>(hid), std::vector<double>(hid)};
  std::vector<double> tanh_c(hid);
  cell_forward(w, x.data(), h_prev.data(), c_prev.data(),
               {gate[0].data(), gate[1].data(), gate[2].data(), gate[3].data()}, out.c.data(), tanh_c.data(),
               out.h.data());
  return out;
}

std::vector<std::vector<double>> bilstm_forward(const ModelParams& params, std::span<const int> ids) {
  const Trace tr = encode(params, ids);
  std::vector<std::vector<double>> states(tr.len, std::vector<double>(2 * tr.hid));
  for (std::size_t t = 0; t < tr.len; ++t) {
    std::copy(tr.fwd_state(t), tr.fwd_state(t) + tr.hid, states[t].begin());
    std::copy(tr.bwd_state(t), tr.bwd_state(t) + tr.hid, states[t].begin() + static_cast<std::ptrdiff_t>(tr.hid));
  }
  return states;
}

std::vector<double> boundary_head(const ModelParams& params, std::span<const std::vector<double>> states) {
  const auto& w = params.weights;
  if (w.out_w.cols() != 1) throw ShapeMismatch("boundary head needs a single output column");
  std::vector<double> probs;
  probs.reserve(states.size());
  for (const auto& s : states) {
    if (s.size() != w.out_w.rows()) throw ShapeMismatch("state width does not match dense layer");
    double z = w.out_b.data[0];
    for (std::size_t k = 0; k < s.size(); ++k) z += s[k] * w.out_w.data[k];
    probs.push_back(sigmoid(z));
  }
  return probs;
}

std::vector<double> class_logits(const ModelParams& params, std::span<const std::vector<double>> states) {
  if (states.empty()) throw PreconditionViolation("class head needs a nonempty sequence");
  const auto& w = params.weights;
  const std::size_t two_h = w.out_w.rows();
  const std::size_t hid = two_h / 2;
  if (states.front().size() != two_h) throw ShapeMismatch("state width does not match dense layer");
  std::vector<double> pooled(two_h);
  std::copy(states.back().begin(), states.back().begin() + static_cast<std::ptrdiff_t>(hid), pooled.begin());
  std::copy(states.front().begin() + static_cast<std::ptrdiff_t>(hid), states.front().end(),
            pooled.begin() + static_cast<std::ptrdiff_t>(hid));
  const std::size_t outputs = w.out_w.cols();
  std::vector<double> logits(w.out_b.data);
  for (std::size_t k = 0; k < two_h; ++k) {
    for (std::size_t c = 0; c < outputs; ++c) logits[c] += pooled[k] * w.out_w.data[k * outputs + c];
  }
  return logits;
}

std::vector<double> class_head(const ModelParams& params, std::span<const std::vector<double>> states) {
  return softmax(class_logits(params, states));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double mx = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (auto& v : p) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

double bce_loss(std::span<const double> p, std::span<const std::uint8_t> y) {
  if (p.size() != y.size()) throw ShapeMismatch("bce_loss: size mismatch");
  if (p.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += bce_term(p[i], y[i]);
  return total / static_cast<double>(p.size());
}

double cce_loss(std::span<const double> p, int y) {
  if (y < 0 || static_cast<std::size_t>(y) >= p.size()) throw ShapeMismatch("cce_loss: class out of range");
  return -std::log(std::max(p[static_cast<std::size_t>(y)], kProbClamp));
}

Batch make_batch(std::span<const Example> examples) {
  Batch b;
  for (const auto& e : examples) b.max_len = std::max(b.max_len, e.ids.size());
  b.ids.assign(examples.size() * b.max_len, Vocab::kPad);
  b.bits.assign(examples.size() * b.max_len, 0);
  for (std::size_t r = 0; r < examples.size(); ++r) {
    const auto& e = examples[r];
    std::copy(e.ids.begin(), e.ids.end(), b.ids.begin() + static_cast<std::ptrdiff_t>(r * b.max_len));
    if (!e.bits.empty()) {
      if (e.bits.size() != e.ids.size()) throw ShapeMismatch("example bits do not match its ids");
      std::copy(e.bits.begin(), e.bits.end(), b.bits.begin() + static_cast<std::ptrdiff_t>(r * b.max_len));
    }
    b.lengths.push_back(e.ids.size());
    b.labels.push_back(e.label);
  }
  return b;
}

double batch_loss(const ModelParams& params, const Batch& batch) { return batch_loss_impl(params, batch, nullptr); }

double loss_and_gradient(const ModelParams& params, const Batch& batch, ParamSet& grads) {
  auto current = grads.named();
  const auto wanted = params.weights.named();
  for (std::size_t i = 0; i < wanted.size(); ++i) {
    if (current[i].second->shape != wanted[i].second->shape) {
      grads = params.weights.zeros_like();
      break;
    }
  }
  for (auto& [name, t] : grads.named()) std::fill(t->data.begin(), t->data.end(), 0.0);
  return batch_loss_impl(params, batch, &grads);
}

GradCheckResult grad_check(ModelParams params, const Batch& batch, double eps, bool corrupt) {
  ParamSet grads = params.weights.zeros_like();
  loss_and_gradient(params, batch, grads);
  if (corrupt) grads.out_b.data[0] += 1e-2;

  GradCheckResult res;
  auto theta = params.weights.named();
  const auto analytic = std::as_const(grads).named();
  for (std::size_t n = 0; n < theta.size(); ++n) {
    auto& values = theta[n].second->data;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double up = batch_loss(params, batch);
      values[i] = saved - eps;
      const double down = batch_loss(params, batch);
      values[i] = saved;
      const double num = (up - down) / (2.0 * eps);
      const double a = analytic[n].second->data[i];
      const double rel = std::abs(a - num) / std::max({std::abs(a), std::abs(num), 1e-8});
      ++res.components;
      if (rel > res.max_rel_error || res.worst_param.empty()) {
        res.max_rel_error = rel;
        res.worst_param = theta[n].first;
        res.worst_index = i;
        res.analytic = a;
        res.numeric = num;
      }
    }
  }
  return res;
}

AdamState AdamState::for_params(const ParamSet& params, const AdamConfig& config) {
  AdamState s;
  s.config = config;
  s.m = params.zeros_like();
  s.v = params.zeros_like();
  return s;
}

void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state) {
  ++state.step;
  const auto& cfg = state.config;
  const double t = static_cast<double>(state.step);
  const double m_corr = 1.0 - std::pow(cfg.beta1, t);
  const double v_corr = 1.0 - std::pow(cfg.beta2, t);
  auto p = params.named();
  const auto g = grads.named();
  auto m = state.m.named();
  auto v = state.v.named();
  for (std::size_t n = 0; n < p.size(); ++n) {
    auto& pd = p[n].second->data;
    const auto& gd = g[n].second->data;
    auto& md = m[n].second->data;
    auto& vd = v[n].second->data;
    if (pd.size() != gd.size()) throw ShapeMismatch("adam_step: gradient shape differs for " + p[n].first);
    for (std::size_t i = 0; i < pd.size(); ++i) {
      md[i] = cfg.beta1 * md[i] + (1.0 - cfg.beta1) * gd[i];
      vd[i] = cfg.beta2 * vd[i] + (1.0 - cfg.beta2) * gd[i] * gd[i];
      const double m_hat = md[i] / m_corr;
      const double v_hat = vd[i] / v_corr;
      pd[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

double clip_global_norm(ParamSet& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& [name, t] : std::as_const(grads).named()) {
    for (const double v : t->data) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (auto& [name, t] : grads.named()) {
      for (auto& v : t->data) v *= s;
    }
  }
  return norm;
}

bool all_finite(const ParamSet& params) {
  for (const auto& [name, t] : params.named()) {
    for (const double v : t->data) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

TrainLog fit(ModelParams& params, std::span<const Example> data, const EpochHook& hook) {
  if (data.empty()) throw EmptyTrainingSet("no training examples");
  const auto& hp = params.hyper;
  if (hp.batch == 0) throw PreconditionViolation("batch size must be positive");
  Rng shuffle_rng(hp.seed ^ kShuffleSalt);
  AdamState adam = AdamState::for_params(params.weights, {hp.lr});
  ParamSet grads = params.weights.zeros_like();
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Example> chunk;

  TrainLog log;
  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += hp.batch) {
      const std::size_t stop = std::min(order.size(), start + hp.batch);
      chunk.clear();
      for (std::size_t i = start; i < stop; ++i) chunk.push_back(data[order[i]]);
      const Batch batch = make_batch(chunk);
      const double loss = loss_and_gradient(params, batch, grads);
      if (!std::isfinite(loss)) throw NumericError("non-finite loss in epoch " + std::to_string(epoch));
      clip_global_norm(grads, hp.clip_norm);
      adam_step(params.weights, grads, adam);
      if (!all_finite(params.weights)) throw NumericError("non-finite parameter in epoch " + std::to_string(epoch));
      weighted += loss * static_cast<double>(stop - start);
    }
    log.epoch_loss.push_back(weighted / static_cast<double>(data.size()));
    if (hook && !hook(epoch, params)) break;
  }
  return log;
}

}  // namespace gumorph::nn
