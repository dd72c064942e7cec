#include "rknet/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace rknet {

Vector softmax(const Vector& z) {
  Vector h(z.size());
  double zmax = z[0];
  for (double v : z) zmax = std::max(zmax, v);
  double sum = 0.0;
  for (size_t k = 0; k < z.size(); ++k) {
    h[k] = std::exp(z[k] - zmax);
    sum += h[k];
  }
  for (double& v : h) v /= sum;
  return h;
}

int classify(const ClassifierHead& head, const Vector& y) {
  const Vector logits = matvec(head.w, y);
  int best = 0;
  for (size_t k = 1; k < logits.size(); ++k)
    if (logits[k] + head.mu[k] > logits[best] + head.mu[best]) best = static_cast<int>(k);
  return best;
}

double cross_entropy(const ClassifierHead& head, const Vector& y, const Vector& c) {
  Vector z = matvec(head.w, y);
  axpy(1.0, head.mu, z);
  const Vector h = softmax(z);
  double cost = 0.0;
  for (size_t k = 0; k < h.size(); ++k)
    if (c[k] != 0.0) cost -= c[k] * std::log(std::max(h[k], 1e-300));
  return cost;
}

HeadGrads head_grads(const ClassifierHead& head, const Vector& y, const Vector& c) {
  Vector z = matvec(head.w, y);
  axpy(1.0, head.mu, z);
  Vector r = softmax(z);
  axpy(-1.0, c, r);
  HeadGrads g;
  g.dw = outer(r, y);
  g.dmu = r;
  g.dy = matvec_t(head.w, r);
  return g;
}

AdamState AdamState::init(const ModelParams& params, double lr, double beta1, double beta2,
                          double eps) {
  AdamState s;
  s.m = ParamGrads::zeros_like(params);
  s.v = ParamGrads::zeros_like(params);
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.eps = eps;
  return s;
}

namespace {

void adam_update(double* p, double* m, double* v, const double* g, size_t n, const AdamState& s,
                 double corr1, double corr2) {
  for (size_t i = 0; i < n; ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    const double mhat = m[i] / corr1;
    const double vhat = v[i] / corr2;
    p[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
  }
}

}  // namespace

void adam_step(AdamState& state, ModelParams& params, const ParamGrads& grads) {
  if (grads.dk.size() != params.layers.size()) throw ShapeError("adam_step: gradient shape mismatch");
  state.step += 1;
  const double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (size_t l = 0; l < params.layers.size(); ++l) {
    adam_update(params.layers[l].k.data.data(), state.m.dk[l].data.data(),
                state.v.dk[l].data.data(), grads.dk[l].data.data(), grads.dk[l].data.size(), state,
                corr1, corr2);
    adam_update(params.layers[l].b.data(), state.m.db[l].data(), state.v.db[l].data(),
                grads.db[l].data(), grads.db[l].size(), state, corr1, corr2);
  }
  adam_update(params.head.w.data.data(), state.m.dw.data.data(), state.v.dw.data.data(),
              grads.dw.data.data(), grads.dw.data.size(), state, corr1, corr2);
  adam_update(params.head.mu.data(), state.m.dmu.data(), state.v.dmu.data(), grads.dmu.data(),
              grads.dmu.size(), state, corr1, corr2);
}

EvalResult evaluate(const ModelParams& m, const LabeledDataset& ds) {
  if (ds.size() == 0) throw DataError("evaluate: empty dataset");
  if (ds.dim > m.width) throw ShapeError("evaluate: dataset dimension exceeds model width");
  const int d_star = m.width - ds.dim;
  EvalResult r;
  int correct = 0;
  Vector y;
  for (int i = 0; i < ds.size(); ++i) {
    const Vector x_hat = augment(ds.samples[i], d_star);
    forward_output_into(m, x_hat, y);
    if (classify(m.head, y) == ds.label_index(i)) ++correct;
    r.cost += cross_entropy(m.head, y, ds.labels[i]);
  }
  r.accuracy = 100.0 * correct / ds.size();
  r.cost /= ds.size();
  return r;
}

Metrics train(ModelParams& model, const SplitDataset& data, const TrainConfig& cfg,
              const std::function<void(const EpochMetrics&)>& on_epoch) {
  if (data.train.size() == 0 || data.val.size() == 0)
    throw DataError("train: empty train or validation split");
  if (cfg.batch_size < 1) throw DataError("train: batch size must be >= 1");
  const int d_star = model.width - data.train.dim;
  if (d_star < 0) throw ShapeError("train: dataset dimension exceeds model width");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto record = [&](int epoch) {
    EpochMetrics em;
    em.epoch = epoch;
    const EvalResult tr = evaluate(model, data.train);
    const EvalResult va = evaluate(model, data.val);
    em.train_acc = tr.accuracy;
    em.train_cost = tr.cost;
    em.val_acc = va.accuracy;
    em.val_cost = va.cost;
    em.seconds = elapsed();
    return em;
  };

  Metrics metrics;
  metrics.push_back(record(0));
  if (on_epoch) on_epoch(metrics.back());

  Rng rng(derive_seed(cfg.seed, 0x7261));
  AdamState adam = AdamState::init(model, cfg.lr, cfg.beta1, cfg.beta2, cfg.eps);
  ParamGrads grads = ParamGrads::zeros_like(model);
  std::vector<int> order(data.train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  ForwardTrace trace;
  double best_val_cost = metrics.back().val_cost;
  int stale_epochs = 0;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<size_t>(rng.next_u64() % i)]);

    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      grads.set_zero();
      double batch_cost = 0.0;
      for (size_t bi = start; bi < end; ++bi) {
        const int idx = order[bi];
        const Vector x_hat = augment(data.train.samples[idx], d_star);
        forward_into(model, x_hat, trace);
        const Vector& y_out = trace.y.back();
        const Vector& label = data.train.labels[idx];
        batch_cost += scale * cross_entropy(model.head, y_out, label);
        HeadGrads hg = head_grads(model.head, y_out, label);
        add_outer(grads.dw, scale, hg.dmu, y_out);  // dW = r y^T with r = dmu
        axpy(scale, hg.dmu, grads.dmu);
        if (model.arch == Arch::standard) {
          accumulate_standard_backprop(model, trace, hg.dy, scale, grads);
        } else {
          const AdjointTrace adj = adjoint_sweep(model, trace, hg.dy);
          accumulate_param_grads(model, trace, adj, scale, grads);
        }
      }
      if (!std::isfinite(batch_cost))
        throw NumericError("train: non-finite cost in epoch " + std::to_string(epoch) +
                           " at sample offset " + std::to_string(start));
      adam_step(adam, model, grads);
    }

    metrics.push_back(record(epoch));
    if (on_epoch) on_epoch(metrics.back());

    if (cfg.early_stopping) {
      if (metrics.back().val_cost < best_val_cost - 1e-12) {
        best_val_cost = metrics.back().val_cost;
        stale_epochs = 0;
      } else if (++stale_epochs >= cfg.patience) {
        break;
      }
    }
  }
  return metrics;
}

}  // namespace rknet
