#include "swarmdet/cvnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "binio.hpp"
#include "swarmdet/metrics.hpp"
#include "swarmdet/parallel.hpp"
#include "swarmdet/rng.hpp"

namespace swarmdet {

namespace {

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

void check_shapes(const NetworkParams& p) {
  if (p.m == 0 || p.hidden == 0 || p.w1.size() != p.hidden * p.m ||
      p.b1.size() != p.hidden || p.modrelu_bias.size() != p.hidden ||
      p.w2.size() != p.m * p.hidden || p.b2.size() != p.m) {
    throw std::invalid_argument("network parameter shapes are inconsistent");
  }
}

std::span<double> as_real(std::vector<cplx>& v) {
  // std::complex<double> is layout-compatible with double[2]
  return {reinterpret_cast<double*>(v.data()), v.size() * 2};
}

// Shared elementwise Adam kernel; both parameter layouts feed through it.
void adam_update_spans(const std::vector<std::span<double>>& params,
                       const std::vector<std::span<double>>& grads,
                       std::vector<double>& m1, std::vector<double>& m2,
                       std::uint64_t step, double beta1, double beta2, double eps,
                       double lr) {
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  std::size_t idx = 0;
  for (std::size_t g = 0; g < params.size(); ++g) {
    double* pv = params[g].data();
    const double* gv = grads[g].data();
    const std::size_t len = params[g].size();
    for (std::size_t k = 0; k < len; ++k, ++idx) {
      const double grad = gv[k];
      m1[idx] = beta1 * m1[idx] + (1.0 - beta1) * grad;
      m2[idx] = beta2 * m2[idx] + (1.0 - beta2) * grad * grad;
      const double mhat = m1[idx] / bc1;
      const double vhat = m2[idx] / bc2;
      pv[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

}  // namespace

NetworkParams init_params(std::size_t m, std::size_t hidden, std::uint64_t seed) {
  if (m == 0 || hidden == 0) {
    throw std::invalid_argument("network dimensions must be positive");
  }
  NetworkParams p;
  p.m = m;
  p.hidden = hidden;
  p.w1.resize(hidden * m);
  p.b1.assign(hidden, cplx{0.0, 0.0});
  p.modrelu_bias.assign(hidden, 0.0);
  p.w2.resize(m * hidden);
  p.b2.assign(m, 0.0);

  RandomStream rng(seed);
  const double s1 = 1.0 / std::sqrt(2.0 * static_cast<double>(m));
  for (auto& w : p.w1) {
    const auto [re, im] = rng.gaussian_pair();
    w = cplx{s1 * re, s1 * im};
  }
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto& w : p.w2) w = s2 * rng.gaussian();
  return p;
}

cplx modrelu(cplx z, double bias) {
  const double rho = std::abs(z);
  if (rho == 0.0) return {0.0, 0.0};
  const double a = rho + bias;
  if (a <= 0.0) return {0.0, 0.0};
  const double scale = a / rho;
  return {scale * z.real(), scale * z.imag()};
}

void forward(const NetworkParams& p, std::span<const cplx> x, ForwardCache& cache) {
  check_shapes(p);
  if (x.size() != p.m) throw std::invalid_argument("forward: input length != m");

  cache.x.assign(x.begin(), x.end());
  cache.z.resize(p.hidden);
  cache.r.resize(p.hidden);
  cache.y.resize(p.m);

  for (std::size_t h = 0; h < p.hidden; ++h) {
    cplx acc = p.b1[h];
    const cplx* row = &p.w1[h * p.m];
    for (std::size_t j = 0; j < p.m; ++j) acc += row[j] * x[j];
    cache.z[h] = acc;
    cache.r[h] = modrelu(acc, p.modrelu_bias[h]).real();
  }
  for (std::size_t i = 0; i < p.m; ++i) {
    double acc = p.b2[i];
    const double* row = &p.w2[i * p.hidden];
    for (std::size_t h = 0; h < p.hidden; ++h) acc += row[h] * cache.r[h];
    cache.y[i] = sigmoid(acc);
  }
}

void forward(const NetworkParams& p, std::span<const cplxf> x, ForwardCache& cache) {
  forward(p, std::span<const cplx>(widen(x)), cache);
}

double weighted_mse(std::span<const double> y, std::span<const std::uint8_t> labels,
                    double positive_weight) {
  if (y.size() != labels.size()) {
    throw std::invalid_argument("weighted_mse: length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - static_cast<double>(labels[i]);
    acc += (labels[i] ? positive_weight : 1.0) * d * d;
  }
  return acc / static_cast<double>(y.size());
}

Gradients Gradients::zeros_like(const NetworkParams& p) {
  Gradients g;
  g.m = p.m;
  g.hidden = p.hidden;
  g.w1.assign(p.hidden * p.m, cplx{0.0, 0.0});
  g.b1.assign(p.hidden, cplx{0.0, 0.0});
  g.modrelu_bias.assign(p.hidden, 0.0);
  g.w2.assign(p.m * p.hidden, 0.0);
  g.b2.assign(p.m, 0.0);
  return g;
}

void backward(const NetworkParams& p, const ForwardCache& cache,
              std::span<const std::uint8_t> labels, double positive_weight,
              Gradients& out) {
  check_shapes(p);
  const std::size_t m = p.m;
  const std::size_t hidden = p.hidden;
  if (cache.x.size() != m || cache.z.size() != hidden || cache.r.size() != hidden ||
      cache.y.size() != m || labels.size() != m) {
    throw std::invalid_argument("backward: cache/label shapes disagree with params");
  }
  out = Gradients::zeros_like(p);

  // d(loss)/d(pre-sigmoid activation)
  std::vector<double> da(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double w = labels[i] ? positive_weight : 1.0;
    const double dy = (2.0 / static_cast<double>(m)) * w *
                      (cache.y[i] - static_cast<double>(labels[i]));
    da[i] = dy * cache.y[i] * (1.0 - cache.y[i]);
  }

  std::vector<double> dr(hidden, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double a = da[i];
    out.b2[i] = a;
    double* w2g = &out.w2[i * hidden];
    const double* w2row = &p.w2[i * hidden];
    for (std::size_t h = 0; h < hidden; ++h) {
      w2g[h] = a * cache.r[h];
      dr[h] += a * w2row[h];
    }
  }

  for (std::size_t h = 0; h < hidden; ++h) {
    const cplx z = cache.z[h];
    const double zr = z.real();
    const double zi = z.imag();
    const double rho = std::abs(z);
    const double bias = p.modrelu_bias[h];
    if (rho == 0.0 || rho + bias <= 0.0) continue;  // dead unit: zero gradient

    // h_re = (1 + bias/rho) * zr; only a real cotangent dr flows back
    const double invr = 1.0 / rho;
    const double c = bias * invr * invr * invr;
    const double dzr = dr[h] * (1.0 + bias * invr - c * zr * zr);
    const double dzi = dr[h] * (-c * zr * zi);
    out.modrelu_bias[h] = dr[h] * zr * invr;
    out.b1[h] = cplx{dzr, dzi};

    const cplx dz{dzr, dzi};
    cplx* w1g = &out.w1[h * m];
    for (std::size_t j = 0; j < m; ++j) {
      w1g[j] = dz * std::conj(cache.x[j]);
    }
  }
}

std::vector<std::span<double>> param_views(NetworkParams& p) {
  return {as_real(p.w1), as_real(p.b1), std::span<double>(p.modrelu_bias),
          std::span<double>(p.w2), std::span<double>(p.b2)};
}

std::vector<std::span<double>> grad_views(Gradients& g) {
  return {as_real(g.w1), as_real(g.b1), std::span<double>(g.modrelu_bias),
          std::span<double>(g.w2), std::span<double>(g.b2)};
}

std::size_t dof_count(const NetworkParams& p) {
  return 2 * p.w1.size() + 2 * p.b1.size() + p.modrelu_bias.size() + p.w2.size() +
         p.b2.size();
}

AdamState AdamState::for_params(const NetworkParams& p) {
  AdamState s;
  s.m1.assign(dof_count(p), 0.0);
  s.m2.assign(dof_count(p), 0.0);
  return s;
}

void adam_step(AdamState& state, NetworkParams& p, Gradients& g, double lr) {
  if (state.m1.size() != dof_count(p) || state.m2.size() != dof_count(p)) {
    throw std::invalid_argument("adam_step: state does not match parameters");
  }
  const auto pviews = param_views(p);
  const auto gviews = grad_views(g);
  for (std::size_t i = 0; i < pviews.size(); ++i) {
    if (pviews[i].size() != gviews[i].size()) {
      throw std::invalid_argument("adam_step: gradient shapes do not match parameters");
    }
  }
  ++state.step;
  adam_update_spans(pviews, gviews, state.m1, state.m2, state.step, state.beta1,
                    state.beta2, state.epsilon, lr);
}

// ---------------------------------------------------------------------------
// Batched training path. Parameters and activations are kept in planar
// (separate re/im) arrays; every output element is produced by exactly one
// worker with a fixed-order inner reduction, so results do not depend on the
// thread count.
// ---------------------------------------------------------------------------

namespace {

struct Planar {
  std::size_t m = 0, h = 0;
  std::vector<double> w1r, w1i, b1r, b1i, mb, w2, b2;

  static Planar like(std::size_t m, std::size_t h) {
    Planar p;
    p.m = m;
    p.h = h;
    p.w1r.assign(h * m, 0.0);
    p.w1i.assign(h * m, 0.0);
    p.b1r.assign(h, 0.0);
    p.b1i.assign(h, 0.0);
    p.mb.assign(h, 0.0);
    p.w2.assign(m * h, 0.0);
    p.b2.assign(m, 0.0);
    return p;
  }

  void zero() {
    auto clear = [](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); };
    clear(w1r);
    clear(w1i);
    clear(b1r);
    clear(b1i);
    clear(mb);
    clear(w2);
    clear(b2);
  }

  std::vector<std::span<double>> views() {
    return {std::span<double>(w1r), std::span<double>(w1i), std::span<double>(b1r),
            std::span<double>(b1i), std::span<double>(mb), std::span<double>(w2),
            std::span<double>(b2)};
  }

  std::size_t dofs() const { return 2 * h * m + 2 * h + h + m * h + m; }
};

Planar to_planar(const NetworkParams& p) {
  Planar pl = Planar::like(p.m, p.hidden);
  for (std::size_t k = 0; k < p.w1.size(); ++k) {
    pl.w1r[k] = p.w1[k].real();
    pl.w1i[k] = p.w1[k].imag();
  }
  for (std::size_t k = 0; k < p.b1.size(); ++k) {
    pl.b1r[k] = p.b1[k].real();
    pl.b1i[k] = p.b1[k].imag();
  }
  pl.mb = p.modrelu_bias;
  pl.w2 = p.w2;
  pl.b2 = p.b2;
  return pl;
}

NetworkParams from_planar(const Planar& pl) {
  NetworkParams p;
  p.m = pl.m;
  p.hidden = pl.h;
  p.w1.resize(pl.h * pl.m);
  p.b1.resize(pl.h);
  for (std::size_t k = 0; k < p.w1.size(); ++k) p.w1[k] = cplx{pl.w1r[k], pl.w1i[k]};
  for (std::size_t k = 0; k < p.b1.size(); ++k) p.b1[k] = cplx{pl.b1r[k], pl.b1i[k]};
  p.modrelu_bias = pl.mb;
  p.w2 = pl.w2;
  p.b2 = pl.b2;
  return p;
}

struct BatchEngine {
  std::size_t m = 0, h = 0, cap = 0;
  int threads = 0;

  std::vector<double> xr, xi;              // cap x m
  std::vector<double> zr, zi, rr, dr;      // cap x h
  std::vector<double> dzr, dzi, gmbc;      // cap x h
  std::vector<double> y, da;               // cap x m
  std::vector<double> loss;                // cap
  std::vector<const std::uint8_t*> labels;  // cap

  BatchEngine(std::size_t m_, std::size_t h_, std::size_t cap_, int threads_)
      : m(m_), h(h_), cap(cap_), threads(threads_) {
    xr.resize(cap * m);
    xi.resize(cap * m);
    zr.resize(cap * h);
    zi.resize(cap * h);
    rr.resize(cap * h);
    dr.resize(cap * h);
    dzr.resize(cap * h);
    dzi.resize(cap * h);
    gmbc.resize(cap * h);
    y.resize(cap * m);
    da.resize(cap * m);
    loss.resize(cap);
    labels.resize(cap);
  }

  void load(const Dataset& ds, std::span<const std::size_t> idx) {
    parallel_for(0, idx.size(), threads, [&](std::size_t p) {
      const RangeProfile& rp = ds.profiles[idx[p]];
      double* xrp = &xr[p * m];
      double* xip = &xi[p * m];
      for (std::size_t j = 0; j < m; ++j) {
        xrp[j] = static_cast<double>(rp.samples[j].real());
        xip[j] = static_cast<double>(rp.samples[j].imag());
      }
      labels[p] = rp.labels.data();
    });
  }

  void forward(const Planar& P, std::size_t B) {
    parallel_for(0, B, threads, [&](std::size_t p) {
      const double* xrp = &xr[p * m];
      const double* xip = &xi[p * m];
      for (std::size_t u = 0; u < h; ++u) {
        const double* wr = &P.w1r[u * m];
        const double* wi = &P.w1i[u * m];
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          s0 += wr[j] * xrp[j];
          s1 += wi[j] * xip[j];
          s2 += wr[j] * xip[j];
          s3 += wi[j] * xrp[j];
        }
        const double zrv = P.b1r[u] + s0 - s1;
        const double ziv = P.b1i[u] + s2 + s3;
        zr[p * h + u] = zrv;
        zi[p * h + u] = ziv;
        const double rho = std::sqrt(zrv * zrv + ziv * ziv);
        const double act = rho + P.mb[u];
        rr[p * h + u] = (rho > 0.0 && act > 0.0) ? act * (zrv / rho) : 0.0;
      }
      const double* rrow = &rr[p * h];
      for (std::size_t i = 0; i < m; ++i) {
        const double* w2row = &P.w2[i * h];
        double acc = P.b2[i];
        for (std::size_t u = 0; u < h; ++u) acc += w2row[u] * rrow[u];
        y[p * m + i] = sigmoid(acc);
      }
    });
  }

  // Mean loss over the batch; G receives the mean gradients.
  double backward(const Planar& P, std::size_t B, double pos_weight, Planar& G) {
    const double inv_m = 1.0 / static_cast<double>(m);
    parallel_for(0, B, threads, [&](std::size_t p) {
      const std::uint8_t* lab = labels[p];
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double yv = y[p * m + i];
        const double d = yv - static_cast<double>(lab[i]);
        const double w = lab[i] ? pos_weight : 1.0;
        acc += w * d * d;
        da[p * m + i] = 2.0 * inv_m * w * d * yv * (1.0 - yv);
      }
      loss[p] = acc * inv_m;
    });

    G.zero();
    // output layer: rows of w2 (and b2) are disjoint across workers
    parallel_for(0, m, threads, [&](std::size_t i) {
      double* gw2 = &G.w2[i * h];
      double accb = 0.0;
      for (std::size_t p = 0; p < B; ++p) {
        const double a = da[p * m + i];
        accb += a;
        const double* rrow = &rr[p * h];
        for (std::size_t u = 0; u < h; ++u) gw2[u] += a * rrow[u];
      }
      G.b2[i] = accb;
    });

    // dr = w2^T * da, per profile
    parallel_for(0, B, threads, [&](std::size_t p) {
      double* drow = &dr[p * h];
      std::fill(drow, drow + h, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        const double a = da[p * m + i];
        const double* w2row = &P.w2[i * h];
        for (std::size_t u = 0; u < h; ++u) drow[u] += a * w2row[u];
      }
      // through modReLU and the real-part projection
      for (std::size_t u = 0; u < h; ++u) {
        const double zrv = zr[p * h + u];
        const double ziv = zi[p * h + u];
        const double rho = std::sqrt(zrv * zrv + ziv * ziv);
        const double bias = P.mb[u];
        if (rho == 0.0 || rho + bias <= 0.0) {
          dzr[p * h + u] = 0.0;
          dzi[p * h + u] = 0.0;
          gmbc[p * h + u] = 0.0;
          continue;
        }
        const double invr = 1.0 / rho;
        const double c = bias * invr * invr * invr;
        const double drv = drow[u];
        dzr[p * h + u] = drv * (1.0 + bias * invr - c * zrv * zrv);
        dzi[p * h + u] = drv * (-c * zrv * ziv);
        gmbc[p * h + u] = drv * zrv * invr;
      }
    });

    // hidden biases: fixed-order sums over the batch
    parallel_for(0, h, threads, [&](std::size_t u) {
      double s1 = 0.0, s2 = 0.0, s3 = 0.0;
      for (std::size_t p = 0; p < B; ++p) {
        s1 += dzr[p * h + u];
        s2 += dzi[p * h + u];
        s3 += gmbc[p * h + u];
      }
      G.b1r[u] = s1;
      G.b1i[u] = s2;
      G.mb[u] = s3;
    });

    // first layer: grad = dz * conj(x), accumulated row by row
    parallel_for(0, h, threads, [&](std::size_t u) {
      double* gr = &G.w1r[u * m];
      double* gi = &G.w1i[u * m];
      for (std::size_t p = 0; p < B; ++p) {
        const double ar = dzr[p * h + u];
        const double ai = dzi[p * h + u];
        if (ar == 0.0 && ai == 0.0) continue;
        const double* xrp = &xr[p * m];
        const double* xip = &xi[p * m];
        for (std::size_t j = 0; j < m; ++j) {
          gr[j] += ar * xrp[j] + ai * xip[j];
          gi[j] += ai * xrp[j] - ar * xip[j];
        }
      }
    });

    const double inv_b = 1.0 / static_cast<double>(B);
    for (auto view : G.views()) {
      for (double& v : view) v *= inv_b;
    }
    double mean = 0.0;
    for (std::size_t p = 0; p < B; ++p) mean += loss[p];
    return mean * inv_b;
  }
};

void fisher_yates(std::vector<std::size_t>& idx, RandomStream& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

NetworkParams train(const Dataset& train_set, const Dataset* valid, const TrainConfig& cfg,
                    TrainHistory* history) {
  if (train_set.profiles.empty()) {
    throw std::invalid_argument("train: empty training set");
  }
  if (cfg.epochs < 1 || cfg.batch < 1 || cfg.hidden_width < 1 || cfg.lr_half_every < 1) {
    throw std::invalid_argument("train: config counts must be positive");
  }
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    throw std::invalid_argument("train: threshold must lie in (0,1)");
  }
  const std::size_t m = train_set.m;
  for (const auto& p : train_set.profiles) {
    if (p.samples.size() != m || p.labels.size() != m) {
      throw std::invalid_argument("train: inconsistent profile length");
    }
  }
  if (valid && !valid->profiles.empty()) {
    if (valid->m != m) {
      throw std::invalid_argument("train: validation profile length differs");
    }
    for (const auto& p : valid->profiles) {
      if (p.samples.size() != m || p.labels.size() != m) {
        throw std::invalid_argument("train: inconsistent validation profile length");
      }
    }
  }

  const std::size_t hidden = cfg.hidden_width;
  NetworkParams init =
      init_params(m, hidden, derive_seed(cfg.seed, SeedPurpose::init));
  Planar P = to_planar(init);
  Planar G = Planar::like(m, hidden);
  std::vector<double> m1(P.dofs(), 0.0);
  std::vector<double> m2(P.dofs(), 0.0);
  std::uint64_t adam_steps = 0;

  const std::size_t n_train = train_set.profiles.size();
  std::vector<std::size_t> order(n_train);
  for (std::size_t i = 0; i < n_train; ++i) order[i] = i;
  RandomStream shuffle_rng =
      RandomStream::derive(cfg.seed, SeedPurpose::shuffle);

  BatchEngine engine(m, hidden, cfg.batch, cfg.threads);
  const std::vector<std::uint8_t> all_valid(m, 1);

  if (history) {
    history->epochs.clear();
    history->best_valid_epoch = static_cast<std::size_t>(-1);
  }
  double best_valid_loss = std::numeric_limits<double>::infinity();

  for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cfg.lr0 * std::pow(0.5, epoch / cfg.lr_half_every);
    fisher_yates(order, shuffle_rng);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n_train; start += cfg.batch) {
      const std::size_t bsize = std::min<std::size_t>(cfg.batch, n_train - start);
      engine.load(train_set, std::span<const std::size_t>(&order[start], bsize));
      engine.forward(P, bsize);
      const double batch_loss = engine.backward(P, bsize, cfg.pos_weight, G);
      ++adam_steps;
      adam_update_spans(P.views(), G.views(), m1, m2, adam_steps, 0.9, 0.999, 1e-8, lr);
      loss_sum += batch_loss * static_cast<double>(bsize);
    }

    EpochStats stats;
    stats.lr = lr;
    stats.train_loss = loss_sum / static_cast<double>(n_train);

    if (valid && !valid->profiles.empty()) {
      const std::size_t n_valid = valid->profiles.size();
      double vloss_sum = 0.0;
      DetectionCounts counts;
      std::vector<std::size_t> vidx(cfg.batch);
      std::vector<std::uint8_t> det(m);
      for (std::size_t start = 0; start < n_valid; start += cfg.batch) {
        const std::size_t bsize = std::min<std::size_t>(cfg.batch, n_valid - start);
        for (std::size_t k = 0; k < bsize; ++k) vidx[k] = start + k;
        engine.load(*valid, std::span<const std::size_t>(vidx.data(), bsize));
        engine.forward(P, bsize);
        for (std::size_t k = 0; k < bsize; ++k) {
          const RangeProfile& rp = valid->profiles[start + k];
          vloss_sum +=
              weighted_mse(std::span<const double>(&engine.y[k * m], m), rp.labels,
                           cfg.pos_weight);
          for (std::size_t i = 0; i < m; ++i) {
            det[i] = engine.y[k * m + i] > cfg.threshold ? 1 : 0;
          }
          counts += score_profile(det, all_valid, rp.labels, rp.target_bins,
                                  cfg.exclusion_window);
        }
      }
      stats.valid_loss = vloss_sum / static_cast<double>(n_valid);
      const DetectionRates rates = aggregate({&counts, 1});
      stats.valid_pd = rates.pd;
      stats.valid_pfa = rates.pfa;
      if (*stats.valid_loss < best_valid_loss && history) {
        best_valid_loss = *stats.valid_loss;
        history->best_valid_epoch = epoch;
      }
    }
    if (history) history->epochs.push_back(stats);
  }
  return from_planar(P);
}

std::vector<std::uint8_t> detect(const NetworkParams& p, std::span<const cplxf> x,
                                 double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("detect: threshold must lie in (0,1)");
  }
  ForwardCache cache;
  forward(p, x, cache);
  std::vector<std::uint8_t> det(p.m);
  for (std::size_t i = 0; i < p.m; ++i) det[i] = cache.y[i] > threshold ? 1 : 0;
  return det;
}

namespace {
constexpr char kModelMagic[4] = {'R', 'P', 'N', 'N'};
constexpr std::uint16_t kModelVersion = 1;
}  // namespace

void save_model(const std::string& path, const NetworkParams& p) {
  check_shapes(p);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);

  std::string buf;
  buf.append(kModelMagic, 4);
  binio::put(buf, kModelVersion);
  binio::put(buf, static_cast<std::uint32_t>(p.m));
  binio::put(buf, static_cast<std::uint32_t>(p.hidden));
  for (const cplx& w : p.w1) {
    binio::put(buf, w.real());
    binio::put(buf, w.imag());
  }
  for (const cplx& w : p.b1) {
    binio::put(buf, w.real());
    binio::put(buf, w.imag());
  }
  for (double v : p.modrelu_bias) binio::put(buf, v);
  for (double v : p.w2) binio::put(buf, v);
  for (double v : p.b2) binio::put(buf, v);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error("write failed: " + path);
}

NetworkParams load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  binio::Reader r(in, "RPNN");

  char magic[4];
  r.get_bytes(magic, 4);
  if (std::memcmp(magic, kModelMagic, 4) != 0) throw format_error("RPNN: bad magic");
  const auto version = r.get<std::uint16_t>();
  if (version != kModelVersion) {
    throw format_error("RPNN: unsupported version " + std::to_string(version));
  }
  NetworkParams p;
  p.m = r.get<std::uint32_t>();
  p.hidden = r.get<std::uint32_t>();
  if (p.m == 0 || p.hidden == 0) throw format_error("RPNN: bad dimensions");

  p.w1.resize(p.hidden * p.m);
  p.b1.resize(p.hidden);
  p.modrelu_bias.resize(p.hidden);
  p.w2.resize(p.m * p.hidden);
  p.b2.resize(p.m);
  for (cplx& w : p.w1) {
    const double re = r.get<double>();
    const double im = r.get<double>();
    w = cplx{re, im};
  }
  for (cplx& w : p.b1) {
    const double re = r.get<double>();
    const double im = r.get<double>();
    w = cplx{re, im};
  }
  for (double& v : p.modrelu_bias) v = r.get<double>();
  for (double& v : p.w2) v = r.get<double>();
  for (double& v : p.b2) v = r.get<double>();
  if (!r.at_eof()) throw format_error("RPNN: trailing bytes");

  for (const auto& view : param_views(p)) {
    for (double v : view) {
      if (!std::isfinite(v)) throw format_error("RPNN: non-finite parameter");
    }
  }
  return p;
}

}  // namespace swarmdet
