// Copyright 2026  The spoofeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spoofeval/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>

#include "spoofeval/parallel.hpp"
#include "spoofeval/reference.hpp"

namespace spoofeval {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

/// Per-component scoring constants for a fixed model.
struct Scorer {
  std::size_t components;
  std::size_t dim;
  std::vector<double> head;     // log w_k - 0.5 * sum_d log(2 pi sigma^2)
  std::vector<double> inv_var;  // K * D

  explicit Scorer(const GmmModel& model)
      : components(model.num_components()), dim(model.dim) {
    head.resize(components);
    inv_var.resize(components * dim);
    for (std::size_t k = 0; k < components; ++k) {
      double logdet = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        double var = model.variances[k * dim + d];
        logdet += kLog2Pi + std::log(var);
        inv_var[k * dim + d] = 1.0 / var;
      }
      head[k] = std::log(model.weights[k]) - 0.5 * logdet;
    }
  }

  /// Fills logp[k] = log(w_k N(x; mu_k, sigma_k^2)) and returns their
  /// log-sum-exp.
  double frame_lse(const GmmModel& model, const double* x,
                   std::vector<double>& logp) const {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < components; ++k) {
      double quad = 0.0;
      const double* mean = model.means.data() + k * dim;
      const double* inv = inv_var.data() + k * dim;
      for (std::size_t d = 0; d < dim; ++d) {
        double diff = x[d] - mean[d];
        quad += diff * diff * inv[d];
      }
      logp[k] = head[k] - 0.5 * quad;
      if (logp[k] > top) top = logp[k];
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < components; ++k) sum += std::exp(logp[k] - top);
    return top + std::log(sum);
  }
};

struct EStepStats {
  double loglik = 0.0;
  std::vector<double> occupancy;  // K
  std::vector<double> mean_acc;   // K * D
  std::vector<double> sq_acc;     // K * D

  void resize(std::size_t components, std::size_t dim) {
    occupancy.assign(components, 0.0);
    mean_acc.assign(components * dim, 0.0);
    sq_acc.assign(components * dim, 0.0);
  }
};

EStepStats estep(const GmmModel& model, const FeatureMatrix& frames,
                 bool parallel) {
  const Scorer scorer(model);
  const std::size_t components = model.num_components();
  const std::size_t dim = model.dim;

  EStepStats init;
  init.resize(components, dim);

  auto block = [&](std::size_t begin, std::size_t end) {
    EStepStats part;
    part.resize(components, dim);
    std::vector<double> logp(components);
    for (std::size_t t = begin; t < end; ++t) {
      const double* x = frames.row(t);
      double lse = scorer.frame_lse(model, x, logp);
      part.loglik += lse;
      for (std::size_t k = 0; k < components; ++k) {
        double gamma = std::exp(logp[k] - lse);
        part.occupancy[k] += gamma;
        double* macc = part.mean_acc.data() + k * dim;
        double* sacc = part.sq_acc.data() + k * dim;
        for (std::size_t d = 0; d < dim; ++d) {
          macc[d] += gamma * x[d];
          sacc[d] += gamma * x[d] * x[d];
        }
      }
    }
    return part;
  };
  auto merge = [&](EStepStats& into, const EStepStats& part) {
    into.loglik += part.loglik;
    for (std::size_t k = 0; k < into.occupancy.size(); ++k) {
      into.occupancy[k] += part.occupancy[k];
    }
    for (std::size_t i = 0; i < into.mean_acc.size(); ++i) {
      into.mean_acc[i] += part.mean_acc[i];
      into.sq_acc[i] += part.sq_acc[i];
    }
  };
  return blocked_reduce(frames.rows, std::move(init), block, merge, parallel);
}

/// Global per-dimension mean and variance of the training frames.
void global_stats(const FeatureMatrix& frames, std::vector<double>& mean,
                  std::vector<double>& variance) {
  const std::size_t dim = frames.cols;
  mean.assign(dim, 0.0);
  variance.assign(dim, 0.0);
  for (std::size_t t = 0; t < frames.rows; ++t) {
    const double* x = frames.row(t);
    for (std::size_t d = 0; d < dim; ++d) mean[d] += x[d];
  }
  for (std::size_t d = 0; d < dim; ++d) {
    mean[d] /= static_cast<double>(frames.rows);
  }
  for (std::size_t t = 0; t < frames.rows; ++t) {
    const double* x = frames.row(t);
    for (std::size_t d = 0; d < dim; ++d) {
      double diff = x[d] - mean[d];
      variance[d] += diff * diff;
    }
  }
  for (std::size_t d = 0; d < dim; ++d) {
    variance[d] /= static_cast<double>(frames.rows);
  }
}

/// One M-step from accumulated statistics, with variance flooring and
/// deterministic re-seeding of starved components.
void mstep(GmmModel& model, const EStepStats& stats,
           const FeatureMatrix& frames, const std::vector<double>& floor,
           const std::vector<double>& global_var) {
  const std::size_t components = model.num_components();
  const std::size_t dim = model.dim;
  const double total = static_cast<double>(frames.rows);

  for (std::size_t k = 0; k < components; ++k) {
    double occ = stats.occupancy[k];
    if (!(occ > total * 1e-10)) {
      // Starved component: re-seed it at an evenly spaced training frame.
      std::size_t idx = (k * frames.rows) / components;
      std::cerr << "spoofeval: re-seeding starved mixture component " << k
                << "\n";
      model.weights[k] = 1.0 / total;
      for (std::size_t d = 0; d < dim; ++d) {
        model.means[k * dim + d] = frames.at(idx, d);
        model.variances[k * dim + d] = std::max(global_var[d], floor[d]);
      }
      continue;
    }
    model.weights[k] = occ / total;
    for (std::size_t d = 0; d < dim; ++d) {
      double mu = stats.mean_acc[k * dim + d] / occ;
      double var = stats.sq_acc[k * dim + d] / occ - mu * mu;
      if (!std::isfinite(var)) var = global_var[d];
      model.means[k * dim + d] = mu;
      model.variances[k * dim + d] = std::max(var, floor[d]);
    }
  }

  double weight_sum = std::accumulate(model.weights.begin(),
                                      model.weights.end(), 0.0);
  for (double& w : model.weights) w /= weight_sum;
}

/// Runs EM until the relative mean-log-likelihood improvement drops below
/// `tolerance` or `max_iterations` is reached.  Each evaluated mean
/// log-likelihood is appended to `history` when given; returns the last one.
double run_em(GmmModel& model, const FeatureMatrix& frames,
              const std::vector<double>& floor,
              const std::vector<double>& global_var, std::size_t max_iterations,
              double tolerance, bool parallel, std::vector<double>* history) {
  const double total = static_cast<double>(frames.rows);
  double previous = -std::numeric_limits<double>::infinity();
  for (std::size_t iteration = 0; iteration < max_iterations; ++iteration) {
    EStepStats stats = estep(model, frames, parallel);
    double current = stats.loglik / total;
    if (history != nullptr) history->push_back(current);
    if (std::isfinite(previous)) {
      double improvement =
          (current - previous) / std::max(std::fabs(previous), 1e-10);
      if (improvement < tolerance) return current;
    }
    mstep(model, stats, frames, floor, global_var);
    previous = current;
  }
  return previous;
}

/// Per-component, per-side accumulators for the data-driven split.
struct SplitStats {
  std::vector<double> count;  // slots * 2
  std::vector<double> sum;    // slots * 2 * D
  std::vector<double> sq;     // slots * 2 * D

  void resize(std::size_t slots, std::size_t dim) {
    count.assign(slots * 2, 0.0);
    sum.assign(slots * 2 * dim, 0.0);
    sq.assign(slots * 2 * dim, 0.0);
  }
};

/// Splits the chosen components in two.  Each component's dominated frames
/// are cut at the component mean along its highest-variance dimension and
/// the children start from the two halves' sample statistics.  Children
/// seeded this way land on the modes of a bimodal component straight away;
/// a symmetric nudge instead leaves near-tied responsibilities whose
/// separation grows so slowly that the convergence test can stop EM in the
/// merged configuration.  A half with no frames falls back to a nudge of
/// 0.1 standard deviations.
void split_components(GmmModel& model, std::size_t target,
                      const FeatureMatrix& frames,
                      const std::vector<double>& floor, bool parallel) {
  const std::size_t current = model.num_components();
  const std::size_t dim = model.dim;
  const std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t to_split = std::min(current, target - current);

  // The heaviest components split first; ties resolve to the lowest index.
  std::vector<std::size_t> order(current);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.weights[a] > model.weights[b];
  });
  order.resize(to_split);
  std::sort(order.begin(), order.end());

  std::vector<std::size_t> slot_of(current, npos);
  std::vector<std::size_t> split_dim(to_split, 0);
  for (std::size_t s = 0; s < to_split; ++s) {
    const std::size_t k = order[s];
    slot_of[k] = s;
    for (std::size_t d = 1; d < dim; ++d) {
      if (model.variances[k * dim + d] >
          model.variances[k * dim + split_dim[s]]) {
        split_dim[s] = d;
      }
    }
  }

  // Dominant component per frame; ties resolve to the lowest index.
  std::vector<std::uint32_t> assignment(frames.rows, 0);
  if (current > 1) {
    const Scorer scorer(model);
    const std::size_t blocks = (frames.rows + kReduceBlock - 1) / kReduceBlock;
    parallel_for(blocks, parallel, [&](std::size_t b) {
      std::vector<double> logp(current);
      const std::size_t begin = b * kReduceBlock;
      const std::size_t end = std::min(begin + kReduceBlock, frames.rows);
      for (std::size_t t = begin; t < end; ++t) {
        scorer.frame_lse(model, frames.row(t), logp);
        std::size_t best = 0;
        for (std::size_t k = 1; k < current; ++k) {
          if (logp[k] > logp[best]) best = k;
        }
        assignment[t] = static_cast<std::uint32_t>(best);
      }
    });
  }

  SplitStats init;
  init.resize(to_split, dim);
  auto block = [&](std::size_t begin, std::size_t end) {
    SplitStats part;
    part.resize(to_split, dim);
    for (std::size_t t = begin; t < end; ++t) {
      const std::size_t k = assignment[t];
      const std::size_t s = slot_of[k];
      if (s == npos) continue;
      const double* x = frames.row(t);
      const std::size_t d_star = split_dim[s];
      const std::size_t side =
          x[d_star] <= model.means[k * dim + d_star] ? 0 : 1;
      const std::size_t cell = s * 2 + side;
      part.count[cell] += 1.0;
      double* sum = part.sum.data() + cell * dim;
      double* sq = part.sq.data() + cell * dim;
      for (std::size_t d = 0; d < dim; ++d) {
        sum[d] += x[d];
        sq[d] += x[d] * x[d];
      }
    }
    return part;
  };
  auto merge = [&](SplitStats& into, const SplitStats& part) {
    for (std::size_t i = 0; i < into.count.size(); ++i) {
      into.count[i] += part.count[i];
    }
    for (std::size_t i = 0; i < into.sum.size(); ++i) {
      into.sum[i] += part.sum[i];
      into.sq[i] += part.sq[i];
    }
  };
  const SplitStats stats =
      blocked_reduce(frames.rows, std::move(init), block, merge, parallel);

  for (std::size_t s = 0; s < to_split; ++s) {
    const std::size_t k = order[s];
    const double n0 = stats.count[s * 2];
    const double n1 = stats.count[s * 2 + 1];
    if (n0 < 1.0 || n1 < 1.0) {
      model.weights[k] /= 2.0;
      model.weights.push_back(model.weights[k]);
      for (std::size_t d = 0; d < dim; ++d) {
        double delta = 0.1 * std::sqrt(model.variances[k * dim + d]);
        double mean = model.means[k * dim + d];
        model.means[k * dim + d] = mean - delta;
        model.means.push_back(mean + delta);
        model.variances.push_back(model.variances[k * dim + d]);
      }
      continue;
    }
    const double parent_weight = model.weights[k];
    model.weights[k] = parent_weight * n0 / (n0 + n1);
    model.weights.push_back(parent_weight * n1 / (n0 + n1));
    for (std::size_t d = 0; d < dim; ++d) {
      const double parent_var = model.variances[k * dim + d];
      const double* sum = stats.sum.data() + (s * 2) * dim;
      const double* sq = stats.sq.data() + (s * 2) * dim;
      double mu = sum[d] / n0;
      double var = sq[d] / n0 - mu * mu;
      if (!std::isfinite(var)) var = parent_var;
      model.means[k * dim + d] = mu;
      model.variances[k * dim + d] = std::max(var, floor[d]);

      const double* sum1 = stats.sum.data() + (s * 2 + 1) * dim;
      const double* sq1 = stats.sq.data() + (s * 2 + 1) * dim;
      double mu1 = sum1[d] / n1;
      double var1 = sq1[d] / n1 - mu1 * mu1;
      if (!std::isfinite(var1)) var1 = parent_var;
      model.means.push_back(mu1);
      model.variances.push_back(std::max(var1, floor[d]));
    }
  }
}

GmmModel em_train_impl(const FeatureMatrix& frames, const TrainConfig& cfg,
                       bool parallel,
                       std::vector<std::vector<double>>* stage_loglik) {
  auto stage_history = [&]() -> std::vector<double>* {
    if (stage_loglik == nullptr) return nullptr;
    stage_loglik->emplace_back();
    return &stage_loglik->back();
  };
  if (frames.rows == 0 || frames.cols == 0) {
    fail(ErrorKind::bad_config, "empty training matrix");
  }
  for (double v : frames.values) {
    if (!std::isfinite(v)) fail(ErrorKind::bad_config, "non-finite training value");
  }
  if (cfg.components < 1) fail(ErrorKind::bad_config, "need at least 1 component");
  if (!(cfg.tolerance > 0)) fail(ErrorKind::bad_config, "tolerance must be positive");
  if (frames.rows < cfg.components) {
    fail(ErrorKind::too_few_frames,
         "need at least as many frames as mixture components");
  }

  std::vector<double> global_mean;
  std::vector<double> global_var;
  global_stats(frames, global_mean, global_var);

  std::vector<double> floor(frames.cols);
  for (std::size_t d = 0; d < frames.cols; ++d) {
    floor[d] = std::max(cfg.variance_floor_factor * global_var[d], 1e-12);
  }

  GmmModel model;
  model.dim = frames.cols;

  if (cfg.init == TrainConfig::Init::random) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> indices(frames.rows);
    std::iota(indices.begin(), indices.end(), 0);
    std::shuffle(indices.begin(), indices.end(), rng);
    model.weights.assign(cfg.components, 1.0 / cfg.components);
    for (std::size_t k = 0; k < cfg.components; ++k) {
      for (std::size_t d = 0; d < frames.cols; ++d) {
        model.means.push_back(frames.at(indices[k], d));
        model.variances.push_back(std::max(global_var[d], floor[d]));
      }
    }
    run_em(model, frames, floor, global_var, cfg.max_iterations,
           cfg.tolerance, parallel, stage_history());
    model.validate();
    return model;
  }

  // Binary splitting: start from the global Gaussian and double (or top up)
  // the component count, refining briefly between splits.
  model.weights.assign(1, 1.0);
  model.means = global_mean;
  model.variances.resize(frames.cols);
  for (std::size_t d = 0; d < frames.cols; ++d) {
    model.variances[d] = std::max(global_var[d], floor[d]);
  }

  constexpr std::size_t kSplitRefineIterations = 10;
  while (model.num_components() < cfg.components) {
    split_components(model, cfg.components, frames, floor, parallel);
    std::size_t iterations = model.num_components() < cfg.components
                                 ? kSplitRefineIterations
                                 : cfg.max_iterations;
    run_em(model, frames, floor, global_var, iterations, cfg.tolerance,
           parallel, stage_history());
  }
  if (cfg.components == 1) {
    run_em(model, frames, floor, global_var, cfg.max_iterations, cfg.tolerance,
           parallel, stage_history());
  }
  model.validate();
  return model;
}

double loglik_impl(const GmmModel& model, const FeatureMatrix& frames,
                   bool parallel) {
  model.validate();
  if (frames.cols != model.dim) {
    fail(ErrorKind::dim_mismatch, "frame width does not match model dimension");
  }
  if (frames.rows == 0) fail(ErrorKind::bad_config, "no frames to score");

  const Scorer scorer(model);
  auto block = [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    std::vector<double> logp(model.num_components());
    for (std::size_t t = begin; t < end; ++t) {
      acc += scorer.frame_lse(model, frames.row(t), logp);
    }
    return acc;
  };
  auto merge = [](double& into, double part) { into += part; };
  double total = blocked_reduce(frames.rows, 0.0, block, merge, parallel);
  return total / static_cast<double>(frames.rows);
}

}  // namespace

void GmmModel::validate() const {
  const std::size_t components = num_components();
  if (components == 0 || dim == 0) {
    fail(ErrorKind::bad_config, "empty model");
  }
  if (means.size() != components * dim || variances.size() != components * dim) {
    fail(ErrorKind::bad_config, "model field sizes disagree");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      fail(ErrorKind::bad_config, "weights must be positive");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-10) {
    fail(ErrorKind::bad_config, "weights must sum to 1");
  }
  for (double v : variances) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::degenerate_variance, "variances must be strictly positive");
    }
  }
  for (double m : means) {
    if (!std::isfinite(m)) fail(ErrorKind::bad_config, "non-finite mean");
  }
}

GmmModel em_train(const FeatureMatrix& frames, const TrainConfig& cfg) {
  return em_train_impl(frames, cfg, true, nullptr);
}

GmmModel em_train(const FeatureMatrix& frames, const TrainConfig& cfg,
                  std::vector<std::vector<double>>* stage_loglik) {
  return em_train_impl(frames, cfg, true, stage_loglik);
}

double loglik(const GmmModel& model, const FeatureMatrix& frames) {
  return loglik_impl(model, frames, true);
}

double llr_score(const GmmModel& bona, const GmmModel& spoof,
                 const FeatureMatrix& frames) {
  if (bona.dim != spoof.dim) {
    fail(ErrorKind::dim_mismatch, "model dimensions disagree");
  }
  return loglik(bona, frames) - loglik(spoof, frames);
}

void write_gmm_file(const std::string& path, const GmmModel& model) {
  model.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::bad_file, "cannot open " + path + " for writing");
  out.write("SPGM", 4);
  auto put_u32 = [&](std::uint32_t v) {
    char buf[4] = {static_cast<char>(v & 0xff),
                   static_cast<char>((v >> 8) & 0xff),
                   static_cast<char>((v >> 16) & 0xff),
                   static_cast<char>(v >> 24)};
    out.write(buf, 4);
  };
  auto put_f64 = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char buf[8];
    for (int i = 0; i < 8; ++i) {
      buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    }
    out.write(buf, 8);
  };
  put_u32(static_cast<std::uint32_t>(model.num_components()));
  put_u32(static_cast<std::uint32_t>(model.dim));
  for (double w : model.weights) put_f64(w);
  for (double m : model.means) put_f64(m);
  for (double v : model.variances) put_f64(v);
  if (!out) fail(ErrorKind::bad_file, "failed writing " + path);
}

GmmModel read_gmm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::bad_file, "cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SPGM", 4) != 0) {
    fail(ErrorKind::bad_file, path + ": bad model-file magic");
  }
  auto get_u32 = [&]() {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) {
      fail(ErrorKind::bad_file, path + ": truncated model file");
    }
    return static_cast<std::uint32_t>(buf[0]) |
           (static_cast<std::uint32_t>(buf[1]) << 8) |
           (static_cast<std::uint32_t>(buf[2]) << 16) |
           (static_cast<std::uint32_t>(buf[3]) << 24);
  };
  auto get_f64 = [&]() {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) {
      fail(ErrorKind::bad_file, path + ": truncated model file");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    }
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  };
  std::uint32_t components = get_u32();
  std::uint32_t dim = get_u32();
  GmmModel model;
  model.dim = dim;
  model.weights.resize(components);
  model.means.resize(static_cast<std::size_t>(components) * dim);
  model.variances.resize(static_cast<std::size_t>(components) * dim);
  for (auto& w : model.weights) w = get_f64();
  for (auto& m : model.means) m = get_f64();
  for (auto& v : model.variances) v = get_f64();
  char extra;
  if (in.read(&extra, 1)) {
    fail(ErrorKind::bad_file, path + ": trailing bytes in model file");
  }
  model.validate();
  return model;
}

namespace reference {

double loglik(const GmmModel& model, const FeatureMatrix& frames) {
  return loglik_impl(model, frames, false);
}

GmmModel em_train(const FeatureMatrix& frames, const TrainConfig& cfg) {
  return em_train_impl(frames, cfg, false, nullptr);
}

}  // namespace reference

}  // namespace spoofeval
