// Copyright 2026 The pushid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PUSHID_GP_GAUSSIAN_PROCESS_HPP_
#define PUSHID_GP_GAUSSIAN_PROCESS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "pushid/error.hpp"
#include "pushid/gp/kernel.hpp"

namespace pushid::gp {

using MeanFunction = std::function<double(const Eigen::VectorXd&)>;

inline MeanFunction zero_mean() {
  return [](const Eigen::VectorXd&) { return 0.0; };
}

struct Observation {
  Eigen::VectorXd input;
  double target = 0.0;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

struct JointPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Jitter ladder: none, then 1e-10 * trace/n escalating x10 up to 1e-4 * trace/n.
inline Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& a,
                                            double scale_floor = 1e-300) {
  const Eigen::Index n = a.rows();
  if (n == 0) return Eigen::MatrixXd(0, 0);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt.matrixL();

  const double scale = std::max(a.trace() / static_cast<double>(n), scale_floor);
  for (double rel = 1e-10; rel <= 1e-4 * (1.0 + 1e-9); rel *= 10.0) {
    Eigen::MatrixXd jittered = a;
    jittered.diagonal().array() += rel * scale;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericalError("covariance matrix of size " + std::to_string(n) +
                       " is not positive-definite after jitter escalation");
}

/// Exact GP regression on a small data set.
///
/// The posterior is immutable once fitted; `predict`, `joint_posterior` and
/// `sample_joint` are const and safe to call from several threads.
template <typename Kernel = SquaredExponential>
class GaussianProcess {
 public:
  static GaussianProcess fit(std::span<const Observation> points, Kernel kernel,
                             MeanFunction prior_mean = zero_mean()) {
    GaussianProcess gp;
    gp.kernel_ = std::move(kernel);
    gp.prior_mean_ = prior_mean ? std::move(prior_mean) : zero_mean();

    const Eigen::Index dim = gp.kernel_.dimension();
    // Exact duplicates are merged and their targets averaged.
    std::vector<Eigen::VectorXd> inputs;
    std::vector<double> sums;
    std::vector<int> counts;
    for (const Observation& p : points) {
      if (p.input.size() != dim) {
        throw InputError("observation dimension " +
                         std::to_string(p.input.size()) +
                         " does not match kernel dimension " +
                         std::to_string(dim));
      }
      if (!std::isfinite(p.target) || !p.input.allFinite()) {
        throw InputError("observation contains a non-finite value");
      }
      auto it = std::find_if(inputs.begin(), inputs.end(),
                             [&](const auto& x) { return x == p.input; });
      if (it == inputs.end()) {
        inputs.push_back(p.input);
        sums.push_back(p.target);
        counts.push_back(1);
      } else {
        const auto k = static_cast<std::size_t>(it - inputs.begin());
        sums[k] += p.target;
        ++counts[k];
      }
    }

    const auto n = static_cast<Eigen::Index>(inputs.size());
    gp.inputs_.resize(dim, n);
    gp.targets_.resize(n);
    Eigen::VectorXd residual(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      gp.inputs_.col(i) = inputs[ui];
      gp.targets_[i] = sums[ui] / counts[ui];
      residual[i] = gp.targets_[i] - gp.prior_mean_(inputs[ui]);
    }

    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        k(i, j) = k(j, i) = gp.kernel_(gp.inputs_.col(i), gp.inputs_.col(j));
      }
    }
    k.diagonal().array() += gp.kernel_.noise_variance();
    gp.chol_ = cholesky_with_jitter(k, gp.kernel_.signal_variance());
    gp.alpha_ = gp.chol_.template triangularView<Eigen::Lower>().solve(residual);
    gp.chol_.template triangularView<Eigen::Lower>().transpose().solveInPlace(
        gp.alpha_);
    return gp;
  }

  Prediction predict(const Eigen::VectorXd& q) const {
    check_dim(q);
    const double prior = kernel_(q, q);
    const double m = prior_mean_(q);
    if (size() == 0) return {m, prior};
    const Eigen::VectorXd ks = cross_covariance(q);
    const Eigen::VectorXd v =
        chol_.template triangularView<Eigen::Lower>().solve(ks);
    return {m + ks.dot(alpha_), std::max(0.0, prior - v.squaredNorm())};
  }

  /// Posterior mean vector and covariance matrix (latent, noise-free) over
  /// the given points.
  JointPosterior joint_posterior(std::span<const Eigen::VectorXd> points) const {
    const auto n = static_cast<Eigen::Index>(points.size());
    JointPosterior post;
    post.mean.resize(n);
    post.covariance.resize(n, n);
    Eigen::MatrixXd ks(size(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& p = points[static_cast<std::size_t>(j)];
      check_dim(p);
      post.mean[j] = prior_mean_(p);
      if (size() > 0) ks.col(j) = cross_covariance(p);
      for (Eigen::Index i = 0; i <= j; ++i) {
        post.covariance(i, j) = post.covariance(j, i) =
            kernel_(points[static_cast<std::size_t>(i)], p);
      }
    }
    if (size() > 0) {
      post.mean.noalias() += ks.transpose() * alpha_;
      const Eigen::MatrixXd v =
          chol_.template triangularView<Eigen::Lower>().solve(ks);
      post.covariance.noalias() -= v.transpose() * v;
    }
    return post;
  }

  /// Draws `n_samples` joint samples; row r is one function draw evaluated at
  /// every candidate.
  Eigen::MatrixXd sample_joint(std::span<const Eigen::VectorXd> candidates,
                               std::size_t n_samples,
                               std::uint64_t seed) const {
    if (candidates.empty()) {
      throw InputError("sample_joint requires at least one candidate");
    }
    const auto n = static_cast<Eigen::Index>(candidates.size());
    const auto m = static_cast<Eigen::Index>(n_samples);
    if (m == 0) return Eigen::MatrixXd(0, n);

    const JointPosterior post = joint_posterior(candidates);
    const Eigen::MatrixXd l =
        cholesky_with_jitter(post.covariance, 1e-12 * kernel_.signal_variance());

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(n, m);
    for (Eigen::Index s = 0; s < m; ++s) {
      for (Eigen::Index i = 0; i < n; ++i) z(i, s) = normal(rng);
    }
    Eigen::MatrixXd draws = l.template triangularView<Eigen::Lower>() * z;
    draws.colwise() += post.mean;
    return draws.transpose();
  }

  Eigen::Index size() const { return targets_.size(); }
  Eigen::Index dimension() const { return kernel_.dimension(); }
  const Kernel& kernel() const { return kernel_; }
  const Eigen::MatrixXd& train_inputs() const { return inputs_; }
  const Eigen::VectorXd& train_targets() const { return targets_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_; }
  double prior_mean(const Eigen::VectorXd& q) const { return prior_mean_(q); }

 private:
  GaussianProcess() = default;

  void check_dim(const Eigen::VectorXd& q) const {
    if (q.size() != dimension()) {
      throw InputError("query dimension " + std::to_string(q.size()) +
                       " does not match GP dimension " +
                       std::to_string(dimension()));
    }
  }

  Eigen::VectorXd cross_covariance(const Eigen::VectorXd& q) const {
    Eigen::VectorXd ks(size());
    for (Eigen::Index i = 0; i < size(); ++i) ks[i] = kernel_(inputs_.col(i), q);
    return ks;
  }

  Kernel kernel_{};
  MeanFunction prior_mean_;
  Eigen::MatrixXd inputs_;  // one column per training input
  Eigen::VectorXd targets_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
};

template <typename Kernel>
GaussianProcess<Kernel> gp_fit(std::span<const Observation> points,
                               Kernel kernel,
                               MeanFunction prior_mean = zero_mean()) {
  return GaussianProcess<Kernel>::fit(points, std::move(kernel),
                                      std::move(prior_mean));
}

inline GaussianProcess<> gp_fit(std::span<const Observation> points,
                                const KernelParams& params,
                                MeanFunction prior_mean = zero_mean()) {
  return GaussianProcess<>::fit(points, SquaredExponential(params),
                                std::move(prior_mean));
}

}  // namespace pushid::gp

#endif  // PUSHID_GP_GAUSSIAN_PROCESS_HPP_
