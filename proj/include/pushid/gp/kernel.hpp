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

#ifndef PUSHID_GP_KERNEL_HPP_
#define PUSHID_GP_KERNEL_HPP_

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "pushid/error.hpp"

namespace pushid::gp {

struct KernelParams {
  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_variance = 0.0;

  static KernelParams isotropic(Eigen::Index dim, double signal_variance = 1.0,
                                double lengthscale = 0.2,
                                double noise_variance = 0.0) {
    return {signal_variance, Eigen::VectorXd::Constant(dim, lengthscale),
            noise_variance};
  }

  Eigen::Index dimension() const { return lengthscales.size(); }

  void validate() const {
    if (!(signal_variance > 0.0)) {
      throw InputError("kernel signal_variance must be positive");
    }
    if (!(noise_variance >= 0.0)) {
      throw InputError("kernel noise_variance must be non-negative");
    }
    for (Eigen::Index d = 0; d < lengthscales.size(); ++d) {
      if (!(lengthscales[d] > 0.0)) {
        throw InputError("kernel lengthscale " + std::to_string(d) +
                         " must be positive");
      }
    }
  }
};

/// Squared-exponential covariance with one lengthscale per input dimension:
///   k(a, b) = s2 * exp(-0.5 * sum_d ((a_d - b_d) / l_d)^2)
class SquaredExponential {
 public:
  SquaredExponential() = default;
  explicit SquaredExponential(KernelParams params) : params_(std::move(params)) {
    params_.validate();
    inv_lengthscales_ = params_.lengthscales.cwiseInverse();
  }

  const KernelParams& params() const { return params_; }
  Eigen::Index dimension() const { return params_.dimension(); }
  double signal_variance() const { return params_.signal_variance; }
  double noise_variance() const { return params_.noise_variance; }

  template <typename A, typename B>
  double operator()(const Eigen::MatrixBase<A>& a,
                    const Eigen::MatrixBase<B>& b) const {
    if (a.size() != dimension() || b.size() != dimension()) {
      throw InputError("kernel input dimension mismatch: expected " +
                       std::to_string(dimension()) + ", got " +
                       std::to_string(a.size()) + " and " +
                       std::to_string(b.size()));
    }
    const double r2 = (a - b).cwiseProduct(inv_lengthscales_).squaredNorm();
    return params_.signal_variance * std::exp(-0.5 * r2);
  }

 private:
  KernelParams params_{};
  Eigen::VectorXd inv_lengthscales_;
};

inline double kernel_eval(const KernelParams& k, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b) {
  return SquaredExponential(k)(a, b);
}

}  // namespace pushid::gp

#endif  // PUSHID_GP_KERNEL_HPP_
