#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "squirrel/rng.hpp"
#include "squirrel/space.hpp"

namespace squirrel {

/// Kernel and mean parameters in the (transformed) target space the model
/// was fitted on. Lengthscales live on the unit-cube input coordinates.
struct GpHyperparams {
  std::vector<double> lengthscales;
  double signal_variance = 1.0;
  double noise_variance = 1e-6;
  double mean = 0.0;
};

struct GpFitOptions {
  int restarts = 32;
  /// Nelder-Mead budget per restart; 0 picks 20 + 10 * n_hyperparams.
  int max_evals_per_restart = 0;
  /// Pin the noise variance (target-space units) instead of fitting it.
  std::optional<double> fixed_noise_variance;
};

/// Gaussian process regressor with a Matern-5/2 ARD kernel and constant
/// mean, fitted by maximum marginal likelihood over random-restart local
/// searches in log-hyperparameter space. Targets are standardized
/// internally and destandardized on predict, so all public values are in
/// the space of the z passed to fit.
class GpModel {
public:
  struct FitDiagnostics {
    /// Negative log marginal likelihood at each restart's starting point
    /// and at the selected optimum (standardized-target units).
    std::vector<double> restart_start_nll;
    double final_nll = 0.0;
    double jitter = 0.0; // target-space units, escalated until Cholesky held
  };

  /// n >= 1 inputs in [0,1]^d. Throws std::runtime_error when the kernel
  /// matrix stays indefinite at the jitter cap.
  static GpModel fit(const std::vector<UnitVector> &x,
                     const std::vector<double> &z, Rng &rng,
                     const GpFitOptions &options = {});

  /// Skip the hyperparameter search: exact hyperparameters, unstandardized
  /// targets. Mainly for tests and controlled experiments.
  static GpModel with_hyperparams(const std::vector<UnitVector> &x,
                                  const std::vector<double> &z,
                                  const GpHyperparams &hp);

  /// Posterior (mean, variance) of the latent function at x; variance is
  /// clamped at zero.
  std::pair<double, double> predict(const UnitVector &x) const;

  const GpHyperparams &hyperparams() const { return hp_; }
  const FitDiagnostics &diagnostics() const { return diag_; }
  const std::vector<UnitVector> &train_x() const { return x_; }
  const std::vector<double> &train_z() const { return z_; }

private:
  GpModel() = default;

  // Copies the factorization out of the fit workspace (type-erased to keep
  // Eigen out of this header).
  void assemble_from_ws(void *workspace, const std::vector<double> &ls,
                        double sf2, double sn2, double jitter);

  std::vector<UnitVector> x_;
  std::vector<double> z_;
  GpHyperparams hp_; // target-space units (destandardized)
  FitDiagnostics diag_;

  // Standardized-space factorization used by predict.
  double z_mean_ = 0.0;
  double z_std_ = 1.0;
  double sf2_std_ = 1.0;
  std::vector<double> inv_sq_lengthscales_;
  std::vector<double> chol_;  // row-major lower Cholesky of K + (sn2+jit) I
  std::vector<double> alpha_; // (K + (sn2+jit) I)^-1 z_std
};

} // namespace squirrel
