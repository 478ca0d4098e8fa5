#include "squirrel/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "squirrel/parallel.hpp"

namespace squirrel {

namespace {

constexpr double kSqrt5 = 2.2360679774997896;
constexpr double kJitterStart = 1e-8;
constexpr double kJitterCap = 1e-2;
constexpr double kLog2Pi = 1.8378770664093453;

// Search box in log space.
constexpr double kLogLenLo = -6.907755278982137;  // ln 1e-3
constexpr double kLogLenHi = 6.907755278982137;   // ln 1e3
constexpr double kLogSf2Lo = -13.815510557964274; // ln 1e-6
constexpr double kLogSf2Hi = 6.907755278982137;   // ln 1e3
constexpr double kLogSn2Lo = -18.420680743952367; // ln 1e-8
constexpr double kLogSn2Hi = 0.0;                 // ln 1

double matern52(double r, double r2) {
  return (1.0 + kSqrt5 * r + (5.0 / 3.0) * r2) * std::exp(-kSqrt5 * r);
}

struct NllWorkspace {
  // Shared read-only fit data: per-dimension pairwise squared differences
  // (built once per fit) and standardized targets.
  const std::vector<Eigen::MatrixXd> *sq_diffs = nullptr;
  const Eigen::VectorXd *z = nullptr;
  // Per-worker scratch.
  Eigen::MatrixXd kernel;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

// Negative log marginal likelihood with jitter escalation; +inf when the
// Cholesky still fails at the cap. On success reports the jitter used.
double negative_log_marginal(NllWorkspace &ws, const std::vector<double> &ls,
                             double sf2, double sn2, double *jitter_used) {
  const auto n = static_cast<Eigen::Index>(ws.z->size());
  const std::size_t d = ws.sq_diffs->size();

  Eigen::ArrayXXd r2 = Eigen::ArrayXXd::Zero(n, n);
  for (std::size_t k = 0; k < d; ++k) {
    r2 += (*ws.sq_diffs)[k].array() / (ls[k] * ls[k]);
  }
  Eigen::ArrayXXd r = r2.sqrt();
  ws.kernel =
      (sf2 * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r2) * (-kSqrt5 * r).exp())
          .matrix();

  for (double jitter = kJitterStart; jitter <= kJitterCap * (1.0 + 1e-12);
       jitter *= 10.0) {
    Eigen::MatrixXd k_noisy = ws.kernel;
    k_noisy.diagonal().array() += sn2 + jitter;
    ws.llt.compute(k_noisy);
    if (ws.llt.info() == Eigen::Success) {
      Eigen::VectorXd alpha = ws.llt.solve(*ws.z);
      double log_det =
          ws.llt.matrixLLT().diagonal().array().log().sum();
      if (jitter_used) {
        *jitter_used = jitter;
      }
      double nll = 0.5 * ws.z->dot(alpha) + log_det +
                   0.5 * static_cast<double>(n) * kLog2Pi;
      return std::isfinite(nll)
                 ? nll
                 : std::numeric_limits<double>::infinity();
    }
  }
  return std::numeric_limits<double>::infinity();
}

struct NmResult {
  std::vector<double> x;
  double fx = std::numeric_limits<double>::infinity();
};

// Plain Nelder-Mead; the best vertex value never increases, which is what
// the fit's monotone-improvement invariant relies on.
template <typename F>
NmResult nelder_mead(F &&f, const std::vector<double> &x0, double step,
                     int max_evals) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> verts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    verts[i + 1][i] += step;
  }
  int evals = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    fv[i] = f(verts[i]);
    ++evals;
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_order = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };

  while (evals < max_evals) {
    sort_order();
    std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];
    if (std::abs(fv[worst] - fv[best]) <=
        1e-9 * (std::abs(fv[best]) + 1e-9)) {
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) {
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        centroid[j] += verts[i][j];
      }
    }
    for (double &c : centroid) {
      c /= static_cast<double>(n);
    }

    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) {
        p[j] = centroid[j] + t * (centroid[j] - verts[worst][j]);
      }
      return p;
    };

    auto reflected = blend(1.0);
    double fr = f(reflected);
    ++evals;
    if (fr < fv[best]) {
      auto expanded = blend(2.0);
      double fe = f(expanded);
      ++evals;
      if (fe < fr) {
        verts[worst] = std::move(expanded);
        fv[worst] = fe;
      } else {
        verts[worst] = std::move(reflected);
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      verts[worst] = std::move(reflected);
      fv[worst] = fr;
    } else {
      bool outside = fr < fv[worst];
      auto contracted = blend(outside ? 0.5 : -0.5);
      double fc = f(contracted);
      ++evals;
      if (fc < std::min(fr, fv[worst])) {
        verts[worst] = std::move(contracted);
        fv[worst] = fc;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) {
            continue;
          }
          for (std::size_t j = 0; j < n; ++j) {
            verts[i][j] = verts[best][j] + 0.5 * (verts[i][j] - verts[best][j]);
          }
          fv[i] = f(verts[i]);
          ++evals;
        }
      }
    }
  }

  sort_order();
  return NmResult{verts[order[0]], fv[order[0]]};
}

void check_inputs(const std::vector<UnitVector> &x,
                  const std::vector<double> &z) {
  if (x.empty() || x.size() != z.size()) {
    throw std::invalid_argument(
        "GpModel::fit: need n >= 1 inputs with matching targets");
  }
  const std::size_t d = x[0].size();
  for (const auto &row : x) {
    if (row.size() != d) {
      throw std::invalid_argument("GpModel::fit: ragged input rows");
    }
    for (double v : row) {
      if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
        throw std::invalid_argument("GpModel::fit: inputs must lie in [0,1]^d");
      }
    }
  }
  for (double v : z) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("GpModel::fit: targets must be finite");
    }
  }
}

std::vector<Eigen::MatrixXd> pairwise_sq_diffs(const std::vector<UnitVector> &x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const std::size_t d = x[0].size();
  std::vector<Eigen::MatrixXd> out(d, Eigen::MatrixXd(n, n));
  for (std::size_t k = 0; k < d; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        double diff = x[static_cast<std::size_t>(i)][k] -
                      x[static_cast<std::size_t>(j)][k];
        out[k](i, j) = diff * diff;
        out[k](j, i) = diff * diff;
      }
    }
  }
  return out;
}

} // namespace

GpModel GpModel::fit(const std::vector<UnitVector> &x,
                     const std::vector<double> &z, Rng &rng,
                     const GpFitOptions &options) {
  check_inputs(x, z);
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();

  double z_mean = std::accumulate(z.begin(), z.end(), 0.0) /
                  static_cast<double>(n);
  double z_var = 0.0;
  for (double v : z) {
    z_var += (v - z_mean) * (v - z_mean);
  }
  z_var /= static_cast<double>(n);
  double z_std = z_var > 1e-24 ? std::sqrt(z_var) : 1.0;

  GpModel model;
  model.x_ = x;
  model.z_ = z;
  model.z_mean_ = z_mean;
  model.z_std_ = z_std;

  const std::vector<Eigen::MatrixXd> sq_diffs = pairwise_sq_diffs(x);
  Eigen::VectorXd z_standardized(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    z_standardized(static_cast<Eigen::Index>(i)) = (z[i] - z_mean) / z_std;
  }
  NllWorkspace base_ws;
  base_ws.sq_diffs = &sq_diffs;
  base_ws.z = &z_standardized;

  const bool fit_noise = !options.fixed_noise_variance.has_value();
  double fixed_sn2_std = 0.0;
  if (!fit_noise) {
    fixed_sn2_std =
        std::clamp(*options.fixed_noise_variance / (z_std * z_std), 1e-12, 1e3);
  }
  const std::size_t n_theta = d + 1 + (fit_noise ? 1 : 0);

  auto clamp_theta = [&](std::vector<double> &theta) {
    for (std::size_t k = 0; k < d; ++k) {
      theta[k] = std::clamp(theta[k], kLogLenLo, kLogLenHi);
    }
    theta[d] = std::clamp(theta[d], kLogSf2Lo, kLogSf2Hi);
    if (fit_noise) {
      theta[d + 1] = std::clamp(theta[d + 1], kLogSn2Lo, kLogSn2Hi);
    }
  };

  auto unpack = [&](const std::vector<double> &theta, std::vector<double> &ls,
                    double &sf2, double &sn2) {
    for (std::size_t k = 0; k < d; ++k) {
      ls[k] = std::exp(theta[k]);
    }
    sf2 = std::exp(theta[d]);
    sn2 = fit_noise ? std::exp(theta[d + 1]) : fixed_sn2_std;
  };

  const int restarts = std::max(1, options.restarts);
  const int max_evals = options.max_evals_per_restart > 0
                            ? options.max_evals_per_restart
                            : 20 + 10 * static_cast<int>(n_theta);

  std::vector<std::uint64_t> restart_seeds(restarts);
  for (auto &s : restart_seeds) {
    s = rng.next_u64();
  }

  std::vector<NmResult> results(restarts);
  std::vector<double> start_nll(restarts);

  parallel::for_each_index(static_cast<std::size_t>(restarts), [&](std::size_t i) {
    Rng restart_rng(restart_seeds[i]);
    std::vector<double> theta0(n_theta);
    for (std::size_t k = 0; k < d; ++k) {
      theta0[k] = std::log(0.05) +
                  restart_rng.next_double() * (std::log(2.0) - std::log(0.05));
    }
    theta0[d] = std::log(0.25) +
                restart_rng.next_double() * (std::log(4.0) - std::log(0.25));
    if (fit_noise) {
      theta0[d + 1] = std::log(1e-7) + restart_rng.next_double() *
                                           (std::log(1e-2) - std::log(1e-7));
    }

    NllWorkspace ws;
    ws.sq_diffs = &sq_diffs;
    ws.z = &z_standardized;
    std::vector<double> ls(d);
    auto objective = [&](const std::vector<double> &theta_in) {
      std::vector<double> theta = theta_in;
      clamp_theta(theta);
      double sf2, sn2;
      unpack(theta, ls, sf2, sn2);
      return negative_log_marginal(ws, ls, sf2, sn2, nullptr);
    };

    start_nll[i] = objective(theta0);
    NmResult res = nelder_mead(objective, theta0, 0.4, max_evals);
    // The start point is a simplex vertex, so the search never ends above it.
    if (start_nll[i] < res.fx) {
      res.x = theta0;
      res.fx = start_nll[i];
    }
    clamp_theta(res.x);
    results[i] = std::move(res);
  });

  // Lowest NLL wins; the variance split between signal and noise is
  // degenerate in the short-lengthscale regime, so near-ties break toward
  // the less-noisy explanation (then toward the earlier restart).
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    double tol = 1e-9 * (1.0 + std::abs(results[best].fx));
    if (results[i].fx < results[best].fx - tol) {
      best = i;
    } else if (fit_noise && std::isfinite(results[i].fx) &&
               results[i].fx <= results[best].fx + tol &&
               results[i].x[d + 1] < results[best].x[d + 1]) {
      best = i;
    }
  }
  if (!std::isfinite(results[best].fx)) {
    throw std::runtime_error(
        "GpModel::fit: Cholesky factorization failed at the jitter cap (1e-2); "
        "the kernel matrix is numerically indefinite for every restart");
  }

  std::vector<double> ls(d);
  double sf2, sn2;
  unpack(results[best].x, ls, sf2, sn2);

  // The likelihood is degenerate in the signal/noise split when the
  // lengthscales collapse (the data looks iid). Walk the noise down the
  // equivalent-likelihood ridge so flat optima resolve to the
  // interpolating model; any genuine likelihood cost stops the walk.
  double selected_nll = results[best].fx;
  if (fit_noise) {
    NllWorkspace polish_ws;
    polish_ws.sq_diffs = &sq_diffs;
    polish_ws.z = &z_standardized;
    double tol = 1e-7 * (1.0 + std::abs(selected_nll));
    double cur_nll = selected_nll;
    while (sn2 > std::exp(kLogSn2Lo) * (1.0 + 1e-9)) {
      double sn2_next = std::max(sn2 / 10.0, std::exp(kLogSn2Lo));
      double sf2_next = sf2 + (sn2 - sn2_next);
      if (std::log(sf2_next) > kLogSf2Hi) {
        break;
      }
      double nll_next =
          negative_log_marginal(polish_ws, ls, sf2_next, sn2_next, nullptr);
      if (!(nll_next <= selected_nll + tol)) {
        break;
      }
      sf2 = sf2_next;
      sn2 = sn2_next;
      cur_nll = nll_next;
    }
    double min_start = *std::min_element(start_nll.begin(), start_nll.end());
    if (cur_nll > min_start) {
      // Revert rather than end above a restart's starting likelihood.
      unpack(results[best].x, ls, sf2, sn2);
      cur_nll = selected_nll;
    }
    selected_nll = cur_nll;
  }

  model.diag_.restart_start_nll = std::move(start_nll);
  model.diag_.final_nll = selected_nll;

  // Rebuild the factorization at the selected hyperparameters.
  double jitter = 0.0;
  double nll = negative_log_marginal(base_ws, ls, sf2, sn2, &jitter);
  if (!std::isfinite(nll)) {
    throw std::runtime_error(
        "GpModel::fit: Cholesky factorization failed at the jitter cap (1e-2) "
        "while assembling the selected model");
  }
  model.diag_.jitter = jitter;

  model.assemble_from_ws(&base_ws, ls, sf2, sn2, jitter);
  return model;
}

GpModel GpModel::with_hyperparams(const std::vector<UnitVector> &x,
                                  const std::vector<double> &z,
                                  const GpHyperparams &hp) {
  check_inputs(x, z);
  const std::size_t d = x[0].size();
  if (hp.lengthscales.size() != d) {
    throw std::invalid_argument(
        "GpModel::with_hyperparams: lengthscale count must equal dimension");
  }

  GpModel model;
  model.x_ = x;
  model.z_ = z;
  model.z_mean_ = hp.mean;
  model.z_std_ = 1.0;

  const std::vector<Eigen::MatrixXd> sq_diffs = pairwise_sq_diffs(x);
  Eigen::VectorXd z_centered(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    z_centered(static_cast<Eigen::Index>(i)) = z[i] - hp.mean;
  }
  NllWorkspace ws;
  ws.sq_diffs = &sq_diffs;
  ws.z = &z_centered;

  double jitter = 0.0;
  double nll = negative_log_marginal(ws, hp.lengthscales, hp.signal_variance,
                                     hp.noise_variance, &jitter);
  if (!std::isfinite(nll)) {
    throw std::runtime_error(
        "GpModel::with_hyperparams: Cholesky factorization failed at the "
        "jitter cap (1e-2); the kernel matrix is numerically indefinite");
  }
  model.diag_.final_nll = nll;
  model.diag_.jitter = jitter;
  model.assemble_from_ws(&ws, hp.lengthscales, hp.signal_variance,
                         hp.noise_variance, jitter);
  return model;
}

void GpModel::assemble_from_ws(void *ws_ptr, const std::vector<double> &ls,
                               double sf2, double sn2, double jitter) {
  auto &ws = *static_cast<NllWorkspace *>(ws_ptr);
  const auto n = static_cast<Eigen::Index>(ws.z->size());

  Eigen::VectorXd alpha = ws.llt.solve(*ws.z);
  const Eigen::MatrixXd &l_mat = ws.llt.matrixLLT();

  chol_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  alpha_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    alpha_[static_cast<std::size_t>(i)] = alpha(i);
    for (Eigen::Index j = 0; j <= i; ++j) {
      chol_[static_cast<std::size_t>(i * n + j)] = l_mat(i, j);
    }
  }

  sf2_std_ = sf2;
  inv_sq_lengthscales_.resize(ls.size());
  for (std::size_t k = 0; k < ls.size(); ++k) {
    inv_sq_lengthscales_[k] = 1.0 / (ls[k] * ls[k]);
  }

  hp_.lengthscales = ls;
  hp_.signal_variance = sf2 * z_std_ * z_std_;
  hp_.noise_variance = sn2 * z_std_ * z_std_;
  hp_.mean = z_mean_;
  diag_.jitter = jitter * z_std_ * z_std_;
}

std::pair<double, double> GpModel::predict(const UnitVector &x) const {
  const std::size_t n = x_.size();
  const std::size_t d = inv_sq_lengthscales_.size();
  if (x.size() != d) {
    throw std::invalid_argument("GpModel::predict: wrong input dimension");
  }

  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double diff = x[j] - x_[i][j];
      r2 += diff * diff * inv_sq_lengthscales_[j];
    }
    k[i] = sf2_std_ * matern52(std::sqrt(r2), r2);
  }

  double mean_std = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_std += k[i] * alpha_[i];
  }

  // v = L^-1 k by forward substitution; var = sf2 - v.v
  std::vector<double> v = k;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = v[i];
    const double *row = &chol_[i * n];
    for (std::size_t j = 0; j < i; ++j) {
      sum -= row[j] * v[j];
    }
    v[i] = sum / row[i];
  }
  double var_std = sf2_std_;
  for (std::size_t i = 0; i < n; ++i) {
    var_std -= v[i] * v[i];
  }
  var_std = std::max(var_std, 0.0);

  return {z_mean_ + z_std_ * mean_std, z_std_ * z_std_ * var_std};
}

} // namespace squirrel
