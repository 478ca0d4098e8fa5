#pragma once

#include <string>
#include <vector>

#include "squirrel/acquisitions.hpp"
#include "squirrel/history.hpp"
#include "squirrel/surrogate.hpp"
#include "squirrel/transforms.hpp"

namespace squirrel {

/// One portfolio member: which surrogate to fit, on which output transform,
/// scored by which acquisition.
struct Triplet {
  SurrogateKind surrogate = SurrogateKind::gp;
  AcqKind acquisition;
  TransformKind transform = TransformKind::identity;
};

using Portfolio = std::vector<Triplet>;

/// The fixed eight-member portfolio, in canonical order.
Portfolio default_portfolio();

/// Canonical serialization ("gp+ei+identity,..."); golden-tested.
std::string portfolio_to_string(const Portfolio &portfolio);

/// Parse a portfolio override file: JSON array of
/// {"surrogate", "acquisition", "transform", "kappa"?}.
Portfolio portfolio_from_json(const std::string &json_text);

/// Rejects empty portfolios and log_ei paired with a non-log transform.
void validate_portfolio(const Portfolio &portfolio);

struct BoOptions {
  int batch_size = 8;
  bool shuffle_triplets = true; // identity order is for ablation tests only
  int random_candidates = 512;
  int local_chains = 10;
  int chain_steps = 20;
  double chain_sigma = 0.05;
  double duplicate_tol = 1e-9; // L-inf guard radius
  GpFitOptions gp;
  RfFitOptions rf;
};

/// One batch of proposals via the triplet portfolio with Kriging Believer
/// fantasies shared across triplets. Requires >= 2 trials with distinct
/// finite objectives; a triplet whose surrogate fit fails falls back to a
/// uniform random proposal, so the batch always has batch_size entries.
std::vector<Configuration> propose_batch_bo(const History &history,
                                            const ConfigSpace &space,
                                            const Portfolio &portfolio,
                                            Rng &rng,
                                            const BoOptions &options = {});

/// Maximize an acquisition over random candidates plus hill-climbing chains
/// seeded at the best training points; ties break toward the earliest
/// evaluated candidate.
UnitVector optimize_acq(const SurrogateModel &model,
                        const TransformState &transform_state,
                        const AcqKind &acquisition, double f_best,
                        const ConfigSpace &space, Rng &rng,
                        const BoOptions &options = {});

/// Raw-space believer value: the transform inverse of the predicted mean.
double fantasize(const SurrogateModel &model,
                 const TransformState &transform_state, const UnitVector &u);

} // namespace squirrel
