#include "squirrel/surrogate.hpp"

#include "squirrel/errors.hpp"

namespace squirrel {

const char *to_string(SurrogateKind kind) {
  return kind == SurrogateKind::gp ? "gp" : "rf";
}

SurrogateKind surrogate_kind_from_string(const std::string &s) {
  if (s == "gp")
    return SurrogateKind::gp;
  if (s == "rf")
    return SurrogateKind::rf;
  throw ConfigError("unknown surrogate kind '" + s + "'");
}

SurrogateModel SurrogateModel::fit(SurrogateKind kind,
                                   const std::vector<UnitVector> &x,
                                   const std::vector<double> &z, Rng &rng,
                                   const GpFitOptions &gp_options,
                                   const RfFitOptions &rf_options) {
  if (kind == SurrogateKind::gp) {
    return SurrogateModel(kind, GpModel::fit(x, z, rng, gp_options));
  }
  return SurrogateModel(kind, RfModel::fit(x, z, rng, rf_options));
}

std::pair<double, double> SurrogateModel::predict(const UnitVector &x) const {
  return std::visit([&](const auto &m) { return m.predict(x); }, model_);
}

const std::vector<UnitVector> &SurrogateModel::train_x() const {
  return std::visit([](const auto &m) -> const std::vector<UnitVector> & {
    return m.train_x();
  }, model_);
}

const std::vector<double> &SurrogateModel::train_z() const {
  return std::visit([](const auto &m) -> const std::vector<double> & {
    return m.train_z();
  }, model_);
}

} // namespace squirrel
