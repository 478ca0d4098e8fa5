#pragma once

#include <string>
#include <utility>
#include <variant>

#include "squirrel/gp.hpp"
#include "squirrel/rf.hpp"

namespace squirrel {

enum class SurrogateKind { gp, rf };

const char *to_string(SurrogateKind kind);
SurrogateKind surrogate_kind_from_string(const std::string &s);

/// Value-semantic wrapper so the proposal loop is surrogate-agnostic.
class SurrogateModel {
public:
  static SurrogateModel fit(SurrogateKind kind,
                            const std::vector<UnitVector> &x,
                            const std::vector<double> &z, Rng &rng,
                            const GpFitOptions &gp_options = {},
                            const RfFitOptions &rf_options = {});

  std::pair<double, double> predict(const UnitVector &x) const;
  SurrogateKind kind() const { return kind_; }
  const std::vector<UnitVector> &train_x() const;
  const std::vector<double> &train_z() const;

private:
  SurrogateModel(SurrogateKind kind, std::variant<GpModel, RfModel> model)
      : kind_(kind), model_(std::move(model)) {}

  SurrogateKind kind_;
  std::variant<GpModel, RfModel> model_;
};

} // namespace squirrel
