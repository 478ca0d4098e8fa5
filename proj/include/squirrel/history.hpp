#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "squirrel/space.hpp"

namespace squirrel {

enum class StageTag { warmstart, de_init, bo, de_final };

const char *to_string(StageTag tag);
StageTag stage_tag_from_string(const std::string &s);

struct Trial {
  Configuration config;
  UnitVector u; // cached encode(config)
  double y;     // minimized; +inf marks a failed evaluation
  int batch_index = 0;
  StageTag stage = StageTag::warmstart;
};

struct Incumbent {
  std::size_t trial_index;
  Configuration config;
  double y;
};

struct Design {
  std::vector<UnitVector> x;
  std::vector<double> y;
};

/// Append-only trial ledger. Single writer; reads are safe between
/// mutations.
class History {
public:
  explicit History(ConfigSpace space) : space_(std::move(space)) {}

  const ConfigSpace &space() const { return space_; }
  const std::vector<Trial> &trials() const { return trials_; }
  std::size_t size() const { return trials_.size(); }

  /// Append a trial. y must not be NaN (callers map failures to +inf).
  /// The incumbent moves only on strict improvement, so ties keep the
  /// earliest trial.
  void record(const Configuration &config, double y, int batch_index,
              StageTag stage);

  /// Best finite trial, earliest on ties; nullopt when no finite y exists.
  std::optional<Incumbent> incumbent() const;

  /// Rows in insertion order. Infinite y is imputed to
  /// max_finite + 3 * (max_finite - min_finite); with no finite y at all the
  /// design is empty.
  Design design_matrix() const;

  /// Count of distinct finite objective values (used by the BO gate).
  std::size_t distinct_finite_values() const;

  /// CSV export: batch_index, stage_tag, one column per parameter, y.
  void to_csv(std::ostream &out) const;
  static History from_csv(ConfigSpace space, std::istream &in);

private:
  ConfigSpace space_;
  std::vector<Trial> trials_;
  std::optional<std::size_t> incumbent_idx_;
};

} // namespace squirrel
