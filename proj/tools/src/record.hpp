#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paleocorr/series.hpp"

namespace paleocorr::cli {

/// A proxy record file: CSV with '#'-prefixed metadata lines and a header
/// naming some subset of {depth, age, value}. At least one axis column
/// (depth or age) plus value must be present; rows are sorted by the axis
/// on load (age preferred when both exist).
struct RecordFile {
  std::map<std::string, std::string> metadata;
  std::vector<double> depth;  ///< empty when the column is absent
  std::vector<double> age;    ///< years BP, increasing downcore
  std::vector<double> value;

  bool has_depth() const { return !depth.empty(); }
  bool has_age() const { return !age.empty(); }

  /// Series on the age axis if present, otherwise on depth.
  TimeSeries series() const;
};

RecordFile load_record(const std::string& path);
void save_record(const std::string& path, const RecordFile& rec);

}  // namespace paleocorr::cli
