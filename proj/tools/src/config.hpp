#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace paleocorr::cli {

/// Flat dotted-key configuration: built-in defaults, overridden by a config
/// file, then by PALEOCORR_* environment variables, then by command flags.
/// Unknown keys are a hard error so typos never pass silently.
class RunConfig {
 public:
  RunConfig();

  void load_file(const std::string& path);
  void apply_env();
  void set(const std::string& key, const std::string& value);

  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  /// Sorted key = value dump; written next to every command's outputs.
  std::string resolved() const;

  /// "PALEOCORR_" + key uppercased with dots replaced by underscores.
  static std::string env_name(const std::string& key);

 private:
  std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(const std::string& csv);

}  // namespace paleocorr::cli
