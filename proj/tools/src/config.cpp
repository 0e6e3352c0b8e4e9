#include "config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "paleocorr/errors.hpp"

namespace paleocorr::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

RunConfig::RunConfig() {
  values_ = {
      {"seed", "0"},
      {"out", "out"},
      {"workers", "1"},
      {"alpha", "0.05"},
      {"detrend_cutoff", "0"},
      {"curve", "toy"},
      {"alignment.method", "LI"},
      {"inference.n_steps", "30000"},
      {"inference.burn_fraction", "0.333333333333333"},
      {"inference.n_keep", "1000"},
      {"inference.adapt", "true"},
      {"calibrate.grid_step", "5"},
      {"simulate.n_obs", "100"},
      {"simulate.coupling", "0.5"},
      {"simulate.theta", "0.1"},
      {"simulate.mu_s", "0.35"},
      {"simulate.gamma_s", "1.5"},
      {"simulate.core_spacing", "1"},
      {"simulate.n_ens", "10"},
      {"chronology.n_dates", "16"},
      {"chronology.meas_sigma", "50"},
      {"chronology.grid_step", "5"},
      {"chronology.years_per_unit", "75"},
      {"chronology.age_offset", "500"},
      {"chronology.n_real_median", "50"},
      {"correlate.ensemble", "0"},
      {"correlate.dates_a", ""},
      {"correlate.dates_b", ""},
      {"windows.width", "5000"},
      {"windows.step", "2500"},
      {"windows.lag_scan", "false"},
      {"windows.lag_min", "-3000"},
      {"windows.lag_max", "3000"},
      {"windows.lag_step", "50"},
      {"experiment.n_pairs", "200"},
      {"experiment.methods", "LI,G(0.5),G(2),NV,S(1),S(2)"},
      {"experiment.scenarios", "equal,unequal,agemodel_median,agemodel_ensemble"},
      {"experiment.n_ens", "10"},
      {"experiment.core_spacing", "1"},
      {"experiment.coupling_override", "none"},
      {"experiment.metrics", "true"},
      {"experiment.roc", "false"},
  };
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw DomainError("config: unknown key '" + key + "'");
  it->second = value;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw DomainError("config: " + path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    try {
      set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (" + path + ":" +
                        std::to_string(lineno) + ")");
    }
  }
}

std::string RunConfig::env_name(const std::string& key) {
  std::string n = "PALEOCORR_";
  for (char c : key)
    n += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return n;
}

void RunConfig::apply_env() {
  for (auto& [key, value] : values_) {
    const char* v = std::getenv(env_name(key).c_str());
    if (v) value = v;
  }
}

const std::string& RunConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw DomainError("config: unknown key '" + key + "'");
  return it->second;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& s = get(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config: " + key + " = '" + s + "' is not a number");
  }
}

int RunConfig::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw DomainError("config: " + key + " must be an integer");
  return i;
}

std::uint64_t RunConfig::get_u64(const std::string& key) const {
  const std::string& s = get(key);
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("config: " + key + " = '" + s + "' is not an unsigned integer");
  }
}

bool RunConfig::get_bool(const std::string& key) const {
  const std::string& s = get(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw DomainError("config: " + key + " = '" + s + "' is not a boolean");
}

std::string RunConfig::resolved() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) out << key << " = " << value << "\n";
  return out.str();
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      const std::string t = trim(cur);
      if (!t.empty()) out.push_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  const std::string t = trim(cur);
  if (!t.empty()) out.push_back(t);
  return out;
}

}  // namespace paleocorr::cli
