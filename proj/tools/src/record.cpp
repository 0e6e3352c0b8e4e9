#include "record.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
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

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  return out;
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return std::string(buf);
}

}  // namespace

TimeSeries RecordFile::series() const {
  const std::vector<double>& axis = has_age() ? age : depth;
  return TimeSeries(axis, value);
}

RecordFile load_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("record: cannot open " + path);
  RecordFile rec;
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const auto colon = t.find(':');
      if (colon != std::string::npos)
        rec.metadata[trim(t.substr(1, colon - 1))] = trim(t.substr(colon + 1));
      continue;
    }
    const auto fields = split_csv(t);
    if (header.empty()) {
      header = fields;
      for (const auto& h : header)
        if (h != "depth" && h != "age" && h != "value")
          throw DataError("record: " + path + ":" + std::to_string(lineno) +
                          ": unknown column '" + h + "'");
      cols.resize(header.size());
      continue;
    }
    if (fields.size() != header.size())
      throw DataError("record: " + path + ":" + std::to_string(lineno) +
                      ": expected " + std::to_string(header.size()) + " fields");
    for (std::size_t k = 0; k < fields.size(); ++k) {
      try {
        cols[k].push_back(std::stod(fields[k]));
      } catch (const std::exception&) {
        throw DataError("record: " + path + ":" + std::to_string(lineno) +
                        ": '" + fields[k] + "' is not a number");
      }
    }
  }
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == "depth") rec.depth = std::move(cols[k]);
    else if (header[k] == "age") rec.age = std::move(cols[k]);
    else rec.value = std::move(cols[k]);
  }
  if (rec.value.empty()) throw DataError("record: " + path + ": no value column");
  if (!rec.has_depth() && !rec.has_age())
    throw DataError("record: " + path + ": needs a depth or age column");

  const std::vector<double>& axis = rec.has_age() ? rec.age : rec.depth;
  std::vector<std::size_t> order(axis.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return axis[a] < axis[b]; });
  auto permute = [&](std::vector<double>& v) {
    if (v.empty()) return;
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[order[i]];
    v = std::move(w);
  };
  permute(rec.depth);
  permute(rec.age);
  permute(rec.value);
  return rec;
}

void save_record(const std::string& path, const RecordFile& rec) {
  std::ofstream out(path);
  if (!out) throw DataError("record: cannot write " + path);
  for (const auto& [k, v] : rec.metadata) out << "# " << k << ": " << v << "\n";
  std::string header;
  if (rec.has_depth()) header += "depth,";
  if (rec.has_age()) header += "age,";
  header += "value";
  out << header << "\n";
  for (std::size_t i = 0; i < rec.value.size(); ++i) {
    if (rec.has_depth()) out << fmt_num(rec.depth[i]) << ',';
    if (rec.has_age()) out << fmt_num(rec.age[i]) << ',';
    out << fmt_num(rec.value[i]) << "\n";
  }
  if (!out) throw DataError("record: write failed for " + path);
}

}  // namespace paleocorr::cli
