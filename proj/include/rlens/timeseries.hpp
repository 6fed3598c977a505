#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rlens/error.hpp"
#include "rlens/rng.hpp"

namespace rlens {

/// Half-open row range [begin, end) into a time series.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - begin; }
};

inline bool ranges_overlap(const IndexRange& a, const IndexRange& b) {
  return a.begin < b.end && b.begin < a.end;
}

struct PhaseSplit {
  IndexRange train;
  IndexRange validation;
  IndexRange test;
};

/// One phase's slice of the demand/solar series. `offset` is the absolute
/// index of the first row, so diurnal features stay aligned to the original
/// file.
struct Series {
  std::vector<double> demand_kw;
  std::vector<double> solar_kw;
  std::size_t offset = 0;
  std::size_t size() const { return demand_kw.size(); }
};

struct PhasedSeries {
  Series train;
  Series validation;
  Series test;
};

namespace detail {

inline Series slice_series(const std::vector<double>& demand, const std::vector<double>& solar,
                           const IndexRange& range, const char* phase_name) {
  if (range.end > demand.size()) {
    throw ConfigError(std::string(phase_name) + " range [" + std::to_string(range.begin) + "," +
                      std::to_string(range.end) + ") exceeds series length " +
                      std::to_string(demand.size()));
  }
  if (range.begin >= range.end) {
    throw ConfigError(std::string(phase_name) + " phase slice is empty");
  }
  Series s;
  s.offset = range.begin;
  s.demand_kw.assign(demand.begin() + static_cast<std::ptrdiff_t>(range.begin),
                     demand.begin() + static_cast<std::ptrdiff_t>(range.end));
  s.solar_kw.assign(solar.begin() + static_cast<std::ptrdiff_t>(range.begin),
                    solar.begin() + static_cast<std::ptrdiff_t>(range.end));
  return s;
}

inline void check_disjoint(const PhaseSplit& split) {
  if (ranges_overlap(split.train, split.validation) || ranges_overlap(split.train, split.test) ||
      ranges_overlap(split.validation, split.test)) {
    throw ConfigError("phase ranges overlap: train/validation/test must be disjoint");
  }
}

}  // namespace detail

/// Parses CSV rows `step,demand_kw,solar_kw` and slices them into the three
/// phases. Rejects negative or non-finite values, overlapping ranges and
/// empty slices.
inline PhasedSeries ingest_timeseries_stream(std::istream& in, const PhaseSplit& split,
                                             const std::string& origin = "<stream>") {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty file");
  // tolerate a UTF-8 BOM and trailing CR
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "step,demand_kw,solar_kw") {
    throw ParseError(origin + ":1: expected header 'step,demand_kw,solar_kw', got '" + line + "'");
  }

  std::vector<double> demand;
  std::vector<double> solar;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string step_s, demand_s, solar_s, extra;
    if (!std::getline(row, step_s, ',') || !std::getline(row, demand_s, ',') ||
        !std::getline(row, solar_s, ',')) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 3 comma-separated fields");
    }
    if (std::getline(row, extra, ',')) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": too many fields");
    }
    double d = 0.0, s = 0.0;
    try {
      std::size_t pos = 0;
      (void)std::stol(step_s, &pos);
      if (pos != step_s.size()) throw std::invalid_argument(step_s);
      d = std::stod(demand_s, &pos);
      if (pos != demand_s.size()) throw std::invalid_argument(demand_s);
      s = std::stod(solar_s, &pos);
      if (pos != solar_s.size()) throw std::invalid_argument(solar_s);
    } catch (const std::exception&) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
    }
    if (!std::isfinite(d) || !std::isfinite(s) || d < 0.0 || s < 0.0) {
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": demand_kw and solar_kw must be finite and >= 0");
    }
    demand.push_back(d);
    solar.push_back(s);
  }

  detail::check_disjoint(split);
  PhasedSeries out;
  out.train = detail::slice_series(demand, solar, split.train, "train");
  out.validation = detail::slice_series(demand, solar, split.validation, "validation");
  out.test = detail::slice_series(demand, solar, split.test, "test");
  return out;
}

inline PhasedSeries ingest_timeseries(const std::string& path, const PhaseSplit& split) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open time series file: " + path);
  return ingest_timeseries_stream(in, split, path);
}

/// The bundled synthetic profile: a diurnal demand curve plus a clear-sky
/// solar bell, both with seeded noise. 96 steps per day; energy accounting
/// treats each step as one hour.
inline void synthetic_timeseries(std::vector<double>& demand, std::vector<double>& solar,
                                 std::size_t days = 10, std::size_t steps_per_day = 96,
                                 std::uint64_t seed = 20240501ull) {
  Rng rng(seed);
  const std::size_t n = days * steps_per_day;
  demand.resize(n);
  solar.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double day_frac = static_cast<double>(k % steps_per_day) / static_cast<double>(steps_per_day);
    const double theta = 2.0 * M_PI * day_frac;
    double d = 4.0 + 2.0 * std::sin(theta - 2.0) + 0.8 * std::sin(2.0 * theta + 0.7) +
               rng.uniform(-0.4, 0.4);
    demand[k] = std::max(0.2, d);
    double s = 0.0;
    if (day_frac > 0.25 && day_frac < 0.75) {
      s = 7.5 * std::sin(M_PI * (day_frac - 0.25) / 0.5);
      s *= 1.0 + rng.uniform(-0.15, 0.15);
    }
    solar[k] = std::max(0.0, s);
  }
}

inline void write_timeseries_csv(std::ostream& out, const std::vector<double>& demand,
                                 const std::vector<double>& solar) {
  out << "step,demand_kw,solar_kw\n";
  char buf[96];
  for (std::size_t k = 0; k < demand.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f\n", k, demand[k], solar[k]);
    out << buf;
  }
}

/// 70/10/20 split used for the bundled series (960 rows: 672/96/192).
inline PhaseSplit default_phase_split(std::size_t n) {
  PhaseSplit split;
  split.train = {0, (n * 7) / 10};
  split.validation = {split.train.end, (n * 8) / 10};
  split.test = {split.validation.end, n};
  return split;
}

}  // namespace rlens
