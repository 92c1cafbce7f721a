#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "odms/dataset_io.hpp"
#include "odms/errors.hpp"
#include "odms/geometry.hpp"
#include "odms/grid.hpp"
#include "odms/mask_synth.hpp"

namespace odms {

inline double percent_error(double d_true, double d_pred) {
  if (!(d_true > 0.0)) throw DomainError("percent_error: ground-truth depth must be positive");
  return std::abs(d_true - d_pred) / d_true * 100.0;
}

inline double abs_error(double d_true, double d_pred) { return std::abs(d_true - d_pred); }

/// How examples without a finite prediction (singular solves) enter the
/// means.  `cap` scores them at 100 %, `exclude` leaves them out; both count
/// them as failures.
enum class FailurePolicy { cap, exclude };

inline constexpr double kFailedPercentError = 100.0;

struct EvalRecord {
  std::string example_id;
  double d_true = 0.0;
  double d_pred = 0.0;
  double percent_error = 0.0;
  double abs_error = 0.0;
  bool failed = false;
};

inline EvalRecord make_record(std::string id, double d_true, double d_pred, FailurePolicy policy) {
  EvalRecord r{std::move(id), d_true, d_pred, 0.0, 0.0, !std::isfinite(d_pred)};
  if (!r.failed) {
    r.percent_error = percent_error(d_true, d_pred);
    r.abs_error = abs_error(d_true, d_pred);
  } else if (policy == FailurePolicy::cap) {
    if (!(d_true > 0.0)) throw DomainError("percent_error: ground-truth depth must be positive");
    r.percent_error = kFailedPercentError;
    r.abs_error = d_true;
  } else {
    r.percent_error = std::numeric_limits<double>::infinity();
    r.abs_error = std::numeric_limits<double>::infinity();
  }
  return r;
}

struct SetSummary {
  std::string set_name;
  std::int64_t n_examples = 0;
  double mean_percent_error = 0.0;
  double mean_abs_error = 0.0;
  std::int64_t failures = 0;
};

/// Arithmetic means over all scored records, no trimming.
inline SetSummary summarize(std::string set_name, const std::vector<EvalRecord>& records,
                            FailurePolicy policy = FailurePolicy::cap) {
  SetSummary s{std::move(set_name), static_cast<std::int64_t>(records.size()), 0.0, 0.0, 0};
  double pe = 0.0, ae = 0.0;
  std::int64_t scored = 0;
  for (const auto& r : records) {
    if (r.failed) {
      ++s.failures;
      if (policy == FailurePolicy::exclude) continue;
    }
    pe += r.percent_error;
    ae += r.abs_error;
    ++scored;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.mean_percent_error = scored ? pe / static_cast<double>(scored) : nan;
  s.mean_abs_error = scored ? ae / static_cast<double>(scored) : nan;
  return s;
}

// ---------------------------------------------------------------------------
// Connected components

/// Keeps the largest 8-connected foreground region.  Equal sizes go to the
/// region whose first pixel in raster order comes first.
inline Mask largest_component(const Mask& mask) {
  const int h = mask.height(), w = mask.width();
  std::vector<std::int32_t> parent;
  Grid<std::int32_t> label(h, w, -1);

  auto find = [&parent](std::int32_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // smaller label is the earlier-created region: keep it as the root
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  };

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!mask(r, c)) continue;
      std::int32_t lbl = -1;
      constexpr int kNeighbours[4][2] = {{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};
      for (auto [dr, dc] : kNeighbours) {
        const int rr = r + dr, cc = c + dc;
        if (!label.contains(rr, cc) || label(rr, cc) < 0) continue;
        if (lbl < 0)
          lbl = label(rr, cc);
        else
          unite(lbl, label(rr, cc));
      }
      if (lbl < 0) {
        lbl = static_cast<std::int32_t>(parent.size());
        parent.push_back(lbl);
      }
      label(r, c) = lbl;
    }
  }
  if (parent.empty()) return Mask(h, w);

  // Labels are created in raster order, so a root's label orders regions by
  // their first pixel.
  std::vector<std::int64_t> size(parent.size(), 0);
  for (auto l : label.data())
    if (l >= 0) ++size[static_cast<std::size_t>(find(l))];
  std::int32_t best = 0;
  for (std::size_t i = 1; i < size.size(); ++i)
    if (size[i] > size[static_cast<std::size_t>(best)]) best = static_cast<std::int32_t>(i);

  Mask out(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (label(r, c) >= 0 && find(label(r, c)) == best) out(r, c) = 1;
  return out;
}

// ---------------------------------------------------------------------------
// VOS-DE baseline

/// Indices of `used` observations out of `total`: both endpoints plus
/// evenly spaced intermediates.
inline std::vector<std::size_t> evenly_spaced(std::size_t total, std::size_t used) {
  if (used < 2 || used > total)
    throw ValidationError("n_used must lie in [2, " + std::to_string(total) + "], got " +
                          std::to_string(used));
  std::vector<std::size_t> idx(used);
  const double step = static_cast<double>(total - 1) / static_cast<double>(used - 1);
  for (std::size_t k = 0; k < used; ++k)
    idx[k] = static_cast<std::size_t>(std::lround(step * static_cast<double>(k)));
  idx.back() = total - 1;
  return idx;
}

/// Least-squares depth from the largest region of each selected mask.
/// Returns +inf when the observations are singular.
inline double vosde_predict(const DepthExample& example, std::size_t n_used) {
  if (example.masks.size() != example.track.size())
    throw ValidationError("run_vosde: mask count does not match the camera track");
  const auto idx = evenly_spaced(example.track.size(), n_used);
  std::vector<double> z, a;
  for (auto i : idx) {
    z.push_back(example.track[i]);
    a.push_back(static_cast<double>(pixel_area(largest_component(example.masks[i]))));
  }
  try {
    return solve_least_squares(CameraTrack(std::move(z)), AreaSeries(std::move(a))).d1;
  } catch (const SingularConfiguration&) {
    return std::numeric_limits<double>::infinity();
  }
}

inline EvalRecord run_vosde(const DepthExample& example, std::size_t n_used, std::string example_id = {},
                            FailurePolicy policy = FailurePolicy::cap) {
  return make_record(std::move(example_id), example.d1, vosde_predict(example, n_used), policy);
}

// ---------------------------------------------------------------------------
// Prediction files: one "example_id<TAB>depth_meters" per line.

using Prediction = std::pair<std::string, double>;

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_predictions(std::ostream& os, const std::vector<Prediction>& preds) {
  for (const auto& [id, d] : preds) os << id << '\t' << format_double(d) << '\n';
}

inline void save_predictions(const std::filesystem::path& path, const std::vector<Prediction>& preds) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_predictions(os, preds);
  if (!os) throw IoError("write failed: " + path.string());
}

inline std::vector<Prediction> read_predictions(std::istream& is) {
  std::vector<Prediction> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ValidationError("predictions line " + std::to_string(line_no) + ": expected id<TAB>depth");
    const std::string value = line.substr(tab + 1);
    double d = 0.0;
    try {
      std::size_t used = 0;
      d = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ValidationError("predictions line " + std::to_string(line_no) + ": bad depth '" + value + "'");
    }
    out.emplace_back(line.substr(0, tab), d);
  }
  return out;
}

inline std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_predictions(is);
}

struct EvalReport {
  std::vector<EvalRecord> records;  // sorted by example id
  SetSummary summary;
};

/// Scores predictions against ground truth (id, d1).  Every truth id needs
/// exactly one prediction and vice versa.
inline EvalReport evaluate_predictions(const std::vector<std::pair<std::string, double>>& truth,
                                       const std::vector<Prediction>& predictions,
                                       const std::string& set_name,
                                       FailurePolicy policy = FailurePolicy::cap) {
  std::map<std::string, double> pred;
  std::vector<std::string> duplicate, extra, missing;
  for (const auto& [id, d] : predictions)
    if (!pred.emplace(id, d).second) duplicate.push_back(id);

  std::map<std::string, double> gt(truth.begin(), truth.end());
  for (const auto& [id, d] : pred)
    if (!gt.count(id)) extra.push_back(id);
  for (const auto& [id, d] : gt)
    if (!pred.count(id)) missing.push_back(id);

  if (!duplicate.empty() || !extra.empty() || !missing.empty()) {
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
      return s;
    };
    std::string msg = "prediction/manifest mismatch:";
    if (!missing.empty()) msg += " missing [" + join(missing) + "]";
    if (!extra.empty()) msg += " extra [" + join(extra) + "]";
    if (!duplicate.empty()) msg += " duplicate [" + join(duplicate) + "]";
    throw ValidationError(msg);
  }

  EvalReport report;
  for (const auto& [id, d_true] : gt) report.records.push_back(make_record(id, d_true, pred.at(id), policy));
  report.summary = summarize(set_name, report.records, policy);
  return report;
}

inline EvalReport evaluate_predictions(const DatasetReader& dataset, const std::vector<Prediction>& predictions,
                                       FailurePolicy policy = FailurePolicy::cap) {
  std::vector<std::pair<std::string, double>> truth;
  for (const auto& e : dataset.manifest().examples) truth.emplace_back(e.id, e.d1);
  return evaluate_predictions(truth, predictions, dataset.manifest().set_name, policy);
}

// ---------------------------------------------------------------------------
// Summary CSV: set,n,mean_percent_error,mean_abs_error,failures

inline constexpr const char* kSummaryHeader = "set,n,mean_percent_error,mean_abs_error,failures";

inline void write_summary_csv(std::ostream& os, const std::vector<SetSummary>& rows) {
  os << kSummaryHeader << '\n';
  for (const auto& s : rows)
    os << s.set_name << ',' << s.n_examples << ',' << format_double(s.mean_percent_error) << ','
       << format_double(s.mean_abs_error) << ',' << s.failures << '\n';
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

inline std::vector<SetSummary> read_summary_csv(std::istream& is, const std::string& source = "summary") {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError(source + ": empty summary file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSummaryHeader)
    throw ValidationError(source + ": column mismatch, expected '" + std::string(kSummaryHeader) + "'");
  std::vector<SetSummary> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 5)
      throw ValidationError(source + " line " + std::to_string(line_no) + ": column mismatch");
    try {
      out.push_back({cells[0], std::stoll(cells[1]), std::stod(cells[2]), std::stod(cells[3]),
                     std::stoll(cells[4])});
    } catch (const std::exception&) {
      throw ValidationError(source + " line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Method x set tables

struct TableRow {
  std::string method;
  std::vector<std::optional<double>> cells;  // one per set column
  std::optional<double> all_sets;            // unweighted mean of present cells
};

inline std::optional<double> unweighted_mean(const std::vector<std::optional<double>>& cells) {
  double sum = 0.0;
  int n = 0;
  for (const auto& c : cells)
    if (c) {
      sum += *c;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / n;
}

inline TableRow make_table_row(std::string method, const std::vector<std::string>& set_order,
                               const std::vector<SetSummary>& summaries) {
  TableRow row{std::move(method), {}, std::nullopt};
  for (const auto& set : set_order) {
    auto it = std::find_if(summaries.begin(), summaries.end(),
                           [&](const SetSummary& s) { return s.set_name == set; });
    row.cells.push_back(it == summaries.end() ? std::nullopt : std::optional<double>(it->mean_percent_error));
  }
  row.all_sets = unweighted_mean(row.cells);
  return row;
}

inline std::string format_cell(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return buf;
}

inline void write_table_csv(std::ostream& os, const std::vector<std::string>& set_order,
                            const std::vector<TableRow>& rows) {
  os << "method";
  for (const auto& s : set_order) os << ',' << s;
  os << ",All Sets\n";
  for (const auto& r : rows) {
    os << r.method;
    for (const auto& c : r.cells) os << ',' << format_cell(c);
    os << ',' << format_cell(r.all_sets) << '\n';
  }
}

}  // namespace odms
