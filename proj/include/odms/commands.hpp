#pragma once

// Subcommand bodies behind the `odms` executable.  Each returns a process
// exit code; argument parsing lives in tools/odms_cli.cpp.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "odms/dataset_io.hpp"
#include "odms/errors.hpp"
#include "odms/eval.hpp"
#include "odms/mask_synth.hpp"
#include "odms/parallel.hpp"
#include "odms/perturb.hpp"

namespace odms::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kDataValidation = 3,
  kNumericalFailure = 4,
};

struct GenOptions {
  std::uint64_t count = 0;
  int n_obs = 10;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  bool perturb = false;
  std::string set_name = "normal";
  std::optional<double> d_min, d_max, delta_z_min;
  std::optional<int> height, width;
};

struct PerturbOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  std::uint64_t seed = 0;
  std::optional<std::string> set_name;
};

struct VosdeOptions {
  std::filesystem::path data;
  std::size_t n_used = 10;
  std::filesystem::path pred;
  std::optional<std::filesystem::path> summary;
  bool no_cap = false;
};

struct EvalOptions {
  std::filesystem::path data;
  std::filesystem::path pred;
  std::optional<std::filesystem::path> summary;
  bool no_cap = false;
};

struct TablesOptions {
  std::vector<std::string> rows;  // METHOD=summary.csv[,summary.csv...]
  std::vector<std::string> sets{"Robot", "Driving", "Normal", "Perturb"};
  std::optional<std::filesystem::path> out;
};

namespace detail {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kDataValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kDataValidation;
  } catch (const SingularConfiguration& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

inline bool empty_or_missing(const std::filesystem::path& dir) {
  std::error_code ec;
  return !std::filesystem::exists(dir, ec) || std::filesystem::is_empty(dir, ec);
}

inline void save_summary(const std::filesystem::path& path, const SetSummary& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_summary_csv(os, {s});
}

inline int report(const SetSummary& s, const std::optional<std::filesystem::path>& summary_path,
                  std::ostream& out, std::ostream& err) {
  write_summary_csv(out, {s});
  if (summary_path) save_summary(*summary_path, s);
  if (s.failures > 0) err << "warning: " << s.failures << " example(s) without a finite prediction\n";
  return std::isfinite(s.mean_percent_error) ? kOk : kNumericalFailure;
}

}  // namespace detail

inline GenConfig make_config(const GenOptions& o) {
  GenConfig c;
  c.n_obs = o.n_obs;
  c.seed = o.seed;
  if (o.d_min) c.d_min = *o.d_min;
  if (o.d_max) c.d_max = *o.d_max;
  if (o.delta_z_min) c.delta_z_min = *o.delta_z_min;
  if (o.height) c.canvas.height = *o.height;
  if (o.width) c.canvas.width = *o.width;
  return c;
}

inline int cmd_gen(const GenOptions& o, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  GenConfig config = make_config(o);
  try {
    config.validate();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (!detail::empty_or_missing(o.out)) {
    err << "error: output directory " << o.out << " is not empty\n";
    return kUsage;
  }
  return detail::guarded(err, [&] {
    DatasetWriter writer(o.out, o.set_name, config);
    parallel_for(o.count, worker_count(), [&](std::size_t k) {
      DepthExample ex = generate_example(config, k);
      if (o.perturb) ex = perturb_example(std::move(ex), config.seed, k);
      writer.write(k, ex);
    });
    const auto manifest = writer.finish();
    out << "wrote " << manifest.examples.size() << " examples x " << config.n_obs << " masks to "
        << o.out.string() << '\n';
    return kOk;
  });
}

inline int cmd_perturb(const PerturbOptions& o, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (!detail::empty_or_missing(o.out)) {
    err << "error: output directory " << o.out << " is not empty\n";
    return kUsage;
  }
  return detail::guarded(err, [&] {
    const DatasetReader reader(o.data);
    const auto& m = reader.manifest();
    DatasetWriter writer(o.out, o.set_name.value_or(m.set_name + "-perturb"), m.config, m.synthetic);
    parallel_for(reader.size(), worker_count(), [&](std::size_t i) {
      writer.write(i, m.examples[i].id, perturb_example(reader.load(i), o.seed, i));
    });
    writer.finish();
    out << "perturbed " << reader.size() << " examples into " << o.out.string() << '\n';
    return kOk;
  });
}

inline int cmd_vosde(const VosdeOptions& o, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const DatasetReader reader(o.data);
    const auto n = static_cast<std::size_t>(reader.manifest().config.n_obs);
    if (o.n_used < 2 || o.n_used > n)
      throw ValidationError("--n-used " + std::to_string(o.n_used) + " outside [2, " + std::to_string(n) + "]");

    std::vector<Prediction> preds(reader.size());
    parallel_for(reader.size(), worker_count(), [&](std::size_t i) {
      preds[i] = {reader.manifest().examples[i].id, vosde_predict(reader.load(i), o.n_used)};
    });
    save_predictions(o.pred, preds);
    const auto policy = o.no_cap ? FailurePolicy::exclude : FailurePolicy::cap;
    return detail::report(evaluate_predictions(reader, preds, policy).summary, o.summary, out, err);
  });
}

inline int cmd_eval(const EvalOptions& o, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const DatasetReader reader(o.data);
    const auto policy = o.no_cap ? FailurePolicy::exclude : FailurePolicy::cap;
    return detail::report(evaluate_predictions(reader, load_predictions(o.pred), policy).summary,
                          o.summary, out, err);
  });
}

inline int cmd_tables(const TablesOptions& o, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    std::vector<TableRow> rows;
    for (const auto& spec : o.rows) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
        throw ValidationError("--row expects METHOD=summary.csv[,summary.csv...], got '" + spec + "'");
      const std::string method = spec.substr(0, eq);
      std::vector<SetSummary> summaries;
      for (const auto& file : odms::detail::split_csv(spec.substr(eq + 1))) {
        std::ifstream is(file, std::ios::binary);
        if (!is) throw IoError("cannot open " + file);
        for (auto& s : read_summary_csv(is, file)) summaries.push_back(std::move(s));
      }
      TableRow row = make_table_row(method, o.sets, summaries);
      for (std::size_t k = 0; k < o.sets.size(); ++k)
        if (!row.cells[k]) err << "warning: " << method << " has no summary for set " << o.sets[k] << '\n';
      rows.push_back(std::move(row));
    }
    if (o.out) {
      std::ofstream os(*o.out, std::ios::binary);
      if (!os) throw IoError("cannot open " + o.out->string() + " for writing");
      write_table_csv(os, o.sets, rows);
    } else {
      write_table_csv(out, o.sets, rows);
    }
    return kOk;
  });
}

}  // namespace odms::cli
