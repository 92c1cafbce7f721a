#pragma once

// On-disk dataset layout:
//
//   <dir>/manifest.json        schema below, UTF-8
//   <dir>/masks/<id>_<k>.pbm   mask k of example <id>, binary P4
//
// manifest.json
//   version    "MAJOR.MINOR.PATCH"; readers accept the same MAJOR
//   set_name   string
//   synthetic  bool; when true every example has d1 == z_positions[0]
//   config     generator configuration (canvas fixes every mask's size)
//   examples   [{id, mask_paths[n], z_positions[n] (meters, ascending),
//                d1 (meters), ell_ratio, perturbed, object?}]
//
// Distances are meters.  Sets recorded in other units should be converted
// once on import; the depth model itself is unit free.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ranges>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "odms/errors.hpp"
#include "odms/featurize.hpp"
#include "odms/mask_synth.hpp"
#include "odms/pbm.hpp"

namespace odms {

inline constexpr const char* kManifestVersion = "1.0.0";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kMaskDir = "masks";

struct ManifestEntry {
  std::string id;
  std::vector<std::string> mask_paths;
  std::vector<double> z_positions;
  double d1 = 0.0;
  double ell_ratio = 0.0;
  bool perturbed = false;
  std::optional<ObjectSpec> object;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::string version = kManifestVersion;
  std::string set_name;
  bool synthetic = true;
  GenConfig config;
  std::vector<ManifestEntry> examples;
};

inline std::string example_id(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
  return buf;
}

// ---------------------------------------------------------------------------
// JSON mapping

inline nlohmann::json to_json(const GenConfig& c) {
  return {{"d_min", c.d_min},
          {"d_max", c.d_max},
          {"delta_z_min", c.delta_z_min},
          {"n_obs", c.n_obs},
          {"canvas", {{"height", c.canvas.height}, {"width", c.canvas.width}}},
          {"s_p_choices", c.s_p_choices},
          {"n_p_choices", c.n_p_choices},
          {"r_b_choices", c.r_b_choices},
          {"rho_b_choices", c.rho_b_choices},
          {"seed", c.seed}};
}

inline GenConfig gen_config_from_json(const nlohmann::json& j) {
  GenConfig c;
  c.d_min = j.at("d_min").get<double>();
  c.d_max = j.at("d_max").get<double>();
  c.delta_z_min = j.at("delta_z_min").get<double>();
  c.n_obs = j.at("n_obs").get<int>();
  c.canvas = {j.at("canvas").at("height").get<int>(), j.at("canvas").at("width").get<int>()};
  c.s_p_choices = j.at("s_p_choices").get<std::vector<int>>();
  c.n_p_choices = j.at("n_p_choices").get<std::vector<int>>();
  c.r_b_choices = j.at("r_b_choices").get<std::vector<double>>();
  c.rho_b_choices = j.at("rho_b_choices").get<std::vector<double>>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

// The flattened contour is not stored; it is rebuilt from the anchors.
inline nlohmann::json to_json(const ObjectSpec& o) {
  nlohmann::json anchors = nlohmann::json::array();
  for (auto p : o.anchors) anchors.push_back({p.x, p.y});
  return {{"s_p", o.s_p}, {"n_p", o.n_p}, {"r_b", o.r_b}, {"rho_b", o.rho_b}, {"anchors", anchors}};
}

inline ObjectSpec object_from_json(const nlohmann::json& j) {
  ObjectSpec o;
  o.s_p = j.at("s_p").get<int>();
  o.n_p = j.at("n_p").get<int>();
  o.r_b = j.at("r_b").get<double>();
  o.rho_b = j.at("rho_b").get<double>();
  for (const auto& p : j.at("anchors")) o.anchors.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  if (o.anchors.size() != static_cast<std::size_t>(o.n_p) || o.n_p < 3)
    throw ValidationError("object: anchor count does not match n_p");
  o.contour = bezier_contour(o.anchors, o.r_b, o.rho_b);
  return o;
}

inline nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json examples = nlohmann::json::array();
  for (const auto& e : m.examples) {
    nlohmann::json je = {{"id", e.id},
                         {"mask_paths", e.mask_paths},
                         {"z_positions", e.z_positions},
                         {"d1", e.d1},
                         {"ell_ratio", e.ell_ratio},
                         {"perturbed", e.perturbed}};
    if (e.object) je["object"] = to_json(*e.object);
    examples.push_back(std::move(je));
  }
  return {{"version", m.version},
          {"set_name", m.set_name},
          {"synthetic", m.synthetic},
          {"config", to_json(m.config)},
          {"examples", std::move(examples)}};
}

namespace detail {

inline int major_version(const std::string& v) {
  const auto dot = v.find('.');
  const std::string head = v.substr(0, dot);
  if (head.empty() || head.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("manifest: malformed version '" + v + "'");
  return std::stoi(head);
}

inline void validate_entry(const ManifestEntry& e, const DatasetManifest& m) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("manifest example " + e.id + ": " + what);
  };
  const auto n = static_cast<std::size_t>(m.config.n_obs);
  if (e.mask_paths.size() != n || e.z_positions.size() != n)
    fail("expected " + std::to_string(n) + " masks and positions");
  for (std::size_t i = 1; i < n; ++i)
    if (!(e.z_positions[i] > e.z_positions[i - 1])) fail("z_positions not strictly ascending");
  if (!(e.d1 > 0.0)) fail("d1 must be positive");
  if (m.synthetic && e.d1 != e.z_positions.front()) fail("synthetic example with d1 != z_1");
  if (!(e.ell_ratio > 0.0 && e.ell_ratio < 1.0)) fail("ell_ratio outside (0, 1)");
  for (const auto& p : e.mask_paths) {
    const std::filesystem::path rel(p);
    if (rel.is_absolute() || p.find("..") != std::string::npos) fail("mask path escapes dataset: " + p);
  }
}

}  // namespace detail

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
  DatasetManifest m;
  try {
    m.version = j.at("version").get<std::string>();
    if (detail::major_version(m.version) != detail::major_version(kManifestVersion))
      throw ValidationError("manifest: schema version " + m.version + " is not compatible with " +
                            kManifestVersion);
    m.set_name = j.at("set_name").get<std::string>();
    m.synthetic = j.at("synthetic").get<bool>();
    m.config = gen_config_from_json(j.at("config"));
    m.config.validate();
    std::set<std::string> seen;
    for (const auto& je : j.at("examples")) {
      ManifestEntry e;
      e.id = je.at("id").get<std::string>();
      e.mask_paths = je.at("mask_paths").get<std::vector<std::string>>();
      e.z_positions = je.at("z_positions").get<std::vector<double>>();
      e.d1 = je.at("d1").get<double>();
      e.ell_ratio = je.at("ell_ratio").get<double>();
      e.perturbed = je.at("perturbed").get<bool>();
      if (je.contains("object")) e.object = object_from_json(je.at("object"));
      if (!seen.insert(e.id).second) throw ValidationError("manifest: duplicate example id " + e.id);
      detail::validate_entry(e, m);
      m.examples.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Writing

/// Writes examples into a dataset directory.  write() may be called from
/// several threads for distinct indices; finish() writes the manifest in
/// index order, so the directory does not depend on call order.
class DatasetWriter {
 public:
  DatasetWriter(std::filesystem::path dir, std::string set_name, GenConfig config,
                bool synthetic = true)
      : dir_(std::move(dir)) {
    manifest_.set_name = std::move(set_name);
    manifest_.config = std::move(config);
    manifest_.synthetic = synthetic;
    std::error_code ec;
    std::filesystem::create_directories(dir_ / kMaskDir, ec);
    if (ec) throw IoError("cannot create " + (dir_ / kMaskDir).string() + ": " + ec.message());
  }

  void write(std::uint64_t index, const DepthExample& ex) { write(index, example_id(index), ex); }

  /// Stores `ex` under `id`; `order` fixes its position in the manifest.
  void write(std::uint64_t order, const std::string& id, const DepthExample& ex) {
    const auto& cfg = manifest_.config;
    if (ex.masks.size() != static_cast<std::size_t>(cfg.n_obs) || ex.track.size() != ex.masks.size())
      throw ValidationError("example " + id + ": expected " + std::to_string(cfg.n_obs) +
                            " observations");
    if (id.empty() || id.find_first_of("/\\") != std::string::npos || id.find("..") != std::string::npos)
      throw ValidationError("example id '" + id + "' is not a valid file stem");
    ManifestEntry e;
    e.id = id;
    for (std::size_t k = 0; k < ex.masks.size(); ++k) {
      if (ex.masks[k].extent() != cfg.canvas)
        throw ValidationError("example " + e.id + ": mask size differs from the canvas");
      std::string rel = std::string(kMaskDir) + "/" + e.id + "_" + std::to_string(k) + ".pbm";
      save_pbm(dir_ / rel, ex.masks[k]);
      e.mask_paths.push_back(std::move(rel));
    }
    e.z_positions.assign(ex.track.positions().begin(), ex.track.positions().end());
    e.d1 = ex.d1;
    e.ell_ratio = ex.ell_ratio;
    e.perturbed = ex.perturbed;
    e.object = ex.object;

    std::lock_guard lock(mutex_);
    if (!entries_.emplace(order, std::move(e)).second)
      throw ValidationError("example " + id + " written twice");
  }

  DatasetManifest finish() {
    std::lock_guard lock(mutex_);
    manifest_.examples.clear();
    for (auto& [index, e] : entries_) manifest_.examples.push_back(e);
    const auto path = dir_ / kManifestFile;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os << to_json(manifest_).dump(2) << '\n';
    if (!os) throw IoError("write failed: " + path.string());
    return manifest_;
  }

 private:
  std::filesystem::path dir_;
  DatasetManifest manifest_;
  std::mutex mutex_;
  std::map<std::uint64_t, ManifestEntry> entries_;
};

template <std::ranges::input_range R>
DatasetManifest write_dataset(R&& examples, const std::filesystem::path& dir,
                              const std::string& set_name, const GenConfig& config) {
  DatasetWriter writer(dir, set_name, config);
  std::uint64_t index = 0;
  for (auto&& ex : examples) writer.write(index++, ex);
  return writer.finish();
}

// ---------------------------------------------------------------------------
// Reading

/// Validated view of a dataset directory.  Examples are loaded on demand;
/// every const member is safe to call from several threads.
class DatasetReader {
 public:
  explicit DatasetReader(std::filesystem::path dir) : dir_(std::move(dir)) {
    const auto path = dir_ / kManifestFile;
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    nlohmann::json j;
    try {
      is >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
    manifest_ = manifest_from_json(j);
    for (std::size_t i = 0; i < manifest_.examples.size(); ++i) index_[manifest_.examples[i].id] = i;
  }

  const DatasetManifest& manifest() const noexcept { return manifest_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::size_t size() const noexcept { return manifest_.examples.size(); }

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto& e : manifest_.examples) out.push_back(e.id);
    return out;
  }

  DepthExample load(std::size_t i) const {
    const ManifestEntry& e = manifest_.examples.at(i);
    DepthExample ex;
    ex.track = CameraTrack(e.z_positions);
    for (const auto& rel : e.mask_paths) {
      Mask m = load_pbm(dir_ / rel);
      if (m.extent() != manifest_.config.canvas)
        throw ValidationError("example " + e.id + ": " + rel + " is " + std::to_string(m.height()) +
                              "x" + std::to_string(m.width()) + ", manifest canvas is " +
                              std::to_string(manifest_.config.canvas.height) + "x" +
                              std::to_string(manifest_.config.canvas.width));
      ex.masks.push_back(std::move(m));
    }
    ex.d1 = e.d1;
    ex.ell_ratio = e.ell_ratio;
    ex.object = e.object;
    ex.perturbed = e.perturbed;
    return ex;
  }

  DepthExample load(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ValidationError("no example with id " + id);
    return load(it->second);
  }

  std::vector<DepthExample> load_subset(const std::vector<std::string>& ids) const {
    std::vector<DepthExample> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(load(id));
    return out;
  }

  /// Lazy sequence over all examples in manifest order.
  auto examples() const {
    return std::views::iota(std::size_t{0}, size()) |
           std::views::transform([this](std::size_t i) { return load(i); });
  }

 private:
  std::filesystem::path dir_;
  DatasetManifest manifest_;
  std::map<std::string, std::size_t> index_;
};

inline std::vector<DepthExample> read_dataset(const std::filesystem::path& dir) {
  DatasetReader reader(dir);
  std::vector<DepthExample> out;
  out.reserve(reader.size());
  for (auto&& ex : reader.examples()) out.push_back(std::move(ex));
  return out;
}

// ---------------------------------------------------------------------------
// Network input exchange format (JSON): masks as row strings of '0'/'1'.

inline nlohmann::json to_json(const NetworkInput& in) {
  auto grid_rows = [](const Mask& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.height(); ++r) {
      std::string s;
      for (auto v : m.row(r)) s.push_back(v ? '1' : '0');
      rows.push_back(std::move(s));
    }
    return rows;
  };
  nlohmann::json masks = nlohmann::json::array();
  for (const auto& m : in.mask_stack) masks.push_back(grid_rows(m));
  nlohmann::json j = {{"masks", masks}, {"z_bar", in.z_bar}, {"delta_z", in.delta_z}};
  if (in.radial_image) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < in.radial_image->height(); ++r) {
      auto row = in.radial_image->row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["radial_image"] = std::move(rows);
  }
  return j;
}

inline NetworkInput network_input_from_json(const nlohmann::json& j) {
  NetworkInput in;
  try {
    for (const auto& jm : j.at("masks")) {
      const auto rows = jm.get<std::vector<std::string>>();
      Mask m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
      for (int r = 0; r < m.height(); ++r) {
        if (rows[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(m.width()))
          throw ValidationError("network input: ragged mask rows");
        for (int c = 0; c < m.width(); ++c) {
          const char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
          if (ch != '0' && ch != '1') throw ValidationError("network input: mask values must be 0/1");
          m(r, c) = ch == '1';
        }
      }
      in.mask_stack.push_back(std::move(m));
    }
    in.z_bar = j.at("z_bar").get<std::vector<double>>();
    in.delta_z = j.at("delta_z").get<std::vector<double>>();
    if (j.contains("radial_image")) {
      const auto rows = j.at("radial_image").get<std::vector<std::vector<double>>>();
      Grid<double> g(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
      for (int r = 0; r < g.height(); ++r)
        for (int c = 0; c < g.width(); ++c)
          g(r, c) = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
      in.radial_image = std::move(g);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("network input: ") + e.what());
  }
  return in;
}

}  // namespace odms
