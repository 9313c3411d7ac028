#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cinorm/norms.hpp"

namespace cinorm {

inline constexpr const char* kToolVersion = "1.0.0";

enum class TableFormat { Json, Tsv };
TableFormat parse_format(const std::string& text);

/// {group, norm, values: [[literal, "p/q"], ...], meta: {diameter, fine,
/// discrete, generator_set}} with values sorted by literal.
nlohmann::json table_to_json(const NormTable& table);
NormTable table_from_json(const nlohmann::json& j);
/// Same row order as the JSON form, preceded by "# key: value" lines.
std::string table_to_tsv(const NormTable& table);
std::string render_table(const NormTable& table, TableFormat format);

/// Pretty-printed with sorted keys and a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Throws Error on IO failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

struct CacheKey {
  std::string descriptor;
  std::string norm;
  std::vector<std::string> generator_set;
};

/// One JSON file per key under `dir`, named by the hash of the key and the
/// tool version. Entries carry the key, version and a payload checksum;
/// anything that fails to parse or verify is deleted and reported as a miss.
/// IO problems never throw; they land in warnings().
class TableCache {
 public:
  explicit TableCache(std::filesystem::path dir, std::string version = kToolVersion);
  /// CINORM_CACHE_DIR, else $XDG_CACHE_HOME/cinorm, else $HOME/.cache/cinorm.
  static std::filesystem::path default_dir();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path entry_path(const CacheKey& key) const;
  std::string hash(const CacheKey& key) const;

  std::optional<std::string> get(const CacheKey& key);
  void put(const CacheKey& key, const std::string& payload);
  /// Number of entries removed.
  std::size_t clear();
  std::vector<std::filesystem::path> entries() const;

  const std::vector<std::string>& warnings() const { return warnings_; }
  std::size_t evictions() const { return evictions_; }

 private:
  std::filesystem::path dir_;
  std::string version_;
  std::vector<std::string> warnings_;
  std::size_t evictions_ = 0;
};

/// Serialized table JSON, from the cache when possible. A miss computes the
/// table, stores its JSON text and returns the same text.
std::string cached_table_json(TableCache* cache, const CacheKey& key, const std::function<NormTable()>& compute);

}  // namespace cinorm
