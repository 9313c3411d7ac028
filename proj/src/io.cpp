#include "cinorm/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cinorm/error.hpp"

namespace cinorm {

using nlohmann::json;

TableFormat parse_format(const std::string& text) {
  if (text == "json") return TableFormat::Json;
  if (text == "tsv") return TableFormat::Tsv;
  throw InvalidInput("unknown format '" + text + "' (json or tsv)");
}

namespace {

std::vector<std::pair<std::string, std::string>> sorted_rows(const NormTable& table) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    rows.emplace_back(to_literal(table.index().at(i)), to_string(table.value_at(i)));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

json table_to_json(const NormTable& table) {
  json values = json::array();
  for (auto& [lit, v] : sorted_rows(table)) values.push_back(json::array({lit, v}));
  const auto& m = table.meta();
  json meta = {{"diameter", m.diameter ? json(to_string(*m.diameter)) : json(nullptr)},
               {"fine", m.fine},
               {"discrete", m.discrete},
               {"generator_set", m.generator_set}};
  return {{"group", table.group().name()}, {"norm", m.name}, {"values", values}, {"meta", meta}};
}

NormTable table_from_json(const json& j) {
  try {
    const Group g = Group::parse(j.at("group").get<std::string>());
    std::vector<std::pair<Element, Rational>> rows;
    for (const auto& row : j.at("values")) {
      if (!row.is_array() || row.size() != 2) throw InvalidInput("table row must be [literal, value]");
      rows.emplace_back(parse_element(g, row[0].get<std::string>()), parse_rational(row[1].get<std::string>()));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Element> elements;
    std::vector<Rational> values;
    for (auto& [e, v] : rows) {
      if (!elements.empty() && elements.back() == e) throw InvalidInput("duplicate element " + to_literal(e));
      elements.push_back(e);
      values.push_back(v);
    }
    const auto& jm = j.at("meta");
    NormMeta meta;
    meta.name = j.at("norm").get<std::string>();
    if (!jm.at("diameter").is_null()) meta.diameter = parse_rational(jm.at("diameter").get<std::string>());
    meta.fine = jm.at("fine").get<bool>();
    meta.discrete = jm.at("discrete").get<bool>();
    meta.generator_set = jm.at("generator_set").get<std::vector<std::string>>();
    return NormTable(g, std::make_shared<const ElementIndex>(std::move(elements)), std::move(values), std::move(meta));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed table JSON: ") + e.what());
  }
}

std::string table_to_tsv(const NormTable& table) {
  const auto& m = table.meta();
  std::ostringstream out;
  out << "# group: " << table.group().name() << "\n";
  out << "# norm: " << m.name << "\n";
  out << "# diameter: " << (m.diameter ? to_string(*m.diameter) : "unbounded") << "\n";
  out << "# fine: " << (m.fine ? "true" : "false") << "\n";
  out << "# discrete: " << (m.discrete ? "true" : "false") << "\n";
  out << "element\tvalue\n";
  for (auto& [lit, v] : sorted_rows(table)) out << lit << "\t" << v << "\n";
  return out.str();
}

std::string render_table(const NormTable& table, TableFormat format) {
  return format == TableFormat::Json ? dump_json(table_to_json(table)) : table_to_tsv(table);
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write to " + path.string() + " failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

namespace {

json key_json(const CacheKey& key) {
  return {{"descriptor", key.descriptor}, {"norm", key.norm}, {"generator_set", key.generator_set}};
}

}  // namespace

TableCache::TableCache(std::filesystem::path dir, std::string version)
    : dir_(std::move(dir)), version_(std::move(version)) {}

std::filesystem::path TableCache::default_dir() {
  if (const char* d = std::getenv("CINORM_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "cinorm";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "cinorm";
  return std::filesystem::path(".cinorm-cache");
}

std::string TableCache::hash(const CacheKey& key) const {
  json j = key_json(key);
  j["version"] = version_;
  return hex64(fnv1a64(j.dump()));
}

std::filesystem::path TableCache::entry_path(const CacheKey& key) const { return dir_ / (hash(key) + ".json"); }

std::optional<std::string> TableCache::get(const CacheKey& key) {
  const auto path = entry_path(key);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  auto evict = [&](const std::string& why) {
    warnings_.push_back("evicted " + path.string() + ": " + why);
    ++evictions_;
    std::filesystem::remove(path, ec);
    return std::nullopt;
  };
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    warnings_.push_back(e.what());
    return std::nullopt;
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return evict("unparseable entry");
  try {
    if (j.at("version").get<std::string>() != version_) return evict("version mismatch");
    if (j.at("key") != key_json(key)) return evict("key mismatch");
    std::string payload = j.at("payload").get<std::string>();
    if (j.at("checksum").get<std::string>() != hex64(fnv1a64(payload))) return evict("checksum mismatch");
    return payload;
  } catch (const json::exception&) {
    return evict("missing fields");
  }
}

void TableCache::put(const CacheKey& key, const std::string& payload) {
  json j = {{"version", version_},
            {"key", key_json(key)},
            {"checksum", hex64(fnv1a64(payload))},
            {"payload", payload}};
  try {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    const auto path = entry_path(key);
    const auto tmp = path.string() + ".tmp";
    write_text_file(tmp, dump_json(j));
    std::filesystem::rename(tmp, path, ec);
    if (ec) warnings_.push_back("cache rename failed: " + ec.message());
  } catch (const Error& e) {
    warnings_.push_back(e.what());
  }
}

std::vector<std::filesystem::path> TableCache::entries() const {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir_, ec)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir_, ec)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t TableCache::clear() {
  std::size_t n = 0;
  std::error_code ec;
  for (const auto& p : entries()) n += std::filesystem::remove(p, ec) ? 1 : 0;
  return n;
}

std::string cached_table_json(TableCache* cache, const CacheKey& key, const std::function<NormTable()>& compute) {
  if (cache) {
    if (auto hit = cache->get(key)) {
      try {
        table_from_json(json::parse(*hit));
        return *hit;
      } catch (const std::exception&) {
        std::error_code ec;
        std::filesystem::remove(cache->entry_path(key), ec);
      }
    }
  }
  std::string text = dump_json(table_to_json(compute()));
  if (cache) cache->put(key, text);
  return text;
}

}  // namespace cinorm
