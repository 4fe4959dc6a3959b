#include "pufent/store.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace pufent {

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) {
      throw FormatError("line " + std::to_string(number_ + 1) + " lacks a newline terminator");
    }
    line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++number_;
    return true;
  }

  bool peek_key(std::string_view key) const {
    return text_.substr(pos_).starts_with(std::string(key) + "=");
  }

  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

template <typename Int>
Int parse_int(std::string_view token, std::size_t line) {
  Int value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw FormatError("line " + std::to_string(line) + ": bad integer '" + std::string(token) + "'");
  }
  return value;
}

std::string_view header_value(LineReader& reader, std::string_view key) {
  std::string_view line;
  if (!reader.next(line)) throw FormatError("missing header field '" + std::string(key) + "'");
  if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != '=') {
    throw FormatError("line " + std::to_string(reader.number()) + ": expected '" +
                      std::string(key) + "=', got '" + std::string(line) + "'");
  }
  return line.substr(key.size() + 1);
}

}  // namespace

std::string to_text(const ClassMap& map) {
  std::ostringstream out;
  out << kClassMapMagic << ' ' << kClassMapVersion << '\n';
  out << "n=" << map.n << '\n';
  out << "dist=" << (map.distribution ? to_string(*map.distribution) : "none") << '\n';
  out << "seed=" << map.seed << '\n';
  out << "shards=" << map.shards << '\n';
  out << "rounds=" << map.rounds << '\n';
  if (map.poisson_n) out << "poisson_n=" << *map.poisson_n << '\n';
  out << "rejected=" << map.rejected << '\n';
  if (map.exact) out << "exact=true\n";
  for (const auto& [key, count] : map.counts) {
    for (std::int64_t x : key) out << x << ' ';
    out << count << '\n';
  }
  return out.str();
}

ClassMap from_text(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw FormatError("empty class map file");
  const std::string magic(kClassMapMagic);
  if (!line.starts_with(magic + " ")) throw FormatError("not a class map file");
  if (line.substr(magic.size() + 1) != kClassMapVersion) {
    throw VersionError("unsupported class map version '" +
                       std::string(line.substr(magic.size() + 1)) + "'");
  }

  ClassMap map;
  map.n = parse_int<int>(header_value(reader, "n"), reader.number());
  if (map.n < 1 || map.n > kMaxN) throw FormatError("n out of range");
  const std::string_view dist = header_value(reader, "dist");
  if (dist == "none") {
    map.distribution = std::nullopt;
  } else {
    try {
      map.distribution = parse_distribution(dist);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  map.seed = parse_int<std::uint64_t>(header_value(reader, "seed"), reader.number());
  map.shards = parse_int<std::uint32_t>(header_value(reader, "shards"), reader.number());
  map.rounds = parse_int<std::uint64_t>(header_value(reader, "rounds"), reader.number());
  if (reader.peek_key("poisson_n")) {
    map.poisson_n = parse_int<std::uint64_t>(header_value(reader, "poisson_n"), reader.number());
  }
  map.rejected = parse_int<std::uint64_t>(header_value(reader, "rejected"), reader.number());
  if (reader.peek_key("exact")) {
    if (header_value(reader, "exact") != "true") throw FormatError("exact flag must be 'true'");
    map.exact = true;
  }
  if (map.exact != !map.distribution.has_value()) {
    throw FormatError("dist=none is reserved for exact census files");
  }

  const ClassKey* previous = nullptr;
  while (reader.next(line)) {
    std::vector<std::string_view> tokens;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t end = std::min(line.find(' ', start), line.size());
      tokens.push_back(line.substr(start, end - start));
      start = end + 1;
    }
    if (tokens.size() != static_cast<std::size_t>(map.n) + 1) {
      throw FormatError("line " + std::to_string(reader.number()) + ": expected " +
                        std::to_string(map.n + 1) + " fields");
    }
    ClassKey key(map.n);
    for (int i = 0; i < map.n; ++i) key[i] = parse_int<std::int64_t>(tokens[i], reader.number());
    const auto count = parse_int<std::uint64_t>(tokens.back(), reader.number());
    if (previous != nullptr && !(key < *previous)) {
      throw IntegrityError("line " + std::to_string(reader.number()) +
                           ": keys not in strictly descending order");
    }
    if (map.exact && satisfies_chow_invariants(key) && OrbitCount{count} != orbit_size(key)) {
      throw IntegrityError("census count differs from the class size");
    }
    previous = &map.counts.emplace(std::move(key), count).first->first;
  }
  check_integrity(map);
  return map;
}

void save(const ClassMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::string text = to_text(map);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

ClassMap load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return from_text(buffer.str());
}

void merge_files(std::span<const std::filesystem::path> paths, const std::filesystem::path& out) {
  std::vector<ClassMap> maps;
  maps.reserve(paths.size());
  for (const auto& path : paths) maps.push_back(load(path));
  save(merge(maps), out);
}

}  // namespace pufent
