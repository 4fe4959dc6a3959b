#pragma once

// Line-oriented class map files:
//
//   #pufclassmap v1
//   n=<int>
//   dist=<gaussian|uniform|laplace|none>
//   seed=<u64>
//   shards=<int>
//   rounds=<int>
//   poisson_n=<int>      (Poissonized runs only)
//   rejected=<int>
//   exact=true           (census files only; dist is then none)
//   <p1> <p2> ... <pn> <count>
//
// Body lines are canonical keys in strictly descending lexicographic order.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "pufent/sampler.hpp"

namespace pufent {

inline constexpr std::string_view kClassMapMagic = "#pufclassmap";
inline constexpr std::string_view kClassMapVersion = "v1";

std::string to_text(const ClassMap& map);

/// Parses and validates. Throws FormatError, VersionError or IntegrityError.
ClassMap from_text(std::string_view text);

/// Throws IoError.
void save(const ClassMap& map, const std::filesystem::path& path);

ClassMap load(const std::filesystem::path& path);

void merge_files(std::span<const std::filesystem::path> paths, const std::filesystem::path& out);

}  // namespace pufent
