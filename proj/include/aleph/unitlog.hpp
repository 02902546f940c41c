#pragma once

#include "aleph/view.hpp"

#include <filesystem>
#include <string>

namespace aleph::dag {

// Flat unit log: length-prefixed (u32 LE) canonical encodings in insertion
// order, so any prefix is parent-closed and re-importable as is.
Bytes export_units(const LocalView& view);
std::vector<Unit> parse_unit_log(std::span<const uint8_t> bytes);  // throws on malformed input

// Inserts every record in order; stops at the first non-inserted result.
// Returns the number of units inserted (duplicates count as progress).
size_t import_units(LocalView& view, std::span<const uint8_t> bytes);

// Debug dump, one JSON object per line: digest, creator, parents, level, prime.
std::string units_debug_jsonl(const LocalView& view);

void write_unit_log(const std::filesystem::path& file, const LocalView& view);
std::vector<Unit> read_unit_log(const std::filesystem::path& file);

}  // namespace aleph::dag
