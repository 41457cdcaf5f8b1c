#pragma once

#include <filesystem>
#include <string>

#include "cellbench/core/table.hpp"

namespace cellbench::harness {

inline constexpr int kInterchangeVersion = 1;

/// Embedding interchange triplet for a path prefix `<dir>/<name>`:
///   <name>.manifest.json  {"version":1,"n_items":N,"dim":D,"dtype":"f32le","ids":[...],"meta_keys":[...]}
///   <name>.f32            N*D float32 little-endian, row-major
///   <name>.meta.csv       item_id,key,value (optional when meta_keys is empty)
/// A path ending in ".manifest.json" is accepted as the prefix too.
std::filesystem::path table_prefix(const std::filesystem::path &path);

/// Validates while reading; every failure is a DataError whose code names
/// the problem (MissingFile, BadFormat, UnsupportedVersion, CountMismatch,
/// DimMismatch, PayloadSize, NonFinite, DuplicateId).
EmbeddingTable read_table(const std::filesystem::path &path);

// Validates first; writes each file atomically.
void write_table(const EmbeddingTable &table, const std::filesystem::path &path);

std::string encode_manifest(const EmbeddingTable &table);
std::string encode_payload(const EmbeddingTable &table);
std::string encode_meta(const EmbeddingTable &table);

} // namespace cellbench::harness
