#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "vismca/core/model.hpp"

namespace vismca {

/// Parses dataset JSON into unvalidated parts. Throws Error(ParseError) on
/// malformed JSON or a document that does not match the schema.
DatasetParts parse_dataset(std::string_view json_text);

/// Parse + validate. Throws Error(ParseError) or ValidationError.
Dataset ingest_dataset(std::string_view json_text);
Dataset ingest_dataset(std::istream& in);
Dataset ingest_dataset_file(const std::filesystem::path& path);

/// Inverse of ingest_dataset: ingest_dataset(serialize_dataset(d)) == d.
std::string serialize_dataset(const DatasetParts& parts);
std::string serialize_dataset(const Dataset& dataset);

}  // namespace vismca
