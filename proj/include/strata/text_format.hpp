#pragma once

// JSON text format for incidence structures and correspondence families.
// Integers that fit in 64 bits are written as numbers, larger ones as
// decimal strings; both spellings are accepted on input. Output is
// deterministic: object keys, strata, edges and family entries are sorted.

#include "strata/correspondence.hpp"
#include "strata/strata_model.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace strata {

class ParseError : public std::runtime_error {
 public:
  /// `line` is 0 when the error is not tied to a source line.
  ParseError(const std::string& message, std::string field, std::size_t line = 0);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

IncidenceStructure parse_structure(const std::string& text);
std::string write_structure(const IncidenceStructure& s);

/// Classes are attached to the presentations of `s`. A document with a
/// top-level "levels" list and no "sheets" is read as one sheet.
CorrespondenceFamily parse_family(const std::string& text, const IncidenceStructure& s);
std::string write_family(const CorrespondenceFamily& f);

/// Throws ParseError (field "file") when the file cannot be read.
std::string read_file(const std::filesystem::path& path);
/// Throws std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace strata
